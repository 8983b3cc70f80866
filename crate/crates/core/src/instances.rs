//! Instance generators. Every generated instance is checked against its
//! declared constraints before it is returned.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum InstanceSpec {
    /// `C_length` with consecutive classes of `class_size` vertices.
    Cycle { length: usize, class_size: usize },
    /// `C_{3m}` with a uniformly random partition into `triangles` triples.
    CyclesPlusTriangles { triangles: usize },
    /// Random graph with `Δ <= max_degree` and a random balanced partition.
    RandomBoundedDegree { n: usize, max_degree: usize, k: usize },
    /// Random `k`-partite graph on classes of `class_size` with minimum
    /// degree at least `min_degree`.
    Kpartite { k: usize, class_size: usize, min_degree: usize },
    /// A random near-perfect matching between distinct classes (`Δ <= 1`).
    Matching { k: usize, class_size: usize },
    Empty { k: usize, class_size: usize },
}

pub fn generate<R: Rng + ?Sized>(spec: &InstanceSpec, rng: &mut R) -> Result<(Graph, Partition)> {
    let infeasible = |msg: String| Err(Error::InfeasibleSpec(msg));
    let (g, p) = match *spec {
        InstanceSpec::Cycle { length, class_size } => {
            if length < 3 || class_size == 0 || length % class_size != 0 {
                return infeasible(format!("cycle of length {length} with classes of size {class_size}"));
            }
            (Graph::cycle(length)?, Partition::consecutive(length / class_size, class_size)?)
        }
        InstanceSpec::CyclesPlusTriangles { triangles } => {
            if triangles == 0 {
                return infeasible("at least one triangle is required".into());
            }
            (Graph::cycle(3 * triangles)?, random_equal_partition(3 * triangles, 3, rng)?)
        }
        InstanceSpec::RandomBoundedDegree { n, max_degree, k } => {
            if k == 0 || n == 0 || n % k != 0 {
                return infeasible(format!("{n} vertices do not split into {k} equal classes"));
            }
            let g = random_bounded_degree(n, max_degree, rng)?;
            (g, random_equal_partition(n, n / k, rng)?)
        }
        InstanceSpec::Kpartite { k, class_size, min_degree } => {
            if k < 2 || class_size == 0 || min_degree > (k - 1) * class_size {
                return infeasible(format!(
                    "minimum degree {min_degree} exceeds the {}-partite maximum {}",
                    k,
                    k.saturating_sub(1) * class_size
                ));
            }
            let p = Partition::consecutive(k, class_size)?;
            (kpartite_min_degree(&p, min_degree, rng)?, p)
        }
        InstanceSpec::Matching { k, class_size } => {
            if k == 0 || class_size == 0 {
                return infeasible("empty instance".into());
            }
            let p = Partition::consecutive(k, class_size)?;
            let seed = rng.gen();
            (perfect_matching_graph(&p, seed)?, p)
        }
        InstanceSpec::Empty { k, class_size } => {
            if k == 0 || class_size == 0 {
                return infeasible("empty instance".into());
            }
            (Graph::empty(k * class_size), Partition::consecutive(k, class_size)?)
        }
    };
    check(spec, &g, &p)?;
    Ok((g, p))
}

fn check(spec: &InstanceSpec, g: &Graph, p: &Partition) -> Result<()> {
    let ok = match *spec {
        InstanceSpec::Cycle { length, class_size } => g.n() == length && p.r() == class_size,
        InstanceSpec::CyclesPlusTriangles { triangles } => g.n() == 3 * triangles && p.r() == 3,
        InstanceSpec::RandomBoundedDegree { n, max_degree, k } => g.n() == n && g.max_degree() <= max_degree && p.k() == k,
        InstanceSpec::Kpartite { k, class_size, min_degree } => {
            g.min_degree() >= min_degree
                && p.k() == k
                && p.r() == class_size
                && g.edges().all(|(u, v)| p.class_of(u) != p.class_of(v))
        }
        InstanceSpec::Matching { .. } => {
            g.max_degree() <= 1 && g.edges().all(|(u, v)| p.class_of(u) != p.class_of(v))
        }
        InstanceSpec::Empty { .. } => g.edge_count() == 0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InfeasibleSpec(format!("generated instance violates {spec:?}")))
    }
}

/// Uniformly random partition of `0..n` into classes of size `r`.
pub fn random_equal_partition<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Result<Partition> {
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::InfeasibleSpec(format!("{n} vertices do not split into classes of size {r}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Partition::new(n, order.chunks(r).map(<[usize]>::to_vec).collect())
}

/// Random graph with maximum degree at most `max_degree`: random pairs are
/// added while both ends have spare degree, giving a near-regular graph.
pub fn random_bounded_degree<R: Rng + ?Sized>(n: usize, max_degree: usize, rng: &mut R) -> Result<Graph> {
    let mut degree = vec![0usize; n];
    let mut edges = std::collections::HashSet::new();
    if n >= 2 {
        for _ in 0..4 * n * max_degree {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v || degree[u] >= max_degree || degree[v] >= max_degree {
                continue;
            }
            if edges.insert((u.min(v), u.max(v))) {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Graph::new(n, edges)
}

/// Complete `k`-partite graph thinned by removing cross edges in random
/// order whenever both ends stay above `min_degree`.
fn kpartite_min_degree<R: Rng + ?Sized>(p: &Partition, min_degree: usize, rng: &mut R) -> Result<Graph> {
    let n = p.n();
    let mut cross = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if p.class_of(u) != p.class_of(v) {
                cross.push((u, v));
            }
        }
    }
    let mut degree = vec![(p.k() - 1) * p.r(); n];
    cross.shuffle(rng);
    let mut kept = Vec::with_capacity(cross.len());
    for (u, v) in cross {
        if degree[u] > min_degree && degree[v] > min_degree {
            degree[u] -= 1;
            degree[v] -= 1;
        } else {
            kept.push((u, v));
        }
    }
    kept.sort_unstable();
    Graph::new(n, kept)
}

/// A random matching (`Δ <= 1`) whose edges join different classes; it is
/// perfect whenever `n` is even and there are at least two classes.
///
/// Vertices are listed class by class (classes and members in random order)
/// and position `i` is paired with position `i + n/2`. No class spans more
/// than `n/2` consecutive positions, so the two ends never share a class.
pub fn perfect_matching_graph(p: &Partition, seed: u64) -> Result<Graph> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<Vec<usize>> = p.iter().map(<[usize]>::to_vec).collect();
    classes.shuffle(&mut rng);
    for c in &mut classes {
        c.shuffle(&mut rng);
    }
    let order: Vec<usize> = classes.concat();
    let half = order.len() / 2;
    let edges = (0..half)
        .map(|i| (order[i], order[i + half]))
        .filter(|&(u, v)| p.class_of(u) != p.class_of(v));
    Graph::new(p.n(), edges)
}
