use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Cover;
use crate::error::{Error, Result};
use crate::fractional::{solve_fractional_weighting_with, FractionalOptions, FractionalWeighting, SolveMode};
use crate::graph::Graph;
use crate::partition::Partition;

/// A `k`-uniform hypergraph without repeated edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub mean_degree: f64,
    pub max_codegree: usize,
}

impl Hypergraph {
    /// Repeated edges (as vertex sets) are dropped, keeping the first.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(edges.len());
        let mut incidence = vec![Vec::new(); n];
        for e in edges {
            if e.len() != k {
                return Err(Error::InvalidGraph(format!("hyperedge of size {} in a {k}-uniform hypergraph", e.len())));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidVertex(v));
            }
            let mut key = e.clone();
            key.sort_unstable();
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph("hyperedge with a repeated vertex".into()));
            }
            if seen.insert(key) {
                for &v in &e {
                    incidence[v].push(kept.len());
                }
                kept.push(e);
            }
        }
        Ok(Hypergraph {
            n,
            k,
            edges: kept,
            incidence,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.incidence[u]
            .iter()
            .filter(|&&e| self.edges[e].contains(&v))
            .count()
    }

    pub fn stats(&self) -> HypergraphStats {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.edges {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    *pairs.entry((u.min(v), u.max(v))).or_default() += 1;
                }
            }
        }
        HypergraphStats {
            vertices: self.n,
            edges: self.edges.len(),
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            mean_degree: if self.n == 0 {
                0.0
            } else {
                degrees.iter().sum::<usize>() as f64 / self.n as f64
            },
            max_codegree: pairs.values().copied().max().unwrap_or(0),
        }
    }
}

/// Source of fractional weightings for the restricted instances `G[R(j)]`.
pub trait WeightingProvider {
    fn weighting(&self, g: &Graph, p: &Partition) -> Result<FractionalWeighting>;
}

/// Exact rational weightings from the transversal incidence system.
#[derive(Clone, Copy, Debug)]
pub struct ExactLp {
    pub cap: u64,
}

impl WeightingProvider for ExactLp {
    fn weighting(&self, g: &Graph, p: &Partition) -> Result<FractionalWeighting> {
        solve_fractional_weighting_with(
            g,
            p,
            FractionalOptions {
                mode: SolveMode::Exact,
                cap: self.cap,
            },
        )
    }
}

impl<F> WeightingProvider for F
where
    F: Fn(&Graph, &Partition) -> Result<FractionalWeighting>,
{
    fn weighting(&self, g: &Graph, p: &Partition) -> Result<FractionalWeighting> {
        self(g, p)
    }
}

/// The random transversal hypergraph with, per edge, the cover set it came from.
#[derive(Clone, Debug)]
pub struct TransversalHypergraph {
    pub hypergraph: Hypergraph,
    pub origin: Vec<usize>,
    pub skipped: Vec<usize>,
}

/// For every `R(j)`, weights the independent transversals of `G[R(j)]` and
/// keeps each as an edge with probability equal to its weight.
///
/// Fails with [`Error::RestrictedInfeasible`] on the first set without a
/// feasible weighting.
pub fn build_transversal_hypergraph<R: Rng + ?Sized>(
    g: &Graph,
    p: &Partition,
    cover: &Cover,
    provider: &dyn WeightingProvider,
    rng: &mut R,
) -> Result<TransversalHypergraph> {
    build(g, p, cover, provider, rng, true)
}

/// As [`build_transversal_hypergraph`], but sets without a feasible
/// weighting contribute no edges and are listed in `skipped`.
pub fn build_transversal_hypergraph_lenient<R: Rng + ?Sized>(
    g: &Graph,
    p: &Partition,
    cover: &Cover,
    provider: &dyn WeightingProvider,
    rng: &mut R,
) -> Result<TransversalHypergraph> {
    build(g, p, cover, provider, rng, false)
}

fn build<R: Rng + ?Sized>(
    g: &Graph,
    p: &Partition,
    cover: &Cover,
    provider: &dyn WeightingProvider,
    rng: &mut R,
    strict: bool,
) -> Result<TransversalHypergraph> {
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    let mut skipped = Vec::new();
    for j in 0..cover.len() {
        let members = cover.members(j);
        let sub = p
            .restrict(&members)
            .ok()
            .filter(|(sp, _)| sp.k() == p.k());
        let Some((sub_p, global)) = sub else {
            if strict {
                return Err(Error::RestrictedInfeasible(j));
            }
            skipped.push(j);
            continue;
        };
        let sub_g = g.induced(&global);
        let w = match provider.weighting(&sub_g, &sub_p) {
            Ok(w) => w,
            Err(Error::Infeasible(_) | Error::CapExceeded(_)) if !strict => {
                skipped.push(j);
                continue;
            }
            Err(Error::Infeasible(_) | Error::CapExceeded(_)) => return Err(Error::RestrictedInfeasible(j)),
            Err(e) => return Err(e),
        };
        for (i, t) in w.transversals.iter().enumerate() {
            let prob = w.weights.as_f64(i);
            if prob > 0.0 && rng.gen::<f64>() < prob {
                edges.push(t.map(&global).into_vec());
                origin.push(j);
            }
        }
    }
    // Hypergraph::new drops repeats; keep origins aligned with the survivors.
    let mut seen = HashSet::new();
    let (edges, origin): (Vec<_>, Vec<_>) = edges
        .into_iter()
        .zip(origin)
        .filter(|(e, _)| {
            let mut key = e.clone();
            key.sort_unstable();
            seen.insert(key)
        })
        .unzip();
    Ok(TransversalHypergraph {
        hypergraph: Hypergraph::new(g.n(), p.k(), edges)?,
        origin,
        skipped,
    })
}
