//! Perfect `K_k`-tilings of `k`-partite graphs via the `k`-partite
//! complement: an independent transversal of the complement is a transversal
//! clique of the original graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::pipeline::{strong_colouring, PipelineConfig, PipelineTrace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    /// One vertex per class, in class order.
    pub cliques: Vec<Vec<usize>>,
    pub trace: PipelineTrace,
}

/// Cross-class non-edges of `g` become edges; pairs inside a class stay
/// non-adjacent.
pub fn kpartite_complement(g: &Graph, p: &Partition) -> Result<Graph> {
    if let Some((u, v)) = g.edges().find(|&(u, v)| p.class_of(u) == p.class_of(v)) {
        return Err(Error::InvalidGraph(format!("edge {u}-{v} lies inside a class")));
    }
    let n = g.n();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if p.class_of(u) != p.class_of(v) && !g.adjacent(u, v) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Cliques are disjoint transversals of `p`, pairwise adjacent in `g`,
/// covering every vertex.
pub fn verify_tiling(g: &Graph, p: &Partition, cliques: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; g.n()];
    let all_valid = cliques.iter().all(|c| {
        c.len() == p.k()
            && c.iter().enumerate().all(|(i, &v)| v < g.n() && p.class_of(v) == i)
            && c.iter()
                .enumerate()
                .all(|(i, &u)| c[i + 1..].iter().all(|&v| g.adjacent(u, v)))
            && c.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    });
    all_valid && seen.iter().all(|&s| s)
}

/// Runs the strong colouring pipeline on the `k`-partite complement and
/// reads every independent transversal back as a clique of `g`.
pub fn find_perfect_kk_tiling(g: &Graph, p: &Partition, epsilon: f64, config: &PipelineConfig) -> Result<Tiling> {
    let h = kpartite_complement(g, p)?;
    let colouring = strong_colouring(&h, p, epsilon, config)?;
    let cliques: Vec<Vec<usize>> = colouring.transversals.into_iter().map(|t| t.into_vec()).collect();
    if !verify_tiling(g, p, &cliques) {
        return Err(Error::PipelineFailure("tiling failed its certificate check".into()));
    }
    Ok(Tiling {
        cliques,
        trace: colouring.trace,
    })
}
