use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Hypergraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingParams {
    /// Coverage target used for reporting: `covered >= (1 - delta) n`.
    pub delta: f64,
    pub max_rounds: usize,
    pub bite_fraction: f64,
    pub stop_degree: Option<f64>,
}

impl Default for MatchingParams {
    fn default() -> Self {
        MatchingParams {
            delta: 0.05,
            max_rounds: 200,
            bite_fraction: 0.1,
            stop_degree: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// Indices into the hypergraph's edge list, pairwise disjoint.
    pub edges: Vec<usize>,
    pub covered: usize,
    pub rounds: usize,
    pub from_bites: usize,
    pub meets_target: bool,
}

/// Semi-random ("nibble") matching.
///
/// Each round keeps every surviving edge with probability
/// `bite_fraction / D`, where `D` is the current average degree over the
/// uncovered vertices that still lie in an edge; sampled edges that meet no
/// other sampled edge join the matching and their vertices are removed.
/// Rounds stop once `D` falls below `stop_degree` (default: the square root
/// of the initial average degree) or after `max_rounds`. A greedy pass then
/// repeatedly takes, at the uncovered vertex of least residual degree, the
/// incident edge of least total residual degree.
pub fn semi_random_matching<R: Rng + ?Sized>(h: &Hypergraph, params: &MatchingParams, rng: &mut R) -> Matching {
    let n = h.n();
    let mut covered = vec![false; n];
    let mut alive: Vec<usize> = (0..h.edges().len()).collect();
    let mut matched = Vec::new();

    let average_degree = |alive: &[usize], covered: &[bool]| {
        let mut touched = vec![false; n];
        for &e in alive {
            for &v in &h.edges()[e] {
                touched[v] = true;
            }
        }
        let active = touched.iter().zip(covered).filter(|(t, c)| **t && !**c).count();
        if active == 0 {
            0.0
        } else {
            (alive.len() * h.k()) as f64 / active as f64
        }
    };
    let initial = average_degree(&alive, &covered);
    let stop = params.stop_degree.unwrap_or_else(|| initial.sqrt());

    let mut rounds = 0;
    let mut hits = vec![0u32; n];
    while rounds < params.max_rounds && !alive.is_empty() {
        let d = average_degree(&alive, &covered);
        if d < stop || d == 0.0 {
            break;
        }
        rounds += 1;
        let prob = (params.bite_fraction / d).min(1.0);
        let bite: Vec<usize> = alive.iter().copied().filter(|_| rng.gen::<f64>() < prob).collect();
        for &e in &bite {
            for &v in &h.edges()[e] {
                hits[v] += 1;
            }
        }
        let accepted: Vec<usize> = bite
            .iter()
            .copied()
            .filter(|&e| h.edges()[e].iter().all(|&v| hits[v] == 1))
            .collect();
        for &e in &bite {
            for &v in &h.edges()[e] {
                hits[v] = 0;
            }
        }
        for &e in &accepted {
            for &v in &h.edges()[e] {
                covered[v] = true;
            }
        }
        matched.extend(accepted);
        alive.retain(|&e| h.edges()[e].iter().all(|&v| !covered[v]));
    }
    let from_bites = matched.len();

    // Greedy completion by least residual degree.
    let mut dead = vec![true; h.edges().len()];
    let mut degree = vec![0usize; n];
    for &e in &alive {
        dead[e] = false;
        for &v in &h.edges()[e] {
            degree[v] += 1;
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = (0..n)
        .filter(|&v| !covered[v] && degree[v] > 0)
        .map(|v| (degree[v], v))
        .collect();
    while let Some((_, v)) = queue.pop_first() {
        let choice = h
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| !dead[e])
            .min_by_key(|&e| (h.edges()[e].iter().map(|&u| degree[u]).sum::<usize>(), e));
        let Some(e) = choice else { continue };
        matched.push(e);
        for &u in &h.edges()[e] {
            covered[u] = true;
            queue.remove(&(degree[u], u));
        }
        for &u in &h.edges()[e] {
            for &f in h.incident(u) {
                if dead[f] {
                    continue;
                }
                dead[f] = true;
                for &w in &h.edges()[f] {
                    if !covered[w] {
                        queue.remove(&(degree[w], w));
                        degree[w] -= 1;
                        if degree[w] > 0 {
                            queue.insert((degree[w], w));
                        }
                    } else {
                        degree[w] -= 1;
                    }
                }
            }
        }
    }

    let covered_count = covered.iter().filter(|&&c| c).count();
    Matching {
        meets_target: covered_count as f64 >= (1.0 - params.delta) * n as f64 - 1e-9,
        edges: matched,
        covered: covered_count,
        rounds,
        from_bites,
    }
}

/// True iff the listed edges are pairwise disjoint.
pub fn is_matching(h: &Hypergraph, edges: &[usize]) -> bool {
    let mut used = vec![false; h.n()];
    edges
        .iter()
        .all(|&e| h.edges()[e].iter().all(|&v| !std::mem::replace(&mut used[v], true)))
}
