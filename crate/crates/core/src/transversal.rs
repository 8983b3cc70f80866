//! Transversals and the partition-into-independent-transversals certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Classes, Partition};

/// One vertex per class; `vertices[i]` lies in class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transversal {
    vertices: Vec<usize>,
}

impl Transversal {
    /// Checks that position `i` is drawn from class `i`.
    pub fn new(vertices: Vec<usize>, classes: &Classes) -> Result<Self> {
        if vertices.len() != classes.k() {
            return Err(Error::InvalidPartition(format!(
                "transversal has {} vertices for {} classes",
                vertices.len(),
                classes.k()
            )));
        }
        for (i, &v) in vertices.iter().enumerate() {
            if classes.class_of(v) != Some(i) {
                return Err(Error::InvalidVertex(v));
            }
        }
        Ok(Transversal { vertices })
    }

    /// Assembles a transversal from class-indexed picks without validation.
    pub(crate) fn from_vec(vertices: Vec<usize>) -> Self {
        Transversal { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_independent(&self, g: &Graph) -> bool {
        g.is_independent(&self.vertices)
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.vertices
    }

    /// Relabels through a local-to-global vertex map.
    pub fn map(&self, global: &[usize]) -> Transversal {
        Transversal {
            vertices: self.vertices.iter().map(|&v| global[v]).collect(),
        }
    }
}

/// Outcome of [`verify_it_partition`]; `problems` lists every violation found.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItPartitionReport {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Checks that `cover` consists of pairwise disjoint independent transversals
/// of `p` whose union is every vertex of `g`.
pub fn verify_it_partition(g: &Graph, p: &Partition, cover: &[Transversal]) -> ItPartitionReport {
    let mut problems = Vec::new();
    if g.n() != p.n() {
        problems.push(format!("graph has {} vertices, partition covers {}", g.n(), p.n()));
        return ItPartitionReport { valid: false, problems };
    }
    let mut seen = vec![usize::MAX; g.n()];
    for (t, tr) in cover.iter().enumerate() {
        let vs = tr.vertices();
        if vs.len() != p.k() {
            problems.push(format!("transversal {t} has {} vertices, expected {}", vs.len(), p.k()));
            continue;
        }
        let mut hit = vec![false; p.k()];
        for &v in vs {
            if v >= g.n() {
                problems.push(format!("transversal {t} contains unknown vertex {v}"));
                continue;
            }
            let c = p.class_of(v);
            if hit[c] {
                problems.push(format!("transversal {t} meets class {c} twice"));
            }
            hit[c] = true;
            if seen[v] != usize::MAX {
                problems.push(format!("vertex {v} lies in transversals {} and {t}", seen[v]));
            }
            seen[v] = t;
        }
        for (i, &u) in vs.iter().enumerate() {
            for &w in &vs[i + 1..] {
                if u < g.n() && w < g.n() && g.adjacent(u, w) {
                    problems.push(format!("transversal {t} contains edge {u}-{w}"));
                }
            }
        }
    }
    let missing = seen.iter().filter(|&&s| s == usize::MAX).count();
    if missing > 0 {
        problems.push(format!("{missing} vertices are not covered"));
    }
    ItPartitionReport {
        valid: problems.is_empty(),
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transversal {
        Transversal::from_vec(v.to_vec())
    }

    #[test]
    fn empty_graph_pairs() {
        // a, b | c, d
        let g = Graph::empty(4);
        let p = Partition::consecutive(2, 2).unwrap();
        assert!(verify_it_partition(&g, &p, &[t(&[0, 2]), t(&[1, 3])]).valid);
        let bad = verify_it_partition(&g, &p, &[t(&[0, 2]), t(&[0, 3])]);
        assert!(!bad.valid);
        assert!(bad.problems.iter().any(|m| m.contains("lies in transversals")));
    }

    #[test]
    fn c6_position_matching() {
        let g = Graph::cycle(6).unwrap();
        let p = Partition::consecutive(2, 3).unwrap();
        assert!(verify_it_partition(&g, &p, &[t(&[0, 3]), t(&[1, 4]), t(&[2, 5])]).valid);
        // {3, 4} is a cycle edge (labels 3-4 -> ids 2-3)
        let r = verify_it_partition(&g, &p, &[t(&[2, 3]), t(&[1, 4]), t(&[0, 5])]);
        assert!(!r.valid);
    }

    #[test]
    fn constructor_checks_positions() {
        let p = Partition::consecutive(2, 2).unwrap();
        assert!(Transversal::new(vec![0, 2], p.classes()).is_ok());
        assert!(Transversal::new(vec![2, 0], p.classes()).is_err());
        assert!(Transversal::new(vec![0], p.classes()).is_err());
    }
}
