//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Adjacency is kept twice: as bitset rows for constant-time adjacency and
//! independence tests, and as sorted neighbour lists for degree iteration.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    rows: Vec<FixedBitSet>,
    neighbors: Vec<Vec<usize>>,
    max_degree: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.neighbors == other.neighbors
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        Ok(Self::from_rows(rows))
    }

    fn from_rows(rows: Vec<FixedBitSet>) -> Self {
        let n = rows.len();
        let neighbors: Vec<Vec<usize>> = rows.iter().map(|r| r.ones().collect()).collect();
        let max_degree = neighbors.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            n,
            rows,
            neighbors,
            max_degree,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_rows(vec![FixedBitSet::with_capacity(n); n])
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph edges are valid")
    }

    /// The cycle `0 - 1 - ... - (n-1) - 0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    #[inline]
    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| !self.adjacent(u, v)))
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut rows = vec![FixedBitSet::with_capacity(vertices.len()); vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.neighbors[v] {
                let j = local[w];
                if j != usize::MAX {
                    rows[i].insert(j);
                }
            }
        }
        Self::from_rows(rows)
    }

    /// Maximum degree of the subgraph induced on `vertices`.
    pub fn induced_max_degree(&self, vertices: &[usize]) -> usize {
        let mut mask = FixedBitSet::with_capacity(self.n);
        for &v in vertices {
            mask.insert(v);
        }
        vertices
            .iter()
            .map(|&v| self.rows[v].intersection_count(&mask))
            .max()
            .unwrap_or(0)
    }

    /// The same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        let n = self.n + extra;
        let mut rows = Vec::with_capacity(n);
        for r in &self.rows {
            let mut r = r.clone();
            r.grow(n);
            rows.push(r);
        }
        rows.resize(n, FixedBitSet::with_capacity(n));
        Self::from_rows(rows)
    }
}
