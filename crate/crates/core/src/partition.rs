//! Vertex classes, equal-size partitions, and legality/balance predicates.

use crate::error::{Error, Result};

/// A family of pairwise disjoint vertex classes over `0..n`.
///
/// Classes may have different sizes and need not cover every vertex; the
/// shrunken classes used when searching for pinned transversals are of this
/// kind. Members of each class are kept in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    classes: Vec<Vec<usize>>,
    class_of: Vec<Option<usize>>,
}

impl Classes {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![None; n];
        let mut classes = classes;
        for (i, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n {
                    return Err(Error::InvalidVertex(v));
                }
                if let Some(j) = class_of[v] {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in classes {j} and {i}"
                    )));
                }
                class_of[v] = Some(i);
            }
        }
        Ok(Classes { classes, class_of })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter().map(Vec::as_slice)
    }

    /// Number of vertex ids the classes are defined over.
    pub fn universe(&self) -> usize {
        self.class_of.len()
    }

    #[inline]
    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.class_of.get(v).copied().flatten()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn into_inner(self) -> Vec<Vec<usize>> {
        self.classes
    }
}

/// A partition of `0..n` into `k >= 1` classes of equal size `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    classes: Classes,
    r: usize,
}

impl Partition {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one class".into()));
        }
        let r = classes[0].len();
        if r == 0 {
            return Err(Error::InvalidPartition("classes must be non-empty".into()));
        }
        if let Some((i, c)) = classes.iter().enumerate().find(|(_, c)| c.len() != r) {
            return Err(Error::InvalidPartition(format!(
                "class {i} has size {} but class 0 has size {r}",
                c.len()
            )));
        }
        let classes = Classes::new(n, classes)?;
        if let Some(v) = (0..n).find(|&v| classes.class_of(v).is_none()) {
            return Err(Error::InvalidPartition(format!("vertex {v} is in no class")));
        }
        Ok(Partition { classes, r })
    }

    /// Classes `{0..r}, {r..2r}, ...` over `k * r` vertices.
    pub fn consecutive(k: usize, r: usize) -> Result<Self> {
        Self::new(k * r, (0..k).map(|i| (i * r..(i + 1) * r).collect()).collect())
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.classes.k()
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.k() * self.r
    }

    #[inline]
    pub fn class(&self, i: usize) -> &[usize] {
        self.classes.class(i)
    }

    /// Class index of `v`. Panics if `v` is not a vertex.
    #[inline]
    pub fn class_of(&self, v: usize) -> usize {
        self.classes.class_of(v).expect("vertex of a partition")
    }

    pub fn classes(&self) -> &Classes {
        &self.classes
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter()
    }

    /// Restricts the partition to `keep` (which must be balanced) and relabels
    /// the kept vertices densely. Returns the new partition together with the
    /// local-to-global vertex map; local ids follow class order.
    pub fn restrict(&self, keep: &[usize]) -> Result<(Partition, Vec<usize>)> {
        let mut per_class = vec![Vec::new(); self.k()];
        for &v in keep {
            let c = self.classes.class_of(v).ok_or(Error::InvalidVertex(v))?;
            per_class[c].push(v);
        }
        let mut global = Vec::with_capacity(keep.len());
        let mut local_classes = Vec::with_capacity(self.k());
        for mut members in per_class {
            members.sort_unstable();
            let start = global.len();
            global.extend_from_slice(&members);
            local_classes.push((start..global.len()).collect());
        }
        let p = Partition::new(global.len(), local_classes)?;
        Ok((p, global))
    }
}

/// A sorted vertex set together with its per-class intersection counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<usize>,
    counts: Vec<usize>,
}

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>, p: &Partition) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let mut counts = vec![0; p.k()];
        for &v in &members {
            let c = p.classes().class_of(v).ok_or(Error::InvalidVertex(v))?;
            counts[c] += 1;
        }
        Ok(VertexSet { members, counts })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_legal(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    pub fn is_balanced(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

/// True iff `s` meets every class at most once.
pub fn is_legal(s: &[usize], p: &Partition) -> Result<bool> {
    Ok(VertexSet::new(s.iter().copied(), p)?.is_legal())
}

/// True iff `s` meets every class equally often.
pub fn is_balanced(s: &[usize], p: &Partition) -> Result<bool> {
    Ok(VertexSet::new(s.iter().copied(), p)?.is_balanced())
}
