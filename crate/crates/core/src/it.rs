//! Finding, counting and certifying independent transversals.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Classes, Partition};
use crate::transversal::Transversal;

/// Largest class count accepted by [`check_haxell_condition`].
pub const HAXELL_CLASS_LIMIT: usize = 25;

/// Default node budget for the backtracking searches.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Default cap on the number of transversals an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Counts search nodes and fails once the limit is passed.
#[derive(Clone, Debug)]
pub struct NodeBudget {
    limit: u64,
    used: u64,
}

impl NodeBudget {
    pub fn new(limit: u64) -> Self {
        NodeBudget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::Timeout(self.limit))
        } else {
            Ok(())
        }
    }
}

impl Default for NodeBudget {
    fn default() -> Self {
        Self::new(DEFAULT_NODE_BUDGET)
    }
}

/// A class subset whose union is too small for Haxell's condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaxellViolation {
    /// Class indices, ascending.
    pub classes: Vec<usize>,
    pub union_size: usize,
    /// `(2|I| - 2) * max_degree`.
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaxellReport {
    pub satisfied: bool,
    pub max_degree: usize,
    pub witness_violation: Option<HaxellViolation>,
}

/// Checks `|V_I| > (2|I| - 2) Δ(G)` for every nonempty class subset `I`.
///
/// Subsets are visited in Gray-code order; the first violation found is the
/// witness. Classes may have unequal sizes.
pub fn check_haxell_condition(g: &Graph, classes: &Classes) -> Result<HaxellReport> {
    let k = classes.k();
    if k > HAXELL_CLASS_LIMIT {
        return Err(Error::TooManyClasses {
            k,
            limit: HAXELL_CLASS_LIMIT,
        });
    }
    let delta = g.max_degree();
    let sizes = classes.sizes();
    let mut mask: u32 = 0;
    let mut union = 0usize;
    for step in 1u32..(1u32 << k) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            union += sizes[bit];
        } else {
            union -= sizes[bit];
        }
        let size = mask.count_ones() as usize;
        let bound = (2 * size - 2) * delta;
        if union <= bound {
            return Ok(HaxellReport {
                satisfied: false,
                max_degree: delta,
                witness_violation: Some(HaxellViolation {
                    classes: (0..k).filter(|&i| mask >> i & 1 == 1).collect(),
                    union_size: union,
                    bound,
                }),
            });
        }
    }
    Ok(HaxellReport {
        satisfied: true,
        max_degree: delta,
        witness_violation: None,
    })
}

/// Exhaustive search for an independent transversal of `classes`.
///
/// At every node the unfilled class with the fewest candidates compatible
/// with the partial selection is branched on; candidates are tried in
/// ascending id order, so the result is deterministic.
pub fn find_independent_transversal(
    g: &Graph,
    classes: &Classes,
    budget: &mut NodeBudget,
) -> Result<Option<Transversal>> {
    let lists: Vec<&[usize]> = classes.iter().collect();
    Ok(search_it(g, &lists, budget)?.map(Transversal::from_vec))
}

fn search_it(g: &Graph, classes: &[&[usize]], budget: &mut NodeBudget) -> Result<Option<Vec<usize>>> {
    if classes.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    let mut state = ItSearch {
        g,
        classes,
        chosen: vec![usize::MAX; classes.len()],
        blocked: vec![0u32; g.n()],
    };
    if state.dfs(classes.len(), budget)? {
        Ok(Some(state.chosen))
    } else {
        Ok(None)
    }
}

struct ItSearch<'a> {
    g: &'a Graph,
    classes: &'a [&'a [usize]],
    chosen: Vec<usize>,
    blocked: Vec<u32>,
}

impl ItSearch<'_> {
    fn dfs(&mut self, remaining: usize, budget: &mut NodeBudget) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        budget.tick()?;
        let mut best: Option<(usize, usize)> = None;
        for (i, class) in self.classes.iter().enumerate() {
            if self.chosen[i] != usize::MAX {
                continue;
            }
            let free = class.iter().filter(|&&v| self.blocked[v] == 0).count();
            if free == 0 {
                return Ok(false);
            }
            if best.is_none_or(|(_, f)| free < f) {
                best = Some((i, free));
            }
        }
        let (ci, _) = best.expect("an unfilled class exists");
        for &v in self.classes[ci] {
            if self.blocked[v] != 0 {
                continue;
            }
            self.chosen[ci] = v;
            for &w in self.g.neighbors(v) {
                self.blocked[w] += 1;
            }
            let found = self.dfs(remaining - 1, budget)?;
            for &w in self.g.neighbors(v) {
                self.blocked[w] -= 1;
            }
            if found {
                return Ok(true);
            }
        }
        self.chosen[ci] = usize::MAX;
        Ok(false)
    }
}

/// Visits every independent transversal of `classes` in lexicographic order.
pub fn for_each_it<F>(g: &Graph, classes: &[&[usize]], mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn rec<F: FnMut(&[usize]) -> ControlFlow<()>>(
        g: &Graph,
        classes: &[&[usize]],
        picked: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        let depth = picked.len();
        if depth == classes.len() {
            return visit(picked);
        }
        for &v in classes[depth] {
            if picked.iter().any(|&u| g.adjacent(u, v)) {
                continue;
            }
            picked.push(v);
            let flow = rec(g, classes, picked, visit);
            picked.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    let mut picked = Vec::with_capacity(classes.len());
    let _ = rec(g, classes, &mut picked, &mut visit);
}

/// Shrinks every class other than `pin` by `N(v) ∪ N(v')` and by `exclude`.
fn shrunken_classes(
    g: &Graph,
    classes: &Classes,
    pin: usize,
    v: usize,
    v2: usize,
    exclude: Option<&FixedBitSet>,
) -> Result<Vec<Vec<usize>>> {
    if pin >= classes.k() {
        return Err(Error::Precondition(format!("pin class {pin} out of range")));
    }
    for x in [v, v2] {
        if classes.class_of(x) != Some(pin) {
            return Err(Error::InvalidVertex(x));
        }
    }
    Ok((0..classes.k())
        .filter(|&i| i != pin)
        .map(|i| {
            classes
                .class(i)
                .iter()
                .copied()
                .filter(|&w| !g.adjacent(v, w) && !g.adjacent(v2, w))
                .filter(|&w| exclude.is_none_or(|e| !e.contains(w)))
                .collect()
        })
        .collect())
}

/// An independent transversal `T` of the classes other than `pin` such that
/// `T + v` and `T + v2` are both independent transversals.
///
/// Position `i` of the result lies in the `i`-th non-pin class.
pub fn find_pinned_it(
    g: &Graph,
    classes: &Classes,
    pin: usize,
    v: usize,
    v2: usize,
    budget: &mut NodeBudget,
) -> Result<Transversal> {
    find_pinned_it_excluding(g, classes, pin, v, v2, None, budget)
}

pub(crate) fn find_pinned_it_excluding(
    g: &Graph,
    classes: &Classes,
    pin: usize,
    v: usize,
    v2: usize,
    exclude: Option<&FixedBitSet>,
    budget: &mut NodeBudget,
) -> Result<Transversal> {
    let shrunk = shrunken_classes(g, classes, pin, v, v2, exclude)?;
    let lists: Vec<&[usize]> = shrunk.iter().map(Vec::as_slice).collect();
    search_it(g, &lists, budget)?
        .map(Transversal::from_vec)
        .ok_or(Error::NotFound)
}

/// Exact number of transversals `T` of the non-pin classes with `T + v` and
/// `T + v2` both independent.
pub fn count_pinned_its(
    g: &Graph,
    classes: &Classes,
    pin: usize,
    v: usize,
    v2: usize,
    cap: u64,
) -> Result<u64> {
    let space = (0..classes.k())
        .filter(|&i| i != pin)
        .try_fold(1u64, |acc, i| acc.checked_mul(classes.class(i).len() as u64))
        .unwrap_or(u64::MAX);
    if space > cap {
        return Err(Error::CapExceeded(cap));
    }
    let shrunk = shrunken_classes(g, classes, pin, v, v2, None)?;
    let lists: Vec<&[usize]> = shrunk.iter().map(Vec::as_slice).collect();
    let mut count = 0u64;
    for_each_it(g, &lists, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

/// Maximum bipartite matching size by augmenting paths.
pub(crate) fn matching_size(left: usize, right: usize, compatible: impl Fn(usize, usize) -> bool) -> usize {
    fn augment(
        x: usize,
        right: usize,
        compatible: &impl Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [usize],
    ) -> bool {
        for y in 0..right {
            if seen[y] || !compatible(x, y) {
                continue;
            }
            seen[y] = true;
            if owner[y] == usize::MAX || augment(owner[y], right, compatible, seen, owner) {
                owner[y] = x;
                return true;
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; right];
    let mut size = 0;
    let mut seen = vec![false; right];
    for x in 0..left {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(x, right, &compatible, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

/// Exhaustive search for a partition of `V(G)` into independent transversals.
///
/// Colours are indexed by the vertices of class 0 in order, which removes the
/// `r!` relabelling symmetry. The remaining classes are placed one at a time,
/// each as a bijection onto the colours; after every placement the rest of the
/// current class must still admit a perfect matching, and after every class all
/// later classes must too. Returns `None` when no partition exists.
pub fn find_it_partition(g: &Graph, p: &Partition, budget: &mut NodeBudget) -> Result<Option<Vec<Transversal>>> {
    if g.n() != p.n() {
        return Err(Error::InvalidPartition(format!(
            "graph has {} vertices, partition covers {}",
            g.n(),
            p.n()
        )));
    }
    let r = p.r();
    let base = p.class(0);
    let mut search = PartitionSearch {
        g,
        p,
        colour: vec![vec![usize::MAX; r]; p.k()],
        blocked: base.iter().map(|&v| g.row(v).clone()).collect(),
    };
    search.colour[0] = (0..r).collect();
    if !search.future_feasible(1) {
        return Ok(None);
    }
    if !search.place_class(1, budget)? {
        return Ok(None);
    }
    let mut out = vec![Vec::with_capacity(p.k()); r];
    for (ci, class) in p.iter().enumerate() {
        for (x, &v) in class.iter().enumerate() {
            out[search.colour[ci][x]].push(v);
        }
    }
    Ok(Some(out.into_iter().map(Transversal::from_vec).collect()))
}

struct PartitionSearch<'a> {
    g: &'a Graph,
    p: &'a Partition,
    /// `colour[class][position]`.
    colour: Vec<Vec<usize>>,
    /// Vertices adjacent to some member of each colour.
    blocked: Vec<FixedBitSet>,
}

impl PartitionSearch<'_> {
    fn future_feasible(&self, from: usize) -> bool {
        let r = self.p.r();
        (from..self.p.k()).all(|ci| {
            let class = self.p.class(ci);
            matching_size(r, r, |x, c| !self.blocked[c].contains(class[x])) == r
        })
    }

    fn place_class(&mut self, ci: usize, budget: &mut NodeBudget) -> Result<bool> {
        if ci == self.p.k() {
            return Ok(true);
        }
        let r = self.p.r();
        let mut used = vec![false; r];
        self.place_vertex(ci, r, &mut used, budget)
    }

    fn place_vertex(&mut self, ci: usize, left: usize, used: &mut [bool], budget: &mut NodeBudget) -> Result<bool> {
        let class = self.p.class(ci);
        if left == 0 {
            let saved = self.blocked.clone();
            for (x, &v) in class.iter().enumerate() {
                self.blocked[self.colour[ci][x]].union_with(self.g.row(v));
            }
            let ok = self.future_feasible(ci + 1) && self.place_class(ci + 1, budget)?;
            if !ok {
                self.blocked = saved;
            }
            return Ok(ok);
        }
        budget.tick()?;
        let r = self.p.r();
        let options = |x: usize, used: &[bool]| -> Vec<usize> {
            (0..r)
                .filter(|&c| !used[c] && !self.blocked[c].contains(class[x]))
                .collect()
        };
        let (x, _) = (0..r)
            .filter(|&x| self.colour[ci][x] == usize::MAX)
            .map(|x| (x, options(x, used).len()))
            .min_by_key(|&(x, n)| (n, x))
            .expect("an unplaced vertex exists");
        let choices = options(x, used);
        for c in choices {
            self.colour[ci][x] = c;
            used[c] = true;
            let rest: Vec<usize> = (0..r).filter(|&y| self.colour[ci][y] == usize::MAX).collect();
            let free: Vec<usize> = (0..r).filter(|&d| !used[d]).collect();
            let feasible = matching_size(rest.len(), free.len(), |a, b| {
                !self.blocked[free[b]].contains(class[rest[a]])
            }) == rest.len();
            if feasible && self.place_vertex(ci, left - 1, used, budget)? {
                return Ok(true);
            }
            used[c] = false;
            self.colour[ci][x] = usize::MAX;
        }
        Ok(false)
    }
}

/// Repeatedly extracts independent transversals from the residual classes,
/// removing each one found, until `target` are found or none remains.
pub fn greedy_disjoint_its(
    g: &Graph,
    residual: &mut [Vec<usize>],
    target: usize,
    budget: &mut NodeBudget,
) -> Result<Vec<Transversal>> {
    let mut found = Vec::new();
    while found.len() < target {
        let lists: Vec<&[usize]> = residual.iter().map(Vec::as_slice).collect();
        let Some(t) = search_it(g, &lists, budget)? else {
            break;
        };
        for (class, v) in residual.iter_mut().zip(&t) {
            class.retain(|w| w != v);
        }
        found.push(Transversal::from_vec(t));
    }
    Ok(found)
}
