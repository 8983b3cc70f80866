//! Absorbing sets.
//!
//! An absorber for a balanced `k`-set `S` is a balanced `k²`-set `A`, disjoint
//! from `S`, such that both `G[A]` and `G[A ∪ S]` split into independent
//! transversals. A family of disjoint absorbers lets a small balanced leftover
//! be folded into independent transversals chunk by chunk.

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::it::{find_it_partition, find_pinned_it_excluding, NodeBudget, DEFAULT_NODE_BUDGET};
use crate::partition::{Partition, VertexSet};
use crate::transversal::Transversal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberParams {
    pub gamma: f64,
    /// Supersaturation density; carried for reporting only.
    pub eta: f64,
    /// Size budget: the family covers at most `alpha * n` vertices.
    pub alpha: f64,
    /// Leftover budget: sets of size up to `beta * n` are meant to be absorbable.
    pub beta: f64,
    /// Inclusion probability per balanced `k²`-set; defaults to
    /// `gamma r / (16 k² C(r, k)^k)`.
    pub sample_probability: Option<f64>,
    /// Overrides the number of members sampled for.
    pub target_family_size: Option<usize>,
    /// Overrides the `alpha * n` size cap (in members).
    pub max_family_size: Option<usize>,
    /// Candidate draws allowed per requested member.
    pub draws_per_member: usize,
    pub node_budget: u64,
    pub seed: u64,
}

impl AbsorberParams {
    /// `alpha = gamma / (8 k²)` and `beta = gamma² / (64 k²)`.
    pub fn new(k: usize, gamma: f64) -> Self {
        let k2 = (k * k) as f64;
        AbsorberParams {
            gamma,
            eta: 0.5,
            alpha: gamma / (8.0 * k2),
            beta: gamma * gamma / (64.0 * k2),
            sample_probability: None,
            target_family_size: None,
            max_family_size: None,
            draws_per_member: 50,
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
        }
    }

    /// Desk-scale defaults: `gamma = 0.5`.
    pub fn for_classes(k: usize) -> Self {
        Self::new(k, 0.5)
    }

    /// Expected family size `p C(r, k)^k`, rounded up; with the default
    /// probability this is `ceil(gamma r / (16 k²))`.
    pub fn expected_family_size(&self, k: usize, r: usize) -> usize {
        let expected = match self.sample_probability {
            None => self.gamma * r as f64 / (16.0 * (k * k) as f64),
            Some(prob) => {
                let ln_sets = k as f64 * ln_binomial(r, k);
                (prob.ln() + ln_sets).exp()
            }
        };
        expected.ceil().max(0.0) as usize
    }

    /// Members to sample for: the expected family size, capped at
    /// `floor(alpha n / k²)` but never below one.
    pub fn family_target(&self, k: usize, r: usize) -> usize {
        let want = self.target_family_size.unwrap_or_else(|| self.expected_family_size(k, r));
        let cap = self.max_family_size.unwrap_or_else(|| {
            let n = (k * r) as f64;
            ((self.alpha * n / (k * k) as f64).floor() as usize).max(1)
        });
        want.min(cap)
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// One absorbing set with its internal split into `k` independent transversals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorber {
    /// Ascending.
    pub vertices: Vec<usize>,
    pub internal: Vec<Transversal>,
    /// The chunk this member absorbed, once consumed.
    pub absorbed: Option<Vec<usize>>,
}

/// Pairwise disjoint absorbers plus the record of which chunks consumed which.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingFamily {
    pub members: Vec<Absorber>,
}

impl AbsorbingFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.members.iter().flat_map(|a| a.vertices.iter().copied()).collect();
        all.sort_unstable();
        all
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        let all = self.vertices();
        all.windows(2).all(|w| w[0] != w[1])
    }

    /// `(member, chunk)` for every consumed member.
    pub fn assignments(&self) -> Vec<(usize, Vec<usize>)> {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.absorbed.clone().map(|c| (i, c)))
            .collect()
    }

    /// Internal transversals of members that absorbed nothing.
    pub fn unconsumed_transversals(&self) -> Vec<Transversal> {
        self.members
            .iter()
            .filter(|a| a.absorbed.is_none())
            .flat_map(|a| a.internal.iter().cloned())
            .collect()
    }
}

/// An absorber for `s` found by the good-tuple recipe, with both splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberCandidate {
    pub vertices: Vec<usize>,
    /// Split of `G[A]`: `U_i + t_i` for every class `i`.
    pub internal: Vec<Transversal>,
    /// Split of `G[A ∪ S]`: `T` and `U_i + s_i` for every class `i`.
    pub with_set: Vec<Transversal>,
}

fn check_balanced_k_set(p: &Partition, s: &[usize]) -> Result<Vec<usize>> {
    let vs = VertexSet::new(s.iter().copied(), p)?;
    if vs.len() != p.k() || !vs.is_legal() {
        return Err(Error::Precondition(format!(
            "expected one vertex per class, got {} vertices",
            vs.len()
        )));
    }
    let mut by_class = vec![0; p.k()];
    for &v in vs.members() {
        by_class[p.class_of(v)] = v;
    }
    Ok(by_class)
}

/// Splices `t` (a transversal of the classes other than `pin`) with `v` at `pin`.
fn with_pin(t: &Transversal, pin: usize, v: usize) -> Transversal {
    let mut vs = t.vertices().to_vec();
    vs.insert(pin, v);
    Transversal::from_vec(vs)
}

/// Up to `limit` pairwise disjoint absorbers for the balanced `k`-set `s`.
///
/// For each `t_1` in class 0 (ascending): `T = t_1 + T'` where `T'` is a
/// transversal of the other classes independent together with both `s_1` and
/// `t_1`; then for every class `i` a transversal `U_i` of the other classes
/// independent together with both `s_i` and `t_i`, all parts disjoint. Every
/// candidate is certified before it is returned.
pub fn find_absorbers_for(g: &Graph, p: &Partition, s: &[usize], limit: usize) -> Result<Vec<AbsorberCandidate>> {
    find_absorbers_avoiding(g, p, s, limit, &[], &mut NodeBudget::default())
}

pub(crate) fn find_absorbers_avoiding(
    g: &Graph,
    p: &Partition,
    s: &[usize],
    limit: usize,
    avoid: &[usize],
    budget: &mut NodeBudget,
) -> Result<Vec<AbsorberCandidate>> {
    let k = p.k();
    if k < 3 {
        return Err(Error::Precondition(format!("absorbers need k >= 3 classes, got {k}")));
    }
    let s_by_class = check_balanced_k_set(p, s)?;
    let mut blocked = FixedBitSet::with_capacity(g.n());
    for &v in s.iter().chain(avoid) {
        blocked.insert(v);
    }
    let mut found = Vec::new();
    for &t1 in p.class(0) {
        if found.len() >= limit {
            break;
        }
        if blocked.contains(t1) {
            continue;
        }
        let mut used = blocked.clone();
        used.insert(t1);
        let Ok(rest) = find_pinned_it_excluding(g, p.classes(), 0, s_by_class[0], t1, Some(&used), budget) else {
            continue;
        };
        let t = with_pin(&rest, 0, t1);
        for &v in t.vertices() {
            used.insert(v);
        }
        let mut us = Vec::with_capacity(k);
        for i in 0..k {
            let ti = t.vertices()[i];
            match find_pinned_it_excluding(g, p.classes(), i, s_by_class[i], ti, Some(&used), budget) {
                Ok(u) => {
                    for &v in u.vertices() {
                        used.insert(v);
                    }
                    us.push(u);
                }
                Err(Error::NotFound | Error::Timeout(_)) => break,
                Err(e) => return Err(e),
            }
        }
        if us.len() < k {
            continue;
        }
        let internal: Vec<Transversal> = (0..k).map(|i| with_pin(&us[i], i, t.vertices()[i])).collect();
        let mut with_set = vec![t.clone()];
        with_set.extend((0..k).map(|i| with_pin(&us[i], i, s_by_class[i])));
        let mut vertices: Vec<usize> = internal.iter().flat_map(|x| x.vertices().iter().copied()).collect();
        vertices.sort_unstable();
        if !certify_split(g, p, &vertices, &internal) {
            continue;
        }
        let mut union = vertices.clone();
        union.extend_from_slice(s);
        union.sort_unstable();
        if !certify_split(g, p, &union, &with_set) {
            continue;
        }
        for &v in &vertices {
            blocked.insert(v);
        }
        found.push(AbsorberCandidate {
            vertices,
            internal,
            with_set,
        });
    }
    if found.is_empty() {
        Err(Error::NoneFound)
    } else {
        Ok(found)
    }
}

/// `its` are disjoint independent transversals of `p` covering exactly `set`.
fn certify_split(g: &Graph, p: &Partition, set: &[usize], its: &[Transversal]) -> bool {
    let mut covered: Vec<usize> = its.iter().flat_map(|t| t.vertices().iter().copied()).collect();
    covered.sort_unstable();
    covered == set
        && covered.windows(2).all(|w| w[0] != w[1])
        && its
            .iter()
            .all(|t| Transversal::new(t.vertices().to_vec(), p.classes()).is_ok() && t.is_independent(g))
}

/// Splits `set` (balanced) into independent transversals by exhaustive search.
fn split_into_its(g: &Graph, p: &Partition, set: &[usize], budget: &mut NodeBudget) -> Result<Option<Vec<Transversal>>> {
    let (sub_p, global) = p.restrict(set)?;
    if sub_p.k() != p.k() || sub_p.n() != set.len() {
        return Ok(None);
    }
    let sub_g = g.induced(&global);
    Ok(find_it_partition(&sub_g, &sub_p, budget)?.map(|its| its.iter().map(|t| t.map(&global)).collect()))
}

/// Samples a family of disjoint balanced `k²`-sets, each of which splits
/// into independent transversals.
///
/// Candidates are drawn uniformly (`k` vertices from every class); one that
/// meets an admitted member, or has no split, is discarded. Drawing stops at
/// the family target or after `draws_per_member * target` draws, in which
/// case the partial family comes back in
/// [`Error::AbsorberBudgetExhausted`].
pub fn build_absorbing_set<R: Rng + ?Sized>(
    g: &Graph,
    p: &Partition,
    params: &AbsorberParams,
    rng: &mut R,
) -> Result<AbsorbingFamily> {
    let k = p.k();
    if k < 3 {
        return Err(Error::Precondition(format!("absorbers need k >= 3 classes, got {k}")));
    }
    let r = p.r();
    let target = if r < k { 0 } else { params.family_target(k, r) };
    let mut family = AbsorbingFamily::default();
    let mut taken = FixedBitSet::with_capacity(g.n());
    let mut budget = NodeBudget::new(params.node_budget);
    let max_draws = params.draws_per_member.saturating_mul(target);
    let mut draws = 0;
    while family.len() < target && draws < max_draws {
        draws += 1;
        let mut candidate: Vec<usize> = p
            .iter()
            .flat_map(|class| sample(rng, class.len(), k).into_iter().map(|i| class[i]).collect::<Vec<_>>())
            .collect();
        if candidate.iter().any(|&v| taken.contains(v)) {
            continue;
        }
        candidate.sort_unstable();
        let split = match split_into_its(g, p, &candidate, &mut budget) {
            Ok(s) => s,
            Err(Error::Timeout(_)) => {
                budget = NodeBudget::new(params.node_budget);
                None
            }
            Err(e) => return Err(e),
        };
        if let Some(internal) = split {
            for &v in &candidate {
                taken.insert(v);
            }
            family.members.push(Absorber {
                vertices: candidate,
                internal,
                absorbed: None,
            });
        }
    }
    if family.len() < target {
        return Err(Error::AbsorberBudgetExhausted {
            admitted: family.len(),
            target,
            family: Box::new(family),
        });
    }
    Ok(family)
}

/// Chunks of a balanced set: chunk `c` takes the `c`-th smallest member of
/// every class.
pub fn balanced_chunks(p: &Partition, s: &VertexSet) -> Result<Vec<Vec<usize>>> {
    if !s.is_balanced() {
        return Err(Error::Precondition("the leftover set is not balanced".into()));
    }
    let mut per_class = vec![Vec::new(); p.k()];
    for &v in s.members() {
        per_class[p.class_of(v)].push(v);
    }
    let chunks = s.counts().first().copied().unwrap_or(0);
    Ok((0..chunks).map(|c| per_class.iter().map(|cl| cl[c]).collect()).collect())
}

/// Absorbs the balanced set `s` into unconsumed family members.
///
/// Each chunk (see [`balanced_chunks`]) takes the first unconsumed member
/// whose union with it splits into independent transversals. Returns the
/// transversals covering exactly the newly consumed members and `s`. On
/// failure the family is left unchanged.
pub fn absorb(g: &Graph, p: &Partition, family: &mut AbsorbingFamily, s: &VertexSet) -> Result<Vec<Transversal>> {
    let mut in_family = FixedBitSet::with_capacity(g.n());
    for v in family.vertices() {
        in_family.insert(v);
    }
    if let Some(&v) = s.members().iter().find(|&&v| in_family.contains(v)) {
        return Err(Error::Precondition(format!("vertex {v} of the leftover lies in the family")));
    }
    let chunks = balanced_chunks(p, s)?;
    let mut budget = NodeBudget::default();
    let mut taken = vec![false; family.len()];
    let mut plan = Vec::with_capacity(chunks.len());
    for (ci, chunk) in chunks.iter().enumerate() {
        let mut assigned = None;
        for (mi, member) in family.members.iter().enumerate() {
            if taken[mi] || member.absorbed.is_some() {
                continue;
            }
            let mut union = member.vertices.clone();
            union.extend_from_slice(chunk);
            union.sort_unstable();
            let split = match split_into_its(g, p, &union, &mut budget) {
                Ok(s) => s,
                Err(Error::Timeout(_)) => {
                    budget = NodeBudget::default();
                    None
                }
                Err(e) => return Err(e),
            };
            if let Some(its) = split {
                assigned = Some((mi, its));
                break;
            }
        }
        let (mi, its) = assigned.ok_or(Error::AbsorptionFailure(ci))?;
        taken[mi] = true;
        plan.push((mi, chunk.clone(), its));
    }
    let mut out = Vec::new();
    for (mi, chunk, its) in plan {
        family.members[mi].absorbed = Some(chunk);
        out.extend(its);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::perfect_matching_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn params_follow_gamma() {
        let a = AbsorberParams::new(3, 0.5);
        assert!((a.alpha - 0.5 / 72.0).abs() < 1e-15);
        assert!((a.beta - 0.25 / 576.0).abs() < 1e-15);
        assert_eq!(a.expected_family_size(3, 30), 1);
        assert_eq!(a.expected_family_size(3, 300), 2);
        // Explicit probability reproduces the default expectation.
        let prob = (0.5 * 30.0 / 144.0) / (3.0 * ln_binomial(30, 3)).exp();
        let b = AbsorberParams { sample_probability: Some(prob), ..a.clone() };
        assert_eq!(b.expected_family_size(3, 30), 1);
        assert_eq!(a.family_target(3, 30), 1);
        assert_eq!(AbsorberParams { target_family_size: Some(5), max_family_size: Some(10), ..a }.family_target(3, 30), 5);
    }

    #[test]
    fn empty_graph_absorbers() {
        let p = Partition::consecutive(3, 7).unwrap();
        let g = Graph::empty(21);
        let found = find_absorbers_for(&g, &p, &[0, 7, 14], 2).unwrap();
        assert_eq!(found.len(), 2);
        for a in &found {
            assert_eq!(a.vertices.len(), 9);
            assert_eq!(a.internal.len(), 3);
            assert_eq!(a.with_set.len(), 4);
            assert!(!a.vertices.iter().any(|v| [0, 7, 14].contains(v)));
        }
        assert!(found[0].vertices.iter().all(|v| !found[1].vertices.contains(v)));
    }

    #[test]
    fn absorbers_need_three_classes() {
        let g = Graph::cycle(4).unwrap();
        let p = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(matches!(find_absorbers_for(&g, &p, &[0, 1], 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn matching_graph_absorbers() {
        let p = Partition::consecutive(3, 12).unwrap();
        let g = perfect_matching_graph(&p, 5).unwrap();
        for s in [[0, 12, 24], [5, 17, 35], [11, 23, 30]] {
            let found = find_absorbers_for(&g, &p, &s, 1).unwrap();
            assert!(!found.is_empty());
        }
    }

    #[test]
    fn matching_graph_families() {
        let p = Partition::consecutive(3, 30).unwrap();
        let params = AbsorberParams {
            target_family_size: Some(3),
            max_family_size: Some(3),
            ..AbsorberParams::for_classes(3)
        };
        for seed in 0..10 {
            let g = perfect_matching_graph(&p, seed).unwrap();
            let f = build_absorbing_set(&g, &p, &params, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(f.len() >= 3);
            assert!(f.is_pairwise_disjoint());
            for m in &f.members {
                assert!(certify_split(&g, &p, &m.vertices, &m.internal));
            }
        }
    }

    #[test]
    fn family_zero_target_is_empty() {
        let p = Partition::consecutive(3, 10).unwrap();
        let params = AbsorberParams { max_family_size: Some(0), ..AbsorberParams::for_classes(3) };
        let f = build_absorbing_set(&Graph::empty(30), &p, &params, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn empty_graph_family_of_five() {
        let p = Partition::consecutive(3, 30).unwrap();
        let g = Graph::empty(90);
        let params = AbsorberParams {
            target_family_size: Some(5),
            max_family_size: Some(5),
            ..AbsorberParams::for_classes(3)
        };
        let f = build_absorbing_set(&g, &p, &params, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.is_pairwise_disjoint());
        for m in &f.members {
            assert_eq!(m.vertices.len(), 9);
            assert!(is_balanced_set(&p, &m.vertices));
            assert!(certify_split(&g, &p, &m.vertices, &m.internal));
        }
    }

    fn is_balanced_set(p: &Partition, s: &[usize]) -> bool {
        crate::partition::is_balanced(s, p).unwrap()
    }

    #[test]
    fn absorb_empty_and_one_chunk() {
        let p = Partition::consecutive(3, 10).unwrap();
        let g = Graph::empty(30);
        let params = AbsorberParams {
            target_family_size: Some(1),
            ..AbsorberParams::for_classes(3)
        };
        let mut f = build_absorbing_set(&g, &p, &params, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let none = absorb(&g, &p, &mut f, &VertexSet::new([], &p).unwrap()).unwrap();
        assert!(none.is_empty());
        assert!(f.assignments().is_empty());

        let fv = f.vertices();
        let s: Vec<usize> = (0..3).map(|i| (i * 10..(i + 1) * 10).find(|v| !fv.contains(v)).unwrap()).collect();
        let its = absorb(&g, &p, &mut f, &VertexSet::new(s.clone(), &p).unwrap()).unwrap();
        assert_eq!(its.len(), 4);
        let mut covered: Vec<usize> = its.iter().flat_map(|t| t.vertices().to_vec()).collect();
        covered.sort_unstable();
        let mut expect = fv.clone();
        expect.extend(&s);
        expect.sort_unstable();
        assert_eq!(covered, expect);
        assert_eq!(f.assignments(), vec![(0, s)]);
        assert!(f.unconsumed_transversals().is_empty());
    }

    #[test]
    fn absorption_failure_on_adversarial_chunk() {
        // Member ∪ chunk is the whole 12-vertex instance with classes
        // {0..4}, {4..8}, {8..12}. A triangle on the chunk is harmless:
        // its vertices just land in different transversals.
        let p = Partition::consecutive(3, 4).unwrap();
        let g = Graph::new(12, [(3, 7), (7, 11), (3, 11)]).unwrap();
        let mut f = AbsorbingFamily {
            members: vec![Absorber {
                vertices: vec![0, 1, 2, 4, 5, 6, 8, 9, 10],
                internal: vec![
                    Transversal::from_vec(vec![0, 4, 8]),
                    Transversal::from_vec(vec![1, 5, 9]),
                    Transversal::from_vec(vec![2, 6, 10]),
                ],
                absorbed: None,
            }],
        };
        let s = VertexSet::new([3, 7, 11], &p).unwrap();
        assert!(absorb(&g, &p, &mut f.clone(), &s).is_ok());
        // 3 adjacent to all of class 1 lies in no independent transversal.
        let g = Graph::new(12, [(3, 4), (3, 5), (3, 6), (3, 7)]).unwrap();
        let before = f.clone();
        assert!(matches!(absorb(&g, &p, &mut f, &s), Err(Error::AbsorptionFailure(0))));
        assert_eq!(f, before);
    }
}
