use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::NibbleParams;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// A family of vertex sets `R(1), ..., R(N)`, each meant to meet every class
/// in exactly `m` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub m: usize,
    /// `sets[j][i]` is the part of `R(j)` inside class `i`, ascending.
    pub sets: Vec<Vec<Vec<usize>>>,
    /// `membership[v]` lists the `j` with `v` in `R(j)`.
    pub membership: Vec<Vec<usize>>,
}

impl Cover {
    /// Groups each raw set by class. Members outside every class are rejected.
    pub fn from_sets(p: &Partition, m: usize, raw: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = Vec::with_capacity(raw.len());
        let mut membership = vec![Vec::new(); p.n()];
        for (j, members) in raw.into_iter().enumerate() {
            let mut parts = vec![Vec::new(); p.k()];
            for v in members {
                let c = p.classes().class_of(v).ok_or(Error::InvalidVertex(v))?;
                parts[c].push(v);
                membership[v].push(j);
            }
            for part in &mut parts {
                part.sort_unstable();
            }
            sets.push(parts);
        }
        for js in &mut membership {
            js.dedup();
        }
        Ok(Cover { m, sets, membership })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Members of `R(j)` in class order.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.sets[j].iter().flatten().copied().collect()
    }
}

/// Pass flags and the statistics behind them for the five cover properties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    /// (1) every set meets every class in exactly `m` vertices.
    pub balanced_ok: bool,
    pub unbalanced_sets: usize,
    /// (2) every vertex lies in `center ± tolerance` sets.
    pub membership_ok: bool,
    pub membership_center: f64,
    pub membership_tolerance: f64,
    pub membership_min: usize,
    pub membership_max: usize,
    pub membership_outliers: usize,
    /// (3) every legal pair lies in at most two sets.
    pub pairs_ok: bool,
    pub max_pair_multiplicity: usize,
    /// (4) every legal triple lies in at most one set.
    pub triples_ok: bool,
    pub max_triple_multiplicity: usize,
    /// (5) `m >= 2 Δ(G[R(j)])` for every set.
    pub induced_degree_ok: bool,
    pub max_induced_degree: usize,
    pub sets_over_degree: usize,
}

impl CoverReport {
    pub fn all_pass(&self) -> bool {
        self.passed() == 5
    }

    pub fn passed(&self) -> usize {
        [
            self.balanced_ok,
            self.membership_ok,
            self.pairs_ok,
            self.triples_ok,
            self.induced_degree_ok,
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }

    fn violations(&self) -> usize {
        self.unbalanced_sets
            + self.membership_outliers
            + self.max_pair_multiplicity.saturating_sub(2)
            + self.max_triple_multiplicity.saturating_sub(1)
            + self.sets_over_degree
    }
}

/// A sampled cover with its report and the number of attempts used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverSample {
    pub cover: Cover,
    pub report: CoverReport,
    pub attempts: usize,
}

/// Exact evaluation of the five cover properties.
pub fn verify_cover(g: &Graph, p: &Partition, cover: &Cover, params: &NibbleParams) -> CoverReport {
    let m = cover.m;
    let unbalanced_sets = cover
        .sets
        .iter()
        .filter(|parts| parts.len() != p.k() || parts.iter().any(|part| part.len() != m))
        .count();

    let center = params.membership_center(p.r());
    let tolerance = params.membership_tolerance(p.r());
    let counts: Vec<usize> = cover.membership.iter().map(Vec::len).collect();
    let membership_outliers = counts
        .iter()
        .filter(|&&c| (c as f64 - center).abs() > tolerance)
        .count();

    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triples: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for parts in &cover.sets {
        let k = parts.len();
        for a in 0..k {
            for b in a + 1..k {
                for &u in &parts[a] {
                    for &v in &parts[b] {
                        *pairs.entry((u.min(v), u.max(v))).or_default() += 1;
                        for c in b + 1..k {
                            for &w in &parts[c] {
                                let mut t = [u, v, w];
                                t.sort_unstable();
                                *triples.entry((t[0], t[1], t[2])).or_default() += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let max_pair_multiplicity = pairs.values().copied().max().unwrap_or(0);
    let max_triple_multiplicity = triples.values().copied().max().unwrap_or(0);

    let degrees: Vec<usize> = (0..cover.len())
        .map(|j| g.induced_max_degree(&cover.members(j)))
        .collect();
    let sets_over_degree = degrees.iter().filter(|&&d| 2 * d > m).count();

    CoverReport {
        balanced_ok: unbalanced_sets == 0,
        unbalanced_sets,
        membership_ok: membership_outliers == 0,
        membership_center: center,
        membership_tolerance: tolerance,
        membership_min: counts.iter().copied().min().unwrap_or(0),
        membership_max: counts.iter().copied().max().unwrap_or(0),
        membership_outliers,
        pairs_ok: max_pair_multiplicity <= 2,
        max_pair_multiplicity,
        triples_ok: max_triple_multiplicity <= 1,
        max_triple_multiplicity,
        induced_degree_ok: sets_over_degree == 0,
        max_induced_degree: degrees.iter().copied().max().unwrap_or(0),
        sets_over_degree,
    }
}

fn draw_cover<R: Rng + ?Sized>(p: &Partition, m: usize, count: usize, rng: &mut R) -> Cover {
    let raw = (0..count)
        .map(|_| {
            p.iter()
                .flat_map(|class| sample(rng, class.len(), m).into_iter().map(|i| class[i]).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    Cover::from_sets(p, m, raw).expect("sampled members lie in their classes")
}

/// Draws each `R(j)` as `m` uniform vertices from every class, independently,
/// resampling the whole cover until all five properties hold.
///
/// After `max_resamples` attempts the best attempt (most properties passed,
/// then fewest violations) is returned inside
/// [`Error::CoverBudgetExhausted`].
pub fn sample_cover<R: Rng + ?Sized>(g: &Graph, p: &Partition, params: &NibbleParams, rng: &mut R) -> Result<CoverSample> {
    let m = params.m_for(p.r());
    if m > p.r() {
        return Err(Error::Precondition(format!("m = {m} exceeds the class size {}", p.r())));
    }
    let count = params.cover_count_for(p.r());
    let attempts = params.max_resamples.max(1);
    let mut best: Option<CoverSample> = None;
    for attempt in 1..=attempts {
        let cover = draw_cover(p, m, count, rng);
        let report = verify_cover(g, p, &cover, params);
        if report.all_pass() {
            return Ok(CoverSample {
                cover,
                report,
                attempts: attempt,
            });
        }
        let better = best.as_ref().is_none_or(|b| {
            (report.passed(), std::cmp::Reverse(report.violations()))
                > (b.report.passed(), std::cmp::Reverse(b.report.violations()))
        });
        if better {
            best = Some(CoverSample {
                cover,
                report,
                attempts,
            });
        }
    }
    let mut best = best.expect("at least one attempt");
    best.attempts = attempts;
    Err(Error::CoverBudgetExhausted(Box::new(best)))
}
