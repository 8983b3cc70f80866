//! End-to-end strong colouring: absorbers, a partial colouring of the rest,
//! absorption of the leftover, and an exhaustive fallback for small instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::absorber::{absorb, build_absorbing_set, AbsorberParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::it::{find_it_partition, NodeBudget, DEFAULT_NODE_BUDGET};
use crate::nibble::{partial_strong_colouring_best_effort, NibbleParams};
use crate::partition::{Partition, VertexSet};
use crate::transversal::{verify_it_partition, Transversal};

pub const TRACE_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Retries with fresh seeds, then exhaustive search.
    pub fallback: bool,
    /// Randomised attempts when `fallback` is on (one otherwise).
    pub attempts: usize,
    /// Defaults to [`AbsorberParams::for_classes`].
    pub absorber: Option<AbsorberParams>,
    pub nibble: NibbleParams,
    pub exhaustive_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            fallback: true,
            attempts: 3,
            absorber: None,
            nibble: NibbleParams::default(),
            exhaustive_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Stage outcomes of one randomised attempt.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AttemptTrace {
    pub seed: u64,
    pub family_target: usize,
    pub family_size: usize,
    pub family_vertices: usize,
    pub partial_target: usize,
    pub partial_count: usize,
    pub from_matching: usize,
    pub from_greedy: usize,
    pub cover_properties_passed: usize,
    pub leftover: usize,
    /// `(member, chunk)` pairs, vertex ids 0-based.
    pub assignments: Vec<(usize, Vec<usize>)>,
    pub unconsumed_members: usize,
    pub success: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub schema: u32,
    pub k: usize,
    pub r: usize,
    pub max_degree: usize,
    pub epsilon: f64,
    /// `r >= (2 + epsilon) Δ`.
    pub in_regime: bool,
    pub attempts: Vec<AttemptTrace>,
    pub exhaustive_used: bool,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongColouring {
    pub transversals: Vec<Transversal>,
    pub trace: PipelineTrace,
}

/// SplitMix64 step: decorrelated per-stage seeds from one user seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Partitions `V(G)` into `r` independent transversals of `p`.
///
/// For `k >= 3` every attempt builds an absorbing family, colours the rest
/// with the nibble (leftover fraction `beta`), and absorbs what remains.
/// With `fallback` on, failed attempts are retried with fresh seeds and
/// finally replaced by exhaustive search, which either finds a partition or
/// proves there is none ([`Error::Unsolvable`]). Two classes go straight to
/// exhaustive search. Every returned colouring has passed
/// [`verify_it_partition`].
pub fn strong_colouring(g: &Graph, p: &Partition, epsilon: f64, config: &PipelineConfig) -> Result<StrongColouring> {
    if g.n() != p.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.n(),
            g.n()
        )));
    }
    let (k, r) = (p.k(), p.r());
    let mut trace = PipelineTrace {
        schema: TRACE_SCHEMA,
        k,
        r,
        max_degree: g.max_degree(),
        epsilon,
        in_regime: r as f64 >= (2.0 + epsilon) * g.max_degree() as f64,
        attempts: Vec::new(),
        exhaustive_used: false,
        outcome: String::new(),
    };

    if k >= 3 {
        let attempts = if config.fallback { config.attempts.max(1) } else { 1 };
        for a in 0..attempts as u64 {
            let (result, at) = attempt(g, p, config, derive_seed(config.seed, a))?;
            trace.attempts.push(at);
            if let Some(transversals) = result {
                trace.outcome = "absorbed".into();
                return Ok(StrongColouring { transversals, trace });
            }
        }
        if !config.fallback {
            let why = trace
                .attempts
                .last()
                .and_then(|a| a.failure.clone())
                .unwrap_or_default();
            return Err(Error::PipelineFailure(why));
        }
    }

    trace.exhaustive_used = true;
    let mut budget = NodeBudget::new(config.exhaustive_budget);
    match find_it_partition(g, p, &mut budget) {
        Ok(Some(transversals)) => {
            let report = verify_it_partition(g, p, &transversals);
            if !report.valid {
                return Err(Error::PipelineFailure(format!(
                    "exhaustive result failed verification: {}",
                    report.problems.join("; ")
                )));
            }
            trace.outcome = "exhaustive".into();
            Ok(StrongColouring { transversals, trace })
        }
        Ok(None) => Err(Error::Unsolvable),
        Err(Error::Timeout(n)) => Err(Error::PipelineFailure(format!(
            "randomised attempts failed and exhaustive search hit its budget of {n} nodes"
        ))),
        Err(e) => Err(e),
    }
}

fn attempt(g: &Graph, p: &Partition, config: &PipelineConfig, seed: u64) -> Result<(Option<Vec<Transversal>>, AttemptTrace)> {
    let k = p.k();
    let mut at = AttemptTrace {
        seed,
        ..Default::default()
    };
    let fail = |mut at: AttemptTrace, why: String| {
        at.failure = Some(why);
        Ok((None, at))
    };

    let mut absorber = config.absorber.clone().unwrap_or_else(|| AbsorberParams::for_classes(k));
    absorber.seed = derive_seed(seed, 0);
    at.family_target = if p.r() < k { 0 } else { absorber.family_target(k, p.r()) };
    let mut rng = ChaCha8Rng::seed_from_u64(absorber.seed);
    let mut family = match build_absorbing_set(g, p, &absorber, &mut rng) {
        Ok(f) => f,
        Err(Error::AbsorberBudgetExhausted { family, .. }) => *family,
        Err(e) => return Err(e),
    };
    at.family_size = family.len();
    let family_vertices = family.vertices();
    at.family_vertices = family_vertices.len();

    let mut in_family = vec![false; g.n()];
    for &v in &family_vertices {
        in_family[v] = true;
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !in_family[v]).collect();

    let mut partial = Vec::new();
    if !rest.is_empty() {
        let (sub_p, global) = p.restrict(&rest)?;
        let sub_g = g.induced(&global);
        let nibble = NibbleParams {
            seed: derive_seed(seed, 1),
            ..config.nibble.clone()
        };
        match partial_strong_colouring_best_effort(&sub_g, &sub_p, absorber.beta, &nibble) {
            Ok(pc) => {
                at.partial_target = pc.target;
                at.from_matching = pc.from_matching;
                at.from_greedy = pc.from_fallback;
                at.cover_properties_passed = pc.cover_report.passed();
                partial = pc.transversals.iter().map(|t| t.map(&global)).collect();
            }
            Err(e @ (Error::Precondition(_) | Error::PipelineFailure(_))) => {
                return fail(at, format!("partial colouring: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    at.partial_count = partial.len();

    let mut covered = in_family;
    for t in &partial {
        for &v in t.vertices() {
            covered[v] = true;
        }
    }
    let leftover = VertexSet::new((0..g.n()).filter(|&v| !covered[v]), p)?;
    assert!(leftover.is_balanced(), "the leftover of disjoint transversals is balanced");
    at.leftover = leftover.len();

    let absorbed = match absorb(g, p, &mut family, &leftover) {
        Ok(ts) => ts,
        Err(Error::AbsorptionFailure(chunk)) => {
            return fail(
                at,
                format!("absorption: no member absorbs chunk {chunk} ({} leftover vertices, {} members)", leftover.len(), family.len()),
            )
        }
        Err(e) => return Err(e),
    };
    at.assignments = family.assignments();
    at.unconsumed_members = family.members.iter().filter(|m| m.absorbed.is_none()).count();

    let mut all = partial;
    all.extend(absorbed);
    all.extend(family.unconsumed_transversals());
    let report = verify_it_partition(g, p, &all);
    if !report.valid {
        return fail(at, format!("verification: {}", report.problems.join("; ")));
    }
    at.success = true;
    Ok((Some(canonical_order(all)), at))
}

/// Sorted by first vertex, so equal colourings print identically.
fn canonical_order(mut ts: Vec<Transversal>) -> Vec<Transversal> {
    ts.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    ts
}
