//! Partial strong colourings through a random transversal hypergraph.
//!
//! A random family of balanced sets `R(1), ..., R(N)` is drawn, each set
//! receives a fractional weighting of its own independent transversals, each
//! weighted transversal becomes a hyperedge with probability equal to its
//! weight, and a semi-random matching of the resulting `k`-uniform hypergraph
//! yields disjoint independent transversals.

mod cover;
mod hypergraph;
mod matching;

pub use cover::{sample_cover, verify_cover, Cover, CoverReport, CoverSample};
pub use hypergraph::{
    build_transversal_hypergraph, build_transversal_hypergraph_lenient, ExactLp, Hypergraph, HypergraphStats,
    TransversalHypergraph, WeightingProvider,
};
pub use matching::{is_matching, semi_random_matching, Matching, MatchingParams};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::it::{greedy_disjoint_its, NodeBudget, DEFAULT_NODE_BUDGET};
use crate::partition::Partition;
use crate::transversal::Transversal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NibbleParams {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    pub eta4: f64,
    pub eta5: f64,
    pub eta6: f64,
    /// Target uncovered fraction.
    pub delta: f64,
    /// Vertices per class in each cover set; defaults to `round(r^eta1)`, at least 1.
    pub m: Option<usize>,
    /// Number of cover sets; defaults to `round(r^(1 + eta2))`.
    pub cover_count: Option<usize>,
    pub cover_cap: Option<usize>,
    /// Whole-cover sampling attempts.
    pub max_resamples: usize,
    pub bite_fraction: f64,
    pub max_rounds: usize,
    /// Residual average degree below which bites stop; defaults to the square
    /// root of the initial average degree.
    pub stop_degree: Option<f64>,
    /// Greedy completion on the residual instance after the matching.
    pub fallback: bool,
    pub enumeration_cap: u64,
    pub node_budget: u64,
    pub seed: u64,
}

impl Default for NibbleParams {
    fn default() -> Self {
        NibbleParams {
            eta1: 0.1,
            eta2: 0.1,
            eta3: 0.175,
            eta4: 0.15,
            eta5: 0.1,
            eta6: 0.1875,
            delta: 0.05,
            m: None,
            cover_count: None,
            cover_cap: None,
            max_resamples: 20,
            bite_fraction: 0.1,
            max_rounds: 200,
            stop_degree: None,
            fallback: true,
            enumeration_cap: 100_000,
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
        }
    }
}

impl NibbleParams {
    /// Checks the exponent constraints.
    ///
    /// `3 eta2 + 6 eta1 < 1` and `3 eta2 + 6 eta1 + eta5 <= 1` are what make
    /// the expected number of over-covered pairs vanish; `2 eta3 >= eta1 +
    /// eta2 + eta4` is non-strict so that the standard exponents
    /// `(0.1, 0.1, 0.175, 0.15, 0.1)` pass.
    pub fn validate(&self) -> Result<()> {
        let (e1, e2, e3, e4, e5, e6) = (self.eta1, self.eta2, self.eta3, self.eta4, self.eta5, self.eta6);
        const SLACK: f64 = 1e-12;
        let checks = [
            ([e1, e2, e3, e4, e5, e6].iter().all(|e| *e > 0.0 && *e < 1.0), "all exponents lie in (0, 1)"),
            (e1 + e2 > e3, "eta1 + eta2 > eta3"),
            (2.0 * e3 > e1 + e2, "2 eta3 > eta1 + eta2"),
            (2.0 * e1 + e2 < 1.0, "2 eta1 + eta2 < 1"),
            (3.0 * e2 + 6.0 * e1 < 1.0, "3 eta2 + 6 eta1 < 1"),
            (2.0 * e3 + SLACK >= e1 + e2 + e4, "2 eta3 >= eta1 + eta2 + eta4"),
            (3.0 * e2 + 6.0 * e1 + e5 <= 1.0 + SLACK, "3 eta2 + 6 eta1 + eta5 <= 1"),
            (e1 + e2 > e6 && e6 > e3, "eta1 + eta2 > eta6 > eta3"),
            ((0.0..=1.0).contains(&self.delta), "delta lies in [0, 1]"),
            (self.bite_fraction > 0.0 && self.bite_fraction <= 1.0, "bite fraction lies in (0, 1]"),
            (self.m != Some(0), "m >= 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(Error::Precondition(format!("nibble parameters violate {what}"))),
            None => Ok(()),
        }
    }

    pub fn m_for(&self, r: usize) -> usize {
        self.m
            .unwrap_or_else(|| ((r as f64).powf(self.eta1).round() as usize).max(1))
    }

    pub fn cover_count_for(&self, r: usize) -> usize {
        let n = self
            .cover_count
            .unwrap_or_else(|| (r as f64).powf(1.0 + self.eta2).round() as usize)
            .max(1);
        self.cover_cap.map_or(n, |cap| n.min(cap.max(1)))
    }

    /// Centre `r^(eta1 + eta2)` of the per-vertex membership window.
    pub fn membership_center(&self, r: usize) -> f64 {
        (r as f64).powf(self.eta1 + self.eta2)
    }

    /// Half-width `r^eta3` of the per-vertex membership window.
    pub fn membership_tolerance(&self, r: usize) -> f64 {
        (r as f64).powf(self.eta3)
    }

    /// Half-width `r^eta6` of the hypergraph degree window.
    pub fn degree_tolerance(&self, r: usize) -> f64 {
        (r as f64).powf(self.eta6)
    }

    pub fn matching_params(&self) -> MatchingParams {
        MatchingParams {
            delta: self.delta,
            max_rounds: self.max_rounds,
            bite_fraction: self.bite_fraction,
            stop_degree: self.stop_degree,
        }
    }
}

/// Disjoint independent transversals plus the statistics of the stages that
/// produced them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartialColouring {
    pub transversals: Vec<Transversal>,
    pub target: usize,
    pub from_matching: usize,
    pub from_fallback: usize,
    pub cover_report: CoverReport,
    pub hypergraph: HypergraphStats,
    /// Cover sets without a feasible weighting, skipped when building edges.
    pub skipped_sets: Vec<usize>,
}

/// Number of transversals a `(1 - delta) r`-partial colouring needs.
pub fn partial_target(r: usize, delta: f64) -> usize {
    ((1.0 - delta) * r as f64 - 1e-9).ceil().max(0.0) as usize
}

/// At least `(1 - delta) r` disjoint independent transversals, or
/// [`Error::Shortfall`] carrying whatever was found.
pub fn partial_strong_colouring(g: &Graph, p: &Partition, delta: f64, params: &NibbleParams) -> Result<PartialColouring> {
    let out = partial_strong_colouring_best_effort(g, p, delta, params)?;
    if out.transversals.len() < out.target {
        return Err(Error::Shortfall {
            found: out.transversals.len(),
            needed: out.target,
            partial: out.transversals,
        });
    }
    Ok(out)
}

/// Like [`partial_strong_colouring`] but returns a short result instead of
/// failing.
pub fn partial_strong_colouring_best_effort(
    g: &Graph,
    p: &Partition,
    delta: f64,
    params: &NibbleParams,
) -> Result<PartialColouring> {
    if p.k() < 3 {
        return Err(Error::Precondition(format!("partial colourings need k >= 3 classes, got {}", p.k())));
    }
    let params = NibbleParams { delta, ..params.clone() };
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let sample = match sample_cover(g, p, &params, &mut rng) {
        Ok(s) => s,
        Err(Error::CoverBudgetExhausted(best)) => *best,
        Err(e) => return Err(e),
    };
    let provider = ExactLp {
        cap: params.enumeration_cap,
    };
    let th = build_transversal_hypergraph_lenient(g, p, &sample.cover, &provider, &mut rng)?;
    let matching = semi_random_matching(&th.hypergraph, &params.matching_params(), &mut rng);

    let mut transversals: Vec<Transversal> = matching
        .edges
        .iter()
        .map(|&e| Transversal::from_vec(th.hypergraph.edges()[e].clone()))
        .collect();
    let from_matching = transversals.len();
    let target = partial_target(p.r(), delta);

    if transversals.len() < target && params.fallback {
        let mut used = vec![false; g.n()];
        for t in &transversals {
            for &v in t.vertices() {
                used[v] = true;
            }
        }
        let mut residual: Vec<Vec<usize>> = p
            .iter()
            .map(|c| c.iter().copied().filter(|&v| !used[v]).collect())
            .collect();
        let mut budget = NodeBudget::new(params.node_budget);
        let mut extra = Vec::new();
        // Extraction one transversal at a time, so a timeout keeps earlier finds.
        while transversals.len() + extra.len() < target {
            match greedy_disjoint_its(g, &mut residual, 1, &mut budget) {
                Ok(found) if found.is_empty() => break,
                Ok(found) => extra.extend(found),
                Err(Error::Timeout(_)) => break,
                Err(e) => return Err(e),
            }
        }
        transversals.extend(extra);
    }

    if !disjoint_independent(g, p, &transversals) {
        return Err(Error::PipelineFailure("partial colouring failed its certificate check".into()));
    }
    Ok(PartialColouring {
        from_fallback: transversals.len() - from_matching,
        from_matching,
        target,
        transversals,
        cover_report: sample.report,
        hypergraph: th.hypergraph.stats(),
        skipped_sets: th.skipped,
    })
}

/// Pairwise disjoint, each an independent transversal of `p`.
pub fn disjoint_independent(g: &Graph, p: &Partition, ts: &[Transversal]) -> bool {
    let mut used = vec![false; g.n()];
    ts.iter().all(|t| {
        Transversal::new(t.vertices().to_vec(), p.classes()).is_ok()
            && t.is_independent(g)
            && t.vertices().iter().all(|&v| !std::mem::replace(&mut used[v], true))
    })
}
