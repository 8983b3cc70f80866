//! Fractional strong colourings: weights on the independent transversals of a
//! partition such that every vertex is covered with total weight exactly one.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::it::{for_each_it, DEFAULT_ENUMERATION_CAP};
use crate::partition::Partition;
use crate::simplex::{solve_unit_cover, PhaseOne, FLOAT_TOLERANCE};
use crate::transversal::Transversal;

/// All independent transversals of `p`, lexicographically ordered.
pub fn enumerate_its(g: &Graph, p: &Partition, cap: u64) -> Result<Vec<Transversal>> {
    let lists: Vec<&[usize]> = p.iter().collect();
    let mut out = Vec::new();
    let mut over = false;
    for_each_it(g, &lists, |t| {
        if out.len() as u64 >= cap {
            over = true;
            return ControlFlow::Break(());
        }
        out.push(Transversal::from_vec(t.to_vec()));
        ControlFlow::Continue(())
    });
    if over {
        return Err(Error::CapExceeded(cap));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug)]
pub struct FractionalOptions {
    pub mode: SolveMode,
    pub cap: u64,
}

impl Default for FractionalOptions {
    fn default() -> Self {
        FractionalOptions {
            mode: SolveMode::Exact,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn len(&self) -> usize {
        match self {
            Weights::Exact(w) => w.len(),
            Weights::Float(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weight `i` as a float, e.g. for use as a sampling probability.
    pub fn as_f64(&self, i: usize) -> f64 {
        match self {
            Weights::Exact(w) => w[i].to_f64().unwrap_or(f64::NAN),
            Weights::Float(w) => w[i],
        }
    }
}

/// Weights on independent transversals; only the support is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalWeighting {
    pub transversals: Vec<Transversal>,
    pub weights: Weights,
}

/// Exact-mode weighting with default enumeration cap.
pub fn solve_fractional_weighting(g: &Graph, p: &Partition) -> Result<FractionalWeighting> {
    solve_fractional_weighting_with(g, p, FractionalOptions::default())
}

/// Finds `w` on the independent transversals with `sum_{T ∋ v} w(T) = 1` for
/// every vertex, as a basic feasible solution of the incidence system.
pub fn solve_fractional_weighting_with(
    g: &Graph,
    p: &Partition,
    opts: FractionalOptions,
) -> Result<FractionalWeighting> {
    let its = enumerate_its(g, p, opts.cap)?;
    let mut covered = vec![false; g.n()];
    for t in &its {
        for &v in t.vertices() {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::Infeasible(format!(
            "vertex {v} lies in no independent transversal"
        )));
    }
    let cols: Vec<Vec<usize>> = its.iter().map(|t| t.vertices().to_vec()).collect();
    let infeasible = || Error::Infeasible("the transversal incidence system has no nonnegative solution".into());
    match opts.mode {
        SolveMode::Exact => match solve_unit_cover::<BigRational>(g.n(), &cols) {
            PhaseOne::Infeasible => Err(infeasible()),
            PhaseOne::Feasible(x) => {
                let (ts, ws): (Vec<_>, Vec<_>) = its.into_iter().zip(x).filter(|(_, w)| !w.is_zero()).unzip();
                Ok(FractionalWeighting {
                    transversals: ts,
                    weights: Weights::Exact(ws),
                })
            }
        },
        SolveMode::Float => match solve_unit_cover::<f64>(g.n(), &cols) {
            PhaseOne::Infeasible => Err(infeasible()),
            PhaseOne::Feasible(x) => {
                let (ts, ws): (Vec<_>, Vec<_>) = its
                    .into_iter()
                    .zip(x)
                    .filter(|(_, w)| w.abs() > FLOAT_TOLERANCE)
                    .unzip();
                Ok(FractionalWeighting {
                    transversals: ts,
                    weights: Weights::Float(ws),
                })
            }
        },
    }
}

/// True iff every weight is in `[0, 1]`, every transversal is an independent
/// transversal of `p`, and every vertex sum is one (exactly, or within
/// `1e-9` for float weights).
pub fn verify_weighting(g: &Graph, p: &Partition, w: &FractionalWeighting) -> bool {
    if w.transversals.len() != w.weights.len() || g.n() != p.n() {
        return false;
    }
    let legal = w.transversals.iter().all(|t| {
        Transversal::new(t.vertices().to_vec(), p.classes()).is_ok() && t.is_independent(g)
    });
    if !legal {
        return false;
    }
    match &w.weights {
        Weights::Exact(ws) => {
            let one = BigRational::one();
            if ws.iter().any(|x| x.is_negative() || *x > one) {
                return false;
            }
            let mut sums = vec![BigRational::zero(); g.n()];
            for (t, x) in w.transversals.iter().zip(ws) {
                for &v in t.vertices() {
                    sums[v] += x;
                }
            }
            sums.iter().all(|s| *s == one)
        }
        Weights::Float(ws) => {
            if ws.iter().any(|&x| !(-FLOAT_TOLERANCE..=1.0 + FLOAT_TOLERANCE).contains(&x)) {
                return false;
            }
            let mut sums = vec![0.0; g.n()];
            for (t, &x) in w.transversals.iter().zip(ws) {
                for &v in t.vertices() {
                    sums[v] += x;
                }
            }
            sums.iter().all(|s| (s - 1.0).abs() <= FLOAT_TOLERANCE)
        }
    }
}

/// One serialized weighting entry; vertex ids are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub vertices: Vec<usize>,
    pub weight: serde_json::Value,
}

fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

impl FractionalWeighting {
    /// Exact weights serialize as `"p/q"` strings, float weights as numbers.
    pub fn to_entries(&self) -> Vec<WeightEntry> {
        self.transversals
            .iter()
            .enumerate()
            .map(|(i, t)| WeightEntry {
                vertices: t.vertices().iter().map(|v| v + 1).collect(),
                weight: match &self.weights {
                    Weights::Exact(w) => serde_json::Value::String(ratio_string(&w[i])),
                    Weights::Float(w) => serde_json::json!(w[i]),
                },
            })
            .collect()
    }

    pub fn from_entries(entries: &[WeightEntry], p: &Partition) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        let mut transversals = Vec::with_capacity(entries.len());
        for e in entries {
            let vs = e
                .vertices
                .iter()
                .map(|&v| v.checked_sub(1).ok_or_else(|| bad("vertex ids are 1-based")))
                .collect::<Result<Vec<_>>>()?;
            transversals.push(Transversal::new(vs, p.classes())?);
        }
        let weights = if entries.iter().all(|e| e.weight.is_string()) {
            Weights::Exact(
                entries
                    .iter()
                    .map(|e| e.weight.as_str().and_then(parse_ratio).ok_or_else(|| bad("bad ratio weight")))
                    .collect::<Result<_>>()?,
            )
        } else {
            Weights::Float(
                entries
                    .iter()
                    .map(|e| e.weight.as_f64().ok_or_else(|| bad("bad float weight")))
                    .collect::<Result<_>>()?,
            )
        };
        Ok(FractionalWeighting { transversals, weights })
    }
}
