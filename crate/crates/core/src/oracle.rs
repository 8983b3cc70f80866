//! Brute-force ground truth for tiny graphs: strong `r`-colourability over
//! every partition into classes of size `r`, and the strong chromatic number.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instances::random_equal_partition;
use crate::it::{find_it_partition, NodeBudget};
use crate::partition::Partition;
use crate::transversal::verify_it_partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Partitions a single colourability question may enumerate.
    pub max_partitions: u64,
    /// Search nodes per partition.
    pub node_budget: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_partitions: 2_000_000,
            node_budget: 1_000_000,
        }
    }
}

/// A graph padded with isolated vertices up to a multiple of `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaddedInstance {
    pub graph: Graph,
    pub base_n: usize,
    pub pad_count: usize,
    pub r: usize,
}

/// Adds `r * ceil(n / r) - n` isolated vertices after the original ones.
pub fn pad(g: &Graph, r: usize) -> PaddedInstance {
    assert!(r >= 1, "class size must be positive");
    let pad_count = g.n().div_ceil(r) * r - g.n();
    PaddedInstance {
        graph: g.with_isolated(pad_count),
        base_n: g.n(),
        pad_count,
        r,
    }
}

/// Number of partitions of an `n`-set into blocks of size `r`, saturating.
pub fn equal_partition_count(n: usize, r: usize) -> u128 {
    if r == 0 || !n.is_multiple_of(r) {
        return 0;
    }
    // Product over blocks of C(remaining - 1, r - 1).
    let mut total: u128 = 1;
    let mut remaining = n;
    while remaining > 0 {
        let mut c: u128 = 1;
        for i in 0..(r - 1) as u128 {
            c = c * (remaining as u128 - 1 - i) / (i + 1);
        }
        total = total.saturating_mul(c);
        remaining -= r;
    }
    total
}

/// Visits every partition of `0..n` into blocks of size `r` exactly once.
///
/// Blocks are listed in increasing order of their least element and each
/// block is ascending, so no partition is produced twice.
pub fn for_each_equal_partition<F>(n: usize, r: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    if r == 0 || !n.is_multiple_of(r) {
        return ControlFlow::Continue(());
    }
    let mut used = vec![false; n];
    let mut blocks = Vec::with_capacity(n / r);
    rec(n, r, &mut used, &mut blocks, &mut visit)
}

fn rec<F>(n: usize, r: usize, used: &mut [bool], blocks: &mut Vec<Vec<usize>>, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    let Some(first) = (0..n).find(|&v| !used[v]) else {
        return visit(blocks);
    };
    used[first] = true;
    let free: Vec<usize> = (first + 1..n).filter(|&v| !used[v]).collect();
    let mut block = vec![first];
    let flow = choose(&free, r - 1, 0, &mut block, &mut |block: &[usize]| {
        for &v in block {
            used[v] = true;
        }
        blocks.push(block.to_vec());
        let flow = rec(n, r, used, blocks, visit);
        blocks.pop();
        for &v in &block[1..] {
            used[v] = false;
        }
        flow
    });
    used[first] = false;
    flow
}

fn choose<F>(pool: &[usize], need: usize, from: usize, block: &mut Vec<usize>, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if need == 0 {
        return f(block);
    }
    for i in from..=pool.len().saturating_sub(need) {
        if i >= pool.len() {
            break;
        }
        block.push(pool[i]);
        let flow = choose(pool, need - 1, i + 1, block, f);
        block.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// True iff every partition of the padded vertex set into classes of size
/// `r` admits a partition into independent transversals.
pub fn is_strongly_r_colourable(g: &Graph, r: usize, budget: OracleBudget) -> Result<bool> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let padded = pad(g, r);
    let n = padded.graph.n();
    let count = equal_partition_count(n, r);
    if count > budget.max_partitions as u128 {
        return Err(Error::BudgetExceeded(budget.max_partitions));
    }
    let mut outcome = Ok(true);
    let _ = for_each_equal_partition(n, r, |blocks| {
        let p = match Partition::new(n, blocks.to_vec()) {
            Ok(p) => p,
            Err(e) => {
                outcome = Err(e);
                return ControlFlow::Break(());
            }
        };
        match find_it_partition(&padded.graph, &p, &mut NodeBudget::new(budget.node_budget)) {
            Ok(Some(_)) => ControlFlow::Continue(()),
            Ok(None) => {
                outcome = Ok(false);
                ControlFlow::Break(())
            }
            Err(Error::Timeout(limit)) => {
                outcome = Err(Error::BudgetExceeded(limit));
                ControlFlow::Break(())
            }
            Err(e) => {
                outcome = Err(e);
                ControlFlow::Break(())
            }
        }
    });
    outcome
}

/// Least `r` (searching `1..=n`, each tested independently) for which `g`
/// is strongly `r`-colourable. The null graph gets 1.
pub fn strong_chromatic_number(g: &Graph, budget: OracleBudget) -> Result<usize> {
    for r in 1..=g.n().max(1) {
        if is_strongly_r_colourable(g, r, budget)? {
            return Ok(r);
        }
    }
    unreachable!("a single class of size n always splits into singletons")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CptMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CptReport {
    pub triangles: usize,
    pub mode: CptMode,
    pub partitions_checked: u64,
    pub holds: bool,
    /// A triple partition without a split into three independent
    /// transversals, 0-based.
    pub counterexample: Option<Vec<Vec<usize>>>,
}

/// Checks that `C_{3m}` together with triangles on the blocks of every (or
/// each sampled) partition into `m` triples is 3-colourable, i.e. that the
/// triple partition splits into three independent transversals. Each split
/// found is verified before it counts.
pub fn check_all_partitions_cpt(m: usize, mode: CptMode, budget: OracleBudget) -> Result<CptReport> {
    if m == 0 {
        return Err(Error::Precondition("at least one triangle is required".into()));
    }
    let n = 3 * m;
    let g = Graph::cycle(n)?;
    let mut report = CptReport {
        triangles: m,
        mode,
        partitions_checked: 0,
        holds: true,
        counterexample: None,
    };
    let check = |p: Partition, report: &mut CptReport| -> Result<bool> {
        report.partitions_checked += 1;
        match find_it_partition(&g, &p, &mut NodeBudget::new(budget.node_budget)) {
            Ok(Some(ts)) if verify_it_partition(&g, &p, &ts).valid => Ok(true),
            Ok(Some(_)) => Err(Error::PipelineFailure("split failed verification".into())),
            Ok(None) => {
                report.holds = false;
                report.counterexample = Some(p.iter().map(<[usize]>::to_vec).collect());
                Ok(false)
            }
            Err(Error::Timeout(limit)) => Err(Error::BudgetExceeded(limit)),
            Err(e) => Err(e),
        }
    };
    match mode {
        CptMode::Exhaustive => {
            if equal_partition_count(n, 3) > budget.max_partitions as u128 {
                return Err(Error::BudgetExceeded(budget.max_partitions));
            }
            let mut failure = None;
            let _ = for_each_equal_partition(n, 3, |blocks| {
                let step = Partition::new(n, blocks.to_vec()).and_then(|p| check(p, &mut report));
                match step {
                    Ok(true) => ControlFlow::Continue(()),
                    Ok(false) => ControlFlow::Break(()),
                    Err(e) => {
                        failure = Some(e);
                        ControlFlow::Break(())
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
        CptMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let p = random_equal_partition(n, 3, &mut rng)?;
                if !check(p, &mut report)? {
                    break;
                }
            }
        }
    }
    Ok(report)
}
