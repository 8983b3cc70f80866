use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strongcol::absorber::{absorb, build_absorbing_set, find_absorbers_for, AbsorberParams};
use strongcol::instances::{perfect_matching_graph, random_bounded_degree, random_equal_partition};
use strongcol::nibble::{disjoint_independent, partial_strong_colouring};
use strongcol::oracle::{for_each_equal_partition, is_strongly_r_colourable};
use strongcol::{
    find_it_partition, parse_graph, parse_partition, solve_fractional_weighting, strong_colouring,
    verify_it_partition, verify_weighting, write_graph, write_partition, Error, Graph, NibbleParams, NodeBudget,
    OracleBudget, Partition, PipelineConfig, VertexSet,
};

fn instance(k: usize, r: usize, delta: usize, seed: u64) -> (Graph, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_bounded_degree(k * r, delta, &mut rng).unwrap();
    let p = random_equal_partition(k * r, r, &mut rng).unwrap();
    (g, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pipeline_output_always_verifies(k in 2usize..=4, r in 4usize..=12, seed in any::<u64>()) {
        let (g, p) = instance(k, r, r / 3, seed);
        let cfg = PipelineConfig { seed, ..Default::default() };
        match strong_colouring(&g, &p, 1.0, &cfg) {
            Ok(out) => prop_assert!(verify_it_partition(&g, &p, &out.transversals).valid),
            // Unsolvable is a proof from exhaustive search; double-check with the oracle routine.
            Err(Error::Unsolvable) => {
                prop_assert!(find_it_partition(&g, &p, &mut NodeBudget::unlimited()).unwrap().is_none())
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn weighting_exact_when_r_at_least_twice_degree(k in 2usize..=3, r in 2usize..=6, seed in any::<u64>()) {
        let (g, p) = instance(k, r, r / 2, seed);
        let w = solve_fractional_weighting(&g, &p).unwrap();
        prop_assert!(verify_weighting(&g, &p, &w));
    }

    #[test]
    fn text_formats_round_trip(k in 1usize..=4, r in 1usize..=6, seed in any::<u64>()) {
        let (g, p) = instance(k, r, 2.min(k * r - 1), seed);
        let g2 = parse_graph(&write_graph(&g)).unwrap();
        let p2 = parse_partition(&write_partition(&p), g.n()).unwrap();
        prop_assert_eq!(write_graph(&g2), write_graph(&g));
        prop_assert_eq!(write_partition(&p2), write_partition(&p));
    }
}

#[test]
fn partial_colouring_meets_target_on_matching_graphs() {
    let p = Partition::consecutive(3, 30).unwrap();
    let g = perfect_matching_graph(&p, 4).unwrap();
    let params = NibbleParams {
        delta: 0.1,
        ..Default::default()
    };
    let out = partial_strong_colouring(&g, &p, 0.1, &params).unwrap();
    assert!(out.transversals.len() >= 27);
    assert!(disjoint_independent(&g, &p, &out.transversals));
}

#[test]
fn absorbing_family_absorbs_its_own_leftover() {
    let p = Partition::consecutive(3, 30).unwrap();
    let g = perfect_matching_graph(&p, 9).unwrap();
    let params = AbsorberParams::for_classes(3);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut family = build_absorbing_set(&g, &p, &params, &mut rng)
        .or_else(|e| match e {
            Error::AbsorberBudgetExhausted { family, .. } => Ok(*family),
            e => Err(e),
        })
        .unwrap();
    assert!(family.is_pairwise_disjoint());
    if family.is_empty() {
        return;
    }
    // One vertex per class, outside the family, that some absorber accepts.
    let used = family.vertices();
    let s: Vec<usize> = (0..3)
        .map(|c| *p.class(c).iter().find(|v| !used.contains(v)).unwrap())
        .collect();
    let set = VertexSet::new(s.iter().copied(), &p).unwrap();
    match absorb(&g, &p, &mut family, &set) {
        Ok(ts) => {
            // Absorbed transversals plus the untouched members split A ∪ S.
            let all: Vec<_> = ts.into_iter().chain(family.unconsumed_transversals()).collect();
            assert!(all.iter().all(|t| t.is_independent(&g)));
            let mut covered: Vec<usize> = all.iter().flat_map(|t| t.vertices().to_vec()).collect();
            covered.sort_unstable();
            let mut expected: Vec<usize> = used.iter().chain(&s).copied().collect();
            expected.sort_unstable();
            assert_eq!(covered, expected);
            assert_eq!(family.assignments().len(), 1);
        }
        Err(Error::AbsorptionFailure(_)) => assert!(family.assignments().is_empty()),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn absorbers_found_for_every_balanced_triple_of_a_sparse_graph() {
    let p = Partition::consecutive(3, 12).unwrap();
    let g = perfect_matching_graph(&p, 2).unwrap();
    for a in 0..3 {
        let s = [p.class(0)[a], p.class(1)[a], p.class(2)[a]];
        let found = find_absorbers_for(&g, &p, &s, 1).unwrap();
        assert_eq!(found.len(), 1);
        let cand = &found[0];
        assert!(cand.internal.iter().all(|t| t.is_independent(&g)));
        assert!(cand.with_set.iter().all(|t| t.is_independent(&g)));
    }
}

/// Wherever the oracle says the padded graph is strongly colourable, the
/// pipeline colours every balanced partition of it.
#[test]
fn pipeline_agrees_with_oracle_on_paths() {
    let g = Graph::new(6, (0..5).map(|i| (i, i + 1))).unwrap();
    assert!(!is_strongly_r_colourable(&g, 2, OracleBudget::default()).unwrap());
    assert!(is_strongly_r_colourable(&g, 3, OracleBudget::default()).unwrap());
    let mut seen = 0;
    let _ = for_each_equal_partition(6, 3, |blocks| {
        let p = Partition::new(6, blocks.to_vec()).unwrap();
        let out = strong_colouring(&g, &p, 0.5, &PipelineConfig::default()).unwrap();
        assert!(verify_it_partition(&g, &p, &out.transversals).valid);
        seen += 1;
        std::ops::ControlFlow::Continue(())
    });
    assert_eq!(seen, 10);
}

/// With `r >= (2 + eps) Δ` every pin pair has a positive number of
/// completions, and the count grows with `r` on a fixed degree bound.
#[test]
fn pinned_counts_positive_and_growing() {
    let delta = 2;
    let mut mean = Vec::new();
    for r in [5, 7, 9] {
        let mut total = 0u64;
        let mut pairs = 0u64;
        for seed in 0..10 {
            let (g, p) = instance(3, r, delta, seed);
            for pin in 0..3 {
                let class = p.class(pin);
                let c = strongcol::count_pinned_its(&g, p.classes(), pin, class[0], class[1], 1_000_000).unwrap();
                assert!(c > 0, "r = {r}, seed {seed}, pin {pin}");
                total += c;
                pairs += 1;
            }
        }
        mean.push(total as f64 / pairs as f64);
    }
    assert!(mean.windows(2).all(|w| w[0] < w[1]), "{mean:?}");
}
