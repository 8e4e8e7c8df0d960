use proptest::prelude::*;
use tiledag::qr::{
    coarse_cp_oracle, coarse_schedule, coarse_times, fibonacci_cp_bounds, flattree_cp_oracle,
    tiled_graph, tiled_times, tiled_translation, total_weight, validate, verify_weight, CoarseAlgo,
    KernelFamily, TiledAlgo,
};
use tiledag::{annotate_cp, build_from_trace, WeightModel};

const COARSE: [CoarseAlgo; 3] = [
    CoarseAlgo::SamehKuck,
    CoarseAlgo::Fibonacci,
    CoarseAlgo::Greedy,
];

fn algos(p: usize, q: usize) -> Vec<TiledAlgo> {
    let mut v = vec![
        TiledAlgo::FlatTree,
        TiledAlgo::Fibonacci,
        TiledAlgo::Greedy,
        TiledAlgo::BinaryTree,
        TiledAlgo::Asap,
        TiledAlgo::GrASAP(1),
        TiledAlgo::GrASAP(q),
    ];
    v.extend(
        [1, 2, 5]
            .into_iter()
            .filter(|&bs| bs <= p)
            .map(TiledAlgo::PlasmaTree),
    );
    v
}

/// Update completion equals `10k + 6 coarse(i,k)` for every column that has
/// updates, with `coarse` the coarse-grain execution steps of the list.
#[test]
fn translation_theorem() {
    for algo in COARSE {
        for p in 2..=20 {
            for q in 2..=p {
                let (_, list) = coarse_schedule(p, q, algo).unwrap();
                let steps = coarse_times(&list).unwrap();
                let t = tiled_times(&list, KernelFamily::TT).unwrap();
                for k in 1..q {
                    for i in k + 1..=p {
                        let (lo, hi) = t.update_range(i, k).unwrap();
                        let want = tiled_translation(i, k, &steps).unwrap();
                        assert_eq!((lo, hi), (want, want), "{algo:?} {p}x{q} ({i},{k})");
                    }
                }
            }
        }
    }
}

/// Sameh-Kuck and Greedy publish tight step tables, so their closed-form
/// tables equal the execution steps.
#[test]
fn tight_tables_equal_execution_steps() {
    for algo in [CoarseAlgo::SamehKuck, CoarseAlgo::Greedy] {
        for p in 1..=20 {
            for q in 1..=p {
                let (table, list) = coarse_schedule(p, q, algo).unwrap();
                assert_eq!(coarse_times(&list).unwrap(), table, "{algo:?} {p}x{q}");
            }
        }
    }
}

#[test]
fn coarse_critical_paths_match_closed_forms() {
    for p in 2..=30 {
        for q in 1..=p {
            for algo in [CoarseAlgo::SamehKuck, CoarseAlgo::Fibonacci] {
                let (table, _) = coarse_schedule(p, q, algo).unwrap();
                assert_eq!(
                    table.cp(),
                    coarse_cp_oracle(p, q, algo).unwrap(),
                    "{algo:?} {p}x{q}"
                );
            }
        }
    }
}

#[test]
fn flat_tree_closed_form() {
    for p in 2..=30 {
        for q in 2..=p {
            let t = tiled_times(
                &TiledAlgo::FlatTree.elimination_list(p, q).unwrap(),
                KernelFamily::TT,
            )
            .unwrap();
            assert_eq!(t.cp, flattree_cp_oracle(p, q).unwrap(), "{p}x{q}");
        }
    }
}

/// The interval is derived with all `q` columns eliminated, so square
/// matrices (whose last column needs no zeroing) are left out.
#[test]
fn fibonacci_cp_lies_in_its_interval() {
    for p in 2..=30 {
        for q in 1..p {
            let (lo, hi) = fibonacci_cp_bounds(p, q).unwrap();
            let cp = tiled_times(
                &TiledAlgo::Fibonacci.elimination_list(p, q).unwrap(),
                KernelFamily::TT,
            )
            .unwrap()
            .cp;
            assert!(
                lo < cp as i64 && (cp as i64) < hi,
                "{p}x{q}: {lo} < {cp} < {hi}"
            );
        }
    }
}

/// The kernel weights of every tree and family sum to `6pq^2 - 2q^3`.
#[test]
fn flop_conservation() {
    for p in 1..=12usize {
        for q in 1..=p {
            let expect = (6 * p * q * q - 2 * q * q * q) as u64;
            assert_eq!(total_weight(p, q).unwrap(), expect);
            for algo in algos(p, q) {
                let list = algo.elimination_list(p, q).unwrap();
                for fam in [KernelFamily::TT, KernelFamily::TS] {
                    let g = build_from_trace(tiled_graph(&list, fam).unwrap()).unwrap();
                    assert!(verify_weight(&g, p, q).unwrap(), "{algo:?} {fam:?} {p}x{q}");
                    assert_eq!(tiled_times(&list, fam).unwrap().total_weight, expect);
                }
            }
        }
    }
}

/// The recursion and the built graph agree on the critical path, and TS
/// kernels never beat TT kernels on the same list.
#[test]
fn ts_never_shortens_the_critical_path() {
    for p in 1..=10 {
        for q in 1..=p {
            for algo in algos(p, q) {
                let list = algo.elimination_list(p, q).unwrap();
                let tt = tiled_times(&list, KernelFamily::TT).unwrap().cp;
                let ts = tiled_times(&list, KernelFamily::TS).unwrap().cp;
                let g = build_from_trace(tiled_graph(&list, KernelFamily::TT).unwrap()).unwrap();
                assert_eq!(
                    annotate_cp(&g, &WeightModel::QrFull).cp_length,
                    tt,
                    "{algo:?} {p}x{q}"
                );
                assert!(ts >= tt, "{algo:?} {p}x{q}");
            }
        }
    }
}

#[test]
fn greedy_is_never_beaten_by_flat_tree() {
    for p in 1..=25 {
        for q in 1..=p {
            let cp = |a: TiledAlgo| {
                tiled_times(&a.elimination_list(p, q).unwrap(), KernelFamily::TT)
                    .unwrap()
                    .cp
            };
            assert!(cp(TiledAlgo::Greedy) <= cp(TiledAlgo::FlatTree), "{p}x{q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lists_are_valid_and_graphs_acyclic(p in 1usize..=16, dq in 0usize..16, a in 0usize..10) {
        let q = p - dq.min(p - 1);
        let all = algos(p, q);
        let algo = all[a % all.len()];
        let list = algo.elimination_list(p, q).unwrap();
        prop_assert_eq!(validate(&list), Ok(()));
        let g = build_from_trace(tiled_graph(&list, KernelFamily::TT).unwrap()).unwrap();
        prop_assert_eq!(g.topological().count(), g.len());
        for e in g.edges() {
            prop_assert!(e.from < e.to);
        }
    }
}
