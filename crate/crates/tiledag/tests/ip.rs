use proptest::prelude::*;
use tiledag::ip::{
    check_feasible, emit_ip, emit_ip_with, horizon_for, schedule_to_assignment, Family, IpModel,
    IpOptions,
};
use tiledag::qr::{tiled_graph, KernelFamily, TiledAlgo};
use tiledag::sched::{list_schedule, Policy, Schedule};
use tiledag::{build_from_trace, TaskGraph, WeightModel};

fn qr_graph(p: usize, q: usize, algo: TiledAlgo) -> TaskGraph {
    let list = algo.elimination_list(p, q).unwrap();
    build_from_trace(tiled_graph(&list, KernelFamily::TT).unwrap()).unwrap()
}

fn schedule(g: &TaskGraph, procs: usize, policy: Policy) -> Schedule {
    list_schedule(g, &WeightModel::QrFull, procs, policy).unwrap()
}

fn algos(p: usize, q: usize) -> Vec<TiledAlgo> {
    vec![
        TiledAlgo::FlatTree,
        TiledAlgo::Fibonacci,
        TiledAlgo::Greedy,
        TiledAlgo::BinaryTree,
        TiledAlgo::PlasmaTree(p.min(2)),
        TiledAlgo::Asap,
        TiledAlgo::GrASAP(q.min(2)),
    ]
}

#[test]
fn grasap_five_by_five_on_eleven_processors_is_feasible() {
    let g = qr_graph(5, 5, TiledAlgo::GrASAP(1));
    let s = schedule(&g, 11, Policy::MaxCp);
    assert_eq!(s.makespan, 80);
    let m = emit_ip(5, 5, horizon_for(s.makespan)).unwrap();
    let a = schedule_to_assignment(&m, &g, &s).unwrap();
    let f = check_feasible(&m, &a);
    assert!(
        f.is_feasible(),
        "{:?}",
        &f.violations[..f.violations.len().min(5)]
    );
    assert_eq!(a.get("total_time"), 40);
}

#[test]
fn zeroing_before_triangularization_violates_group_three() {
    let g = qr_graph(5, 5, TiledAlgo::GrASAP(1));
    let s = schedule(&g, 11, Policy::MaxCp);
    let m = emit_ip(5, 5, horizon_for(s.makespan)).unwrap();
    let mut a = schedule_to_assignment(&m, &g, &s).unwrap();
    // Tile (2,1) is zeroed by (1,1) in every tree; finish it before GEQRT(2,1).
    let x = a.get("x_2_1");
    assert!(a.get("z_2_1_1") > x);
    a.set("z_2_1_1", x - 1);
    let f = check_feasible(&m, &a);
    assert!(!f.is_feasible());
    assert!(
        f.groups().iter().any(|g| g.starts_with("g3_")),
        "{:?}",
        f.groups()
    );
}

#[test]
fn single_tile_is_one_geqrt() {
    let g = qr_graph(1, 1, TiledAlgo::Greedy);
    let s = schedule(&g, 1, Policy::MaxCp);
    let m = emit_ip(1, 1, horizon_for(s.makespan)).unwrap();
    let a = schedule_to_assignment(&m, &g, &s).unwrap();
    assert_eq!(a.get("x_1_1"), 2);
    assert!(check_feasible(&m, &a).is_feasible());
}

#[test]
fn two_by_two_fixes_above_diagonal_and_one_zeroing() {
    let m = emit_ip(2, 2, 30).unwrap();
    let lp = m.to_lp();
    assert!(lp.contains(" g10__i1_k2: x_1_2 = 0\n"));
    assert_eq!(m.group_count("g9"), 1);
    assert!(lp.contains(" g9__i2_k1: zhat_2_1_1 + zhat_2_2_1 = 1\n"));
}

/// Independent count of index tuples: rows range over `1..=p`, columns over
/// `1..=q`, pairs `l < k` counted as `q (q - 1) / 2`.
#[test]
fn family_counts_match_index_ranges() {
    let (p, q) = (3usize, 2usize);
    let m = emit_ip(p, q, 40).unwrap();
    let pairs = q * (q - 1) / 2;
    let expect = [
        (Family::W, p * q * q),
        (Family::X, p * q),
        (Family::Y, p * p * q * q),
        (Family::YHat, p * p * q * q),
        (Family::Z, p * p * q),
        (Family::ZHat, p * p * q),
        (Family::Delta(1), p * p * p * pairs),
        (Family::Delta(4), p * p * p * pairs),
        (Family::Delta(5), p * p * p * q),
        (Family::Delta(6), p * p * p * q),
        (Family::A1, p * p * p * q),
        (Family::C, p * p * p * q),
        (Family::D, p * p * p * (q - 1)),
        (Family::F, p * p * p * (q - 1)),
        (Family::TotalTime, 1),
    ];
    for (fam, n) in expect {
        assert_eq!(m.family_count(fam), n, "{fam:?}");
    }
}

/// Row counts of several groups against closed-form tuple counts.
#[test]
fn group_counts_match_enumeration() {
    for p in 1..=4usize {
        for q in 1..=p {
            let m = emit_ip(p, q, 50).unwrap();
            let pairs = q * (q - 1) / 2;
            // Triples l1 < l < k, each with rows i >= l.
            let triples: usize = (1..=q)
                .map(|k| (1..k).map(|l| (l - 1) * (p - l + 1)).sum::<usize>())
                .sum();
            let below: usize = (1..=q).map(|k| p.saturating_sub(k)).sum();
            let on_or_below: usize = (1..=q).map(|k| p + 1 - k).sum();
            assert_eq!(m.group_count("g1a_i"), triples, "{p}x{q}");
            assert_eq!(m.group_count("g1a_ii"), triples * p, "{p}x{q}");
            assert_eq!(m.group_count("g1c_iii_1"), p * p * p * pairs, "{p}x{q}");
            assert_eq!(m.group_count("g7"), p * p * p * q, "{p}x{q}");
            assert_eq!(m.group_count("g8"), on_or_below, "{p}x{q}");
            assert_eq!(m.group_count("g9"), below, "{p}x{q}");
            assert_eq!(m.group_count("g10"), q * (q - 1) / 2, "{p}x{q}");
            assert_eq!(m.group_count("prec_order"), p * p * p * (q - 1), "{p}x{q}");
            assert_eq!(m.group_count("obj_y"), p * p * q * q, "{p}x{q}");
        }
    }
}

#[test]
fn emission_is_deterministic() {
    assert_eq!(
        emit_ip(3, 2, 25).unwrap().to_lp(),
        emit_ip(3, 2, 25).unwrap().to_lp()
    );
    let opts = IpOptions { capacity: Some(2) };
    assert_eq!(
        emit_ip_with(3, 3, 30, opts).unwrap().to_lp(),
        emit_ip_with(3, 3, 30, opts).unwrap().to_lp()
    );
}

#[test]
fn lp_text_has_all_sections() {
    let lp = emit_ip_with(2, 2, 12, IpOptions { capacity: Some(1) })
        .unwrap()
        .to_lp();
    let order = [
        "Minimize",
        "Subject To",
        "Bounds",
        "General",
        "Binary",
        "End",
    ];
    let pos: Vec<usize> = order
        .iter()
        .map(|s| lp.find(&format!("\n{s}\n")).or(lp.find(s)).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert!(lp.contains(" 0 <= x_1_1 <= 12\n"));
    assert!(lp.contains("cap__t1:"));
}

fn check(m: &IpModel, g: &TaskGraph, s: &Schedule) -> Vec<String> {
    let a = schedule_to_assignment(m, g, s).unwrap();
    check_feasible(m, &a)
        .violations
        .iter()
        .take(3)
        .map(|v| v.row.clone())
        .collect()
}

/// Every list schedule of every tree up to 5x5 maps to a feasible
/// assignment, both without and with the capacity extension at the
/// schedule's processor count.
#[test]
fn simulator_schedules_are_feasible() {
    for p in 1..=5 {
        for q in 1..=p {
            for procs in [1usize, 2, 3, 7] {
                let mut runs = Vec::new();
                for algo in algos(p, q) {
                    let g = qr_graph(p, q, algo);
                    for pol in [Policy::MaxCp, Policy::MinCp, Policy::RandomCp(procs as u64)] {
                        let s = schedule(&g, procs, pol);
                        runs.push((algo, g.clone(), s));
                    }
                }
                let horizon = horizon_for(runs.iter().map(|r| r.2.makespan).max().unwrap());
                let plain = emit_ip(p, q, horizon).unwrap();
                let capped = emit_ip_with(
                    p,
                    q,
                    horizon,
                    IpOptions {
                        capacity: Some(procs),
                    },
                )
                .unwrap();
                for (algo, g, s) in &runs {
                    for m in [&plain, &capped] {
                        assert_eq!(
                            check(m, g, s),
                            Vec::<String>::new(),
                            "{p}x{q} {algo:?} procs {procs}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn capacity_extension_accepts_schedules_at_their_processor_count() {
    for (p, q, algo, procs) in [
        (3, 2, TiledAlgo::Greedy, 2),
        (4, 3, TiledAlgo::FlatTree, 3),
        (5, 5, TiledAlgo::GrASAP(1), 4),
    ] {
        let g = qr_graph(p, q, algo);
        let s = schedule(&g, procs, Policy::MaxCp);
        let m = emit_ip_with(
            p,
            q,
            horizon_for(s.makespan),
            IpOptions {
                capacity: Some(procs),
            },
        )
        .unwrap();
        assert_eq!(check(&m, &g, &s), Vec::<String>::new(), "{p}x{q} {algo:?}");
    }
}

#[test]
fn capacity_extension_rejects_too_many_parallel_kernels() {
    let g = qr_graph(3, 2, TiledAlgo::Greedy);
    let s = schedule(&g, 3, Policy::MaxCp);
    let m = emit_ip_with(
        3,
        2,
        horizon_for(s.makespan),
        IpOptions { capacity: Some(1) },
    )
    .unwrap();
    let a = schedule_to_assignment(&m, &g, &s).unwrap();
    let f = check_feasible(&m, &a);
    assert!(f.groups().contains(&"cap"), "{:?}", f.groups());
}

#[test]
fn non_tt_graphs_are_rejected() {
    let list = TiledAlgo::FlatTree.elimination_list(3, 2).unwrap();
    let g = build_from_trace(tiled_graph(&list, KernelFamily::TS).unwrap()).unwrap();
    let s = schedule(&g, 2, Policy::MaxCp);
    let m = emit_ip(3, 2, horizon_for(s.makespan)).unwrap();
    assert!(schedule_to_assignment(&m, &g, &s).is_err());
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let g = qr_graph(3, 2, TiledAlgo::Greedy);
    let s = schedule(&g, 2, Policy::MaxCp);
    let m = emit_ip(2, 2, horizon_for(s.makespan)).unwrap();
    assert!(schedule_to_assignment(&m, &g, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_schedules_are_feasible(p in 1usize..=4, dq in 0usize..4, procs in 1usize..6, seed in any::<u64>(), a in 0usize..7) {
        let q = p - dq.min(p - 1);
        let algo = algos(p, q)[a];
        let g = qr_graph(p, q, algo);
        let s = schedule(&g, procs, Policy::RandomCp(seed));
        let m = emit_ip(p, q, horizon_for(s.makespan)).unwrap();
        prop_assert_eq!(check(&m, &g, &s), Vec::<String>::new());
    }
}
