mod common;

use common::golden::{BOUNDS_5X5, LOST_AREA_5X5, QR_5X5, QR_5X5_UNMATCHED};
use num_rational::Ratio;
use tiledag::cholesky::{chol_synced_graph, gen_chol_fact, CholFactVariant, SyncVariant};
use tiledag::qr::{tiled_graph, KernelFamily, TiledAlgo};
use tiledag::sched::{
    alap_bound, alpha_min, bounds_table, gamma_ub, list_schedule, list_schedule_with, lost_area,
    lower_bound_factor, optimal_makespan, rooftop_bound, sync_chol_schedule, Policy,
};
use tiledag::{
    alap_profile, annotate_cp, build_from_trace, Edge, EdgeCause, KernelKind, Task, TaskGraph,
    TileRef, WeightModel,
};

fn chol(t: usize) -> TaskGraph {
    build_from_trace(gen_chol_fact(t, CholFactVariant::RightLooking).unwrap()).unwrap()
}

fn qr(p: usize, q: usize, algo: TiledAlgo) -> TaskGraph {
    build_from_trace(tiled_graph(&algo.elimination_list(p, q).unwrap(), KernelFamily::TT).unwrap())
        .unwrap()
}

fn two(r: Ratio<u64>) -> String {
    format!("{:.2}", *r.numer() as f64 / *r.denom() as f64)
}

#[test]
fn cholesky_bounds_table_to_two_decimals() {
    let rows = bounds_table(&alap_profile(&chol(5), &WeightModel::Cholesky), 10).unwrap();
    for (row, (p, t, s, e)) in rows.iter().zip(BOUNDS_5X5) {
        assert_eq!(row.p, p);
        assert_eq!(
            (
                two(row.t_alap).as_str(),
                two(row.speedup).as_str(),
                two(row.efficiency).as_str()
            ),
            (t, s, e),
            "p={p}"
        );
    }
}

#[test]
fn cholesky_lost_area_pairs() {
    let prof = alap_profile(&chol(5), &WeightModel::Cholesky);
    let pairs: Vec<(u64, u64)> = (1..=5).map(|p| (p, lost_area(&prof, p).unwrap())).collect();
    assert_eq!(pairs, LOST_AREA_5X5);
}

#[test]
fn rooftop_sits_below_alap_bound() {
    let g = chol(5);
    let roof = rooftop_bound(&g, &WeightModel::Cholesky, 3).unwrap();
    assert_eq!(roof, Ratio::new(125, 3));
    assert!(roof < alap_bound(&g, &WeightModel::Cholesky, 3).unwrap());
    assert_eq!(
        rooftop_bound(&g, &WeightModel::Cholesky, 1).unwrap(),
        Ratio::from_integer(125)
    );
}

#[test]
fn singleton_bound_collapses_to_its_weight() {
    let g = TaskGraph::from_edges(vec![Task::new(0, KernelKind::Gemm, &[])], vec![]).unwrap();
    let w = WeightModel::Custom([4; 16]);
    assert_eq!(lost_area(&alap_profile(&g, &w), 3).unwrap(), 8);
    assert_eq!(alap_bound(&g, &w, 3).unwrap(), Ratio::from_integer(4));
}

#[test]
fn lower_bound_factor_and_gamma() {
    assert_eq!(lower_bound_factor(30, 1).unwrap(), Ratio::from_integer(30));
    assert_eq!(lower_bound_factor(30, 4).unwrap(), Ratio::new(120, 7));
    // Compute-bound regime: T/P >= cp gives gamma_seq * P.
    assert_eq!(gamma_ub(2.5, 1000.0, 10.0, 8).unwrap(), 20.0);
    assert_eq!(gamma_ub(2.5, 1000.0, 500.0, 8).unwrap(), 5.0);
}

#[test]
fn qr_five_by_five_schedule_lengths() {
    let trees = [
        TiledAlgo::GrASAP(1),
        TiledAlgo::Greedy,
        TiledAlgo::Fibonacci,
        TiledAlgo::FlatTree,
    ];
    let graphs: Vec<TaskGraph> = trees.iter().map(|&a| qr(5, 5, a)).collect();
    for (n, row) in QR_5X5.iter().enumerate() {
        let procs = n + 1;
        let bound = alap_bound(&graphs[0], &WeightModel::QrFull, procs as u64).unwrap();
        assert_eq!(bound.ceil().to_integer(), row[0], "bound p={procs}");
        for (col, g) in graphs.iter().enumerate() {
            let s = list_schedule(g, &WeightModel::QrFull, procs, Policy::MaxCp).unwrap();
            let want = QR_5X5_UNMATCHED
                .iter()
                .find(|u| u.0 == procs && u.1 == col + 1)
                .map_or(row[col + 1], |u| u.2);
            assert_eq!(s.makespan, want, "{:?} p={procs}", trees[col]);
        }
    }
}

/// The ALAP-derived bound is not a lower bound on makespans: Fibonacci
/// beats the GrASAP bound on 34x3 tiles with 10 processors.
#[test]
fn alap_bound_is_not_a_lower_bound() {
    let fib = list_schedule(
        &qr(34, 3, TiledAlgo::Fibonacci),
        &WeightModel::QrFull,
        10,
        Policy::MaxCp,
    )
    .unwrap();
    let bound = alap_bound(&qr(34, 3, TiledAlgo::GrASAP(1)), &WeightModel::QrFull, 10).unwrap();
    assert_eq!(fib.makespan, 184);
    assert_eq!(bound, Ratio::new(943, 5));
    assert_eq!(bound.to_integer(), 188);
    assert!(Ratio::from_integer(fib.makespan) < bound);
}

fn toy() -> (TaskGraph, Vec<u64>) {
    let tasks = (0..4)
        .map(|i| Task::new(i, KernelKind::Gemm, &[]).updating(&[TileRef::new(0, i as u32, 0)]))
        .collect();
    let g = TaskGraph::from_edges(
        tasks,
        vec![Edge {
            from: 2,
            to: 3,
            cause: EdgeCause::Explicit,
        }],
    )
    .unwrap();
    (g, vec![3, 3, 1, 1])
}

#[test]
fn cp_scheduling_is_not_optimal_on_the_toy() {
    let (g, w) = toy();
    let max = list_schedule_with(&g, &w, 2, Policy::MaxCp).unwrap();
    let opt = optimal_makespan(&g, &w, 2).unwrap();
    max.validate(&g, &w).unwrap();
    opt.validate(&g, &w).unwrap();
    assert_eq!((max.makespan, opt.makespan), (5, 4));
}

/// With unbounded processors every synchronized group takes the weight of
/// its heaviest kernel: POTRF 1, TRSM 3, GEMM 6 (only if the trailing
/// matrix has off-diagonal tiles), SYRK 3.
fn grouped_unbounded_oracle(t: u64) -> u64 {
    (0..t)
        .map(|i| {
            let rest = t - i - 1;
            1 + if rest > 0 { 3 + 3 } else { 0 } + if rest >= 2 { 6 } else { 0 }
        })
        .sum()
}

#[test]
fn grouped_sync_never_reaches_the_critical_path() {
    for t in 2..=12usize {
        let tt = t as u64;
        let procs = t * t;
        let grouped = sync_chol_schedule(t, procs, SyncVariant::Grouped).unwrap();
        assert_eq!(grouped.makespan, grouped_unbounded_oracle(tt), "t={t}");
        if t >= 3 {
            assert!(grouped.makespan > 9 * tt - 10);
        }
    }
    assert_eq!(grouped_unbounded_oracle(5), 47);
}

#[test]
fn relaxed_sync_reaches_the_critical_path() {
    for t in 2..=11usize {
        let procs = ((t - 1) * (t - 1)).div_ceil(2).max(1);
        let s = sync_chol_schedule(t, procs, SyncVariant::Relaxed).unwrap();
        assert_eq!(s.makespan, 9 * t as u64 - 10, "t={t}");
    }
    assert_eq!(
        sync_chol_schedule(5, 8, SyncVariant::Relaxed)
            .unwrap()
            .makespan,
        35
    );
    assert_eq!(
        sync_chol_schedule(5, 1, SyncVariant::Grouped)
            .unwrap()
            .makespan,
        125
    );
}

#[test]
fn synchronization_costs_time() {
    for t in 3..=8usize {
        for procs in 1..=8 {
            let g = sync_chol_schedule(t, procs, SyncVariant::Grouped).unwrap();
            let r = sync_chol_schedule(t, procs, SyncVariant::Relaxed).unwrap();
            let free =
                list_schedule(&chol(t), &WeightModel::Cholesky, procs, Policy::MaxCp).unwrap();
            assert!(
                g.makespan >= r.makespan && r.makespan >= free.makespan,
                "t={t} p={procs}"
            );
            let sg = chol_synced_graph(t, SyncVariant::Grouped).unwrap();
            g.validate(&sg, &sg.weights(&WeightModel::Cholesky))
                .unwrap();
        }
    }
}

#[test]
fn alpha_stays_below_one_half() {
    for t in 3..=10usize {
        let a = alpha_min(t).unwrap();
        assert_eq!(a.cp, 9 * t as u64 - 10);
        assert!(a.p_opt <= ((t - 1) * (t - 1)).div_ceil(2), "t={t}");
        assert!(a.alpha <= Ratio::new(1, 2));
        let g = chol(t);
        let at = list_schedule(&g, &WeightModel::Cholesky, a.p_opt, Policy::MaxCp).unwrap();
        assert_eq!(at.makespan, a.cp);
        if a.p_opt > 1 {
            let below =
                list_schedule(&g, &WeightModel::Cholesky, a.p_opt - 1, Policy::MaxCp).unwrap();
            assert!(below.makespan > a.cp);
        }
    }
}

#[test]
fn cholesky_cp_on_five_tiles() {
    assert_eq!(annotate_cp(&chol(5), &WeightModel::Cholesky).cp_length, 35);
}
