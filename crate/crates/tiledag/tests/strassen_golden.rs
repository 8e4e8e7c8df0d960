mod common;

use common::golden::{STRASSEN_FLOPS, STRASSEN_NB, STRASSEN_P128, STRASSEN_TASKS};
use tiledag::strassen::{
    gen_strassen, gen_tiled_gemm, r_min, strassen_counts, tiled_gemm_report_tasks, StrassenParams,
};
use tiledag::{annotate_cp, build_from_trace, KernelKind, WeightModel};

fn counts(p: usize, r: u32) -> tiledag::strassen::StrassenCounts {
    strassen_counts(&StrassenParams::new(p, r, STRASSEN_NB).unwrap()).unwrap()
}

fn gflop(p: usize, r: u32) -> f64 {
    counts(p, r).flops as f64 / 1e9
}

/// Truncation to three significant figures, the rounding the tables use.
fn trunc3(x: f64) -> f64 {
    let e = x.log10().floor() as i32 - 2;
    let scale = 10f64.powi(e);
    (x / scale + 1e-9).floor() * scale
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b
}

#[test]
fn task_counts_match_table() {
    for (p, r, tasks) in STRASSEN_TASKS {
        assert_eq!(counts(p, r).tasks, tasks, "p={p} r={r}");
    }
}

#[test]
fn generator_matches_closed_form() {
    for (p, r, tasks) in STRASSEN_TASKS.iter().copied().filter(|t| t.0 <= 32) {
        let params = StrassenParams::new(p, r, STRASSEN_NB).unwrap();
        let trace = gen_strassen(&params).unwrap();
        assert_eq!(trace.tasks.len() as u64, tasks, "p={p} r={r}");
        assert_eq!(trace.temp_tiles, counts(p, r).temp_tiles, "p={p} r={r}");
    }
}

#[test]
fn recursion_depth_minimizing_tasks() {
    for (p, r, _, _) in STRASSEN_FLOPS {
        assert_eq!(r_min(p).unwrap(), r, "p={p}");
    }
    for p in [32usize, 64, 128] {
        let best = (0..=p.trailing_zeros())
            .min_by_key(|&r| counts(p, r).tasks)
            .unwrap();
        assert_eq!(best, r_min(p).unwrap(), "p={p}");
    }
}

#[test]
fn flop_columns_within_half_a_percent() {
    for (p, r, sw, gemm) in STRASSEN_FLOPS {
        assert!(
            rel(gflop(p, 0), gemm) < 0.005,
            "gemm p={p}: {}",
            gflop(p, 0)
        );
        if p != 512 {
            assert!(rel(gflop(p, r), sw) < 0.005, "sw p={p}: {}", gflop(p, r));
        }
    }
}

/// Every Strassen-Winograd cell is the exact count truncated to three
/// significant figures; at p = 512 this is 0.87% below the exact value.
#[test]
fn flop_cells_are_truncated_exact_counts() {
    for (p, r, sw, _) in STRASSEN_FLOPS {
        assert!(
            rel(trunc3(gflop(p, r)), sw) < 1e-9,
            "p={p}: {} vs {sw}",
            gflop(p, r)
        );
    }
    assert!(rel(gflop(512, 5), 1.09e6) > 0.008);
}

#[test]
fn large_matrix_report() {
    for (r, tasks, gf) in STRASSEN_P128 {
        assert_eq!(counts(128, r).tasks, tasks, "r={r}");
        assert!(rel(gflop(128, r), gf) < 0.005, "r={r}: {}", gflop(128, r));
    }
    assert_eq!(tiled_gemm_report_tasks(128), 4_177_920);
}

#[test]
fn flops_decrease_with_depth() {
    for p in [4usize, 8, 16, 32, 64, 128] {
        let f: Vec<u128> = (0..=p.trailing_zeros())
            .map(|r| counts(p, r).flops)
            .collect();
        assert!(f.windows(2).all(|w| w[1] < w[0]), "p={p}");
    }
}

#[test]
fn tiled_gemm_accumulates_in_order() {
    for n in [1usize, 4, 8] {
        let g = build_from_trace(gen_tiled_gemm(n).unwrap()).unwrap();
        assert_eq!(g.len(), n * n * n);
        assert_eq!(annotate_cp(&g, &WeightModel::Unit).cp_length, n as u64);
    }
}

/// The tiles of each product are read only by additions.
#[test]
fn products_feed_only_additions() {
    for (p, r) in [(4usize, 1u32), (8, 2), (16, 2)] {
        let trace = gen_strassen(&StrassenParams::new(p, r, STRASSEN_NB).unwrap()).unwrap();
        let g = build_from_trace(trace.tasks.clone()).unwrap();
        for (v, t) in g.tasks().iter().enumerate() {
            if !t.writes.iter().any(|w| trace.products.contains(&w.matrix)) {
                continue;
            }
            for s in g.successors(v) {
                let succ = g.task(s);
                let reads_product = succ
                    .reads
                    .iter()
                    .any(|x| trace.products.contains(&x.matrix));
                // The only other consumer is the next GEMM of the same accumulation.
                let same_chain = succ.kind == KernelKind::Gemm && succ.writes == t.writes;
                assert!(
                    succ.kind == KernelKind::Geadd || !reads_product || same_chain,
                    "p={p} r={r} task {s}"
                );
            }
        }
    }
}
