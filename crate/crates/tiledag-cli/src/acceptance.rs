//! The fifteen acceptance criteria, each evaluated against the published
//! values or their closed forms with the tolerance it states.

use std::fmt::Display;

use anyhow::Result;
use num_rational::Ratio;
use tiledag::cholesky::{
    gen_chol_fact, gen_chol_inversion, CholFactVariant, CholInvConfig, LoopDir, Placement,
};
use tiledag::graph::{Edge, EdgeCause, Task, TileRef};
use tiledag::ip::{
    check_feasible, emit_ip, emit_ip_with, horizon_for, schedule_to_assignment, IpOptions,
};
use tiledag::qr::{
    coarse_schedule, coarse_times, flattree_cp_oracle, tiled_graph, tiled_times, tiled_translation,
    total_weight, verify_weight, CoarseAlgo, KernelFamily, TiledAlgo,
};
use tiledag::sched::{
    alap_bound, bounds_table, list_schedule, list_schedule_with, optimal_makespan, Policy,
};
use tiledag::strassen::{gen_strassen, r_min, strassen_counts, StrassenParams};
use tiledag::{alap_profile, annotate_cp, build_from_trace, KernelKind, TaskGraph, WeightModel};

use crate::commands::{self as cmd, chol_graph, qr_graph};
use crate::golden;
use crate::output::two_decimals;

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Count of checked cells, or the first differences on failure.
    pub detail: String,
}

impl Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} [{:>2}] {}: {}",
            self.id, self.name, self.detail
        )
    }
}

/// Criteria whose published values the implementation does not reproduce;
/// the analysis of each is kept with the design notes.
pub const KNOWN_FAILURES: [u8; 3] = [3, 11, 14];

/// Collects checked cells and the ones that differ.
#[derive(Default)]
struct Tally {
    checked: usize,
    bad: Vec<String>,
}

impl Tally {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: impl Display, got: T, want: T) {
        self.checked += 1;
        if got != want {
            self.bad.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn holds(&mut self, what: impl Display, ok: bool) {
        self.checked += 1;
        if !ok {
            self.bad.push(what.to_string());
        }
    }

    fn finish(self, id: u8, name: &'static str) -> Criterion {
        let pass = self.bad.is_empty();
        let detail = if pass {
            format!("{} checks", self.checked)
        } else {
            let shown: Vec<&str> = self.bad.iter().take(4).map(String::as_str).collect();
            format!(
                "{} of {} checks differ; {}",
                self.bad.len(),
                self.checked,
                shown.join("; ")
            )
        };
        Criterion {
            id,
            name,
            pass,
            detail,
        }
    }
}

fn run(id: u8, name: &'static str, body: impl FnOnce(&mut Tally) -> Result<()>) -> Criterion {
    let mut t = Tally::default();
    match body(&mut t) {
        Ok(()) => t.finish(id, name),
        Err(e) => Criterion {
            id,
            name,
            pass: false,
            detail: format!("error: {e:#}"),
        },
    }
}

fn tt_cp(p: usize, q: usize, algo: TiledAlgo) -> Result<u64> {
    Ok(tiled_times(&algo.elimination_list(p, q)?, KernelFamily::TT)?.cp)
}

fn chol_weighted_cp() -> Criterion {
    run(
        1,
        "Cholesky weighted critical path is 9t-10 for t = 2..50",
        |t| {
            for n in 2..=50usize {
                for v in [
                    CholFactVariant::RightLooking,
                    CholFactVariant::LeftLooking,
                    CholFactVariant::Bordered,
                ] {
                    let cp = annotate_cp(&chol_graph(n, v)?, &WeightModel::Cholesky).cp_length;
                    t.eq(format_args!("t={n} {v:?}"), cp, 9 * n as u64 - 10);
                }
            }
            Ok(())
        },
    )
}

fn chol_bounds_table() -> Criterion {
    run(
        2,
        "Cholesky 5x5 bounds to two decimals and Lost Area pairs",
        |t| {
            let prof = alap_profile(
                &chol_graph(5, CholFactVariant::RightLooking)?,
                &WeightModel::Cholesky,
            );
            for (row, (p, tp, sp, ep)) in bounds_table(&prof, 10)?.iter().zip(golden::BOUNDS_5X5) {
                t.eq(
                    format_args!("p={p} T_p"),
                    two_decimals(row.t_alap).as_str(),
                    tp,
                );
                t.eq(
                    format_args!("p={p} S_p"),
                    two_decimals(row.speedup).as_str(),
                    sp,
                );
                t.eq(
                    format_args!("p={p} E_p"),
                    two_decimals(row.efficiency).as_str(),
                    ep,
                );
            }
            for (p, la) in golden::LOST_AREA_5X5 {
                t.eq(
                    format_args!("LA_{p}"),
                    tiledag::sched::lost_area(&prof, p)?,
                    la,
                );
            }
            Ok(())
        },
    )
}

fn chol_inversion() -> Criterion {
    run(
        3,
        "Cholesky inversion step cps, pipelined totals and UUU step 2",
        |t| {
            let table = cmd::chol_cp(
                &(2..=30).collect::<Vec<_>>(),
                &[Placement::InPlace, Placement::OutOfPlace],
            )?;
            t.bad.extend(cmd::check_chol_cp(&table)?);
            t.checked += table.rows.len() * 7;
            Ok(())
        },
    )
}

fn coarse_tables() -> Criterion {
    run(4, "Coarse-grain 15x6 tables", |t| {
        for (algo, want) in [
            (CoarseAlgo::SamehKuck, &golden::COARSE_15X6_SAMEH_KUCK),
            (CoarseAlgo::Fibonacci, &golden::COARSE_15X6_FIBONACCI),
            (CoarseAlgo::Greedy, &golden::COARSE_15X6_GREEDY),
        ] {
            let (table, _) = coarse_schedule(15, 6, algo)?;
            for (i, k, v) in lower_cells(want) {
                t.eq(
                    format_args!("{algo:?} ({i},{k})"),
                    table.get(i, k).map(u64::from),
                    Some(v),
                );
            }
        }
        Ok(())
    })
}

/// Sub-diagonal cells `(i, k, value)` of a published zeroed-time table.
fn lower_cells<const Q: usize>(
    want: &[[u32; Q]],
) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
    want.iter().enumerate().flat_map(|(r, row)| {
        row.iter()
            .enumerate()
            .filter(move |(c, _)| r > *c)
            .map(move |(c, &v)| (r + 1, c + 1, u64::from(v)))
    })
}

fn check_zeroed<const Q: usize>(
    t: &mut Tally,
    algo: TiledAlgo,
    p: usize,
    q: usize,
    want: &[[u32; Q]],
) -> Result<()> {
    let times = tiled_times(&algo.elimination_list(p, q)?, KernelFamily::TT)?;
    for (i, k, v) in lower_cells(want).filter(|c| c.1 <= q) {
        t.eq(
            format_args!("{algo:?} {p}x{q} ({i},{k})"),
            times.zeroed(i, k),
            Some(v),
        );
    }
    Ok(())
}

fn tiled_tables() -> Criterion {
    run(5, "Tiled 15x6 zeroed-time tables", |t| {
        check_zeroed(t, TiledAlgo::FlatTree, 15, 6, &golden::TILED_15X6_FLAT_TREE)?;
        check_zeroed(
            t,
            TiledAlgo::Fibonacci,
            15,
            6,
            &golden::TILED_15X6_FIBONACCI,
        )?;
        check_zeroed(t, TiledAlgo::Greedy, 15, 6, &golden::TILED_15X6_GREEDY)?;
        check_zeroed(
            t,
            TiledAlgo::BinaryTree,
            15,
            6,
            &golden::TILED_15X6_BINARY_TREE,
        )?;
        check_zeroed(
            t,
            TiledAlgo::PlasmaTree(1),
            15,
            6,
            &golden::TILED_15X6_BINARY_TREE,
        )?;
        check_zeroed(
            t,
            TiledAlgo::PlasmaTree(5),
            15,
            6,
            &golden::TILED_15X6_PLASMA_TREE_BS5,
        )
    })
}

fn flat_tree_closed_form() -> Criterion {
    run(6, "FlatTree cp closed form for 2 <= q <= p <= 30", |t| {
        for p in 2..=30 {
            for q in 2..=p {
                t.eq(
                    format_args!("{p}x{q}"),
                    tt_cp(p, q, TiledAlgo::FlatTree)?,
                    flattree_cp_oracle(p, q)?,
                );
            }
        }
        Ok(())
    })
}

fn translation() -> Criterion {
    run(
        7,
        "Update completion is 10k + 6 coarse(i,k) for k <= q-1",
        |t| {
            for algo in [
                CoarseAlgo::SamehKuck,
                CoarseAlgo::Fibonacci,
                CoarseAlgo::Greedy,
            ] {
                for p in 2..=20 {
                    for q in 2..=p {
                        let (_, list) = coarse_schedule(p, q, algo)?;
                        let steps = coarse_times(&list)?;
                        let times = tiled_times(&list, KernelFamily::TT)?;
                        for k in 1..q {
                            for i in k + 1..=p {
                                let want = tiled_translation(i, k, &steps)?;
                                t.eq(
                                    format_args!("{algo:?} {p}x{q} ({i},{k})"),
                                    times.update_range(i, k),
                                    Some((want, want)),
                                );
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    )
}

fn all_algos(p: usize, q: usize) -> Vec<TiledAlgo> {
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

fn flop_conservation() -> Criterion {
    run(
        8,
        "Kernel weights sum to 6pq^2 - 2q^3 for 1 <= q <= p <= 12",
        |t| {
            for p in 1..=12usize {
                for q in 1..=p {
                    let expect = (6 * p * q * q - 2 * q * q * q) as u64;
                    t.eq(
                        format_args!("{p}x{q} closed form"),
                        total_weight(p, q)?,
                        expect,
                    );
                    for algo in all_algos(p, q) {
                        let list = algo.elimination_list(p, q)?;
                        for fam in [KernelFamily::TT, KernelFamily::TS] {
                            let g = build_from_trace(tiled_graph(&list, fam)?)?;
                            t.holds(
                                format_args!("{algo:?} {fam:?} {p}x{q}"),
                                verify_weight(&g, p, q)?,
                            );
                        }
                    }
                }
            }
            Ok(())
        },
    )
}

fn forty_rows() -> Criterion {
    run(9, "p = 40 Greedy, Fibonacci and PlasmaTree columns", |t| {
        for (q, greedy, plasma, bs, fib) in golden::P40 {
            t.eq(
                format_args!("greedy q={q}"),
                tt_cp(40, q, TiledAlgo::Greedy)?,
                greedy,
            );
            t.eq(
                format_args!("fibonacci q={q}"),
                tt_cp(40, q, TiledAlgo::Fibonacci)?,
                fib,
            );
            t.eq(
                format_args!("plasma bs={bs} q={q}"),
                tt_cp(40, q, TiledAlgo::PlasmaTree(bs))?,
                plasma,
            );
        }
        Ok(())
    })
}

fn greedy_asap_grasap() -> Criterion {
    run(
        10,
        "Greedy, Asap and GrASAP tables and critical paths",
        |t| {
            for q in [2, 3] {
                check_zeroed(t, TiledAlgo::Greedy, 15, q, &golden::GREEDY_15X3)?;
                check_zeroed(t, TiledAlgo::Asap, 15, q, &golden::ASAP_15X3)?;
            }
            for (p, q) in [(32, 16), (32, 32), (64, 64), (128, 128)] {
                let &(_, _, greedy, asap) = golden::GREEDY_VS_ASAP
                    .iter()
                    .find(|r| (r.0, r.1) == (p, q))
                    .expect("listed");
                t.eq(
                    format_args!("greedy {p}x{q}"),
                    tt_cp(p, q, TiledAlgo::Greedy)?,
                    greedy,
                );
                t.eq(
                    format_args!("asap {p}x{q}"),
                    tt_cp(p, q, TiledAlgo::Asap)?,
                    asap,
                );
            }
            for p in 1..=40 {
                for q in 1..=p {
                    let d = tt_cp(p, q, TiledAlgo::Greedy)? as i64
                        - tt_cp(p, q, TiledAlgo::GrASAP(1))? as i64;
                    t.holds(
                        format_args!("{p}x{q}: Greedy - GrASAP = {d}"),
                        d == 0 || d == 2,
                    );
                }
            }
            t.eq("20x6 GrASAP", tt_cp(20, 6, TiledAlgo::GrASAP(1))?, 134);
            t.eq("20x6 Greedy", tt_cp(20, 6, TiledAlgo::Greedy)?, 136);
            Ok(())
        },
    )
}

fn qr_schedule_table() -> Criterion {
    run(
        11,
        "QR 5x5 MaxCP makespans and ALAP-derived bound, p = 1..14",
        |t| {
            let algos = [
                TiledAlgo::GrASAP(1),
                TiledAlgo::Greedy,
                TiledAlgo::Fibonacci,
                TiledAlgo::FlatTree,
            ];
            let table = cmd::qr_bounds(
                5,
                5,
                &(1..=14).collect::<Vec<_>>(),
                &algos,
                TiledAlgo::GrASAP(1),
                Policy::MaxCp,
            )?;
            t.bad.extend(cmd::check_qr_bounds(
                5,
                5,
                TiledAlgo::GrASAP(1),
                Policy::MaxCp,
                &table,
            )?);
            t.checked += table.rows.len() * 5;
            Ok(())
        },
    )
}

fn alap_counterexample() -> Criterion {
    run(
        12,
        "Fibonacci MaxCP beats the GrASAP ALAP-derived bound (34x3, 10 processors)",
        |t| {
            let fib = list_schedule(
                &qr_graph(34, 3, TiledAlgo::Fibonacci, KernelFamily::TT)?,
                &WeightModel::QrFull,
                10,
                Policy::MaxCp,
            )?;
            let bound = alap_bound(
                &qr_graph(34, 3, TiledAlgo::GrASAP(1), KernelFamily::TT)?,
                &WeightModel::QrFull,
                10,
            )?;
            t.eq("Fibonacci makespan", fib.makespan, 184);
            t.eq("bound integer part", bound.to_integer(), 188);
            t.holds(
                format_args!("184 < {bound}"),
                Ratio::from_integer(fib.makespan) < bound,
            );
            Ok(())
        },
    )
}

fn toy() -> Criterion {
    run(13, "MaxCP is not optimal on the four-task toy", |t| {
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
        )?;
        let w = [3, 3, 1, 1];
        t.eq(
            "MaxCP",
            list_schedule_with(&g, &w, 2, Policy::MaxCp)?.makespan,
            5,
        );
        t.eq("optimum", optimal_makespan(&g, &w, 2)?.makespan, 4);
        Ok(())
    })
}

fn strassen() -> Criterion {
    run(
        14,
        "Strassen task counts, r_min and Gflop within 0.5%",
        |t| {
            let counts = |p, r| strassen_counts(&StrassenParams::new(p, r, golden::STRASSEN_NB)?);
            for (p, r, tasks) in golden::STRASSEN_TASKS {
                t.eq(
                    format_args!("p={p} r={r} tasks"),
                    counts(p, r)?.tasks,
                    tasks,
                );
            }
            for (p, rm, sw, gemm) in golden::STRASSEN_FLOPS {
                t.eq(format_args!("p={p} r_min"), r_min(p)?, rm);
                for (r, want) in [(rm, sw), (0, gemm)] {
                    let got = counts(p, r)?.flops as f64 / 1e9;
                    let rel = (got - want).abs() / want;
                    t.holds(
                        format_args!(
                            "p={p} r={r}: {got:.4e} vs {want:.2e} Gflop ({:.2}%)",
                            rel * 100.0
                        ),
                        rel < cmd::FLOP_TOLERANCE,
                    );
                }
            }
            Ok(())
        },
    )
}

fn model_graphs() -> Result<Vec<(String, TaskGraph, WeightModel)>> {
    let mut v = Vec::new();
    for n in 2..=6 {
        v.push((
            format!("chol t={n}"),
            chol_graph(n, CholFactVariant::RightLooking)?,
            WeightModel::Cholesky,
        ));
    }
    for algo in [
        TiledAlgo::GrASAP(1),
        TiledAlgo::Greedy,
        TiledAlgo::Fibonacci,
        TiledAlgo::FlatTree,
    ] {
        v.push((
            format!("{algo:?} 5x5"),
            qr_graph(5, 5, algo, KernelFamily::TT)?,
            WeightModel::QrFull,
        ));
    }
    v.push((
        "Fibonacci 8x3 TS".into(),
        qr_graph(8, 3, TiledAlgo::Fibonacci, KernelFamily::TS)?,
        WeightModel::QrFull,
    ));
    Ok(v)
}

fn acyclic(t: &mut Tally, what: &str, g: &TaskGraph) {
    t.holds(
        format_args!("{what} topological order"),
        g.topological().count() == g.len(),
    );
    t.holds(
        format_args!("{what} edges follow ids"),
        g.edges().iter().all(|e| e.from < e.to),
    );
}

fn properties() -> Criterion {
    run(
        15,
        "Properties: validity, acyclicity, monotone bounds, determinism, IP feasibility",
        |t| {
            for n in 1..=8 {
                for v in [
                    CholFactVariant::RightLooking,
                    CholFactVariant::LeftLooking,
                    CholFactVariant::Bordered,
                ] {
                    acyclic(
                        t,
                        &format!("chol {v:?} t={n}"),
                        &build_from_trace(gen_chol_fact(n, v)?)?,
                    );
                }
                for pl in [Placement::InPlace, Placement::OutOfPlace] {
                    for pipelined in [false, true] {
                        let cfg = CholInvConfig {
                            t: n,
                            placement: pl,
                            loop_dirs: [LoopDir::U, LoopDir::D, LoopDir::U],
                            pipelined,
                        };
                        acyclic(
                            t,
                            &format!("inversion {pl:?} t={n}"),
                            &build_from_trace(gen_chol_inversion(&cfg)?)?,
                        );
                    }
                }
            }
            for p in 1..=8 {
                for q in 1..=p {
                    for algo in all_algos(p, q) {
                        acyclic(
                            t,
                            &format!("{algo:?} {p}x{q}"),
                            &qr_graph(p, q, algo, KernelFamily::TT)?,
                        );
                    }
                }
            }
            for p in [1usize, 2, 4, 8, 16] {
                for r in 0..=p.trailing_zeros() {
                    let tr = gen_strassen(&StrassenParams::new(p, r, golden::STRASSEN_NB)?)?;
                    acyclic(
                        t,
                        &format!("strassen p={p} r={r}"),
                        &build_from_trace(tr.tasks)?,
                    );
                }
            }

            for (name, g, m) in model_graphs()? {
                let w = g.weights(&m);
                let cp = annotate_cp(&g, &m).cp_length;
                let work: u64 = w.iter().sum();
                for procs in 1..=8usize {
                    for pol in [Policy::MaxCp, Policy::MinCp, Policy::RandomCp(procs as u64)] {
                        let s = list_schedule_with(&g, &w, procs, pol)?;
                        t.holds(
                            format_args!("{name} {pol:?} p={procs} valid"),
                            s.validate(&g, &w).is_ok(),
                        );
                        t.holds(
                            format_args!("{name} {pol:?} p={procs} >= cp"),
                            s.makespan >= cp,
                        );
                        t.holds(
                            format_args!("{name} {pol:?} p={procs} >= work/p"),
                            s.makespan * procs as u64 >= work,
                        );
                    }
                    let again = |seed| list_schedule_with(&g, &w, procs, Policy::RandomCp(seed));
                    t.holds(
                        format_args!("{name} p={procs} seeded runs agree"),
                        again(11)? == again(11)?,
                    );
                }
                let rows = bounds_table(&alap_profile(&g, &m), 16)?;
                t.holds(
                    format_args!("{name} bound non-increasing"),
                    rows.windows(2).all(|r| r[1].t_alap <= r[0].t_alap),
                );
                t.holds(
                    format_args!("{name} rooftop below bound"),
                    rows.iter().all(|r| r.t_roof <= r.t_alap),
                );
            }
            let csv = || -> Result<String> {
                let algos = [TiledAlgo::Greedy, TiledAlgo::Asap];
                cmd::qr_bounds(
                    6,
                    4,
                    &[1, 3, 5],
                    &algos,
                    TiledAlgo::Greedy,
                    Policy::RandomCp(5),
                )?
                .to_csv()
            };
            t.holds("identical runs give identical CSV", csv()? == csv()?);

            for p in 1..=5 {
                for q in 1..=p {
                    for procs in [1usize, 2, 3, 7] {
                        let mut runs = Vec::new();
                        for algo in all_algos(p, q) {
                            let g = qr_graph(p, q, algo, KernelFamily::TT)?;
                            for pol in
                                [Policy::MaxCp, Policy::MinCp, Policy::RandomCp(procs as u64)]
                            {
                                let s = list_schedule(&g, &WeightModel::QrFull, procs, pol)?;
                                runs.push((algo, pol, g.clone(), s));
                            }
                        }
                        let horizon =
                            horizon_for(runs.iter().map(|r| r.3.makespan).max().unwrap_or(0));
                        let plain = emit_ip(p, q, horizon)?;
                        let capped = emit_ip_with(
                            p,
                            q,
                            horizon,
                            IpOptions {
                                capacity: Some(procs),
                            },
                        )?;
                        for (algo, pol, g, s) in &runs {
                            for m in [&plain, &capped] {
                                let a = schedule_to_assignment(m, g, s)?;
                                let f = check_feasible(m, &a);
                                let first = f
                                    .violations
                                    .first()
                                    .map(|v| v.row.clone())
                                    .unwrap_or_default();
                                t.holds(
                                    format_args!(
                                        "IP {algo:?} {pol:?} {p}x{q} procs={procs}: {first}"
                                    ),
                                    f.is_feasible(),
                                );
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    )
}

/// Evaluates every criterion in order.
pub fn run_all() -> Vec<Criterion> {
    vec![
        chol_weighted_cp(),
        chol_bounds_table(),
        chol_inversion(),
        coarse_tables(),
        tiled_tables(),
        flat_tree_closed_form(),
        translation(),
        flop_conservation(),
        forty_rows(),
        greedy_asap_grasap(),
        qr_schedule_table(),
        alap_counterexample(),
        toy(),
        strassen(),
        properties(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_reports_first_differences() {
        let mut t = Tally::default();
        t.eq("a", 1, 1);
        t.eq("b", 2, 3);
        let c = t.finish(9, "demo");
        assert!(!c.pass);
        assert_eq!(
            c.to_string(),
            "FAIL [ 9] demo: 1 of 2 checks differ; b: got 2, want 3"
        );
    }

    #[test]
    fn errors_fail_the_criterion() {
        let c = run(1, "demo", |_| Err(anyhow::anyhow!("boom")));
        assert_eq!((c.pass, c.detail.as_str()), (false, "error: boom"));
    }
}
