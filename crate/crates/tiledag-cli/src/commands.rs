//! Subcommand bodies. Each returns its artifact; checks compare an artifact
//! against the published tables and list the cells that differ.

use anyhow::{bail, Result};
use tiledag::cholesky::{
    chol_cp_oracle, chol_synced_graph, gen_chol_fact, gen_chol_inversion, CholCp, CholFactVariant,
    CholInvConfig, LoopDir, Placement, SyncVariant, STEP_FACTOR, STEP_INVERT, STEP_PRODUCT,
};
use tiledag::cp::cp_of_subset;
use tiledag::ip::{
    check_feasible, emit_ip_with, horizon_for, schedule_to_assignment, IpAssignment, IpOptions,
};
use tiledag::qr::{
    coarse_schedule, coarse_times, tiled_graph, tiled_times, total_weight, CoarseAlgo,
    KernelFamily, TiledAlgo,
};
use tiledag::sched::{
    alap_bound, alpha_min, bounds_row, list_schedule, optimal_makespan, rooftop_bound, Policy,
    Schedule,
};
use tiledag::strassen::{gen_strassen, strassen_counts, strassen_weights, StrassenParams};
use tiledag::{alap_profile, annotate_cp, build_from_trace, TaskGraph, WeightModel};

use crate::golden;
use crate::output::{exact, two_decimals, Table};

/// A cell that differs from the published value.
pub type Mismatch = String;

fn mismatch(
    what: impl std::fmt::Display,
    got: impl std::fmt::Display,
    want: impl std::fmt::Display,
) -> Mismatch {
    format!("{what}: got {got}, published {want}")
}

/// Short name of a policy, as printed in tables.
pub fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::MaxCp => "max",
        Policy::MinCp => "min",
        Policy::RandomCp(_) => "random",
    }
}

/// Name of a tiled algorithm, as accepted on the command line.
pub fn algo_name(a: TiledAlgo) -> String {
    match a {
        TiledAlgo::FlatTree => "flat-tree".into(),
        TiledAlgo::Fibonacci => "fibonacci".into(),
        TiledAlgo::Greedy => "greedy".into(),
        TiledAlgo::BinaryTree => "binary-tree".into(),
        TiledAlgo::PlasmaTree(bs) => format!("plasma-tree:{bs}"),
        TiledAlgo::Asap => "asap".into(),
        TiledAlgo::GrASAP(1) => "grasap".into(),
        TiledAlgo::GrASAP(i) => format!("grasap:{i}"),
    }
}

pub fn qr_graph(p: usize, q: usize, algo: TiledAlgo, family: KernelFamily) -> Result<TaskGraph> {
    Ok(build_from_trace(tiled_graph(
        &algo.elimination_list(p, q)?,
        family,
    )?)?)
}

pub fn chol_graph(t: usize, variant: CholFactVariant) -> Result<TaskGraph> {
    Ok(build_from_trace(gen_chol_fact(t, variant)?)?)
}

fn tt_cp(p: usize, q: usize, algo: TiledAlgo, family: KernelFamily) -> Result<u64> {
    Ok(tiled_times(&algo.elimination_list(p, q)?, family)?.cp)
}

// ---------------------------------------------------------------- Cholesky

const DEFAULT_DIRS: [LoopDir; 3] = [LoopDir::U, LoopDir::D, LoopDir::U];

fn inversion(
    t: usize,
    placement: Placement,
    dirs: [LoopDir; 3],
    pipelined: bool,
) -> Result<TaskGraph> {
    let cfg = CholInvConfig {
        t,
        placement,
        loop_dirs: dirs,
        pipelined,
    };
    Ok(build_from_trace(gen_chol_inversion(&cfg)?)?)
}

fn step_cp(g: &TaskGraph, step: u8) -> u64 {
    let w = g.weights(&WeightModel::Unit);
    cp_of_subset(g, &w, |v| g.task(v).phase == step)
}

fn unit_cp(g: &TaskGraph) -> u64 {
    annotate_cp(g, &WeightModel::Unit).cp_length
}

pub fn placement_name(p: Placement) -> &'static str {
    match p {
        Placement::InPlace => "in",
        Placement::OutOfPlace => "out",
    }
}

/// Critical paths of factorization and inversion: the weighted factorization
/// cp, then unit cps of each inversion step, of the step-2 variant with all
/// loops ascending, and of the whole inversion with and without pipelining.
pub fn chol_cp(ts: &[usize], placements: &[Placement]) -> Result<Table> {
    let mut table = Table::new(&[
        "t",
        "placement",
        "fact_weighted",
        "step1",
        "step2",
        "step3",
        "step2_uuu",
        "unpipelined",
        "pipelined",
    ]);
    for &t in ts {
        let fact = annotate_cp(
            &chol_graph(t, CholFactVariant::RightLooking)?,
            &WeightModel::Cholesky,
        )
        .cp_length;
        for &pl in placements {
            let plain = inversion(t, pl, DEFAULT_DIRS, false)?;
            let uuu = inversion(t, pl, [LoopDir::U; 3], false)?;
            let piped = inversion(t, pl, DEFAULT_DIRS, true)?;
            table.push(vec![
                t.to_string(),
                placement_name(pl).into(),
                fact.to_string(),
                step_cp(&plain, STEP_FACTOR).to_string(),
                step_cp(&plain, STEP_INVERT).to_string(),
                step_cp(&plain, STEP_PRODUCT).to_string(),
                step_cp(&uuu, STEP_INVERT).to_string(),
                unit_cp(&plain).to_string(),
                unit_cp(&piped).to_string(),
            ]);
        }
    }
    Ok(table)
}

/// Compares every [`chol_cp`] cell with `t >= 2` against its closed form.
pub fn check_chol_cp(table: &Table) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    for row in &table.rows {
        let t: u64 = row[0].parse()?;
        if t < 2 {
            continue;
        }
        let inp = row[1] == "in";
        let forms = [
            ("fact_weighted", CholCp::Fact9tMinus10),
            ("step1", CholCp::Step1),
            (
                "step2",
                if inp {
                    CholCp::Step2In
                } else {
                    CholCp::Step2Out
                },
            ),
            (
                "step3",
                if inp {
                    CholCp::Step3In
                } else {
                    CholCp::Step3Out
                },
            ),
            (
                "step2_uuu",
                if inp {
                    CholCp::TrtriUUUIn
                } else {
                    CholCp::TrtriUUUOut
                },
            ),
            (
                "unpipelined",
                if inp {
                    CholCp::NoPipeIn
                } else {
                    CholCp::NoPipeOut
                },
            ),
            (
                "pipelined",
                if inp { CholCp::PipeIn } else { CholCp::PipeOut },
            ),
        ];
        for (col, form) in forms {
            let got = &row[table.column(col).expect("column exists")];
            let want = chol_cp_oracle(t, form)?;
            if *got != want.to_string() {
                out.push(mismatch(format_args!("t={t} {} {col}", row[1]), got, want));
            }
        }
    }
    Ok(out)
}

/// ALAP-derived and Rooftop bounds of the weighted factorization, to two
/// decimals.
pub fn chol_bounds(t: usize, procs: &[u64]) -> Result<Table> {
    let g = chol_graph(t, CholFactVariant::RightLooking)?;
    let prof = alap_profile(&g, &WeightModel::Cholesky);
    let mut table = Table::new(&[
        "p",
        "lost_area",
        "t_alap",
        "t_roof",
        "speedup",
        "efficiency",
    ]);
    for &p in procs {
        let r = bounds_row(&prof, p)?;
        table.push(vec![
            p.to_string(),
            r.lost_area.to_string(),
            two_decimals(r.t_alap),
            two_decimals(r.t_roof),
            two_decimals(r.speedup),
            two_decimals(r.efficiency),
        ]);
    }
    Ok(table)
}

pub fn check_chol_bounds(t: usize, table: &Table) -> Result<Vec<Mismatch>> {
    if t != 5 {
        bail!(crate::UsageError(format!(
            "no published bounds for t={t}; only t=5 is tabulated"
        )));
    }
    let mut out = Vec::new();
    for row in &table.rows {
        let p: u64 = row[0].parse()?;
        if let Some(&(_, tp, sp, ep)) = golden::BOUNDS_5X5.iter().find(|b| b.0 == p) {
            for (col, want) in [(2, tp), (4, sp), (5, ep)] {
                if row[col] != want {
                    out.push(mismatch(
                        format_args!("p={p} {}", table.header[col]),
                        &row[col],
                        want,
                    ));
                }
            }
        }
        if let Some(&(_, la)) = golden::LOST_AREA_5X5.iter().find(|l| l.0 == p) {
            if row[1] != la.to_string() {
                out.push(mismatch(format_args!("p={p} lost_area"), &row[1], la));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- QR tables

/// Lower-triangular table: header `i,1..q`, cells blank on and above the
/// diagonal.
fn tile_table(p: usize, q: usize, cell: impl Fn(usize, usize) -> Option<u64>) -> Table {
    let mut header = vec!["i".to_string()];
    header.extend((1..=q).map(|k| k.to_string()));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for i in 1..=p {
        let mut row = vec![i.to_string()];
        row.extend((1..=q).map(|k| {
            if i > k {
                cell(i, k).map_or(String::new(), |v| v.to_string())
            } else {
                String::new()
            }
        }));
        table.push(row);
    }
    table
}

fn check_tile_table<const Q: usize>(
    label: &str,
    table: &Table,
    want: &[[u32; Q]],
) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for (r, row) in want.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let (i, k) = (r + 1, c + 1);
            if i > k && table.rows[r][k] != v.to_string() {
                out.push(mismatch(
                    format_args!("{label} ({i},{k})"),
                    &table.rows[r][k],
                    v,
                ));
            }
        }
    }
    out
}

/// Coarse-grain step at which each tile is zeroed: the closed-form table,
/// or the execution steps of the elimination list when `execution` is set.
pub fn qr_coarse(p: usize, q: usize, algo: CoarseAlgo, execution: bool) -> Result<Table> {
    let (closed, list) = coarse_schedule(p, q, algo)?;
    let table = if execution {
        coarse_times(&list)?
    } else {
        closed
    };
    Ok(tile_table(p, q, |i, k| table.get(i, k).map(u64::from)))
}

pub fn check_qr_coarse(
    p: usize,
    q: usize,
    algo: CoarseAlgo,
    execution: bool,
    table: &Table,
) -> Result<Vec<Mismatch>> {
    if (p, q) != (15, 6) || execution {
        bail!(crate::UsageError(
            "published coarse tables cover the closed form on 15x6 only".into()
        ));
    }
    let want = match algo {
        CoarseAlgo::SamehKuck => &golden::COARSE_15X6_SAMEH_KUCK,
        CoarseAlgo::Fibonacci => &golden::COARSE_15X6_FIBONACCI,
        CoarseAlgo::Greedy => &golden::COARSE_15X6_GREEDY,
    };
    Ok(check_tile_table(&format!("{algo:?}"), table, want))
}

/// Time at which each tile is zeroed in the tiled algorithm.
pub fn qr_tiled(p: usize, q: usize, algo: TiledAlgo, family: KernelFamily) -> Result<Table> {
    let t = tiled_times(&algo.elimination_list(p, q)?, family)?;
    Ok(tile_table(p, q, |i, k| t.zeroed(i, k)))
}

pub fn check_qr_tiled(
    p: usize,
    q: usize,
    algo: TiledAlgo,
    family: KernelFamily,
    table: &Table,
) -> Result<Vec<Mismatch>> {
    let label = algo_name(algo);
    match (p, q, algo, family) {
        (15, 6, TiledAlgo::FlatTree, KernelFamily::TT) => Ok(check_tile_table(
            &label,
            table,
            &golden::TILED_15X6_FLAT_TREE,
        )),
        (15, 6, TiledAlgo::Fibonacci, KernelFamily::TT) => Ok(check_tile_table(
            &label,
            table,
            &golden::TILED_15X6_FIBONACCI,
        )),
        (15, 6, TiledAlgo::Greedy, KernelFamily::TT) => {
            Ok(check_tile_table(&label, table, &golden::TILED_15X6_GREEDY))
        }
        (15, 6, TiledAlgo::BinaryTree | TiledAlgo::PlasmaTree(1), KernelFamily::TT) => Ok(
            check_tile_table(&label, table, &golden::TILED_15X6_BINARY_TREE),
        ),
        (15, 6, TiledAlgo::PlasmaTree(5), KernelFamily::TT) => Ok(check_tile_table(
            &label,
            table,
            &golden::TILED_15X6_PLASMA_TREE_BS5,
        )),
        (15, 3, TiledAlgo::Greedy, KernelFamily::TT) => {
            Ok(check_tile_table(&label, table, &golden::GREEDY_15X3))
        }
        (15, 3, TiledAlgo::Asap, KernelFamily::TT) => {
            Ok(check_tile_table(&label, table, &golden::ASAP_15X3))
        }
        (15, 2, TiledAlgo::Greedy, KernelFamily::TT) => {
            Ok(check_leading_columns(&label, table, &golden::GREEDY_15X3))
        }
        (15, 2, TiledAlgo::Asap, KernelFamily::TT) => {
            Ok(check_leading_columns(&label, table, &golden::ASAP_15X3))
        }
        _ => bail!(crate::UsageError(format!(
            "no published zeroed-time table for {label} on {p}x{q}"
        ))),
    }
}

/// The two-column tables are the leading columns of the three-column ones.
fn check_leading_columns(label: &str, table: &Table, want: &[[u32; 3]; 15]) -> Vec<Mismatch> {
    let two: Vec<[u32; 2]> = want.iter().map(|r| [r[0], r[1]]).collect();
    check_tile_table(label, table, &two)
}

/// Smallest cp over every domain size; ties go to the smaller size.
pub fn plasma_best(p: usize, q: usize, family: KernelFamily) -> Result<(usize, u64)> {
    let mut best = (0, u64::MAX);
    for bs in 1..=p {
        let cp = tt_cp(p, q, TiledAlgo::PlasmaTree(bs), family)?;
        if cp < best.1 {
            best = (bs, cp);
        }
    }
    Ok(best)
}

/// Algorithms accepted by [`qr_cp_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpAlgo {
    Tiled(TiledAlgo),
    /// PlasmaTree at its best domain size.
    PlasmaBest,
}

impl CpAlgo {
    pub fn name(self) -> String {
        match self {
            CpAlgo::Tiled(a) => algo_name(a),
            CpAlgo::PlasmaBest => "plasma-best".into(),
        }
    }
}

/// Critical paths `p,q,algo,bs,cp` for every `q <= p`.
pub fn qr_cp_table(
    ps: &[usize],
    qs: &[usize],
    algos: &[CpAlgo],
    family: KernelFamily,
) -> Result<Table> {
    let mut table = Table::new(&["p", "q", "algo", "bs", "cp"]);
    for &p in ps {
        for &q in qs.iter().filter(|&&q| q <= p) {
            for &a in algos {
                let (bs, cp) = match a {
                    CpAlgo::Tiled(t @ TiledAlgo::PlasmaTree(bs)) => {
                        (bs.to_string(), tt_cp(p, q, t, family)?)
                    }
                    CpAlgo::Tiled(t) => (String::new(), tt_cp(p, q, t, family)?),
                    CpAlgo::PlasmaBest => {
                        let (bs, cp) = plasma_best(p, q, family)?;
                        (bs.to_string(), cp)
                    }
                };
                table.push(vec![
                    p.to_string(),
                    q.to_string(),
                    a.name(),
                    bs,
                    cp.to_string(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Compares the cells covered by the 40-row comparison and by the
/// Greedy/Asap table; PlasmaTree is compared at the published domain size.
pub fn check_qr_cp_table(table: &Table, family: KernelFamily) -> Result<Vec<Mismatch>> {
    if family != KernelFamily::TT {
        bail!(crate::UsageError(
            "published critical paths use TT kernels".into()
        ));
    }
    let mut out = Vec::new();
    let mut covered = 0;
    for row in &table.rows {
        let (p, q): (usize, usize) = (row[0].parse()?, row[1].parse()?);
        let (algo, cp) = (row[2].as_str(), row[4].as_str());
        let mut want = None;
        if p == 40 {
            if let Some(&(_, greedy, plasma, bs, fib)) = golden::P40.iter().find(|r| r.0 == q) {
                want = match algo {
                    "greedy" => Some(greedy),
                    "fibonacci" => Some(fib),
                    "plasma-best" => Some(plasma),
                    _ if algo == algo_name(TiledAlgo::PlasmaTree(bs)) => Some(plasma),
                    _ => None,
                };
            }
        }
        if let Some(&(_, _, greedy, asap)) =
            golden::GREEDY_VS_ASAP.iter().find(|r| (r.0, r.1) == (p, q))
        {
            want = match algo {
                "greedy" => Some(greedy),
                "asap" => Some(asap),
                _ => want,
            };
        }
        if let Some(w) = want {
            covered += 1;
            if cp != w.to_string() {
                out.push(mismatch(format_args!("{algo} {p}x{q}"), cp, w));
            }
        }
    }
    if covered == 0 {
        bail!(crate::UsageError(
            "no requested cell has a published critical path".into()
        ));
    }
    Ok(out)
}

/// Bounds and list-schedule makespans per processor count: exact and
/// ceiled ALAP-derived bound of `bound_algo`, Rooftop bound, then one
/// makespan column per algorithm.
pub fn qr_bounds(
    p: usize,
    q: usize,
    procs: &[usize],
    algos: &[TiledAlgo],
    bound_algo: TiledAlgo,
    policy: Policy,
) -> Result<Table> {
    let mut header: Vec<String> = ["procs", "t_alap", "t_alap_ceil", "t_roof"]
        .map(String::from)
        .to_vec();
    header.extend(algos.iter().map(|&a| algo_name(a)));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let bg = qr_graph(p, q, bound_algo, KernelFamily::TT)?;
    let graphs: Vec<TaskGraph> = algos
        .iter()
        .map(|&a| qr_graph(p, q, a, KernelFamily::TT))
        .collect::<Result<_>>()?;
    for &n in procs {
        let bound = alap_bound(&bg, &WeightModel::QrFull, n as u64)?;
        let mut row = vec![
            n.to_string(),
            exact(bound),
            bound.ceil().to_integer().to_string(),
            exact(rooftop_bound(&bg, &WeightModel::QrFull, n as u64)?),
        ];
        for g in &graphs {
            row.push(
                list_schedule(g, &WeightModel::QrFull, n, policy)?
                    .makespan
                    .to_string(),
            );
        }
        table.push(row);
    }
    Ok(table)
}

pub fn check_qr_bounds(
    p: usize,
    q: usize,
    bound_algo: TiledAlgo,
    policy: Policy,
    table: &Table,
) -> Result<Vec<Mismatch>> {
    if (p, q) != (5, 5) || policy != Policy::MaxCp {
        bail!(crate::UsageError(
            "published schedule lengths cover MaxCP on 5x5 only".into()
        ));
    }
    let columns = [
        ("greedy", 2),
        ("fibonacci", 3),
        ("flat-tree", 4),
        ("grasap", 1),
    ];
    let mut out = Vec::new();
    for row in &table.rows {
        let n: usize = row[0].parse()?;
        let Some(want) = golden::QR_5X5.get(n.wrapping_sub(1)) else {
            continue;
        };
        if bound_algo == TiledAlgo::GrASAP(1) && row[2] != want[0].to_string() {
            out.push(mismatch(
                format_args!("procs={n} t_alap_ceil"),
                &row[2],
                want[0],
            ));
        }
        for (name, col) in columns {
            if let Some(c) = table.column(name) {
                if row[c] != want[col].to_string() {
                    out.push(mismatch(
                        format_args!("procs={n} {name}"),
                        &row[c],
                        want[col],
                    ));
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- scheduling

/// A graph to schedule and the weights it is scheduled under.
pub struct Instance {
    pub graph: TaskGraph,
    pub model: WeightModel,
}

impl Instance {
    pub fn cholesky(
        t: usize,
        variant: CholFactVariant,
        sync: Option<SyncVariant>,
    ) -> Result<Instance> {
        let graph = match sync {
            Some(s) => chol_synced_graph(t, s)?,
            None => chol_graph(t, variant)?,
        };
        Ok(Instance {
            graph,
            model: WeightModel::Cholesky,
        })
    }

    pub fn qr(p: usize, q: usize, algo: TiledAlgo, family: KernelFamily) -> Result<Instance> {
        Ok(Instance {
            graph: qr_graph(p, q, algo, family)?,
            model: WeightModel::QrFull,
        })
    }

    pub fn schedule(&self, procs: usize, policy: Policy, optimal: bool) -> Result<Schedule> {
        if optimal {
            Ok(optimal_makespan(
                &self.graph,
                &self.graph.weights(&self.model),
                procs,
            )?)
        } else {
            Ok(list_schedule(&self.graph, &self.model, procs, policy)?)
        }
    }
}

/// One row per processor count: makespan next to the critical path and the
/// bounds.
pub fn sched(
    inst: &Instance,
    procs: &[usize],
    policy: Policy,
    optimal: bool,
) -> Result<(Table, Vec<Schedule>)> {
    let mut table = Table::new(&[
        "procs", "policy", "makespan", "cp", "t_seq", "t_alap", "t_roof",
    ]);
    let prof = alap_profile(&inst.graph, &inst.model);
    let mut schedules = Vec::new();
    for &n in procs {
        let s = inst.schedule(n, policy, optimal)?;
        let r = bounds_row(&prof, n as u64)?;
        table.push(vec![
            n.to_string(),
            if optimal {
                "optimal"
            } else {
                policy_name(policy)
            }
            .into(),
            s.makespan.to_string(),
            prof.cp_length.to_string(),
            prof.total_work.to_string(),
            exact(r.t_alap),
            exact(r.t_roof),
        ]);
        schedules.push(s);
    }
    Ok((table, schedules))
}

/// Fewest processors at which MaxCP reaches the weighted cp, per `t`.
pub fn alpha(ts: &[usize]) -> Result<Table> {
    let mut table = Table::new(&["t", "p_opt", "alpha", "alpha_decimal", "cp", "method"]);
    for &t in ts {
        let a = alpha_min(t)?;
        table.push(vec![
            t.to_string(),
            a.p_opt.to_string(),
            exact(a.alpha),
            format!("{:.4}", *a.alpha.numer() as f64 / *a.alpha.denom() as f64),
            a.cp.to_string(),
            "maxcp-ascending-search".into(),
        ]);
    }
    Ok(table)
}

// ---------------------------------------------------------------- Strassen

/// Largest tile count whose graph is built to report a critical path.
pub const STRASSEN_CP_MAX_P: usize = 64;

/// Counts per `(p, r)`; `r` defaults to every depth the tile count allows.
pub fn strassen_count(ps: &[usize], rs: Option<&[u32]>, n_b: u64, with_cp: bool) -> Result<Table> {
    let mut table = Table::new(&[
        "p",
        "r",
        "tasks",
        "flops",
        "gflop",
        "cp",
        "temp_tiles",
        "r_min",
    ]);
    for &p in ps {
        let depths: Vec<u32> = match rs {
            Some(rs) => rs.to_vec(),
            None => (0..=p.trailing_zeros()).collect(),
        };
        for r in depths {
            let params = StrassenParams::new(p, r, n_b)?;
            let c = strassen_counts(&params)?;
            let cp = if with_cp && p <= STRASSEN_CP_MAX_P {
                let g = build_from_trace(gen_strassen(&params)?.tasks)?;
                annotate_cp(&g, &strassen_weights(n_b))
                    .cp_length
                    .to_string()
            } else {
                String::new()
            };
            table.push(vec![
                p.to_string(),
                r.to_string(),
                c.tasks.to_string(),
                c.flops.to_string(),
                format!("{:.4e}", c.flops as f64 / 1e9),
                cp,
                c.temp_tiles.to_string(),
                c.r_min.to_string(),
            ]);
        }
    }
    Ok(table)
}

/// Relative tolerance of the flop comparison.
pub const FLOP_TOLERANCE: f64 = 0.005;

pub fn check_strassen(table: &Table, n_b: u64) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    let mut covered = 0;
    for row in &table.rows {
        let (p, r): (usize, u32) = (row[0].parse()?, row[1].parse()?);
        let tasks: u64 = row[2].parse()?;
        let gflop = row[3].parse::<f64>()? / 1e9;
        let r_min: u32 = row[7].parse()?;
        if let Some(&(_, _, want)) = golden::STRASSEN_TASKS.iter().find(|x| (x.0, x.1) == (p, r)) {
            covered += 1;
            if tasks != want {
                out.push(mismatch(format_args!("p={p} r={r} tasks"), tasks, want));
            }
        }
        if let Some(&(_, want, _)) = golden::STRASSEN_P128.iter().find(|x| p == 128 && x.0 == r) {
            covered += 1;
            if tasks != want {
                out.push(mismatch(format_args!("p={p} r={r} tasks"), tasks, want));
            }
        }
        if let Some(&(_, rm, sw, gemm)) = golden::STRASSEN_FLOPS.iter().find(|x| x.0 == p) {
            covered += 1;
            if r_min != rm {
                out.push(mismatch(format_args!("p={p} r_min"), r_min, rm));
            }
            let flop_cell = if r == 0 {
                Some(gemm)
            } else if r == rm {
                Some(sw)
            } else {
                None
            };
            if let Some(want) = flop_cell.filter(|_| n_b == golden::STRASSEN_NB) {
                if (gflop - want).abs() / want >= FLOP_TOLERANCE {
                    out.push(mismatch(
                        format_args!("p={p} r={r} Gflop (0.5% tolerance)"),
                        format!("{gflop:.4e}"),
                        format!("{want:.2e}"),
                    ));
                }
            }
        }
    }
    if covered == 0 {
        bail!(crate::UsageError(
            "no requested cell has a published Strassen count".into()
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- IP model

/// Horizon that any schedule of a `p x q` QR fits in: the sequential time.
pub fn default_horizon(p: usize, q: usize) -> Result<i64> {
    Ok(horizon_for(total_weight(p, q)?))
}

pub fn ip_emit(p: usize, q: usize, horizon: i64, capacity: Option<usize>) -> Result<String> {
    Ok(emit_ip_with(p, q, horizon, IpOptions { capacity })?.to_lp())
}

/// Where an assignment to check comes from.
pub enum AssignmentSource {
    Text(String),
    Schedule {
        algo: TiledAlgo,
        procs: usize,
        policy: Policy,
    },
}

/// Violated rows `row,group,lhs,sense,rhs` and the assignment checked.
pub fn ip_check(
    p: usize,
    q: usize,
    horizon: Option<i64>,
    capacity: Option<usize>,
    source: &AssignmentSource,
) -> Result<(Table, IpAssignment)> {
    let (model, a) = match source {
        AssignmentSource::Text(text) => {
            let horizon = horizon.map_or_else(|| default_horizon(p, q), Ok)?;
            let model = emit_ip_with(p, q, horizon, IpOptions { capacity })?;
            (model, IpAssignment::parse(text)?)
        }
        AssignmentSource::Schedule {
            algo,
            procs,
            policy,
        } => {
            let inst = Instance::qr(p, q, *algo, KernelFamily::TT)?;
            let s = inst.schedule(*procs, *policy, false)?;
            let horizon = horizon.unwrap_or(horizon_for(s.makespan));
            let model = emit_ip_with(p, q, horizon, IpOptions { capacity })?;
            let a = schedule_to_assignment(&model, &inst.graph, &s)?;
            (model, a)
        }
    };
    let mut table = Table::new(&["row", "group", "lhs", "sense", "rhs"]);
    for v in check_feasible(&model, &a).violations {
        table.push(vec![
            v.row,
            v.group.into(),
            v.lhs.to_string(),
            v.sense.symbol().into(),
            v.rhs.to_string(),
        ]);
    }
    Ok((table, a))
}
