//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tiledag::cholesky::{CholFactVariant, Placement, SyncVariant};
use tiledag::ip::horizon_for;
use tiledag::qr::{CoarseAlgo, KernelFamily, TiledAlgo};
use tiledag::sched::Policy;

use crate::commands::{self as cmd, AssignmentSource, CpAlgo, Instance, Mismatch};
use crate::output::{gantt, graph_export, Destination, Table};
use crate::{UsageError, EXIT_MISMATCH, EXIT_MODULE, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "tiledag",
    version,
    about = "Task graphs, critical paths, bounds and schedules of tiled linear algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical paths of Cholesky factorization and inversion.
    CholCp(CholCpArgs),
    /// ALAP-derived and Rooftop bounds of the weighted Cholesky factorization.
    CholBounds(CholBoundsArgs),
    /// Coarse-grain step at which each tile is zeroed.
    QrCoarse(QrCoarseArgs),
    /// Time at which each tile is zeroed in a tiled QR.
    QrTiled(QrTiledArgs),
    /// Critical paths of tiled QR algorithms over a range of shapes.
    QrCpTable(QrCpTableArgs),
    /// ALAP-derived bound and list-schedule makespans of tiled QR.
    QrBounds(QrBoundsArgs),
    /// List-schedule a Cholesky or QR graph.
    Sched(SchedArgs),
    /// Fewest processors at which MaxCP reaches the Cholesky critical path.
    Alpha(AlphaArgs),
    /// Task, flop and temporary-tile counts of Strassen-Winograd.
    StrassenCount(StrassenArgs),
    /// Write the integer program of a tiled QR in LP format.
    IpEmit(IpEmitArgs),
    /// Check an assignment, or a simulated schedule, against the integer program.
    IpCheck(IpCheckArgs),
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output file; relative paths go under $TILEDAG_OUT_DIR when it is set.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArg {
    /// Compare against the published values; exit 3 listing cells that differ.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
struct CholCpArgs {
    /// Tile counts, e.g. `2..10` or `3,5,8`.
    #[arg(long, value_parser = parse_list, default_value = "2..10")]
    t: NumList,
    /// Inversion placement; both when omitted.
    #[arg(long, value_enum)]
    placement: Option<PlacementArg>,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct CholBoundsArgs {
    #[arg(long, default_value_t = 5)]
    t: usize,
    #[arg(long, value_parser = parse_list, default_value = "1..10")]
    procs: NumList,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct QrCoarseArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum)]
    algo: CoarseArg,
    /// Print the execution steps of the elimination list instead of the
    /// closed-form table.
    #[arg(long)]
    execution: bool,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct QrTiledArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// flat-tree, fibonacci, greedy, binary-tree, plasma-tree:BS, asap,
    /// grasap or grasap:I.
    #[arg(long, value_parser = parse_algo)]
    algo: TiledAlgo,
    #[arg(long, value_enum, default_value = "tt")]
    family: FamilyArg,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct QrCpTableArgs {
    #[arg(long, value_parser = parse_list)]
    p: NumList,
    /// Column counts; `q > p` is skipped. Defaults to `1..p`.
    #[arg(long, value_parser = parse_list)]
    q: Option<NumList>,
    /// Comma-separated algorithms; `plasma-best` searches the domain size.
    #[arg(long, value_parser = parse_cp_algo, value_delimiter = ',', default_value = "greedy,fibonacci,plasma-best")]
    algo: Vec<CpAlgo>,
    #[arg(long, value_enum, default_value = "tt")]
    family: FamilyArg,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct QrBoundsArgs {
    #[arg(long, default_value_t = 5)]
    p: usize,
    #[arg(long, default_value_t = 5)]
    q: usize,
    #[arg(long, value_parser = parse_list, default_value = "1..14")]
    procs: NumList,
    #[arg(long, value_parser = parse_algo, value_delimiter = ',', default_value = "grasap,greedy,fibonacci,flat-tree")]
    algo: Vec<TiledAlgo>,
    /// Algorithm whose ALAP profile gives the bound columns.
    #[arg(long, value_parser = parse_algo, default_value = "grasap")]
    bound_algo: TiledAlgo,
    #[command(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    #[arg(long, value_enum, default_value = "max")]
    policy: PolicyArg,
    /// Seed of the random policy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PolicyArgs {
    fn policy(&self) -> Policy {
        match self.policy {
            PolicyArg::Max => Policy::MaxCp,
            PolicyArg::Min => Policy::MinCp,
            PolicyArg::Random => Policy::RandomCp(self.seed),
        }
    }
}

#[derive(Debug, Args)]
struct SchedArgs {
    /// Cholesky factorization on `t x t` tiles.
    #[arg(long, conflicts_with_all = ["p", "q", "algo"])]
    t: Option<usize>,
    /// Loop order of the Cholesky factorization.
    #[arg(long, value_enum, default_value = "right-looking")]
    variant: VariantArg,
    /// Synchronize the Cholesky kernel groups.
    #[arg(long, value_enum)]
    sync: Option<SyncArg>,
    /// Tiled QR on `p x q` tiles.
    #[arg(long, requires_all = ["q", "algo"])]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    q: Option<usize>,
    #[arg(long, value_parser = parse_algo, requires = "p")]
    algo: Option<TiledAlgo>,
    #[arg(long, value_enum, default_value = "tt")]
    family: FamilyArg,
    #[arg(long, value_parser = parse_list)]
    procs: NumList,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Exhaustive optimum instead of a list schedule (small graphs only).
    #[arg(long)]
    optimal: bool,
    /// Gantt chart CSV of the schedule; needs a single processor count.
    #[arg(long)]
    gantt: Option<PathBuf>,
    /// Task graph as text lines, or DOT for a `.dot` path.
    #[arg(long)]
    export_graph: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct AlphaArgs {
    #[arg(long, value_parser = parse_list, default_value = "3..10")]
    t: NumList,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct StrassenArgs {
    /// Tile counts (powers of two).
    #[arg(long, value_parser = parse_list, default_value = "4,8,16,32,64")]
    p: NumList,
    /// Recursion depths; every depth the tile count allows when omitted.
    #[arg(long, value_parser = parse_list)]
    r: Option<NumList>,
    /// Tile order.
    #[arg(long, default_value_t = crate::golden::STRASSEN_NB)]
    nb: u64,
    /// Skip building graphs for the cp column.
    #[arg(long)]
    no_cp: bool,
    #[command(flatten)]
    out: OutArgs,
    #[command(flatten)]
    check: CheckArg,
}

#[derive(Debug, Args)]
struct IpEmitArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Horizon in model time units (half a QR weight unit).
    #[arg(long, conflicts_with = "makespan")]
    horizon: Option<i64>,
    /// Derive the horizon from a makespan in QR weight units.
    #[arg(long)]
    makespan: Option<u64>,
    /// Limit on kernels running in one time step.
    #[arg(long)]
    capacity: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct IpCheckArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    horizon: Option<i64>,
    #[arg(long)]
    capacity: Option<usize>,
    /// File of `name value` lines.
    #[arg(long, conflicts_with = "algo", required_unless_present = "algo")]
    assignment: Option<PathBuf>,
    /// Build the assignment from a list schedule of this algorithm.
    #[arg(long, value_parser = parse_algo)]
    algo: Option<TiledAlgo>,
    #[arg(long, default_value_t = 1)]
    procs: usize,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Also write the checked assignment as `name value` lines.
    #[arg(long)]
    write_assignment: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlacementArg {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoarseArg {
    SamehKuck,
    Fibonacci,
    Greedy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tt,
    Ts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Max,
    Min,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    RightLooking,
    LeftLooking,
    Bordered,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SyncArg {
    Grouped,
    Relaxed,
}

impl FamilyArg {
    fn family(self) -> KernelFamily {
        match self {
            FamilyArg::Tt => KernelFamily::TT,
            FamilyArg::Ts => KernelFamily::TS,
        }
    }
}

/// Parsed list of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumList(pub Vec<u64>);

impl NumList {
    fn usizes(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize).collect()
    }
}

/// Parses `a..b` or `a..=b` (both inclusive), single values, and comma
/// separated mixtures of them, keeping the given order.
pub fn parse_list(s: &str) -> Result<NumList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{x}` is not a non-negative integer"))
        };
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(NumList(out))
}

/// Parses a tiled algorithm name; PlasmaTree takes its domain size and
/// GrASAP its trailing column count after a colon.
pub fn parse_algo(s: &str) -> Result<TiledAlgo, String> {
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (
            n,
            Some(
                a.parse::<usize>()
                    .map_err(|_| format!("`{a}` is not a count"))?,
            ),
        ),
        None => (s, None),
    };
    let plain = |a: TiledAlgo| match arg {
        None => Ok(a),
        Some(_) => Err(format!("`{name}` takes no parameter")),
    };
    match name {
        "flat-tree" => plain(TiledAlgo::FlatTree),
        "fibonacci" => plain(TiledAlgo::Fibonacci),
        "greedy" => plain(TiledAlgo::Greedy),
        "binary-tree" => plain(TiledAlgo::BinaryTree),
        "asap" => plain(TiledAlgo::Asap),
        "plasma-tree" => arg.map(TiledAlgo::PlasmaTree).ok_or_else(|| "plasma-tree needs a domain size, e.g. plasma-tree:5".into()),
        "grasap" => Ok(TiledAlgo::GrASAP(arg.unwrap_or(1))),
        _ => Err(format!(
            "unknown algorithm `{name}`; expected flat-tree, fibonacci, greedy, binary-tree, plasma-tree:BS, asap or grasap[:I]"
        )),
    }
}

fn parse_cp_algo(s: &str) -> Result<CpAlgo, String> {
    if s == "plasma-best" {
        Ok(CpAlgo::PlasmaBest)
    } else {
        parse_algo(s).map(CpAlgo::Tiled)
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, &Destination::from_env()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_MODULE
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Compares a produced table against the published one.
type CheckFn<'a> = dyn Fn(&Table) -> Result<Vec<Mismatch>> + 'a;

/// Writes the main table, then runs the check when asked.
fn finish(
    dest: &Destination,
    out: &OutArgs,
    name: &str,
    table: &Table,
    check: Option<&CheckFn<'_>>,
) -> Result<i32> {
    dest.emit(out.out.as_deref(), &format!("{name}.csv"), &table.to_csv()?)?;
    let Some(check) = check else {
        return Ok(EXIT_OK);
    };
    let bad = check(table)?;
    if bad.is_empty() {
        eprintln!("check: every published cell matches");
        return Ok(EXIT_OK);
    }
    for m in &bad {
        eprintln!("mismatch: {m}");
    }
    eprintln!(
        "check: {} cell(s) differ from the published values",
        bad.len()
    );
    Ok(EXIT_MISMATCH)
}

fn execute(command: Command, dest: &Destination) -> Result<i32> {
    match command {
        Command::CholCp(a) => {
            let placements = match a.placement {
                Some(PlacementArg::In) => vec![Placement::InPlace],
                Some(PlacementArg::Out) => vec![Placement::OutOfPlace],
                None => vec![Placement::InPlace, Placement::OutOfPlace],
            };
            let table = cmd::chol_cp(&a.t.usizes(), &placements)?;
            let check = |t: &Table| cmd::check_chol_cp(t);
            finish(
                dest,
                &a.out,
                "chol-cp",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::CholBounds(a) => {
            let table = cmd::chol_bounds(a.t, &a.procs.0)?;
            let check = |tb: &Table| cmd::check_chol_bounds(a.t, tb);
            finish(
                dest,
                &a.out,
                "chol-bounds",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::QrCoarse(a) => {
            let algo = match a.algo {
                CoarseArg::SamehKuck => CoarseAlgo::SamehKuck,
                CoarseArg::Fibonacci => CoarseAlgo::Fibonacci,
                CoarseArg::Greedy => CoarseAlgo::Greedy,
            };
            let table = cmd::qr_coarse(a.p, a.q, algo, a.execution)?;
            let check = |t: &Table| cmd::check_qr_coarse(a.p, a.q, algo, a.execution, t);
            finish(
                dest,
                &a.out,
                "qr-coarse",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::QrTiled(a) => {
            let fam = a.family.family();
            let table = cmd::qr_tiled(a.p, a.q, a.algo, fam)?;
            let check = |t: &Table| cmd::check_qr_tiled(a.p, a.q, a.algo, fam, t);
            finish(
                dest,
                &a.out,
                "qr-tiled",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::QrCpTable(a) => {
            let ps = a.p.usizes();
            let qs = match &a.q {
                Some(q) => q.usizes(),
                None => (1..=ps.iter().copied().max().unwrap_or(0)).collect(),
            };
            let fam = a.family.family();
            let table = cmd::qr_cp_table(&ps, &qs, &a.algo, fam)?;
            let check = |t: &Table| cmd::check_qr_cp_table(t, fam);
            finish(
                dest,
                &a.out,
                "qr-cp-table",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::QrBounds(a) => {
            let policy = a.policy.policy();
            let table = cmd::qr_bounds(a.p, a.q, &a.procs.usizes(), &a.algo, a.bound_algo, policy)?;
            let check = |t: &Table| cmd::check_qr_bounds(a.p, a.q, a.bound_algo, policy, t);
            finish(
                dest,
                &a.out,
                "qr-bounds",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::Sched(a) => sched(a, dest),
        Command::Alpha(a) => finish(dest, &a.out, "alpha", &cmd::alpha(&a.t.usizes())?, None),
        Command::StrassenCount(a) => {
            let rs: Option<Vec<u32>> =
                a.r.as_ref()
                    .map(|r| r.0.iter().map(|&v| v as u32).collect());
            let table = cmd::strassen_count(&a.p.usizes(), rs.as_deref(), a.nb, !a.no_cp)?;
            let check = |t: &Table| cmd::check_strassen(t, a.nb);
            finish(
                dest,
                &a.out,
                "strassen-count",
                &table,
                a.check.check.then_some(&check as _),
            )
        }
        Command::IpEmit(a) => {
            let horizon = match (a.horizon, a.makespan) {
                (Some(h), _) => h,
                (None, Some(m)) => horizon_for(m),
                (None, None) => cmd::default_horizon(a.p, a.q)?,
            };
            let lp = cmd::ip_emit(a.p, a.q, horizon, a.capacity)?;
            dest.emit(a.out.out.as_deref(), "ip-emit.lp", &lp)?;
            Ok(EXIT_OK)
        }
        Command::IpCheck(a) => {
            let source = match (&a.assignment, a.algo) {
                (Some(path), _) => AssignmentSource::Text(
                    std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?,
                ),
                (None, Some(algo)) => AssignmentSource::Schedule {
                    algo,
                    procs: a.procs,
                    policy: a.policy.policy(),
                },
                (None, None) => return Err(usage("either --assignment or --algo is required")),
            };
            let (table, assignment) = cmd::ip_check(a.p, a.q, a.horizon, a.capacity, &source)?;
            if let Some(path) = &a.write_assignment {
                dest.emit_file(path, &assignment.to_text())?;
            }
            finish(dest, &a.out, "ip-check", &table, None)?;
            if table.rows.is_empty() {
                eprintln!("feasible");
                Ok(EXIT_OK)
            } else {
                eprintln!("infeasible: {} violated row(s)", table.rows.len());
                Ok(EXIT_MISMATCH)
            }
        }
    }
}

fn sched(a: SchedArgs, dest: &Destination) -> Result<i32> {
    let inst = match (a.t, a.p, a.q, a.algo) {
        (Some(t), ..) => {
            let variant = match a.variant {
                VariantArg::RightLooking => CholFactVariant::RightLooking,
                VariantArg::LeftLooking => CholFactVariant::LeftLooking,
                VariantArg::Bordered => CholFactVariant::Bordered,
            };
            let sync = a.sync.map(|s| match s {
                SyncArg::Grouped => SyncVariant::Grouped,
                SyncArg::Relaxed => SyncVariant::Relaxed,
            });
            Instance::cholesky(t, variant, sync)?
        }
        (None, Some(p), Some(q), Some(algo)) => {
            if a.sync.is_some() {
                return Err(usage("--sync applies to Cholesky graphs only"));
            }
            Instance::qr(p, q, algo, a.family.family())?
        }
        _ => {
            return Err(usage(
                "give --t for Cholesky, or --p, --q and --algo for QR",
            ))
        }
    };
    let procs = a.procs.usizes();
    if a.gantt.is_some() && procs.len() != 1 {
        return Err(usage("--gantt needs a single processor count"));
    }
    let (table, schedules) = cmd::sched(&inst, &procs, a.policy.policy(), a.optimal)?;
    if let Some(path) = &a.export_graph {
        dest.emit_file(path, &graph_export(path, &inst.graph, &inst.model))?;
    }
    if let Some(path) = &a.gantt {
        dest.emit_file(path, &gantt(&inst.graph, &schedules[0])?.to_csv()?)?;
    }
    finish(dest, &a.out, "sched", &table, None)
}
