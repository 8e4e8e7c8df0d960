//! Trace generators for tiled Cholesky factorization and inversion.
//!
//! Tiles are 0-based. Matrix `A` holds the operand and the result; `B` and `C`
//! are the working copies of the out-of-place inversion.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{build_from_trace, Edge, EdgeCause, Task, TaskGraph, TileRef};
use crate::kernel::KernelKind::{self, *};

pub const MATRIX_A: u32 = 0;
pub const MATRIX_B: u32 = 1;
pub const MATRIX_C: u32 = 2;

/// Phase tags carried by inversion tasks.
pub const STEP_FACTOR: u8 = 1;
pub const STEP_INVERT: u8 = 2;
pub const STEP_PRODUCT: u8 = 3;

fn a(i: usize, j: usize) -> TileRef {
    TileRef::new(MATRIX_A, i as u32, j as u32)
}

fn tile(m: u32, i: usize, j: usize) -> TileRef {
    TileRef::new(m, i as u32, j as u32)
}

/// Loop order of the three factorization variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CholFactVariant {
    Bordered,
    LeftLooking,
    RightLooking,
}

/// Direction of an innermost accumulation loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopDir {
    /// Ascending index.
    U,
    /// Descending index.
    D,
}

impl LoopDir {
    fn range(self, lo: usize, hi: usize) -> Vec<usize> {
        match self {
            LoopDir::U => (lo..hi).collect(),
            LoopDir::D => (lo..hi).rev().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    InPlace,
    OutOfPlace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CholInvConfig {
    pub t: usize,
    pub placement: Placement,
    /// Directions of the innermost GEMM loops of the three steps.
    pub loop_dirs: [LoopDir; 3],
    /// `false` separates the steps with barriers.
    pub pipelined: bool,
}

impl CholInvConfig {
    pub fn new(t: usize, placement: Placement) -> CholInvConfig {
        CholInvConfig {
            t,
            placement,
            loop_dirs: [LoopDir::U, LoopDir::D, LoopDir::U],
            pipelined: true,
        }
    }
}

struct Trace {
    tasks: Vec<Task>,
    phase: u8,
}

impl Trace {
    fn new() -> Trace {
        Trace {
            tasks: Vec::new(),
            phase: 0,
        }
    }

    fn push(&mut self, kind: KernelKind, idx: &[usize], reads: &[TileRef], updates: &[TileRef]) {
        let idx: Vec<u32> = idx.iter().map(|&v| v as u32).collect();
        let task = Task::new(self.tasks.len(), kind, &idx)
            .reading(reads)
            .updating(updates)
            .in_phase(self.phase);
        self.tasks.push(task);
    }

    fn copy(&mut self, t: usize, dst: u32) {
        for i in 0..t {
            for j in 0..=i {
                let task = Task::new(self.tasks.len(), Copy, &[i as u32, j as u32])
                    .reading(&[a(i, j)])
                    .writing(&[tile(dst, i, j)])
                    .in_phase(self.phase);
                self.tasks.push(task);
            }
        }
    }

    fn barrier(&mut self) {
        self.tasks.push(Task::new(self.tasks.len(), Barrier, &[]));
    }

    fn potrf(&mut self, j: usize) {
        self.push(Potrf, &[j], &[], &[a(j, j)]);
    }

    fn trsm(&mut self, i: usize, j: usize) {
        self.push(Trsm, &[i, j], &[a(j, j)], &[a(i, j)]);
    }

    // A_jj -= A_jk A_jk^T
    fn syrk(&mut self, j: usize, k: usize) {
        self.push(Syrk, &[j, k], &[a(j, k)], &[a(j, j)]);
    }

    // A_ij -= A_ik A_jk^T
    fn gemm(&mut self, i: usize, j: usize, k: usize) {
        self.push(Gemm, &[i, j, k], &[a(i, k), a(j, k)], &[a(i, j)]);
    }
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1"));
    }
    Ok(())
}

/// Tiled Cholesky factorization `A = L L^T` (lower) in the given loop order.
pub fn gen_chol_fact(t: usize, variant: CholFactVariant) -> Result<Vec<Task>> {
    check_t(t)?;
    let mut tr = Trace::new();
    match variant {
        CholFactVariant::RightLooking => {
            for k in 0..t {
                tr.potrf(k);
                for i in k + 1..t {
                    tr.trsm(i, k);
                }
                for j in k + 1..t {
                    tr.syrk(j, k);
                    for i in j + 1..t {
                        tr.gemm(i, j, k);
                    }
                }
            }
        }
        CholFactVariant::LeftLooking => left_looking(&mut tr, t, LoopDir::U),
        CholFactVariant::Bordered => {
            for i in 0..t {
                for j in 0..i {
                    for k in 0..j {
                        tr.gemm(i, j, k);
                    }
                    tr.trsm(i, j);
                }
                for k in 0..i {
                    tr.syrk(i, k);
                }
                tr.potrf(i);
            }
        }
    }
    Ok(tr.tasks)
}

fn left_looking(tr: &mut Trace, t: usize, dir: LoopDir) {
    for j in 0..t {
        for k in 0..j {
            tr.syrk(j, k);
        }
        tr.potrf(j);
        for i in j + 1..t {
            for k in dir.range(0, j) {
                tr.gemm(i, j, k);
            }
        }
        for i in j + 1..t {
            tr.trsm(i, j);
        }
    }
}

/// Tiled Cholesky inversion: factorization, inversion of `L`, then the
/// product `L^{-T} L^{-1}`. Tasks carry their step in `phase`.
pub fn gen_chol_inversion(cfg: &CholInvConfig) -> Result<Vec<Task>> {
    let t = cfg.t;
    check_t(t)?;
    let out = cfg.placement == Placement::OutOfPlace;
    let [d1, d2, d3] = cfg.loop_dirs;
    let mut tr = Trace::new();

    tr.phase = STEP_FACTOR;
    left_looking(&mut tr, t, d1);

    if !cfg.pipelined {
        tr.barrier();
    }
    tr.phase = STEP_INVERT;
    let b = if out {
        tr.copy(t, MATRIX_B);
        MATRIX_B
    } else {
        MATRIX_A
    };
    for j in (0..t).rev() {
        tr.push(Trtri, &[j], &[], &[a(j, j)]);
        for i in (j + 1..t).rev() {
            tr.push(Trmm, &[i, j], &[a(i, i)], &[a(i, j)]);
            for k in d2.range(j + 1, i) {
                tr.push(Gemm, &[i, j, k], &[a(i, k), tile(b, k, j)], &[a(i, j)]);
            }
            tr.push(Trmm, &[i, j], &[a(i, i)], &[a(i, j)]);
        }
    }

    if !cfg.pipelined {
        tr.barrier();
    }
    tr.phase = STEP_PRODUCT;
    let c = if out {
        tr.copy(t, MATRIX_C);
        MATRIX_C
    } else {
        MATRIX_A
    };
    for i in 0..t {
        for j in 0..i {
            tr.push(Trmm, &[i, j], &[tile(c, i, i)], &[a(i, j)]);
        }
        tr.push(Lauum, &[i], &[], &[a(i, i)]);
        for j in 0..i {
            for k in d3.range(i + 1, t) {
                tr.push(
                    Gemm,
                    &[i, j, k],
                    &[tile(c, k, i), tile(c, k, j)],
                    &[a(i, j)],
                );
            }
        }
        for k in i + 1..t {
            tr.push(Syrk, &[i, k], &[tile(c, k, i)], &[a(i, i)]);
        }
    }
    Ok(tr.tasks)
}

/// Synchronization pattern of a right-looking factorization schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncVariant {
    /// Synchronization after the POTRF, TRSM, GEMM and SYRK groups of every
    /// column.
    Grouped,
    /// Synchronization only after the POTRF and the TRSM groups; GEMMs and
    /// SYRKs form one group and the next POTRF does not wait for it.
    Relaxed,
}

/// Right-looking factorization with synchronizations between its kernel
/// groups, as a graph.
///
/// Each synchronization is a BARRIER node that waits for every task of the
/// group before it and precedes every task of the group after it. Groups
/// without a synchronization between them are ordered by data hazards only.
pub fn chol_synced_graph(t: usize, variant: SyncVariant) -> Result<TaskGraph> {
    check_t(t)?;
    let grouped = variant == SyncVariant::Grouped;
    let mut tr = Trace::new();
    // (first task, synchronized with the group before)
    let mut groups: Vec<(usize, bool)> = Vec::new();
    for i in 0..t {
        groups.push((tr.tasks.len(), grouped));
        tr.potrf(i);
        groups.push((tr.tasks.len(), true));
        for j in i + 1..t {
            tr.trsm(j, i);
        }
        groups.push((tr.tasks.len(), true));
        for j in i + 1..t {
            for k in i + 1..j {
                tr.gemm(j, k, i);
            }
            if !grouped {
                tr.syrk(j, i);
            }
        }
        if grouped {
            groups.push((tr.tasks.len(), true));
            for j in i + 1..t {
                tr.syrk(j, i);
            }
        }
    }
    let n = tr.tasks.len();
    let data = build_from_trace(tr.tasks.clone())?;

    // Drop empty groups, keeping any synchronization they carried.
    let mut spans: Vec<(usize, usize, bool)> = Vec::new();
    let mut pending = false;
    for (g, &(first, sync)) in groups.iter().enumerate() {
        let end = groups.get(g + 1).map_or(n, |x| x.0);
        pending |= sync;
        if end > first {
            spans.push((first, end, pending && !spans.is_empty()));
            pending = false;
        }
    }

    let mut tasks: Vec<Task> = Vec::with_capacity(n + spans.len());
    let mut pos = alloc::vec![0usize; n];
    let mut edges: Vec<Edge> = Vec::new();
    for (g, &(first, end, sync)) in spans.iter().enumerate() {
        if sync {
            let b = tasks.len();
            tasks.push(Task::new(b, Barrier, &[]));
            let (pf, pe, _) = spans[g - 1];
            edges.extend((pf..pe).map(|v| Edge {
                from: pos[v],
                to: b,
                cause: EdgeCause::Explicit,
            }));
            edges.extend((first..end).map(|v| Edge {
                from: b,
                to: b + 1 + v - first,
                cause: EdgeCause::Explicit,
            }));
        }
        for (v, slot) in pos.iter_mut().enumerate().take(end).skip(first) {
            *slot = tasks.len();
            let mut task = tr.tasks[v].clone();
            task.id = *slot;
            tasks.push(task);
        }
    }
    edges.extend(data.edges().iter().map(|e| Edge {
        from: pos[e.from],
        to: pos[e.to],
        cause: e.cause,
    }));
    TaskGraph::from_edges(tasks, edges)
}

/// Closed forms for critical paths of the Cholesky traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CholCp {
    /// Weighted factorization, Cholesky weights.
    Fact9tMinus10,
    Step1,
    Step2In,
    Step2Out,
    Step3In,
    Step3Out,
    PipeIn,
    PipeOut,
    NoPipeIn,
    NoPipeOut,
    /// Step 2 with every accumulation loop ascending.
    TrtriUUUIn,
    TrtriUUUOut,
}

/// Evaluates the closed form `which` at `t` (unit weights except the first).
pub fn chol_cp_oracle(t: u64, which: CholCp) -> Result<u64> {
    if t < 2 {
        return Err(Error::InvalidParameter("closed forms need t >= 2"));
    }
    Ok(match which {
        CholCp::Fact9tMinus10 => 9 * t - 10,
        CholCp::Step1 | CholCp::Step3In => 3 * t - 2,
        CholCp::Step2In => 3 * t - 3,
        CholCp::Step2Out => 2 * t - 1,
        CholCp::Step3Out => t,
        CholCp::PipeIn => 9 * t - 9,
        CholCp::PipeOut => 5 * t - 2,
        CholCp::NoPipeIn => 9 * t - 7,
        CholCp::NoPipeOut => 6 * t - 3,
        CholCp::TrtriUUUIn => t * t - 2 * t + 3,
        CholCp::TrtriUUUOut => (t * t - t) / 2 + 2,
    })
}
