use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Task, TileRef};
use crate::kernel::{KernelKind, WeightModel};

/// Receives the kernels of a sequential trace in order.
pub trait KernelSink {
    /// Records one kernel. A tile in both `reads` and `writes` is updated in
    /// place. Returns the kernel's finish time when the sink tracks time.
    fn emit(
        &mut self,
        kind: KernelKind,
        indices: &[u32],
        reads: &[TileRef],
        writes: &[TileRef],
    ) -> Option<u64>;
}

/// Collects the trace as tasks.
#[derive(Debug, Default)]
pub struct TraceSink {
    pub tasks: Vec<Task>,
}

impl KernelSink for TraceSink {
    fn emit(
        &mut self,
        kind: KernelKind,
        indices: &[u32],
        reads: &[TileRef],
        writes: &[TileRef],
    ) -> Option<u64> {
        let id = self.tasks.len();
        self.tasks
            .push(Task::new(id, kind, indices).reading(reads).writing(writes));
        None
    }
}

/// Earliest-start simulation on unbounded processors without building the
/// graph. Gives the same times as the hazard DAG of the trace.
///
/// Tiles are addressed by matrix id in `0..matrices`, row in `1..=p` and
/// column in `1..=q`.
#[derive(Debug, Clone)]
pub struct TimeSink {
    p: usize,
    q: usize,
    model: WeightModel,
    last_write: Vec<u64>,
    last_read: Vec<u64>,
    makespan: u64,
    work: u64,
    count: usize,
}

impl TimeSink {
    pub fn new(matrices: usize, p: usize, q: usize, model: WeightModel) -> TimeSink {
        let n = matrices * p * q;
        TimeSink {
            p,
            q,
            model,
            last_write: vec![0; n],
            last_read: vec![0; n],
            makespan: 0,
            work: 0,
            count: 0,
        }
    }

    fn slot(&self, t: &TileRef) -> usize {
        let (r, c) = (t.row as usize, t.col as usize);
        debug_assert!(
            r >= 1 && r <= self.p && c >= 1 && c <= self.q,
            "tile out of range"
        );
        t.matrix as usize * self.p * self.q + (r - 1) * self.q + (c - 1)
    }

    /// Time at which a kernel with these accesses could start.
    pub fn ready_time(&self, reads: &[TileRef], writes: &[TileRef]) -> u64 {
        let r = reads.iter().map(|t| self.last_write[self.slot(t)]);
        let w = writes.iter().map(|t| {
            let s = self.slot(t);
            self.last_write[s].max(self.last_read[s])
        });
        r.chain(w).max().unwrap_or(0)
    }

    /// Latest finish time so far.
    pub fn makespan(&self) -> u64 {
        self.makespan
    }

    /// Sum of the weights of all kernels so far.
    pub fn total_work(&self) -> u64 {
        self.work
    }

    /// Number of kernels so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

impl KernelSink for TimeSink {
    fn emit(
        &mut self,
        kind: KernelKind,
        _indices: &[u32],
        reads: &[TileRef],
        writes: &[TileRef],
    ) -> Option<u64> {
        let weight = self.model.weight(kind);
        let finish = self.ready_time(reads, writes) + weight;
        for t in writes {
            let s = self.slot(t);
            self.last_write[s] = finish;
            self.last_read[s] = 0;
        }
        for t in reads {
            if !writes.contains(t) {
                let s = self.slot(t);
                self.last_read[s] = self.last_read[s].max(finish);
            }
        }
        self.makespan = self.makespan.max(finish);
        self.work += weight;
        self.count += 1;
        Some(finish)
    }
}
