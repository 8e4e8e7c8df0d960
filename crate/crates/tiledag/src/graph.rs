//! Tasks, tiles and hazard-based DAG construction from sequential traces.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kernel::{KernelKind, WeightModel};

/// A tile of a symbolic matrix. Temporaries must use matrix ids distinct from
/// the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileRef {
    pub matrix: u32,
    pub row: u32,
    pub col: u32,
}

impl TileRef {
    pub const fn new(matrix: u32, row: u32, col: u32) -> TileRef {
        TileRef { matrix, row, col }
    }
}

/// Up to four kernel indices, in the order the generator names them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Indices {
    vals: [u32; 4],
    len: u8,
}

impl Indices {
    pub fn new(vals: &[u32]) -> Indices {
        assert!(vals.len() <= 4, "at most four kernel indices");
        let mut out = Indices::default();
        out.vals[..vals.len()].copy_from_slice(vals);
        out.len = vals.len() as u8;
        out
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.vals[..usize::from(self.len)]
    }

    /// The `n`-th index, if present.
    pub fn get(&self, n: usize) -> Option<u32> {
        self.as_slice().get(n).copied()
    }
}

impl fmt::Display for Indices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, v) in self.as_slice().iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// One kernel invocation. A tile listed in both `reads` and `writes` is
/// updated in place; a tile only in `writes` is overwritten.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: usize,
    pub kind: KernelKind,
    pub indices: Indices,
    pub reads: Vec<TileRef>,
    pub writes: Vec<TileRef>,
    /// Generator-defined stage tag (Cholesky step, Strassen phase); 0 if unused.
    pub phase: u8,
}

impl Task {
    pub fn new(id: usize, kind: KernelKind, indices: &[u32]) -> Task {
        Task {
            id,
            kind,
            indices: Indices::new(indices),
            reads: Vec::new(),
            writes: Vec::new(),
            phase: 0,
        }
    }

    pub fn reading(mut self, tiles: &[TileRef]) -> Task {
        self.reads.extend_from_slice(tiles);
        self
    }

    pub fn writing(mut self, tiles: &[TileRef]) -> Task {
        self.writes.extend_from_slice(tiles);
        self
    }

    /// Marks `tiles` as read-modify-write.
    pub fn updating(mut self, tiles: &[TileRef]) -> Task {
        self.reads.extend_from_slice(tiles);
        self.writes.extend_from_slice(tiles);
        self
    }

    pub fn in_phase(mut self, phase: u8) -> Task {
        self.phase = phase;
        self
    }
}

/// Why an edge exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeCause {
    Raw,
    War,
    Waw,
    Explicit,
}

impl EdgeCause {
    pub fn name(self) -> &'static str {
        match self {
            EdgeCause::Raw => "RAW",
            EdgeCause::War => "WAR",
            EdgeCause::Waw => "WAW",
            EdgeCause::Explicit => "EXPLICIT",
        }
    }

    // Lower rank wins when two hazards connect the same pair.
    fn rank(self) -> u8 {
        match self {
            EdgeCause::Raw => 0,
            EdgeCause::Waw => 1,
            EdgeCause::War => 2,
            EdgeCause::Explicit => 3,
        }
    }
}

/// A directed edge between node positions (equal to task ids for traces).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cause: EdgeCause,
}

/// An acyclic task graph. Nodes are addressed by their position in `tasks`.
#[derive(Debug, Clone)]
pub struct TaskGraph {
    tasks: Vec<Task>,
    edges: Vec<Edge>,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
    topo: Vec<u32>,
}

#[derive(Default)]
struct TileState {
    last_writer: Option<usize>,
    readers: Vec<usize>,
}

/// Builds the dependence graph of a sequential trace.
///
/// Per tile, a write depends on the last writer (RAW if it also reads the
/// tile, WAW otherwise) and on every reader since that write (WAR); a read
/// depends on the last writer (RAW). Only these nearest conflicts become
/// edges. A BARRIER waits for every task since the previous barrier that has
/// no successor yet, and every later task up to the next barrier waits for it.
pub fn build_from_trace(trace: Vec<Task>) -> Result<TaskGraph> {
    for w in trace.windows(2) {
        if w[1].id == w[0].id {
            return Err(Error::DuplicateId(w[1].id));
        }
        if w[1].id < w[0].id {
            return Err(Error::OutOfOrder {
                prev: w[0].id,
                id: w[1].id,
            });
        }
    }
    let n = trace.len();
    let mut tiles: BTreeMap<TileRef, TileState> = BTreeMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut has_succ = vec![false; n];
    let mut barrier: Option<usize> = None;
    let mut segment_start = 0usize;
    let mut incoming: Vec<(usize, EdgeCause)> = Vec::new();

    for (pos, task) in trace.iter().enumerate() {
        incoming.clear();
        if task.kind == KernelKind::Barrier {
            for (q, flag) in has_succ.iter().enumerate().take(pos).skip(segment_start) {
                if !flag {
                    incoming.push((q, EdgeCause::Explicit));
                }
            }
            if let Some(b) = barrier {
                if !has_succ[b] {
                    incoming.push((b, EdgeCause::Explicit));
                }
            }
            barrier = Some(pos);
            segment_start = pos + 1;
        } else {
            if task.writes.is_empty() {
                return Err(Error::NoWrite(task.id));
            }
            if let Some(b) = barrier {
                incoming.push((b, EdgeCause::Explicit));
            }
            for tile in task.reads.iter().chain(task.writes.iter()) {
                let reads = task.reads.contains(tile);
                let writes = task.writes.contains(tile);
                let state = tiles.entry(*tile).or_default();
                if state.readers.last() == Some(&pos) || state.last_writer == Some(pos) {
                    continue;
                }
                // An update after readers is ordered through them already.
                if reads && (!writes || state.readers.is_empty()) {
                    if let Some(w) = state.last_writer {
                        incoming.push((w, EdgeCause::Raw));
                    }
                }
                if writes {
                    if state.readers.is_empty() {
                        if let (Some(w), false) = (state.last_writer, reads) {
                            incoming.push((w, EdgeCause::Waw));
                        }
                    } else {
                        for &r in &state.readers {
                            incoming.push((r, EdgeCause::War));
                        }
                    }
                    state.last_writer = Some(pos);
                    state.readers.clear();
                } else {
                    state.readers.push(pos);
                }
            }
        }
        incoming.sort_by_key(|&(from, cause)| (from, cause.rank()));
        incoming.dedup_by_key(|e| e.0);
        for &(from, cause) in &incoming {
            has_succ[from] = true;
            edges.push(Edge {
                from,
                to: pos,
                cause,
            });
        }
    }
    TaskGraph::assemble(trace, edges)
}

impl TaskGraph {
    /// Builds a graph from explicit edges between task positions.
    pub fn from_edges(tasks: Vec<Task>, mut edges: Vec<Edge>) -> Result<TaskGraph> {
        let n = tasks.len();
        if let Some(e) = edges.iter().find(|e| e.from >= n || e.to >= n) {
            return Err(Error::DanglingEdge {
                from: e.from,
                to: e.to,
            });
        }
        if let Some(e) = edges.iter().find(|e| e.from == e.to) {
            return Err(Error::Cycle {
                from: e.from,
                to: e.to,
            });
        }
        edges.sort_by_key(|e| (e.to, e.from, e.cause.rank()));
        edges.dedup_by_key(|e| (e.to, e.from));
        TaskGraph::assemble(tasks, edges)
    }

    fn assemble(tasks: Vec<Task>, edges: Vec<Edge>) -> Result<TaskGraph> {
        let n = tasks.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for e in &edges {
            succ[e.from].push(e.to as u32);
            pred[e.to].push(e.from as u32);
        }
        let topo = topological_order(&succ, &pred)?;
        Ok(TaskGraph {
            tasks,
            edges,
            succ,
            pred,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn task(&self, node: usize) -> &Task {
        &self.tasks[node]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[node].iter().map(|&s| s as usize)
    }

    pub fn predecessors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.pred[node].iter().map(|&s| s as usize)
    }

    /// Node positions in a topological order.
    pub fn topological(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.topo.iter().map(|&s| s as usize)
    }

    /// Per-node durations under `model`.
    pub fn weights(&self, model: &WeightModel) -> Vec<u64> {
        self.tasks.iter().map(|t| model.weight(t.kind)).collect()
    }

    /// Sum of all task durations.
    pub fn total_weight(&self, model: &WeightModel) -> u64 {
        self.tasks.iter().map(|t| model.weight(t.kind)).sum()
    }

    pub fn count_kind(&self, kind: KernelKind) -> usize {
        self.tasks.iter().filter(|t| t.kind == kind).count()
    }

    pub fn count_cause(&self, cause: EdgeCause) -> usize {
        self.edges.iter().filter(|e| e.cause == cause).count()
    }

    /// Edges implied by another path between their endpoints. Uses one
    /// reachability bitset per node, so keep it to graphs of a few thousand
    /// tasks.
    pub fn redundant_edges(&self) -> Vec<Edge> {
        let n = self.len();
        let words = n.div_ceil(64);
        let mut reach = vec![0u64; n * words];
        for v in self.topological().rev() {
            for s in self.successors(v) {
                reach[v * words + s / 64] |= 1 << (s % 64);
                for w in 0..words {
                    let bits = reach[s * words + w];
                    reach[v * words + w] |= bits;
                }
            }
        }
        self.edges
            .iter()
            .filter(|e| {
                self.successors(e.from)
                    .any(|s| s != e.to && reach[s * words + e.to / 64] & (1 << (e.to % 64)) != 0)
            })
            .copied()
            .collect()
    }
}

fn topological_order(succ: &[Vec<u32>], pred: &[Vec<u32>]) -> Result<Vec<u32>> {
    let n = succ.len();
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut order: Vec<u32> = (0..n)
        .filter(|&v| indeg[v] == 0)
        .map(|v| v as u32)
        .collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head] as usize;
        head += 1;
        for &s in &succ[v] {
            indeg[s as usize] -= 1;
            if indeg[s as usize] == 0 {
                order.push(s);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Walk predecessors inside the unprocessed set until a node repeats.
    let start = (0..n).find(|&v| indeg[v] > 0).expect("cycle member");
    let mut seen = vec![false; n];
    let mut v = start;
    loop {
        seen[v] = true;
        let p = pred[v]
            .iter()
            .map(|&p| p as usize)
            .find(|&p| indeg[p] > 0)
            .expect("cycle predecessor");
        if seen[p] {
            return Err(Error::Cycle { from: p, to: v });
        }
        v = p;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A00: TileRef = TileRef::new(0, 0, 0);
    const A10: TileRef = TileRef::new(0, 1, 0);

    #[test]
    fn empty_trace() {
        let g = build_from_trace(Vec::new()).unwrap();
        assert_eq!((g.len(), g.edges().len()), (0, 0));
    }

    #[test]
    fn producer_consumer_is_one_raw_edge() {
        let trace = vec![
            Task::new(0, KernelKind::Potrf, &[0]).updating(&[A00]),
            Task::new(1, KernelKind::Trsm, &[1, 0])
                .reading(&[A00])
                .updating(&[A10]),
        ];
        let g = build_from_trace(trace).unwrap();
        assert_eq!(
            g.edges(),
            &[Edge {
                from: 0,
                to: 1,
                cause: EdgeCause::Raw
            }]
        );
    }

    #[test]
    fn war_fans_in_from_all_readers() {
        let trace = vec![
            Task::new(0, KernelKind::Potrf, &[0]).updating(&[A00]),
            Task::new(1, KernelKind::Trsm, &[1, 0])
                .reading(&[A00])
                .updating(&[A10]),
            Task::new(2, KernelKind::Trsm, &[2, 0])
                .reading(&[A00])
                .updating(&[TileRef::new(0, 2, 0)]),
            Task::new(3, KernelKind::Trtri, &[0]).updating(&[A00]),
        ];
        let g = build_from_trace(trace).unwrap();
        let war: Vec<_> = g
            .edges()
            .iter()
            .filter(|e| e.cause == EdgeCause::War)
            .map(|e| (e.from, e.to))
            .collect();
        assert_eq!(war, vec![(1, 3), (2, 3)]);
        // 0 -> 3 is implied through the readers and is not materialized.
        assert!(!g.edges().iter().any(|e| e.from == 0 && e.to == 3));
    }

    #[test]
    fn overwrite_without_read_is_waw() {
        let trace = vec![
            Task::new(0, KernelKind::Copy, &[0, 0]).writing(&[A00]),
            Task::new(1, KernelKind::Copy, &[0, 0]).writing(&[A00]),
        ];
        let g = build_from_trace(trace).unwrap();
        assert_eq!(g.edges()[0].cause, EdgeCause::Waw);
    }

    #[test]
    fn barrier_joins_frontier() {
        let t =
            |id, row| Task::new(id, KernelKind::Gemm, &[row]).updating(&[TileRef::new(0, row, 0)]);
        let trace = vec![
            t(0, 0),
            t(1, 1),
            t(2, 0),
            Task::new(3, KernelKind::Barrier, &[]),
            t(4, 5),
            t(5, 6),
        ];
        let g = build_from_trace(trace).unwrap();
        let explicit: Vec<_> = g
            .edges()
            .iter()
            .filter(|e| e.cause == EdgeCause::Explicit)
            .map(|e| (e.from, e.to))
            .collect();
        assert_eq!(explicit, vec![(1, 3), (2, 3), (3, 4), (3, 5)]);
    }

    #[test]
    fn rejects_duplicate_and_decreasing_ids() {
        let t = |id| Task::new(id, KernelKind::Potrf, &[0]).updating(&[A00]);
        assert_eq!(
            build_from_trace(vec![t(0), t(0)]).unwrap_err(),
            Error::DuplicateId(0)
        );
        assert!(matches!(
            build_from_trace(vec![t(2), t(1)]),
            Err(Error::OutOfOrder { .. })
        ));
    }

    #[test]
    fn explicit_cycle_is_reported() {
        let t = |id| Task::new(id, KernelKind::Gemm, &[]).updating(&[A00]);
        let e = |from, to| Edge {
            from,
            to,
            cause: EdgeCause::Explicit,
        };
        let err = TaskGraph::from_edges(vec![t(0), t(1), t(2)], vec![e(0, 1), e(1, 2), e(2, 1)])
            .unwrap_err();
        match err {
            Error::Cycle { from, to } => assert!([(1, 2), (2, 1)].contains(&(from, to))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn redundant_edges_are_flagged() {
        let t = |id| Task::new(id, KernelKind::Gemm, &[]).updating(&[A00]);
        let e = |from, to| Edge {
            from,
            to,
            cause: EdgeCause::Explicit,
        };
        let g =
            TaskGraph::from_edges(vec![t(0), t(1), t(2)], vec![e(0, 1), e(1, 2), e(0, 2)]).unwrap();
        assert_eq!(g.redundant_edges(), vec![e(0, 2)]);
    }
}
