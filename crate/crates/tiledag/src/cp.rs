//! Critical paths, Backflow priorities and ALAP profiles.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::TaskGraph;
use crate::kernel::WeightModel;

/// Longest-path data for every node of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpAnnotation {
    /// Remaining longest path from the start of the node, own weight included.
    pub priority: Vec<u64>,
    /// Earliest start on unbounded processors.
    pub earliest_start: Vec<u64>,
    /// Latest start that keeps the makespan at `cp_length`.
    pub latest_start: Vec<u64>,
    pub weights: Vec<u64>,
    pub cp_length: u64,
}

impl CpAnnotation {
    pub fn earliest_finish(&self, node: usize) -> u64 {
        self.earliest_start[node] + self.weights[node]
    }

    /// Nodes with zero slack.
    pub fn is_critical(&self, node: usize) -> bool {
        self.earliest_start[node] == self.latest_start[node]
    }

    /// Sum of all weights.
    pub fn total_work(&self) -> u64 {
        self.weights.iter().sum()
    }
}

/// Backflow pass: priorities, earliest and latest starts under `model`.
pub fn annotate_cp(graph: &TaskGraph, model: &WeightModel) -> CpAnnotation {
    annotate_cp_with(graph, graph.weights(model))
}

/// Same as [`annotate_cp`] with explicit per-node weights.
pub fn annotate_cp_with(graph: &TaskGraph, weights: Vec<u64>) -> CpAnnotation {
    let n = graph.len();
    assert_eq!(weights.len(), n, "one weight per task");
    let mut priority = vec![0u64; n];
    for v in graph.topological().rev() {
        let tail = graph.successors(v).map(|s| priority[s]).max().unwrap_or(0);
        priority[v] = weights[v] + tail;
    }
    let mut earliest_start = vec![0u64; n];
    for v in graph.topological() {
        earliest_start[v] = graph
            .predecessors(v)
            .map(|p| earliest_start[p] + weights[p])
            .max()
            .unwrap_or(0);
    }
    let cp_length = priority.iter().copied().max().unwrap_or(0);
    let latest_start = priority.iter().map(|&pr| cp_length - pr).collect();
    CpAnnotation {
        priority,
        earliest_start,
        latest_start,
        weights,
        cp_length,
    }
}

/// Longest weighted path through the sub-DAG induced by the nodes for which
/// `keep` returns true.
pub fn cp_of_subset(graph: &TaskGraph, weights: &[u64], keep: impl Fn(usize) -> bool) -> u64 {
    let mut finish = vec![0u64; graph.len()];
    let mut best = 0;
    for v in graph.topological() {
        if !keep(v) {
            continue;
        }
        let start = graph
            .predecessors(v)
            .filter(|&p| keep(p))
            .map(|p| finish[p])
            .max()
            .unwrap_or(0);
        finish[v] = start + weights[v];
        best = best.max(finish[v]);
    }
    best
}

/// Active-task step function of the ALAP execution on unbounded processors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlapProfile {
    /// `(time, active)` breakpoints: `active` tasks run from `time` until the
    /// next breakpoint. The last breakpoint is `(cp_length, 0)`.
    pub breakpoints: Vec<(u64, u64)>,
    pub cp_length: u64,
    pub total_work: u64,
}

impl AlapProfile {
    /// Number of running tasks at instant `t` (right-continuous).
    pub fn active_at(&self, t: u64) -> u64 {
        match self.breakpoints.iter().rposition(|&(time, _)| time <= t) {
            Some(i) => self.breakpoints[i].1,
            None => 0,
        }
    }

    /// Area under the step function.
    pub fn area(&self) -> u64 {
        self.segments().map(|(a, b, c)| (b - a) * c).sum()
    }

    /// `(start, end, active)` for every nonempty segment.
    pub fn segments(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.breakpoints
            .windows(2)
            .map(|w| (w[0].0, w[1].0, w[0].1))
    }

    /// Peak concurrency.
    pub fn max_active(&self) -> u64 {
        self.breakpoints.iter().map(|b| b.1).max().unwrap_or(0)
    }
}

/// Schedules every task at its latest start and records how many run.
pub fn alap_profile(graph: &TaskGraph, model: &WeightModel) -> AlapProfile {
    profile_from_annotation(&annotate_cp(graph, model))
}

/// ALAP profile of an existing annotation.
pub fn profile_from_annotation(cp: &CpAnnotation) -> AlapProfile {
    let mut deltas: Vec<(u64, i64)> = Vec::new();
    for (v, &w) in cp.weights.iter().enumerate() {
        if w > 0 {
            deltas.push((cp.latest_start[v], 1));
            deltas.push((cp.latest_start[v] + w, -1));
        }
    }
    deltas.sort_unstable();
    let mut breakpoints: Vec<(u64, u64)> = Vec::new();
    let mut active: i64 = 0;
    let mut i = 0;
    while i < deltas.len() {
        let t = deltas[i].0;
        while i < deltas.len() && deltas[i].0 == t {
            active += deltas[i].1;
            i += 1;
        }
        match breakpoints.last_mut() {
            Some(last) if last.0 == t => last.1 = active as u64,
            _ => breakpoints.push((t, active as u64)),
        }
    }
    breakpoints.dedup_by(|b, a| a.1 == b.1);
    if breakpoints.is_empty() {
        breakpoints.push((0, 0));
    }
    AlapProfile {
        breakpoints,
        cp_length: cp.cp_length,
        total_work: cp.total_work(),
    }
}
