use alloc::vec;
use alloc::vec::Vec;

use super::{Schedule, Slot};
use crate::cp::annotate_cp_with;
use crate::error::{Error, Result};
use crate::graph::TaskGraph;

/// Largest graph [`optimal_makespan`] accepts.
pub const EXHAUSTIVE_MAX_TASKS: usize = 16;

struct Search<'a> {
    graph: &'a TaskGraph,
    weights: &'a [u64],
    tail: Vec<u64>,
    best: u64,
    best_slots: Vec<Slot>,
    slots: Vec<Slot>,
    placed: Vec<bool>,
    avail: Vec<u64>,
    remaining_work: u64,
}

impl Search<'_> {
    fn lower_bound(&self) -> u64 {
        let n = self.graph.len();
        let mut lb = 0;
        for v in (0..n).filter(|&v| !self.placed[v]) {
            let ready = self
                .graph
                .predecessors(v)
                .filter(|&u| self.placed[u])
                .map(|u| self.slots[u].finish)
                .max();
            lb = lb.max(ready.unwrap_or(0) + self.tail[v]);
        }
        let procs = self.avail.len() as u64;
        let busy: u64 = self.avail.iter().sum();
        lb.max((busy + self.remaining_work).div_ceil(procs))
    }

    fn dfs(&mut self, depth: usize) {
        let n = self.graph.len();
        if depth == n {
            let makespan = self.slots.iter().map(|s| s.finish).max().unwrap_or(0);
            if makespan < self.best {
                self.best = makespan;
                self.best_slots.clone_from(&self.slots);
            }
            return;
        }
        if self.lower_bound() >= self.best {
            return;
        }
        for v in 0..n {
            if self.placed[v] || self.graph.predecessors(v).any(|u| !self.placed[u]) {
                continue;
            }
            let ready = self
                .graph
                .predecessors(v)
                .map(|u| self.slots[u].finish)
                .max()
                .unwrap_or(0);
            let w = self.weights[v];
            self.placed[v] = true;
            self.remaining_work -= w;
            if w == 0 {
                self.slots[v] = Slot {
                    proc: None,
                    start: ready,
                    finish: ready,
                };
                self.dfs(depth + 1);
            } else {
                // Processors with equal availability are interchangeable.
                for p in 0..self.avail.len() {
                    let a = self.avail[p];
                    if self.avail[..p].contains(&a) {
                        continue;
                    }
                    let start = ready.max(a);
                    self.avail[p] = start + w;
                    self.slots[v] = Slot {
                        proc: Some(p),
                        start,
                        finish: start + w,
                    };
                    self.dfs(depth + 1);
                    self.avail[p] = a;
                }
            }
            self.remaining_work += w;
            self.placed[v] = false;
        }
    }
}

/// Optimal schedule by branch and bound over precedence-respecting task
/// orders and processor choices, each task starting as early as its
/// processor and predecessors allow. Replaying any optimal schedule in
/// start-time order on the same processors yields one at least as short, so
/// the search is exact.
pub fn optimal_makespan(graph: &TaskGraph, weights: &[u64], procs: usize) -> Result<Schedule> {
    if procs == 0 {
        return Err(Error::InvalidParameter("processor count must be positive"));
    }
    if graph.len() > EXHAUSTIVE_MAX_TASKS {
        return Err(Error::TooLarge(
            "exhaustive search is limited to small graphs",
        ));
    }
    if weights.len() != graph.len() {
        return Err(Error::InvalidParameter("one weight per task"));
    }
    let n = graph.len();
    let empty = Slot {
        proc: None,
        start: 0,
        finish: 0,
    };
    let mut s = Search {
        graph,
        weights,
        tail: annotate_cp_with(graph, weights.to_vec()).priority,
        best: u64::MAX,
        best_slots: vec![empty; n],
        slots: vec![empty; n],
        placed: vec![false; n],
        avail: vec![0; procs],
        remaining_work: weights.iter().sum(),
    };
    s.dfs(0);
    let makespan = if n == 0 { 0 } else { s.best };
    Ok(Schedule {
        procs,
        slots: s.best_slots,
        makespan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, EdgeCause, Task, TileRef};
    use crate::kernel::KernelKind;

    #[test]
    fn toy_optimum_is_four() {
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
        let w = [3, 3, 1, 1];
        let s = optimal_makespan(&g, &w, 2).unwrap();
        s.validate(&g, &w).unwrap();
        assert_eq!(s.makespan, 4);
    }

    #[test]
    fn empty_graph() {
        let g = TaskGraph::from_edges(Vec::new(), Vec::new()).unwrap();
        assert_eq!(optimal_makespan(&g, &[], 3).unwrap().makespan, 0);
    }
}
