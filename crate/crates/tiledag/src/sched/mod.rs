//! Bounded-processor list schedules and performance bounds.

mod bounds;
mod chol;
mod exhaustive;
mod list;

pub use bounds::{
    alap_bound, bounds_row, bounds_table, gamma_ub, lost_area, lower_bound_factor, rooftop_bound,
    BoundsRow,
};
pub use chol::{alpha_min, sync_chol_schedule, AlphaResult};
pub use exhaustive::{optimal_makespan, EXHAUSTIVE_MAX_TASKS};
pub use list::{list_schedule, list_schedule_with, Policy};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::TaskGraph;

/// Placement of one task. Zero-weight tasks occupy no processor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub proc: Option<usize>,
    pub start: u64,
    pub finish: u64,
}

/// A schedule of every task of a graph on `procs` identical processors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub procs: usize,
    /// One slot per task, indexed by node.
    pub slots: Vec<Slot>,
    pub makespan: u64,
}

impl Schedule {
    /// Checks durations, precedence and that no processor runs two tasks at
    /// once.
    pub fn validate(&self, graph: &TaskGraph, weights: &[u64]) -> Result<()> {
        let bad = |task, reason| Err(Error::InvalidSchedule { task, reason });
        if self.slots.len() != graph.len() || weights.len() != graph.len() {
            return bad(
                self.slots.len().min(graph.len()),
                "slot count differs from task count",
            );
        }
        let mut per_proc: Vec<Vec<(u64, u64, usize)>> = vec![Vec::new(); self.procs];
        let mut makespan = 0;
        for (v, s) in self.slots.iter().enumerate() {
            if s.finish != s.start + weights[v] {
                return bad(v, "duration differs from weight");
            }
            match s.proc {
                Some(p) if p < self.procs => {
                    if weights[v] > 0 {
                        per_proc[p].push((s.start, s.finish, v));
                    }
                }
                Some(_) => return bad(v, "processor out of range"),
                None if weights[v] > 0 => return bad(v, "task with work has no processor"),
                None => {}
            }
            if graph
                .predecessors(v)
                .any(|u| self.slots[u].finish > s.start)
            {
                return bad(v, "starts before a predecessor finishes");
            }
            makespan = makespan.max(s.finish);
        }
        for list in &mut per_proc {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[1].0 < w[0].1) {
                return bad(w[1].2, "overlaps another task on its processor");
            }
        }
        if makespan != self.makespan {
            return bad(0, "makespan differs from the latest finish");
        }
        Ok(())
    }

    /// Number of busy processors on `[t, t+1)`.
    pub fn busy_at(&self, t: u64) -> usize {
        self.slots
            .iter()
            .filter(|s| s.proc.is_some() && s.start <= t && t < s.finish)
            .count()
    }
}
