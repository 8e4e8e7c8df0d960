use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Schedule, Slot};
use crate::cp::annotate_cp_with;
use crate::error::{Error, Result};
use crate::graph::TaskGraph;
use crate::kernel::WeightModel;

/// How a free processor picks among ready tasks. Priorities are the Backflow
/// remaining critical paths; equal priorities go to the lowest task id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    MaxCp,
    MinCp,
    /// Uniform choice from a ChaCha8 stream seeded with the value.
    RandomCp(u64),
}

enum Ready {
    Max(BinaryHeap<(u64, Reverse<usize>)>),
    Min(BinaryHeap<Reverse<(u64, usize)>>),
    Random(Vec<usize>, Box<ChaCha8Rng>),
}

impl Ready {
    fn push(&mut self, prio: u64, v: usize) {
        match self {
            Ready::Max(h) => h.push((prio, Reverse(v))),
            Ready::Min(h) => h.push(Reverse((prio, v))),
            Ready::Random(list, _) => list.push(v),
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match self {
            Ready::Max(h) => h.pop().map(|(_, Reverse(v))| v),
            Ready::Min(h) => h.pop().map(|Reverse((_, v))| v),
            Ready::Random(list, rng) => {
                if list.is_empty() {
                    None
                } else {
                    let i = rng.random_range(0..list.len());
                    Some(list.swap_remove(i))
                }
            }
        }
    }
}

/// List schedule on `procs` processors under a weight model.
pub fn list_schedule(
    graph: &TaskGraph,
    model: &WeightModel,
    procs: usize,
    policy: Policy,
) -> Result<Schedule> {
    list_schedule_with(graph, &graph.weights(model), procs, policy)
}

/// Greedy list scheduling with explicit weights.
///
/// Whenever tasks finish, their successors are released first, then idle
/// processors (lowest index first) take ready tasks per `policy`. No
/// processor stays idle while a task is ready. Zero-weight tasks complete on
/// release without a processor.
pub fn list_schedule_with(
    graph: &TaskGraph,
    weights: &[u64],
    procs: usize,
    policy: Policy,
) -> Result<Schedule> {
    if procs == 0 {
        return Err(Error::InvalidParameter("processor count must be positive"));
    }
    if weights.len() != graph.len() {
        return Err(Error::InvalidParameter("one weight per task"));
    }
    let prio = annotate_cp_with(graph, weights.to_vec()).priority;
    let n = graph.len();
    let mut missing: Vec<usize> = (0..n).map(|v| graph.predecessors(v).count()).collect();
    let mut slots = vec![
        Slot {
            proc: None,
            start: 0,
            finish: 0
        };
        n
    ];
    let mut ready = match policy {
        Policy::MaxCp => Ready::Max(BinaryHeap::new()),
        Policy::MinCp => Ready::Min(BinaryHeap::new()),
        Policy::RandomCp(seed) => {
            Ready::Random(Vec::new(), Box::new(ChaCha8Rng::seed_from_u64(seed)))
        }
    };
    let mut idle: BinaryHeap<Reverse<usize>> = (0..procs).map(Reverse).collect();
    let mut running: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    let mut instant: Vec<usize> = Vec::new();
    let mut now = 0u64;
    let mut done = 0usize;

    // Zero-weight tasks cascade at the current instant.
    let release = |v: usize, ready: &mut Ready, instant: &mut Vec<usize>| {
        if weights[v] == 0 {
            instant.push(v);
        } else {
            ready.push(prio[v], v);
        }
    };
    for v in (0..n).filter(|&v| missing[v] == 0) {
        release(v, &mut ready, &mut instant);
    }
    loop {
        while let Some(v) = instant.pop() {
            slots[v] = Slot {
                proc: None,
                start: now,
                finish: now,
            };
            done += 1;
            for s in graph.successors(v) {
                missing[s] -= 1;
                if missing[s] == 0 {
                    release(s, &mut ready, &mut instant);
                }
            }
        }
        while !idle.is_empty() {
            let Some(v) = ready.pop() else { break };
            let Reverse(p) = idle.pop().expect("checked nonempty");
            slots[v] = Slot {
                proc: Some(p),
                start: now,
                finish: now + weights[v],
            };
            running.push(Reverse((now + weights[v], v)));
        }
        let Some(&Reverse((t, _))) = running.peek() else {
            break;
        };
        now = t;
        while let Some(&Reverse((t, v))) = running.peek() {
            if t != now {
                break;
            }
            running.pop();
            done += 1;
            idle.push(Reverse(
                slots[v].proc.expect("running task has a processor"),
            ));
            for s in graph.successors(v) {
                missing[s] -= 1;
                if missing[s] == 0 {
                    release(s, &mut ready, &mut instant);
                }
            }
        }
    }
    debug_assert_eq!(done, n, "acyclic graphs schedule every task");
    let makespan = slots.iter().map(|s| s.finish).max().unwrap_or(0);
    Ok(Schedule {
        procs,
        slots,
        makespan,
    })
}
