use num_rational::Ratio;
use proptest::prelude::*;
use tiledag::cholesky::{gen_chol_fact, CholFactVariant};
use tiledag::qr::{tiled_graph, KernelFamily, TiledAlgo};
use tiledag::sched::{
    alap_bound, bounds_table, list_schedule_with, rooftop_bound, Policy, Schedule,
};
use tiledag::{
    alap_profile, annotate_cp, build_from_trace, KernelKind, Task, TaskGraph, TileRef, WeightModel,
};

/// One access of a random trace: tile index and whether it is written.
type Access = (u32, bool);

fn random_trace(accesses: &[Vec<Access>]) -> Vec<Task> {
    accesses
        .iter()
        .enumerate()
        .map(|(id, acc)| {
            let tile = |&(t, _): &Access| TileRef::new(0, t, 0);
            let reads: Vec<TileRef> = acc.iter().filter(|a| !a.1).map(tile).collect();
            let writes: Vec<TileRef> = acc.iter().filter(|a| a.1).map(tile).collect();
            Task::new(id, KernelKind::Gemm, &[])
                .reading(&reads)
                .writing(&writes)
        })
        .collect()
}

fn reachable(g: &TaskGraph, from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for s in g.successors(v) {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    false
}

/// Random traces over five tiles; every task writes its first tile.
fn trace_strategy() -> impl Strategy<Value = Vec<Vec<Access>>> {
    prop::collection::vec(prop::collection::vec((0u32..5, any::<bool>()), 1..4), 0..24).prop_map(
        |mut tr| {
            for acc in &mut tr {
                acc[0].1 = true;
            }
            tr
        },
    )
}

fn graph_strategy() -> impl Strategy<Value = (TaskGraph, Vec<u64>)> {
    (trace_strategy(), prop::collection::vec(0u64..6, 24)).prop_map(|(tr, w)| {
        let g = build_from_trace(random_trace(&tr)).unwrap();
        let w = w[..g.len()].to_vec();
        (g, w)
    })
}

fn policy(n: u8, seed: u64) -> Policy {
    match n % 3 {
        0 => Policy::MaxCp,
        1 => Policy::MinCp,
        _ => Policy::RandomCp(seed),
    }
}

/// At every start instant no processor is left idle while a task whose
/// predecessors are done waits for a later start.
fn no_idle_while_ready(g: &TaskGraph, w: &[u64], s: &Schedule) -> bool {
    let mut starts: Vec<u64> = s.slots.iter().map(|x| x.start).collect();
    starts.sort_unstable();
    starts.dedup();
    starts.iter().all(|&t| {
        let busy = s
            .slots
            .iter()
            .enumerate()
            .filter(|(v, x)| w[*v] > 0 && x.start <= t && t < x.finish)
            .count();
        let waiting = (0..g.len()).any(|v| {
            w[v] > 0 && s.slots[v].start > t && g.predecessors(v).all(|u| s.slots[u].finish <= t)
        });
        !waiting || busy == s.procs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Edges point forward and every pair of conflicting accesses is
    /// ordered by a path.
    #[test]
    fn traces_give_acyclic_complete_graphs(tr in trace_strategy()) {
        let g = build_from_trace(random_trace(&tr)).unwrap();
        prop_assert_eq!(g.topological().count(), g.len());
        for e in g.edges() {
            prop_assert!(e.from < e.to);
        }
        for b in 0..tr.len() {
            for a in 0..b {
                let conflict = tr[a].iter().any(|x| tr[b].iter().any(|y| x.0 == y.0 && (x.1 || y.1)));
                if conflict {
                    prop_assert!(reachable(&g, a, b), "{} -> {}", a, b);
                }
            }
        }
    }

    /// Dropping the redundant edges keeps every critical path.
    #[test]
    fn redundant_edges_are_implied(tr in trace_strategy()) {
        let g = build_from_trace(random_trace(&tr)).unwrap();
        let red = g.redundant_edges();
        let kept: Vec<_> = g.edges().iter().filter(|e| !red.contains(e)).copied().collect();
        let h = TaskGraph::from_edges(g.tasks().to_vec(), kept).unwrap();
        for e in &red {
            prop_assert!(reachable(&h, e.from, e.to));
        }
        prop_assert_eq!(annotate_cp(&g, &WeightModel::Unit).priority, annotate_cp(&h, &WeightModel::Unit).priority);
    }

    #[test]
    fn list_schedules_are_valid((g, w) in graph_strategy(), procs in 1usize..5, pol in any::<u8>(), seed in any::<u64>()) {
        let s = list_schedule_with(&g, &w, procs, policy(pol, seed)).unwrap();
        prop_assert_eq!(s.validate(&g, &w), Ok(()));
        prop_assert!(no_idle_while_ready(&g, &w, &s));
        let cp = annotate_cp_weights(&g, &w);
        let work: u64 = w.iter().sum();
        prop_assert!(s.makespan >= cp);
        prop_assert!(s.makespan * procs as u64 >= work);
        if procs == 1 {
            prop_assert_eq!(s.makespan, work);
        }
    }

    #[test]
    fn random_policy_is_reproducible((g, w) in graph_strategy(), procs in 1usize..5, seed in any::<u64>()) {
        let a = list_schedule_with(&g, &w, procs, Policy::RandomCp(seed)).unwrap();
        let b = list_schedule_with(&g, &w, procs, Policy::RandomCp(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn annotate_cp_weights(g: &TaskGraph, w: &[u64]) -> u64 {
    tiledag::cp::annotate_cp_with(g, w.to_vec()).cp_length
}

fn model_graphs() -> Vec<(TaskGraph, WeightModel)> {
    let mut v = Vec::new();
    for t in [2usize, 4, 6] {
        v.push((
            build_from_trace(gen_chol_fact(t, CholFactVariant::RightLooking).unwrap()).unwrap(),
            WeightModel::Cholesky,
        ));
    }
    for (p, q, algo) in [
        (5, 5, TiledAlgo::GrASAP(1)),
        (8, 3, TiledAlgo::Fibonacci),
        (6, 4, TiledAlgo::FlatTree),
    ] {
        let list = algo.elimination_list(p, q).unwrap();
        v.push((
            build_from_trace(tiled_graph(&list, KernelFamily::TT).unwrap()).unwrap(),
            WeightModel::QrFull,
        ));
    }
    v
}

/// The ALAP-derived bound never increases with processors, sits above the
/// rooftop bound and reaches the critical path.
#[test]
fn bounds_are_monotone_and_ordered() {
    for (g, m) in model_graphs() {
        let prof = alap_profile(&g, &m);
        let rows = bounds_table(&prof, 40).unwrap();
        let cp = Ratio::from_integer(prof.cp_length);
        assert!(rows.windows(2).all(|r| r[1].t_alap <= r[0].t_alap));
        assert!(rows.iter().all(|r| r.t_roof <= r.t_alap && cp <= r.t_roof));
        assert_eq!(rows.last().unwrap().t_alap, cp);
        assert_eq!(rows[0].t_alap, Ratio::from_integer(prof.total_work));
        for r in &rows {
            assert_eq!(r.t_alap, alap_bound(&g, &m, r.p).unwrap());
            assert_eq!(r.t_roof, rooftop_bound(&g, &m, r.p).unwrap());
            assert_eq!(r.speedup, Ratio::from_integer(prof.total_work) / r.t_alap);
        }
    }
}

#[test]
fn makespans_respect_the_rooftop() {
    for (g, m) in model_graphs() {
        let w = g.weights(&m);
        for procs in 1..=12 {
            for pol in [Policy::MaxCp, Policy::MinCp, Policy::RandomCp(7)] {
                let s = list_schedule_with(&g, &w, procs, pol).unwrap();
                s.validate(&g, &w).unwrap();
                assert!(
                    Ratio::from_integer(s.makespan) >= rooftop_bound(&g, &m, procs as u64).unwrap()
                );
            }
        }
    }
}
