use num_rational::Ratio;

use super::{list_schedule, Policy, Schedule};
use crate::cholesky::{chol_synced_graph, gen_chol_fact, CholFactVariant, SyncVariant};
use crate::error::{Error, Result};
use crate::graph::{build_from_trace, TaskGraph};
use crate::kernel::WeightModel;

/// MaxCP schedule of the synchronized right-looking factorization.
pub fn sync_chol_schedule(t: usize, procs: usize, variant: SyncVariant) -> Result<Schedule> {
    let g = chol_synced_graph(t, variant)?;
    list_schedule(&g, &WeightModel::Cholesky, procs, Policy::MaxCp)
}

/// Outcome of [`alpha_min`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub t: usize,
    /// Fewest processors for which MaxCP reaches the critical path.
    pub p_opt: usize,
    /// `p_opt / t^2`.
    pub alpha: Ratio<u64>,
    pub cp: u64,
}

/// Smallest processor count for which the MaxCP schedule of the weighted
/// factorization equals its critical path, found by ascending search.
///
/// This is one reading of the minimum-processor experiment: MaxCP list
/// scheduling with lowest-id ties, not an optimal scheduler.
pub fn alpha_min(t: usize) -> Result<AlphaResult> {
    if t < 3 {
        return Err(Error::InvalidParameter("alpha search needs t >= 3"));
    }
    let g: TaskGraph = build_from_trace(gen_chol_fact(t, CholFactVariant::RightLooking)?)?;
    let cp = crate::cp::annotate_cp(&g, &WeightModel::Cholesky).cp_length;
    let mut p = 1;
    loop {
        if list_schedule(&g, &WeightModel::Cholesky, p, Policy::MaxCp)?.makespan == cp {
            let tt = (t * t) as u64;
            return Ok(AlphaResult {
                t,
                p_opt: p,
                alpha: Ratio::new(p as u64, tt),
                cp,
            });
        }
        p += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relaxed_reaches_cp_with_enough_processors() {
        assert_eq!(
            sync_chol_schedule(5, 8, SyncVariant::Relaxed)
                .unwrap()
                .makespan,
            35
        );
        assert_eq!(
            sync_chol_schedule(5, 1, SyncVariant::Grouped)
                .unwrap()
                .makespan,
            125
        );
    }

    #[test]
    fn alpha_for_three_tiles() {
        let r = alpha_min(3).unwrap();
        assert_eq!(r.cp, 17);
        // One processor needs all 27 units of work; two is the upper limit.
        assert_eq!(r.p_opt, 2);
        assert!(alpha_min(2).is_err());
    }
}
