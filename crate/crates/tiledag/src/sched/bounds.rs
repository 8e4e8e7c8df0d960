use alloc::vec::Vec;

use num_rational::Ratio;

use crate::cp::{alap_profile, AlapProfile};
use crate::error::{Error, Result};
use crate::graph::TaskGraph;
use crate::kernel::WeightModel;

/// Bounds and ideal speedup for one processor count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsRow {
    pub p: u64,
    pub lost_area: u64,
    /// ALAP-derived upper bound on performance, as a time.
    pub t_alap: Ratio<u64>,
    pub t_roof: Ratio<u64>,
    /// `T_seq / t_alap`.
    pub speedup: Ratio<u64>,
    /// `speedup / p`.
    pub efficiency: Ratio<u64>,
}

fn check_p(p: u64) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameter("processor count must be positive"));
    }
    Ok(())
}

/// Idle area of `p` processors after the last instant at which the ALAP
/// profile needs more than `p` processors (time 0 if it never does).
pub fn lost_area(profile: &AlapProfile, p: u64) -> Result<u64> {
    check_p(p)?;
    let tau = profile
        .segments()
        .filter(|s| s.2 > p)
        .map(|s| s.1)
        .max()
        .unwrap_or(0);
    Ok(profile
        .segments()
        .filter(|s| s.0 >= tau)
        .map(|(a, b, active)| (b - a) * (p - active))
        .sum())
}

/// Bounds of the graph behind `profile` on `p` processors.
pub fn bounds_row(profile: &AlapProfile, p: u64) -> Result<BoundsRow> {
    let la = lost_area(profile, p)?;
    let cp = Ratio::from_integer(profile.cp_length);
    let t_seq = profile.total_work;
    let t_alap = cp.max(Ratio::new(t_seq + la, p));
    let t_roof = cp.max(Ratio::new(t_seq, p));
    let (speedup, efficiency) = if t_alap == Ratio::from_integer(0) {
        (Ratio::from_integer(0), Ratio::from_integer(0))
    } else {
        let s = Ratio::from_integer(t_seq) / t_alap;
        (s, s / p)
    };
    Ok(BoundsRow {
        p,
        lost_area: la,
        t_alap,
        t_roof,
        speedup,
        efficiency,
    })
}

/// Rows for `p = 1..=max_p`.
pub fn bounds_table(profile: &AlapProfile, max_p: u64) -> Result<Vec<BoundsRow>> {
    (1..=max_p).map(|p| bounds_row(profile, p)).collect()
}

/// `max(cp, (T_seq + LA_p) / p)`.
pub fn alap_bound(graph: &TaskGraph, model: &WeightModel, p: u64) -> Result<Ratio<u64>> {
    Ok(bounds_row(&alap_profile(graph, model), p)?.t_alap)
}

/// `max(cp, T_seq / p)`.
pub fn rooftop_bound(graph: &TaskGraph, model: &WeightModel, p: u64) -> Result<Ratio<u64>> {
    Ok(bounds_row(&alap_profile(graph, model), p)?.t_roof)
}

/// Lower bound on the optimal makespan implied by a list schedule of length
/// `makespan`: `makespan / (2 - 1/p)`.
pub fn lower_bound_factor(makespan: u64, p: u64) -> Result<Ratio<u64>> {
    check_p(p)?;
    Ok(Ratio::new(makespan * p, 2 * p - 1))
}

/// Performance ceiling `gamma_seq * T / max(T / procs, cp)` of a run whose
/// sequential rate is `gamma_seq`.
pub fn gamma_ub(gamma_seq: f64, t_seq: f64, cp: f64, procs: u64) -> Result<f64> {
    check_p(procs)?;
    if !(t_seq > 0.0 && cp >= 0.0 && gamma_seq >= 0.0) {
        return Err(Error::InvalidParameter(
            "times must be positive and rates nonnegative",
        ));
    }
    Ok(gamma_seq * t_seq / (t_seq / procs as f64).max(cp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn singleton() -> AlapProfile {
        AlapProfile {
            breakpoints: vec![(0, 1), (4, 0)],
            cp_length: 4,
            total_work: 4,
        }
    }

    #[test]
    fn concurrency_never_reached() {
        let prof = singleton();
        assert_eq!(lost_area(&prof, 3), Ok(8));
        assert_eq!(bounds_row(&prof, 3).unwrap().t_alap, Ratio::from_integer(4));
        assert_eq!(lost_area(&prof, 1), Ok(0));
    }

    #[test]
    fn lost_area_counts_only_the_tail() {
        // 3 tasks on [0,2), 1 on [2,5): for p = 2 only [2,5) is lost.
        let prof = AlapProfile {
            breakpoints: vec![(0, 3), (2, 1), (5, 0)],
            cp_length: 5,
            total_work: 9,
        };
        assert_eq!(lost_area(&prof, 2), Ok(3));
        assert_eq!(lost_area(&prof, 4), Ok(2 + 9));
    }

    #[test]
    fn factor_and_ceiling() {
        assert_eq!(lower_bound_factor(9, 1), Ok(Ratio::from_integer(9)));
        assert_eq!(lower_bound_factor(30, 2), Ok(Ratio::from_integer(20)));
        assert_eq!(gamma_ub(2.0, 100.0, 10.0, 4), Ok(8.0));
        assert_eq!(gamma_ub(2.0, 100.0, 50.0, 4), Ok(4.0));
        assert!(lost_area(&singleton(), 0).is_err());
    }
}
