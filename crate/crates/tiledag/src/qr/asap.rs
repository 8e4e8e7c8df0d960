use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::tiled::Emitter;
use super::timing::TimeSink;
use super::{
    check_dims, coarse_schedule, eliminated_columns, CoarseAlgo, Elim, EliminationList,
    KernelFamily,
};
use crate::error::{Error, Result};
use crate::kernel::WeightModel;

/// Asap: every column starts zeroing as soon as two of its rows are idle.
pub fn asap_list(p: usize, q: usize) -> Result<EliminationList> {
    check_dims(p, q)?;
    grasap_list(p, q, q)
}

/// Greedy elimination on columns `1..=q-trailing`, Asap on the rest.
pub fn grasap_list(p: usize, q: usize, trailing: usize) -> Result<EliminationList> {
    check_dims(p, q)?;
    if trailing == 0 || trailing > q {
        return Err(Error::InvalidParameter(
            "trailing Asap columns must lie in 1..=q",
        ));
    }
    let cols = eliminated_columns(p, q);
    let first = q - trailing + 1;
    let greedy = coarse_schedule(p, q, CoarseAlgo::Greedy)?.1;
    let mut entries: Vec<Elim> = greedy
        .entries
        .iter()
        .copied()
        .filter(|e| e.k < first)
        .collect();
    if first > cols {
        return Ok(EliminationList { p, q, entries });
    }

    let mut sink = TimeSink::new(3, p, q, WeightModel::QrFull);
    let mut em = Emitter::new(&mut sink, p, q, KernelFamily::TT);
    for &e in &entries {
        em.elim(e);
    }
    let mut events = BTreeSet::new();
    for r in first..=p {
        events.insert(em.ensure_geqrt(r, first));
    }

    let at = |r: usize, k: usize| r * (q + 1) + k;
    let mut free = vec![0u64; (p + 1) * (q + 1)];
    let mut zeroed = vec![false; (p + 1) * (q + 1)];
    let mut remaining: usize = (first..=cols).map(|k| p - k).sum();
    let mut idle = Vec::with_capacity(p);
    while remaining > 0 {
        let now = events
            .pop_first()
            .expect("pending events while tiles remain");
        for k in first..=cols {
            idle.clear();
            idle.extend((k..=p).filter(|&r| {
                let s = at(r, k);
                em.is_triangular(r, k) && em.geqrt_finish[s] <= now && !zeroed[s] && free[s] <= now
            }));
            let n = idle.len();
            let s = n / 2;
            for j in 0..s {
                let (piv, i) = (idle[n - 2 * s + j], idle[n - s + j]);
                let e = Elim::new(i, piv, k);
                let done = em.elim(e);
                debug_assert_eq!(
                    done,
                    now + WeightModel::QrFull.weight(crate::KernelKind::Ttqrt)
                );
                entries.push(e);
                zeroed[at(i, k)] = true;
                free[at(i, k)] = done;
                free[at(piv, k)] = done;
                events.insert(done);
                remaining -= 1;
                if k < q {
                    let g = em.ensure_geqrt(i, k + 1);
                    if k < cols {
                        events.insert(g);
                    }
                }
            }
        }
    }
    Ok(EliminationList { p, q, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::{tiled_times, validate};

    #[test]
    fn asap_lists_are_valid() {
        for p in 1..=9 {
            for q in 1..=p {
                let l = asap_list(p, q).unwrap();
                assert_eq!(validate(&l), Ok(()), "{p}x{q}");
                assert!(l.entries.iter().all(|e| e.i > e.piv));
            }
        }
    }

    #[test]
    fn square_grasap_equals_greedy() {
        let g = coarse_schedule(5, 5, CoarseAlgo::Greedy).unwrap().1;
        let a = grasap_list(5, 5, 1).unwrap();
        assert_eq!(
            tiled_times(&g, KernelFamily::TT).unwrap().cp,
            tiled_times(&a, KernelFamily::TT).unwrap().cp
        );
    }

    #[test]
    fn trailing_range_checked() {
        assert!(grasap_list(5, 3, 0).is_err());
        assert!(grasap_list(5, 3, 4).is_err());
    }
}
