use alloc::vec;

use super::{CoarseTable, Elim, EliminationList};
use crate::error::{Error, Result};

fn fail(index: usize, reason: &'static str) -> Error {
    Error::InvalidElimination { index, reason }
}

/// Checks that `list` is a valid elimination list.
///
/// Each entry must use two distinct in-range rows, neither already zeroed in
/// its column, and both zeroed in the previous column. Every column must end
/// with exactly one surviving row.
pub fn validate(list: &EliminationList) -> Result<()> {
    let (p, q) = (list.p, list.q);
    let cols = list.columns();
    let mut gone = vec![false; (p + 1) * (q + 1)];
    let at = |r: usize, k: usize| r * (q + 1) + k;
    let mut count = vec![0usize; q + 1];
    for (n, e) in list.entries.iter().enumerate() {
        if e.k == 0 || e.k > cols {
            return Err(fail(n, "column out of range"));
        }
        if e.i == 0 || e.i > p || e.piv == 0 || e.piv > p {
            return Err(fail(n, "row out of range"));
        }
        if e.i == e.piv {
            return Err(fail(n, "row used as its own pivot"));
        }
        if e.k > 1 && !gone[at(e.i, e.k - 1)] {
            return Err(fail(
                n,
                "eliminated row not yet zeroed in the previous column",
            ));
        }
        if e.k > 1 && !gone[at(e.piv, e.k - 1)] {
            return Err(fail(n, "pivot row not yet zeroed in the previous column"));
        }
        if gone[at(e.i, e.k)] {
            return Err(fail(n, "tile already zeroed"));
        }
        if gone[at(e.piv, e.k)] {
            return Err(fail(
                n,
                "pivot is not a potential annihilator (already zeroed)",
            ));
        }
        gone[at(e.i, e.k)] = true;
        count[e.k] += 1;
    }
    if (1..=cols).any(|k| count[k] != p - k) {
        return Err(fail(
            list.entries.len(),
            "incomplete: a sub-diagonal tile is never zeroed",
        ));
    }
    Ok(())
}

/// Relabels rows so that every entry satisfies `i > piv`.
///
/// Whenever an entry would zero a row above its pivot, the two rows swap
/// names for the rest of the list. The result performs the same
/// transformations on the same data and has the same execution time.
pub fn normalize(list: &EliminationList) -> EliminationList {
    let mut name: alloc::vec::Vec<usize> = (0..=list.p).collect();
    let entries = list
        .entries
        .iter()
        .map(|e| {
            if name[e.i] < name[e.piv] {
                name.swap(e.i, e.piv);
            }
            Elim::new(name[e.i], name[e.piv], e.k)
        })
        .collect();
    EliminationList {
        p: list.p,
        q: list.q,
        entries,
    }
}

/// Coarse-grain time steps of an elimination list: every elimination runs
/// one step after both rows finished their previous transformation in the
/// column and were zeroed in the previous column.
pub fn coarse_times(list: &EliminationList) -> Result<CoarseTable> {
    validate(list)?;
    let (p, q) = (list.p, list.q);
    let mut table = CoarseTable::empty(p, q);
    let mut last_use = vec![0u32; (p + 1) * (q + 1)];
    let at = |r: usize, k: usize| r * (q + 1) + k;
    for e in &list.entries {
        let zeroed_before = |r: usize| {
            if e.k > 1 {
                table.get(r, e.k - 1).unwrap_or(0)
            } else {
                0
            }
        };
        let step = last_use[at(e.i, e.k)]
            .max(last_use[at(e.piv, e.k)])
            .max(zeroed_before(e.i))
            .max(zeroed_before(e.piv))
            + 1;
        last_use[at(e.i, e.k)] = step;
        last_use[at(e.piv, e.k)] = step;
        table.set(e.i, e.k, step);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn list(p: usize, q: usize, e: &[(usize, usize, usize)]) -> EliminationList {
        EliminationList {
            p,
            q,
            entries: e.iter().map(|&(i, piv, k)| Elim::new(i, piv, k)).collect(),
        }
    }

    #[test]
    fn flat_tree_is_valid() {
        let l = list(3, 2, &[(2, 1, 1), (3, 1, 1), (3, 2, 2)]);
        assert_eq!(validate(&l), Ok(()));
        let t = coarse_times(&l).unwrap();
        assert_eq!(
            (t.get(2, 1), t.get(3, 1), t.get(3, 2)),
            (Some(1), Some(2), Some(3))
        );
    }

    #[test]
    fn violations_are_reported() {
        let reason = |l: &EliminationList| match validate(l) {
            Err(Error::InvalidElimination { reason, .. }) => reason,
            other => panic!("expected rejection, got {other:?}"),
        };
        assert!(reason(&list(3, 2, &[(2, 2, 1)])).contains("own pivot"));
        assert!(reason(&list(3, 2, &[(2, 1, 1), (3, 2, 1)])).contains("potential annihilator"));
        assert!(reason(&list(3, 2, &[(2, 1, 1), (3, 2, 2)])).contains("previous column"));
        assert!(reason(&list(3, 2, &[(2, 1, 1)])).contains("incomplete"));
        assert!(reason(&list(3, 2, &[(4, 1, 1)])).contains("row out of range"));
    }

    #[test]
    fn normalization_orders_rows() {
        // Row 1 is zeroed by row 2, then row 2 survives column 1.
        let l = list(3, 2, &[(1, 2, 1), (3, 2, 1), (3, 1, 2)]);
        assert_eq!(validate(&l), Ok(()));
        let n = normalize(&l);
        assert_eq!(validate(&n), Ok(()));
        assert!(n.entries.iter().all(|e| e.i > e.piv));
        let steps = |l: &EliminationList| {
            let t = coarse_times(l).unwrap();
            let mut v: Vec<u32> = l.entries.iter().map(|e| t.get(e.i, e.k).unwrap()).collect();
            v.sort();
            v
        };
        assert_eq!(steps(&l), steps(&n));
    }
}
