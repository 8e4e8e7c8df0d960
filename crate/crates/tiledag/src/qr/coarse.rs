use alloc::vec;
use alloc::vec::Vec;

use super::{check_dims, eliminated_columns, Elim, EliminationList};
use crate::error::Result;

/// Coarse-grain elimination algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarseAlgo {
    /// The panel row zeroes every tile of its column, top to bottom
    /// (also known as the flat tree).
    SamehKuck,
    Fibonacci,
    Greedy,
}

/// Time step at which each sub-diagonal tile is zeroed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseTable {
    pub p: usize,
    pub q: usize,
    steps: Vec<u32>,
}

impl CoarseTable {
    pub(crate) fn empty(p: usize, q: usize) -> CoarseTable {
        CoarseTable {
            p,
            q,
            steps: vec![0; p * q],
        }
    }

    pub(crate) fn set(&mut self, i: usize, k: usize, step: u32) {
        self.steps[(i - 1) * self.q + k - 1] = step;
    }

    /// Step of tile `(i, k)`; `None` on and above the diagonal.
    pub fn get(&self, i: usize, k: usize) -> Option<u32> {
        if i == 0 || k == 0 || i > self.p || k > self.q {
            return None;
        }
        match self.steps[(i - 1) * self.q + k - 1] {
            0 => None,
            s => Some(s),
        }
    }

    /// Rows of column `k` zeroed at step `s`, ascending.
    pub fn group(&self, s: u32, k: usize) -> Vec<usize> {
        (1..=self.p)
            .filter(|&i| self.get(i, k) == Some(s))
            .collect()
    }

    /// Number of coarse steps (the coarse critical path).
    pub fn cp(&self) -> u32 {
        self.steps.iter().copied().max().unwrap_or(0)
    }
}

/// Least `x` with `x (x + 1) / 2 >= p - 1`.
pub fn fibonacci_x(p: usize) -> usize {
    let need = p.saturating_sub(1);
    let mut x = 0;
    while x * (x + 1) / 2 < need {
        x += 1;
    }
    x
}

/// Builds the coarse-grain table and its elimination list. The list is
/// column-major and ordered by step, then row, within a column.
pub fn coarse_schedule(
    p: usize,
    q: usize,
    algo: CoarseAlgo,
) -> Result<(CoarseTable, EliminationList)> {
    check_dims(p, q)?;
    let cols = eliminated_columns(p, q);
    let mut table = CoarseTable::empty(p, q);
    let mut entries = Vec::new();
    match algo {
        CoarseAlgo::SamehKuck => {
            for k in 1..=cols {
                for i in k + 1..=p {
                    table.set(i, k, (i + k - 2) as u32);
                    entries.push(Elim::new(i, k, k));
                }
            }
        }
        CoarseAlgo::Fibonacci => {
            let x = fibonacci_x(p);
            for k in 1..=cols {
                for i in k + 1..=p {
                    // Column k repeats column 1 shifted down k - 1 rows, two steps later.
                    let i1 = i - (k - 1);
                    let mut y = 0;
                    while i1 > y * (y + 1) / 2 + 1 {
                        y += 1;
                    }
                    table.set(i, k, (x - y + 1 + 2 * (k - 1)) as u32);
                }
                pair_groups(&table, k, &mut entries);
            }
        }
        CoarseAlgo::Greedy => {
            // done[k]: tiles zeroed so far in column k. A row is ready in
            // column k once it was zeroed in column k - 1 at an earlier step.
            let mut done = vec![0usize; cols + 1];
            let mut step = 0u32;
            while (1..=cols).any(|k| done[k] < p - k) {
                step += 1;
                for (k, done_k) in done.iter_mut().enumerate().skip(1) {
                    let ready: Vec<usize> = (k..=p)
                        .filter(|&r| table.get(r, k).is_none())
                        .filter(|&r| k == 1 || table.get(r, k - 1).is_some_and(|s| s < step))
                        .collect();
                    let n = ready.len();
                    let z = n / 2;
                    for j in 0..z {
                        table.set(ready[n - z + j], k, step);
                    }
                    *done_k += z;
                }
            }
            for k in 1..=cols {
                pair_groups(&table, k, &mut entries);
            }
        }
    }
    Ok((table, EliminationList { p, q, entries }))
}

/// Pairs every group of `z` consecutive rows zeroed at the same step with
/// the `z` rows right above them.
fn pair_groups(table: &CoarseTable, k: usize, out: &mut Vec<Elim>) {
    let mut steps: Vec<u32> = (k + 1..=table.p).filter_map(|i| table.get(i, k)).collect();
    steps.sort_unstable();
    steps.dedup();
    for s in steps {
        let rows = table.group(s, k);
        let z = rows.len();
        for &i in &rows {
            out.push(Elim::new(i, i - z, k));
        }
    }
}

/// Closed-form coarse critical paths; `Greedy` has none and is computed.
pub fn coarse_cp_oracle(p: usize, q: usize, algo: CoarseAlgo) -> Result<u32> {
    check_dims(p, q)?;
    if p == 1 {
        return Ok(0);
    }
    let (p32, q32) = (p as u32, q as u32);
    Ok(match algo {
        CoarseAlgo::SamehKuck if p > q => p32 + q32 - 2,
        CoarseAlgo::SamehKuck => 2 * q32 - 3,
        CoarseAlgo::Fibonacci => {
            let x = fibonacci_x(p) as u32;
            if p > q {
                x + 2 * q32 - 2
            } else {
                x + 2 * q32 - 4
            }
        }
        CoarseAlgo::Greedy => coarse_schedule(p, q, algo)?.0.cp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_first_column_counts() {
        // p = 15: one 5, two 4s, three 3s, four 2s, four 1s.
        let (t, _) = coarse_schedule(15, 1, CoarseAlgo::Fibonacci).unwrap();
        let col: Vec<u32> = (2..=15).map(|i| t.get(i, 1).unwrap()).collect();
        assert_eq!(col, vec![5, 4, 4, 3, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1]);
        assert_eq!(fibonacci_x(15), 5);
        assert_eq!(fibonacci_x(16), 5);
        assert_eq!(fibonacci_x(17), 6);
    }

    #[test]
    fn greedy_pairs_bottom_rows() {
        let (t, l) = coarse_schedule(5, 1, CoarseAlgo::Greedy).unwrap();
        assert_eq!(t.group(1, 1), vec![4, 5]);
        assert_eq!(&l.entries[..2], &[Elim::new(4, 2, 1), Elim::new(5, 3, 1)]);
    }

    #[test]
    fn rejects_wide_matrices() {
        assert!(coarse_schedule(3, 4, CoarseAlgo::Greedy).is_err());
        assert!(coarse_cp_oracle(2, 0, CoarseAlgo::SamehKuck).is_err());
    }
}
