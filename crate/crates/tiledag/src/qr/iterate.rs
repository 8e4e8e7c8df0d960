use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Availability times of the rows of one column, nondecreasing, with the
/// weight `w` of the zeroing kernel applied when iterating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnIter {
    pub values: Vec<u64>,
    pub w: u64,
}

impl ColumnIter {
    pub fn new(values: Vec<u64>, w: u64) -> Result<ColumnIter> {
        let c = ColumnIter { values, w };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        if self.values.windows(2).any(|v| v[1] < v[0]) {
            return Err(Error::MalformedColumn("values must be nondecreasing"));
        }
        Ok(())
    }

    /// `(value, multiplicity)` pairs in increasing value order.
    pub fn runs(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((last, n)) if *last == v => *n += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    fn available_by(&self, t: u64) -> usize {
        self.values.partition_point(|&v| v <= t)
    }
}

/// The smallest iterate of `a`: rows are paired bottom to top in batches.
///
/// At each decision time every available row that is not yet zeroed takes
/// part; half of them (rounded down) are zeroed and finish `w` later, which
/// is the next decision time. With fewer than two rows available the column
/// waits for the next arrival.
pub fn iterate_step(a: &ColumnIter) -> Result<ColumnIter> {
    a.check()?;
    let n = a.values.len();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return Err(Error::MalformedColumn("column is empty"));
    }
    let mut zeroed = 0usize;
    let mut now = a.values[0];
    while zeroed + 1 < n {
        let avail = a.available_by(now) - zeroed;
        if avail >= 2 {
            let m = avail / 2;
            let done = now + a.w;
            out.extend(core::iter::repeat_n(done, m));
            zeroed += m;
            now = done;
        } else {
            // The next arrival after `now`; one more row makes a pair.
            now = a.values[a.available_by(now)];
        }
    }
    Ok(ColumnIter {
        values: out,
        w: a.w,
    })
}

/// Whether `c` (sorted) is an iterate of `a`: one entry fewer, nothing
/// before `a_1 + w`, and no step zeroes more rows than half of those
/// available `w` earlier and not yet zeroed.
pub fn is_iterate(a: &ColumnIter, c: &ColumnIter) -> Result<bool> {
    a.check()?;
    c.check()?;
    if a.values.is_empty() || c.values.len() + 1 != a.values.len() {
        return Ok(false);
    }
    if let Some(&c1) = c.values.first() {
        if c1 < a.values[0] + a.w {
            return Ok(false);
        }
    }
    let mut before = 0usize;
    for (value, m) in c.runs() {
        let avail = a.available_by(value - a.w) - before;
        if m > avail / 2 {
            return Ok(false);
        }
        before += m;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn col(runs: &[(u64, usize)], w: u64) -> ColumnIter {
        ColumnIter::new(
            runs.iter()
                .flat_map(|&(v, n)| core::iter::repeat_n(v, n))
                .collect(),
            w,
        )
        .unwrap()
    }

    #[test]
    fn non_integer_weight_schemes() {
        let a = col(&[(3, 7), (6, 4)], 2);
        let bottom_up = iterate_step(&a).unwrap();
        assert_eq!(bottom_up.values, vec![5, 5, 5, 7, 7, 9, 9, 9, 11, 13]);
        let lagged = col(&[(5, 3), (8, 4), (10, 2), (12, 1)], 2);
        let any_order = col(&[(5, 3), (7, 2), (8, 2), (9, 1), (12, 1), (14, 1)], 2);
        for c in [&bottom_up, &lagged, &any_order] {
            assert_eq!(is_iterate(&a, c), Ok(true));
        }
        assert!(lagged.values.last() < bottom_up.values.last());
    }

    #[test]
    fn unit_weight_reproduces_coarse_greedy() {
        let a = col(&[(1, 7), (2, 4), (3, 2), (4, 1)], 1);
        let b = iterate_step(&a).unwrap();
        assert_eq!(b.runs(), vec![(2, 3), (3, 4), (4, 3), (5, 2), (6, 1)]);
    }

    #[test]
    fn edge_cases() {
        assert_eq!(
            iterate_step(&col(&[(7, 1)], 2)).unwrap().values,
            Vec::<u64>::new()
        );
        assert!(ColumnIter::new(vec![3, 2], 1).is_err());
        let a = col(&[(0, 2)], 1);
        assert_eq!(is_iterate(&a, &col(&[(0, 1)], 1)), Ok(false));
    }
}
