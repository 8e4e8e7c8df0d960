use alloc::vec::Vec;

use super::{
    asap_list, check_dims, coarse_schedule, eliminated_columns, grasap_list, CoarseAlgo, Elim,
    EliminationList,
};
use crate::error::{Error, Result};

/// Tiled QR algorithms, static and dynamic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiledAlgo {
    FlatTree,
    Fibonacci,
    Greedy,
    BinaryTree,
    /// Flat trees inside domains of the given size, merged by a binary tree.
    PlasmaTree(usize),
    Asap,
    /// Greedy on the leading columns, Asap on the given number of trailing
    /// columns.
    GrASAP(usize),
}

impl TiledAlgo {
    /// The elimination list the algorithm executes on `p x q` tiles.
    pub fn elimination_list(self, p: usize, q: usize) -> Result<EliminationList> {
        Ok(match self {
            TiledAlgo::FlatTree => coarse_schedule(p, q, CoarseAlgo::SamehKuck)?.1,
            TiledAlgo::Fibonacci => coarse_schedule(p, q, CoarseAlgo::Fibonacci)?.1,
            TiledAlgo::Greedy => coarse_schedule(p, q, CoarseAlgo::Greedy)?.1,
            TiledAlgo::BinaryTree => binary_tree_list(p, q)?,
            TiledAlgo::PlasmaTree(bs) => plasmatree_list(p, q, bs)?,
            TiledAlgo::Asap => asap_list(p, q)?,
            TiledAlgo::GrASAP(i) => grasap_list(p, q, i)?,
        })
    }
}

/// Binary reduction in every column: `PlasmaTree` with domains of one row.
pub fn binary_tree_list(p: usize, q: usize) -> Result<EliminationList> {
    plasmatree_list(p, q, 1)
}

/// Domains of `bs` consecutive rows starting at the diagonal; each domain
/// head zeroes its domain, then the heads are merged by a binary tree.
pub fn plasmatree_list(p: usize, q: usize, bs: usize) -> Result<EliminationList> {
    check_dims(p, q)?;
    if bs == 0 || bs > p {
        return Err(Error::InvalidParameter("domain size must lie in 1..=p"));
    }
    let mut entries = Vec::new();
    for k in 1..=eliminated_columns(p, q) {
        let heads: Vec<usize> = (k..=p).step_by(bs).collect();
        for &h in &heads {
            for r in h + 1..=(h + bs - 1).min(p) {
                entries.push(Elim::new(r, h, k));
            }
        }
        let mut half = 1;
        while half < heads.len() {
            for idx in (half..heads.len()).step_by(2 * half) {
                entries.push(Elim::new(heads[idx], heads[idx - half], k));
            }
            half *= 2;
        }
    }
    Ok(EliminationList { p, q, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::validate;

    #[test]
    fn extreme_domain_sizes() {
        let flat = TiledAlgo::FlatTree.elimination_list(9, 4).unwrap();
        assert_eq!(plasmatree_list(9, 4, 9).unwrap(), flat);
        let bin = binary_tree_list(5, 1).unwrap();
        assert_eq!(
            bin.entries,
            vec![
                Elim::new(2, 1, 1),
                Elim::new(4, 3, 1),
                Elim::new(3, 1, 1),
                Elim::new(5, 1, 1)
            ]
        );
        assert!(plasmatree_list(5, 2, 0).is_err());
        assert!(plasmatree_list(5, 2, 6).is_err());
    }

    #[test]
    fn lists_are_valid() {
        for bs in 1..=7 {
            assert_eq!(validate(&plasmatree_list(7, 5, bs).unwrap()), Ok(()));
        }
    }
}
