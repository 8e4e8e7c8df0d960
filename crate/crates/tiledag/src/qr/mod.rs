//! Tiled QR factorization: elimination lists, coarse-grain schedules, tiled
//! TT/TS task graphs, dynamic trees and the column iterate calculus.
//!
//! Rows and columns are 1-based throughout this module, so tile `(i, k)` is
//! row `i`, column `k` of a `p x q` tile matrix with `p >= q`.

mod asap;
mod coarse;
mod elim;
mod iterate;
mod tiled;
mod timing;
mod trees;

pub use asap::{asap_list, grasap_list};
pub use coarse::{coarse_cp_oracle, coarse_schedule, fibonacci_x, CoarseAlgo, CoarseTable};
pub use elim::{coarse_times, normalize, validate};
pub use iterate::{is_iterate, iterate_step, ColumnIter};
pub use tiled::{
    fibonacci_cp_bounds, flattree_cp_oracle, tiled_graph, tiled_times, tiled_times_with,
    tiled_translation, total_weight, verify_weight, TiledTimes,
};
pub use timing::{KernelSink, TimeSink, TraceSink};
pub use trees::{binary_tree_list, plasmatree_list, TiledAlgo};

use alloc::vec::Vec;

/// Matrix id of the operand tiles.
pub const MATRIX_A: u32 = 0;
/// Matrix id of the reflectors produced by GEQRT.
pub const MATRIX_V: u32 = 1;
/// Matrix id of the reflectors produced by TTQRT/TSQRT.
pub const MATRIX_W: u32 = 2;

/// `elim(i, piv, k)`: zero tile `(i, k)` using row `piv` as pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elim {
    pub i: usize,
    pub piv: usize,
    pub k: usize,
}

impl Elim {
    pub const fn new(i: usize, piv: usize, k: usize) -> Elim {
        Elim { i, piv, k }
    }
}

/// Ordered eliminations for a `p x q` tile matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationList {
    pub p: usize,
    pub q: usize,
    pub entries: Vec<Elim>,
}

impl EliminationList {
    /// Number of columns holding sub-diagonal tiles.
    pub fn columns(&self) -> usize {
        eliminated_columns(self.p, self.q)
    }

    /// Entries of column `k`, in list order.
    pub fn column(&self, k: usize) -> impl Iterator<Item = &Elim> + '_ {
        self.entries.iter().filter(move |e| e.k == k)
    }
}

/// Kernel family used to build the tiled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    /// Triangle on top of triangle: every row is triangularized first.
    TT,
    /// Triangle on top of square; falls back to TT kernels when the
    /// eliminated row is already triangular.
    TS,
}

pub(crate) fn eliminated_columns(p: usize, q: usize) -> usize {
    q.min(p.saturating_sub(1))
}

pub(crate) fn check_dims(p: usize, q: usize) -> crate::Result<()> {
    if q == 0 {
        return Err(crate::Error::InvalidParameter("q must be at least 1"));
    }
    if p < q {
        return Err(crate::Error::InvalidParameter("p must be at least q"));
    }
    Ok(())
}
