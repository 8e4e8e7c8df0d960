use alloc::vec;
use alloc::vec::Vec;

use super::timing::{KernelSink, TimeSink, TraceSink};
use super::{
    check_dims, validate, CoarseTable, Elim, EliminationList, KernelFamily, MATRIX_A, MATRIX_V,
    MATRIX_W,
};
use crate::error::{Error, Result};
use crate::graph::{Task, TaskGraph, TileRef};
use crate::kernel::{KernelKind, WeightModel};

fn tile(m: u32, r: usize, c: usize) -> TileRef {
    TileRef::new(m, r as u32, c as u32)
}

/// Translates eliminations into kernels for any sink, tracking which rows
/// are triangular and when tiles get zeroed.
pub(crate) struct Emitter<'a, S: KernelSink> {
    pub sink: &'a mut S,
    p: usize,
    q: usize,
    family: KernelFamily,
    triangular: Vec<bool>,
    pub geqrt_finish: Vec<u64>,
    pub zeroed: Vec<u64>,
    pub update_min: Vec<u64>,
    pub update_max: Vec<u64>,
}

impl<'a, S: KernelSink> Emitter<'a, S> {
    pub fn new(sink: &'a mut S, p: usize, q: usize, family: KernelFamily) -> Self {
        let n = (p + 1) * (q + 1);
        Emitter {
            sink,
            p,
            q,
            family,
            triangular: vec![false; n],
            geqrt_finish: vec![0; n],
            zeroed: vec![0; n],
            update_min: vec![u64::MAX; n],
            update_max: vec![0; n],
        }
    }

    pub fn at(&self, r: usize, k: usize) -> usize {
        r * (self.q + 1) + k
    }

    pub fn is_triangular(&self, r: usize, k: usize) -> bool {
        self.triangular[self.at(r, k)]
    }

    /// Emits GEQRT(r,k) and its UNMQRs unless row `r` is already triangular
    /// in column `k`. Returns the GEQRT finish time.
    pub fn ensure_geqrt(&mut self, r: usize, k: usize) -> u64 {
        let slot = self.at(r, k);
        if self.triangular[slot] {
            return self.geqrt_finish[slot];
        }
        self.triangular[slot] = true;
        let (ru, ku) = (r as u32, k as u32);
        let f = self.sink.emit(
            KernelKind::Geqrt,
            &[ru, ku],
            &[tile(MATRIX_A, r, k)],
            &[tile(MATRIX_A, r, k), tile(MATRIX_V, r, k)],
        );
        self.geqrt_finish[slot] = f.unwrap_or(0);
        for j in k + 1..=self.q {
            self.sink.emit(
                KernelKind::Unmqr,
                &[ru, ku, j as u32],
                &[tile(MATRIX_V, r, k), tile(MATRIX_A, r, j)],
                &[tile(MATRIX_A, r, j)],
            );
        }
        self.geqrt_finish[slot]
    }

    /// Emits the kernels of one elimination. Returns the finish time of the
    /// zeroing kernel.
    pub fn elim(&mut self, e: Elim) -> u64 {
        let Elim { i, piv, k } = e;
        self.ensure_geqrt(piv, k);
        let tt = match self.family {
            KernelFamily::TT => {
                self.ensure_geqrt(i, k);
                true
            }
            KernelFamily::TS => self.is_triangular(i, k),
        };
        let (zero, update) = if tt {
            (KernelKind::Ttqrt, KernelKind::Ttmqr)
        } else {
            (KernelKind::Tsqrt, KernelKind::Tsmqr)
        };
        let (iu, pu, ku) = (i as u32, piv as u32, k as u32);
        let both = [tile(MATRIX_A, piv, k), tile(MATRIX_A, i, k)];
        let f = self
            .sink
            .emit(
                zero,
                &[iu, pu, ku],
                &both,
                &[both[0], both[1], tile(MATRIX_W, i, k)],
            )
            .unwrap_or(0);
        let slot = self.at(i, k);
        self.zeroed[slot] = f;
        for j in k + 1..=self.q {
            let rows = [tile(MATRIX_A, piv, j), tile(MATRIX_A, i, j)];
            let u = self
                .sink
                .emit(
                    update,
                    &[iu, pu, ku, j as u32],
                    &[tile(MATRIX_W, i, k), rows[0], rows[1]],
                    &rows,
                )
                .unwrap_or(0);
            self.update_min[slot] = self.update_min[slot].min(u);
            self.update_max[slot] = self.update_max[slot].max(u);
        }
        f
    }

    /// Triangularizes the diagonal tiles no elimination touched.
    pub fn finish(&mut self) {
        for k in 1..=self.q.min(self.p) {
            self.ensure_geqrt(k, k);
        }
    }
}

fn check_list(list: &EliminationList) -> Result<()> {
    check_dims(list.p, list.q)?;
    validate(list)?;
    if let Some(n) = list.entries.iter().position(|e| e.i < e.piv) {
        return Err(Error::InvalidElimination {
            index: n,
            reason: "row above its pivot; normalize the list first",
        });
    }
    Ok(())
}

/// Kernel trace of an elimination list under the given family.
pub fn tiled_graph(list: &EliminationList, family: KernelFamily) -> Result<Vec<Task>> {
    check_list(list)?;
    let mut sink = TraceSink::default();
    let mut em = Emitter::new(&mut sink, list.p, list.q, family);
    for &e in &list.entries {
        em.elim(e);
    }
    em.finish();
    Ok(sink.tasks)
}

/// Unbounded-processor completion times of a tiled QR graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiledTimes {
    pub p: usize,
    pub q: usize,
    /// Critical path length.
    pub cp: u64,
    /// Sum of kernel weights.
    pub total_weight: u64,
    zeroed: Vec<u64>,
    update_min: Vec<u64>,
    update_max: Vec<u64>,
}

impl TiledTimes {
    pub(crate) fn from_emitter<S: KernelSink>(
        em: &Emitter<'_, S>,
        cp: u64,
        total_weight: u64,
    ) -> TiledTimes {
        TiledTimes {
            p: em.p,
            q: em.q,
            cp,
            total_weight,
            zeroed: em.zeroed.clone(),
            update_min: em.update_min.clone(),
            update_max: em.update_max.clone(),
        }
    }

    fn slot(&self, i: usize, k: usize) -> Option<usize> {
        (i >= 1 && i <= self.p && k >= 1 && k <= self.q).then(|| i * (self.q + 1) + k)
    }

    /// Finish time of the kernel that zeroed tile `(i, k)`.
    pub fn zeroed(&self, i: usize, k: usize) -> Option<u64> {
        self.slot(i, k).map(|s| self.zeroed[s]).filter(|&t| t > 0)
    }

    /// Earliest and latest finish among the updates applied by the
    /// elimination of `(i, k)`; `None` in the last column.
    pub fn update_range(&self, i: usize, k: usize) -> Option<(u64, u64)> {
        let s = self.slot(i, k)?;
        (self.update_max[s] > 0).then(|| (self.update_min[s], self.update_max[s]))
    }
}

/// Completion times of the tiled graph under the QR kernel weights.
pub fn tiled_times(list: &EliminationList, family: KernelFamily) -> Result<TiledTimes> {
    tiled_times_with(list, family, &WeightModel::QrFull)
}

/// Completion times under an arbitrary weight model.
pub fn tiled_times_with(
    list: &EliminationList,
    family: KernelFamily,
    model: &WeightModel,
) -> Result<TiledTimes> {
    check_list(list)?;
    let mut sink = TimeSink::new(3, list.p, list.q, model.clone());
    let mut em = Emitter::new(&mut sink, list.p, list.q, family);
    for &e in &list.entries {
        em.elim(e);
    }
    em.finish();
    let (cp, work) = (em.sink.makespan(), em.sink.total_work());
    Ok(TiledTimes::from_emitter(&em, cp, work))
}

/// Total kernel weight of any tiled QR of `p x q` tiles: `6 p q^2 - 2 q^3`.
pub fn total_weight(p: usize, q: usize) -> Result<u64> {
    check_dims(p, q)?;
    let (p, q) = (p as u64, q as u64);
    Ok(6 * p * q * q - 2 * q * q * q)
}

/// Whether the QR-weighted sum of `graph` equals [`total_weight`].
pub fn verify_weight(graph: &TaskGraph, p: usize, q: usize) -> Result<bool> {
    Ok(graph.total_weight(&WeightModel::QrFull) == total_weight(p, q)?)
}

/// Completion time of the updates of elimination `(i, k)` predicted from the
/// coarse step: `10 k + 6 coarse(i, k)`, where `coarse` holds the
/// coarse-grain execution steps of the same list (see [`super::coarse_times`]).
/// Not defined for the last column.
pub fn tiled_translation(i: usize, k: usize, coarse: &CoarseTable) -> Result<u64> {
    if k == 0 || k >= coarse.q {
        return Err(Error::InvalidParameter(
            "translation holds for columns 1..q-1 only",
        ));
    }
    let step = coarse
        .get(i, k)
        .ok_or(Error::InvalidParameter("tile is not below the diagonal"))?;
    Ok(10 * k as u64 + 6 * u64::from(step))
}

/// Critical path of the flat tree with TT kernels.
pub fn flattree_cp_oracle(p: usize, q: usize) -> Result<u64> {
    check_dims(p, q)?;
    let (p, q) = (p as u64, q as u64);
    Ok(if q == 1 {
        2 * p + 2
    } else if p == q {
        22 * p - 24
    } else {
        6 * p + 16 * q - 22
    })
}

/// Open interval bracketing the Fibonacci TT critical path:
/// `(22 q - 30, 22 q + 6 ceil(sqrt(2 p)))`.
pub fn fibonacci_cp_bounds(p: usize, q: usize) -> Result<(i64, i64)> {
    check_dims(p, q)?;
    let mut root = 0i64;
    while root * root < 2 * p as i64 {
        root += 1;
    }
    let q = q as i64;
    Ok((22 * q - 30, 22 * q + 6 * root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::{coarse_schedule, CoarseAlgo};

    #[test]
    fn single_tile_is_one_geqrt() {
        let list = EliminationList {
            p: 1,
            q: 1,
            entries: Vec::new(),
        };
        let tasks = tiled_graph(&list, KernelFamily::TT).unwrap();
        assert_eq!(tasks.len(), 1);
        assert_eq!(tasks[0].kind, KernelKind::Geqrt);
        assert_eq!(tiled_times(&list, KernelFamily::TT).unwrap().cp, 4);
    }

    #[test]
    fn pair_of_rows() {
        let list = EliminationList {
            p: 2,
            q: 1,
            entries: vec![Elim::new(2, 1, 1)],
        };
        let t = tiled_times(&list, KernelFamily::TT).unwrap();
        assert_eq!((t.cp, t.zeroed(2, 1)), (6, Some(6)));
        let ts = tiled_times(&list, KernelFamily::TS).unwrap();
        assert_eq!(ts.cp, 10);
    }

    #[test]
    fn unnormalized_lists_are_rejected() {
        let list = EliminationList {
            p: 2,
            q: 1,
            entries: vec![Elim::new(1, 2, 1)],
        };
        assert!(tiled_graph(&list, KernelFamily::TT).is_err());
    }

    #[test]
    fn translation_needs_inner_column() {
        let (t, _) = coarse_schedule(4, 3, CoarseAlgo::SamehKuck).unwrap();
        assert_eq!(tiled_translation(2, 1, &t), Ok(16));
        assert!(tiled_translation(4, 3, &t).is_err());
    }

    #[test]
    fn oracles() {
        assert_eq!(flattree_cp_oracle(15, 6), Ok(164));
        assert_eq!(flattree_cp_oracle(40, 1), Ok(82));
        assert_eq!(flattree_cp_oracle(4, 4), Ok(64));
        assert_eq!(total_weight(5, 5), Ok(500));
        assert_eq!(total_weight(1, 1), Ok(4));
        assert_eq!(fibonacci_cp_bounds(40, 2), Ok((14, 98)));
    }
}
