//! Kernel kinds and the weight models that give them durations.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// The kernel executed by a task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KernelKind {
    Potrf,
    Trsm,
    Syrk,
    Gemm,
    Trtri,
    Trmm,
    Lauum,
    Geqrt,
    Tsqrt,
    Ttqrt,
    Unmqr,
    Tsmqr,
    Ttmqr,
    Geadd,
    Copy,
    Barrier,
}

impl KernelKind {
    pub const ALL: [KernelKind; 16] = [
        KernelKind::Potrf,
        KernelKind::Trsm,
        KernelKind::Syrk,
        KernelKind::Gemm,
        KernelKind::Trtri,
        KernelKind::Trmm,
        KernelKind::Lauum,
        KernelKind::Geqrt,
        KernelKind::Tsqrt,
        KernelKind::Ttqrt,
        KernelKind::Unmqr,
        KernelKind::Tsmqr,
        KernelKind::Ttmqr,
        KernelKind::Geadd,
        KernelKind::Copy,
        KernelKind::Barrier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Potrf => "POTRF",
            KernelKind::Trsm => "TRSM",
            KernelKind::Syrk => "SYRK",
            KernelKind::Gemm => "GEMM",
            KernelKind::Trtri => "TRTRI",
            KernelKind::Trmm => "TRMM",
            KernelKind::Lauum => "LAUUM",
            KernelKind::Geqrt => "GEQRT",
            KernelKind::Tsqrt => "TSQRT",
            KernelKind::Ttqrt => "TTQRT",
            KernelKind::Unmqr => "UNMQR",
            KernelKind::Tsmqr => "TSMQR",
            KernelKind::Ttmqr => "TTMQR",
            KernelKind::Geadd => "GEADD",
            KernelKind::Copy => "COPY",
            KernelKind::Barrier => "BARRIER",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown kernel kind"))
    }
}

/// Maps kernel kinds to integer durations.
///
/// For the Cholesky and QR models one unit is `n_b^3 / 3` flops. BARRIER and
/// COPY cost nothing in every predefined model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightModel {
    /// Every kernel costs 1 (COPY and BARRIER cost 0).
    Unit,
    /// POTRF 1, TRSM 3, SYRK 3, GEMM 6; the inversion kernels follow their
    /// flop counts (TRTRI 1, TRMM 3, LAUUM 1).
    Cholesky,
    /// QR kernels restricted to the TT family usage; same durations as `QrFull`.
    QrTT,
    /// GEQRT 4, UNMQR 6, TSQRT 6, TSMQR 12, TTQRT 2, TTMQR 6.
    QrFull,
    /// Explicit duration per kind, indexed in `KernelKind::ALL` order.
    Custom([u64; 16]),
}

impl WeightModel {
    /// Builds a custom model from `(kind, weight)` pairs; unlisted kinds cost 0.
    pub fn custom(pairs: &[(KernelKind, u64)]) -> WeightModel {
        let mut table = [0u64; 16];
        for &(k, w) in pairs {
            table[k.index()] = w;
        }
        table[KernelKind::Barrier.index()] = 0;
        WeightModel::Custom(table)
    }

    pub fn weight(&self, kind: KernelKind) -> u64 {
        use KernelKind::*;
        if kind == Barrier {
            return 0;
        }
        match self {
            WeightModel::Unit => match kind {
                Copy => 0,
                _ => 1,
            },
            WeightModel::Custom(table) => table[kind.index()],
            WeightModel::Cholesky | WeightModel::QrTT | WeightModel::QrFull => match kind {
                Potrf | Trtri | Lauum => 1,
                Trsm | Syrk | Trmm => 3,
                Gemm => 6,
                Geqrt => 4,
                Unmqr | Tsqrt | Ttmqr => 6,
                Tsmqr => 12,
                Ttqrt => 2,
                Geadd | Copy | Barrier => 0,
            },
        }
    }
}
