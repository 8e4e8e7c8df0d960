//! Task graphs of tiled dense linear-algebra algorithms.
//!
//! The crate builds weighted task DAGs from sequential kernel traces (tiled
//! Cholesky factorization and inversion, tiled QR under several elimination
//! trees, tiled Strassen-Winograd), computes critical paths and ALAP profiles,
//! derives performance bounds, simulates list schedules on a bounded number of
//! processors, and emits an integer-programming model of tiled QR.
//!
//! Everything here is `no_std` and only needs `alloc`. File formats, the CLI
//! and any IO live in the companion `tiledag-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cholesky;
pub mod cp;
mod error;
pub mod graph;
pub mod ip;
pub mod kernel;
pub mod qr;
pub mod sched;
pub mod strassen;

pub use cp::{alap_profile, annotate_cp, AlapProfile, CpAnnotation};
pub use error::{Error, Result};
pub use graph::{build_from_trace, Edge, EdgeCause, Indices, Task, TaskGraph, TileRef};
pub use kernel::{KernelKind, WeightModel};
