//! Tiled matrix multiplication and recursive tiled Strassen-Winograd.
//!
//! Matrices are square grids of tiles. Inputs are `A` (0) and `B` (1), the
//! result is `C` (2); every temporary gets a fresh matrix id.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Task, TileRef};
use crate::kernel::{KernelKind, WeightModel};

pub const MATRIX_A: u32 = 0;
pub const MATRIX_B: u32 = 1;
pub const MATRIX_C: u32 = 2;

/// Problem size, recursion depth and tile order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrassenParams {
    /// Tiles per side, a power of two.
    pub p: usize,
    /// Recursion levels before switching to the tiled product.
    pub r: u32,
    /// Tile order, for flop counts.
    pub n_b: u64,
}

impl StrassenParams {
    pub fn new(p: usize, r: u32, n_b: u64) -> Result<StrassenParams> {
        if p == 0 || !p.is_power_of_two() {
            return Err(Error::InvalidParameter("tile count must be a power of two"));
        }
        if r > p.trailing_zeros() {
            return Err(Error::InvalidParameter("recursion deeper than log2(p)"));
        }
        if n_b == 0 {
            return Err(Error::InvalidParameter("tile order must be positive"));
        }
        Ok(StrassenParams { p, r, n_b })
    }

    /// Flops of one tile multiply-accumulate: `2 n_b^3 - n_b^2`.
    pub fn m(&self) -> u128 {
        let n = u128::from(self.n_b);
        2 * n * n * n - n * n
    }

    /// Flops of one tile addition: `n_b^2`.
    pub fn a(&self) -> u128 {
        u128::from(self.n_b) * u128::from(self.n_b)
    }
}

/// Task weights proportional to flops with GEADD = 1, so GEMM = `2 n_b - 1`.
pub fn strassen_weights(n_b: u64) -> WeightModel {
    WeightModel::custom(&[
        (KernelKind::Gemm, 2 * n_b.max(1) - 1),
        (KernelKind::Geadd, 1),
    ])
}

#[derive(Debug, Clone, Copy)]
struct View {
    m: u32,
    r0: u32,
    c0: u32,
}

impl View {
    fn tile(self, i: usize, j: usize) -> TileRef {
        TileRef::new(self.m, self.r0 + i as u32, self.c0 + j as u32)
    }

    fn quad(self, h: usize, qi: usize, qj: usize) -> View {
        View {
            m: self.m,
            r0: self.r0 + (qi * h) as u32,
            c0: self.c0 + (qj * h) as u32,
        }
    }
}

/// A generated trace with the bookkeeping of its temporaries.
#[derive(Debug, Clone)]
pub struct StrassenTrace {
    pub tasks: Vec<Task>,
    /// Tiles allocated for temporaries over the whole recursion.
    pub temp_tiles: u64,
    /// Matrix ids of the seven products of every recursion step.
    pub products: Vec<u32>,
}

struct Gen {
    trace: StrassenTrace,
    next_matrix: u32,
}

impl Gen {
    fn new() -> Gen {
        Gen {
            trace: StrassenTrace {
                tasks: Vec::new(),
                temp_tiles: 0,
                products: Vec::new(),
            },
            next_matrix: 3,
        }
    }

    fn temp(&mut self, n: usize) -> View {
        let m = self.next_matrix;
        self.next_matrix += 1;
        self.trace.temp_tiles += (n * n) as u64;
        View { m, r0: 0, c0: 0 }
    }

    fn gemm(&mut self, n: usize, a: View, b: View, c: View) {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let id = self.trace.tasks.len();
                    let task = Task::new(id, KernelKind::Gemm, &[i as u32, j as u32, k as u32])
                        .reading(&[a.tile(i, k), b.tile(k, j)])
                        .updating(&[c.tile(i, j)]);
                    self.trace.tasks.push(task);
                }
            }
        }
    }

    fn geadd(&mut self, n: usize, x: View, y: View, z: View) {
        for i in 0..n {
            for j in 0..n {
                let id = self.trace.tasks.len();
                let task = Task::new(id, KernelKind::Geadd, &[i as u32, j as u32])
                    .reading(&[x.tile(i, j), y.tile(i, j)])
                    .writing(&[z.tile(i, j)]);
                self.trace.tasks.push(task);
            }
        }
    }

    fn gesw(&mut self, n: usize, levels: u32, a: View, b: View, c: View) {
        if levels == 0 {
            self.gemm(n, a, b, c);
            return;
        }
        let h = n / 2;
        let (a11, a12, a21, a22) = (
            a.quad(h, 0, 0),
            a.quad(h, 0, 1),
            a.quad(h, 1, 0),
            a.quad(h, 1, 1),
        );
        let (b11, b12, b21, b22) = (
            b.quad(h, 0, 0),
            b.quad(h, 0, 1),
            b.quad(h, 1, 0),
            b.quad(h, 1, 1),
        );
        let (c11, c12, c21, c22) = (
            c.quad(h, 0, 0),
            c.quad(h, 0, 1),
            c.quad(h, 1, 0),
            c.quad(h, 1, 1),
        );

        let t: Vec<View> = (0..8).map(|_| self.temp(h)).collect();
        self.geadd(h, a21, a22, t[0]);
        self.geadd(h, t[0], a11, t[1]);
        self.geadd(h, a11, a21, t[2]);
        self.geadd(h, a12, t[1], t[3]);
        self.geadd(h, b12, b11, t[4]);
        self.geadd(h, b22, t[4], t[5]);
        self.geadd(h, b22, b12, t[6]);
        self.geadd(h, t[5], b21, t[7]);

        let q: Vec<View> = (0..7).map(|_| self.temp(h)).collect();
        self.trace.products.extend(q.iter().map(|v| v.m));
        let operands = [
            (t[1], t[5]),
            (a11, b11),
            (a12, b21),
            (t[2], t[6]),
            (t[0], t[4]),
            (t[3], b22),
            (a22, t[7]),
        ];
        for (&(x, y), &dst) in operands.iter().zip(&q) {
            self.gesw(h, levels - 1, x, y, dst);
        }

        let u: Vec<View> = (0..3).map(|_| self.temp(h)).collect();
        self.geadd(h, q[0], q[1], u[0]);
        self.geadd(h, u[0], q[3], u[1]);
        self.geadd(h, q[4], q[5], u[2]);
        self.geadd(h, q[1], q[2], c11);
        self.geadd(h, u[0], u[2], c12);
        self.geadd(h, u[1], q[6], c21);
        self.geadd(h, u[1], q[4], c22);
    }
}

const A: View = View {
    m: MATRIX_A,
    r0: 0,
    c0: 0,
};
const B: View = View {
    m: MATRIX_B,
    r0: 0,
    c0: 0,
};
const C: View = View {
    m: MATRIX_C,
    r0: 0,
    c0: 0,
};

/// `C += A B` on `n x n` tiles, accumulating over `k` in ascending order.
pub fn gen_tiled_gemm(n: usize) -> Result<Vec<Task>> {
    if n == 0 {
        return Err(Error::InvalidParameter("tile count must be positive"));
    }
    let mut g = Gen::new();
    g.gemm(n, A, B, C);
    Ok(g.trace.tasks)
}

/// Strassen-Winograd with `params.r` recursion levels over the tiled product.
pub fn gen_strassen(params: &StrassenParams) -> Result<StrassenTrace> {
    let params = StrassenParams::new(params.p, params.r, params.n_b)?;
    let mut g = Gen::new();
    g.gesw(params.p, params.r, A, B, C);
    Ok(g.trace)
}

/// Closed-form counts of a Strassen-Winograd run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrassenCounts {
    pub tasks: u64,
    pub flops: u128,
    /// Depth minimizing the task count per the continuous approximation.
    pub r_min: u32,
    pub temp_tiles: u64,
}

/// `7^r (p/2^r)^3` products and `15 sum 7^(r-i-1) (p/2^(r-i))^2` additions.
pub fn strassen_counts(params: &StrassenParams) -> Result<StrassenCounts> {
    let StrassenParams { p, r, .. } = StrassenParams::new(params.p, params.r, params.n_b)?;
    let p = p as u64;
    let gemms = 7u64.pow(r) * (p >> r).pow(3);
    let adds: u64 = (0..r)
        .map(|i| 15 * 7u64.pow(r - i - 1) * (p >> (r - i)).pow(2))
        .sum();
    let temp_tiles = (0..r)
        .map(|i| 18 * 7u64.pow(i) * (p >> (i + 1)).pow(2))
        .sum();
    Ok(StrassenCounts {
        tasks: gemms + adds,
        flops: params.m() * u128::from(gemms) + params.a() * u128::from(adds),
        r_min: r_min(params.p)?,
        temp_tiles,
    })
}

/// `ceil(log2(p ln(8/7) / (5 ln(7/4))))`, at least 1.
///
/// For `p <= 16` the exact task count is smallest without recursion; the
/// floor of 1 keeps the depth that the continuous formula is quoted with.
pub fn r_min(p: usize) -> Result<u32> {
    if p == 0 || !p.is_power_of_two() {
        return Err(Error::InvalidParameter("tile count must be a power of two"));
    }
    let x = p as f64 * libm::log(8.0 / 7.0) / (5.0 * libm::log(7.0 / 4.0));
    let r = libm::ceil(libm::log2(x));
    Ok(if r < 1.0 { 1 } else { r as u32 })
}

/// Tasks of the plain tiled product counted as in the large-matrix report:
/// `p^2 (2p - 1)`, one multiply and one accumulate per term less the first.
pub fn tiled_gemm_report_tasks(p: u64) -> u64 {
    p * p * (2 * p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gemm_counts() {
        assert_eq!(gen_tiled_gemm(1).unwrap().len(), 1);
        assert_eq!(gen_tiled_gemm(4).unwrap().len(), 64);
        assert!(gen_tiled_gemm(0).is_err());
    }

    #[test]
    fn small_strassen_matches_closed_form() {
        for (p, r) in [(2, 1), (4, 1), (4, 2), (8, 2)] {
            let params = StrassenParams::new(p, r, 4).unwrap();
            let trace = gen_strassen(&params).unwrap();
            let counts = strassen_counts(&params).unwrap();
            assert_eq!(trace.tasks.len() as u64, counts.tasks, "p={p} r={r}");
            assert_eq!(trace.temp_tiles, counts.temp_tiles);
            assert_eq!(trace.products.len(), (7usize.pow(r) - 1) / 6 * 7);
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(StrassenParams::new(6, 1, 1).is_err());
        assert!(StrassenParams::new(4, 3, 1).is_err());
        assert!(StrassenParams::new(4, 2, 0).is_err());
        assert!(r_min(12).is_err());
    }

    #[test]
    fn weights_scale_with_tile_order() {
        let w = strassen_weights(200);
        assert_eq!(
            (w.weight(KernelKind::Gemm), w.weight(KernelKind::Geadd)),
            (399, 1)
        );
    }
}
