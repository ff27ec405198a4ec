//! Unitary kernels shared by the modems.
//!
//! Every transform here has a fast path (FFT or butterfly based) and a dense
//! closed-form matrix through [`UnitaryKernel::matrix`]. Fast paths are what the
//! modems use per frame; dense matrices feed effective-channel construction and
//! the cross-checks in the test suites.

mod chirp;
mod mellin;

pub use chirp::ChirpTransform;
pub use mellin::{mellin_map, MellinGrid};

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_len;
use crate::fft::FftPlan;
use crate::{CMatrix, Direction, Error, Result, C64};

/// `Fx` (forward) or `F^H x` (inverse), unitary normalization.
pub fn dft(x: &[C64], dir: Direction) -> Result<Vec<C64>> {
    ChirpTransform::dft(x.len())?.apply(x, dir)
}

/// Discrete Fresnel transform `Phi x = Theta2 F Theta1 x` (or `Phi^H x`).
pub fn dfnt(x: &[C64], dir: Direction) -> Result<Vec<C64>> {
    ChirpTransform::dfnt(x.len())?.apply(x, dir)
}

/// Discrete affine Fourier transform `Lambda_{c2} F Lambda_{c1} x` (or its adjoint).
pub fn daft(x: &[C64], c1: f64, c2: f64, dir: Direction) -> Result<Vec<C64>> {
    ChirpTransform::daft(x.len(), c1, c2)?.apply(x, dir)
}

/// Normalized Walsh-Hadamard transform in natural (Sylvester) order. Self-inverse.
pub fn wht(x: &[C64]) -> Result<Vec<C64>> {
    let mut out = x.to_vec();
    wht_in_place(&mut out)?;
    Ok(out)
}

pub(crate) fn wht_in_place(buf: &mut [C64]) -> Result<()> {
    let n = buf.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut half = 1;
    while half < n {
        for start in (0..n).step_by(2 * half) {
            for i in start..start + half {
                let (a, b) = (buf[i], buf[i + half]);
                buf[i] = a + b;
                buf[i + half] = a - b;
            }
        }
        half *= 2;
    }
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(())
}

/// ISFFT (`Forward`) from a delay-Doppler grid to a time-frequency grid, or SFFT
/// (`Inverse`) back.
///
/// Rows index Doppler `k` / time `n` (`N̂` of them) and columns index delay `l` /
/// subcarrier `m` (`M̂`). The forward map is
/// `X[n,m] = 1/(N̂M̂) sum_k sum_l x[k,l] e^{j2pi(nk/N̂ - ml/M̂)}`; the inverse
/// carries no prefactor so the pair composes to the identity.
pub fn isfft(grid: &CMatrix, dir: Direction) -> Result<CMatrix> {
    let (rows, cols) = (grid.rows(), grid.cols());
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyInput);
    }
    let row_plan = FftPlan::new(cols)?;
    let col_plan = FftPlan::new(rows)?;
    let (along_doppler, along_delay) = match dir {
        Direction::Forward => (Direction::Inverse, Direction::Forward),
        Direction::Inverse => (Direction::Forward, Direction::Inverse),
    };
    let mut out = grid.clone();
    for r in 0..rows {
        row_plan.process(out.row_mut(r), along_delay);
    }
    let mut column = Vec::with_capacity(rows);
    for c in 0..cols {
        column.clear();
        column.extend((0..rows).map(|r| out[(r, c)]));
        col_plan.process(&mut column, along_doppler);
        out.set_column(c, &column);
    }
    if dir == Direction::Forward {
        out = out.scaled(C64::new(1.0 / (rows * cols) as f64, 0.0));
    }
    Ok(out)
}

/// Row-column interleaver `P` on a length `M̂N̂` vector.
///
/// `Forward` folds `x` row-major into `M̂` rows of `N̂` and reads it out column by
/// column: `(Px)[n M̂ + m] = x[m N̂ + n]`. `Inverse` applies `P^T`.
pub fn interleave(x: &[C64], m_hat: usize, n_hat: usize, dir: Direction) -> Result<Vec<C64>> {
    check_len(m_hat * n_hat, x.len())?;
    let mut out = alloc::vec![C64::new(0.0, 0.0); x.len()];
    for m in 0..m_hat {
        for n in 0..n_hat {
            let (row_major, col_major) = (m * n_hat + n, n * m_hat + m);
            match dir {
                Direction::Forward => out[col_major] = x[row_major],
                Direction::Inverse => out[row_major] = x[col_major],
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    Dft,
    Dfnt,
    Daft {
        c1: f64,
        c2: f64,
    },
    Wht,
    /// Row-column interleaver for an `m_hat x n_hat` fold.
    Interleaver {
        m_hat: usize,
        n_hat: usize,
    },
}

/// A validated `N x N` unitary kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryKernel {
    size: usize,
    kind: KernelKind,
}

impl UnitaryKernel {
    pub fn new(size: usize, kind: KernelKind) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyInput);
        }
        match kind {
            KernelKind::Wht if !size.is_power_of_two() => return Err(Error::NotPowerOfTwo(size)),
            KernelKind::Interleaver { m_hat, n_hat } => check_len(m_hat * n_hat, size)?,
            KernelKind::Daft { c1, c2 } if !(c1.is_finite() && c2.is_finite()) => {
                return Err(Error::InvalidParameter(
                    "DAFT chirp rates must be finite".into(),
                ))
            }
            _ => {}
        }
        Ok(Self { size, kind })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Fast application of the kernel (or its adjoint).
    pub fn apply(&self, x: &[C64], dir: Direction) -> Result<Vec<C64>> {
        check_len(self.size, x.len())?;
        match self.kind {
            KernelKind::Dft => dft(x, dir),
            KernelKind::Dfnt => dfnt(x, dir),
            KernelKind::Daft { c1, c2 } => daft(x, c1, c2, dir),
            KernelKind::Wht => wht(x),
            KernelKind::Interleaver { m_hat, n_hat } => interleave(x, m_hat, n_hat, dir),
        }
    }

    /// Dense matrix built entry by entry from the closed form.
    pub fn matrix(&self) -> CMatrix {
        let n = self.size;
        match self.kind {
            KernelKind::Dft => dft_matrix(n),
            KernelKind::Dfnt => {
                let (t1, t2) = chirp::fresnel_phases(n);
                chirp_sandwich(&t2, &dft_matrix(n), &t1)
            }
            KernelKind::Daft { c1, c2 } => chirp_sandwich(
                &chirp::affine_phases(n, c2),
                &dft_matrix(n),
                &chirp::affine_phases(n, c1),
            ),
            KernelKind::Wht => {
                let s = 1.0 / (n as f64).sqrt();
                CMatrix::from_fn(n, n, |r, c| {
                    let sign = if (r & c).count_ones() % 2 == 0 { s } else { -s };
                    C64::new(sign, 0.0)
                })
            }
            KernelKind::Interleaver { m_hat, n_hat } => CMatrix::from_fn(n, n, |r, c| {
                let (nn, m) = (r / m_hat, r % m_hat);
                if c == m * n_hat + nn {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }
}

/// `F[m][n] = e^{-j 2 pi m n / N} / sqrt(N)`.
pub fn dft_matrix(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |r, c| {
        let (sin, cos) = (-2.0 * PI * ((r * c) % n) as f64 / n as f64).sin_cos();
        C64::new(cos * s, sin * s)
    })
}

/// `diag(left) * m * diag(right)`.
fn chirp_sandwich(left: &[C64], m: &CMatrix, right: &[C64]) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| left[r] * m[(r, c)] * right[c])
}
