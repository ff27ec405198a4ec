//! Discrete Mellin-Fourier to delay-scale mapping on the geometric grid
//! `M(n) = floor(q^n)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::lu_solve;
use crate::{CMatrix, Direction, Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct MellinGrid {
    ratio: f64,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

impl MellinGrid {
    pub fn new(branches: usize, ratio: f64) -> Result<Self> {
        if branches == 0 {
            return Err(Error::InvalidParameter(
                "Mellin grid needs at least one branch".into(),
            ));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidParameter(
                "Mellin ratio q must exceed 1".into(),
            ));
        }
        let sizes: Vec<usize> = (0..branches)
            .map(|n| ratio.powi(n as i32).floor() as usize)
            .collect();
        let mut offsets = Vec::with_capacity(branches);
        let mut total = 0;
        for &s in &sizes {
            offsets.push(total);
            total += s;
        }
        Ok(Self {
            ratio,
            sizes,
            offsets,
            total,
        })
    }

    pub fn branches(&self) -> usize {
        self.sizes.len()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `M(n)` for every branch.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `M_tot`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Position of `(branch, index)` in the flattened branch-major ordering.
    pub fn flat_index(&self, branch: usize, index: usize) -> usize {
        self.offsets[branch] + index
    }

    pub fn flatten(&self, ragged: &[Vec<C64>]) -> Result<Vec<C64>> {
        self.check(ragged)?;
        Ok(ragged.iter().flatten().copied().collect())
    }

    pub fn unflatten(&self, flat: &[C64]) -> Result<Vec<Vec<C64>>> {
        crate::error::check_len(self.total, flat.len())?;
        Ok(self
            .offsets
            .iter()
            .zip(&self.sizes)
            .map(|(&o, &s)| flat[o..o + s].to_vec())
            .collect())
    }

    fn check(&self, ragged: &[Vec<C64>]) -> Result<()> {
        crate::error::check_len(self.branches(), ragged.len())?;
        for (branch, (row, &expected)) in ragged.iter().zip(&self.sizes).enumerate() {
            if row.len() != expected {
                return Err(Error::RaggedMismatch {
                    branch,
                    expected,
                    found: row.len(),
                });
            }
        }
        Ok(())
    }

    /// Coefficient multiplying `x[k,l]` in `X[n,m]`.
    fn coefficient(&self, n: usize, m: usize, k: usize, l: usize) -> C64 {
        let mk = self.sizes[k];
        let nb = self.branches();
        let turns = ((m * l) % mk) as f64 / mk as f64 - ((n * k) % nb) as f64 / nb as f64;
        let (s, c) = (2.0 * PI * turns).sin_cos();
        let scale = self.ratio.powf(-(n as f64) / 2.0) / (nb as f64 * mk as f64);
        C64::new(c * scale, s * scale)
    }

    /// Dense `M_tot x M_tot` matrix of the forward mapping in flattened ordering.
    pub fn forward_matrix(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.total, self.total);
        for n in 0..self.branches() {
            for m in 0..self.sizes[n] {
                let r = self.flat_index(n, m);
                for k in 0..self.branches() {
                    for l in 0..self.sizes[k] {
                        out[(r, self.flat_index(k, l))] = self.coefficient(n, m, k, l);
                    }
                }
            }
        }
        out
    }
}

/// Mellin-Fourier symbols `x[k,l]` to the delay-scale grid `X[n,m]` (`Forward`).
///
/// The forward map evaluates
/// `X[n,m] = q^{-n/2}/N̂ sum_k (1/M(k)) sum_l x[k,l] e^{j2pi(ml/M(k) - nk/N̂)}` directly.
/// `Inverse` returns the exact preimage: the forward map is not an isometry on
/// the ragged grid, so the inverse is the Gram-rescaled adjoint
/// `(M^H M)^{-1} M^H`, evaluated as one dense solve.
pub fn mellin_map(grid: &MellinGrid, x: &[Vec<C64>], dir: Direction) -> Result<Vec<Vec<C64>>> {
    grid.check(x)?;
    match dir {
        Direction::Forward => Ok((0..grid.branches())
            .map(|n| {
                (0..grid.sizes[n])
                    .map(|m| {
                        let mut acc = C64::new(0.0, 0.0);
                        for (k, row) in x.iter().enumerate() {
                            for (l, &v) in row.iter().enumerate() {
                                acc += v * grid.coefficient(n, m, k, l);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()),
        Direction::Inverse => {
            let flat = grid.flatten(x)?;
            let solved = lu_solve(&grid.forward_matrix(), &flat)?;
            grid.unflatten(&solved)
        }
    }
}
