//! ODSS synthesis on the delay-scale grid.
//!
//! Time is normalized to `1/W`: frame sample `j` sits at `t = j/W` and the
//! transmit pulse is a unit-energy root-raised-cosine with symbol period `1/W`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::pulse::root_raised_cosine;
use crate::transforms::MellinGrid;
use crate::{CMatrix, Error, Result, C64};

/// `q^{n/2} g_tx(q^n (t - m/(q^n W)))` sampled at `t = j/W`.
fn atom(grid: &MellinGrid, rolloff: f64, j: usize, n: usize, m: usize) -> f64 {
    let scale = grid.ratio().powi(n as i32);
    scale.sqrt() * root_raised_cosine(scale * j as f64 - m as f64, rolloff)
}

/// Evaluates `s[j] = sum_n sum_m X[n,m] q^{n/2} g_tx(q^n (t_j - m/(q^n W)))` for
/// `j = 0..M_tot`.
pub fn odss_synthesize(grid: &MellinGrid, rolloff: f64, x: &[Vec<C64>]) -> Result<Vec<C64>> {
    check_rolloff(rolloff)?;
    let flat = grid.flatten(x)?;
    pulse_matrix(grid, rolloff).mul_vec(&flat)
}

/// Dense `M_tot x M_tot` matrix of [`odss_synthesize`] over the flattened grid.
pub fn pulse_matrix(grid: &MellinGrid, rolloff: f64) -> CMatrix {
    let total = grid.total();
    let mut g = CMatrix::zeros(total, total);
    for j in 0..total {
        for (n, &size) in grid.sizes().iter().enumerate() {
            for m in 0..size {
                g[(j, grid.flat_index(n, m))] = C64::new(atom(grid, rolloff, j, n, m), 0.0);
            }
        }
    }
    g
}

pub(crate) fn check_rolloff(rolloff: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rolloff) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!(
            "roll-off {rolloff} outside [0, 1]"
        )))
    }
}
