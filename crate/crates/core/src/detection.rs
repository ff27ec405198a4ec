//! Gray-labeled square QAM, linear MMSE detection and bit-error counting.
//!
//! A symbol's bits are split in half: the first half labels the in-phase axis
//! and the second half the quadrature axis, most significant bit first. On each
//! axis, level index `i` has amplitude `L - 1 - 2i` and label `i ^ (i >> 1)`.
//! With this labeling 4QAM maps `(0, 0)` to `(1 + j)/sqrt(2)`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::check_len;
use crate::linalg::{lu_solve, regularized_least_squares, Cholesky};
use crate::{CMatrix, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    order: usize,
    bits_per_axis: usize,
    levels: usize,
    scale: f64,
    points: Vec<C64>,
}

impl Constellation {
    /// Square QAM of order 4, 16 or 64, normalized to unit average energy.
    pub fn new(order: usize) -> Result<Self> {
        let bits_per_axis = match order {
            4 => 1,
            16 => 2,
            64 => 3,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unsupported QAM order {order}"
                )))
            }
        };
        let levels = 1usize << bits_per_axis;
        let l = levels as f64;
        let scale = 1.0 / (2.0 * (l * l - 1.0) / 3.0).sqrt();
        let mut c = Self {
            order,
            bits_per_axis,
            levels,
            scale,
            points: Vec::new(),
        };
        c.points = (0..order)
            .map(|label| {
                let (i_label, q_label) = (label >> bits_per_axis, label & (levels - 1));
                C64::new(
                    c.amplitude(gray_decode(i_label)),
                    c.amplitude(gray_decode(q_label)),
                )
            })
            .collect();
        Ok(c)
    }

    pub fn qam4() -> Self {
        Self::new(4).expect("4QAM is supported")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis
    }

    /// Points indexed by their integer label (first bit most significant).
    pub fn points(&self) -> &[C64] {
        &self.points
    }

    fn amplitude(&self, index: usize) -> f64 {
        (self.levels as f64 - 1.0 - 2.0 * index as f64) * self.scale
    }

    /// Gray label of the nearest level; equidistant levels resolve to the smaller label.
    fn axis_label(&self, v: f64) -> usize {
        let t = ((self.levels as f64 - 1.0) - v / self.scale) / 2.0;
        let lo = (t.floor().max(0.0) as usize).min(self.levels - 2);
        let (d_lo, d_hi) = (
            (v - self.amplitude(lo)).abs(),
            (v - self.amplitude(lo + 1)).abs(),
        );
        let (g_lo, g_hi) = (gray(lo), gray(lo + 1));
        if d_lo < d_hi || (d_lo == d_hi && g_lo < g_hi) {
            g_lo
        } else {
            g_hi
        }
    }

    /// Label of the nearest point.
    pub fn nearest_label(&self, z: C64) -> usize {
        (self.axis_label(z.re) << self.bits_per_axis) | self.axis_label(z.im)
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_decode(mut g: usize) -> usize {
    let mut i = g;
    while g > 0 {
        g >>= 1;
        i ^= g;
    }
    i
}

/// Maps bits (each 0 or 1) to symbols, `bits_per_symbol` bits per symbol.
pub fn qam_map(bits: &[u8], c: &Constellation) -> Result<Vec<C64>> {
    let k = c.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::LengthMismatch {
            expected: bits.len().div_ceil(k) * k,
            found: bits.len(),
        });
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidParameter(format!("bit value {b}")));
    }
    Ok(bits
        .chunks_exact(k)
        .map(|chunk| c.points[chunk.iter().fold(0, |acc, &b| (acc << 1) | b as usize)])
        .collect())
}

/// Minimum-distance hard decision, expanded back to bits.
pub fn qam_demap(symbols: &[C64], c: &Constellation) -> Vec<u8> {
    let k = c.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * k);
    for &z in symbols {
        let label = c.nearest_label(z);
        bits.extend((0..k).rev().map(|shift| ((label >> shift) & 1) as u8));
    }
    bits
}

/// Linear MMSE estimate `(H^H H + sigma2 I)^{-1} H^H y` for unit-energy symbols.
///
/// A positive `sigma2` is solved through a Cholesky factorization of the
/// regularized normal equations, falling back to a QR solve of the stacked
/// least-squares problem when `H^H H` is too ill-conditioned. At `sigma2 = 0` the estimate is `H^{-1} y`,
/// solved directly by LU with partial pivoting. Numerically singular systems
/// return [`Error::Singular`].
pub fn mmse_detect(h: &CMatrix, y: &[C64], sigma2: f64) -> Result<Vec<C64>> {
    if !h.is_square() {
        return Err(Error::LengthMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    check_len(h.rows(), y.len())?;
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance {sigma2} must be >= 0"
        )));
    }
    if sigma2 == 0.0 {
        return lu_solve(h, y);
    }
    let mut normal = h.gram();
    for i in 0..normal.rows() {
        normal[(i, i)] += sigma2;
    }
    match Cholesky::new(&normal) {
        Ok(chol) => chol.solve(&h.adjoint_mul_vec(y)?),
        Err(Error::Singular) => regularized_least_squares(h, y, sigma2),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Nearest constellation points.
    pub symbols: Vec<C64>,
    pub bits: Vec<u8>,
}

/// MMSE estimate followed by hard decisions.
pub fn detect(h: &CMatrix, y: &[C64], sigma2: f64, c: &Constellation) -> Result<DetectionResult> {
    let soft = mmse_detect(h, y, sigma2)?;
    let symbols = soft.iter().map(|&z| c.points[c.nearest_label(z)]).collect();
    Ok(DetectionResult {
        symbols,
        bits: qam_demap(&soft, c),
    })
}

/// `(Hamming distance, length)`.
pub fn ber_count(tx: &[u8], rx: &[u8]) -> Result<(usize, usize)> {
    check_len(tx.len(), rx.len())?;
    Ok((tx.iter().zip(rx).filter(|(a, b)| a != b).count(), tx.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn ill_conditioned_gram_falls_back_to_qr() {
        let h = CMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1e-9)]);
        let y = [C64::new(0.5, -0.5), C64::new(-3e-9, 2e-9)];
        let x = mmse_detect(&h, &y, 1e-30).unwrap();
        assert!((x[0] - y[0]).norm() < 1e-12);
        assert!((x[1] - C64::new(2.0, 3.0)).norm() < 1e-6);
    }

    #[test]
    fn qam4_table() {
        let c = Constellation::qam4();
        let r = FRAC_1_SQRT_2;
        let want = [
            C64::new(r, r),
            C64::new(r, -r),
            C64::new(-r, r),
            C64::new(-r, -r),
        ];
        for (p, w) in c.points().iter().zip(&want) {
            assert!((p - w).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_average_energy() {
        for order in [4, 16, 64] {
            let c = Constellation::new(order).unwrap();
            let e: f64 = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
            assert!((e - 1.0).abs() < 1e-14, "{order}: {e}");
        }
        assert!(Constellation::new(8).is_err());
    }

    #[test]
    fn grid_neighbours_differ_in_one_bit() {
        for order in [4, 16, 64] {
            let c = Constellation::new(order).unwrap();
            let min_dist = 2.0 * c.scale;
            for (a, pa) in c.points().iter().enumerate() {
                for (b, pb) in c.points().iter().enumerate() {
                    if ((pa - pb).norm() - min_dist).abs() < 1e-12 {
                        assert_eq!((a ^ b).count_ones(), 1, "order {order}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn map_demap_round_trip() {
        let c = Constellation::new(16).unwrap();
        let bits: Vec<u8> = (0..64).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
        let symbols = qam_map(&bits, &c).unwrap();
        assert_eq!(qam_demap(&symbols, &c), bits);
        let nudged: Vec<C64> = symbols.iter().map(|s| s + C64::new(1e-6, -1e-6)).collect();
        assert_eq!(qam_demap(&nudged, &c), bits);
    }

    #[test]
    fn map_rejects_bad_input() {
        let c = Constellation::qam4();
        assert!(qam_map(&[0, 1, 1], &c).is_err());
        assert!(qam_map(&[0, 2], &c).is_err());
    }

    #[test]
    fn boundary_ties_pick_smallest_label() {
        let c = Constellation::qam4();
        assert_eq!(qam_demap(&[C64::new(0.0, 0.0)], &c), vec![0, 0]);
        assert_eq!(qam_demap(&[C64::new(0.0, -0.5)], &c), vec![0, 1]);
        assert_eq!(qam_demap(&[C64::new(-0.5, 0.0)], &c), vec![1, 0]);
    }

    #[test]
    fn mmse_scalar_channels() {
        let y = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5)];
        assert_eq!(mmse_detect(&CMatrix::identity(2), &y, 0.0).unwrap(), y);
        let two = CMatrix::identity(2).scaled(C64::new(2.0, 0.0));
        let x = mmse_detect(&two, &y, 0.0).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b / 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn mmse_two_by_two_by_hand() {
        // H = [[1, 0.5], [0, 1]], sigma2 = 0.1, y = (1, 1):
        // H^H H + 0.1 I = [[1.1, 0.5], [0.5, 1.35]], H^H y = (1, 1.5)
        // solution = (1.35 - 0.75, 1.65 - 0.5) / (1.485 - 0.25) = (0.6, 1.15) / 1.235
        let h = CMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) | (1, 1) => C64::new(1.0, 0.0),
            (0, 1) => C64::new(0.5, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let y = [C64::new(1.0, 0.0); 2];
        let x = mmse_detect(&h, &y, 0.1).unwrap();
        assert!((x[0] - C64::new(0.6 / 1.235, 0.0)).norm() < 1e-14);
        assert!((x[1] - C64::new(1.15 / 1.235, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_channel_without_noise_is_an_error() {
        let h = CMatrix::zeros(3, 3);
        assert_eq!(
            mmse_detect(&h, &[C64::new(1.0, 0.0); 3], 0.0),
            Err(Error::Singular)
        );
        assert!(mmse_detect(&h, &[C64::new(1.0, 0.0); 3], 0.5).is_ok());
        assert!(mmse_detect(&h, &[C64::new(1.0, 0.0); 3], -0.5).is_err());
    }

    #[test]
    fn bit_errors() {
        let tx = vec![0u8; 100];
        assert_eq!(ber_count(&tx, &tx).unwrap(), (0, 100));
        assert_eq!(ber_count(&tx, &[1u8; 100]).unwrap(), (100, 100));
        let mut rx = tx.clone();
        for i in [3, 50, 99] {
            rx[i] = 1;
        }
        assert_eq!(ber_count(&tx, &rx).unwrap(), (3, 100));
        assert!(ber_count(&tx, &rx[..99]).is_err());
    }

    #[test]
    fn detection_result_shapes() {
        let c = Constellation::new(16).unwrap();
        let bits: Vec<u8> = (0..32).map(|i| (i % 3 == 0) as u8).collect();
        let x = qam_map(&bits, &c).unwrap();
        let out = detect(&CMatrix::identity(8), &x, 1e-3, &c).unwrap();
        assert_eq!(out.bits, bits);
        assert_eq!(out.symbols.len(), 8);
    }
}
