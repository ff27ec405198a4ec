use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_len;
use crate::fft::FftPlan;
use crate::{Direction, Result, C64};

/// `diag(post) F diag(pre)` evaluated as chirp, FFT, chirp.
///
/// DFT, DFnT and DAFT are all instances; only the two diagonals differ.
#[derive(Debug, Clone)]
pub struct ChirpTransform {
    plan: FftPlan,
    pre: Vec<C64>,
    post: Vec<C64>,
}

impl ChirpTransform {
    pub fn dft(n: usize) -> Result<Self> {
        let plan = FftPlan::new(n)?;
        let ones = vec![C64::new(1.0, 0.0); n];
        Ok(Self {
            plan,
            pre: ones.clone(),
            post: ones,
        })
    }

    pub fn dfnt(n: usize) -> Result<Self> {
        let plan = FftPlan::new(n)?;
        let (pre, post) = fresnel_phases(n);
        Ok(Self { plan, pre, post })
    }

    pub fn daft(n: usize, c1: f64, c2: f64) -> Result<Self> {
        let plan = FftPlan::new(n)?;
        Ok(Self {
            plan,
            pre: affine_phases(n, c1),
            post: affine_phases(n, c2),
        })
    }

    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }

    pub fn apply(&self, x: &[C64], dir: Direction) -> Result<Vec<C64>> {
        let mut out = x.to_vec();
        self.apply_in_place(&mut out, dir)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, buf: &mut [C64], dir: Direction) -> Result<()> {
        check_len(self.len(), buf.len())?;
        match dir {
            Direction::Forward => {
                buf.iter_mut().zip(&self.pre).for_each(|(v, p)| *v *= p);
                self.plan.process_unitary(buf, Direction::Forward);
                buf.iter_mut().zip(&self.post).for_each(|(v, p)| *v *= p);
            }
            Direction::Inverse => {
                buf.iter_mut()
                    .zip(&self.post)
                    .for_each(|(v, p)| *v *= p.conj());
                self.plan.process_unitary(buf, Direction::Inverse);
                buf.iter_mut()
                    .zip(&self.pre)
                    .for_each(|(v, p)| *v *= p.conj());
            }
        }
        Ok(())
    }
}

fn phasor(radians: f64) -> C64 {
    let (s, c) = radians.sin_cos();
    C64::new(c, s)
}

/// `e^{j pi k / n}` with `k` reduced modulo `2n` first.
fn half_turns(k: usize, n: usize) -> C64 {
    phasor(PI * (k % (2 * n)) as f64 / n as f64)
}

/// Diagonals `(Theta1, Theta2)` of the DFnT decomposition, both parities of `n`.
pub(crate) fn fresnel_phases(n: usize) -> (Vec<C64>, Vec<C64>) {
    let global = phasor(-FRAC_PI_4);
    if n.is_multiple_of(2) {
        let theta2: Vec<C64> = (0..n).map(|i| half_turns(i * i, n)).collect();
        let theta1 = theta2.iter().map(|&t| global * t).collect();
        (theta1, theta2)
    } else {
        let odd = global * phasor(PI / (4.0 * n as f64));
        let theta1 = (0..n).map(|m| odd * half_turns(m * m + m, n)).collect();
        let theta2 = (0..n).map(|k| half_turns(k * k - k, n)).collect();
        (theta1, theta2)
    }
}

/// `Lambda_c = diag(e^{-j 2 pi c n^2})`.
pub(crate) fn affine_phases(n: usize, c: f64) -> Vec<C64> {
    (0..n)
        .map(|i| {
            let cycles = c * (i * i) as f64;
            phasor(-2.0 * PI * (cycles - cycles.floor()))
        })
        .collect()
}
