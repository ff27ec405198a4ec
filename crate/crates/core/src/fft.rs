//! Complex FFT used by every fast transform in the crate.
//!
//! Power-of-two sizes run an iterative radix-2 decimation-in-time kernel; any
//! other size goes through Bluestein's chirp-z reformulation on a power-of-two
//! convolution. Plans are immutable and cheap to share between threads.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Direction, Error, Result, C64};

#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    Radix2 {
        twiddles: Vec<C64>,
        bitrev: Vec<usize>,
    },
    Bluestein {
        chirp: Vec<C64>,
        kernel_spectrum: Vec<C64>,
        inner: Box<FftPlan>,
    },
}

/// `e^{-j 2 pi num / den}` with the numerator reduced first.
pub(crate) fn unit_phasor(num: usize, den: usize) -> C64 {
    let reduced = num % den;
    let (s, c) = (-2.0 * PI * reduced as f64 / den as f64).sin_cos();
    C64::new(c, s)
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyInput);
        }
        let kind = if len == 1 {
            Kind::Trivial
        } else if len.is_power_of_two() {
            let twiddles = (0..len / 2).map(|k| unit_phasor(k, len)).collect();
            let bits = len.trailing_zeros();
            let bitrev = (0..len)
                .map(|i| i.reverse_bits() >> (usize::BITS - bits))
                .collect();
            Kind::Radix2 { twiddles, bitrev }
        } else {
            let conv_len = (2 * len - 1).next_power_of_two();
            let inner = FftPlan::new(conv_len)?;
            // chirp[n] = e^{-j pi n^2 / len}; n^2 is reduced mod 2*len before scaling.
            let chirp: Vec<C64> = (0..len)
                .map(|n| unit_phasor((n * n) % (2 * len), 2 * len))
                .collect();
            let mut kernel = vec![C64::new(0.0, 0.0); conv_len];
            kernel[0] = chirp[0].conj();
            for n in 1..len {
                kernel[n] = chirp[n].conj();
                kernel[conv_len - n] = chirp[n].conj();
            }
            inner.process(&mut kernel, Direction::Forward);
            Kind::Bluestein {
                chirp,
                kernel_spectrum: kernel,
                inner: Box::new(inner),
            }
        };
        Ok(Self { len, kind })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized transform in place: `Forward` uses `e^{-j...}`.
    ///
    /// Panics if `buf.len()` differs from the plan length.
    pub fn process(&self, buf: &mut [C64], dir: Direction) {
        assert_eq!(buf.len(), self.len, "buffer does not match plan length");
        if dir == Direction::Inverse {
            buf.iter_mut().for_each(|v| *v = v.conj());
            self.forward(buf);
            buf.iter_mut().for_each(|v| *v = v.conj());
        } else {
            self.forward(buf);
        }
    }

    /// Transform scaled by `1/sqrt(N)` so that the forward and inverse maps are adjoint.
    pub fn process_unitary(&self, buf: &mut [C64], dir: Direction) {
        self.process(buf, dir);
        let scale = 1.0 / (self.len as f64).sqrt();
        buf.iter_mut().for_each(|v| *v *= scale);
    }

    fn forward(&self, buf: &mut [C64]) {
        match &self.kind {
            Kind::Trivial => {}
            Kind::Radix2 { twiddles, bitrev } => radix2(buf, twiddles, bitrev),
            Kind::Bluestein {
                chirp,
                kernel_spectrum,
                inner,
            } => {
                let m = inner.len();
                let mut work = vec![C64::new(0.0, 0.0); m];
                for ((w, &x), &c) in work.iter_mut().zip(buf.iter()).zip(chirp) {
                    *w = x * c;
                }
                inner.process(&mut work, Direction::Forward);
                for (w, &k) in work.iter_mut().zip(kernel_spectrum) {
                    *w *= k;
                }
                inner.process(&mut work, Direction::Inverse);
                let scale = 1.0 / m as f64;
                for ((out, &w), &c) in buf.iter_mut().zip(&work).zip(chirp) {
                    *out = w * c * scale;
                }
            }
        }
    }
}

fn radix2(buf: &mut [C64], twiddles: &[C64], bitrev: &[usize]) {
    let n = buf.len();
    for (i, &j) in bitrev.iter().enumerate() {
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for start in (0..n).step_by(2 * half) {
            for k in 0..half {
                let t = buf[start + k + half] * twiddles[k * stride];
                let u = buf[start + k];
                buf[start + k] = u + t;
                buf[start + k + half] = u - t;
            }
        }
        half *= 2;
    }
}
