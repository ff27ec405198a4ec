//! ODDM pulse shaping.
//!
//! Time is counted in samples of spacing `T/M̂`, so one ODDM symbol slot `T`
//! spans `M̂` samples.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::pulse::root_raised_cosine;
use crate::{Error, Result};

/// Sampled pulse with support starting at sample `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPulse {
    pub start: isize,
    pub taps: Vec<f64>,
}

impl SampledPulse {
    /// Value at sample `j`, zero outside the support.
    pub fn at(&self, j: isize) -> f64 {
        let i = j - self.start;
        if i < 0 {
            return 0.0;
        }
        self.taps.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn end(&self) -> isize {
        self.start + self.taps.len() as isize
    }
}

/// The sub-pulse `a`, the `T`-spaced train `u` over slots `0..N̂` and the
/// prefixed train `u_cp` over slots `-1..N̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddmPulse {
    pub a: SampledPulse,
    pub u: SampledPulse,
    pub u_cp: SampledPulse,
}

/// Root-raised-cosine sub-pulse truncated to `±span` samples and scaled to
/// `sum a[j]^2 = 1/N̂`. A span of 0 gives the single-sample pulse `1/sqrt(N̂)`.
pub fn oddm_pulse(rolloff: f64, span: usize, n_hat: usize, m_hat: usize) -> Result<OddmPulse> {
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::InvalidParameter(alloc::format!(
            "roll-off {rolloff} outside [0, 1]"
        )));
    }
    if n_hat == 0 || m_hat == 0 {
        return Err(Error::InvalidParameter(
            "ODDM grid dimensions must be positive".into(),
        ));
    }
    let q = span as isize;
    let mut taps: Vec<f64> = (-q..=q)
        .map(|j| root_raised_cosine(j as f64, rolloff))
        .collect();
    let energy: f64 = taps.iter().map(|v| v * v).sum();
    let scale = 1.0 / (energy * n_hat as f64).sqrt();
    taps.iter_mut().for_each(|v| *v *= scale);
    let a = SampledPulse { start: -q, taps };
    let u = train(&a, 0, n_hat, m_hat);
    let u_cp = train(&a, -1, n_hat, m_hat);
    Ok(OddmPulse { a, u, u_cp })
}

fn train(a: &SampledPulse, first_slot: isize, n_hat: usize, m_hat: usize) -> SampledPulse {
    let m = m_hat as isize;
    let start = a.start + first_slot * m;
    let end = a.end() + (n_hat as isize - 1) * m;
    let taps = (start..end)
        .map(|j| {
            (first_slot..n_hat as isize)
                .map(|slot| a.at(j - slot * m))
                .sum()
        })
        .collect();
    SampledPulse { start, taps }
}
