//! P-path linear time-varying channels.
//!
//! A realization is a list of paths `(h_i, l_i, nu_i)`: complex gain, integer
//! delay in samples and Doppler shift in Hz. Sampled at `f_s`, the time-varying
//! response is `g[l, n] = sum_i h_i e^{j2pi nu_i (n - l)/f_s} [l = l_i]`, where
//! `n` counts samples from the first transmitted sample (prefix included).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub gain: C64,
    /// Delay in samples.
    pub delay_tap: usize,
    pub doppler_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    paths: Vec<PathParams>,
    sample_rate: f64,
}

impl ChannelRealization {
    pub fn new(paths: Vec<PathParams>, sample_rate: f64) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidParameter(
                "channel needs at least one path".into(),
            ));
        }
        if !paths.iter().any(|p| p.delay_tap == 0) {
            return Err(Error::InvalidParameter(
                "one path must have delay tap 0".into(),
            ));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bad sample rate {sample_rate}"
            )));
        }
        if paths.iter().any(|p| !p.doppler_hz.is_finite()) {
            return Err(Error::InvalidParameter(
                "Doppler shifts must be finite".into(),
            ));
        }
        Ok(Self { paths, sample_rate })
    }

    /// Single unit path with no delay and no Doppler.
    pub fn identity(sample_rate: f64) -> Self {
        Self {
            paths: vec![PathParams {
                gain: C64::new(1.0, 0.0),
                delay_tap: 0,
                doppler_hz: 0.0,
            }],
            sample_rate,
        }
    }

    pub fn paths(&self) -> &[PathParams] {
        &self.paths
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn max_delay(&self) -> usize {
        self.paths.iter().map(|p| p.delay_tap).max().unwrap_or(0)
    }

    /// `h_i e^{j2pi nu_i (n - l_i)/f_s}` for path `i` at sample `n`.
    fn path_coefficient(&self, path: &PathParams, n: isize) -> C64 {
        let cycles = path.doppler_hz * (n - path.delay_tap as isize) as f64 / self.sample_rate;
        path.gain * turn(cycles)
    }
}

/// `e^{j 2 pi cycles}`, reducing to the nearest integer turn first.
fn turn(cycles: f64) -> C64 {
    let (s, c) = (2.0 * PI * (cycles - cycles.round())).sin_cos();
    C64::new(c, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DopplerMode {
    /// Uniform on `[-nu_max, nu_max]`.
    Continuous,
    /// Integer multiples of `f_s / frame_len` within `[-nu_max, nu_max]`.
    OnGrid { frame_len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub paths: usize,
    pub max_delay: usize,
    pub max_doppler_hz: f64,
    pub doppler_mode: DopplerMode,
    pub sample_rate: f64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::InvalidParameter(
                "path count must be at least 1".into(),
            ));
        }
        if !(self.max_doppler_hz >= 0.0 && self.max_doppler_hz.is_finite()) {
            return Err(Error::InvalidParameter(
                "nu_max must be finite and non-negative".into(),
            ));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return Err(Error::InvalidParameter(
                "sample rate must be positive".into(),
            ));
        }
        if let DopplerMode::OnGrid { frame_len: 0 } = self.doppler_mode {
            return Err(Error::InvalidParameter(
                "Doppler grid needs a frame length".into(),
            ));
        }
        Ok(())
    }
}

/// Circularly symmetric complex Gaussian with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

/// Draws one realization.
///
/// Gains are i.i.d. `CN(0, 1/P)`. Path 0 sits at delay 0; the others take
/// distinct taps from `1..=l_max` when there are enough of them, otherwise taps
/// are drawn with replacement. Draw order is gains, delays, Dopplers.
pub fn sample_channel<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    cfg.validate()?;
    let p = cfg.paths;
    let gains: Vec<C64> = (0..p)
        .map(|_| complex_gaussian(rng, 1.0 / p as f64))
        .collect();

    let mut delays = vec![0usize; p];
    if cfg.max_delay > 0 && p > 1 {
        if p - 1 <= cfg.max_delay {
            let picks = rand::seq::index::sample(rng, cfg.max_delay, p - 1);
            for (d, tap) in delays[1..].iter_mut().zip(picks.iter()) {
                *d = tap + 1;
            }
        } else {
            for d in &mut delays[1..] {
                *d = rng.random_range(1..=cfg.max_delay);
            }
        }
    }

    let dopplers: Vec<f64> = (0..p)
        .map(|_| match cfg.doppler_mode {
            DopplerMode::Continuous if cfg.max_doppler_hz > 0.0 => {
                rng.random_range(-cfg.max_doppler_hz..=cfg.max_doppler_hz)
            }
            DopplerMode::Continuous => 0.0,
            DopplerMode::OnGrid { frame_len } => {
                let spacing = cfg.sample_rate / frame_len as f64;
                let k_max = (cfg.max_doppler_hz / spacing + 1e-9).floor() as i64;
                let k = rng.random_range(-k_max..=k_max);
                k as f64 * spacing
            }
        })
        .collect();

    let paths = gains
        .into_iter()
        .zip(delays)
        .zip(dopplers)
        .map(|((gain, delay_tap), doppler_hz)| PathParams {
            gain,
            delay_tap,
            doppler_hz,
        })
        .collect();
    ChannelRealization::new(paths, cfg.sample_rate)
}

/// Time-varying tap `g[l, n]`.
pub fn discrete_response(ch: &ChannelRealization, tap: usize, n: usize) -> C64 {
    ch.paths
        .iter()
        .filter(|p| p.delay_tap == tap)
        .map(|p| ch.path_coefficient(p, n as isize))
        .sum()
}

/// `r[n] = sum_l g[l, n] s[n - l]`, with `s` zero before its first sample.
/// Output has the input's length; dispersion past the end is dropped.
pub fn apply_channel(ch: &ChannelRealization, s: &[C64]) -> Vec<C64> {
    let mut r = vec![C64::new(0.0, 0.0); s.len()];
    for path in &ch.paths {
        for n in path.delay_tap..s.len() {
            r[n] += ch.path_coefficient(path, n as isize) * s[n - path.delay_tap];
        }
    }
    r
}

/// Adds i.i.d. `CN(0, sigma2)` noise to every sample.
pub fn add_noise<R: Rng + ?Sized>(r: &[C64], sigma2: f64, rng: &mut R) -> Result<Vec<C64>> {
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance {sigma2} must be >= 0"
        )));
    }
    if sigma2 == 0.0 {
        return Ok(r.to_vec());
    }
    Ok(r.iter()
        .map(|&v| v + complex_gaussian(rng, sigma2))
        .collect())
}

/// Frame extension absorbing the channel's delay spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prefix {
    None,
    /// Cyclic prefix of the given length.
    Cyclic(usize),
    /// Chirp-periodic prefix `s[n] = s[N+n] e^{-j2pi c1 (N^2 + 2Nn)}`, `n = -len..-1`.
    ChirpPeriodic {
        len: usize,
        c1: f64,
    },
}

impl Prefix {
    pub fn len(&self) -> usize {
        match *self {
            Prefix::None => 0,
            Prefix::Cyclic(len) | Prefix::ChirpPeriodic { len, .. } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multiplier applied to `s[N + n]` to produce prefix sample `n < 0`.
    fn wrap_phase(&self, body_len: usize, n: isize) -> C64 {
        match *self {
            Prefix::ChirpPeriodic { c1, .. } => {
                let nf = body_len as f64;
                turn(-c1 * (nf * nf + 2.0 * nf * n as f64))
            }
            _ => C64::new(1.0, 0.0),
        }
    }

    fn check(&self, body_len: usize) -> Result<()> {
        if body_len == 0 {
            return Err(Error::EmptyInput);
        }
        if self.len() > body_len {
            return Err(Error::InvalidParameter(format!(
                "prefix of {} samples exceeds body of {body_len}",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn prepend(&self, body: &[C64]) -> Result<Vec<C64>> {
        self.check(body.len())?;
        let n = body.len();
        let len = self.len();
        let mut frame = Vec::with_capacity(n + len);
        for k in 0..len {
            let idx = k as isize - len as isize;
            frame.push(body[n - len + k] * self.wrap_phase(n, idx));
        }
        frame.extend_from_slice(body);
        Ok(frame)
    }

    /// Drops the leading prefix samples.
    pub fn strip<'a>(&self, frame: &'a [C64]) -> Result<&'a [C64]> {
        if frame.len() <= self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len() + 1,
                found: frame.len(),
            });
        }
        Ok(&frame[self.len()..])
    }
}

/// Post-prefix-removal channel matrix: `strip(apply_channel(prepend(s))) = H s`.
///
/// Frames up to 64 samples are built by probing that pipeline with basis
/// vectors; longer frames use [`time_matrix_closed_form`].
pub fn time_matrix(ch: &ChannelRealization, n: usize, prefix: Prefix) -> Result<CMatrix> {
    if n <= 64 {
        time_matrix_probe(ch, n, prefix)
    } else {
        time_matrix_closed_form(ch, n, prefix)
    }
}

pub fn time_matrix_probe(ch: &ChannelRealization, n: usize, prefix: Prefix) -> Result<CMatrix> {
    prefix.check(n)?;
    let mut h = CMatrix::zeros(n, n);
    let mut basis = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        basis[j] = C64::new(1.0, 0.0);
        let frame = apply_channel(ch, &prefix.prepend(&basis)?);
        h.set_column(j, prefix.strip(&frame)?);
        basis[j] = C64::new(0.0, 0.0);
    }
    Ok(h)
}

/// Closed form: row `n` gathers `g[l, n + L]` at column `n - l`, wrapping into
/// the prefix (with the prefix's phase) when `-L <= n - l < 0`.
pub fn time_matrix_closed_form(
    ch: &ChannelRealization,
    n: usize,
    prefix: Prefix,
) -> Result<CMatrix> {
    prefix.check(n)?;
    let len = prefix.len() as isize;
    let mut h = CMatrix::zeros(n, n);
    for row in 0..n {
        let t = row as isize + len;
        for path in &ch.paths {
            let src = row as isize - path.delay_tap as isize;
            let coeff = ch.path_coefficient(path, t);
            if src >= 0 {
                h[(row, src as usize)] += coeff;
            } else if src >= -len {
                h[(row, (n as isize + src) as usize)] += coeff * prefix.wrap_phase(n, src);
            }
        }
    }
    Ok(h)
}
