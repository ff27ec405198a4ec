//! The seven waveforms behind one interface.
//!
//! Every scheme is a linear map `A` on `N_tot` symbols: the transmitter sends
//! `s = A^H x` followed by a prefix, the receiver strips the prefix and returns
//! `y = A r`. For OFDM, OCDM, AFDM, OTFS and OTSM `A` is unitary. ODDM is
//! near-unitary with its default pulse, and ODSS is a plain synthesis map.
//!
//! Symbol-vector layouts:
//!
//! - OTFS: `x[k M̂ + l]`, Doppler `k < N̂`, delay `l < M̂`.
//! - ODDM: `x[k N̂ + l]`, delay `k < M̂`, Doppler `l < N̂`.
//! - OTSM: `x[m N̂ + n]`, delay `m < M̂`, sequency `n < N̂`.
//! - ODSS: Mellin-Fourier symbols flattened branch by branch.

mod oddm;
mod odss;
mod pulse;

pub use oddm::{oddm_pulse, OddmPulse, SampledPulse};
pub use odss::{odss_synthesize, pulse_matrix as odss_pulse_matrix};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::Prefix;
use crate::error::check_len;
use crate::fft::FftPlan;
use crate::transforms::{
    dft_matrix, wht_in_place, ChirpTransform, KernelKind, MellinGrid, UnitaryKernel,
};
use crate::{CMatrix, Direction, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Ofdm,
    Ocdm,
    Afdm,
    Otfs,
    Oddm,
    Otsm,
    Odss,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 7] = [
        SchemeKind::Ofdm,
        SchemeKind::Ocdm,
        SchemeKind::Afdm,
        SchemeKind::Otfs,
        SchemeKind::Oddm,
        SchemeKind::Otsm,
        SchemeKind::Odss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ofdm => "OFDM",
            SchemeKind::Ocdm => "OCDM",
            SchemeKind::Afdm => "AFDM",
            SchemeKind::Otfs => "OTFS",
            SchemeKind::Oddm => "ODDM",
            SchemeKind::Otsm => "OTSM",
            SchemeKind::Odss => "ODSS",
        }
    }

    /// Whether the modulation matrix is exactly unitary.
    pub fn is_unitary(self) -> bool {
        !matches!(self, SchemeKind::Oddm | SchemeKind::Odss)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme {s:?}")))
    }
}

/// Root-raised-cosine pulse: roll-off and one-sided span in samples.
///
/// The default (roll-off 1e-4, span 4) keeps `max |A^H A - I|` near `0.55 * rolloff`
/// and every row of `A^H A - I` below `4.4 * rolloff` in absolute sum, as long
/// as `M̂ >= 4 * span`; shorter slots alias the pulse autocorrelation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseShape {
    pub rolloff: f64,
    pub span: usize,
}

impl PulseShape {
    /// The single-sample pulse.
    pub const RECTANGULAR: PulseShape = PulseShape {
        rolloff: 0.0,
        span: 0,
    };
}

impl Default for PulseShape {
    fn default() -> Self {
        Self {
            rolloff: 1e-4,
            span: 4,
        }
    }
}

pub const ODSS_DEFAULT_ROLLOFF: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeParams {
    Ofdm {
        n: usize,
    },
    Ocdm {
        n: usize,
    },
    Afdm {
        n: usize,
        c1: f64,
        c2: f64,
    },
    Otfs {
        n_hat: usize,
        m_hat: usize,
    },
    Oddm {
        n_hat: usize,
        m_hat: usize,
        pulse: PulseShape,
    },
    Otsm {
        n_hat: usize,
        m_hat: usize,
    },
    Odss {
        q: f64,
        branches: usize,
        rolloff: f64,
    },
}

/// AFDM chirp rates for a maximum Doppler of `max_doppler_hz`:
/// `c1 = (2 ceil(alpha_max) + 1)/(2N)` with `alpha_max = nu_max N / f_s`, and
/// `c2 = 1/(2 pi N^2)`.
pub fn afdm_default_chirps(n: usize, max_doppler_hz: f64, sample_rate: f64) -> (f64, f64) {
    let nf = n as f64;
    let alpha_max = (max_doppler_hz * nf / sample_rate - 1e-9).ceil().max(0.0);
    (
        (2.0 * alpha_max + 1.0) / (2.0 * nf),
        1.0 / (2.0 * PI * nf * nf),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModemScheme {
    params: SchemeParams,
    prefix_len: usize,
    subcarrier_spacing: f64,
}

impl ModemScheme {
    /// Validates `params`; the prefix starts empty and the subcarrier spacing at 1 Hz.
    pub fn new(params: SchemeParams) -> Result<Self> {
        let positive = |v: usize, what: &str| {
            if v == 0 {
                Err(Error::InvalidParameter(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match params {
            SchemeParams::Ofdm { n } | SchemeParams::Ocdm { n } => positive(n, "N")?,
            SchemeParams::Afdm { n, c1, c2 } => {
                positive(n, "N")?;
                if !(c1.is_finite() && c2.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "AFDM chirp rates must be finite".into(),
                    ));
                }
            }
            SchemeParams::Otfs { n_hat, m_hat } => {
                positive(n_hat, "grid N")?;
                positive(m_hat, "grid M")?;
            }
            SchemeParams::Oddm {
                n_hat,
                m_hat,
                pulse,
            } => {
                positive(n_hat, "grid N")?;
                positive(m_hat, "grid M")?;
                odss::check_rolloff(pulse.rolloff)?;
            }
            SchemeParams::Otsm { n_hat, m_hat } => {
                positive(m_hat, "grid M")?;
                if !n_hat.is_power_of_two() {
                    return Err(Error::NotPowerOfTwo(n_hat));
                }
            }
            SchemeParams::Odss {
                q,
                branches,
                rolloff,
            } => {
                MellinGrid::new(branches, q)?;
                odss::check_rolloff(rolloff)?;
            }
        }
        Ok(Self {
            params,
            prefix_len: 0,
            subcarrier_spacing: 1.0,
        })
    }

    pub fn ofdm(n: usize) -> Result<Self> {
        Self::new(SchemeParams::Ofdm { n })
    }

    pub fn ocdm(n: usize) -> Result<Self> {
        Self::new(SchemeParams::Ocdm { n })
    }

    pub fn afdm(n: usize, c1: f64, c2: f64) -> Result<Self> {
        Self::new(SchemeParams::Afdm { n, c1, c2 })
    }

    pub fn otfs(n_hat: usize, m_hat: usize) -> Result<Self> {
        Self::new(SchemeParams::Otfs { n_hat, m_hat })
    }

    pub fn oddm(n_hat: usize, m_hat: usize, pulse: PulseShape) -> Result<Self> {
        Self::new(SchemeParams::Oddm {
            n_hat,
            m_hat,
            pulse,
        })
    }

    pub fn otsm(n_hat: usize, m_hat: usize) -> Result<Self> {
        Self::new(SchemeParams::Otsm { n_hat, m_hat })
    }

    pub fn odss(q: f64, branches: usize) -> Result<Self> {
        Self::new(SchemeParams::Odss {
            q,
            branches,
            rolloff: ODSS_DEFAULT_ROLLOFF,
        })
    }

    pub fn with_prefix_len(mut self, len: usize) -> Self {
        self.prefix_len = len;
        self
    }

    pub fn with_subcarrier_spacing(mut self, hz: f64) -> Result<Self> {
        if !(hz > 0.0 && hz.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "subcarrier spacing {hz} must be positive"
            )));
        }
        self.subcarrier_spacing = hz;
        Ok(self)
    }

    pub fn kind(&self) -> SchemeKind {
        match self.params {
            SchemeParams::Ofdm { .. } => SchemeKind::Ofdm,
            SchemeParams::Ocdm { .. } => SchemeKind::Ocdm,
            SchemeParams::Afdm { .. } => SchemeKind::Afdm,
            SchemeParams::Otfs { .. } => SchemeKind::Otfs,
            SchemeParams::Oddm { .. } => SchemeKind::Oddm,
            SchemeParams::Otsm { .. } => SchemeKind::Otsm,
            SchemeParams::Odss { .. } => SchemeKind::Odss,
        }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    /// Symbols per frame.
    pub fn n_tot(&self) -> usize {
        match self.params {
            SchemeParams::Ofdm { n } | SchemeParams::Ocdm { n } | SchemeParams::Afdm { n, .. } => n,
            SchemeParams::Otfs { n_hat, m_hat }
            | SchemeParams::Oddm { n_hat, m_hat, .. }
            | SchemeParams::Otsm { n_hat, m_hat } => n_hat * m_hat,
            SchemeParams::Odss { q, branches, .. } => {
                MellinGrid::new(branches, q).map(|g| g.total()).unwrap_or(0)
            }
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    /// Sample rate implied by the subcarrier spacing: `N Δf` for the
    /// single-block schemes, `M̂ Δf` for the grid schemes and `M_tot Δf` for ODSS.
    pub fn sample_rate(&self) -> f64 {
        let carriers = match self.params {
            SchemeParams::Otfs { m_hat, .. }
            | SchemeParams::Oddm { m_hat, .. }
            | SchemeParams::Otsm { m_hat, .. } => m_hat,
            _ => self.n_tot(),
        };
        carriers as f64 * self.subcarrier_spacing
    }

    /// Chirp-periodic prefix for AFDM, cyclic prefix otherwise.
    pub fn prefix(&self) -> Prefix {
        match self.params {
            SchemeParams::Afdm { c1, .. } => Prefix::ChirpPeriodic {
                len: self.prefix_len,
                c1,
            },
            _ => Prefix::Cyclic(self.prefix_len),
        }
    }
}

impl fmt::Display for ModemScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.params {
            SchemeParams::Ofdm { n } | SchemeParams::Ocdm { n } => {
                write!(f, "{} N={n}", self.kind())
            }
            SchemeParams::Afdm { n, c1, c2 } => write!(f, "AFDM N={n} c1={c1} c2={c2}"),
            SchemeParams::Otfs { n_hat, m_hat } | SchemeParams::Otsm { n_hat, m_hat } => {
                write!(f, "{} N̂={n_hat} M̂={m_hat}", self.kind())
            }
            SchemeParams::Oddm {
                n_hat,
                m_hat,
                pulse,
            } => write!(
                f,
                "ODDM N̂={n_hat} M̂={m_hat} roll-off={} span={}",
                pulse.rolloff, pulse.span
            ),
            SchemeParams::Odss {
                q,
                branches,
                rolloff,
            } => {
                write!(f, "ODSS q={q} N̂={branches} roll-off={rolloff}")
            }
        }?;
        write!(f, " L_cp={}", self.prefix_len)
    }
}

/// Dense modulation matrix `A`; the transmitter sends `A^H x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationMatrix {
    a: CMatrix,
}

impl ModulationMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    /// `A^H`, whose columns are the transmit waveforms.
    pub fn synthesis(&self) -> CMatrix {
        self.a.adjoint()
    }

    /// `max |(A^H A - I)_{ij}|`.
    pub fn orthogonality_error(&self) -> f64 {
        self.a.adjoint().unitarity_error()
    }

    pub fn into_inner(self) -> CMatrix {
        self.a
    }
}

/// Builds `A` entry by entry from each scheme's defining formulas, without the
/// fast paths used by [`Modem`].
pub fn build_matrix(scheme: &ModemScheme) -> Result<ModulationMatrix> {
    let a = match scheme.params {
        SchemeParams::Ofdm { n } => dft_matrix(n),
        SchemeParams::Ocdm { n } => UnitaryKernel::new(n, KernelKind::Dfnt)?.matrix(),
        SchemeParams::Afdm { n, c1, c2 } => {
            UnitaryKernel::new(n, KernelKind::Daft { c1, c2 })?.matrix()
        }
        SchemeParams::Otfs { n_hat, m_hat } => otfs_synthesis_matrix(n_hat, m_hat)?.adjoint(),
        SchemeParams::Oddm {
            n_hat,
            m_hat,
            pulse,
        } => oddm_synthesis_matrix(n_hat, m_hat, pulse)?.adjoint(),
        SchemeParams::Otsm { n_hat, m_hat } => {
            let w = UnitaryKernel::new(n_hat, KernelKind::Wht)?.matrix();
            let n = n_hat * m_hat;
            let block = CMatrix::from_fn(n, n, |r, c| {
                if r / n_hat == c / n_hat {
                    w[(r % n_hat, c % n_hat)]
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let p = UnitaryKernel::new(n, KernelKind::Interleaver { m_hat, n_hat })?.matrix();
            block.matmul(&p.transpose())?
        }
        SchemeParams::Odss {
            q,
            branches,
            rolloff,
        } => {
            let grid = MellinGrid::new(branches, q)?;
            odss::pulse_matrix(&grid, rolloff)
                .matmul(&grid.forward_matrix())?
                .adjoint()
        }
    };
    Ok(ModulationMatrix { a })
}

/// Unitary ISFFT followed by a per-slot `M̂`-point IDFT (rectangular pulses).
fn otfs_synthesis_matrix(n_hat: usize, m_hat: usize) -> Result<CMatrix> {
    let n = n_hat * m_hat;
    let norm = 1.0 / (n as f64).sqrt();
    let isfft = CMatrix::from_fn(n, n, |r, c| {
        let (slot, m) = (r / m_hat, r % m_hat);
        let (k, l) = (c / m_hat, c % m_hat);
        let turns =
            ((slot * k) % n_hat) as f64 / n_hat as f64 - ((m * l) % m_hat) as f64 / m_hat as f64;
        let (s, co) = (2.0 * PI * turns).sin_cos();
        C64::new(co * norm, s * norm)
    });
    let idft = dft_matrix(m_hat).adjoint();
    let heisenberg = CMatrix::from_fn(n, n, |r, c| {
        if r / m_hat == c / m_hat {
            idft[(r % m_hat, c % m_hat)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    heisenberg.matmul(&isfft)
}

/// Column `k N̂ + l` is branch `k`'s `l`-th Doppler tone, placed at samples
/// `k + l̇ M̂` and circularly shaped by the sub-pulse.
fn oddm_synthesis_matrix(n_hat: usize, m_hat: usize, shape: PulseShape) -> Result<CMatrix> {
    let pulse = oddm_pulse(shape.rolloff, shape.span, n_hat, m_hat)?;
    let n = n_hat * m_hat;
    let mut s = CMatrix::zeros(n, n);
    for k in 0..m_hat {
        for l in 0..n_hat {
            let col = k * n_hat + l;
            for slot in 0..n_hat {
                let turns = ((slot * l) % n_hat) as f64 / n_hat as f64;
                let (sin, cos) = (2.0 * PI * turns).sin_cos();
                let tone = C64::new(cos, sin);
                for (i, &a) in pulse.a.taps.iter().enumerate() {
                    let t = (k + slot * m_hat) as isize + pulse.a.start + i as isize;
                    s[(t.rem_euclid(n as isize) as usize, col)] += tone * a;
                }
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone)]
enum Engine {
    Chirp(ChirpTransform),
    Otfs {
        n_hat: usize,
        m_hat: usize,
        plan: FftPlan,
    },
    Oddm {
        n_hat: usize,
        m_hat: usize,
        plan: FftPlan,
        pulse: SampledPulse,
    },
    Otsm {
        n_hat: usize,
        m_hat: usize,
    },
    Dense(CMatrix),
}

/// A ready-to-use transmitter/receiver pair for one scheme.
///
/// Construction plans the fast transforms and caches the `N_tot` transmit
/// waveforms for effective-channel construction. Immutable afterwards.
#[derive(Debug, Clone)]
pub struct Modem {
    scheme: ModemScheme,
    engine: Engine,
    waveforms: Vec<Vec<C64>>,
}

impl Modem {
    pub fn new(scheme: &ModemScheme) -> Result<Self> {
        let engine = match scheme.params {
            SchemeParams::Ofdm { n } => Engine::Chirp(ChirpTransform::dft(n)?),
            SchemeParams::Ocdm { n } => Engine::Chirp(ChirpTransform::dfnt(n)?),
            SchemeParams::Afdm { n, c1, c2 } => Engine::Chirp(ChirpTransform::daft(n, c1, c2)?),
            SchemeParams::Otfs { n_hat, m_hat } => Engine::Otfs {
                n_hat,
                m_hat,
                plan: FftPlan::new(n_hat)?,
            },
            SchemeParams::Oddm {
                n_hat,
                m_hat,
                pulse,
            } => Engine::Oddm {
                n_hat,
                m_hat,
                plan: FftPlan::new(n_hat)?,
                pulse: oddm_pulse(pulse.rolloff, pulse.span, n_hat, m_hat)?.a,
            },
            SchemeParams::Otsm { n_hat, m_hat } => Engine::Otsm { n_hat, m_hat },
            SchemeParams::Odss { .. } => Engine::Dense(build_matrix(scheme)?.into_inner()),
        };
        let mut modem = Self {
            scheme: scheme.clone(),
            engine,
            waveforms: Vec::new(),
        };
        let n = scheme.n_tot();
        let mut basis = vec![C64::new(0.0, 0.0); n];
        let mut waveforms = Vec::with_capacity(n);
        for j in 0..n {
            basis[j] = C64::new(1.0, 0.0);
            waveforms.push(modem.synthesize(&basis)?);
            basis[j] = C64::new(0.0, 0.0);
        }
        modem.waveforms = waveforms;
        Ok(modem)
    }

    pub fn scheme(&self) -> &ModemScheme {
        &self.scheme
    }

    pub fn n_tot(&self) -> usize {
        self.scheme.n_tot()
    }

    /// Prefix-free transmit samples `A^H x`.
    pub fn synthesize(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.n_tot(), x.len())?;
        match &self.engine {
            Engine::Chirp(t) => t.apply(x, Direction::Inverse),
            Engine::Otfs { n_hat, m_hat, plan } => {
                let (n_hat, m_hat) = (*n_hat, *m_hat);
                let mut s = vec![C64::new(0.0, 0.0); x.len()];
                let mut line = vec![C64::new(0.0, 0.0); n_hat];
                for delay in 0..m_hat {
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = x[k * m_hat + delay];
                    }
                    plan.process_unitary(&mut line, Direction::Inverse);
                    for (slot, v) in line.iter().enumerate() {
                        s[slot * m_hat + delay] = *v;
                    }
                }
                Ok(s)
            }
            Engine::Oddm {
                n_hat,
                m_hat,
                plan,
                pulse,
            } => {
                let (n_hat, m_hat) = (*n_hat, *m_hat);
                let n = x.len();
                let mut placed = vec![C64::new(0.0, 0.0); n];
                let mut line = vec![C64::new(0.0, 0.0); n_hat];
                for k in 0..m_hat {
                    line.copy_from_slice(&x[k * n_hat..(k + 1) * n_hat]);
                    plan.process(&mut line, Direction::Inverse);
                    for (slot, v) in line.iter().enumerate() {
                        placed[k + slot * m_hat] = *v;
                    }
                }
                let mut s = vec![C64::new(0.0, 0.0); n];
                for (p, &v) in placed.iter().enumerate() {
                    for (i, &a) in pulse.taps.iter().enumerate() {
                        let t = (p as isize + pulse.start + i as isize).rem_euclid(n as isize);
                        s[t as usize] += v * a;
                    }
                }
                Ok(s)
            }
            Engine::Otsm { n_hat, m_hat } => {
                let mut blocks = x.to_vec();
                for block in blocks.chunks_exact_mut(*n_hat) {
                    wht_in_place(block)?;
                }
                crate::transforms::interleave(&blocks, *m_hat, *n_hat, Direction::Forward)
            }
            Engine::Dense(a) => a.adjoint_mul_vec(x),
        }
    }

    /// Domain observation `A r` from prefix-free receive samples.
    pub fn analyze(&self, r: &[C64]) -> Result<Vec<C64>> {
        check_len(self.n_tot(), r.len())?;
        match &self.engine {
            Engine::Chirp(t) => t.apply(r, Direction::Forward),
            Engine::Otfs { n_hat, m_hat, plan } => {
                let (n_hat, m_hat) = (*n_hat, *m_hat);
                let mut y = vec![C64::new(0.0, 0.0); r.len()];
                let mut line = vec![C64::new(0.0, 0.0); n_hat];
                for delay in 0..m_hat {
                    for (slot, v) in line.iter_mut().enumerate() {
                        *v = r[slot * m_hat + delay];
                    }
                    plan.process_unitary(&mut line, Direction::Forward);
                    for (k, v) in line.iter().enumerate() {
                        y[k * m_hat + delay] = *v;
                    }
                }
                Ok(y)
            }
            Engine::Oddm {
                n_hat,
                m_hat,
                plan,
                pulse,
            } => {
                let (n_hat, m_hat) = (*n_hat, *m_hat);
                let n = r.len();
                let mut matched = vec![C64::new(0.0, 0.0); n];
                for (p, z) in matched.iter_mut().enumerate() {
                    for (i, &a) in pulse.taps.iter().enumerate() {
                        let t = (p as isize + pulse.start + i as isize).rem_euclid(n as isize);
                        *z += r[t as usize] * a;
                    }
                }
                let mut y = vec![C64::new(0.0, 0.0); n];
                for k in 0..m_hat {
                    let line = &mut y[k * n_hat..(k + 1) * n_hat];
                    for (slot, v) in line.iter_mut().enumerate() {
                        *v = matched[k + slot * m_hat];
                    }
                    plan.process(line, Direction::Forward);
                }
                Ok(y)
            }
            Engine::Otsm { n_hat, m_hat } => {
                let mut y = crate::transforms::interleave(r, *m_hat, *n_hat, Direction::Inverse)?;
                for block in y.chunks_exact_mut(*n_hat) {
                    wht_in_place(block)?;
                }
                Ok(y)
            }
            Engine::Dense(a) => a.mul_vec(r),
        }
    }

    /// Transmit frame: `A^H x` with the scheme's prefix prepended.
    pub fn modulate(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.scheme.prefix().prepend(&self.synthesize(x)?)
    }

    /// Strips the prefix from a received frame and applies `A`.
    pub fn demodulate(&self, r: &[C64]) -> Result<Vec<C64>> {
        check_len(self.n_tot() + self.scheme.prefix_len, r.len())?;
        self.analyze(self.scheme.prefix().strip(r)?)
    }

    /// `A^H` assembled from the cached transmit waveforms.
    pub fn synthesis_matrix(&self) -> CMatrix {
        let n = self.n_tot();
        CMatrix::from_fn(n, n, |r, c| self.waveforms[c][r])
    }

    /// `H_eff = A H A^H` for a post-prefix time-domain channel matrix `H`.
    pub fn effective_channel(&self, h: &CMatrix) -> Result<CMatrix> {
        let n = self.n_tot();
        if h.rows() != n || h.cols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: if h.rows() != n { h.rows() } else { h.cols() },
            });
        }
        let sparse: Vec<Vec<(usize, C64)>> = (0..n)
            .map(|r| {
                h.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect();
        let mut h_eff = CMatrix::zeros(n, n);
        let mut faded = vec![C64::new(0.0, 0.0); n];
        for (j, wave) in self.waveforms.iter().enumerate() {
            for (out, row) in faded.iter_mut().zip(&sparse) {
                *out = row.iter().map(|&(c, v)| v * wave[c]).sum();
            }
            h_eff.set_column(j, &self.analyze(&faded)?);
        }
        Ok(h_eff)
    }
}

/// One-shot [`Modem::modulate`].
pub fn modulate(scheme: &ModemScheme, x: &[C64]) -> Result<Vec<C64>> {
    Modem::new(scheme)?.modulate(x)
}

/// One-shot [`Modem::demodulate`].
pub fn demodulate(scheme: &ModemScheme, r: &[C64]) -> Result<Vec<C64>> {
    Modem::new(scheme)?.demodulate(r)
}

/// One-shot [`Modem::effective_channel`].
pub fn effective_channel(scheme: &ModemScheme, h: &CMatrix) -> Result<CMatrix> {
    Modem::new(scheme)?.effective_channel(h)
}

/// Names and default parameters, one line per kind.
pub fn describe_kinds() -> Vec<String> {
    SchemeKind::ALL
        .iter()
        .map(|k| {
            let detail = match k {
                SchemeKind::Ofdm => "N-point DFT, cyclic prefix",
                SchemeKind::Ocdm => "N-point discrete Fresnel transform, cyclic prefix",
                SchemeKind::Afdm => {
                    "N-point DAFT, chirp-periodic prefix; c1 from nu_max, c2 = 1/(2 pi N^2)"
                }
                SchemeKind::Otfs => "N̂ x M̂ ISFFT + rectangular Heisenberg, one frame prefix",
                SchemeKind::Oddm => "N̂ x M̂ staggered multitone, RRC roll-off 1e-4 span 4",
                SchemeKind::Otsm => "N̂ x M̂ Walsh-Hadamard + interleaver, one frame prefix",
                SchemeKind::Odss => {
                    "Mellin grid q = 2, N̂ = 3, RRC roll-off 0.25 (not benchmarked by default)"
                }
            };
            format!("{:<5} {detail}", k.name())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{time_matrix, ChannelRealization, PathParams};

    fn ramp(n: usize) -> Vec<C64> {
        (0..n)
            .map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect()
    }

    fn all_schemes() -> Vec<ModemScheme> {
        vec![
            ModemScheme::ofdm(16).unwrap(),
            ModemScheme::ocdm(16).unwrap(),
            ModemScheme::afdm(16, 3.0 / 32.0, 0.01).unwrap(),
            ModemScheme::otfs(4, 4).unwrap(),
            ModemScheme::oddm(4, 4, PulseShape::default()).unwrap(),
            ModemScheme::otsm(4, 4).unwrap(),
            ModemScheme::odss(2.0, 3).unwrap(),
        ]
    }

    #[test]
    fn ofdm_first_waveform_is_flat() {
        let a = build_matrix(&ModemScheme::ofdm(4).unwrap()).unwrap();
        let s = a.synthesis().column(0);
        assert!(s.iter().all(|v| (v - C64::new(0.5, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn afdm_without_chirps_is_ofdm() {
        let afdm = build_matrix(&ModemScheme::afdm(16, 0.0, 0.0).unwrap()).unwrap();
        let ofdm = build_matrix(&ModemScheme::ofdm(16).unwrap()).unwrap();
        assert_eq!(afdm.matrix().max_abs_diff(ofdm.matrix()), 0.0);
    }

    #[test]
    fn fast_paths_match_dense_matrices() {
        for scheme in all_schemes() {
            let dense = build_matrix(&scheme).unwrap();
            let modem = Modem::new(&scheme).unwrap();
            let diff = modem.synthesis_matrix().max_abs_diff(&dense.synthesis());
            assert!(diff < 1e-12, "{scheme}: {diff}");
            let r = ramp(scheme.n_tot());
            let y = modem.analyze(&r).unwrap();
            let want = dense.matrix().mul_vec(&r).unwrap();
            let err = y
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "{scheme}: {err}");
        }
    }

    #[test]
    fn prefix_copies_the_body_tail() {
        for scheme in all_schemes() {
            let scheme = scheme.with_prefix_len(2);
            if scheme.kind() == SchemeKind::Afdm {
                continue;
            }
            let frame = modulate(&scheme, &ramp(scheme.n_tot())).unwrap();
            let n = frame.len();
            assert_eq!(frame.len(), scheme.n_tot() + 2);
            assert_eq!(&frame[..2], &frame[n - 2..]);
        }
    }

    #[test]
    fn afdm_prefix_is_cyclic_for_integer_2nc1() {
        let scheme = ModemScheme::afdm(16, 3.0 / 32.0, 0.013)
            .unwrap()
            .with_prefix_len(3);
        let frame = modulate(&scheme, &ramp(16)).unwrap();
        for i in 0..3 {
            assert!((frame[i] - frame[16 + i]).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_round_trip() {
        for scheme in all_schemes() {
            if !scheme.kind().is_unitary() {
                continue;
            }
            let scheme = scheme.with_prefix_len(3);
            let x = ramp(scheme.n_tot());
            let y = demodulate(&scheme, &modulate(&scheme, &x).unwrap()).unwrap();
            let err = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "{scheme}: {err}");
        }
    }

    #[test]
    fn effective_channel_matches_dense_product() {
        let ch = ChannelRealization::new(
            vec![
                PathParams {
                    gain: C64::new(0.5, 0.2),
                    delay_tap: 0,
                    doppler_hz: 0.3,
                },
                PathParams {
                    gain: C64::new(-0.1, 0.6),
                    delay_tap: 2,
                    doppler_hz: -0.45,
                },
            ],
            16.0,
        )
        .unwrap();
        for scheme in all_schemes() {
            let scheme = scheme.with_prefix_len(2);
            let n = scheme.n_tot();
            let h = time_matrix(&ch, n, scheme.prefix()).unwrap();
            let a = build_matrix(&scheme).unwrap();
            let want = a
                .matrix()
                .matmul(&h)
                .unwrap()
                .matmul(&a.synthesis())
                .unwrap();
            let got = effective_channel(&scheme, &h).unwrap();
            assert!(got.max_abs_diff(&want) < 1e-12, "{scheme}");
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let modem = Modem::new(&ModemScheme::ofdm(8).unwrap().with_prefix_len(2)).unwrap();
        assert!(modem.modulate(&ramp(7)).is_err());
        assert!(modem.demodulate(&ramp(8)).is_err());
        assert!(modem.effective_channel(&CMatrix::identity(7)).is_err());
    }

    #[test]
    fn scheme_validation() {
        assert!(ModemScheme::otsm(3, 4).is_err());
        assert!(ModemScheme::ofdm(0).is_err());
        assert!(ModemScheme::odss(1.0, 3).is_err());
        assert!(ModemScheme::oddm(
            2,
            2,
            PulseShape {
                rolloff: 2.0,
                span: 1
            }
        )
        .is_err());
        assert_eq!(ModemScheme::odss(2.0, 3).unwrap().n_tot(), 7);
        assert_eq!("otsm".parse::<SchemeKind>().unwrap(), SchemeKind::Otsm);
        assert!("qam".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn default_afdm_chirps_for_reference_setup() {
        let (c1, c2) = afdm_default_chirps(256, 4000.0, 512_000.0);
        assert_eq!(c1, 5.0 / 512.0);
        assert!((c2 - 1.0 / (2.0 * PI * 65536.0)).abs() < 1e-18);
    }
}
