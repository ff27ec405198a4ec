//! Sweep configuration: flat `key = value` lines, `#` starts a comment.
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `schemes` | comma list of OFDM, OCDM, AFDM, OTFS, ODDM, OTSM, ODSS | `OFDM, OCDM, AFDM, OTFS, OTSM` |
//! | `snr_db` | comma list of SNR points in dB | `0, 5, 10, 15, 20` |
//! | `trials` | channel realizations per point | 2000 |
//! | `seed` | master seed | 0 |
//! | `N` | symbols per frame | 256 |
//! | `grid_n`, `grid_m` | N̂ (time slots / Doppler bins) and M̂ (subcarriers / delay bins) | 16, 16 |
//! | `delta_f_hz` | OFDM subcarrier spacing; the sample rate is `N * delta_f_hz` | 2000 |
//! | `p_paths` | paths per channel | 3 |
//! | `l_max` | maximum path delay in samples | 2 |
//! | `nu_max_hz` | maximum Doppler shift | 4000 |
//! | `doppler_mode` | `continuous` or `grid` | `continuous` |
//! | `qam_order` | 4, 16 or 64 | 4 |
//! | `afdm_c1`, `afdm_c2` | AFDM chirp rates | derived from `nu_max_hz` |
//! | `oddm_rolloff`, `oddm_span` | ODDM sub-pulse | 1e-4, 4 |
//! | `odss_q`, `odss_n` | ODSS scale ratio and branch count | 2, 3 |
//! | `paired_channels` | every scheme sees the same channel, bits and noise | `true` |
//! | `workers` | worker threads | available parallelism |
//! | `prefix_len` | prefix length in samples, at least `l_max` | `l_max` |

use std::path::Path;

use wavebench_core::channel::{ChannelConfig, DopplerMode};
use wavebench_core::detection::Constellation;
use wavebench_core::modems::{
    afdm_default_chirps, ModemScheme, PulseShape, SchemeKind, SchemeParams,
};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DopplerSampling {
    Continuous,
    /// Integer multiples of `sample_rate / N`.
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub schemes: Vec<SchemeKind>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub n: usize,
    pub grid_n: usize,
    pub grid_m: usize,
    pub delta_f_hz: f64,
    pub p_paths: usize,
    pub l_max: usize,
    pub nu_max_hz: f64,
    pub doppler_mode: DopplerSampling,
    pub qam_order: usize,
    pub afdm_c1: Option<f64>,
    pub afdm_c2: Option<f64>,
    pub oddm_rolloff: f64,
    pub oddm_span: usize,
    pub odss_q: f64,
    pub odss_n: usize,
    pub paired_channels: bool,
    pub workers: usize,
    pub prefix_len: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let oddm = PulseShape::default();
        Self {
            schemes: vec![
                SchemeKind::Ofdm,
                SchemeKind::Ocdm,
                SchemeKind::Afdm,
                SchemeKind::Otfs,
                SchemeKind::Otsm,
            ],
            snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 2000,
            seed: 0,
            n: 256,
            grid_n: 16,
            grid_m: 16,
            delta_f_hz: 2000.0,
            p_paths: 3,
            l_max: 2,
            nu_max_hz: 4000.0,
            doppler_mode: DopplerSampling::Continuous,
            qam_order: 4,
            afdm_c1: None,
            afdm_c2: None,
            oddm_rolloff: oddm.rolloff,
            oddm_span: oddm.span,
            odss_q: 2.0,
            odss_n: 3,
            paired_channels: true,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            prefix_len: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse {key} = {value:?}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse_value(key, v))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("{key} expects true or false, got {value:?}")),
    }
}

impl SweepConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses config text over the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |message: String| BenchError::Config {
                line: Some(line_no),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at_line(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(at_line(format!("duplicate key {key}")));
            }
            seen.push(key.to_string());
            cfg.set(key, value).map_err(at_line)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(|v| v.parse::<SchemeKind>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?
            }
            "snr_db" => self.snr_db = parse_list(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "N" => self.n = parse_value(key, value)?,
            "grid_n" => self.grid_n = parse_value(key, value)?,
            "grid_m" => self.grid_m = parse_value(key, value)?,
            "delta_f_hz" => self.delta_f_hz = parse_value(key, value)?,
            "p_paths" => self.p_paths = parse_value(key, value)?,
            "l_max" => self.l_max = parse_value(key, value)?,
            "nu_max_hz" => self.nu_max_hz = parse_value(key, value)?,
            "doppler_mode" => {
                self.doppler_mode = match value.to_ascii_lowercase().as_str() {
                    "continuous" => DopplerSampling::Continuous,
                    "grid" | "on_grid" | "integer" => DopplerSampling::Grid,
                    _ => {
                        return Err(format!(
                            "doppler_mode must be continuous or grid, got {value:?}"
                        ))
                    }
                }
            }
            "qam_order" => self.qam_order = parse_value(key, value)?,
            "afdm_c1" => self.afdm_c1 = Some(parse_value(key, value)?),
            "afdm_c2" => self.afdm_c2 = Some(parse_value(key, value)?),
            "oddm_rolloff" => self.oddm_rolloff = parse_value(key, value)?,
            "oddm_span" => self.oddm_span = parse_value(key, value)?,
            "odss_q" => self.odss_q = parse_value(key, value)?,
            "odss_n" => self.odss_n = parse_value(key, value)?,
            "paired_channels" => self.paired_channels = parse_bool(key, value)?,
            "workers" => self.workers = parse_value(key, value)?,
            "prefix_len" => self.prefix_len = Some(parse_value(key, value)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: String| Err(BenchError::config(m));
        if self.schemes.is_empty() {
            return fail("schemes must not be empty".into());
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return fail("snr_db needs at least one finite value".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        if !(self.delta_f_hz > 0.0 && self.delta_f_hz.is_finite()) {
            return fail("delta_f_hz must be positive".into());
        }
        if self.prefix_len() < self.l_max {
            return fail(format!(
                "prefix_len {} is shorter than l_max {}",
                self.prefix_len(),
                self.l_max
            ));
        }
        self.constellation()?;
        self.channel_config().validate()?;
        let schemes = self.modem_schemes()?;
        for s in &schemes {
            if s.n_tot() != self.n {
                return fail(format!(
                    "{} carries {} symbols per frame but N = {}; all schemes must occupy the same resources",
                    s.kind(),
                    s.n_tot(),
                    self.n
                ));
            }
            if self.prefix_len() > s.n_tot() {
                return fail(format!(
                    "prefix_len {} exceeds the frame length",
                    self.prefix_len()
                ));
            }
        }
        Ok(())
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len.unwrap_or(self.l_max)
    }

    /// `N * delta_f_hz`.
    pub fn sample_rate(&self) -> f64 {
        self.n as f64 * self.delta_f_hz
    }

    pub fn channel_config(&self) -> ChannelConfig {
        ChannelConfig {
            paths: self.p_paths,
            max_delay: self.l_max,
            max_doppler_hz: self.nu_max_hz,
            doppler_mode: match self.doppler_mode {
                DopplerSampling::Continuous => DopplerMode::Continuous,
                DopplerSampling::Grid => DopplerMode::OnGrid { frame_len: self.n },
            },
            sample_rate: self.sample_rate(),
        }
    }

    pub fn constellation(&self) -> Result<Constellation, BenchError> {
        Constellation::new(self.qam_order).map_err(|e| BenchError::config(e.to_string()))
    }

    /// One modem per configured kind, sharing the sample rate `N * delta_f_hz`.
    pub fn modem_schemes(&self) -> Result<Vec<ModemScheme>, BenchError> {
        let fs = self.sample_rate();
        let (c1, c2) = afdm_default_chirps(self.n, self.nu_max_hz, fs);
        self.schemes
            .iter()
            .map(|kind| {
                let params = match kind {
                    SchemeKind::Ofdm => SchemeParams::Ofdm { n: self.n },
                    SchemeKind::Ocdm => SchemeParams::Ocdm { n: self.n },
                    SchemeKind::Afdm => SchemeParams::Afdm {
                        n: self.n,
                        c1: self.afdm_c1.unwrap_or(c1),
                        c2: self.afdm_c2.unwrap_or(c2),
                    },
                    SchemeKind::Otfs => SchemeParams::Otfs {
                        n_hat: self.grid_n,
                        m_hat: self.grid_m,
                    },
                    SchemeKind::Oddm => SchemeParams::Oddm {
                        n_hat: self.grid_n,
                        m_hat: self.grid_m,
                        pulse: PulseShape {
                            rolloff: self.oddm_rolloff,
                            span: self.oddm_span,
                        },
                    },
                    SchemeKind::Otsm => SchemeParams::Otsm {
                        n_hat: self.grid_n,
                        m_hat: self.grid_m,
                    },
                    SchemeKind::Odss => SchemeParams::Odss {
                        q: self.odss_q,
                        branches: self.odss_n,
                        rolloff: wavebench_core::modems::ODSS_DEFAULT_ROLLOFF,
                    },
                };
                let scheme = ModemScheme::new(params)
                    .map_err(|e| BenchError::config(format!("{kind}: {e}")))?
                    .with_prefix_len(self.prefix_len());
                let spacing = fs
                    / match kind {
                        SchemeKind::Otfs | SchemeKind::Oddm | SchemeKind::Otsm => self.grid_m,
                        _ => scheme.n_tot().max(1),
                    } as f64;
                scheme
                    .with_subcarrier_spacing(spacing)
                    .map_err(|e| BenchError::config(format!("{kind}: {e}")))
            })
            .collect()
    }
}

/// `sigma^2 = 10^(-snr_db / 10)` for unit-energy symbols.
pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}
