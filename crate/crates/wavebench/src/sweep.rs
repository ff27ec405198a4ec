use rand::Rng;
use rayon::prelude::*;
use wavebench_core::channel::{
    add_noise, apply_channel, sample_channel, time_matrix, ChannelConfig,
};
use wavebench_core::detection::{ber_count, detect, qam_map, Constellation};
use wavebench_core::modems::Modem;
use wavebench_core::Error;

use crate::config::noise_variance;
use crate::stream::derive_trial_stream;
use crate::{BenchError, SweepConfig};

/// Aggregated result for one `(scheme, snr)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: String,
    pub snr_db: f64,
    pub trials: usize,
    pub bit_errors: u64,
    pub total_bits: u64,
    pub ber: f64,
    pub master_seed: u64,
}

/// Trials whose detector hit a numerically singular system. Their bits are
/// all counted as errors in the matching [`BerRecord`].
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionFailures {
    pub scheme: String,
    pub snr_db: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// Sorted by scheme order in the config, then by ascending SNR.
    pub records: Vec<BerRecord>,
    /// Only points with at least one failure.
    pub detection_failures: Vec<DetectionFailures>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub bit_errors: u64,
    pub total_bits: u64,
    pub detection_failed: bool,
}

/// One frame through the link: channel, bits, map, modulate, channel, noise,
/// demodulate, effective channel, MMSE, demap, count.
///
/// Draws come from `rng` in a fixed order: channel, then bits, then noise.
pub fn run_trial<R: Rng + ?Sized>(
    modem: &Modem,
    channel: &ChannelConfig,
    constellation: &Constellation,
    sigma2: f64,
    rng: &mut R,
) -> Result<TrialOutcome, Error> {
    let ch = sample_channel(channel, rng)?;
    let n_bits = modem.n_tot() * constellation.bits_per_symbol();
    let bits: Vec<u8> = (0..n_bits).map(|_| rng.random_range(0..=1u8)).collect();
    let x = qam_map(&bits, constellation)?;
    let received = add_noise(&apply_channel(&ch, &modem.modulate(&x)?), sigma2, rng)?;
    let y = modem.demodulate(&received)?;
    let h = time_matrix(&ch, modem.n_tot(), modem.scheme().prefix())?;
    let h_eff = modem.effective_channel(&h)?;
    tally(
        &bits,
        detect(&h_eff, &y, sigma2, constellation).map(|out| out.bits),
    )
}

/// Scores one detection. A singular system counts every bit as an error.
fn tally(bits: &[u8], detected: Result<Vec<u8>, Error>) -> Result<TrialOutcome, Error> {
    match detected {
        Ok(rx) => {
            let (bit_errors, total) = ber_count(bits, &rx)?;
            Ok(TrialOutcome {
                bit_errors: bit_errors as u64,
                total_bits: total as u64,
                detection_failed: false,
            })
        }
        Err(Error::Singular) => Ok(TrialOutcome {
            bit_errors: bits.len() as u64,
            total_bits: bits.len() as u64,
            detection_failed: true,
        }),
        Err(e) => Err(e),
    }
}

/// Runs every `(scheme, snr, trial)` cell on a pool of `cfg.workers` threads.
///
/// Each cell draws from its own [`derive_trial_stream`], and per-point sums are
/// reduced in trial order, so the output does not depend on the worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, BenchError> {
    cfg.validate()?;
    let schemes = cfg.modem_schemes()?;
    let modems = schemes
        .iter()
        .map(Modem::new)
        .collect::<Result<Vec<_>, _>>()?;
    let constellation = cfg.constellation()?;
    let channel = cfg.channel_config();
    let mut snr_order: Vec<usize> = (0..cfg.snr_db.len()).collect();
    snr_order.sort_by(|&a, &b| cfg.snr_db[a].total_cmp(&cfg.snr_db[b]));

    let cells: Vec<(usize, usize, usize)> = (0..modems.len())
        .flat_map(|s| {
            snr_order
                .iter()
                .flat_map(move |&p| (0..cfg.trials).map(move |t| (s, p, t)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| BenchError::config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    log::info!(
        "{} schemes x {} SNR points x {} trials on {} workers",
        modems.len(),
        cfg.snr_db.len(),
        cfg.trials,
        cfg.workers
    );
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(s, p, t)| {
                let stream_scheme = if cfg.paired_channels { None } else { Some(s) };
                let mut rng = derive_trial_stream(cfg.seed, stream_scheme, p, t);
                run_trial(
                    &modems[s],
                    &channel,
                    &constellation,
                    noise_variance(cfg.snr_db[p]),
                    &mut rng,
                )
            })
            .collect::<Result<_, _>>()
    })?;

    let mut records = Vec::new();
    let mut detection_failures = Vec::new();
    for (chunk, &(s, p, _)) in outcomes
        .chunks(cfg.trials)
        .zip(cells.iter().step_by(cfg.trials))
    {
        let (mut bit_errors, mut total_bits, mut failures) = (0u64, 0u64, 0usize);
        for o in chunk {
            bit_errors += o.bit_errors;
            total_bits += o.total_bits;
            failures += o.detection_failed as usize;
        }
        let scheme = schemes[s].kind().name().to_string();
        let snr_db = cfg.snr_db[p];
        log::info!("{scheme} @ {snr_db} dB: {bit_errors}/{total_bits}");
        if failures > 0 {
            log::warn!("{scheme} @ {snr_db} dB: {failures} singular detections counted as all-error frames");
            detection_failures.push(DetectionFailures {
                scheme: scheme.clone(),
                snr_db,
                failures,
            });
        }
        records.push(BerRecord {
            scheme,
            snr_db,
            trials: cfg.trials,
            bit_errors,
            total_bits,
            ber: bit_errors as f64 / total_bits as f64,
            master_seed: cfg.seed,
        });
    }
    Ok(SweepOutcome {
        records,
        detection_failures,
    })
}
