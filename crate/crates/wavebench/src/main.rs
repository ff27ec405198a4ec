use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavebench::{emit_csv, emit_plot, run_sweep, BenchError, SweepConfig};

#[derive(Parser)]
#[command(
    name = "wavebench",
    version,
    about = "BER sweeps for multicarrier waveforms over doubly selective channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for ber.csv and ber.svg.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write an SVG chart.
        #[arg(long)]
        plot: bool,
    },
    /// List the supported waveforms and the sweep defaults.
    Schemes,
}

fn run(
    config: &Path,
    out: &Path,
    workers: Option<usize>,
    seed: Option<u64>,
    plot: bool,
) -> Result<(), BenchError> {
    let mut cfg = SweepConfig::from_file(config)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(|e| BenchError::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    let outcome = run_sweep(&cfg)?;
    for f in &outcome.detection_failures {
        eprintln!(
            "warning: {} @ {} dB: {} singular detections counted as all-error frames",
            f.scheme, f.snr_db, f.failures
        );
    }
    let csv = out.join("ber.csv");
    emit_csv(&outcome.records, &csv)?;
    println!("{}", csv.display());
    if plot {
        let svg = out.join("ber.svg");
        emit_plot(&outcome.records, &svg)?;
        println!("{}", svg.display());
    }
    Ok(())
}

fn schemes() {
    println!("waveforms:");
    for line in wavebench_core::modems::describe_kinds() {
        println!("  {line}");
    }
    let d = SweepConfig::default();
    let names: Vec<&str> = d.schemes.iter().map(|k| k.name()).collect();
    println!("defaults:");
    println!("  schemes = {}", names.join(", "));
    println!(
        "  snr_db = {}",
        d.snr_db
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("  trials = {}", d.trials);
    println!(
        "  N = {}, grid_n = {}, grid_m = {}",
        d.n, d.grid_n, d.grid_m
    );
    println!(
        "  delta_f_hz = {}, p_paths = {}, l_max = {}, nu_max_hz = {}",
        d.delta_f_hz, d.p_paths, d.l_max, d.nu_max_hz
    );
    println!(
        "  qam_order = {}, paired_channels = {}",
        d.qam_order, d.paired_channels
    );
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WAVEBENCH_LOG", "warn")).init();
    match Cli::parse().command {
        Command::Schemes => {
            schemes();
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            out,
            workers,
            seed,
            plot,
        } => match run(&config, &out, workers, seed, plot) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
