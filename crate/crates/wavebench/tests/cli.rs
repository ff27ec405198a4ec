use std::path::Path;
use std::process::Command;

fn wavebench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavebench"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("sweep.conf");
    std::fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = "\
# tiny sweep
schemes = OFDM, AFDM, OTSM
N = 16
grid_n = 4
grid_m = 4
snr_db = 0, 10
trials = 2
seed = 5
";

#[test]
fn run_writes_csv_and_plot_and_prints_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let output = wavebench()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--workers", "2", "--plot"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    let csv = out.join("ber.csv");
    let svg = out.join("ber.svg");
    assert!(stdout.contains(&csv.display().to_string()));
    assert!(stdout.contains(&svg.display().to_string()));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,snr_db,trials,bit_errors,total_bits,ber,master_seed"
    );
    assert_eq!(lines.len(), 1 + 3 * 2);
    assert!(lines[1].starts_with("OFDM,0,2,"));
    assert!(lines[6].starts_with("OTSM,10,2,"));
    assert_eq!(
        std::fs::read_to_string(&svg)
            .unwrap()
            .matches("<polyline")
            .count(),
        3
    );
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let run = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        let status = wavebench()
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .args(["--seed", seed])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read_to_string(out.join("ber.csv")).unwrap()
    };
    let a = run("99", "a");
    assert!(a.lines().skip(1).all(|l| l.ends_with(",99")));
    assert_eq!(a, run("99", "b"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "trials = 3\nqam_order = 8\n");
    let output = wavebench()
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let cfg = write_config(dir.path(), "colour = blue\n");
    let output = wavebench()
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 1"));
}

#[test]
fn io_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let output = wavebench()
        .args(["run", "--config"])
        .arg(dir.path().join("missing.conf"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));

    let cfg = write_config(dir.path(), SMALL);
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let output = wavebench()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn schemes_lists_every_kind() {
    let output = wavebench().arg("schemes").output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    for name in ["OFDM", "OCDM", "AFDM", "OTFS", "ODDM", "OTSM", "ODSS"] {
        assert!(text.contains(name), "{name}");
    }
    assert!(text.contains("trials = 2000"));
}
