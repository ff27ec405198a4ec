use rand::Rng;
use wavebench::report::{plot_floor, read_csv, render_svg};
use wavebench::{derive_trial_stream, emit_csv, run_sweep, BerRecord, SweepConfig};
use wavebench_core::channel::sample_channel;

fn config(text: &str) -> SweepConfig {
    SweepConfig::parse(text).unwrap()
}

fn csv_bytes(records: &[BerRecord]) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ber.csv");
    emit_csv(records, &path).unwrap();
    std::fs::read(path).unwrap()
}

#[test]
fn output_is_identical_across_worker_counts() {
    let base = "schemes = OFDM, OCDM, AFDM, OTFS, ODDM, OTSM\nN = 64\ngrid_n = 4\ngrid_m = 16\nsnr_db = 5, 15\ntrials = 3\nseed = 2024\n";
    let reference = csv_bytes(
        &run_sweep(&config(&format!("{base}workers = 1")))
            .unwrap()
            .records,
    );
    for workers in [2, 8] {
        let out = run_sweep(&config(&format!("{base}workers = {workers}"))).unwrap();
        assert_eq!(csv_bytes(&out.records), reference, "workers = {workers}");
    }
}

#[test]
fn single_trial_csv_is_reproducible() {
    let cfg = config("N = 16\ngrid_n = 4\ngrid_m = 4\ntrials = 1\nseed = 7\nworkers = 1");
    let a = csv_bytes(&run_sweep(&cfg).unwrap().records);
    let b = csv_bytes(&run_sweep(&cfg).unwrap().records);
    assert_eq!(a, b);
    let mut eight = cfg.clone();
    eight.workers = 8;
    assert_eq!(csv_bytes(&run_sweep(&eight).unwrap().records), a);
}

#[test]
fn near_noiseless_identity_channel_has_zero_ber() {
    let cfg = config(
        "schemes = OFDM, OCDM, AFDM, OTFS, ODDM, OTSM\nN = 64\ngrid_n = 4\ngrid_m = 16\np_paths = 1\nl_max = 0\nnu_max_hz = 0\nsnr_db = 300\ntrials = 4\nqam_order = 16",
    );
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.records.len(), 6);
    for r in &out.records {
        assert_eq!(r.bit_errors, 0, "{}", r.scheme);
        assert_eq!(r.total_bits, 4 * 64 * 4);
    }
    assert!(out.detection_failures.is_empty());

    let odss = config(
        "schemes = ODSS\nN = 7\np_paths = 1\nl_max = 0\nnu_max_hz = 0\nsnr_db = 300\ntrials = 4",
    );
    assert_eq!(run_sweep(&odss).unwrap().records[0].bit_errors, 0);
}

#[test]
fn paired_mode_shares_channel_draws_across_schemes() {
    let cfg = config("N = 64\ngrid_n = 8\ngrid_m = 8");
    let channel = cfg.channel_config();
    for (snr, trial) in [(0, 0), (3, 17), (4, 1999)] {
        let a = sample_channel(&channel, &mut derive_trial_stream(1, None, snr, trial)).unwrap();
        let b = sample_channel(&channel, &mut derive_trial_stream(1, None, snr, trial)).unwrap();
        assert_eq!(a, b);
        let own =
            sample_channel(&channel, &mut derive_trial_stream(1, Some(2), snr, trial)).unwrap();
        assert_ne!(a, own);
    }
}

#[test]
fn paired_mode_changes_results_only_through_the_modem() {
    let base = "schemes = OFDM, OFDM\nN = 16\ngrid_n = 4\ngrid_m = 4\nsnr_db = 0\ntrials = 20\nworkers = 1\n";
    let paired = run_sweep(&config(&format!("{base}paired_channels = true"))).unwrap();
    assert_eq!(paired.records[0], paired.records[1]);
    let unpaired = run_sweep(&config(&format!("{base}paired_channels = false"))).unwrap();
    assert_ne!(
        unpaired.records[0].bit_errors,
        unpaired.records[1].bit_errors
    );
}

#[test]
fn streams_are_distinct_in_the_first_hundred_draws() {
    let draws = |t: usize| -> Vec<u64> {
        let mut r = derive_trial_stream(42, Some(1), 2, t);
        (0..100).map(|_| r.random()).collect()
    };
    assert_eq!(draws(5), draws(5));
    let (a, b) = (draws(5), draws(6));
    assert!(a.iter().zip(&b).all(|(x, y)| x != y));
}

#[test]
fn csv_round_trip_and_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_csv(&[], &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "scheme,snr_db,trials,bit_errors,total_bits,ber,master_seed\n"
    );
    let record = BerRecord {
        scheme: "AFDM".into(),
        snr_db: 12.5,
        trials: 3,
        bit_errors: 7,
        total_bits: 1536,
        ber: 7.0 / 1536.0,
        master_seed: u64::MAX,
    };
    let path = dir.path().join("one.csv");
    emit_csv(std::slice::from_ref(&record), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "AFDM,12.5,3,7,1536,4.55729e-3,18446744073709551615"
    );
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), 1);
    assert_eq!(back[0].scheme, "AFDM");
    assert_eq!(back[0].bit_errors, 7);
    assert!((back[0].ber - record.ber).abs() < 1e-8);

    let err = emit_csv(&[], dir.path().join("no/such/dir.csv")).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("no/such/dir.csv"));
}

#[test]
fn totals_and_ber_are_consistent() {
    let cfg =
        config("N = 16\ngrid_n = 4\ngrid_m = 4\nsnr_db = 0, 10, 20\ntrials = 5\nqam_order = 64");
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.records.len(), 15);
    let order: Vec<&str> = cfg.schemes.iter().map(|k| k.name()).collect();
    for (i, r) in out.records.iter().enumerate() {
        assert_eq!(r.scheme, order[i / 3]);
        assert_eq!(r.total_bits, 5 * 16 * 6);
        assert_eq!(r.ber, r.bit_errors as f64 / r.total_bits as f64);
        assert!((0.0..=1.0).contains(&r.ber));
    }
    let svg = render_svg(&out.records).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
    for r in &out.records {
        assert!(plot_floor(r) > 0.0);
    }
}
