//! CSV and SVG output.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use crate::{BenchError, BerRecord};

pub const CSV_HEADER: [&str; 7] = [
    "scheme",
    "snr_db",
    "trials",
    "bit_errors",
    "total_bits",
    "ber",
    "master_seed",
];

/// BER with six significant digits.
pub fn format_ber(ber: f64) -> String {
    format!("{ber:.5e}")
}

/// Writes the header and one row per record, in the given order.
pub fn emit_csv(records: &[BerRecord], path: impl AsRef<Path>) -> Result<(), BenchError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| BenchError::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_HEADER).map_err(|e| io(e.into()))?;
    for r in records {
        w.write_record([
            r.scheme.clone(),
            r.snr_db.to_string(),
            r.trials.to_string(),
            r.bit_errors.to_string(),
            r.total_bits.to_string(),
            format_ber(r.ber),
            r.master_seed.to_string(),
        ])
        .map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

/// Reads a file written by [`emit_csv`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BerRecord>, BenchError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| BenchError::io(path, e);
    let bad = |what: &str| {
        io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("malformed {what}"),
        ))
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| io(e.into()))?;
    let header = reader.headers().map_err(|e| io(e.into()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(bad("header"));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| io(e.into()))?;
        let field = |i: usize| row.get(i).ok_or_else(|| bad(CSV_HEADER[i]));
        out.push(BerRecord {
            scheme: field(0)?.to_string(),
            snr_db: field(1)?.parse().map_err(|_| bad("snr_db"))?,
            trials: field(2)?.parse().map_err(|_| bad("trials"))?,
            bit_errors: field(3)?.parse().map_err(|_| bad("bit_errors"))?,
            total_bits: field(4)?.parse().map_err(|_| bad("total_bits"))?,
            ber: field(5)?.parse().map_err(|_| bad("ber"))?,
            master_seed: field(6)?.parse().map_err(|_| bad("master_seed"))?,
        });
    }
    Ok(out)
}

/// Plotted BER: zero is replaced by `1 / (10 * total_bits)` so it stays on a log axis.
pub fn plot_floor(record: &BerRecord) -> f64 {
    if record.ber > 0.0 {
        record.ber
    } else {
        1.0 / (10.0 * record.total_bits.max(1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    /// `(snr_db, plotted ber)`, ascending in SNR.
    pub points: Vec<(f64, f64)>,
}

/// Groups records by scheme in order of first appearance.
pub fn plot_series(records: &[BerRecord]) -> Vec<PlotSeries> {
    let mut series: Vec<PlotSeries> = Vec::new();
    for r in records {
        let point = (r.snr_db, plot_floor(r));
        match series.iter_mut().find(|s| s.name == r.scheme) {
            Some(s) => s.points.push(point),
            None => series.push(PlotSeries {
                name: r.scheme.clone(),
                points: vec![point],
            }),
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    series
}

const PALETTE: [&str; 7] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf",
];

/// Self-contained SVG line chart of log10(BER) against SNR, one polyline per scheme.
pub fn render_svg(records: &[BerRecord]) -> Result<String, BenchError> {
    if records.is_empty() {
        return Err(BenchError::config("nothing to plot: no records"));
    }
    let series = plot_series(records);
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 150.0, 20.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);

    let snrs = || series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (mut x0, mut x1) = (
        snrs().fold(f64::INFINITY, f64::min),
        snrs().fold(f64::NEG_INFINITY, f64::max),
    );
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let lowest = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(1.0, f64::min);
    let (y0, y1) = (lowest.log10().floor().min(-1.0), 0.0);
    let px = |snr: f64| left + (snr - x0) / (x1 - x0) * pw;
    let py = |ber: f64| top + (y1 - ber.log10()) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for decade in (y0 as i32)..=(y1 as i32) {
        let y = py(10f64.powi(decade));
        let _ = writeln!(
            svg,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{decade}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        );
    }
    let mut ticks: Vec<f64> = snrs().collect();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for t in ticks {
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{top}" x2="{x:.2}" y2="{:.2}" stroke="#eee"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"##,
            top + ph,
            top + ph + 16.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">SNR (dB)</text>"#,
        left + pw / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">BER</text>"#,
        top + ph / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(snr, ber)| format!("{:.2},{:.2}", px(snr), py(ber)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            s.name,
            points.join(" ")
        );
        let ly = top + 14.0 + 20.0 * i as f64;
        let lx = left + pw + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            s.name
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes [`render_svg`] to `path`.
pub fn emit_plot(records: &[BerRecord], path: impl AsRef<Path>) -> Result<(), BenchError> {
    let path = path.as_ref();
    let svg = render_svg(records)?;
    let mut file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    file.write_all(svg.as_bytes())
        .map_err(|e| BenchError::io(path, e))
}
