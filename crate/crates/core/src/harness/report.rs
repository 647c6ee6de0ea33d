//! Artifact emission: CSV tables and self-contained SVG plots.
//!
//! Everything here is pure string formatting over already-computed results,
//! so identical inputs produce byte-identical files. No timestamps.

use crate::error::Result;
use crate::harness::metrics::{ArcCurve, HistogramSplit, OodReport};
use crate::variance::LabelwiseTriple;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Write a string artifact to disk.
pub fn write_text(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}

/// Scores table: one row per instance, one column per requested measure.
pub fn scores_csv(ids: &[String], columns: &[(String, Vec<f64>)]) -> String {
    let mut out = String::from("id");
    for (name, _) in columns {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        let _ = write!(out, "{id}");
        for (_, values) in columns {
            let _ = write!(out, ",{:.12e}", values[i]);
        }
        out.push('\n');
    }
    out
}

/// Per-label triples table: one row per (instance, label).
pub fn labelwise_csv(ids: &[String], triples: &[LabelwiseTriple]) -> String {
    let mut out = String::from("id,label,tu,au,eu\n");
    for (id, lw) in ids.iter().zip(triples) {
        for (k, t) in lw.per_label().iter().enumerate() {
            let _ = writeln!(out, "{id},{k},{:.12e},{:.12e},{:.12e}", t.tu, t.au, t.eu);
        }
    }
    out
}

/// Accuracy-rejection curve table; skipped points carry an empty accuracy.
pub fn arc_csv(curve: &ArcCurve) -> String {
    let mut out = String::from("fraction,accuracy,retained\n");
    for p in &curve.points {
        match p.accuracy {
            Some(a) => {
                let _ = writeln!(out, "{:.4},{:.12e},{}", p.fraction, a, p.retained);
            }
            None => {
                let _ = writeln!(out, "{:.4},,{}", p.fraction, p.retained);
            }
        }
    }
    out
}

/// Separation report as a single-row table.
pub fn ood_csv(report: &OodReport) -> String {
    let mut out = String::from("auroc,id_min,id_median,id_max,ood_min,ood_median,ood_max\n");
    let _ = writeln!(
        out,
        "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
        report.auroc,
        report.id_summary.min,
        report.id_summary.median,
        report.id_summary.max,
        report.ood_summary.min,
        report.ood_summary.median,
        report.ood_summary.max
    );
    out
}

/// Paired histogram table: one row per bin.
pub fn histogram_csv(hist: &HistogramSplit) -> String {
    let mut out = String::from("bin_lo,bin_hi,correct,incorrect\n");
    for i in 0..hist.correct.len() {
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{},{}",
            hist.edges[i],
            hist.edges[i + 1],
            hist.correct[i],
            hist.incorrect[i]
        );
    }
    out
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 56.0;

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\">{title}</text>\n",
        SVG_W / 2.0
    )
}

fn svg_axes(x_label: &str, y_label: &str) -> String {
    format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{lb}\" text-anchor=\"middle\">{x_label}</text>\n\
         <text x=\"14\" y=\"{cy}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {cy})\">{y_label}</text>\n",
        m = MARGIN,
        b = SVG_H - MARGIN,
        r = SVG_W - MARGIN,
        t = MARGIN,
        cx = SVG_W / 2.0,
        lb = SVG_H - 16.0,
        cy = SVG_H / 2.0,
    )
}

fn scale(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi > lo {
        out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
    } else {
        (out_lo + out_hi) / 2.0
    }
}

/// Line plot of an accuracy-rejection curve (skipped points are omitted).
pub fn arc_svg(curve: &ArcCurve, title: &str) -> String {
    let mut svg = svg_header(title);
    svg.push_str(&svg_axes("rejection fraction", "accuracy"));
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter_map(|p| p.accuracy.map(|a| (p.fraction, a)))
        .collect();
    if !pts.is_empty() {
        let (x_lo, x_hi) = (0.0, 1.0);
        let (y_lo, y_hi) = (0.0, 1.0);
        let mut path = String::new();
        for (x, y) in &pts {
            let px = scale(*x, x_lo, x_hi, MARGIN, SVG_W - MARGIN);
            let py = scale(*y, y_lo, y_hi, SVG_H - MARGIN, MARGIN);
            let _ = write!(path, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#2266aa\" stroke-width=\"2\"/>",
            path.trim_end()
        );
    }
    for (v, anchor) in [(0.0, "start"), (0.5, "middle"), (1.0, "end")] {
        let px = scale(v, 0.0, 1.0, MARGIN, SVG_W - MARGIN);
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{}\" text-anchor=\"{anchor}\">{v:.1}</text>",
            SVG_H - MARGIN + 16.0
        );
        let py = scale(v, 0.0, 1.0, SVG_H - MARGIN, MARGIN);
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{py:.2}\" text-anchor=\"end\">{v:.1}</text>",
            MARGIN - 6.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Paired-bar plot of the correct/incorrect score histograms.
pub fn histogram_svg(hist: &HistogramSplit, title: &str) -> String {
    let mut svg = svg_header(title);
    svg.push_str(&svg_axes("score", "count"));
    let bins = hist.correct.len();
    let max_count = hist
        .correct
        .iter()
        .chain(&hist.incorrect)
        .cloned()
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let plot_w = SVG_W - 2.0 * MARGIN;
    let bin_w = plot_w / bins as f64;
    for i in 0..bins {
        let x0 = MARGIN + i as f64 * bin_w;
        for (offset, count, color) in [
            (0.0, hist.correct[i], "#3a8f5f"),
            (bin_w / 2.0, hist.incorrect[i], "#b34242"),
        ] {
            if count == 0 {
                continue;
            }
            let h = scale(count as f64, 0.0, max_count, 0.0, SVG_H - 2.0 * MARGIN);
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"{color}\"/>",
                x0 + offset,
                SVG_H - MARGIN - h,
                bin_w / 2.0 - 1.0,
            );
        }
    }
    let _ = write!(
        svg,
        "<text x=\"{m}\" y=\"{y}\" fill=\"#3a8f5f\">correct</text>\n\
         <text x=\"{m2}\" y=\"{y}\" fill=\"#b34242\">incorrect</text>\n",
        m = MARGIN,
        m2 = MARGIN + 80.0,
        y = MARGIN - 8.0
    );
    let _ = write!(
        svg,
        "<text x=\"{m}\" y=\"{y}\" text-anchor=\"start\">{lo:.3}</text>\n\
         <text x=\"{r}\" y=\"{y}\" text-anchor=\"end\">{hi:.3}</text>\n",
        m = MARGIN,
        r = SVG_W - MARGIN,
        y = SVG_H - MARGIN + 16.0,
        lo = hist.edges[0],
        hi = hist.edges[bins],
    );
    svg.push_str("</svg>\n");
    svg
}

/// Labeled bar chart for a handful of named values in [0, 1]-ish range.
pub fn bar_chart_svg(title: &str, labels: &[&str], values: &[f64]) -> String {
    let mut svg = svg_header(title);
    svg.push_str(&svg_axes("", "value"));
    let n = labels.len().max(1);
    let max_v = values.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let plot_w = SVG_W - 2.0 * MARGIN;
    let slot = plot_w / n as f64;
    for (i, (&label, &value)) in labels.iter().zip(values).enumerate() {
        let h = scale(value.max(0.0), 0.0, max_v, 0.0, SVG_H - 2.0 * MARGIN);
        let x = MARGIN + i as f64 * slot + slot * 0.15;
        let _ = write!(
            svg,
            "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"#4a6fa5\"/>\n\
             <text x=\"{cx:.2}\" y=\"{ly}\" text-anchor=\"middle\">{label}</text>\n\
             <text x=\"{cx:.2}\" y=\"{vy:.2}\" text-anchor=\"middle\">{value:.3}</text>\n",
            SVG_H - MARGIN - h,
            slot * 0.7,
            cx = MARGIN + i as f64 * slot + slot / 2.0,
            ly = SVG_H - MARGIN + 16.0,
            vy = (SVG_H - MARGIN - h - 6.0).max(MARGIN),
        );
    }
    svg.push_str("</svg>\n");
    svg
}
