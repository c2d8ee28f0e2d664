//! Power-binned accuracy tables as CSV or a standalone SVG scatter plot.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use ecp_core::calibration::{Calibration, PowerBin};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One bin of one `(model, strategy)` group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub power_mid: f64,
    pub accuracy: f64,
    pub count: usize,
    pub model: String,
    pub strategy: String,
}

impl ReportRow {
    pub fn from_bin(bin: &PowerBin, model: &str, strategy: &str) -> Self {
        ReportRow {
            power_mid: bin.power_mid,
            accuracy: bin.accuracy,
            count: bin.count,
            model: model.into(),
            strategy: strategy.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    SvgScatter,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "svg-scatter" | "svg" => Ok(ReportFormat::SvgScatter),
            _ => Err(format!("unknown report format {s:?} (expected csv or svg-scatter)")),
        }
    }
}

pub fn write_csv<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record(["power_mid", "accuracy", "count", "model", "strategy"])?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Accuracy against bin power, one colour per `(model, strategy)` group,
/// with `fit` drawn as a line when given.
pub fn svg_scatter(rows: &[ReportRow], fit: Option<&Calibration>) -> String {
    let (w, h, m) = (640.0, 480.0, 60.0);
    let x_max = rows.iter().map(|r| r.power_mid).fold(0.0_f64, f64::max).max(1e-9) * 1.05;
    let sx = |x: f64| m + x / x_max * (w - 2.0 * m);
    let sy = |y: f64| h - m - y * (h - 2.0 * m);
    let mut groups: Vec<(&str, &str)> = Vec::new();
    for r in rows {
        if !groups.contains(&(r.model.as_str(), r.strategy.as_str())) {
            groups.push((&r.model, &r.strategy));
        }
    }

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black"><line x1="{m}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{m}" y1="{y0}" x2="{m}" y2="{m}"/></g>"#,
        y0 = h - m,
        x1 = w - m
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11">"#);
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.3}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{:.1}</text>"#,
            sx(t * x_max),
            h - m + 16.0,
            t * x_max,
            m - 6.0,
            sy(t) + 4.0,
            t
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">power</text>"#, w / 2.0, h - 16.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">accuracy</text>"#, h / 2.0, h / 2.0);
    for (gi, (model, strategy)) in groups.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{}">{} / {}</text>"#,
            w - m - 150.0,
            m + 14.0 * gi as f64,
            PALETTE[gi % PALETTE.len()],
            escape(model),
            escape(strategy)
        );
    }
    let _ = writeln!(s, "</g>");
    for r in rows {
        let gi = groups.iter().position(|g| *g == (r.model.as_str(), r.strategy.as_str())).unwrap_or(0);
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#,
            sx(r.power_mid),
            sy(r.accuracy.clamp(0.0, 1.0)),
            PALETTE[gi % PALETTE.len()]
        );
    }
    if let Some(c) = fit {
        let pts: Vec<String> = (0..=50)
            .map(|i| {
                let x = x_max * i as f64 / 50.0;
                format!("{:.2},{:.2}", sx(x), sy(c.accuracy(x)))
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#, pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_report(rows: &[ReportRow], path: impl AsRef<Path>, format: ReportFormat, fit: Option<&Calibration>) -> Result<()> {
    let path = path.as_ref();
    match format {
        ReportFormat::Csv => {
            let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
            write_csv(std::io::BufWriter::new(file), rows)
        }
        ReportFormat::SvgScatter => fs::write(path, svg_scatter(rows, fit)).map_err(|e| Error::io(path, e)),
    }
}
