use std::fmt::Write as _;
use std::str::FromStr;

use super::{AnalysisReport, DistinctionRecord, Labels, MechanismState, StateKind};
use crate::error::{Error, Result};
use crate::search::Direction;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Usage(format!("unknown format {other:?} (text, json or csv)"))),
        }
    }
}

pub fn render(report: &AnalysisReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => render_csv(report),
        Format::Text => Ok(render_text(report).into_bytes()),
    }
}

const HEADER: [&str; 7] = ["mechanism", "direction", "Z*", "z*", "phi", "MIP", "ties"];

struct Row {
    mechanism: String,
    direction: String,
    purview: String,
    state: String,
    phi: String,
    mip: String,
    ties: String,
}

impl Row {
    fn cells(&self) -> [&str; 7] {
        [
            &self.mechanism,
            &self.direction,
            &self.purview,
            &self.state,
            &self.phi,
            &self.mip,
            &self.ties,
        ]
    }
}

fn mechanism_cell(d: &DistinctionRecord) -> String {
    let state = match &d.mechanism_state {
        MechanismState::Classical(s) => super::classical_state_label(s),
        MechanismState::Quantum { label, .. } => label.clone(),
    };
    format!("{}={}", d.mechanism_label, state)
}

fn state_cell(d: &DistinctionRecord) -> String {
    let labels = &d.intrinsic_state.labels;
    match d.intrinsic_state.kind {
        StateKind::Subspace => format!("span{{{}}}", labels.join(", ")),
        StateKind::State | StateKind::Tied => labels.first().cloned().unwrap_or_default(),
    }
}

/// Parts as `mechanism/purview` joined by ` × `, `∅` for empty sets.
fn mip_cell(d: &DistinctionRecord, labels: &Labels) -> String {
    let mech_at_t = d.direction == Direction::Effect;
    let name = |units: &[usize], at_t: bool| {
        if units.is_empty() {
            "∅".to_string()
        } else {
            labels.join(units, at_t)
        }
    };
    d.mip
        .parts
        .iter()
        .map(|p| {
            format!(
                "{}/{}",
                name(p.mechanism.as_slice(), mech_at_t),
                name(p.purview.as_slice(), !mech_at_t)
            )
        })
        .collect::<Vec<_>>()
        .join(" × ")
}

/// Other tied intrinsic states, then other tied purviews as `Z=<label>`.
fn ties_cell(d: &DistinctionRecord) -> String {
    let mut out: Vec<String> = Vec::new();
    if d.intrinsic_state.kind == StateKind::Tied {
        out.extend(d.intrinsic_state.labels.iter().skip(1).cloned());
    }
    out.extend(d.ties.iter().map(|t| format!("Z={}", t.purview_label)));
    out.join("|")
}

fn rows(report: &AnalysisReport) -> Vec<Row> {
    let labels = report.request.labels();
    report
        .distinctions
        .iter()
        .map(|d| Row {
            mechanism: mechanism_cell(d),
            direction: d.direction.to_string(),
            purview: d.purview_label.clone(),
            state: state_cell(d),
            phi: d.phi.to_string(),
            mip: mip_cell(d, &labels),
            ties: ties_cell(d),
        })
        .collect()
}

fn render_text(report: &AnalysisReport) -> String {
    let rows = rows(report);
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.cells()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: [&str; 7]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str(" | ");
            }
            s.push_str(cell);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(w - cell.chars().count()));
            }
        }
        s.trim_end().to_string()
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", line(HEADER));
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let _ = writeln!(out, "{}", rule.join("-+-"));
    for row in &rows {
        let _ = writeln!(out, "{}", line(row.cells()));
    }
    out
}

fn render_csv(report: &AnalysisReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record([
        "mechanism",
        "direction",
        "purview",
        "intrinsic_state",
        "phi",
        "ii",
        "mip",
        "normalization",
        "ties",
    ])
    .map_err(csv_err)?;
    let labels = report.request.labels();
    for (d, row) in report.distinctions.iter().zip(rows(report)) {
        w.write_record([
            row.mechanism.as_str(),
            row.direction.as_str(),
            row.purview.as_str(),
            row.state.as_str(),
            row.phi.as_str(),
            &d.ii.to_string(),
            &mip_cell(d, &labels),
            &d.mip.normalization.to_string(),
            row.ties.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}
