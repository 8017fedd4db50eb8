use std::io::{self, Write};

use serde::Serialize;

use crate::config::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionRow {
    pub mu: String,
    pub lambda: Vec<usize>,
    pub dim: usize,
    pub multiplicity: usize,
    pub formula: u128,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub q: u64,
    pub n: usize,
    pub modulus: Vec<u32>,
    pub alphas: Vec<String>,
    pub suites: Vec<&'static str>,
    pub max_size: u128,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub points: Option<usize>,
    pub irreducible_classes: Option<usize>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub params: Params,
    pub checks: Vec<CheckRecord>,
    pub decomposition: Vec<DecompositionRow>,
    pub summary: Summary,
}

impl Report {
    pub fn finish(&mut self) {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        self.summary.total = self.checks.len();
        self.summary.passed = count(Status::Pass);
        self.summary.failed = count(Status::Fail);
        self.summary.skipped = count(Status::Skip);
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

pub fn emit(report: &Report, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "status", "witness", "ms"])?;
            for c in &report.checks {
                let ms = c.ms.map(|m| m.to_string()).unwrap_or_default();
                w.write_record([c.name.as_str(), c.status.as_str(), c.witness.as_deref().unwrap_or(""), &ms])?;
            }
            w.flush()
        }
        Format::Text => emit_text(report, out),
    }
}

fn emit_text(report: &Report, out: &mut dyn Write) -> io::Result<()> {
    let p = &report.params;
    writeln!(out, "q = {}, N = {}, modulus = {:?}, alphas = [{}]", p.q, p.n, p.modulus, p.alphas.join(", "))?;
    writeln!(out, "suites: {}", p.suites.join(", "))?;
    if !report.checks.is_empty() {
        let width = report.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        writeln!(out)?;
        for c in &report.checks {
            let ms = c.ms.map(|m| format!("{m:>7} ms")).unwrap_or_default();
            write!(out, "{:<4}  {:<width$}  {ms}", c.status.as_str(), c.name)?;
            if let Some(w) = &c.witness {
                write!(out, "  {w}")?;
            }
            writeln!(out)?;
        }
    }
    if !report.decomposition.is_empty() {
        writeln!(out)?;
        writeln!(
            out,
            "{:<12} {:<16} {:>6} {:>12} {:>12}  match",
            "endpoint", "shape", "dim", "multiplicity", "formula"
        )?;
        for r in &report.decomposition {
            let shape = format!("{{{}}}", r.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            writeln!(
                out,
                "{:<12} {:<16} {:>6} {:>12} {:>12}  {}",
                r.mu, shape, r.dim, r.multiplicity, r.formula, r.matches
            )?;
        }
    }
    let s = &report.summary;
    writeln!(out)?;
    if let Some(points) = s.points {
        write!(out, "points: {points}  ")?;
    }
    if let Some(classes) = s.irreducible_classes {
        write!(out, "irreducible classes: {classes}  ")?;
    }
    writeln!(out, "checks: {} passed, {} failed, {} skipped", s.passed, s.failed, s.skipped)
}
