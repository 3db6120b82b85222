//! JSON and text renderings of a [`ResolutionReport`]. Both are
//! deterministic: keys are emitted in a fixed order and operators use the
//! canonical polynomial rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::resolver::ResolutionReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
struct JsonStage {
    k: i32,
    count: usize,
    operators: Vec<String>,
    nilpotency: &'static str,
}

#[derive(Serialize)]
struct JsonCertificates {
    exactness: bool,
    oracle_degree: Option<u32>,
    oracle_passed: Option<bool>,
}

#[derive(Serialize)]
struct JsonReport {
    operator: String,
    base_dim: usize,
    fields: Vec<String>,
    degenerate: bool,
    stages: Vec<JsonStage>,
    n_max: Option<usize>,
    termination: &'static str,
    minimality: &'static str,
    certificates: JsonCertificates,
}

fn minimality(r: &ResolutionReport) -> &'static str {
    if r.certificates.minimal {
        "minimal"
    } else {
        "non-minimal possible"
    }
}

fn json_report(r: &ResolutionReport) -> JsonReport {
    JsonReport {
        operator: r.operator.clone(),
        base_dim: r.base_dim,
        fields: r.fields.clone(),
        degenerate: r.degenerate,
        stages: r
            .stages
            .iter()
            .map(|s| JsonStage {
                k: s.stage,
                count: s.count(),
                operators: s.operators.iter().map(|d| d.render(&r.fields)).collect(),
                nilpotency: "verified",
            })
            .collect(),
        n_max: r.n_max,
        termination: r.termination.as_str(),
        minimality: minimality(r),
        certificates: JsonCertificates {
            exactness: r.certificates.exactness,
            oracle_degree: r.certificates.oracle_degree,
            oracle_passed: r.certificates.oracle_passed,
        },
    }
}

pub fn to_json(r: &ResolutionReport) -> String {
    let mut s = serde_json::to_string_pretty(&json_report(r)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn to_text(r: &ResolutionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "operator     {}", r.operator);
    let _ = writeln!(out, "base_dim     {}", r.base_dim);
    let _ = writeln!(out, "fields       {}", r.fields.join(", "));
    let _ = writeln!(out, "degenerate   {}", r.degenerate);
    let n_max = r.n_max.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
    let _ = writeln!(out, "n_max        {n_max}");
    let _ = writeln!(out, "termination  {}", r.termination.as_str());
    let _ = writeln!(out, "minimality   {}", minimality(r));
    let oracle = match (r.certificates.oracle_degree, r.certificates.oracle_passed) {
        (Some(d), Some(true)) => format!("passed at degree {d}"),
        (Some(d), _) => format!("FAILED at degree {d}"),
        (None, _) => "not run".into(),
    };
    let _ = writeln!(out, "exactness    {}", if r.certificates.exactness { "certified" } else { "FAILED" });
    let _ = writeln!(out, "oracle       {oracle}");
    if !r.stages.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>5}  {:>5}  nilpotency  operators", "stage", "count");
        for s in &r.stages {
            let ops: Vec<String> = s.operators.iter().map(|d| d.render(&r.fields)).collect();
            let _ = writeln!(out, "{:>5}  {:>5}  verified    {}", s.stage, s.count(), ops.first().cloned().unwrap_or_default());
            for op in ops.iter().skip(1) {
                let _ = writeln!(out, "{:>5}  {:>5}              {op}", "", "");
            }
        }
    }
    out
}

pub fn emit_report(r: &ResolutionReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Text => to_text(r),
    }
}
