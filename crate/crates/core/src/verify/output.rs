use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{Format, Report, Verdict};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryLine {
    pub claim_id: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub failures: usize,
}

/// Overview of a run, written as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub passed: bool,
    pub claims: Vec<SummaryLine>,
}

impl Summary {
    pub fn from_reports(reports: &[Report]) -> Summary {
        Summary {
            passed: reports.iter().all(Report::passed),
            claims: reports
                .iter()
                .map(|r| SummaryLine {
                    claim_id: r.claim_id.clone(),
                    verdict: r.verdict,
                    cases: r.cases.len(),
                    failures: r.failures().count(),
                })
                .collect(),
        }
    }
}

const CSV_HEADER: [&str; 8] = [
    "claimId",
    "key",
    "pass",
    "exact",
    "residual",
    "fittedLogExponent",
    "boundedConstant",
    "detail",
];

#[derive(Serialize)]
struct CsvRow<'a> {
    claim_id: &'a str,
    key: &'a str,
    pass: bool,
    exact: Option<bool>,
    residual: Option<f64>,
    fitted_log_exponent: Option<u32>,
    bounded_constant: Option<f64>,
    detail: Option<&'a str>,
}

fn write_csv(report: &Report, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for c in &report.cases {
        w.serialize(CsvRow {
            claim_id: &report.claim_id,
            key: &c.key,
            pass: c.pass,
            exact: c.exact,
            residual: c.residual,
            fitted_log_exponent: c.fit.as_ref().and_then(|f| f.fitted_log_exponent),
            bounded_constant: c.fit.as_ref().and_then(|f| f.bounded_constant),
            detail: c.detail.as_deref(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_json(report: &Report) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

/// Writes one file per claim into `dir` plus `summary.json`.
pub fn write_reports(reports: &[Report], dir: &Path, format: Format) -> Result<Summary> {
    fs::create_dir_all(dir)?;
    for r in reports {
        match format {
            Format::Json => fs::write(dir.join(format!("{}.json", r.claim_id)), report_json(r)?)?,
            Format::Csv => write_csv(r, &dir.join(format!("{}.csv", r.claim_id)))?,
        }
    }
    let summary = Summary::from_reports(reports);
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    Ok(summary)
}
