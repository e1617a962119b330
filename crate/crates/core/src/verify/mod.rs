//! Verification campaigns: one executable check per claim, reports, and the
//! report writers used by the CLI.

mod campaigns;
mod output;

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{RateFit, DEFAULT_LI_TOL, DEFAULT_MZV_TOL, MIN_TOL};

pub use campaigns::{
    edsr_pairs, harmonic_sentinel, lemma_r_catalog, random_index_lincomb, verify_asymp_dsr,
    verify_asymp_h, verify_asymp_li, verify_asymp_shuffle, verify_edsr, verify_flat_natural,
    verify_harmonic, verify_harmonic_with, verify_lemma_r, verify_msw,
};
pub use output::{report_json, write_reports, Summary, SummaryLine};

/// Largest `max_weight` accepted by the exact campaigns.
pub const MAX_WEIGHT_GUARD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Parameters shared by all campaigns.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CampaignConfig {
    /// Weight bound for the exhaustive exact campaigns; the asymptotic and EDSR
    /// campaigns use `min(max_weight, 3)` per operand.
    pub max_weight: usize,
    /// Asymptotic campaigns use `N = 2^a, …, 2^b`.
    pub n_schedule: (u32, u32),
    /// `N` values for the exact identity check (values above 60 are skipped).
    pub exact_ns: Vec<u64>,
    /// `N` for the harmonic-homomorphism check.
    pub harmonic_n: u64,
    /// Number of random pairs in the harmonic-homomorphism check.
    pub harmonic_pairs: usize,
    /// Residual tolerance for the EDSR checks.
    pub tol: f64,
    pub mzv_tol: f64,
    pub li_tol: f64,
    pub slack: f64,
    pub seed: u64,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in reports (makes them non-reproducible).
    #[serde(skip)]
    pub timing: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            max_weight: 6,
            n_schedule: (4, 14),
            exact_ns: vec![2, 5, 10, 25, 50],
            harmonic_n: 100,
            harmonic_pairs: 100,
            tol: 1e-5,
            mzv_tol: DEFAULT_MZV_TOL,
            li_tol: DEFAULT_LI_TOL,
            slack: 1.25,
            seed: 20240601,
            workers: 0,
            format: Format::Json,
            out: None,
            timing: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.max_weight == 0 {
            return bad("max weight must be positive".into());
        }
        if self.max_weight > MAX_WEIGHT_GUARD {
            return bad(format!(
                "max weight {} exceeds the cost guard {MAX_WEIGHT_GUARD}",
                self.max_weight
            ));
        }
        let (a, b) = self.n_schedule;
        if a == 0 || b > 30 || b < a + 4 {
            return bad(format!(
                "N schedule 2^{a}..2^{b} needs 1 ≤ a, b ≤ 30 and at least 5 points"
            ));
        }
        if self.exact_ns.is_empty() || self.exact_ns.contains(&0) {
            return bad("exact N list must be nonempty and positive".into());
        }
        if !(self.tol >= 0.0) {
            return bad(format!("tolerance {} must be non-negative", self.tol));
        }
        if !(self.mzv_tol >= MIN_TOL) || !(self.li_tol >= MIN_TOL) {
            return bad(format!("numeric tolerances must be at least {MIN_TOL}"));
        }
        if !(self.slack >= 1.0) {
            return bad("slack must be at least 1".into());
        }
        if self.harmonic_n < 2 {
            return bad("harmonic N must be at least 2".into());
        }
        Ok(())
    }

    /// The asymptotic `N` schedule.
    pub fn schedule(&self) -> Vec<u64> {
        (self.n_schedule.0..=self.n_schedule.1)
            .map(|e| 1u64 << e)
            .collect()
    }

    pub(crate) fn asymptotic_weight(&self) -> usize {
        self.max_weight.min(3)
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    OutOfScope,
}

/// One checked case.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseRecord {
    pub key: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<RateFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseRecord {
    pub fn exact(key: impl Into<String>, equal: bool, detail: Option<String>) -> CaseRecord {
        CaseRecord {
            key: key.into(),
            pass: equal,
            exact: Some(equal),
            residual: None,
            fit: None,
            detail,
        }
    }

    pub fn residual(key: impl Into<String>, residual: f64, pass: bool) -> CaseRecord {
        CaseRecord {
            key: key.into(),
            pass,
            exact: None,
            residual: Some(residual),
            fit: None,
            detail: None,
        }
    }

    pub fn rate(key: impl Into<String>, fit: RateFit) -> CaseRecord {
        CaseRecord {
            key: key.into(),
            pass: fit.passed(),
            exact: None,
            residual: fit.observations.last().map(|o| o.1),
            fit: Some(fit),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> CaseRecord {
        self.detail = Some(detail.into());
        self
    }
}

/// Verification record for one claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub claim_id: String,
    pub statement: String,
    pub parameters: serde_json::Value,
    pub cases: Vec<CaseRecord>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(claim: &Claim, parameters: serde_json::Value, cases: Vec<CaseRecord>) -> Report {
        let verdict = if cases.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Report {
            claim_id: claim.id.to_string(),
            statement: claim.statement.to_string(),
            parameters,
            cases,
            verdict,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// A catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub in_scope: bool,
}

/// Every claim the campaigns know about, in execution order.
pub const CATALOG: &[Claim] = &[
    Claim {
        id: "thm-msw",
        statement: "zeta_<N(k) = zeta^flat_<N(k) exactly",
        in_scope: true,
    },
    Claim {
        id: "zn-harmonic",
        statement: "Z_N(x * y) = Z_N(x) Z_N(y) exactly",
        in_scope: true,
    },
    Claim {
        id: "prop-flat-natural",
        statement: "zeta^flat_<N(k) - zeta^natural_<N(k) = O(N^-1 log^a N)",
        in_scope: true,
    },
    Claim {
        id: "lemma-R-i",
        statement: "R_<N(a; b) = O(log^k N)",
        in_scope: true,
    },
    Claim {
        id: "lemma-R-ii",
        statement: "R_<N(a; b) = O(N^-1 log^k N) if some b_i >= 1 and a_i + b_i >= 2",
        in_scope: true,
    },
    Claim {
        id: "lemma-R-iii",
        statement: "R_<N(a; b) = O(N^-1 log^k N) if a_i >= 2 and b_j >= 1 for some i < j",
        in_scope: true,
    },
    Claim {
        id: "lemma-R-limits",
        statement: "R_<N(2,1;0,0) -> zeta(1,2) and R_<N(1,2;0,0) -> infinity",
        in_scope: true,
    },
    Claim {
        id: "prop-asymp-shuffle",
        statement: "Z^natural_N(w1) Z^natural_N(w0) = Z^natural_N(w1 sh w0) + O(N^-1 log^a N)",
        in_scope: true,
    },
    Claim {
        id: "thm-main",
        statement: "Z_N(w1 * w0 - w1 sh w0) = O(N^-1 log^a N)",
        in_scope: true,
    },
    Claim {
        id: "prop-asymp-H",
        statement: "zeta_<N(k) = Z*_k(log N + gamma) + O(N^-1 log^a N)",
        in_scope: true,
    },
    Claim {
        id: "prop-asymp-Li",
        statement: "Li_k(z) = Z^sh_k(-log(1-z)) + O((1-z) log^a(1-z))",
        in_scope: true,
    },
    Claim {
        id: "thm-edsr-star",
        statement: "Z(reg_*(w1 * w0 - w1 sh w0)) = 0",
        in_scope: true,
    },
    Claim {
        id: "thm-edsr-sh",
        statement: "Z(reg_sh(w1 * w0 - w1 sh w0)) = 0",
        in_scope: true,
    },
    Claim {
        id: "thm-regularization-rho",
        statement: "Z^sh_k(T) = rho(Z*_k(T)); rho is not implemented, so this is out of scope",
        in_scope: false,
    },
];

pub fn claim(id: &str) -> Result<&'static Claim> {
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Config(format!("unknown claim id {id:?}")))
}

fn out_of_scope(c: &Claim) -> Report {
    Report {
        claim_id: c.id.to_string(),
        statement: c.statement.to_string(),
        parameters: serde_json::Value::Null,
        cases: Vec::new(),
        verdict: Verdict::OutOfScope,
        elapsed_ms: None,
    }
}

/// Runs the campaign for a single claim.
pub fn run_claim(id: &str, cfg: &CampaignConfig) -> Result<Report> {
    let c = claim(id)?;
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match c.id {
        "thm-msw" => verify_msw(cfg)?,
        "zn-harmonic" => verify_harmonic(cfg)?,
        "prop-flat-natural" => verify_flat_natural(cfg)?,
        "lemma-R-i" | "lemma-R-ii" | "lemma-R-iii" | "lemma-R-limits" => {
            campaigns::verify_lemma_r_clause(c.id, cfg)?
        }
        "prop-asymp-shuffle" => verify_asymp_shuffle(cfg)?,
        "thm-main" => verify_asymp_dsr(cfg)?,
        "prop-asymp-H" => verify_asymp_h(cfg)?,
        "prop-asymp-Li" => verify_asymp_li(cfg)?,
        "thm-edsr-star" | "thm-edsr-sh" => campaigns::verify_edsr_clause(c.id, cfg)?,
        _ => out_of_scope(c),
    };
    if cfg.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs every campaign in catalog order.
pub fn run_all(cfg: &CampaignConfig) -> Result<Vec<Report>> {
    CATALOG.iter().map(|c| run_claim(c.id, cfg)).collect()
}
