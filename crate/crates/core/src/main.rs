use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use edsr::finitesum::{zn_apply, ConstraintChain, RArgs, Variant};
use edsr::hoffman::{format_rational, Product};
use edsr::numeric::{mzv, DEFAULT_MZV_TOL};
use edsr::regularize::{decompose, RegPolynomial};
use edsr::verify::{self, CampaignConfig, Format, Report, CATALOG};
use edsr::{Error, Index, LinComb, Result, Word};

#[derive(Parser)]
#[command(
    name = "edsr",
    version,
    about = "Hoffman algebra products, truncated multiple zeta sums and double shuffle checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductOp {
    Harmonic,
    Shuffle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumKind {
    Plain,
    Flat,
    Natural,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegOp {
    Star,
    Sh,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two words or indices.
    ///
    /// Operands containing a comma are indices, strings of 0/1 are words;
    /// prefix with `i:` or `w:` to force either reading.
    Product {
        #[arg(long, value_enum)]
        op: ProductOp,
        a: String,
        b: String,
        /// Print the result as JSON pairs.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a truncated sum exactly.
    Sum {
        #[arg(long, value_enum)]
        kind: SumKind,
        /// An index such as `1,2`, or R arguments such as `2,1;0,0`.
        arg: String,
        #[arg(long)]
        n: u64,
    },
    /// Regularized polynomial of an index for either product.
    Regularize {
        #[arg(long, value_enum)]
        op: RegOp,
        index: String,
        #[arg(long)]
        json: bool,
    },
    /// Numerical multiple zeta value of an admissible index.
    Mzv {
        index: String,
        #[arg(long, default_value_t = DEFAULT_MZV_TOL)]
        tol: f64,
    },
    /// Run verification campaigns.
    Verify {
        /// A claim id, or `all`.
        claim: String,
        #[arg(long)]
        max_weight: Option<usize>,
        /// Exponent range `a:b` for the schedule `N = 2^a, …, 2^b`.
        #[arg(long)]
        n_schedule: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        mzv_tol: Option<f64>,
        #[arg(long)]
        li_tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 0 uses all cores.
        #[arg(long)]
        workers: Option<usize>,
        /// Directory for the report files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        /// Record elapsed time in reports.
        #[arg(long)]
        timing: bool,
    },
}

fn parse_operand(s: &str) -> Result<LinComb> {
    let word = |t: &str| t.parse::<Word>().map(LinComb::from);
    let index = |t: &str| t.parse::<Index>().map(|k| LinComb::from(&k));
    if let Some(rest) = s.strip_prefix("w:") {
        word(rest)
    } else if let Some(rest) = s.strip_prefix("i:") {
        index(rest)
    } else if !s.contains(',') && s.chars().all(|c| c == '0' || c == '1') {
        word(s)
    } else {
        index(s)
    }
}

fn parse_schedule(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("N schedule {s:?} must look like a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// One term per line: coefficient, word, and the index when the word is in `H¹`.
fn print_terms(prefix: &str, x: &LinComb) {
    if x.is_zero() {
        println!("{prefix}0");
    }
    for (w, c) in x.iter() {
        match Index::from_word(w) {
            Ok(k) => println!("{prefix}{} {w} ({k})", format_rational(c)),
            Err(_) => println!("{prefix}{} {w}", format_rational(c)),
        }
    }
}

fn print_polynomial(p: &RegPolynomial) {
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() || p.is_zero() {
            print_terms(&format!("T^{i} "), c);
        }
    }
}

fn run_verify(claim: &str, cfg: &CampaignConfig) -> Result<bool> {
    let reports: Vec<Report> = if claim == "all" {
        verify::run_all(cfg)?
    } else {
        vec![verify::run_claim(claim, cfg)?]
    };
    for r in &reports {
        let failures = r.failures().count();
        let verdict = serde_json::to_value(r.verdict)?;
        println!(
            "{:<24} {:<12} {} cases, {failures} failed",
            r.claim_id,
            verdict.as_str().unwrap_or("?"),
            r.cases.len()
        );
        for f in r.failures().take(5) {
            println!("    {} {}", f.key, f.detail.as_deref().unwrap_or(""));
        }
    }
    if let Some(dir) = &cfg.out {
        verify::write_reports(&reports, dir, cfg.format)?;
    }
    Ok(reports.iter().all(Report::passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Product { op, a, b, json } => {
            let (x, y) = (parse_operand(&a)?, parse_operand(&b)?);
            let product = match op {
                ProductOp::Harmonic => Product::Harmonic,
                ProductOp::Shuffle => Product::Shuffle,
            };
            let z = product.apply(&x, &y)?;
            if json {
                println!("{}", serde_json::to_string(&z)?);
            } else {
                print_terms("", &z);
            }
        }
        Command::Sum { kind, arg, n } => {
            let value = match kind {
                SumKind::R => ConstraintChain::r_value(&arg.parse::<RArgs>()?).eval_exact(n),
                _ => {
                    let variant = match kind {
                        SumKind::Flat => Variant::Flat,
                        SumKind::Natural => Variant::Natural,
                        _ => Variant::Plain,
                    };
                    zn_apply(&LinComb::from(&arg.parse::<Index>()?), n, variant)?
                }
            };
            println!("{}", format_rational(&value));
        }
        Command::Regularize { op, index, json } => {
            let product = match op {
                RegOp::Star => Product::Harmonic,
                RegOp::Sh => Product::Shuffle,
            };
            let p = decompose(product, &LinComb::from(&index.parse::<Index>()?))?;
            if json {
                println!("{}", serde_json::to_string(&p)?);
            } else {
                print_polynomial(&p);
            }
        }
        Command::Mzv { index, tol } => {
            let z = mzv(&index.parse()?, tol)?;
            println!("{}", serde_json::to_string(&z)?);
        }
        Command::Verify {
            claim,
            max_weight,
            n_schedule,
            tol,
            mzv_tol,
            li_tol,
            seed,
            workers,
            out,
            format,
            timing,
        } => {
            if claim != "all" && !CATALOG.iter().any(|c| c.id == claim) {
                return Err(Error::Config(format!("unknown claim id {claim:?}")));
            }
            let d = CampaignConfig::default();
            let cfg = CampaignConfig {
                max_weight: max_weight.unwrap_or(d.max_weight),
                n_schedule: n_schedule
                    .as_deref()
                    .map(parse_schedule)
                    .transpose()?
                    .unwrap_or(d.n_schedule),
                tol: tol.unwrap_or(d.tol),
                mzv_tol: mzv_tol.unwrap_or(d.mzv_tol),
                li_tol: li_tol.unwrap_or(d.li_tol),
                seed: seed.unwrap_or(d.seed),
                workers: workers.unwrap_or(d.workers),
                format: match format {
                    OutFormat::Json => Format::Json,
                    OutFormat::Csv => Format::Csv,
                },
                out,
                timing,
                ..d
            };
            return run_verify(&claim, &cfg);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
