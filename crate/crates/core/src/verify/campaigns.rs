use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{claim, CampaignConfig, CaseRecord, Report};
use crate::error::Result;
use crate::finitesum::{
    coincidence_sum, zeta_flat, zeta_lt, zeta_natural, BruteForceCaps, ConstraintChain, RArgs,
    Variant,
};
use crate::hoffman::{format_rational, harmonic, rat, shuffle, Index, LinComb};
use crate::numeric::{
    eval_reg_polynomial, fit_log_rate, li_value, mzv, r_value_f64, z_value, FloatZn,
    RateFitOptions, EULER_GAMMA,
};
use crate::regularize::{reg_sh, reg_star, z_sh_polynomial, z_star_polynomial};

/// Float residuals at or below this are indistinguishable from zero.
const FLOAT_NOISE: f64 = 1e-10;
/// Evaluation tolerance for the constants in the asymptotic expansions.
const EXPANSION_TOL: f64 = 1e-10;
/// `N` at which the convergent R sentinel is compared with its limit.
const R_SENTINEL_N: u64 = 100_000;
const R_SENTINEL_TOL: f64 = 0.01;
/// `N` for the exact finite-N shuffle decomposition check.
const SHUFFLE_EXACT_N: u64 = 10;
const EXACT_N_CAP: u64 = 60;

fn par_map<T, U, F>(cfg: &CampaignConfig, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    cfg.pool()?.install(|| items.par_iter().map(f).collect())
}

fn fmt_index(k: &Index) -> String {
    format!("({k})")
}

fn n_list(ns: &[u64]) -> Vec<f64> {
    ns.iter().map(|&n| n as f64).collect()
}

fn fit_opts(cfg: &CampaignConfig, a_max: usize) -> RateFitOptions {
    RateFitOptions {
        a_max: a_max as u32,
        slack: cfg.slack,
        n_power: 1,
        noise_floor: FLOAT_NOISE,
    }
}

/// `(w₁, w₀)` with `w₁` any index of weight `≤ w` and `w₀` admissible of weight
/// `≤ w`, both including the empty index, in enumeration order.
pub fn edsr_pairs(max_weight: usize) -> Vec<(Index, Index)> {
    let w1s: Vec<Index> = std::iter::once(Index::empty())
        .chain(Index::all_up_to_weight(max_weight))
        .collect();
    let w0s: Vec<Index> = std::iter::once(Index::empty())
        .chain(
            Index::all_up_to_weight(max_weight)
                .into_iter()
                .filter(Index::is_admissible),
        )
        .collect();
    w1s.iter()
        .flat_map(|a| w0s.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn pair_key(w1: &Index, w0: &Index) -> String {
    format!("w1={} w0={}", fmt_index(w1), fmt_index(w0))
}

fn dsr_defect(w1: &Index, w0: &Index) -> Result<LinComb> {
    let (x, y) = (LinComb::from(w1), LinComb::from(w0));
    Ok(harmonic(&x, &y)? - shuffle(&x, &y))
}

/// Exact `ζ_{<N}(k) = ζ♭_{<N}(k)` over every index of weight `≤ max_weight`.
pub fn verify_msw(cfg: &CampaignConfig) -> Result<Report> {
    let ns: Vec<u64> = cfg
        .exact_ns
        .iter()
        .copied()
        .filter(|&n| n <= EXACT_N_CAP)
        .collect();
    let items: Vec<(Index, u64)> = Index::all_up_to_weight(cfg.max_weight)
        .into_iter()
        .flat_map(|k| ns.iter().map(move |&n| (k.clone(), n)))
        .collect();
    let cases = par_map(cfg, &items, |(k, n)| {
        let plain = zeta_lt(k, *n);
        let flat = zeta_flat(k, *n);
        let equal = plain == flat;
        let detail = (!equal).then(|| {
            format!(
                "plain {} != flat {}",
                format_rational(&plain),
                format_rational(&flat)
            )
        });
        Ok(CaseRecord::exact(
            format!("k={} N={n}", fmt_index(k)),
            equal,
            detail,
        ))
    })?;
    let params = json!({
        "maxWeight": cfg.max_weight,
        "exactN": ns,
        "indices": items.len() / ns.len().max(1),
    });
    Ok(Report::new(claim("thm-msw")?, params, cases))
}

/// A random `H¹` element: one to three index words of weight `1..=max_weight`
/// with small nonzero rational coefficients.
pub fn random_index_lincomb(rng: &mut impl Rng, max_weight: usize) -> LinComb {
    let pool = Index::all_up_to_weight(max_weight.max(1));
    let terms = rng.gen_range(1..=3);
    let mut out = LinComb::zero();
    for _ in 0..terms {
        let k = pool.choose(rng).expect("nonempty pool");
        let p = loop {
            let p: i64 = rng.gen_range(-5..=5);
            if p != 0 {
                break p;
            }
        };
        let q: i64 = rng.gen_range(1..=5);
        out.add_term(k.to_word(), rat(p, q));
    }
    out
}

pub fn verify_harmonic(cfg: &CampaignConfig) -> Result<Report> {
    verify_harmonic_with(cfg, harmonic)
}

/// The harmonic-homomorphism check with a caller-supplied product, so that
/// corrupted product tables can be shown to be caught.
pub fn verify_harmonic_with<P>(cfg: &CampaignConfig, product: P) -> Result<Report>
where
    P: Fn(&LinComb, &LinComb) -> Result<LinComb> + Sync + Send,
{
    let weight = cfg.max_weight.min(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let e2 = LinComb::from(&Index::new(vec![2])?);
    let mut pairs: Vec<(String, LinComb, LinComb, u64)> = vec![
        ("fixed e2*e2".into(), e2.clone(), e2, 5),
        (
            "fixed 1*y".into(),
            LinComb::one(),
            random_index_lincomb(&mut rng, weight),
            cfg.harmonic_n,
        ),
    ];
    for i in 0..cfg.harmonic_pairs {
        let x = random_index_lincomb(&mut rng, weight);
        let y = random_index_lincomb(&mut rng, weight);
        pairs.push((format!("random {i:03}"), x, y, cfg.harmonic_n));
    }

    let products = par_map(cfg, &pairs, |(_, x, y, _)| product(x, y))?;

    // evaluate every index that occurs, once per N
    let mut needed: BTreeSet<(u64, Index)> = BTreeSet::new();
    for ((_, x, y, n), xy) in pairs.iter().zip(&products) {
        for lc in [x, y, xy] {
            for (k, _) in lc.index_terms()? {
                needed.insert((*n, k));
            }
        }
    }
    let needed: Vec<(u64, Index)> = needed.into_iter().collect();
    let values = par_map(cfg, &needed, |(n, k)| {
        Ok(ConstraintChain::plain(k).eval_exact(*n))
    })?;
    let table: BTreeMap<(u64, Index), BigRational> = needed.into_iter().zip(values).collect();
    let eval = |lc: &LinComb, n: u64| -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (k, c) in lc.index_terms()? {
            total += &c * &table[&(n, k)];
        }
        Ok(total)
    };

    let mut cases = Vec::with_capacity(pairs.len());
    for ((label, x, y, n), xy) in pairs.iter().zip(&products) {
        let lhs = eval(xy, *n)?;
        let rhs = eval(x, *n)? * eval(y, *n)?;
        let equal = lhs == rhs;
        let detail = if equal {
            format!("x = {x}; y = {y}")
        } else {
            format!(
                "x = {x}; y = {y}; Z_N(x*y) = {} but Z_N(x)Z_N(y) = {}",
                format_rational(&lhs),
                format_rational(&rhs)
            )
        };
        cases.push(CaseRecord::exact(
            format!("{label} N={n}"),
            equal,
            Some(detail),
        ));
    }
    let params = json!({
        "seed": cfg.seed,
        "pairs": cfg.harmonic_pairs,
        "operandMaxWeight": weight,
        "n": cfg.harmonic_n,
        "sampler": "chacha8",
    });
    Ok(Report::new(claim("zn-harmonic")?, params, cases))
}

/// `|ζ♭ − ζ♮|` decays like `N⁻¹ log^a N`.
pub fn verify_flat_natural(cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.max_weight.min(4);
    let ns = cfg.schedule();
    let indices = Index::all_up_to_weight(weight);
    let cases = par_map(cfg, &indices, |k| {
        let flat = ConstraintChain::flat(k);
        let natural = ConstraintChain::natural(k);
        let obs: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| (n as f64, (flat.eval_f64(n) - natural.eval_f64(n)).abs()))
            .collect();
        let fit = fit_log_rate(&obs, fit_opts(cfg, k.weight() + 1))?;
        Ok(CaseRecord::rate(format!("k={}", fmt_index(k)), fit))
    })?;
    let params = json!({"maxWeight": weight, "nSchedule": n_list(&ns), "slack": cfg.slack});
    Ok(Report::new(claim("prop-flat-natural")?, params, cases))
}

/// Argument catalog for the R-value bounds, covering every clause.
pub fn lemma_r_catalog() -> Vec<RArgs> {
    [
        "1;0",
        "2;0",
        "1;1",
        "1;2",
        "3;1",
        "1,1;0,0",
        "2,1;0,0",
        "1,2;0,0",
        "1,0;0,1",
        "1,1;1,0",
        "1,0;0,2",
        "2,0;0,1",
        "2,1;0,1",
        "1,1;0,1",
        "1,1,1;0,0,0",
        "2,0,0;0,1,1",
        "1,1,2;0,1,0",
        "3,1,0;0,0,1",
        "1,0,1;1,1,0",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog entry"))
    .collect()
}

fn r_observations(args: &RArgs, ns: &[u64]) -> Vec<(f64, f64)> {
    let chain = ConstraintChain::r_value(args);
    ns.iter().map(|&n| (n as f64, chain.eval_f64(n))).collect()
}

fn lemma_r_cases(clause: &str, cfg: &CampaignConfig) -> Result<Vec<CaseRecord>> {
    let ns = cfg.schedule();
    let catalog: Vec<RArgs> = lemma_r_catalog()
        .into_iter()
        .filter(|r| match clause {
            "ii" => r.has_mixed_position(),
            "iii" => r.has_heavy_then_inverse(),
            _ => true,
        })
        .collect();
    par_map(cfg, &catalog, |args| {
        let k = args.len();
        let opts = RateFitOptions {
            n_power: if clause == "i" { 0 } else { 1 },
            ..fit_opts(cfg, k)
        };
        let fit = fit_log_rate(&r_observations(args, &ns), opts)?;
        Ok(CaseRecord::rate(format!("R({args}) k={k}"), fit))
    })
}

fn lemma_r_sentinels(cfg: &CampaignConfig) -> Result<Vec<CaseRecord>> {
    let convergent: RArgs = "2,1;0,0".parse()?;
    let limit = mzv(&Index::new(vec![1, 2])?, cfg.mzv_tol)?;
    let value = r_value_f64(&convergent, R_SENTINEL_N);
    let gap = (value - limit.value).abs();
    let near = CaseRecord::residual(
        format!("R({convergent}) N={R_SENTINEL_N} vs zeta(1,2)"),
        gap,
        gap + limit.error_bound < R_SENTINEL_TOL,
    )
    .with_detail(format!("R = {value}, zeta(1,2) = {}", limit.value));

    let divergent: RArgs = "1,2;0,0".parse()?;
    let values: Vec<f64> = cfg
        .schedule()
        .iter()
        .map(|&n| r_value_f64(&divergent, n))
        .collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let growth = CaseRecord::exact(
        format!("R({divergent}) strictly increasing"),
        increasing,
        Some(format!("{values:?}")),
    );
    Ok(vec![near, growth])
}

/// All clauses of the R-value bounds plus the two limit sentinels.
pub fn verify_lemma_r(cfg: &CampaignConfig) -> Result<Vec<Report>> {
    ["lemma-R-i", "lemma-R-ii", "lemma-R-iii", "lemma-R-limits"]
        .iter()
        .map(|id| verify_lemma_r_clause(id, cfg))
        .collect()
}

pub(super) fn verify_lemma_r_clause(id: &str, cfg: &CampaignConfig) -> Result<Report> {
    let cases = match id {
        "lemma-R-i" => lemma_r_cases("i", cfg)?,
        "lemma-R-ii" => lemma_r_cases("ii", cfg)?,
        "lemma-R-iii" => lemma_r_cases("iii", cfg)?,
        _ => lemma_r_sentinels(cfg)?,
    };
    let params = if id == "lemma-R-limits" {
        json!({"sentinelN": R_SENTINEL_N, "sentinelTol": R_SENTINEL_TOL, "mzvTol": cfg.mzv_tol,
               "nSchedule": n_list(&cfg.schedule())})
    } else {
        json!({"nSchedule": n_list(&cfg.schedule()), "slack": cfg.slack, "logExponent": "depth"})
    };
    Ok(Report::new(claim(id)?, params, cases))
}

fn float_evaluators(ns: &[u64], variant: Variant) -> Vec<FloatZn> {
    ns.iter().map(|&n| FloatZn::new(n, variant)).collect()
}

/// `Z♮(w₁)Z♮(w₀) − Z♮(w₁ sh w₀)` decays, and equals the coincidence sum exactly at small `N`.
pub fn verify_asymp_shuffle(cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.asymptotic_weight();
    let ns = cfg.schedule();
    let pairs = edsr_pairs(weight);
    let rate_cases = par_map(cfg, &pairs, |(w1, w0)| {
        let (x, y) = (LinComb::from(w1), LinComb::from(w0));
        let sh = shuffle(&x, &y);
        let mut obs = Vec::with_capacity(ns.len());
        for mut z in float_evaluators(&ns, Variant::Natural) {
            let residual = z.apply(&x)? * z.apply(&y)? - z.apply(&sh)?;
            obs.push((z.n() as f64, residual.abs()));
        }
        let fit = fit_log_rate(&obs, fit_opts(cfg, w1.weight() + w0.weight() + 1))?;
        Ok(CaseRecord::rate(format!("rate {}", pair_key(w1, w0)), fit))
    })?;
    let exact_cases = par_map(cfg, &pairs, |(w1, w0)| {
        let n = SHUFFLE_EXACT_N;
        let sh = shuffle(&LinComb::from(w1), &LinComb::from(w0));
        let mut defect = zeta_natural(w1, n) * zeta_natural(w0, n);
        for (k, c) in sh.index_terms()? {
            defect -= c * zeta_natural(&k, n);
        }
        let diagonal = coincidence_sum(w1, w0, n, BruteForceCaps::default())?;
        let equal = defect == diagonal;
        Ok(CaseRecord::exact(
            format!("exact {} N={n}", pair_key(w1, w0)),
            equal,
            Some(format!("defect {}", format_rational(&defect))),
        ))
    })?;
    let params = json!({
        "maxWeight": weight,
        "nSchedule": n_list(&ns),
        "slack": cfg.slack,
        "exactN": SHUFFLE_EXACT_N,
        "pairs": pairs.len(),
    });
    let cases = rate_cases.into_iter().chain(exact_cases).collect();
    Ok(Report::new(claim("prop-asymp-shuffle")?, params, cases))
}

/// `Z_N(w₁*w₀ − w₁ sh w₀)` decays like `N⁻¹ log^a N`.
pub fn verify_asymp_dsr(cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.asymptotic_weight();
    let ns = cfg.schedule();
    let pairs = edsr_pairs(weight);
    let cases = par_map(cfg, &pairs, |(w1, w0)| {
        let d = dsr_defect(w1, w0)?;
        let mut obs = Vec::with_capacity(ns.len());
        for mut z in float_evaluators(&ns, Variant::Plain) {
            obs.push((z.n() as f64, z.apply(&d)?.abs()));
        }
        let fit = fit_log_rate(&obs, fit_opts(cfg, w1.weight() + w0.weight() + 1))?;
        Ok(CaseRecord::rate(pair_key(w1, w0), fit))
    })?;
    let params = json!({"maxWeight": weight, "nSchedule": n_list(&ns), "slack": cfg.slack,
                        "pairs": pairs.len()});
    Ok(Report::new(claim("thm-main")?, params, cases))
}

/// `|H_{N−1} − log N − γ|` for `N = 10, 10², …, 10⁶`.
pub fn harmonic_sentinel() -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut h = 0.0f64;
    let mut next = 10u64;
    for m in 1..1_000_000u64 {
        h += 1.0 / m as f64;
        if m + 1 == next {
            out.push((next, (h - (next as f64).ln() - EULER_GAMMA).abs()));
            next *= 10;
        }
    }
    out
}

/// `ζ_{<N}(k) − Z*_k(log N + γ)` decays, plus the harmonic-number sentinel.
pub fn verify_asymp_h(cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.asymptotic_weight();
    let ns = cfg.schedule();
    let indices = Index::all_up_to_weight(weight);
    let mut cases = par_map(cfg, &indices, |k| {
        let poly = z_star_polynomial(k);
        let chain = ConstraintChain::plain(k);
        let mut obs = Vec::with_capacity(ns.len());
        for &n in &ns {
            let t = (n as f64).ln() + EULER_GAMMA;
            let expansion = eval_reg_polynomial(&poly, t, EXPANSION_TOL)?;
            obs.push((n as f64, (chain.eval_f64(n) - expansion.value).abs()));
        }
        let fit = fit_log_rate(&obs, fit_opts(cfg, k.weight() + 1))?;
        Ok(CaseRecord::rate(format!("k={}", fmt_index(k)), fit))
    })?;
    for (n, r) in harmonic_sentinel() {
        cases.push(CaseRecord::residual(
            format!("sentinel H_(N-1) N={n}"),
            r,
            r < 1.0 / n as f64,
        ));
    }
    let params = json!({"maxWeight": weight, "nSchedule": n_list(&ns), "slack": cfg.slack,
                        "expansionTol": EXPANSION_TOL});
    Ok(Report::new(claim("prop-asymp-H")?, params, cases))
}

/// `Li_k(z) − Z^sh_k(−log(1−z))` decays like `(1−z) log^a(1−z)` on `z = 1 − 2^{−m}`.
pub fn verify_asymp_li(cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.asymptotic_weight();
    let (lo, hi) = cfg.n_schedule;
    let indices = Index::all_up_to_weight(weight);
    let noise = 10.0 * (cfg.li_tol + EXPANSION_TOL);
    let cases = par_map(cfg, &indices, |k| {
        let poly = z_sh_polynomial(k);
        let mut obs = Vec::new();
        for m in lo..=hi {
            let inv = 2f64.powi(m as i32);
            let z = 1.0 - 1.0 / inv;
            let li = li_value(k, z, cfg.li_tol)?;
            let expansion = eval_reg_polynomial(&poly, inv.ln(), EXPANSION_TOL)?;
            obs.push((inv, (li.value - expansion.value).abs()));
        }
        let opts = RateFitOptions {
            noise_floor: noise,
            ..fit_opts(cfg, k.weight() + 1)
        };
        let fit = fit_log_rate(&obs, opts)?;
        Ok(CaseRecord::rate(format!("k={}", fmt_index(k)), fit))
    })?;
    let params = json!({"maxWeight": weight, "zGrid": format!("1-2^-m, m={lo}..{hi}"),
                        "liTol": cfg.li_tol, "noiseFloor": noise, "slack": cfg.slack});
    Ok(Report::new(claim("prop-asymp-Li")?, params, cases))
}

/// Both regularized double shuffle checks.
pub fn verify_edsr(cfg: &CampaignConfig) -> Result<Vec<Report>> {
    ["thm-edsr-star", "thm-edsr-sh"]
        .iter()
        .map(|id| verify_edsr_clause(id, cfg))
        .collect()
}

pub(super) fn verify_edsr_clause(id: &str, cfg: &CampaignConfig) -> Result<Report> {
    let weight = cfg.asymptotic_weight();
    let pairs = edsr_pairs(weight);
    let cases = par_map(cfg, &pairs, |(w1, w0)| {
        let d = dsr_defect(w1, w0)?;
        let reg = if id == "thm-edsr-star" {
            reg_star(&d)?
        } else {
            reg_sh(&d)?
        };
        let z = z_value(&reg, cfg.mzv_tol)?;
        let residual = z.value.abs();
        Ok(CaseRecord::residual(
            pair_key(w1, w0),
            residual,
            residual + z.error_bound < cfg.tol,
        )
        .with_detail(format!("reg = {reg}; errorBound = {:e}", z.error_bound)))
    })?;
    let params = json!({"maxWeight": weight, "tol": cfg.tol, "mzvTol": cfg.mzv_tol,
                        "pairs": pairs.len()});
    Ok(Report::new(claim(id)?, params, cases))
}
