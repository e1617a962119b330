use serde::Serialize;

use crate::error::{domain, Result};

/// Settings for [`fit_log_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RateFitOptions {
    /// Largest log exponent tried.
    pub a_max: u32,
    /// Allowed growth factor between normalized values.
    pub slack: f64,
    /// Power of `N` in the normalization `residual · N^p / (log N)^a`; `1` for
    /// `O(N⁻¹ log^a N)` claims, `0` for `O(log^a N)` growth bounds.
    pub n_power: i32,
    /// Residuals at or below this magnitude are treated as zero.
    pub noise_floor: f64,
}

impl Default for RateFitOptions {
    fn default() -> Self {
        RateFitOptions {
            a_max: 3,
            slack: 1.25,
            n_power: 1,
            noise_floor: 0.0,
        }
    }
}

impl RateFitOptions {
    pub fn with_a_max(self, a_max: u32) -> Self {
        RateFitOptions { a_max, ..self }
    }
}

/// Result of fitting a `residual = O(N^{-p} log^a N)` contract to observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RateFit {
    /// `(N, |residual|)` pairs.
    pub observations: Vec<(f64, f64)>,
    /// Smallest qualifying `a`, or `None` when no `a ≤ a_max` qualifies.
    pub fitted_log_exponent: Option<u32>,
    /// Maximum of the normalized sequence over the tail half.
    pub bounded_constant: Option<f64>,
    pub options: RateFitOptions,
}

impl RateFit {
    pub fn passed(&self) -> bool {
        self.fitted_log_exponent.is_some()
    }
}

/// Finds the smallest `a` in `0..=a_max` such that `|residual| · N^p / (ln N)^a`
/// does not grow over the tail half of the observations: every step grows by at
/// most `slack`, and the last value is within `slack` of the first tail value.
pub fn fit_log_rate(obs: &[(f64, f64)], opts: RateFitOptions) -> Result<RateFit> {
    if obs.len() < 5 {
        return domain(format!(
            "rate fit needs at least 5 observations, got {}",
            obs.len()
        ));
    }
    if obs
        .iter()
        .any(|&(n, r)| !(n > 1.0) || !n.is_finite() || !r.is_finite())
    {
        return domain("rate fit needs N > 1 and finite residuals");
    }
    let ratio = obs[1].0 / obs[0].0;
    if !(ratio > 1.0)
        || obs
            .windows(2)
            .any(|w| ((w[1].0 / w[0].0) - ratio).abs() > 1e-9 * ratio)
    {
        return domain("rate fit needs N increasing by a fixed factor");
    }
    if !(opts.slack >= 1.0) {
        return domain("rate fit slack must be at least 1");
    }

    let observations: Vec<(f64, f64)> = obs.iter().map(|&(n, r)| (n, r.abs())).collect();
    let tail = &observations[observations.len() / 2..];
    let effective = |r: f64| if r <= opts.noise_floor { 0.0 } else { r };

    let mut fitted = None;
    let mut constant = None;
    if tail.iter().all(|&(_, r)| effective(r) == 0.0) {
        fitted = Some(0);
        constant = Some(0.0);
    } else {
        for a in 0..=opts.a_max {
            let s: Vec<f64> = tail
                .iter()
                .map(|&(n, r)| effective(r) * n.powi(opts.n_power) / n.ln().powi(a as i32))
                .collect();
            let steps_ok = s.windows(2).all(|w| w[1] <= opts.slack * w[0]);
            let drift_ok = s[s.len() - 1] <= opts.slack * s[0];
            if steps_ok && drift_ok {
                fitted = Some(a);
                constant = Some(s.iter().copied().fold(0.0, f64::max));
                break;
            }
        }
    }
    Ok(RateFit {
        observations,
        fitted_log_exponent: fitted,
        bounded_constant: constant,
        options: opts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule() -> Vec<f64> {
        (4..=14).map(|e| 2f64.powi(e)).collect()
    }

    fn synth(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        schedule().into_iter().map(|n| (n, f(n))).collect()
    }

    #[test]
    fn recovers_planted_exponents() {
        for a in 0..=3 {
            let obs = synth(|n| 0.7 * n.ln().powi(a) / n);
            let fit = fit_log_rate(&obs, RateFitOptions::default().with_a_max(5)).unwrap();
            assert_eq!(fit.fitted_log_exponent, Some(a as u32), "planted a = {a}");
            assert!((fit.bounded_constant.unwrap() - 0.7).abs() < 1e-9);
        }
    }

    #[test]
    fn c_over_n() {
        let fit = fit_log_rate(&synth(|n| 3.0 / n), RateFitOptions::default()).unwrap();
        assert_eq!(fit.fitted_log_exponent, Some(0));
        assert!((fit.bounded_constant.unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn constant_residual_fails() {
        let fit = fit_log_rate(&synth(|_| 0.25), RateFitOptions::default()).unwrap();
        assert!(!fit.passed());
        assert_eq!(fit.bounded_constant, None);
    }

    #[test]
    fn zero_and_noise_residuals_pass() {
        let fit = fit_log_rate(&synth(|_| 0.0), RateFitOptions::default()).unwrap();
        assert_eq!(fit.fitted_log_exponent, Some(0));
        let opts = RateFitOptions {
            noise_floor: 1e-10,
            ..Default::default()
        };
        let noisy = synth(|n| 1e-13 * (n.sin() + 1.5));
        assert!(fit_log_rate(&noisy, opts).unwrap().passed());
    }

    #[test]
    fn log_growth_mode() {
        let opts = RateFitOptions {
            n_power: 0,
            ..Default::default()
        };
        let fit = fit_log_rate(&synth(|n| 2.0 * n.ln().powi(2) + 1.0), opts).unwrap();
        assert_eq!(fit.fitted_log_exponent, Some(2));
    }

    #[test]
    fn input_validation() {
        assert!(fit_log_rate(&synth(|n| 1.0 / n)[..4], RateFitOptions::default()).is_err());
        let mut obs = synth(|n| 1.0 / n);
        obs[3].0 = obs[2].0;
        assert!(fit_log_rate(&obs, RateFitOptions::default()).is_err());
        let mut obs = synth(|n| 1.0 / n);
        obs[3].1 = f64::NAN;
        assert!(fit_log_rate(&obs, RateFitOptions::default()).is_err());
    }
}
