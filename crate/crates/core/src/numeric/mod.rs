//! Floating-point evaluation: MZVs, multiple polylogarithms, Euler's constant,
//! regularized polynomials, and floating versions of the truncated sums.

mod fit;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};
use crate::finitesum::{ConstraintChain, RArgs, Variant};
use crate::hoffman::{Index, LinComb, Word};
use crate::regularize::RegPolynomial;

pub use fit::{fit_log_rate, RateFit, RateFitOptions};

/// Smallest tolerance the `f64` evaluators accept.
pub const MIN_TOL: f64 = 1e-12;

/// Default tolerance for [`mzv`].
pub const DEFAULT_MZV_TOL: f64 = 1e-7;

/// Default tolerance for [`li_value`].
pub const DEFAULT_LI_TOL: f64 = 1e-9;

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// A floating value with an estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    pub value: f64,
    pub error_bound: f64,
}

impl Real {
    pub fn exact(value: f64) -> Real {
        Real {
            value,
            error_bound: 0.0,
        }
    }

    /// Whether `|self - x| ≤ slack + error_bound`.
    pub fn agrees_with(&self, x: f64, slack: f64) -> bool {
        (self.value - x).abs() <= slack + self.error_bound
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Real", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("errorBound", &self.error_bound.to_string())?;
        st.end()
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= MIN_TOL) || !tol.is_finite() {
        return domain(format!(
            "tolerance {tol} is below the supported precision {MIN_TOL}"
        ));
    }
    Ok(())
}

/// `Li_k(z)` by the nested power series `Σ_{0<n₁<⋯<n_r} z^{n_r} / ∏ n_i^{k_i}`.
///
/// Truncation stops once a bound on the remaining tail drops below `tol / 2`.
/// The empty index gives `1`.
pub fn li_value(k: &Index, z: f64, tol: f64) -> Result<Real> {
    if !(z > 0.0 && z < 1.0) {
        return domain(format!("Li_k(z) needs 0 < z < 1, got {z}"));
    }
    check_tol(tol)?;
    li_series(k, z, tol)
}

fn li_series(k: &Index, z: f64, tol: f64) -> Result<Real> {
    if k.is_empty() {
        return Ok(Real::exact(1.0));
    }
    const MAX_TERMS: u64 = 200_000_000;
    let parts = k.parts();
    let depth = parts.len();
    // prefix[j] = Σ_{m<n} S_{j+1}(m)
    let mut prefix = vec![0.0f64; depth];
    let mut level = vec![0.0f64; depth];
    let mut zn = 1.0f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut n: u64 = 0;
    loop {
        n += 1;
        if n > MAX_TERMS {
            return domain(format!("Li_k(z) series did not converge for z = {z}"));
        }
        let nf = n as f64;
        zn *= z;
        for j in 0..depth {
            let inner = if j == 0 { 1.0 } else { prefix[j - 1] };
            level[j] = inner * nf.powi(-(parts[j] as i32));
        }
        for j in 0..depth {
            prefix[j] += level[j];
        }
        // Neumaier summation of z^n S_r(n)
        let term = zn * level[depth - 1];
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;

        // S_r(m) ≤ (1 + ln m)^{r-1}; consecutive ratios of z^m (1+ln m)^{r-1} are ≤ ρ(m)
        let m = nf + 1.0;
        let c = (1.0 + m.ln()).powi(depth as i32 - 1);
        let rho = z * (1.0 + 1.0 / (m * (1.0 + m.ln()))).powi(depth as i32 - 1);
        if rho < 1.0 {
            let tail = zn * z * c / (1.0 - rho);
            if tail <= tol / 2.0 {
                let value = sum + comp;
                let rounding = 4.0 * f64::EPSILON * nf.sqrt() * value.abs();
                return Ok(Real {
                    value,
                    error_bound: tail + rounding,
                });
            }
        }
    }
}

/// `ζ(k)` for admissible `k`.
///
/// The iterated integral over `(0,1)` is split at `t = 1/2`: for the word
/// `a₁⋯a_n` of `k`,
/// `ζ(k) = Σ_j I_{(0,1/2)}(a₁⋯a_j) · I_{(0,1/2)}(ā_n⋯ā_{j+1})`,
/// where `ā` swaps `e0` and `e1` (the substitution `t ↦ 1-t`). Both factors are
/// multiple polylogarithms at `1/2`.
pub fn mzv(k: &Index, tol: f64) -> Result<Real> {
    if !k.is_admissible() {
        return domain(format!("ζ({k}) diverges: index is not admissible"));
    }
    check_tol(tol)?;
    if k.is_empty() {
        return Ok(Real::exact(1.0));
    }
    let word = k.to_word();
    let n = word.len();
    let part_tol = (tol / (4.0 * (n as f64 + 1.0))).max(1e-16);
    let mut value = 0.0;
    let mut error = 0.0;
    for j in 0..=n {
        let left = Index::from_word(&word.prefix(j))?;
        let right_word = Word::from_letters(word.letters().skip(j).rev().map(|l| l.dual()));
        let right = Index::from_word(&right_word)?;
        let a = li_series(&left, 0.5, part_tol)?;
        let b = li_series(&right, 0.5, part_tol)?;
        value += a.value * b.value;
        error += a.error_bound * b.value.abs()
            + b.error_bound * a.value.abs()
            + a.error_bound * b.error_bound;
    }
    Ok(Real {
        value,
        error_bound: error + 8.0 * f64::EPSILON * value.abs(),
    })
}

/// `ζ(k)` by truncating the harmonic sum at `N = start, 2·start, 4·start, …`
/// until successive values differ by less than `tol / 2`.
///
/// Slow for indices with `log`-heavy tails; kept as an independent check on [`mzv`].
pub fn mzv_by_doubling(k: &Index, tol: f64, start: u64, max_n: u64) -> Result<Real> {
    if !k.is_admissible() {
        return domain(format!("ζ({k}) diverges: index is not admissible"));
    }
    check_tol(tol)?;
    let chain = ConstraintChain::plain(k);
    let mut n = start.max(2);
    let mut prev = chain.eval_f64(n);
    while n <= max_n / 2 {
        n *= 2;
        let cur = chain.eval_f64(n);
        let diff = (cur - prev).abs();
        if diff < tol / 2.0 {
            return Ok(Real {
                value: cur,
                error_bound: diff,
            });
        }
        prev = cur;
    }
    domain(format!(
        "ζ({k}) truncation did not reach tolerance {tol} by N = {max_n}"
    ))
}

/// Euler's constant.
pub fn euler_gamma() -> Real {
    Real {
        value: EULER_GAMMA,
        error_bound: f64::EPSILON * EULER_GAMMA,
    }
}

/// `Z(x)` for `H⁰`-supported `x`, each word evaluated by [`mzv`].
pub fn z_value(x: &LinComb, tol: f64) -> Result<Real> {
    if !x.support_in_h0() {
        return domain("Z is only defined on H⁰");
    }
    let count = x.len().max(1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for (w, c) in x.iter() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let word_tol = (tol / (count * c.abs().max(1.0))).max(MIN_TOL);
        let z = mzv(&Index::from_word(w)?, word_tol)?;
        value += c * z.value;
        error += c.abs() * z.error_bound;
    }
    Ok(Real {
        value,
        error_bound: error,
    })
}

/// `Σ_i Z(c_i) t^i`.
pub fn eval_reg_polynomial(p: &RegPolynomial, t: f64, tol: f64) -> Result<Real> {
    check_tol(tol)?;
    let terms = (p.degree() + 1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for (i, c) in p.coeffs().iter().enumerate() {
        let scale = t.abs().powi(i as i32);
        let z = z_value(c, (tol / (terms * scale.max(1.0))).max(MIN_TOL))?;
        value += z.value * t.powi(i as i32);
        error += z.error_bound * scale;
    }
    Ok(Real {
        value,
        error_bound: error,
    })
}

/// Floating `ζ_{<N}`, `ζ♭_{<N}`, `ζ♮_{<N}` evaluator with a per-index cache.
#[derive(Debug)]
pub struct FloatZn {
    n: u64,
    variant: Variant,
    cache: HashMap<Index, f64>,
}

impl FloatZn {
    pub fn new(n: u64, variant: Variant) -> FloatZn {
        FloatZn {
            n,
            variant,
            cache: HashMap::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn index_value(&mut self, k: &Index) -> f64 {
        if let Some(&v) = self.cache.get(k) {
            return v;
        }
        let v = ConstraintChain::for_variant(k, self.variant).eval_f64(self.n);
        self.cache.insert(k.clone(), v);
        v
    }

    pub fn apply(&mut self, x: &LinComb) -> Result<f64> {
        if !x.support_in_h1() {
            return domain("Z_N is defined on H¹ only");
        }
        let mut total = 0.0;
        for (w, c) in x.iter() {
            total += c.to_f64().unwrap_or(f64::NAN) * self.index_value(&Index::from_word(w)?);
        }
        Ok(total)
    }
}

/// Floating `R_{<N}(a; b)`.
pub fn r_value_f64(args: &RArgs, n: u64) -> f64 {
    ConstraintChain::r_value(args).eval_f64(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hoffman::rat;
    use std::f64::consts::PI;

    fn idx(p: &[u32]) -> Index {
        Index::new(p.to_vec()).unwrap()
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = mzv(&idx(&[2]), DEFAULT_MZV_TOL).unwrap();
        assert!((z.value - PI * PI / 6.0).abs() < 2.0 * DEFAULT_MZV_TOL);
        let z = mzv(&idx(&[2]), MIN_TOL).unwrap();
        assert!((z.value - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn weight_four_closed_forms() {
        let pi4 = PI.powi(4);
        let z4 = mzv(&idx(&[4]), 1e-10).unwrap().value;
        assert!((z4 - pi4 / 90.0).abs() < 1e-9);
        // self-dual word, so this does not follow from the evaluator's symmetry
        let z13 = mzv(&idx(&[1, 3]), 1e-10).unwrap().value;
        assert!((z13 - pi4 / 360.0).abs() < 1e-9);
        let z112 = mzv(&idx(&[1, 1, 2]), 1e-10).unwrap().value;
        assert!((z112 - z4).abs() < 1e-9);
    }

    #[test]
    fn euler_relation() {
        let a = mzv(&idx(&[1, 2]), 1e-12).unwrap();
        let b = mzv(&idx(&[3]), 1e-12).unwrap();
        assert!((a.value - 1.202_056_903_159_594).abs() < 1e-11);
        assert!((a.value - b.value).abs() < 2e-12);
    }

    #[test]
    fn zeta_two_two_from_harmonic_square() {
        let z22 = mzv(&idx(&[2, 2]), 1e-12).unwrap().value;
        let z2 = PI * PI / 6.0;
        let z4 = PI.powi(4) / 90.0;
        assert!((z22 - (z2 * z2 - z4) / 2.0).abs() < 1e-11);
    }

    #[test]
    fn mzv_rejects_bad_input() {
        assert!(mzv(&idx(&[2, 1]), 1e-7).is_err());
        assert!(mzv(&idx(&[2]), 1e-13).is_err());
        assert_eq!(mzv(&Index::empty(), 1e-7).unwrap().value, 1.0);
    }

    #[test]
    fn doubling_route_agrees() {
        let fast = mzv(&idx(&[2]), 1e-12).unwrap();
        let slow = mzv_by_doubling(&idx(&[2]), 1e-5, 64, 1 << 24).unwrap();
        assert!((fast.value - slow.value).abs() < 1e-5);
        let fast = mzv(&idx(&[3]), 1e-12).unwrap();
        let slow = mzv_by_doubling(&idx(&[3]), 1e-8, 64, 1 << 24).unwrap();
        assert!((fast.value - slow.value).abs() < 1e-8);
    }

    #[test]
    fn li_closed_forms() {
        for i in 1..10 {
            let z = i as f64 / 10.0;
            let l = -(1.0 - z).ln();
            let li1 = li_value(&idx(&[1]), z, 1e-12).unwrap();
            assert!(li1.agrees_with(l, 1e-12), "z = {z}");
            let li11 = li_value(&idx(&[1, 1]), z, 1e-12).unwrap();
            assert!(li11.agrees_with(l * l / 2.0, 1e-12), "z = {z}");
        }
        assert!(
            (li_value(&idx(&[1]), 0.5, 1e-12).unwrap().value - std::f64::consts::LN_2).abs()
                < 1e-12
        );
    }

    #[test]
    fn li_small_z_and_domain() {
        assert!(li_value(&idx(&[2, 3]), 1e-9, 1e-12).unwrap().value.abs() < 1e-8);
        assert!(li_value(&idx(&[2]), 1.0, 1e-9).is_err());
        assert!(li_value(&idx(&[2]), 0.0, 1e-9).is_err());
    }

    #[test]
    fn li_approaches_mzv() {
        let z2 = mzv(&idx(&[2]), 1e-12).unwrap().value;
        let mut prev = 0.0;
        for m in 1..14 {
            let z = 1.0 - 0.5f64.powi(m);
            let v = li_value(&idx(&[2]), z, 1e-12).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
        let z = 0.999;
        let gap = z2 - li_value(&idx(&[2]), z, 1e-12).unwrap().value;
        let scale = (1.0 - z) * (1.0 - z).ln().abs();
        assert!(gap > 0.0 && gap < 2.0 * scale, "gap {gap} vs {scale}");
    }

    #[test]
    fn gamma_constant() {
        let g = euler_gamma();
        assert!((g.value - 0.577_215_664_901_532_8).abs() < 1e-15);
        let h10: f64 = (1..=10).map(|i| 1.0 / i as f64).sum();
        let d = h10 - 10f64.ln() - g.value;
        assert!((d - 0.049_167).abs() < 1e-5 && d < 1.0 / 20.0);
    }

    #[test]
    fn reg_polynomial_evaluation() {
        let t = RegPolynomial::monomial(LinComb::one(), 1);
        assert_eq!(eval_reg_polynomial(&t, 3.0, 1e-9).unwrap().value, 3.0);
        let p = crate::regularize::z_star_polynomial(&idx(&[1, 1]));
        let v = eval_reg_polynomial(&p, 0.0, 1e-10).unwrap().value;
        assert!((v + PI * PI / 12.0).abs() < 1e-10);
        let c = RegPolynomial::constant(LinComb::from(&idx(&[2])));
        for t in [-2.0, 0.0, 5.0] {
            assert!(
                (eval_reg_polynomial(&c, t, 1e-10).unwrap().value - PI * PI / 6.0).abs() < 1e-10
            );
        }
        let bad = RegPolynomial::constant(LinComb::from(&idx(&[2, 1])));
        assert!(eval_reg_polynomial(&bad, 1.0, 1e-9).is_err());
    }

    #[test]
    fn reg_polynomial_is_linear_in_coefficients() {
        let a = crate::regularize::z_star_polynomial(&idx(&[2, 1]));
        let b = crate::regularize::z_star_polynomial(&idx(&[1, 1, 1]));
        let sum = a.add(&b.scale(&rat(3, 2)));
        let t = 1.7;
        let lhs = eval_reg_polynomial(&sum, t, 1e-10).unwrap().value;
        let rhs = eval_reg_polynomial(&a, t, 1e-10).unwrap().value
            + 1.5 * eval_reg_polynomial(&b, t, 1e-10).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn real_serializes_as_strings() {
        let r = Real {
            value: 0.5,
            error_bound: 0.001,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"value":"0.5","errorBound":"0.001"}"#
        );
    }
}
