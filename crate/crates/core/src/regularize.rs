//! Regularization: the algebra isomorphisms `H¹_* ≅ H⁰_*[T]` and
//! `H¹_sh ≅ H⁰_sh[T]` sending `e1 ↦ T`, and the maps `reg_*`, `reg_sh`
//! obtained by specializing `T ↦ 0`.
//!
//! A word `w = v·e1^t` (with `v` empty or ending in `e0`) is eliminated by
//! expanding `v ⋆ e1^{⋆t}`: the expansion contains `w` with coefficient `t!`
//! (harmonic) or `1` (shuffle against the word `e1^t`) and otherwise only words
//! with fewer trailing `e1`, so recursion on the trailing count terminates.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};
use crate::hoffman::{harmonic, shuffle, Index, LinComb, Product, Word};

/// A polynomial in `T` with `H⁰`-supported coefficients; `coeffs[i]` multiplies `T^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegPolynomial {
    coeffs: Vec<LinComb>,
}

impl RegPolynomial {
    pub fn zero() -> RegPolynomial {
        RegPolynomial {
            coeffs: vec![LinComb::zero()],
        }
    }

    pub fn constant(c: LinComb) -> RegPolynomial {
        RegPolynomial::from_coeffs(vec![c])
    }

    /// `c · T^degree`.
    pub fn monomial(c: LinComb, degree: usize) -> RegPolynomial {
        let mut coeffs = vec![LinComb::zero(); degree + 1];
        coeffs[degree] = c;
        RegPolynomial::from_coeffs(coeffs)
    }

    /// Builds a polynomial, trimming zero leading coefficients.
    pub fn from_coeffs(mut coeffs: Vec<LinComb>) -> RegPolynomial {
        while coeffs.len() > 1 && coeffs.last().is_some_and(LinComb::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(LinComb::zero());
        }
        RegPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn coeffs(&self) -> &[LinComb] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> LinComb {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// The constant coefficient `c₀`.
    pub fn constant_term(&self) -> &LinComb {
        &self.coeffs[0]
    }

    pub fn add(&self, other: &RegPolynomial) -> RegPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        RegPolynomial::from_coeffs((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RegPolynomial) -> RegPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        RegPolynomial::from_coeffs((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> RegPolynomial {
        RegPolynomial::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// Product in `H⁰[T]`, multiplying coefficients with `product`.
    pub fn mul(&self, other: &RegPolynomial, product: Product) -> Result<RegPolynomial> {
        let mut coeffs = vec![LinComb::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &product.apply(a, b)?;
            }
        }
        Ok(RegPolynomial::from_coeffs(coeffs))
    }

    /// Substitutes `T ↦ e1`, powers taken with `product`: `Σ c_i ⋆ e1^{⋆i}`.
    pub fn substitute_e1(&self, product: Product) -> Result<LinComb> {
        let e1 = LinComb::from(Word::e1_power(1));
        let mut power = LinComb::one();
        let mut out = LinComb::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = product.apply(&power, &e1)?;
            }
            out += &product.apply(c, &power)?;
        }
        Ok(out)
    }
}

impl Serialize for RegPolynomial {
    /// `[[i, c_i], …]` in ascending exponent.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            seq.serialize_element(&(i, c))?;
        }
        seq.end()
    }
}

type Cache = RwLock<HashMap<(Product, Word), Arc<RegPolynomial>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn factorial(t: usize) -> BigRational {
    BigRational::from_integer((1..=t).fold(BigInt::one(), |acc, i| acc * i))
}

fn decompose_word(product: Product, w: Word) -> Result<Arc<RegPolynomial>> {
    if !w.in_h1() {
        return domain(format!("word {w} is not in H¹"));
    }
    let (v, t) = w.split_trailing_e1();
    if t == 0 {
        return Ok(Arc::new(RegPolynomial::constant(LinComb::from(w))));
    }
    if let Some(hit) = cache()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(product, w))
    {
        return Ok(Arc::clone(hit));
    }

    let v_lc = LinComb::from(v);
    let t_fact = factorial(t);
    // expansion = lead·w + lower, with `lower` of trailing-e1 count < t
    let (expansion, lead) = match product {
        Product::Harmonic => {
            let e1 = LinComb::from(Word::e1_power(1));
            (
                harmonic(&v_lc, &Product::Harmonic.power(&e1, t)?)?,
                t_fact.clone(),
            )
        }
        Product::Shuffle => (
            shuffle(&v_lc, &LinComb::from(Word::e1_power(t))),
            BigRational::one(),
        ),
    };
    let mut lower = expansion;
    lower.add_term(w, -lead.clone());
    debug_assert!(lower.words().all(|u| u.trailing_e1() < t));

    // image of the expansion: v·T^t (harmonic) or v·T^t/t! (shuffle)
    let image = match product {
        Product::Harmonic => RegPolynomial::monomial(v_lc, t),
        Product::Shuffle => RegPolynomial::monomial(v_lc, t).scale(&(BigRational::one() / &t_fact)),
    };
    let result = image
        .sub(&decompose(product, &lower)?)
        .scale(&(BigRational::one() / lead));

    let result = Arc::new(result);
    cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert((product, w), Arc::clone(&result));
    Ok(result)
}

/// Decomposition of an `H¹` element as a polynomial in `T = e1` over `H⁰`.
pub fn decompose(product: Product, x: &LinComb) -> Result<RegPolynomial> {
    if !x.support_in_h1() {
        return domain("regularization is defined on H¹ only");
    }
    let mut acc = RegPolynomial::zero();
    for (w, c) in x.iter() {
        acc = acc.add(&decompose_word(product, *w)?.scale(c));
    }
    Ok(acc)
}

/// `H¹_* → H⁰_*[T]`.
pub fn star_decompose(x: &LinComb) -> Result<RegPolynomial> {
    decompose(Product::Harmonic, x)
}

/// `H¹_sh → H⁰_sh[T]`.
pub fn shuffle_decompose(x: &LinComb) -> Result<RegPolynomial> {
    decompose(Product::Shuffle, x)
}

/// `reg_*`: constant term of [`star_decompose`].
pub fn reg_star(x: &LinComb) -> Result<LinComb> {
    Ok(star_decompose(x)?.constant_term().clone())
}

/// `reg_sh`: constant term of [`shuffle_decompose`].
pub fn reg_sh(x: &LinComb) -> Result<LinComb> {
    Ok(shuffle_decompose(x)?.constant_term().clone())
}

/// `Z*_k(T)` with word-level coefficients.
pub fn z_star_polynomial(k: &Index) -> RegPolynomial {
    star_decompose(&LinComb::from(k)).expect("index words lie in H¹")
}

/// `Z^sh_k(T)` with word-level coefficients.
pub fn z_sh_polynomial(k: &Index) -> RegPolynomial {
    shuffle_decompose(&LinComb::from(k)).expect("index words lie in H¹")
}
