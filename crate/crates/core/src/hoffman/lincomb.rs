use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::word::{Index, Letter, Word};
use crate::error::{Error, Result};

/// `p/q` as a rational; convenience for literals.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Formats a rational as `"p/q"` (the denominator is always written).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// A finite rational linear combination of words.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// elements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LinComb {
    terms: BTreeMap<Word, BigRational>,
}

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb::default()
    }

    pub fn one() -> LinComb {
        LinComb::from(Word::empty())
    }

    pub fn term(coeff: BigRational, word: Word) -> LinComb {
        let mut out = LinComb::zero();
        out.add_term(word, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in canonical (length-then-lexicographic) order.
    pub fn iter(&self) -> btree_map::Iter<'_, Word, BigRational> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, word: Word, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &LinComb, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (w, a) in other.iter() {
            self.add_term(*w, a * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect(),
        }
    }

    /// Applies `f` to every word (linearly), e.g. appending a block.
    pub fn map_words(&self, f: impl Fn(Word) -> Word) -> LinComb {
        let mut out = LinComb::zero();
        for (w, a) in self.iter() {
            out.add_term(f(*w), a.clone());
        }
        out
    }

    /// Right multiplication by a word (concatenation).
    pub fn append(&self, suffix: Word) -> LinComb {
        self.map_words(|w| w.concat(suffix))
    }

    pub fn append_letter(&self, letter: Letter) -> LinComb {
        self.map_words(|w| w.push(letter))
    }

    pub fn support_in_h1(&self) -> bool {
        self.words().all(Word::in_h1)
    }

    pub fn support_in_h0(&self) -> bool {
        self.words().all(Word::in_h0)
    }

    /// Maximum word length in the support (0 for the zero element).
    pub fn max_len(&self) -> usize {
        self.words().map(Word::len).max().unwrap_or(0)
    }

    /// Sum of absolute values of the coefficients.
    pub fn coefficient_mass(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, a| acc + a.abs())
    }

    /// `(coefficient, word)` pairs in canonical order, coefficients as `"p/q"`.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.iter()
            .map(|(w, a)| (format_rational(a), w.to_string()))
            .collect()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (c, w) in pairs {
            out.add_term(w.as_ref().parse()?, parse_rational(c.as_ref())?);
        }
        Ok(out)
    }

    /// Expresses an `H¹`-supported element as `(coefficient, index)` pairs.
    pub fn index_terms(&self) -> Result<Vec<(Index, BigRational)>> {
        self.iter()
            .map(|(w, a)| Ok((Index::from_word(w)?, a.clone())))
            .collect()
    }
}

impl From<Word> for LinComb {
    fn from(w: Word) -> LinComb {
        LinComb::term(BigRational::one(), w)
    }
}

impl From<&Index> for LinComb {
    fn from(k: &Index) -> LinComb {
        LinComb::from(k.to_word())
    }
}

impl FromIterator<(Word, BigRational)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (Word, BigRational)>>(iter: I) -> LinComb {
        let mut out = LinComb::zero();
        for (w, a) in iter {
            out.add_term(w, a);
        }
        out
    }
}

impl AddAssign<&LinComb> for LinComb {
    fn add_assign(&mut self, rhs: &LinComb) {
        for (w, a) in rhs.iter() {
            self.add_term(*w, a.clone());
        }
    }
}

impl SubAssign<&LinComb> for LinComb {
    fn sub_assign(&mut self, rhs: &LinComb) {
        for (w, a) in rhs.iter() {
            self.add_term(*w, -a.clone());
        }
    }
}

impl Add<&LinComb> for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LinComb> for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LinComb {
    type Output = LinComb;
    fn add(mut self, rhs: LinComb) -> LinComb {
        self += &rhs;
        self
    }
}

impl Sub for LinComb {
    type Output = LinComb;
    fn sub(mut self, rhs: LinComb) -> LinComb {
        self -= &rhs;
        self
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        LinComb {
            terms: self.terms.iter().map(|(w, a)| (*w, -a.clone())).collect(),
        }
    }
}

impl Neg for LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        -&self
    }
}

impl Mul<&BigRational> for &LinComb {
    type Output = LinComb;
    fn mul(self, c: &BigRational) -> LinComb {
        self.scale(c)
    }
}

impl fmt::Display for LinComb {
    /// Human-readable form, e.g. `2·[110] + 1·[10]`; the unit word prints as `[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, a)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{a}·[{w}]")?;
        }
        Ok(())
    }
}

impl Serialize for LinComb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for pair in self.to_pairs() {
            seq.serialize_element(&pair)?;
        }
        seq.end()
    }
}
