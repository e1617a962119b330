use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use super::lincomb::LinComb;
use super::word::{Letter, Word};
use crate::error::{domain, Result};

type Cache = RwLock<HashMap<(Word, Word), Arc<LinComb>>>;

fn harmonic_cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn shuffle_cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(cache: &Cache, key: (Word, Word), compute: impl FnOnce() -> LinComb) -> Arc<LinComb> {
    if let Some(hit) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Arc::clone(hit);
    }
    // computed outside the lock; concurrent writers store identical values
    let value = Arc::new(compute());
    cache
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, Arc::clone(&value));
    value
}

/// The block `e_k = e1 e0^{k-1}`.
fn block(k: usize) -> Word {
    (1..k).fold(Word::empty().push(Letter::E1), |w, _| w.push(Letter::E0))
}

/// Splits a nonempty `H¹` word as `w · e_k` (last block).
fn split_last_block(w: Word) -> (Word, usize) {
    let p = (0..w.len())
        .rev()
        .find(|&i| w.letter(i) == Letter::E1)
        .expect("nonempty H¹ word contains e1");
    (w.prefix(p), w.len() - p)
}

/// Harmonic product of two `H¹` words.
pub fn harmonic_words(a: Word, b: Word) -> Arc<LinComb> {
    if a.is_empty() {
        return Arc::new(LinComb::from(b));
    }
    if b.is_empty() {
        return Arc::new(LinComb::from(a));
    }
    cached(harmonic_cache(), (a, b), || {
        let (wa, ka) = split_last_block(a);
        let (wb, kb) = split_last_block(b);
        let mut out = harmonic_words(wa, b).append(block(ka));
        out += &harmonic_words(a, wb).append(block(kb));
        out += &harmonic_words(wa, wb).append(block(ka + kb));
        out
    })
}

/// Shuffle product of two words.
pub fn shuffle_words(a: Word, b: Word) -> Arc<LinComb> {
    if a.is_empty() {
        return Arc::new(LinComb::from(b));
    }
    if b.is_empty() {
        return Arc::new(LinComb::from(a));
    }
    cached(shuffle_cache(), (a, b), || {
        let (wa, ua) = a.split_last().expect("nonempty");
        let (wb, ub) = b.split_last().expect("nonempty");
        let mut out = shuffle_words(wa, b).append_letter(ua);
        out += &shuffle_words(a, wb).append_letter(ub);
        out
    })
}

fn bilinear(x: &LinComb, y: &LinComb, f: impl Fn(Word, Word) -> Arc<LinComb>) -> LinComb {
    let mut out = LinComb::zero();
    for (wx, cx) in x.iter() {
        for (wy, cy) in y.iter() {
            out.add_scaled(&f(*wx, *wy), &(cx * cy));
        }
    }
    out
}

/// Harmonic (quasi-shuffle) product `x * y` on `H¹`.
pub fn harmonic(x: &LinComb, y: &LinComb) -> Result<LinComb> {
    if !x.support_in_h1() || !y.support_in_h1() {
        return domain("harmonic product is defined on H¹ only");
    }
    Ok(bilinear(x, y, harmonic_words))
}

/// Shuffle product `x sh y`.
pub fn shuffle(x: &LinComb, y: &LinComb) -> LinComb {
    bilinear(x, y, shuffle_words)
}

/// Which of the two products an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Harmonic,
    Shuffle,
}

impl Product {
    pub fn apply(self, x: &LinComb, y: &LinComb) -> Result<LinComb> {
        match self {
            Product::Harmonic => harmonic(x, y),
            Product::Shuffle => Ok(shuffle(x, y)),
        }
    }

    /// `x^{⋆t}` for the chosen product; `x^{⋆0} = 1`.
    pub fn power(self, x: &LinComb, t: usize) -> Result<LinComb> {
        (0..t).try_fold(LinComb::one(), |acc, _| self.apply(&acc, x))
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Product::Harmonic => "*",
            Product::Shuffle => "sh",
        }
    }
}
