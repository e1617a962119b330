//! Reference implementations written directly from the definitions, with no
//! code shared with the library's evaluators.
#![allow(dead_code)]

use std::collections::BTreeMap;

use edsr::{BigRational, Index, LinComb, Word};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

pub fn idx(p: &[u32]) -> Index {
    Index::new(p.to_vec()).unwrap()
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// Quasi-shuffle of indices by recursion on the first entries.
pub fn quasi_shuffle(a: &[u32], b: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        out.insert([a, b].concat(), 1);
        return out;
    }
    let mut add = |head: u32, tail: BTreeMap<Vec<u32>, i64>| {
        for (t, c) in tail {
            let mut v = vec![head];
            v.extend(t);
            *out.entry(v).or_insert(0) += c;
        }
    };
    add(a[0], quasi_shuffle(&a[1..], b));
    add(b[0], quasi_shuffle(a, &b[1..]));
    add(a[0] + b[0], quasi_shuffle(&a[1..], &b[1..]));
    out
}

/// All interleavings of two letter strings, counted with multiplicity.
pub fn interleavings(a: &str, b: &str) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        out.insert(format!("{a}{b}"), 1);
        return out;
    }
    for (head, rest) in [
        (&a[..1], interleavings(&a[1..], b)),
        (&b[..1], interleavings(a, &b[1..])),
    ] {
        for (t, c) in rest {
            *out.entry(format!("{head}{t}")).or_insert(0) += c;
        }
    }
    out
}

pub fn lincomb_of_indices(m: &BTreeMap<Vec<u32>, i64>) -> LinComb {
    let mut out = LinComb::zero();
    for (k, &c) in m {
        out.add_term(idx(k).to_word(), q(c, 1));
    }
    out
}

pub fn lincomb_of_words(m: &BTreeMap<String, i64>) -> LinComb {
    let mut out = LinComb::zero();
    for (w, &c) in m {
        out.add_term(w.parse::<Word>().unwrap(), q(c, 1));
    }
    out
}

/// Tuples of length `len` with entries in `1..n`, kept when `ok(i, previous, entry)`
/// holds at every position (the previous entry of the first is 0).
fn tuples(len: usize, n: u64, ok: &dyn Fn(usize, u64, u64) -> bool) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for i in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let prev = t.last().copied().unwrap_or(0);
            for m in 1..n {
                if ok(i, prev, m) {
                    let mut u = t.clone();
                    u.push(m);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

/// `Σ_{0<n_1<…<n_r<N} ∏ n_i^{-k_i}`.
pub fn harmonic_sum(k: &[u32], n: u64) -> BigRational {
    tuples(k.len(), n, &|_, p, m| m > p)
        .iter()
        .map(|t| {
            t.iter()
                .zip(k)
                .map(|(&m, &e)| q(1, (m as i64).pow(e)))
                .fold(BigRational::one(), |a, b| a * b)
        })
        .sum()
}

/// Letters of the index word: `true` at the positions of `J(k)`.
fn j_flags(k: &[u32]) -> Vec<bool> {
    k.iter()
        .flat_map(|&e| std::iter::once(true).chain(std::iter::repeat_n(false, e as usize - 1)))
        .collect()
}

fn hat_weight(j: bool, m: u64, n: u64) -> BigRational {
    if j {
        q(1, (n - m) as i64)
    } else {
        q(1, m as i64)
    }
}

/// The sum over `S_N(k)`: strict before positions in `J(k)`, weak elsewhere,
/// always `n_k < N`.
pub fn flat_sum(k: &[u32], n: u64) -> BigRational {
    let flags = j_flags(k);
    tuples(flags.len(), n, &|i, p, m| {
        if flags[i] {
            m > p
        } else {
            m >= p
        }
    })
    .iter()
    .map(|t| {
        t.iter()
            .zip(&flags)
            .map(|(&m, &j)| hat_weight(j, m, n))
            .fold(BigRational::one(), |a, b| a * b)
    })
    .sum()
}

/// The same weights over strictly increasing tuples.
pub fn natural_sum(k: &[u32], n: u64) -> BigRational {
    let flags = j_flags(k);
    tuples(flags.len(), n, &|_, p, m| m > p)
        .iter()
        .map(|t| {
            t.iter()
                .zip(&flags)
                .map(|(&m, &j)| hat_weight(j, m, n))
                .fold(BigRational::one(), |a, b| a * b)
        })
        .sum()
}

/// `Σ_{0<n_1<…<n_k<N} ∏ (N−n_i)^{-a_i} n_i^{-b_i}`.
pub fn r_sum(a: &[u32], b: &[u32], n: u64) -> BigRational {
    tuples(a.len(), n, &|_, p, m| m > p)
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(i, &m)| q(1, ((n - m) as i64).pow(a[i]) * (m as i64).pow(b[i])))
                .fold(BigRational::one(), |x, y| x * y)
        })
        .sum()
}

/// Indices with `1 ≤ weight ≤ max`, as part vectors: a composition of the
/// weight is chosen by which of the `weight − 1` gaps start a new part.
pub fn index_strategy(max: u32) -> impl Strategy<Value = Vec<u32>> {
    (1..=max as usize)
        .prop_flat_map(|w| prop::collection::vec(prop::bool::ANY, w - 1))
        .prop_map(|cuts| {
            let mut parts = vec![1u32];
            for cut in cuts {
                if cut {
                    parts.push(1);
                } else {
                    *parts.last_mut().unwrap() += 1;
                }
            }
            parts
        })
}

/// Words of length `0..=max` over {0, 1}.
pub fn word_strategy(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 0..=max)
        .prop_map(|v| v.into_iter().map(|b| if b { '1' } else { '0' }).collect())
}

/// Small `H¹` linear combinations of index words.
pub fn lincomb_strategy(max_weight: u32) -> impl Strategy<Value = LinComb> {
    prop::collection::vec((index_strategy(max_weight), -4i64..=4, 1i64..=3), 1..=3).prop_map(
        |terms| {
            let mut out = LinComb::zero();
            for (k, p, d) in terms {
                out.add_term(idx(&k).to_word(), q(p, d));
            }
            out
        },
    )
}
