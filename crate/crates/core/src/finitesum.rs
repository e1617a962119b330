//! Exact evaluation of the truncated sums `ζ_{<N}`, `ζ♭_{<N}`, `ζ♮_{<N}` and
//! `R_{<N}`, together with brute-force enumeration oracles.
//!
//! Every sum is a chain `0 < n₁ (≤|<) n₂ (≤|<) ⋯ n_k < N` with a weight
//! `1/((N-n_i)^{a_i} n_i^{b_i})` at each position, so all four evaluators share
//! one prefix-sum dynamic program ([`ConstraintChain`]). The exact path scales
//! every partial sum by a power of `L = lcm(1, …, N-1)` and works with integers,
//! reducing to a rational only once at the end.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::hoffman::{Index, Letter, LinComb, Word};

/// One summation variable of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    /// Relation to the previous variable: `n_{i-1} < n_i` if strict, else `≤`.
    pub strict: bool,
    /// Power of `1/(N - n_i)`.
    pub complement_power: u32,
    /// Power of `1/n_i`.
    pub power: u32,
}

/// Summation constraints and weights for one of the finite sums.
///
/// The first step is always strict against `n₀ = 0` and the last variable is
/// always strictly below `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintChain {
    steps: Vec<Step>,
}

/// Which of the three `H¹ → Q` maps to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `Z_N`: multiple harmonic sums `ζ_{<N}`.
    Plain,
    /// `Z_N♭`: sums over `S_N(k)`.
    Flat,
    /// `Z_N♮`: sums over the strict chain `T_N(wt k)`.
    Natural,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "plain" => Ok(Variant::Plain),
            "flat" => Ok(Variant::Flat),
            "natural" => Ok(Variant::Natural),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

/// The letters `u_1 … u_k` of `e_k`, i.e. `u_i = 1` iff `i ∈ J(k)`.
fn letter_steps(k: &Index, all_strict: bool) -> Vec<Step> {
    k.to_word()
        .letters()
        .map(|u| match u {
            Letter::E1 => Step {
                strict: true,
                complement_power: 1,
                power: 0,
            },
            Letter::E0 => Step {
                strict: all_strict,
                complement_power: 0,
                power: 1,
            },
        })
        .collect()
}

impl ConstraintChain {
    pub fn new(steps: Vec<Step>) -> Result<ConstraintChain> {
        if steps.first().is_some_and(|s| !s.strict) {
            return domain("the first summation variable must be strictly positive");
        }
        Ok(ConstraintChain { steps })
    }

    /// `ζ_{<N}(k)`: strict chain of length `depth(k)` with weights `n^{-k_i}`.
    pub fn plain(k: &Index) -> ConstraintChain {
        ConstraintChain {
            steps: k
                .parts()
                .iter()
                .map(|&p| Step {
                    strict: true,
                    complement_power: 0,
                    power: p,
                })
                .collect(),
        }
    }

    /// `ζ♭_{<N}(k)`: length `wt(k)`, strict exactly at positions in `J(k)`.
    pub fn flat(k: &Index) -> ConstraintChain {
        ConstraintChain {
            steps: letter_steps(k, false),
        }
    }

    /// `ζ♮_{<N}(k)`: same weights as [`ConstraintChain::flat`], every relation strict.
    pub fn natural(k: &Index) -> ConstraintChain {
        ConstraintChain {
            steps: letter_steps(k, true),
        }
    }

    pub fn r_value(args: &RArgs) -> ConstraintChain {
        ConstraintChain {
            steps: args
                .a
                .iter()
                .zip(&args.b)
                .map(|(&a, &b)| Step {
                    strict: true,
                    complement_power: a,
                    power: b,
                })
                .collect(),
        }
    }

    pub fn for_variant(k: &Index, variant: Variant) -> ConstraintChain {
        match variant {
            Variant::Plain => ConstraintChain::plain(k),
            Variant::Flat => ConstraintChain::flat(k),
            Variant::Natural => ConstraintChain::natural(k),
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Exact value of the chain sum with upper bound `n_max`.
    pub fn eval_exact(&self, n_max: u64) -> BigRational {
        if self.steps.is_empty() {
            return BigRational::one();
        }
        if n_max < 2 {
            return BigRational::zero();
        }
        let top = (n_max - 1) as usize;
        let lcm = (1..=n_max - 1).fold(BigInt::one(), |acc, n| acc.lcm(&BigInt::from(n)));
        // quot[n] = L / n
        let quot: Vec<BigInt> = (0..=top as u64)
            .map(|n| if n == 0 { BigInt::zero() } else { &lcm / n })
            .collect();

        // f[n] holds the prefix-weighted count scaled by L^scale
        let mut f: Vec<BigInt> = vec![BigInt::one(); top + 1];
        f[0] = BigInt::zero();
        let mut scale = 0u32;
        let mut first = true;
        for step in &self.steps {
            let prefix: Vec<BigInt> = if first {
                let mut p = vec![BigInt::one(); top + 1];
                p[0] = BigInt::zero();
                p
            } else {
                let mut p = vec![BigInt::zero(); top + 1];
                let mut running = BigInt::zero();
                for n in 1..=top {
                    if step.strict {
                        p[n] = running.clone();
                        running += &f[n];
                    } else {
                        running += &f[n];
                        p[n] = running.clone();
                    }
                }
                p
            };
            first = false;
            for n in 1..=top {
                let mut w = prefix[n].clone();
                if w.is_zero() {
                    f[n] = w;
                    continue;
                }
                if step.complement_power > 0 {
                    w *= num_traits::pow(quot[top + 1 - n].clone(), step.complement_power as usize);
                }
                if step.power > 0 {
                    w *= num_traits::pow(quot[n].clone(), step.power as usize);
                }
                f[n] = w;
            }
            scale += step.complement_power + step.power;
        }
        let total: BigInt = f.iter().sum();
        BigRational::new(total, num_traits::pow(lcm, scale as usize))
    }

    /// Floating evaluation of the same dynamic program.
    pub fn eval_f64(&self, n_max: u64) -> f64 {
        if self.steps.is_empty() {
            return 1.0;
        }
        if n_max < 2 {
            return 0.0;
        }
        let top = (n_max - 1) as usize;
        let mut f = vec![0.0f64; top + 1];
        let mut first = true;
        for step in &self.steps {
            let mut running = 0.0f64;
            for n in 1..=top {
                let prefix = if first {
                    1.0
                } else if step.strict {
                    let p = running;
                    running += f[n];
                    p
                } else {
                    running += f[n];
                    running
                };
                let mut w = prefix;
                if step.complement_power > 0 {
                    w *= ((n_max as f64) - n as f64).powi(-(step.complement_power as i32));
                }
                if step.power > 0 {
                    w *= (n as f64).powi(-(step.power as i32));
                }
                f[n] = w;
            }
            first = false;
        }
        f.iter().sum()
    }

    fn weight_at(&self, i: usize, n: u64, n_max: u64) -> BigRational {
        let s = self.steps[i];
        let den = num_traits::pow(BigInt::from(n_max - n), s.complement_power as usize)
            * num_traits::pow(BigInt::from(n), s.power as usize);
        BigRational::new(BigInt::one(), den)
    }

    /// Direct enumeration of every admissible tuple, keeping those accepted by `keep`.
    pub fn brute_force_filtered(
        &self,
        n_max: u64,
        caps: BruteForceCaps,
        keep: impl Fn(&[u64]) -> bool,
    ) -> Result<BigRational> {
        caps.check(self.len(), n_max)?;
        let mut total = BigRational::zero();
        let mut tuple = Vec::with_capacity(self.len());
        self.enumerate(n_max, &mut tuple, &mut |t| {
            if keep(t) {
                let term = t
                    .iter()
                    .enumerate()
                    .fold(BigRational::one(), |acc, (i, &n)| {
                        acc * self.weight_at(i, n, n_max)
                    });
                total += term;
            }
        });
        Ok(total)
    }

    pub fn brute_force(&self, n_max: u64, caps: BruteForceCaps) -> Result<BigRational> {
        self.brute_force_filtered(n_max, caps, |_| true)
    }

    fn enumerate(&self, n_max: u64, tuple: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        let i = tuple.len();
        if i == self.steps.len() {
            visit(tuple);
            return;
        }
        let prev = tuple.last().copied().unwrap_or(0);
        let lo = if self.steps[i].strict { prev + 1 } else { prev };
        for n in lo.max(1)..n_max {
            tuple.push(n);
            self.enumerate(n_max, tuple, visit);
            tuple.pop();
        }
    }
}

/// Limits on brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceCaps {
    pub max_n: u64,
    /// Maximum number of summation variables (the weight for `ζ♭`, `ζ♮`).
    pub max_len: usize,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        BruteForceCaps {
            max_n: 40,
            max_len: 6,
        }
    }
}

impl BruteForceCaps {
    fn check(&self, len: usize, n_max: u64) -> Result<()> {
        if n_max > self.max_n {
            return Err(Error::CapExceeded(format!("N = {n_max} > {}", self.max_n)));
        }
        if len > self.max_len {
            return Err(Error::CapExceeded(format!(
                "{len} summation variables > {}",
                self.max_len
            )));
        }
        Ok(())
    }
}

/// Exponent lists `(a₁,…,a_k; b₁,…,b_k)` of an `R_{<N}` value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RArgs {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl RArgs {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<RArgs> {
        if a.len() != b.len() {
            return domain("R-value exponent lists differ in length");
        }
        if a.is_empty() {
            return domain("R-value needs at least one variable");
        }
        if a[0] == 0 {
            return domain("R-value requires a₁ ≥ 1");
        }
        if let Some(i) = a.iter().zip(&b).position(|(x, y)| x + y == 0) {
            return domain(format!(
                "R-value requires a_i + b_i ≥ 1 (fails at i = {})",
                i + 1
            ));
        }
        Ok(RArgs { a, b })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Some `i` with `b_i ≥ 1` and `a_i + b_i ≥ 2`.
    pub fn has_mixed_position(&self) -> bool {
        self.a
            .iter()
            .zip(&self.b)
            .any(|(&a, &b)| b >= 1 && a + b >= 2)
    }

    /// Some `i < j` with `a_i ≥ 2` and `b_j ≥ 1`.
    pub fn has_heavy_then_inverse(&self) -> bool {
        (0..self.len()).any(|i| self.a[i] >= 2 && self.b[i + 1..].iter().any(|&b| b >= 1))
    }
}

impl fmt::Display for RArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.a), join(&self.b))
    }
}

impl FromStr for RArgs {
    type Err = Error;

    /// Parses `"a1,…,ak;b1,…,bk"`.
    fn from_str(s: &str) -> Result<RArgs> {
        let (a, b) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("R-value arguments {s:?} lack ';'")))?;
        let list = |t: &str| {
            t.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("invalid exponent {p:?}")))
                })
                .collect::<Result<Vec<_>>>()
        };
        RArgs::new(list(a)?, list(b)?)
    }
}

/// `ζ_{<N}(k)`; `1` for the empty index.
pub fn zeta_lt(k: &Index, n: u64) -> BigRational {
    ConstraintChain::plain(k).eval_exact(n)
}

/// `ζ♭_{<N}(k)`, the sum over `S_N(k)` with weights `ω̂_{u_i}`.
pub fn zeta_flat(k: &Index, n: u64) -> BigRational {
    ConstraintChain::flat(k).eval_exact(n)
}

/// `ζ♮_{<N}(k)`, the sum over `T_N(wt k)` with weights `ω̂_{u_i}`.
pub fn zeta_natural(k: &Index, n: u64) -> BigRational {
    ConstraintChain::natural(k).eval_exact(n)
}

/// `R_{<N}(a; b)`.
pub fn r_value(args: &RArgs, n: u64) -> BigRational {
    ConstraintChain::r_value(args).eval_exact(n)
}

/// Evaluator for `Z_N`, `Z_N♭`, `Z_N♮` with a per-index cache.
#[derive(Debug)]
pub struct ZnEvaluator {
    n: u64,
    variant: Variant,
    cache: HashMap<Index, BigRational>,
}

impl ZnEvaluator {
    pub fn new(n: u64, variant: Variant) -> ZnEvaluator {
        ZnEvaluator {
            n,
            variant,
            cache: HashMap::new(),
        }
    }

    pub fn index_value(&mut self, k: &Index) -> BigRational {
        if let Some(v) = self.cache.get(k) {
            return v.clone();
        }
        let v = ConstraintChain::for_variant(k, self.variant).eval_exact(self.n);
        self.cache.insert(k.clone(), v.clone());
        v
    }

    pub fn apply(&mut self, x: &LinComb) -> Result<BigRational> {
        if !x.support_in_h1() {
            return domain("Z_N is defined on H¹ only");
        }
        let mut total = BigRational::zero();
        for (w, c) in x.iter() {
            total += c * self.index_value(&Index::from_word(w)?);
        }
        Ok(total)
    }
}

/// Linear extension of the chosen evaluator to `H¹`.
pub fn zn_apply(x: &LinComb, n: u64, variant: Variant) -> Result<BigRational> {
    ZnEvaluator::new(n, variant).apply(x)
}

/// Brute-force `ζ_{<N}(k)`, `ζ♭` or `ζ♮` by tuple enumeration.
pub fn brute_force_index(
    k: &Index,
    n: u64,
    variant: Variant,
    caps: BruteForceCaps,
) -> Result<BigRational> {
    ConstraintChain::for_variant(k, variant).brute_force(n, caps)
}

pub fn brute_force_r(args: &RArgs, n: u64, caps: BruteForceCaps) -> Result<BigRational> {
    ConstraintChain::r_value(args).brute_force(n, caps)
}

/// Brute-force sum over `S_N(k) ∖ T_N(wt k)`, i.e. `ζ♭ - ζ♮`.
pub fn brute_force_flat_boundary(k: &Index, n: u64, caps: BruteForceCaps) -> Result<BigRational> {
    ConstraintChain::flat(k).brute_force_filtered(n, caps, |t| t.windows(2).any(|p| p[0] == p[1]))
}

/// Strictly increasing tuples in `(0, N)` with their `ω̂` weight.
fn weighted_strict_tuples(word: Word, n: u64) -> Vec<(Vec<u64>, BigRational)> {
    let chain = ConstraintChain::natural(&Index::from_word(&word).expect("H¹ word"));
    let mut out = Vec::new();
    let mut tuple = Vec::new();
    chain.enumerate(n, &mut tuple, &mut |t| {
        let w = t
            .iter()
            .enumerate()
            .fold(BigRational::one(), |acc, (i, &m)| {
                acc * chain.weight_at(i, m, n)
            });
        out.push((t.to_vec(), w));
    });
    out
}

fn shares_value(x: &[u64], y: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

/// Sum of `∏ω̂(n_i) ∏ω̂(m_j)` over pairs `n ∈ T_N(wt k)`, `m ∈ T_N(wt l)` with
/// `n_i = m_j` for at least one pair `(i, j)`.
///
/// This is exactly the defect `ζ♮(k)ζ♮(l) - Z_N♮(e_k sh e_l)` at finite `N`.
pub fn coincidence_sum(k: &Index, l: &Index, n: u64, caps: BruteForceCaps) -> Result<BigRational> {
    caps.check(k.weight() + l.weight(), n)?;
    let left = weighted_strict_tuples(k.to_word(), n);
    let right = weighted_strict_tuples(l.to_word(), n);
    let mut total = BigRational::zero();
    for (x, wx) in &left {
        for (y, wy) in &right {
            if shares_value(x, y) {
                total += wx * wy;
            }
        }
    }
    Ok(total)
}
