use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Maximum number of letters a [`Word`] can hold.
pub const MAX_WORD_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    E0,
    E1,
}

impl Letter {
    fn bit(self) -> u64 {
        match self {
            Letter::E0 => 0,
            Letter::E1 => 1,
        }
    }

    /// Swaps `e0` and `e1`.
    pub fn dual(self) -> Letter {
        match self {
            Letter::E0 => Letter::E1,
            Letter::E1 => Letter::E0,
        }
    }
}

/// A word over `{e0, e1}` packed as bits (`e1 = 1`), first letter most significant.
///
/// The derived ordering compares length first and then the binary encoding,
/// which is length-then-lexicographic order on the letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    /// The empty word, i.e. the unit `1`.
    pub const fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        letters.into_iter().fold(Word::empty(), |w, l| w.push(l))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0-based, from the left).
    pub fn letter(&self, i: usize) -> Letter {
        assert!(i < self.len(), "letter index {i} out of range");
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            Letter::E1
        } else {
            Letter::E0
        }
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(self.len() - 1))
    }

    /// Appends a letter on the right.
    ///
    /// Panics if the word already holds [`MAX_WORD_LEN`] letters.
    pub fn push(self, letter: Letter) -> Word {
        assert!(
            self.len() < MAX_WORD_LEN,
            "word length exceeds {MAX_WORD_LEN}"
        );
        Word {
            len: self.len + 1,
            bits: (self.bits << 1) | letter.bit(),
        }
    }

    /// Concatenation `self · other`.
    pub fn concat(self, other: Word) -> Word {
        assert!(
            self.len() + other.len() <= MAX_WORD_LEN,
            "word length exceeds {MAX_WORD_LEN}"
        );
        if other.is_empty() {
            return self;
        }
        Word {
            len: self.len + other.len,
            bits: (self.bits << other.len) | other.bits,
        }
    }

    /// Splits off the last letter: `self = rest · letter`.
    pub fn split_last(&self) -> Option<(Word, Letter)> {
        let last = self.last()?;
        Some((
            Word {
                len: self.len - 1,
                bits: self.bits >> 1,
            },
            last,
        ))
    }

    /// Prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Word {
        assert!(n <= self.len());
        Word {
            len: n as u8,
            bits: if n == 0 {
                0
            } else {
                self.bits >> (self.len() - n)
            },
        }
    }

    /// `1` or a word starting with `e1`.
    pub fn in_h1(&self) -> bool {
        self.first().is_none_or(|l| l == Letter::E1)
    }

    /// `1` or a word starting with `e1` and ending with `e0`.
    pub fn in_h0(&self) -> bool {
        self.is_empty() || (self.first() == Some(Letter::E1) && self.last() == Some(Letter::E0))
    }

    /// Number of `e1` letters at the right end.
    pub fn trailing_e1(&self) -> usize {
        let ones = (!self.bits).trailing_zeros() as usize;
        ones.min(self.len())
    }

    /// `e1^t` as a single word.
    pub fn e1_power(t: usize) -> Word {
        Word::from_letters(std::iter::repeat_n(Letter::E1, t))
    }

    /// Splits `self = v · e1^t` with `t` the trailing-`e1` count.
    pub fn split_trailing_e1(&self) -> (Word, usize) {
        let t = self.trailing_e1();
        (self.prefix(self.len() - t), t)
    }

    /// Number of `e1` letters.
    pub fn count_e1(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            f.write_str(if l == Letter::E1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a string over `{0,1}`; `"110"` is `e1 e1 e0`.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!(
                "word longer than {MAX_WORD_LEN} letters"
            )));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(Letter::E0),
                '1' => Ok(Letter::E1),
                other => Err(Error::Parse(format!(
                    "invalid letter {other:?} in word {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::from_letters)
    }
}

/// A tuple of positive integers `(k₁,…,k_r)`; the empty tuple stands for `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Index> {
        if let Some(p) = parts.iter().position(|&k| k == 0) {
            return domain(format!("index part {} is zero", p + 1));
        }
        Ok(Index(parts))
    }

    pub fn empty() -> Index {
        Index(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_none_or(|&k| k >= 2)
    }

    /// `e_k = e_{k₁} ⋯ e_{k_r}` with `e_k = e1 e0^{k-1}`.
    pub fn to_word(&self) -> Word {
        self.0.iter().fold(Word::empty(), |w, &k| {
            (1..k).fold(w.push(Letter::E1), |w, _| w.push(Letter::E0))
        })
    }

    /// Inverse of [`Index::to_word`] on `H¹`.
    pub fn from_word(w: &Word) -> Result<Index> {
        if !w.in_h1() {
            return domain(format!("word {w} is not in H¹"));
        }
        let mut parts: Vec<u32> = Vec::with_capacity(w.count_e1());
        for l in w.letters() {
            match l {
                Letter::E1 => parts.push(1),
                Letter::E0 => *parts.last_mut().expect("word starts with e1") += 1,
            }
        }
        Ok(Index(parts))
    }

    /// The position set `J(k) = {1, k₁+1, k₁+k₂+1, …}` (1-based positions in `[wt(k)]`).
    pub fn jset(&self) -> Result<Vec<usize>> {
        if self.is_empty() {
            return domain("J(k) is undefined for the empty index");
        }
        let mut out = Vec::with_capacity(self.depth());
        let mut pos = 1;
        for &k in &self.0 {
            out.push(pos);
            pos += k as usize;
        }
        Ok(out)
    }

    /// Enumerates all indices of the given weight, ordered by their words.
    pub fn all_of_weight(weight: usize) -> Vec<Index> {
        if weight == 0 {
            return vec![Index::empty()];
        }
        // compositions of `weight` correspond to words e1·{e0,e1}^{weight-1}
        (0u64..1 << (weight - 1))
            .map(|tail| {
                let letters =
                    std::iter::once(Letter::E1).chain((0..weight - 1).rev().map(move |b| {
                        if (tail >> b) & 1 == 1 {
                            Letter::E1
                        } else {
                            Letter::E0
                        }
                    }));
                Index::from_word(&Word::from_letters(letters)).expect("starts with e1")
            })
            .collect()
    }

    /// All indices with `1 ≤ weight ≤ max_weight`.
    pub fn all_up_to_weight(max_weight: usize) -> Vec<Index> {
        (1..=max_weight).flat_map(Index::all_of_weight).collect()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Parses `"1,2"`; the empty string is the empty index.
    fn from_str(s: &str) -> Result<Index> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Ok(Index::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid index part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(p: &[u32]) -> Index {
        Index::new(p.to_vec()).unwrap()
    }

    #[test]
    fn word_of_index_examples() {
        assert_eq!(idx(&[2]).to_word().to_string(), "10");
        assert_eq!(idx(&[1, 2]).to_word().to_string(), "110");
        assert_eq!(Index::empty().to_word(), Word::empty());
    }

    #[test]
    fn index_of_word_examples() {
        assert_eq!(Index::from_word(&"10".parse().unwrap()).unwrap(), idx(&[2]));
        assert_eq!(
            Index::from_word(&"1001".parse().unwrap()).unwrap(),
            idx(&[3, 1])
        );
        assert!(matches!(
            Index::from_word(&"01".parse().unwrap()),
            Err(Error::Domain(_))
        ));
        assert_eq!(Index::from_word(&Word::empty()).unwrap(), Index::empty());
    }

    #[test]
    fn jset_examples() {
        assert_eq!(idx(&[2, 1]).jset().unwrap(), vec![1, 3]);
        assert_eq!(idx(&[1, 1, 1]).jset().unwrap(), vec![1, 2, 3]);
        assert_eq!(idx(&[3]).jset().unwrap(), vec![1]);
        assert!(Index::empty().jset().is_err());
    }

    #[test]
    fn jset_reproduces_word() {
        for k in Index::all_up_to_weight(6) {
            let j = k.jset().unwrap();
            let letters = (1..=k.weight()).map(|i| {
                if j.contains(&i) {
                    Letter::E1
                } else {
                    Letter::E0
                }
            });
            assert_eq!(Word::from_letters(letters), k.to_word());
            assert_eq!(j.len(), k.depth());
        }
    }

    #[test]
    fn index_predicates() {
        assert!(Index::empty().is_admissible());
        assert!(idx(&[1, 2]).is_admissible());
        assert!(!idx(&[2, 1]).is_admissible());
        assert_eq!(idx(&[2, 1, 3]).weight(), 6);
        assert_eq!(idx(&[2, 1, 3]).depth(), 3);
        assert!(Index::new(vec![1, 0]).is_err());
    }

    #[test]
    fn word_predicates() {
        let w = |s: &str| s.parse::<Word>().unwrap();
        assert!(Word::empty().in_h0() && Word::empty().in_h1());
        assert!(w("10").in_h0());
        assert!(w("11").in_h1() && !w("11").in_h0());
        assert!(!w("01").in_h1());
        assert_eq!(w("10111").trailing_e1(), 3);
        assert_eq!(w("111").trailing_e1(), 3);
        assert_eq!(w("110").trailing_e1(), 0);
        assert_eq!(w("10111").split_trailing_e1(), (w("10"), 3));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut ws: Vec<Word> = ["11", "0", "10", "", "100", "01"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        ws.sort();
        let shown: Vec<String> = ws.iter().map(Word::to_string).collect();
        assert_eq!(shown, ["", "0", "01", "10", "11", "100"]);
    }

    #[test]
    fn parse_and_display_index() {
        assert_eq!("1,2".parse::<Index>().unwrap(), idx(&[1, 2]));
        assert_eq!("".parse::<Index>().unwrap(), Index::empty());
        assert_eq!(idx(&[3, 1, 2]).to_string(), "3,1,2");
        assert!("1,0".parse::<Index>().is_err());
        assert!("1,x".parse::<Index>().is_err());
        assert!("102".parse::<Word>().is_err());
    }

    #[test]
    fn all_of_weight_counts() {
        assert_eq!(Index::all_up_to_weight(6).len(), 63);
        assert!(Index::all_of_weight(4).iter().all(|k| k.weight() == 4));
    }
}
