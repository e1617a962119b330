//! The Hoffman algebra `Q⟨e0, e1⟩ ⊃ H¹ ⊃ H⁰` with its harmonic and shuffle products.
//!
//! Both products are computed from their right-recursive definitions with a
//! process-wide memo table keyed on word pairs.

mod lincomb;
mod product;
mod word;

pub use lincomb::{format_rational, parse_rational, rat, LinComb};
pub use product::{harmonic, harmonic_words, shuffle, shuffle_words, Product};
pub use word::{Index, Letter, Word, MAX_WORD_LEN};
