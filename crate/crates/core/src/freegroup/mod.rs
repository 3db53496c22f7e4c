//! Word algebra in free groups, normal-closure witnesses for the
//! commutator-splitting identity, and derived-series depth via the Magnus
//! embedding.

mod witness;
mod word;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fox;
use crate::laurent::{Monomial, MultiLaurent};

pub use witness::{
    chain_check, lemma_check, lemma_witness, ChainCheckSummary, ConjugateFactor, LemmaCheckSummary,
    LemmaWitness, WitnessProduct,
};
pub use word::{commutator, kill_generators, random_word, word_inverse, word_product, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("cannot parse word {input:?} at position {pos}: {reason}")]
    Parse { input: String, pos: usize, reason: &'static str },
    #[error("generator {generator} out of range for rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },
    #[error("max_depth must be at least 1")]
    MaxDepth,
    #[error("a witness product needs {needed} base elements, got {got}")]
    MissingBase { needed: usize, got: usize },
}

/// A finitely presented group `<x_0, ..., x_{n-1} | r_0, r_1, ...>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPresentation {
    generator_count: usize,
    relators: Vec<Word>,
    generator_names: Option<Vec<String>>,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, FreeGroupError> {
        for r in &relators {
            if let Some(g) = r.max_generator().filter(|&g| g >= generator_count) {
                return Err(FreeGroupError::GeneratorOutOfRange { generator: g, rank: generator_count });
            }
        }
        Ok(GroupPresentation { generator_count, relators, generator_names: None })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.generator_count);
        self.generator_names = Some(names);
        self
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_names(&self) -> Option<&[String]> {
        self.generator_names.as_deref()
    }

    /// Relator-by-generator exponent-sum matrix: the abelianized relations.
    pub fn exponent_matrix(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generator_count).into_iter().map(BigInt::from).collect())
            .collect()
    }

    pub fn without_relator(&self, idx: usize) -> Self {
        let mut out = self.clone();
        out.relators.remove(idx);
        out
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.generator_count).map(|g| format!("x{}", g + 1)).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                if r.is_empty() {
                    return "1".to_string();
                }
                r.letters()
                    .iter()
                    .map(|l| format!("x{}{}", l.generator + 1, if l.inverse { "^-1" } else { "" }))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// Fox derivatives `dw/dx_j` for `j = 0..images.len()`, pushed through the
/// abelianization that sends generator `j` to the monomial `images[j]`.
pub fn abelianized_fox_row(w: &Word, images: &[Monomial]) -> Vec<MultiLaurent> {
    let rank = images.len();
    let vars = images.first().map_or(0, Vec::len);
    (0..rank)
        .map(|j| {
            let d = fox::fox_derivative(w, j);
            let mut out = MultiLaurent::zero();
            for (term, c) in d.terms() {
                let mut mono = vec![0i64; vars];
                for l in term.letters() {
                    for (m, e) in mono.iter_mut().zip(&images[l.generator]) {
                        *m += l.sign() * e;
                    }
                }
                out.add_term(mono, c);
            }
            out
        })
        .collect()
}

/// Position of a word in the derived series of the free group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DerivedDepth {
    /// In `D^(d)` and certified outside `D^(d+1)`.
    Exact(usize),
    /// Certified in `D^(d)`; deeper membership not decided.
    AtLeast(usize),
    /// The identity, which lies in every term.
    Trivial,
}

impl fmt::Display for DerivedDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedDepth::Exact(d) => write!(f, "depth {d}"),
            DerivedDepth::AtLeast(d) => write!(f, "depth >= {d}"),
            DerivedDepth::Trivial => write!(f, "trivial element"),
        }
    }
}

/// Derived depth of `w` in the free group of the given rank.
///
/// Depth 0 iff some exponent sum is nonzero. A word with vanishing exponent
/// sums lies in `F''` iff all its Fox derivatives vanish after
/// abelianization (Magnus embedding), which separates depth 1 from depth
/// at least 2. Levels beyond 2 are not decided.
pub fn derived_depth(w: &Word, rank: usize, max_depth: usize) -> Result<DerivedDepth, FreeGroupError> {
    if max_depth < 1 {
        return Err(FreeGroupError::MaxDepth);
    }
    if let Some(g) = w.max_generator().filter(|&g| g >= rank) {
        return Err(FreeGroupError::GeneratorOutOfRange { generator: g, rank });
    }
    if w.is_empty() {
        return Ok(DerivedDepth::Trivial);
    }
    if w.exponent_sums(rank).iter().any(|&e| e != 0) {
        return Ok(DerivedDepth::Exact(0));
    }
    if max_depth == 1 {
        return Ok(DerivedDepth::AtLeast(1));
    }
    let images: Vec<Monomial> = (0..rank)
        .map(|j| {
            let mut m = vec![0; rank];
            m[j] = 1;
            m
        })
        .collect();
    if abelianized_fox_row(w, &images).iter().all(MultiLaurent::is_zero) {
        Ok(DerivedDepth::AtLeast(2))
    } else {
        Ok(DerivedDepth::Exact(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn unit_images(rank: usize) -> Vec<Monomial> {
        (0..rank).map(|j| (0..rank).map(|k| i64::from(j == k)).collect()).collect()
    }

    #[test]
    fn fox_row_examples() {
        // generators a, b with images t1, t2
        let row = abelianized_fox_row(&w("a"), &unit_images(2));
        assert_eq!(row[0], MultiLaurent::from_terms([(vec![0, 0], 1)]));
        assert!(row[1].is_zero());

        let row = abelianized_fox_row(&w("A"), &unit_images(1));
        assert_eq!(row[0], MultiLaurent::from_terms([(vec![-1], -1)]));

        let row = abelianized_fox_row(&w("[a,b]"), &unit_images(2));
        // d/da: -a^-1 + a^-1 b^-1 ; d/db: -a^-1 b^-1 + a^-1 b^-1 a
        assert_eq!(row[0], MultiLaurent::from_terms([(vec![-1, 0], -1), (vec![-1, -1], 1)]));
        assert_eq!(row[1], MultiLaurent::from_terms([(vec![-1, -1], -1), (vec![0, -1], 1)]));
    }

    #[test]
    fn depth_examples() {
        let rank = 26;
        assert_eq!(derived_depth(&w("x"), rank, 2).unwrap(), DerivedDepth::Exact(0));
        assert_eq!(derived_depth(&w("[x,y]"), rank, 2).unwrap(), DerivedDepth::Exact(1));
        assert_eq!(derived_depth(&w("[[x,y],[x,z]]"), rank, 3).unwrap(), DerivedDepth::AtLeast(2));
        assert_eq!(derived_depth(&Word::empty(), rank, 2).unwrap(), DerivedDepth::Trivial);
        assert_eq!(derived_depth(&w("[x,y]"), rank, 1).unwrap(), DerivedDepth::AtLeast(1));
        assert_eq!(derived_depth(&w("x"), rank, 0), Err(FreeGroupError::MaxDepth));
        assert!(matches!(derived_depth(&w("c"), 2, 2), Err(FreeGroupError::GeneratorOutOfRange { .. })));
    }

    #[test]
    fn presentation_checks_ranges() {
        assert!(GroupPresentation::new(2, vec![w("abAB")]).is_ok());
        assert!(GroupPresentation::new(1, vec![w("ab")]).is_err());
        let p = GroupPresentation::new(2, vec![w("a b a B A B")]).unwrap();
        assert_eq!(p.to_string(), "< x1, x2 | x1 x2 x1 x2^-1 x1^-1 x2^-1 >");
        assert_eq!(p.exponent_matrix(), vec![vec![BigInt::from(1), BigInt::from(-1)]]);
    }
}
