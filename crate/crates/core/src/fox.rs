//! Fox free differential calculus and the Alexander module of a knot group.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::freegroup::{GroupPresentation, Word};
use crate::laurent::{integer, poly_gcd, LaurentPoly, PolyMatrix};
use crate::par::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoxError {
    #[error("presentation has no generators")]
    NoGenerators,
    #[error("relator {0} has nonzero total exponent, so generators cannot all map to t")]
    NotMeridional(usize),
    #[error("abelianization is not infinite cyclic (invariant factors {0:?})")]
    NotKnotGroup(Vec<BigInt>),
    #[error("deleted column {col} out of range for {cols} columns")]
    Column { col: usize, cols: usize },
}

/// Element of the integral group ring of a free group.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &BigInt::one());
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, i64)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, &BigInt::from(c));
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &BigInt) {
        let entry = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    /// Left multiplication by a group element.
    pub fn left_mul(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for (u, c) in &self.terms {
            out.add_term(w.mul(u), c);
        }
        out
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.mul(v), &(a * b));
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*({w})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement({self})")
    }
}

/// `dw/dx` for the free generator `x`.
pub fn fox_derivative(w: &Word, x: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let one = BigInt::one();
    for (i, l) in w.letters().iter().enumerate() {
        if l.generator != x {
            continue;
        }
        if l.inverse {
            out.add_term(w.prefix(i + 1), &-&one);
        } else {
            out.add_term(w.prefix(i), &one);
        }
    }
    out
}

/// Sends every generator to `t`.
pub fn abelianize_knot(e: &GroupRingElement) -> LaurentPoly {
    e.terms().map(|(w, c)| LaurentPoly::monomial(c.clone(), w.total_exponent())).sum()
}

/// Alexander matrix of a knot group presentation together with the column
/// removed to obtain a presentation of the Alexander module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlexanderData {
    pub full_matrix: PolyMatrix,
    pub deleted_column: usize,
    pub presentation_matrix: PolyMatrix,
}

impl AlexanderData {
    pub fn with_deleted_column(&self, col: usize) -> Result<Self, FoxError> {
        let cols = self.full_matrix.cols();
        if col >= cols {
            return Err(FoxError::Column { col, cols });
        }
        Ok(AlexanderData {
            full_matrix: self.full_matrix.clone(),
            deleted_column: col,
            presentation_matrix: self.full_matrix.remove_column(col),
        })
    }

    /// Wraps a bare module presentation. The full matrix gets an extra last
    /// column of constants making every row vanish at `t = 1`.
    pub fn from_presentation(p: PolyMatrix) -> Self {
        let extra: Vec<LaurentPoly> =
            (0..p.rows()).map(|i| LaurentPoly::constant(-p.row(i).iter().map(LaurentPoly::eval_at_one).sum::<BigInt>())).collect();
        let full_matrix = p.with_column(&extra);
        AlexanderData { deleted_column: p.cols(), presentation_matrix: p, full_matrix }
    }

    pub fn generator_count(&self) -> usize {
        self.presentation_matrix.cols()
    }
}

/// Builds the Alexander matrix; the last column is deleted.
pub fn alexander_matrix(p: &GroupPresentation) -> Result<AlexanderData, FoxError> {
    alexander_matrix_with(p, Exec::default())
}

pub fn alexander_matrix_with(p: &GroupPresentation, exec: Exec) -> Result<AlexanderData, FoxError> {
    let n = p.generator_count();
    if n == 0 {
        return Err(FoxError::NoGenerators);
    }
    if let Some(i) = p.relators().iter().position(|r| r.total_exponent() != 0) {
        return Err(FoxError::NotMeridional(i));
    }
    let invariants = integer::smith_invariants(&p.exponent_matrix());
    if invariants.len() != n - 1 || invariants.iter().any(|d| !d.is_one()) {
        return Err(FoxError::NotKnotGroup(invariants));
    }
    let rows: Vec<Vec<LaurentPoly>> =
        exec.map(p.relators(), |r| (0..n).map(|j| abelianize_knot(&fox_derivative(r, j))).collect());
    let full_matrix = if rows.is_empty() { PolyMatrix::zeros(0, n) } else { PolyMatrix::from_rows(rows) };
    AlexanderData { presentation_matrix: full_matrix.clone(), deleted_column: 0, full_matrix }.with_deleted_column(n - 1)
}

/// `Δ(t)`: the normalized gcd of the maximal minors of the presentation
/// matrix. The trivial module gives 1; a matrix with fewer rows than columns
/// gives 0.
pub fn alexander_polynomial(a: &AlexanderData) -> LaurentPoly {
    alexander_polynomial_with(a, Exec::default())
}

pub fn alexander_polynomial_with(a: &AlexanderData, exec: Exec) -> LaurentPoly {
    let m = &a.presentation_matrix;
    match m.minors(m.cols(), exec) {
        Ok(ms) => poly_gcd(&ms).expect("at least one minor").normalize_unit(),
        Err(_) => LaurentPoly::zero(),
    }
}

/// Generators of the `k`-th elementary ideal of the Alexander module.
pub fn elementary_ideal_generators(a: &AlexanderData, k: usize) -> Vec<LaurentPoly> {
    a.presentation_matrix.elementary_ideal(k, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn axioms() {
        assert_eq!(fox_derivative(&w("x"), 23), GroupRingElement::one());
        assert!(fox_derivative(&w("y"), 23).is_zero());
        assert_eq!(fox_derivative(&w("X"), 23), GroupRingElement::from_terms([(w("X"), -1)]));
    }

    #[test]
    fn trefoil_relator() {
        let r = w("xyxYXY");
        let dx = fox_derivative(&r, 23);
        assert_eq!(dx, GroupRingElement::from_terms([(Word::empty(), 1), (w("xy"), 1), (w("xyxYX"), -1)]));
        assert_eq!(abelianize_knot(&dx), "1 - t + t^2".parse().unwrap());
        let xy = GroupRingElement::from_terms([(w("x"), 1), (w("y"), -1)]);
        assert!(abelianize_knot(&xy).is_zero());
    }

    #[test]
    fn trefoil_two_generator() {
        let p = GroupPresentation::new(2, vec![w("abaBAB")]).unwrap();
        let a = alexander_matrix(&p).unwrap();
        assert_eq!((a.full_matrix.rows(), a.full_matrix.cols()), (1, 2));
        assert_eq!(a.full_matrix.get(0, 0), &"1 - t + t^2".parse().unwrap());
        assert_eq!(alexander_polynomial(&a).to_string(), "t^2 - t + 1");
        assert_eq!(elementary_ideal_generators(&a, 1), vec![LaurentPoly::one()]);
    }

    #[test]
    fn unknot_and_rejections() {
        let a = alexander_matrix(&GroupPresentation::new(1, vec![]).unwrap()).unwrap();
        assert_eq!((a.full_matrix.rows(), a.full_matrix.cols()), (0, 1));
        assert_eq!(a.presentation_matrix.cols(), 0);
        assert!(alexander_polynomial(&a).is_one());

        let z2 = GroupPresentation::new(2, vec![w("aabb")]).unwrap();
        assert!(matches!(alexander_matrix(&z2), Err(FoxError::NotMeridional(0))));
        let free = GroupPresentation::new(2, vec![]).unwrap();
        assert!(matches!(alexander_matrix(&free), Err(FoxError::NotKnotGroup(_))));
    }

    #[test]
    fn wrapped_presentation_rows_vanish_at_one() {
        let f: LaurentPoly = "1 - t + t^2".parse().unwrap();
        let a = AlexanderData::from_presentation(PolyMatrix::diag(&[f.clone(), f]));
        for i in 0..2 {
            assert!(a.full_matrix.row(i).iter().map(LaurentPoly::eval_at_one).sum::<BigInt>().is_zero());
        }
        assert_eq!(a.deleted_column, 2);
    }
}
