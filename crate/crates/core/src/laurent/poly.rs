use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LaurentError;

/// An element of the integral Laurent ring `Z[t, t^-1]`.
///
/// Stored as `min_degree` plus a dense coefficient vector; coefficient `i`
/// belongs to `t^(min_degree + i)`. The representation is canonical: the
/// first and last coefficients are nonzero, and zero is the empty vector with
/// `min_degree == 0`. Derived equality is therefore ring equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_degree: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { min_degree: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial<C: Into<BigInt>>(c: C, degree: i64) -> Self {
        Self::from_coeffs(degree, vec![c.into()])
    }

    /// Builds `sum_i coeffs[i] * t^(min_degree + i)` and trims it.
    pub fn from_coeffs(min_degree: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { min_degree, coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from machine integers (ascending powers).
    pub fn from_ints(min_degree: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(min_degree, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_degree = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_degree += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_degree == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of the Laurent ring are exactly `±t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }

    /// Lowest exponent carrying a nonzero coefficient; `None` for zero.
    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_degree + self.coeffs.len() as i64 - 1)
    }

    /// Width `max_degree - min_degree`; zero for constants and for zero.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: i64) -> BigInt {
        let idx = degree - self.min_degree;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Iterator over `(degree, coefficient)` for nonzero terms, ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_degree + i as i64, c))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_degree: self.min_degree + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.min_degree, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// The involution `t -> t^-1`.
    pub fn reflect(&self) -> Self {
        match self.max_degree() {
            None => Self::zero(),
            Some(max) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                LaurentPoly { min_degree: -max, coeffs }
            }
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn eval_at_minus_one(&self) -> BigInt {
        self.terms()
            .map(|(d, c)| if d.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Unit normal form: multiply by `±t^k` so that the lowest degree is 0
    /// and the constant term is positive.
    pub fn normalize_unit(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let sign = if self.coeffs[0].is_negative() { -BigInt::one() } else { BigInt::one() };
        LaurentPoly { min_degree: 0, coeffs: self.coeffs.iter().map(|c| c * &sign).collect() }
    }

    /// `f(t)` as an ordinary polynomial with nonzero constant term
    /// (ascending coefficients), i.e. `f` with its unit factor `t^k` removed.
    pub(crate) fn core_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact quotient in `Z[t, t^-1]`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = poly_div_rem(&self.coeffs, &divisor.coeffs, true)?;
        if !r.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.min_degree - divisor.min_degree, q))
    }

    /// Division with remainder when the divisor's leading coefficient is a
    /// unit. The remainder has span strictly below the divisor's span.
    pub fn div_rem_unit_leading(&self, divisor: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
        let lead = divisor.leading_coeff()?;
        if !lead.abs().is_one() {
            return None;
        }
        if self.is_zero() {
            return Some((Self::zero(), Self::zero()));
        }
        let (q, r) = poly_div_rem(&self.coeffs, &divisor.coeffs, false)?;
        Some((
            Self::from_coeffs(self.min_degree - divisor.min_degree, q),
            Self::from_coeffs(self.min_degree, r),
        ))
    }

    /// Same as [`div_rem_unit_leading`](Self::div_rem_unit_leading) but
    /// dividing from the low-degree end, which needs a unit trailing
    /// coefficient instead.
    pub fn div_rem_unit_trailing(&self, divisor: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
        let (q, r) = self.reflect().div_rem_unit_leading(&divisor.reflect())?;
        Some((q.reflect(), r.reflect()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Long division of ascending coefficient vectors. With `exact` set the
/// division aborts (returns `None`) as soon as a leading coefficient fails to
/// divide; otherwise the divisor must have a unit leading coefficient.
fn poly_div_rem(num: &[BigInt], den: &[BigInt], exact: bool) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let dl = den.len();
    let lead = den.last()?;
    if num.len() < dl {
        return Some((Vec::new(), num.to_vec()));
    }
    let mut rem = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + dl - 1];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(lead);
        if !r.is_zero() {
            if exact {
                return None;
            }
            unreachable!("unit leading coefficient always divides");
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    rem.truncate(dl - 1);
    Some((q, rem))
}

/// Pseudo-remainder of `a` by `b` (ascending coefficients, `b` nonempty).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().expect("nonzero divisor").clone();
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, d) in b.iter().enumerate() {
            r[shift + j] -= &lr * d;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Greatest common divisor of two Laurent polynomials, unit-normalized.
pub fn gcd2(f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    if f.is_zero() {
        return g.normalize_unit();
    }
    if g.is_zero() {
        return f.normalize_unit();
    }
    let content = f.content().gcd(&g.content());
    let (mut a, mut b) = (primitive(f.core_coeffs().to_vec()), primitive(g.core_coeffs().to_vec()));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        // strip factors of t: they are units here
        let lead_zeros = r.iter().take_while(|c| c.is_zero()).count();
        let r = primitive(r[lead_zeros.min(r.len())..].to_vec());
        a = b;
        b = r;
    }
    LaurentPoly::from_coeffs(0, a).scale(&content).normalize_unit()
}

/// Gcd of a nonempty family in the Laurent ring (a UFD), unit-normalized.
/// Zero entries are absorbed.
pub fn poly_gcd(fs: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
    if fs.is_empty() {
        return Err(LaurentError::EmptyGcd);
    }
    let mut acc = LaurentPoly::zero();
    for f in fs {
        acc = gcd2(&acc, f);
        if acc.is_one() {
            break;
        }
    }
    Ok(acc)
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.min_degree
            .cmp(&other.min_degree)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_degree.min(rhs.min_degree);
        let hi = self.max_degree().unwrap().max(rhs.max_degree().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (d, c) in self.terms().chain(rhs.terms()) {
            coeffs[(d - lo) as usize] += c;
        }
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { min_degree: self.min_degree, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.min_degree + rhs.min_degree, coeffs)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, x| &acc + &x)
    }
}

/// Canonical text: descending powers, e.g. `t^2 - t + 1`, `-2*t^-1 + 3`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (deg, c)) in self.terms().rev().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if deg == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if deg == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{deg}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts sums of terms `c`, `c*t`, `c t^k`, `t^-k` in any order, with
    /// arbitrary whitespace (`1-t+ t^2`, `t^2 - t + 1`, `2*t^-1`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LaurentError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let bytes = compact.as_bytes();
        let mut terms: Vec<&str> = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut acc = LaurentPoly::zero();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coef, deg) = match body.find('t') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0i64),
                Some(pos) => {
                    let coef_part = body[..pos].trim_end_matches('*');
                    let coef = if coef_part.is_empty() {
                        BigInt::one()
                    } else {
                        coef_part.parse::<BigInt>().map_err(|_| bad())?
                    };
                    let rest = &body[pos + 1..];
                    let deg = if rest.is_empty() {
                        1
                    } else {
                        let e = rest.strip_prefix('^').ok_or_else(bad)?;
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        e.parse::<i64>().map_err(|_| bad())?
                    };
                    (coef, deg)
                }
            };
            let coef = if neg { -coef } else { coef };
            acc = &acc + &LaurentPoly::monomial(coef, deg);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("t - 1") * p("t + 1"), p("t^2 - 1"));
        assert_eq!(p("3t^2 - t") + LaurentPoly::zero(), p("3t^2 - t"));
        assert_eq!(p("t^-1") * p("t"), LaurentPoly::one());
        assert_eq!(p("t^2 + 1") - p("t^2 + 1"), LaurentPoly::zero());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(p("-t^-2 + t^-1 - 1").normalize_unit(), p("t^2 - t + 1"));
        assert_eq!(LaurentPoly::one().normalize_unit(), LaurentPoly::one());
        assert_eq!(p("-5t^3").normalize_unit(), p("5"));
        assert!(LaurentPoly::zero().normalize_unit().is_zero());
    }

    #[test]
    fn gcd_examples() {
        let f = p("t^2 - t + 1");
        assert_eq!(poly_gcd(&[f.clone(), LaurentPoly::zero()]).unwrap(), f);
        assert_eq!(poly_gcd(&[p("2t"), p("4t^3")]).unwrap(), p("2"));
        assert_eq!(poly_gcd(&[f, p("t - 1")]).unwrap(), LaurentPoly::one());
        assert!(matches!(poly_gcd(&[]), Err(LaurentError::EmptyGcd)));
        // common factor survives
        let g = p("t^2 - t + 1") * p("2t - 3");
        let h = p("t^2 - t + 1") * p("t^3 + 5");
        assert_eq!(gcd2(&g, &h), p("t^2 - t + 1"));
        assert_eq!(gcd2(&p("6t^2 + 6"), &p("4t^2 + 4")), p("2t^2 + 2"));
    }

    #[test]
    fn text_round_trip() {
        for s in ["t^2 - t + 1", "3 - 2*t^-1", "t^4 - t^3 + t^2 - t + 1", "0", "-t", "7"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("1-t+ t^2"), p("t^2 - t + 1"));
        assert_eq!(p("2-7*t+ 14*t^2"), p("14t^2 - 7t + 2"));
        assert!("t^".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("2x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn division() {
        let f = p("t^3 + 1");
        let g = p("t + 1");
        assert_eq!(f.div_exact(&g), Some(p("t^2 - t + 1")));
        assert_eq!(p("t^2 + 1").div_exact(&g), None);
        assert_eq!(p("2t").div_exact(&p("2t^-1")), Some(p("t^2")));
        let (q, r) = p("t^4 - t^3 + t^2 - t + 1").div_rem_unit_leading(&p("t^2 - t + 1")).unwrap();
        assert_eq!(&(&q * &p("t^2 - t + 1")) + &r, p("t^4 - t^3 + t^2 - t + 1"));
        assert!(r.span() < 2);
        let (q, r) = p("3t^3 + t + 1").div_rem_unit_trailing(&p("2t + 1")).unwrap();
        assert_eq!(&(&q * &p("2t + 1")) + &r, p("3t^3 + t + 1"));
        assert!(r.span() < 1);
    }

    #[test]
    fn evaluation_and_reflection() {
        let f = p("t^2 - 3t + 1");
        assert_eq!(f.eval_at_one(), BigInt::from(-1));
        assert_eq!(f.eval_at_minus_one(), BigInt::from(5));
        assert_eq!(p("t^-1 + 2t^3").reflect(), p("t + 2t^-3"));
    }
}
