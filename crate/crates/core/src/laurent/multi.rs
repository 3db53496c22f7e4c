use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a Laurent monomial `t_1^e_1 ... t_r^e_r`.
pub type Monomial = Vec<i64>;

/// Integral Laurent polynomial in a small number of commuting variables.
/// Only what the abelianized Fox calculus needs: addition of monomials and a
/// zero test.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, monomial: Monomial, c: &BigInt) {
        let entry = self.terms.entry(monomial.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, &BigInt::from(c));
        }
        out
    }
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (mono, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match n {
                0 if c.is_negative() => write!(f, "-")?,
                0 => {}
                _ => write!(f, " {sign} ")?,
            }
            let vars: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{e}", i + 1) })
                .collect();
            let mag = c.abs();
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiLaurent({self})")
    }
}
