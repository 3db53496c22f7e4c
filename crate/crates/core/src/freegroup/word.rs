use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::FreeGroupError;

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in a free group. Every constructor reduces, so two
/// words are equal as group elements iff they are equal as values.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    /// Reduces `letters` with a stack pass.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Convenience: `(generator, ±1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Self::from_letters(pairs.iter().map(|&(g, e)| Letter::new(g, e < 0)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let overlap = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(a, b)| a.inv() == **b)
            .count();
        let mut letters = self.0[..self.0.len() - overlap].to_vec();
        letters.extend_from_slice(&other.0[overlap..]);
        Word(letters)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        other.inverse().mul(self).mul(other)
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::empty(), |acc, _| acc.mul(&base))
    }

    /// Prefix of the first `n` letters (already reduced).
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn generators(&self) -> BTreeSet<usize> {
        self.0.iter().map(|l| l.generator).collect()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Total exponent of each generator `0..rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0; rank];
        for l in &self.0 {
            sums[l.generator] += l.sign();
        }
        sums
    }

    pub fn total_exponent(&self) -> i64 {
        self.0.iter().map(|l| l.sign()).sum()
    }
}

/// `a^-1 b^-1 a b`.
pub fn commutator(a: &Word, b: &Word) -> Word {
    a.inverse().mul(&b.inverse()).mul(a).mul(b)
}

pub fn word_product(a: &Word, b: &Word) -> Word {
    a.mul(b)
}

pub fn word_inverse(w: &Word) -> Word {
    w.inverse()
}

/// Image under the retraction killing the listed generators.
pub fn kill_generators(w: &Word, killed: &BTreeSet<usize>) -> Word {
    Word::from_letters(w.0.iter().copied().filter(|l| !killed.contains(&l.generator)))
}

/// Uniform random reduced word of exactly `len` letters over `rank`
/// generators: each letter is drawn uniformly from the `2 * rank` letters,
/// rejecting the inverse of the previous one.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    assert!(rank >= 1);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let k = rng.gen_range(0..2 * rank);
        let l = Letter::new(k / 2, k % 2 == 1);
        if letters.last() == Some(&l.inv()) {
            continue;
        }
        letters.push(l);
    }
    Word(letters)
}

pub(crate) fn generator_name(g: usize) -> String {
    if g < 26 {
        ((b'a' + g as u8) as char).to_string()
    } else {
        format!("g{g}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", generator_name(l.generator))?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Word syntax: lowercase letters are generators (`a` = 0, ..., `z` = 25),
/// uppercase letters their inverses; any factor may carry `^n` (including
/// `^-1`); parentheses group; `[u, v]` is the commutator `u^-1 v^-1 u v`;
/// `1` is the identity. Whitespace and `*` are ignored.
impl FromStr for Word {
    type Err = FreeGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if chars.is_empty() {
            return Err(FreeGroupError::Parse { input: s.to_string(), pos: 0, reason: "empty word" });
        }
        let mut parser = Parser { input: s, chars: &chars, pos: 0 };
        let w = parser.product()?;
        if parser.pos != chars.len() {
            return Err(parser.err("unexpected character"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &'static str) -> FreeGroupError {
        FreeGroupError::Parse { input: self.input.to_string(), pos: self.pos, reason }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Word, FreeGroupError> {
        let mut acc = Word::empty();
        while let Some(c) = self.peek() {
            if c == ')' || c == ']' || c == ',' {
                break;
            }
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Word, FreeGroupError> {
        let base = match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Word::generator((c as u8 - b'a') as usize)
            }
            Some(c) if c.is_ascii_uppercase() => {
                self.pos += 1;
                Word::generator((c as u8 - b'A') as usize).inverse()
            }
            Some('1') => {
                self.pos += 1;
                Word::empty()
            }
            Some('(') => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(')')?;
                w
            }
            Some('[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(',')?;
                let b = self.product()?;
                self.expect(']')?;
                commutator(&a, &b)
            }
            _ => return Err(self.err("expected a generator, '(', '[' or '1'")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if self.peek() == Some('-') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            let e: i64 = text.parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn expect(&mut self, c: char) -> Result<(), FreeGroupError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("unbalanced brackets"))
        }
    }
}
