use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::word::{commutator, kill_generators, random_word, Word};
use super::FreeGroupError;
use crate::par::Exec;

/// One factor `g^-1 y^sign g` of a product of conjugates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjugateFactor {
    pub conjugator: Word,
    pub sign: i8,
    /// Index into the base set `Y` supplied at evaluation time.
    pub base: usize,
}

/// Membership certificate for a normal closure `<<Y>>`: an explicit product
/// of conjugates of elements of `Y` and their inverses.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WitnessProduct {
    pub factors: Vec<ConjugateFactor>,
}

impl WitnessProduct {
    pub fn evaluate(&self, bases: &[Word]) -> Result<Word, FreeGroupError> {
        let needed = self.factors.iter().map(|f| f.base + 1).max().unwrap_or(0);
        if bases.len() < needed {
            return Err(FreeGroupError::MissingBase { needed, got: bases.len() });
        }
        Ok(self.factors.iter().fold(Word::empty(), |acc, f| {
            let y = bases[f.base].pow(f.sign as i64);
            acc.mul(&y.conjugate_by(&f.conjugator))
        }))
    }
}

impl fmt::Display for WitnessProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("({})^-1 y{}^{} ({})", x.conjugator, x.base + 1, x.sign, x.conjugator))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Output of [`lemma_witness`]. The decomposition is over the base set
/// `Y = [c, d]` (index 0 is `c`, index 1 is `d`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LemmaWitness {
    pub witness: Word,
    pub decomposition: WitnessProduct,
}

/// For `a = c * a_next` and `b = d * b_next`, returns the element
///
/// `g = a_next^-1 (c^-1 (b_next^-1 (d^-1 c (a_next d a_next^-1)) b_next)) a_next`
///
/// with `[a, b] = g * [a_next, b_next]`, together with `g` written as a
/// product of conjugates of `c^±1` and `d^±1`. In particular `[a, b]` and
/// `[a_next, b_next]` agree modulo the normal closure of `{c, d}`.
pub fn lemma_witness(a_next: &Word, b_next: &Word, c: &Word, d: &Word) -> LemmaWitness {
    let a_inv = a_next.inverse();
    let inner = d.inverse().mul(c).mul(&a_next.mul(d).mul(&a_inv));
    let middle = b_next.inverse().mul(&inner).mul(b_next);
    let witness = a_inv.mul(&c.inverse().mul(&middle)).mul(a_next);

    // g = (c^-1)^{a'} (d^-1)^{b'a'} (c)^{b'a'} (d)^{a'^-1 b' a'}
    let ba = b_next.mul(a_next);
    let aba = a_inv.mul(b_next).mul(a_next);
    let factor = |conjugator: Word, sign: i8, base: usize| ConjugateFactor { conjugator, sign, base };
    let decomposition = WitnessProduct {
        factors: vec![
            factor(a_next.clone(), -1, 0),
            factor(ba.clone(), -1, 1),
            factor(ba, 1, 0),
            factor(aba, 1, 1),
        ],
    };
    LemmaWitness { witness, decomposition }
}

/// Tally of a seeded sweep over random instances of the splitting identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheckSummary {
    pub seed: u64,
    pub iterations: usize,
    /// `[c a', d b'] == g [a', b']` after free reduction.
    pub identity_ok: usize,
    /// The conjugate decomposition evaluates to `g`.
    pub decomposition_ok: usize,
    /// `g` dies when the generators of `c` and `d` are killed.
    pub killed_ok: usize,
    /// Indices of the first failing instances, if any.
    pub failures: Vec<usize>,
}

impl LemmaCheckSummary {
    pub fn passed(&self) -> usize {
        self.iterations - self.failure_count()
    }

    fn failure_count(&self) -> usize {
        self.iterations - self.identity_ok.min(self.decomposition_ok).min(self.killed_ok)
    }

    pub fn all_passed(&self) -> bool {
        self.identity_ok == self.iterations
            && self.decomposition_ok == self.iterations
            && self.killed_ok == self.iterations
    }
}

impl fmt::Display for LemmaCheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lemma-check: {}/{} passed (seed {}; identity {}, decomposition {}, killed {})",
            self.passed(),
            self.iterations,
            self.seed,
            self.identity_ok,
            self.decomposition_ok,
            self.killed_ok
        )
    }
}

/// Per-instance generator: reproducible for a given `(seed, index)` no
/// matter how instances are scheduled.
fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

const SAMPLE_RANK: usize = 6;
const SAMPLE_MAX_LEN: usize = 8;

fn sample(rng: &mut ChaCha8Rng) -> Word {
    let len = rng.gen_range(0..=SAMPLE_MAX_LEN);
    random_word(rng, SAMPLE_RANK, len)
}

/// Checks the splitting identity on `iterations` random instances with words
/// of length at most 8 over 6 generators.
pub fn lemma_check(seed: u64, iterations: usize, exec: Exec) -> LemmaCheckSummary {
    let results = exec.map_range(iterations, |i| {
        let mut rng = instance_rng(seed, i);
        let (a_next, b_next, c, d) = (sample(&mut rng), sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let lw = lemma_witness(&a_next, &b_next, &c, &d);
        let lhs = commutator(&c.mul(&a_next), &d.mul(&b_next));
        let identity = lhs == lw.witness.mul(&commutator(&a_next, &b_next));
        let decomposition = lw.decomposition.evaluate(&[c.clone(), d.clone()]).ok() == Some(lw.witness.clone());
        let killed: BTreeSet<usize> = c.generators().union(&d.generators()).copied().collect();
        let dies = kill_generators(&lw.witness, &killed).is_empty();
        (identity, decomposition, dies)
    });
    let mut summary = LemmaCheckSummary {
        seed,
        iterations,
        identity_ok: 0,
        decomposition_ok: 0,
        killed_ok: 0,
        failures: Vec::new(),
    };
    for (i, (a, b, c)) in results.into_iter().enumerate() {
        summary.identity_ok += a as usize;
        summary.decomposition_ok += b as usize;
        summary.killed_ok += c as usize;
        if !(a && b && c) && summary.failures.len() < 10 {
            summary.failures.push(i);
        }
    }
    summary
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheckSummary {
    pub seed: u64,
    pub iterations: usize,
    pub levels: usize,
    pub passed: usize,
    pub failures: Vec<usize>,
}

impl fmt::Display for ChainCheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain-check: {}/{} passed ({} levels, seed {})",
            self.passed, self.iterations, self.levels, self.seed
        )
    }
}

/// Iterated splitting: picks a terminal pair `(a_L, b_L)` and splitting
/// elements `c_i, d_i`, sets `a_i = c_i a_{i+1}`, `b_i = d_i b_{i+1}`, and
/// checks `[a_0, b_0] = g_0 g_1 ... g_{L-1} [a_L, b_L]` where `g_i` is the
/// witness of level `i`. Each `g_i` must also die modulo `c_i, d_i`.
pub fn chain_check(seed: u64, iterations: usize, levels: usize, exec: Exec) -> ChainCheckSummary {
    let results = exec.map_range(iterations, |i| {
        let mut rng = instance_rng(seed ^ 0x9e37_79b9_7f4a_7c15, i);
        let mut a = sample(&mut rng);
        let mut b = sample(&mut rng);
        let terminal = commutator(&a, &b);
        let mut witnesses: Vec<Word> = Vec::with_capacity(levels);
        let mut killed_ok = true;
        for _ in 0..levels {
            let (c, d) = (sample(&mut rng), sample(&mut rng));
            let lw = lemma_witness(&a, &b, &c, &d);
            let killed: BTreeSet<usize> = c.generators().union(&d.generators()).copied().collect();
            killed_ok &= kill_generators(&lw.witness, &killed).is_empty();
            witnesses.push(lw.witness);
            a = c.mul(&a);
            b = d.mul(&b);
        }
        // witnesses were produced from the deepest level outwards
        let product = witnesses.iter().rev().fold(Word::empty(), |acc, g| acc.mul(g));
        killed_ok && commutator(&a, &b) == product.mul(&terminal)
    });
    let failures: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).take(10).collect();
    ChainCheckSummary {
        seed,
        iterations,
        levels,
        passed: results.iter().filter(|ok| **ok).count(),
        failures,
    }
}
