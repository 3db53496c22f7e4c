//! Certified bounds on the Nakanishi index `m(K)` and the MQ index `a(K)`.
//!
//! The Nakanishi index is bounded below through elementary ideals: a module
//! generated by `k` elements has `E_k = R`, so a certificate that `E_k` is a
//! proper ideal shows `m > k`. The upper bound is the column count of a
//! reduced presentation. The MQ index is then squeezed by `m <= a`, by
//! ingested metadata (unknotting number, rank, tunnel number), and for
//! fibered knots by `a = m`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fox::{alexander_polynomial_with, AlexanderData};
use crate::laurent::{
    bezout_pair, resultant_combination, common_root_field, default_battery, gcd2, integer_in_ideal, smith_reduce_heuristic, single, FieldSpec, LaurentPoly, PolyMatrix,
    DEFAULT_MAX_FACTOR_DEGREE,
};
use crate::par::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("inconsistent bounds: lower {lower} exceeds upper {upper} after rule {rule}")]
    Inconsistent { lower: u32, upper: u32, rule: Rule },
    #[error("internal: Fitting lower bound {lower} exceeds reduced generator count {upper}")]
    Internal { lower: u32, upper: u32 },
    #[error("torus knot parameter {0} must be odd with |p| >= 3")]
    TorusParameter(i64),
}

/// A ring combination `sum c_i g_i = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FullWitness {
    pub coefficients: Vec<LaurentPoly>,
}

impl FullWitness {
    pub fn verify(&self, gens: &[LaurentPoly]) -> bool {
        self.coefficients.len() == gens.len()
            && self.coefficients.iter().zip(gens).map(|(c, g)| c * g).sum::<LaurentPoly>().is_one()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IdealStatus {
    /// The ideal is the whole ring.
    Full(FullWitness),
    /// Every generator vanishes in this field, so the ideal is proper.
    NotFull(FieldSpec),
    Unknown,
}

impl IdealStatus {
    pub fn is_full(&self) -> bool {
        matches!(self, IdealStatus::Full(_))
    }

    pub fn is_not_full(&self) -> bool {
        matches!(self, IdealStatus::NotFull(_))
    }
}

impl fmt::Display for IdealStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealStatus::Full(_) => write!(f, "full"),
            IdealStatus::NotFull(spec) => write!(f, "proper at {spec}"),
            IdealStatus::Unknown => write!(f, "unknown"),
        }
    }
}

const MAX_PAIRS: usize = 4096;

/// Tries to certify whether `gens` generate the unit ideal.
pub fn ideal_full_status(gens: &[LaurentPoly], battery: &[FieldSpec]) -> IdealStatus {
    let n = gens.len();
    if let Some(i) = gens.iter().position(LaurentPoly::is_unit) {
        let mut coefficients = vec![LaurentPoly::zero(); n];
        coefficients[i] = unit_inverse(&gens[i]);
        return IdealStatus::Full(FullWitness { coefficients });
    }
    if gens.iter().all(LaurentPoly::is_zero) {
        return IdealStatus::NotFull(FieldSpec::new(2, &[1, 1]).expect("t + 1 is irreducible mod 2"));
    }
    if let Some(spec) = battery.iter().find(|s| gens.iter().all(|g| s.specialize(g).is_zero())) {
        return IdealStatus::NotFull(spec.clone());
    }
    for p in candidate_primes(gens, battery) {
        if let Some(spec) = common_root_field(gens, p) {
            return IdealStatus::NotFull(spec);
        }
    }
    let mut distinct: Vec<(usize, LaurentPoly)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let norm = g.normalize_unit();
        if !g.is_zero() && !distinct.iter().any(|(_, h)| *h == norm) {
            distinct.push((i, norm));
        }
    }
    let mut tried = 0;
    for x in 0..distinct.len() {
        for y in x + 1..distinct.len() {
            if tried >= MAX_PAIRS {
                return IdealStatus::Unknown;
            }
            tried += 1;
            let (i, j) = (distinct[x].0, distinct[y].0);
            if !gcd2(&gens[i], &gens[j]).is_one() {
                continue;
            }
            if let Some((u, v)) = bezout_pair(&gens[i], &gens[j]) {
                let mut coefficients = vec![LaurentPoly::zero(); n];
                coefficients[i] = u;
                coefficients[j] = v;
                let w = FullWitness { coefficients };
                debug_assert!(w.verify(gens));
                return IdealStatus::Full(w);
            }
        }
    }
    match integer_combination(gens, &distinct) {
        Some(w) => IdealStatus::Full(w),
        None => IdealStatus::Unknown,
    }
}

/// Combines the integers `u g_i + v g_j = r` lying in the ideal through the
/// extended gcd; succeeds when their gcd reaches one.
fn integer_combination(gens: &[LaurentPoly], distinct: &[(usize, LaurentPoly)]) -> Option<FullWitness> {
    let n = gens.len();
    let mut acc = BigInt::zero();
    let mut coefficients = vec![LaurentPoly::zero(); n];
    let pairs = distinct.iter().enumerate().flat_map(|(x, a)| distinct[x + 1..].iter().map(move |b| (a.0, b.0)));
    for (i, j) in pairs.take(MAX_RESULTANT_PAIRS) {
        let Some((r, u, v)) = resultant_combination(&gens[i], &gens[j]) else { continue };
        let e = acc.extended_gcd(&r);
        let (x, y) = (LaurentPoly::constant(e.x), LaurentPoly::constant(e.y));
        for c in coefficients.iter_mut() {
            *c = &*c * &x;
        }
        coefficients[i] = &coefficients[i] + &(&y * &u);
        coefficients[j] = &coefficients[j] + &(&y * &v);
        acc = e.gcd;
        if acc.is_one() {
            let w = FullWitness { coefficients };
            debug_assert!(w.verify(gens));
            return Some(w);
        }
    }
    None
}

const MAX_RESULTANT_PAIRS: usize = 64;
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Primes worth testing for a common root of `gens`: the battery primes
/// and the prime factors of an integer lying in the ideal (a gcd of pairwise
/// resultants), since every maximal ideal containing the generators
/// contains that integer.
fn candidate_primes(gens: &[LaurentPoly], battery: &[FieldSpec]) -> Vec<u64> {
    let mut primes: Vec<u64> = battery.iter().map(FieldSpec::p).collect();
    let nonzero: Vec<&LaurentPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut n = BigInt::zero();
    'pairs: for (k, (x, y)) in nonzero.iter().enumerate().flat_map(|(i, x)| nonzero[i + 1..].iter().map(move |y| (x, y))).enumerate() {
        if k >= MAX_RESULTANT_PAIRS {
            break 'pairs;
        }
        n = n.gcd(&integer_in_ideal(x, y));
        if n.is_one() {
            return Vec::new();
        }
    }
    if let Some(c) = nonzero.iter().find(|g| g.span() == 1) {
        n = n.gcd(&c.coeffs()[0]);
    }
    if !n.is_zero() {
        let mut rest = n.abs();
        let mut d = 2u64;
        while d < TRIAL_DIVISION_LIMIT && BigInt::from(d) * BigInt::from(d) <= rest {
            if (&rest % d).is_zero() {
                primes.push(d);
                while (&rest % d).is_zero() {
                    rest /= d;
                }
            }
            d += 1;
        }
        if let Some(r) = rest.to_u64().filter(|&r| r > 1 && r <= u32::MAX as u64) {
            primes.push(r);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn unit_inverse(u: &LaurentPoly) -> LaurentPoly {
    let d = u.min_degree().expect("unit is nonzero");
    LaurentPoly::monomial(u.coeff(d), -d)
}

/// Closed interval `[lower, upper]`; `upper = None` means no finite upper
/// bound is known.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct IndexBounds {
    pub lower: u32,
    pub upper: Option<u32>,
}

impl IndexBounds {
    pub fn exact(v: u32) -> Self {
        IndexBounds { lower: v, upper: Some(v) }
    }

    pub fn new(lower: u32, upper: u32) -> Self {
        IndexBounds { lower, upper: Some(upper) }
    }

    pub fn unbounded() -> Self {
        IndexBounds { lower: 0, upper: None }
    }

    pub fn is_tight(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn value(&self) -> Option<u32> {
        self.is_tight().then_some(self.lower)
    }
}

impl fmt::Display for IndexBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) if u == self.lower => write!(f, "{u}"),
            Some(u) => write!(f, "[{}, {u}]", self.lower),
            None => write!(f, "[{}, inf)", self.lower),
        }
    }
}

/// Elementary-ideal analysis of an Alexander module.
#[derive(Clone, Debug)]
pub struct NakanishiAnalysis {
    pub bounds: IndexBounds,
    /// The presentation after heuristic reduction; its column count is the
    /// upper bound.
    pub reduced: PolyMatrix,
    /// Status of `E_k` for `k = 0, 1, ...` up to the first certified full ideal.
    pub statuses: Vec<IdealStatus>,
}

impl NakanishiAnalysis {
    /// Smallest `k` with `E_k` certified full.
    pub fn first_full(&self) -> Option<usize> {
        self.statuses.iter().position(IdealStatus::is_full)
    }
}

pub fn nakanishi_bounds(a: &AlexanderData, battery: &[FieldSpec]) -> Result<IndexBounds, IndexError> {
    nakanishi_analysis(a, battery, Exec::default()).map(|n| n.bounds)
}

pub fn nakanishi_analysis(a: &AlexanderData, battery: &[FieldSpec], exec: Exec) -> Result<NakanishiAnalysis, IndexError> {
    let reduced = smith_reduce_heuristic(&a.presentation_matrix);
    let g = reduced.cols();
    let mut statuses = Vec::new();
    let mut lower = 0u32;
    for k in 0..=g {
        let gens = reduced.elementary_ideal(k, exec);
        let status = ideal_full_status(&gens, battery);
        if status.is_not_full() {
            lower = k as u32 + 1;
        }
        let full = status.is_full();
        statuses.push(status);
        if full {
            break;
        }
    }
    let upper = g as u32;
    if lower > upper {
        return Err(IndexError::Internal { lower, upper });
    }
    Ok(NakanishiAnalysis { bounds: IndexBounds::new(lower, upper), reduced, statuses })
}

/// Provenance of a step in the MQ-index squeeze.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    /// `m <= a`.
    NakanishiLower,
    /// `a >= 1` for a nontrivial knot.
    Nontrivial,
    /// `a <= u`.
    Unknotting,
    /// `a <= r - 1`.
    Rank,
    /// `a <= t`.
    Tunnel,
    /// `a <= 2` for prime knots up to ten crossings (literature value).
    TableHint,
    /// `a = m` for fibered knots, whose commutator subgroup is free.
    Fibered,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::NakanishiLower => "m<=a",
            Rule::Nontrivial => "nontrivial",
            Rule::Unknotting => "a<=u",
            Rule::Rank => "a<=r-1",
            Rule::Tunnel => "a<=t",
            Rule::TableHint => "table-hint",
            Rule::Fibered => "fibered:a=m",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Ingested knot metadata consumed by [`mq_bounds`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct KnotFacts {
    pub fibered: Option<bool>,
    pub unknotting: Option<u32>,
    pub rank: Option<u32>,
    pub tunnel: Option<u32>,
    pub nontrivial: bool,
    pub hint_upper: Option<u32>,
}

/// Squeezes `a(K)` between the computed `m(K)` bounds and the metadata. A
/// rule enters the trace only when it strictly tightens a bound.
pub fn mq_bounds(m: IndexBounds, facts: &KnotFacts) -> Result<(IndexBounds, Vec<Rule>), IndexError> {
    let mut a = IndexBounds::unbounded();
    let mut trace = Vec::new();

    let raise = |a: &mut IndexBounds, v: u32, rule: Rule, trace: &mut Vec<Rule>| {
        if v > a.lower {
            a.lower = v;
            if !trace.contains(&rule) {
                trace.push(rule);
            }
        }
    };
    let lower_upper = |a: &mut IndexBounds, v: Option<u32>, rule: Rule, trace: &mut Vec<Rule>| {
        if let Some(v) = v {
            if a.upper.is_none_or(|u| v < u) {
                a.upper = Some(v);
                if !trace.contains(&rule) {
                    trace.push(rule);
                }
            }
        }
    };
    let check = |a: &IndexBounds, rule: Rule| match a.upper {
        Some(u) if u < a.lower => Err(IndexError::Inconsistent { lower: a.lower, upper: u, rule }),
        _ => Ok(()),
    };

    raise(&mut a, m.lower, Rule::NakanishiLower, &mut trace);
    if facts.nontrivial {
        raise(&mut a, 1, Rule::Nontrivial, &mut trace);
    }
    let steps = [
        (facts.unknotting, Rule::Unknotting),
        (facts.rank.map(|r| r.saturating_sub(1)), Rule::Rank),
        (facts.tunnel, Rule::Tunnel),
        (facts.hint_upper, Rule::TableHint),
    ];
    for (v, rule) in steps {
        lower_upper(&mut a, v, rule, &mut trace);
        check(&a, rule)?;
    }
    if facts.fibered == Some(true) {
        raise(&mut a, m.lower, Rule::Fibered, &mut trace);
        lower_upper(&mut a, m.upper, Rule::Fibered, &mut trace);
        check(&a, Rule::Fibered)?;
    }
    Ok((a, trace))
}

/// Necessary condition for fiberedness: `Δ` is monic at both ends.
pub fn fibered_necessary(delta: &LaurentPoly) -> bool {
    match (delta.leading_coeff(), delta.trailing_coeff()) {
        (Some(l), Some(c)) => l.abs().is_one() && c.abs().is_one(),
        _ => false,
    }
}

/// Alexander data of a connected sum: block-diagonal presentation.
pub fn connected_sum_matrix(a1: &AlexanderData, a2: &AlexanderData) -> AlexanderData {
    AlexanderData::from_presentation(PolyMatrix::block_diag(&a1.presentation_matrix, &a2.presentation_matrix))
}

/// `(t^|p| + 1) / (t + 1)`.
pub fn torus_2p_alexander(p: i64) -> Result<LaurentPoly, IndexError> {
    if p.rem_euclid(2) == 0 || p.abs() < 3 {
        return Err(IndexError::TorusParameter(p));
    }
    let n = p.unsigned_abs() as usize;
    let coeffs: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    Ok(LaurentPoly::from_ints(0, &coeffs))
}

/// Per-knot result of the pipeline.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndexReport {
    pub name: String,
    #[serde(serialize_with = "display_str")]
    pub delta: LaurentPoly,
    pub m_lower: u32,
    pub m_upper: Option<u32>,
    pub a_lower: u32,
    pub a_upper: Option<u32>,
    pub fibered: Option<bool>,
    pub rules: Vec<Rule>,
}

fn display_str<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl IndexReport {
    pub fn new(name: impl Into<String>, delta: LaurentPoly, m: IndexBounds, a: IndexBounds, fibered: Option<bool>, rules: Vec<Rule>) -> Self {
        IndexReport {
            name: name.into(),
            delta,
            m_lower: m.lower,
            m_upper: m.upper,
            a_lower: a.lower,
            a_upper: a.upper,
            fibered,
            rules,
        }
    }

    pub fn m_bounds(&self) -> IndexBounds {
        IndexBounds { lower: self.m_lower, upper: self.m_upper }
    }

    pub fn a_bounds(&self) -> IndexBounds {
        IndexBounds { lower: self.a_lower, upper: self.a_upper }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<&str> = self.rules.iter().map(|r| r.tag()).collect();
        write!(
            f,
            "{}: delta = {}, m = {}, a = {}, rules [{}]",
            self.name,
            self.delta,
            self.m_bounds(),
            self.a_bounds(),
            rules.join(", ")
        )
    }
}

/// The connected sum of the `(2, p)` and `(2, q)` torus knots, analysed from
/// the block-diagonal module presentation. Both summands are fibered, hence
/// so is the sum.
pub fn kpq_classify(p: i64, q: i64, primes: &[u64]) -> Result<IndexReport, IndexError> {
    let (dp, dq) = (torus_2p_alexander(p)?, torus_2p_alexander(q)?);
    let a = connected_sum_matrix(&AlexanderData::from_presentation(single(dp)), &AlexanderData::from_presentation(single(dq)));
    let delta = alexander_polynomial_with(&a, Exec::default());
    let battery = default_battery(&delta, primes, DEFAULT_MAX_FACTOR_DEGREE);
    let m = nakanishi_bounds(&a, &battery)?;
    let facts = KnotFacts { fibered: Some(true), nontrivial: true, ..KnotFacts::default() };
    let (bounds, rules) = mq_bounds(m, &facts)?;
    Ok(IndexReport::new(format!("T(2,{p})#T(2,{q})"), delta, m, bounds, Some(true), rules))
}
