//! Finite fields `F_p[t]/(pi(t))` and the specialization homomorphism
//! `Z[t, t^-1] -> F_p[t]/(pi)`. A generator family that specializes to zero
//! under such a map lies in the maximal ideal `(p, pi)`, which certifies that
//! the ideal it generates is proper.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::{LaurentError, LaurentPoly, PolyMatrix};

/// Primes used by the default specialization battery.
pub const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// Largest degree of an irreducible factor tried by the default battery.
pub const DEFAULT_MAX_FACTOR_DEGREE: usize = 4;

/// Polynomial over `F_p`, ascending coefficients, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_add(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_neg(a: &[u64], p: u64) -> Fp {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Quotient and remainder; `b` nonzero.
fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let b_lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + b.len() - 1] * b_lead_inv % p;
        if c == 0 {
            continue;
        }
        for (j, &d) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * d % p) % p;
        }
        q[i] = c;
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Monic polynomials of degree `d` over `F_p` with nonzero constant term,
/// in lexicographic order.
fn monic_candidates(p: u64, d: usize) -> impl Iterator<Item = Fp> {
    let count = p.pow(d as u32);
    (0..count).filter_map(move |mut n| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(n % p);
            n /= p;
        }
        v.push(1);
        (v[0] != 0).then_some(v)
    })
}

fn fp_monic(a: Fp, p: u64) -> Fp {
    match a.last() {
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
        None => a,
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(x, p)
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Fp {
    fp_divrem(&fp_mul(a, b, p), m, p).1
}

fn fp_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Fp {
    let mut acc: Fp = fp_divrem(&[1], m, p).1;
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// `h - t` for a residue `h`.
fn minus_t(h: &[u64], p: u64) -> Fp {
    fp_add(h, &[0, p - 1], p)
}

/// Rabin's test: `f` (degree `d`) is irreducible iff it shares no factor
/// with `t^(p^k) - t` for `k <= d/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let mut h: Fp = fp_divrem(&[0, 1], f, p).1;
    for _ in 1..=d / 2 {
        h = fp_powmod(&h, p as u128, f, p);
        if fp_gcd(f, &minus_t(&h, p), p).len() > 1 {
            return false;
        }
    }
    true
}

const SPLIT_TRIES: u64 = 4096;

/// Some monic irreducible factor of the monic squarefree-or-not `g`
/// (degree >= 1, `g(0) != 0`), smallest degree first. Distinct-degree
/// factorization isolates the lowest degree `k`; equal-degree pieces are
/// split by gcds with `(t + a)^((p^k - 1) / 2) - 1`, or by trial division
/// for `p = 2`.
fn smallest_irreducible_factor(g: &[u64], p: u64) -> Option<Fp> {
    let mut h: Fp = fp_divrem(&[0, 1], g, p).1;
    for k in 1..g.len() {
        h = fp_powmod(&h, p as u128, g, p);
        let mut d = fp_gcd(g, &minus_t(&h, p), p);
        if d.len() < 2 {
            continue;
        }
        if p == 2 {
            return monic_candidates(2, k).find(|c| fp_divrem(&d, c, 2).1.is_empty());
        }
        let q = (p as u128).checked_pow(k as u32)?;
        let mut a = 0u64;
        while d.len() - 1 > k {
            if a >= SPLIT_TRIES {
                return None;
            }
            let probe: Fp = if a < p { vec![a, 1] } else { vec![a % p, a / p % p, 1] };
            a += 1;
            let r = fp_powmod(&probe, (q - 1) / 2, &d, p);
            let split = fp_gcd(&d, &fp_add(&r, &[p - 1], p), p);
            if split.len() > 1 && split.len() < d.len() {
                let other = fp_monic(fp_divrem(&d, &split, p).0, p);
                d = if split.len() <= other.len() { split } else { other };
            }
        }
        return Some(d);
    }
    None
}

fn reduce_mod_p(f: &LaurentPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut g: Fp = trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced mod p")).collect());
    while g.first() == Some(&0) {
        g.remove(0);
    }
    g
}

/// A field `F_p[t]/(pi)` in which every element of `gens` vanishes, if one
/// exists for this prime: `pi` is an irreducible factor of the gcd of the
/// generators mod `p`. `None` means no such field exists for `p`, or a
/// factor could not be isolated.
pub fn common_root_field(gens: &[LaurentPoly], p: u64) -> Option<FieldSpec> {
    if !is_prime(p) || p > u32::MAX as u64 {
        return None;
    }
    let mut g: Fp = Vec::new();
    for f in gens {
        g = fp_gcd(&g, &reduce_mod_p(f, p), p);
        if g.len() == 1 {
            return None;
        }
    }
    let modulus = if g.is_empty() { vec![p - 1, 1] } else { smallest_irreducible_factor(&g, p)? };
    let spec = FieldSpec { p, modulus };
    gens.iter().all(|f| spec.specialize(f).is_zero()).then_some(spec)
}

/// The residue field `F_p[t]/(modulus)` with `t` invertible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    modulus: Fp,
}

/// Element of a [`FieldSpec`] field: reduced polynomial in `t`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem(Fp);

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl FieldSpec {
    /// `modulus` is given in ascending order and must be monic, irreducible
    /// mod `p`, with nonzero constant term.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self, LaurentError> {
        let bad = |why: &str| LaurentError::InvalidField(format!("p={p}, modulus={modulus:?}: {why}"));
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(bad("p is not a supported prime"));
        }
        let m = trim(modulus.iter().map(|c| c % p).collect());
        if m.len() < 2 {
            return Err(bad("degree must be at least 1"));
        }
        if *m.last().unwrap() != 1 {
            return Err(bad("modulus must be monic"));
        }
        if m[0] == 0 {
            return Err(bad("t must be invertible (nonzero constant term)"));
        }
        if !is_irreducible(&m, p) {
            return Err(bad("modulus is reducible"));
        }
        Ok(FieldSpec { p, modulus: m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(Vec::new())
    }

    pub fn one(&self) -> FieldElem {
        self.reduce(vec![1])
    }

    /// Residue class of `t`.
    pub fn t_image(&self) -> FieldElem {
        self.reduce(vec![0, 1])
    }

    fn reduce(&self, a: Fp) -> FieldElem {
        FieldElem(fp_divrem(&trim(a), &self.modulus, self.p).1)
    }

    pub fn from_int(&self, c: &BigInt) -> FieldElem {
        let r = c.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced mod p");
        self.reduce(vec![r])
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(fp_add(&a.0, &b.0, self.p))
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(fp_add(&a.0, &fp_neg(&b.0, self.p), self.p))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.reduce(fp_mul(&a.0, &b.0, self.p))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let p = self.p;
        let (mut r0, mut r1) = (self.modulus.clone(), a.0.clone());
        let (mut s0, mut s1): (Fp, Fp) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = fp_divrem(&r0, &r1, p);
            let s = fp_add(&s0, &fp_neg(&fp_mul(&q, &s1, p), p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = inv_mod(r0[0], p);
        Some(self.reduce(s0.iter().map(|&x| x * c % p).collect()))
    }

    fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of `f` under `Z[t, t^-1] -> F_p[t]/(modulus)`.
    pub fn specialize(&self, f: &LaurentPoly) -> FieldElem {
        let Some(lo) = f.min_degree() else { return self.zero() };
        // Horner over the core polynomial, then multiply by t^lo
        let mut acc = self.zero();
        let t = self.t_image();
        for c in f.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, &t), &self.from_int(c));
        }
        let shift = if lo >= 0 {
            self.pow(&t, lo as u64)
        } else {
            let t_inv = self.inv(&t).expect("t invertible");
            self.pow(&t_inv, lo.unsigned_abs())
        };
        self.mul(&acc, &shift)
    }

    /// Rank of the entrywise specialization of `m`, by Gaussian elimination.
    pub fn rank(&self, m: &PolyMatrix) -> usize {
        let mut a: Vec<Vec<FieldElem>> =
            (0..m.rows()).map(|i| m.row(i).iter().map(|e| self.specialize(e)).collect()).collect();
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, piv);
            let inv = self.inv(&a[rank][c]).expect("nonzero pivot");
            let pivot = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == rank || row[c].is_zero() {
                    continue;
                }
                let factor = self.mul(&row[c], &inv);
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x = self.sub(x, &self.mul(&factor, p));
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank of `m` specialized into the field described by `spec`.
pub fn rank_over_field(m: &PolyMatrix, spec: &FieldSpec) -> usize {
    spec.rank(m)
}

/// Image of `f` in the field described by `spec`.
pub fn specialize(f: &LaurentPoly, spec: &FieldSpec) -> FieldElem {
    spec.specialize(f)
}

/// Distinct monic irreducible factors (other than `t`) of `f mod p` of degree
/// at most `max_degree`, found by trial division in increasing degree.
pub fn irreducible_factors_mod_p(f: &LaurentPoly, p: u64, max_degree: usize) -> Vec<FieldSpec> {
    let mut g = reduce_mod_p(f, p);
    if g.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for d in 1..=max_degree {
        if g.len() - 1 < d {
            break;
        }
        for cand in monic_candidates(p, d) {
            if g.len() - 1 < d {
                break;
            }
            let mut hit = false;
            loop {
                let (q, r) = fp_divrem(&g, &cand, p);
                if !r.is_empty() {
                    break;
                }
                g = q;
                hit = true;
            }
            if hit {
                out.push(FieldSpec { p, modulus: cand });
            }
        }
    }
    out
}

/// Specialization battery for a knot with Alexander polynomial `delta`: for
/// every prime, one field per small irreducible factor of `delta mod p`.
/// Any maximal ideal containing an elementary ideal of the knot contains
/// `delta`, so these are the only candidates worth trying.
pub fn default_battery(delta: &LaurentPoly, primes: &[u64], max_degree: usize) -> Vec<FieldSpec> {
    primes
        .iter()
        .filter(|&&p| is_prime(p))
        .flat_map(|&p| irreducible_factors_mod_p(delta, p, max_degree))
        .collect()
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<BigInt> = self.modulus.iter().map(|&c| BigInt::from(c)).collect();
        write!(f, "(p={}, {})", self.p, LaurentPoly::from_coeffs(0, coeffs))
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec{self}")
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
