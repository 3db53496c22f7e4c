//! Explicit Bezout combinations for coprime pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{integer, LaurentPoly};

/// `(u, v)` with `u f + v g = 1`, found when the resultant of the two
/// (t-free) polynomials is `±1`.
pub fn bezout_pair(f: &LaurentPoly, g: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
    let (r, u, v) = resultant_combination(f, g)?;
    if !r.abs().is_one() {
        return None;
    }
    let (u, v) = if r.is_negative() { (-u, -v) } else { (u, v) };
    Some((u, v))
}

/// `(r, u, v)` with `u f + v g = r` for a nonzero integer `r`: the gcd when
/// both are constants, otherwise the resultant with its Sylvester cofactors.
/// `None` when the pair has a common factor or either is zero.
pub fn resultant_combination(f: &LaurentPoly, g: &LaurentPoly) -> Option<(BigInt, LaurentPoly, LaurentPoly)> {
    let (fa, ga) = (f.min_degree()?, g.min_degree()?);
    let f0: Vec<BigInt> = f.coeffs().to_vec();
    let g0: Vec<BigInt> = g.coeffs().to_vec();
    let (m, n) = (f0.len() - 1, g0.len() - 1);
    if m == 0 && n == 0 {
        let e = f0[0].extended_gcd(&g0[0]);
        return Some((e.gcd, LaurentPoly::monomial(e.x, -fa), LaurentPoly::monomial(e.y, -ga)));
    }
    let s = sylvester(&f0, &g0);
    let det = integer::determinant(&s);
    if det.is_zero() {
        return None;
    }
    let mut rhs = vec![BigInt::zero(); m + n];
    rhs[0] = det.clone();
    let sol = solve_rational(&s, &rhs)?;
    let ints: Vec<BigInt> = sol.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect::<Option<_>>()?;
    let u = LaurentPoly::from_coeffs(-fa, ints[..n].to_vec());
    let v = LaurentPoly::from_coeffs(-ga, ints[n..].to_vec());
    let check = &(&u * f) + &(&v * g);
    (check == LaurentPoly::constant(det.clone())).then_some((det, u, v))
}

// columns: u_0..u_{n-1}, v_0..v_{m-1}; rows: coefficient of t^k
fn sylvester(f0: &[BigInt], g0: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (m, n) = (f0.len() - 1, g0.len() - 1);
    let mut s = vec![vec![BigInt::zero(); m + n]; m + n];
    for i in 0..n {
        for (k, c) in f0.iter().enumerate() {
            s[i + k][i] = c.clone();
        }
    }
    for j in 0..m {
        for (k, c) in g0.iter().enumerate() {
            s[j + k][n + j] = c.clone();
        }
    }
    s
}

fn solve_rational(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, r)| row.iter().chain(std::iter::once(r)).map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        let pivot = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// A nonzero integer in the ideal `(f, g)`, or zero when `f` and `g` share
/// a nonconstant factor (or one of them is zero).
pub fn integer_in_ideal(f: &LaurentPoly, g: &LaurentPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (f0, g0) = (f.coeffs(), g.coeffs());
    let (m, n) = (f0.len() - 1, g0.len() - 1);
    if m == 0 && n == 0 {
        return f0[0].gcd(&g0[0]);
    }
    integer::determinant(&sylvester(f0, g0)).abs()
}
