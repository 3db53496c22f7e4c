use std::fmt;

use itertools::Itertools;

use super::{bezout_pair, LaurentError, LaurentPoly};
use crate::par::Exec;

/// Dense row-major matrix over `Z[t, t^-1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self, LaurentError> {
        if entries.len() != rows * cols {
            return Err(LaurentError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn diag(entries: &[LaurentPoly]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn remove_column(&self, col: usize) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        self.select(&(0..self.rows).collect::<Vec<_>>(), &keep)
    }

    pub fn remove_row(&self, row: usize) -> Self {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        self.select(&keep, &(0..self.cols).collect::<Vec<_>>())
    }

    /// Appends a column on the right.
    pub fn with_column(&self, col: &[LaurentPoly]) -> Self {
        assert_eq!(col.len(), self.rows);
        let mut entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for (i, c) in col.iter().enumerate() {
            entries.extend_from_slice(self.row(i));
            entries.push(c.clone());
        }
        PolyMatrix { rows: self.rows, cols: self.cols + 1, entries }
    }

    /// Block-diagonal sum `a ⊕ b`.
    pub fn block_diag(a: &PolyMatrix, b: &PolyMatrix) -> Self {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Determinant of a square matrix. Cofactor expansion up to 4x4,
    /// fraction-free elimination above that.
    pub fn determinant(&self) -> Result<LaurentPoly, LaurentError> {
        if !self.is_square() {
            return Err(LaurentError::Shape(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        if self.rows <= 4 {
            Ok(self.determinant_cofactor())
        } else {
            Ok(self.determinant_bareiss())
        }
    }

    /// Laplace expansion along the first row. Square input assumed.
    pub fn determinant_cofactor(&self) -> LaurentPoly {
        fn rec(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> LaurentPoly {
            match rows.len() {
                0 => LaurentPoly::one(),
                1 => m.get(rows[0], cols[0]).clone(),
                _ => {
                    let mut acc = LaurentPoly::zero();
                    for (k, &c) in cols.iter().enumerate() {
                        let e = m.get(rows[0], c);
                        if e.is_zero() {
                            continue;
                        }
                        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                        let term = e * &rec(m, &rows[1..], &rest);
                        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                    }
                    acc
                }
            }
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        rec(self, &rows, &cols)
    }

    /// Bareiss fraction-free elimination; every division is exact in the
    /// Laurent ring. Square input assumed.
    pub fn determinant_bareiss(&self) -> LaurentPoly {
        let n = self.rows;
        if n == 0 {
            return LaurentPoly::one();
        }
        let mut a: Vec<Vec<LaurentPoly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return LaurentPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = LaurentPoly::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// All `k x k` minors, rows-combination major, in lexicographic order.
    /// `k = 0` yields `[1]`.
    pub fn minors(&self, k: usize, exec: Exec) -> Result<Vec<LaurentPoly>, LaurentError> {
        if k > self.rows.min(self.cols) {
            return Err(LaurentError::MinorSize { k, rows: self.rows, cols: self.cols });
        }
        if k == 0 {
            return Ok(vec![LaurentPoly::one()]);
        }
        let row_sets: Vec<Vec<usize>> = (0..self.rows).combinations(k).collect();
        let col_sets: Vec<Vec<usize>> = (0..self.cols).combinations(k).collect();
        let pairs: Vec<(&Vec<usize>, &Vec<usize>)> =
            row_sets.iter().flat_map(|r| col_sets.iter().map(move |c| (r, c))).collect();
        Ok(exec.map(&pairs, |(r, c)| {
            self.select(r, c).determinant().expect("square by construction")
        }))
    }

    /// Generators of the `k`-th elementary (Fitting) ideal of the module this
    /// matrix presents, one generator per column: the `(cols - k)`-minors.
    /// `[1]` when `cols <= k`, `[0]` when there are too few rows.
    pub fn elementary_ideal(&self, k: usize, exec: Exec) -> Vec<LaurentPoly> {
        if self.cols <= k {
            return vec![LaurentPoly::one()];
        }
        let size = self.cols - k;
        if size > self.rows {
            return vec![LaurentPoly::zero()];
        }
        self.minors(size, exec).expect("size checked")
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 {
            return write!(f, "[] ({}x{})", self.rows, self.cols);
        }
        for i in 0..self.rows {
            let row = self.row(i).iter().map(|e| e.to_string()).join(", ");
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{row}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{}:\n{self}", self.rows, self.cols)
    }
}

/// Upper bound on the number of Euclidean column/row steps in
/// [`smith_reduce_heuristic`], per current column.
const EUCLID_BUDGET_PER_COL: usize = 64;

/// Simplifies a presentation matrix without changing the presented module.
///
/// Repeatedly eliminates unit pivots (`±t^k`) by Schur complement, runs
/// Euclidean division steps between entries that share a row or column when
/// the divisor has a unit leading or trailing coefficient, and mixes rows
/// when a row has a lone entry that is comaximal with another. A square
/// matrix with unit determinant presents the zero module and collapses to
/// `0x0`. The column count of the output bounds the number of module
/// generators from above. Always terminates: every branch either removes a
/// column or consumes budget.
pub fn smith_reduce_heuristic(m: &PolyMatrix) -> PolyMatrix {
    let mut m = drop_zero_rows(m.clone());
    let mut budget = EUCLID_BUDGET_PER_COL * (m.cols + 1);
    loop {
        if m.cols == 0 {
            return PolyMatrix::zeros(0, 0);
        }
        if let Some((i, j)) = find_unit(&m) {
            m = drop_zero_rows(eliminate_unit(&m, i, j));
            continue;
        }
        if m.is_square() && m.rows <= 6 && m.determinant().map(|d| d.is_unit()).unwrap_or(false) {
            return PolyMatrix::zeros(0, 0);
        }
        if budget == 0 {
            return m;
        }
        budget -= 1;
        if bezout_step(&mut m) || bezout_mixing_step(&mut m) || euclid_step(&mut m) || mixing_step(&mut m) {
            m = drop_zero_rows(m);
            continue;
        }
        return m;
    }
}

fn drop_zero_rows(m: PolyMatrix) -> PolyMatrix {
    let keep: Vec<usize> = (0..m.rows).filter(|&i| m.row(i).iter().any(|e| !e.is_zero())).collect();
    if keep.len() == m.rows {
        return m;
    }
    m.select(&keep, &(0..m.cols).collect::<Vec<_>>())
}

fn find_unit(m: &PolyMatrix) -> Option<(usize, usize)> {
    (0..m.rows)
        .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
        .find(|&(i, j)| m.get(i, j).is_unit())
}

/// Uses relation `i` to solve for generator `j` and substitutes it
/// everywhere else: `M'[r][c] = M[r][c] - M[r][j] * u^-1 * M[i][c]`.
fn eliminate_unit(m: &PolyMatrix, i: usize, j: usize) -> PolyMatrix {
    let u = m.get(i, j);
    let u_inv = LaurentPoly::one().div_exact(u).expect("unit");
    let rows: Vec<usize> = (0..m.rows).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..m.cols).filter(|&c| c != j).collect();
    let mut out = PolyMatrix::zeros(rows.len(), cols.len());
    for (ri, &r) in rows.iter().enumerate() {
        let factor = m.get(r, j) * &u_inv;
        for (ci, &c) in cols.iter().enumerate() {
            let v = if factor.is_zero() { m.get(r, c).clone() } else { m.get(r, c) - &(&factor * m.get(i, c)) };
            out.set(ri, ci, v);
        }
    }
    out
}

/// Best division of `target` by `divisor` that shrinks the span.
fn reduce_by(target: &LaurentPoly, divisor: &LaurentPoly) -> Option<(LaurentPoly, LaurentPoly)> {
    if divisor.is_zero() || target.is_zero() || divisor.span() > target.span() {
        return None;
    }
    let candidates = [target.div_rem_unit_leading(divisor), target.div_rem_unit_trailing(divisor)];
    candidates
        .into_iter()
        .flatten()
        .filter(|(_, r)| r.is_zero() || r.span() < target.span())
        .min_by_key(|(_, r)| (if r.is_zero() { 0 } else { r.span() + 1 }, r.content()))
}

/// Coprime pair `f, g` in one row (column) with `u f + v g = 1`: the
/// unimodular column (row) transform `[[u, -g], [v, f]]` turns it into
/// `(1, 0)`, and the next pass eliminates the new unit.
fn bezout_step(m: &mut PolyMatrix) -> bool {
    for i in 0..m.rows {
        for j in 0..m.cols {
            for k in j + 1..m.cols {
                if let Some((u, v)) = bezout_pair(m.get(i, j), m.get(i, k)) {
                    let (f, g) = (m.get(i, j).clone(), m.get(i, k).clone());
                    for r in 0..m.rows {
                        let (x, y) = (m.get(r, j).clone(), m.get(r, k).clone());
                        m.set(r, j, &(&u * &x) + &(&v * &y));
                        m.set(r, k, &(&f * &y) - &(&g * &x));
                    }
                    return true;
                }
            }
        }
    }
    for j in 0..m.cols {
        for i in 0..m.rows {
            for r in i + 1..m.rows {
                if let Some((u, v)) = bezout_pair(m.get(i, j), m.get(r, j)) {
                    let (f, g) = (m.get(i, j).clone(), m.get(r, j).clone());
                    for c in 0..m.cols {
                        let (x, y) = (m.get(i, c).clone(), m.get(r, c).clone());
                        m.set(i, c, &(&u * &x) + &(&v * &y));
                        m.set(r, c, &(&f * &y) - &(&g * &x));
                    }
                    return true;
                }
            }
        }
    }
    false
}

/// Adds row `r` to row `i` when that creates a coprime pair in row `i`.
fn bezout_mixing_step(m: &mut PolyMatrix) -> bool {
    for i in 0..m.rows {
        for r in 0..m.rows {
            if i == r {
                continue;
            }
            for j in 0..m.cols {
                for k in 0..m.cols {
                    if j == k || m.get(r, k).is_zero() || !m.get(i, k).is_zero() {
                        continue;
                    }
                    let f = m.get(i, j) + m.get(r, j);
                    if bezout_pair(&f, m.get(r, k)).is_some() {
                        for c in 0..m.cols {
                            let v = m.get(i, c) + m.get(r, c);
                            m.set(i, c, v);
                        }
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// One column operation `col_k -= q * col_j` (or row operation) reducing an
/// entry by another in the same row (column).
fn euclid_step(m: &mut PolyMatrix) -> bool {
    let mut best: Option<(usize, bool, usize, usize, LaurentPoly)> = None;
    let mut consider = |score: usize, is_col: bool, src: usize, dst: usize, q: LaurentPoly| {
        if best.as_ref().is_none_or(|b| score < b.0) {
            best = Some((score, is_col, src, dst, q));
        }
    };
    for i in 0..m.rows {
        for j in 0..m.cols {
            for k in 0..m.cols {
                if j == k {
                    continue;
                }
                if let Some((q, r)) = reduce_by(m.get(i, k), m.get(i, j)) {
                    consider(if r.is_zero() { 0 } else { r.span() + 1 }, true, j, k, q);
                }
            }
        }
    }
    for j in 0..m.cols {
        for i in 0..m.rows {
            for r in 0..m.rows {
                if i == r {
                    continue;
                }
                if let Some((q, rem)) = reduce_by(m.get(r, j), m.get(i, j)) {
                    consider(if rem.is_zero() { 0 } else { rem.span() + 1 }, false, i, r, q);
                }
            }
        }
    }
    let Some((_, is_col, src, dst, q)) = best else { return false };
    if is_col {
        for i in 0..m.rows {
            let v = m.get(i, dst) - &(&q * m.get(i, src));
            m.set(i, dst, v);
        }
    } else {
        for j in 0..m.cols {
            let v = m.get(dst, j) - &(&q * m.get(src, j));
            m.set(dst, j, v);
        }
    }
    true
}

/// Adds one row to another when the target row would then contain two
/// entries that a Euclidean step can work on. Handles block-diagonal inputs
/// such as `diag(f, g)` with comaximal `f`, `g`.
fn mixing_step(m: &mut PolyMatrix) -> bool {
    for i in 0..m.rows {
        for r in 0..m.rows {
            if i == r {
                continue;
            }
            for j in 0..m.cols {
                for k in 0..m.cols {
                    if j == k || m.get(i, k).is_zero() || !m.get(r, k).is_zero() {
                        continue;
                    }
                    // row r gains entry at k; needs a partner at j it can reduce against
                    let (a, b) = (m.get(r, j), m.get(i, k));
                    if a.is_zero() {
                        continue;
                    }
                    if reduce_by(b, a).is_some() || reduce_by(a, b).is_some() {
                        for c in 0..m.cols {
                            let v = m.get(r, c) + m.get(i, c);
                            m.set(r, c, v);
                        }
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Convenience for tests and reports: the constant `1x1` matrix `[f]`.
pub fn single(f: LaurentPoly) -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![f]])
}
