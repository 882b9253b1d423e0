//! Dense exact linear algebra over [`Rational`].
//!
//! Elimination always pivots on the first nonzero entry of a column, so echelon
//! forms, nullspace bases and particular solutions are reproducible.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        self.entries[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    /// Row vector times matrix: `y·A`.
    pub fn left_mul_vec(&self, y: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if y.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "row vector of length {} times {}x{} matrix",
                y.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (c, a) in self.row(r).iter().enumerate() {
                if !a.is_zero() {
                    out[c] += yr * a;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.add_to(r, c, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        Factorization::new(self).rank()
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        Factorization::new(self).nullspace().to_vec()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let f = Factorization::new(self);
        (f.rank() == self.rows).then(|| f.transform.clone())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = Factorization::new(self);
        (f.echelon.clone(), f.pivots.clone())
    }
}

/// Scale so that the first nonzero entry is one.
pub fn normalize_leading(v: &mut [Rational]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        if !lead.is_one() {
            for x in v.iter_mut() {
                *x /= &lead;
            }
        }
    }
}

/// Outcome of a linear solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// `A·x = b` with free variables set to zero; `nullspace` spans `ker A`.
    Solved {
        x: Vec<Rational>,
        nullspace: Vec<Vec<Rational>>,
    },
    /// No solution: `certificate·A = 0` and `certificate·b ≠ 0`.
    Inconsistent { certificate: Vec<Rational> },
}

impl Solution {
    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            Solution::Solved { x, .. } => Some(x),
            Solution::Inconsistent { .. } => None,
        }
    }
}

/// Gauss–Jordan factorisation `T·A = R` of a matrix, reusable for many
/// right-hand sides.
#[derive(Debug, Clone)]
pub struct Factorization {
    rows: usize,
    cols: usize,
    echelon: RationalMatrix,
    transform: RationalMatrix,
    pivots: Vec<usize>,
    nullspace: Vec<Vec<Rational>>,
}

impl Factorization {
    pub fn new(a: &RationalMatrix) -> Self {
        let (rows, cols) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut t = RationalMatrix::identity(rows);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == rows {
                break;
            }
            let Some(p) = (prow..rows).find(|&i| !r.get(i, c).is_zero()) else {
                continue;
            };
            if p != prow {
                swap_rows(&mut r, p, prow);
                swap_rows(&mut t, p, prow);
            }
            let inv = r.get(prow, c).recip();
            scale_row(&mut r, prow, &inv);
            scale_row(&mut t, prow, &inv);
            for i in 0..rows {
                if i == prow {
                    continue;
                }
                let factor = r.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                axpy_row(&mut r, i, prow, &factor);
                axpy_row(&mut t, i, prow, &factor);
            }
            pivots.push(c);
            prow += 1;
        }

        let mut nullspace = Vec::new();
        let mut is_pivot = vec![false; cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            normalize_leading(&mut v);
            nullspace.push(v);
        }

        Self {
            rows,
            cols,
            echelon: r,
            transform: t,
            pivots,
            nullspace,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn nullspace(&self) -> &[Vec<Rational>] {
        &self.nullspace
    }

    pub fn echelon(&self) -> &RationalMatrix {
        &self.echelon
    }

    /// Vectors `y` with `y·A = 0`, one per zero row of the echelon form.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        (self.rank()..self.rows)
            .map(|i| {
                let mut y = self.transform.row(i).to_vec();
                normalize_leading(&mut y);
                y
            })
            .collect()
    }

    pub fn solve(&self, b: &[Rational]) -> Result<Solution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let c = self.transform.mul_vec(b)?;
        if let Some(i) = (self.rank()..self.rows).find(|&i| !c[i].is_zero()) {
            let mut certificate = self.transform.row(i).to_vec();
            normalize_leading(&mut certificate);
            return Ok(Solution::Inconsistent { certificate });
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = c[i].clone();
        }
        Ok(Solution::Solved {
            x,
            nullspace: self.nullspace.clone(),
        })
    }

    /// Particular solution only, `None` when inconsistent.
    pub fn solve_particular(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let c = self.transform.mul_vec(b).ok()?;
        if (self.rank()..self.rows).any(|i| !c[i].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = c[i].clone();
        }
        Some(x)
    }
}

/// Solve `A·x = b` exactly.
pub fn solve_linear(a: &RationalMatrix, b: &[Rational]) -> Result<Solution, LinalgError> {
    Factorization::new(a).solve(b)
}

/// Greedily select, in order, the candidates that are linearly independent of
/// `base` and of the previously selected candidates. Returns their indices.
pub fn extend_basis(dim: usize, base: &[Vec<Rational>], candidates: &[Vec<Rational>]) -> Vec<usize> {
    let mut span: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let reduce = |v: &[Rational], span: &mut Vec<Vec<Rational>>, pivots: &mut Vec<usize>| {
        let mut w = v.to_vec();
        for (row, &p) in span.iter().zip(pivots.iter()) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let inv = w[p].recip();
                for x in w.iter_mut() {
                    *x *= &inv;
                }
                // keep earlier rows reduced against the new pivot
                for row in span.iter_mut() {
                    if !row[p].is_zero() {
                        let f = row[p].clone();
                        for (x, y) in row.iter_mut().zip(&w) {
                            if !y.is_zero() {
                                *x -= &f * y;
                            }
                        }
                    }
                }
                span.push(w);
                pivots.push(p);
                true
            }
            None => false,
        }
    };
    for v in base {
        assert_eq!(v.len(), dim);
        reduce(v, &mut span, &mut pivots);
    }
    let mut chosen = Vec::new();
    for (i, v) in candidates.iter().enumerate() {
        assert_eq!(v.len(), dim);
        if reduce(v, &mut span, &mut pivots) {
            chosen.push(i);
        }
    }
    chosen
}

fn swap_rows(m: &mut RationalMatrix, a: usize, b: usize) {
    let cols = m.cols;
    for c in 0..cols {
        m.entries.swap(a * cols + c, b * cols + c);
    }
}

fn scale_row(m: &mut RationalMatrix, r: usize, f: &Rational) {
    let cols = m.cols;
    for x in &mut m.entries[r * cols..(r + 1) * cols] {
        if !x.is_zero() {
            *x *= f;
        }
    }
}

/// `row[target] -= factor * row[source]`
fn axpy_row(m: &mut RationalMatrix, target: usize, source: usize, factor: &Rational) {
    let cols = m.cols;
    for c in 0..cols {
        let s = &m.entries[source * cols + c];
        if s.is_zero() {
            continue;
        }
        let delta = factor * s;
        m.entries[target * cols + c] -= delta;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn identity_solve() {
        let s = solve_linear(&RationalMatrix::identity(2), &v(&[1, 2])).unwrap();
        assert_eq!(
            s,
            Solution::Solved {
                x: v(&[1, 2]),
                nullspace: vec![]
            }
        );
    }

    #[test]
    fn underdetermined_solve() {
        let a = m(&[&[1, 1]]);
        let Solution::Solved { x, nullspace } = solve_linear(&a, &v(&[3])).unwrap() else {
            panic!("expected a solution");
        };
        assert_eq!(x, v(&[3, 0]));
        assert_eq!(nullspace, vec![v(&[1, -1])]);
        assert_eq!(a.mul_vec(&x).unwrap(), v(&[3]));
        assert_eq!(a.mul_vec(&nullspace[0]).unwrap(), v(&[0]));
    }

    #[test]
    fn inconsistent_has_certificate() {
        let a = m(&[&[1], &[1]]);
        let b = v(&[0, 1]);
        let Solution::Inconsistent { certificate } = solve_linear(&a, &b).unwrap() else {
            panic!("expected no solution");
        };
        assert_eq!(certificate, v(&[1, -1]));
        assert_eq!(a.left_mul_vec(&certificate).unwrap(), v(&[0]));
        let yb: Rational = certificate.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert_eq!(yb, int(-1));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = m(&[&[1, 2]]);
        assert!(matches!(
            solve_linear(&a, &v(&[1, 2])),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_and_rref() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.row(0), &v(&[1, 0, 1])[..]);
        assert_eq!(r.row(2), &v(&[0, 0, 0])[..]);
    }

    #[test]
    fn extend_basis_skips_dependent() {
        let base = vec![v(&[1, 0, 0])];
        let cands = vec![v(&[2, 0, 0]), v(&[1, 1, 0]), v(&[0, 1, 0]), v(&[0, 0, 5])];
        assert_eq!(extend_basis(3, &base, &cands), vec![1, 3]);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn left_kernel_annihilates() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        let f = Factorization::new(&a);
        let lk = f.left_kernel();
        assert_eq!(lk.len(), 1);
        assert!(a.left_mul_vec(&lk[0]).unwrap().iter().all(Zero::is_zero));
    }
}
