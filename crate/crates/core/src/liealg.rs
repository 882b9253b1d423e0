//! Finite-dimensional Lie algebras given by structure constants, and their
//! Chevalley–Eilenberg complex with trivial coefficients.
//!
//! Cochains in `Λ^k g*` are dense coefficient vectors over the lexicographic
//! basis [`SubsetBasis`]`(dim, k)`; the basis cochain `ε^J` evaluates to one on
//! the increasing tuple `e_J`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::foundation::combinatorics::{sort_sign, IndexSet, SubsetBasis, MAX_DIM};
use crate::foundation::matrix::{extend_basis, Factorization, RationalMatrix};
use crate::foundation::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("Lie algebra dimension must be between 1 and {MAX_DIM}, got {0}")]
    BadDimension(usize),
    #[error("structure constant index ({i}, {j}, {k}) outside 1..={dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("structure constants must be listed with i < j, got ({i}, {j})")]
    NotOrdered { i: usize, j: usize },
    #[error("degree {degree} outside the allowed range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    #[error("cochain of degree {0} is not a cocycle")]
    NotCocycle(usize),
    #[error("vector of length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
}

/// Why a set of structure constants fails to define a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieViolation {
    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] ≠ 0` (zero-based).
    Jacobi {
        triple: (usize, usize, usize),
        residual: Vec<Rational>,
    },
    /// A stored `[e_i, e_i]` entry.
    NotAntisymmetric { index: usize, value: Vec<Rational> },
}

impl std::fmt::Display for LieViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LieViolation::Jacobi { triple, residual } => {
                let r: Vec<String> = residual.iter().map(|q| q.to_string()).collect();
                write!(
                    f,
                    "Jacobi identity fails on (e{}, e{}, e{}) with residual ({})",
                    triple.0 + 1,
                    triple.1 + 1,
                    triple.2 + 1,
                    r.join(", ")
                )
            }
            LieViolation::NotAntisymmetric { index, .. } => {
                write!(f, "[e{0}, e{0}] is nonzero", index + 1)
            }
        }
    }
}

/// Structure constants `[e_i, e_j] = Σ_k c_ijk e_k`, stored for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    structure: BTreeMap<(usize, usize, usize), Rational>,
}

impl LieAlgebra {
    /// Build from zero-based `(i, j, k, c)` records with `i < j`.
    pub fn new<I>(dim: usize, entries: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some((i, j, _, _)) = entries.iter().find(|(i, j, _, _)| i >= j) {
            return Err(LieError::NotOrdered { i: i + 1, j: j + 1 });
        }
        let mut alg = Self::new_unchecked(dim, entries)?;
        alg.structure.retain(|_, c| !c.is_zero());
        Ok(alg)
    }

    /// Like [`LieAlgebra::new`] but keeps `i ≥ j` records so that
    /// [`LieAlgebra::validate`] can report them.
    pub fn new_unchecked<I>(dim: usize, entries: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        if dim == 0 || dim > MAX_DIM {
            return Err(LieError::BadDimension(dim));
        }
        let mut structure = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::IndexOutOfRange {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    dim,
                });
            }
            if i > j {
                *structure.entry((j, i, k)).or_insert_with(Rational::zero) -= c;
            } else {
                *structure.entry((i, j, k)).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Self { dim, structure })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, std::iter::empty()).expect("valid dimension")
    }

    /// `so(3)`: `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e2`.
    pub fn so3() -> Self {
        Self::new(3, [(0, 1, 2, int(1)), (1, 2, 0, int(1)), (0, 2, 1, int(-1))]).expect("so(3)")
    }

    /// The two-dimensional non-abelian algebra `[e1, e2] = e2`.
    pub fn aff1() -> Self {
        Self::new(2, [(0, 1, 1, int(1))]).expect("aff(1)")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based `(i, j, k) → c` records.
    pub fn structure(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.values().all(Zero::is_zero)
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let (a, b, sign) = if i <= j { (i, j, 1) } else { (j, i, -1) };
        for ((_, _, k), c) in self.structure.range((a, b, 0)..=(a, b, self.dim)) {
            if sign > 0 {
                out[*k] += c;
            } else {
                out[*k] -= c;
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = xi * yj;
                for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// Check antisymmetry of the stored data and the Jacobi identity on all
    /// basis triples.
    pub fn validate(&self) -> Result<(), LieViolation> {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    let (ei, ej, ek) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej));
                    let residual: Vec<Rational> = (0..d).map(|m| &t1[m] + &t2[m] + &t3[m]).collect();
                    if residual.iter().any(|x| !x.is_zero()) {
                        return Err(LieViolation::Jacobi {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        for i in 0..d {
            let v = self.bracket_basis(i, i);
            if v.iter().any(|x| !x.is_zero()) {
                return Err(LieViolation::NotAntisymmetric { index: i, value: v });
            }
        }
        Ok(())
    }

    /// Matrix of `ad_{e_i}`: column `l` is `[e_i, e_l]`.
    pub fn ad_matrix(&self, i: usize) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|l| self.bracket_basis(i, l)).collect();
        RationalMatrix::from_columns(self.dim, &cols)
    }

    /// `κ(e_i, e_j) = tr(ad_{e_i} ad_{e_j})`.
    pub fn killing_form(&self) -> RationalMatrix {
        let ads: Vec<RationalMatrix> = (0..self.dim).map(|i| self.ad_matrix(i)).collect();
        let mut k = RationalMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let prod = ads[i].mul(&ads[j]).expect("square");
                let tr: Rational = (0..self.dim).map(|a| prod.get(a, a).clone()).sum();
                k.set(i, j, tr);
            }
        }
        k
    }

    /// Matrix of `δ: Λ^k g* → Λ^{k+1} g*` with
    /// `(δf)(X_1..X_{k+1}) = Σ_{a<b} (-1)^{a+b} f([X_a,X_b], X_1..X̂_a..X̂_b..)`.
    pub fn ce_differential(&self, k: usize) -> Result<RationalMatrix, LieError> {
        if k > self.dim {
            return Err(LieError::DegreeOutOfRange {
                degree: k,
                min: 0,
                max: self.dim,
            });
        }
        let src = SubsetBasis::new(self.dim, k);
        let dst = SubsetBasis::new(self.dim, k + 1);
        let mut m = RationalMatrix::zeros(dst.len(), src.len());
        for (row, &target) in dst.sets().iter().enumerate() {
            let idx = target.to_vec();
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                    let rest = target.remove(idx[a]).remove(idx[b]);
                    for (c, coeff) in self.bracket_basis(idx[a], idx[b]).iter().enumerate() {
                        if coeff.is_zero() || rest.contains(c) {
                            continue;
                        }
                        let s = sign * i32::from(rest.insert_sign(c));
                        let col = src.index_of(rest.insert(c)).expect("basis");
                        m.add_to(row, col, &(coeff * int(s as i64)));
                    }
                }
            }
        }
        Ok(m)
    }

    /// `ω_e(e_i, e_j, e_k) = κ(e_i, [e_j, e_k])` on the basis of `Λ^3 g*`.
    pub fn cartan_three_cocycle(&self) -> Cochain {
        let kappa = self.killing_form();
        let basis = SubsetBasis::new(self.dim, 3);
        let coeffs = basis
            .sets()
            .iter()
            .map(|s| {
                let v = s.to_vec();
                let br = self.bracket_basis(v[1], v[2]);
                (0..self.dim)
                    .filter(|&m| !br[m].is_zero())
                    .map(|m| kappa.get(v[0], m) * &br[m])
                    .sum()
            })
            .collect();
        Cochain { degree: 3, coeffs }
    }

    /// `δ*: Λ^n g → Λ^{n-1} g`, the transpose of `δ` on `Λ^{n-1} g*`.
    pub fn boundary_delta_star(&self, n: usize) -> Result<RationalMatrix, LieError> {
        if n == 0 || n > self.dim {
            return Err(LieError::DegreeOutOfRange {
                degree: n,
                min: 1,
                max: self.dim,
            });
        }
        Ok(self.ce_differential(n - 1)?.transpose())
    }

    /// Basis of `P_g = ker δ* ⊂ Λ^n g`.
    pub fn p_g(&self, n: usize) -> Result<Vec<Chain>, LieError> {
        let ds = self.boundary_delta_star(n)?;
        Ok(ds
            .nullspace()
            .into_iter()
            .map(|coeffs| Chain { degree: n, coeffs })
            .collect())
    }

    /// `Λ^n(ad_X)` applied to a chain (Leibniz rule).
    pub fn adjoint_on_chains(&self, x: &[Rational], p: &Chain) -> Result<Chain, LieError> {
        if x.len() != self.dim {
            return Err(LieError::WrongLength {
                got: x.len(),
                expected: self.dim,
            });
        }
        let basis = SubsetBasis::new(self.dim, p.degree);
        let mut out = vec![Rational::zero(); basis.len()];
        for (pos, coeff) in p.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let idx = basis.get(pos).to_vec();
            for slot in 0..idx.len() {
                let image = self.bracket(x, &self.basis_vector(idx[slot]));
                for (c, ic) in image.iter().enumerate() {
                    if ic.is_zero() {
                        continue;
                    }
                    let mut seq = idx.clone();
                    seq[slot] = c;
                    let s = sort_sign(&seq);
                    if s == 0 {
                        continue;
                    }
                    let target = basis
                        .index_of(IndexSet::from_indices(seq.iter().copied()))
                        .expect("basis");
                    out[target] += coeff * ic * int(s as i64);
                }
            }
        }
        Ok(Chain {
            degree: p.degree,
            coeffs: out,
        })
    }

    pub fn complex(&self) -> CeComplex {
        CeComplex::new(self)
    }
}

/// An element of `Λ^k g*` in the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub coeffs: Vec<Rational>,
}

/// An element of `Λ^n g` in the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub coeffs: Vec<Rational>,
}

impl Chain {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// `H^k(g)` with a basis of representatives and the coordinate projection.
///
/// `Λ^k g*` is split as `B ⊕ span(reps) ⊕ C` with `B = im δ`, the
/// representatives completing `B` to `ker δ`, and `C` a complement. All three
/// are picked greedily in canonical order.
#[derive(Debug, Clone)]
pub struct Cohomology {
    degree: usize,
    representatives: Vec<Vec<Rational>>,
    coordinate_rows: RationalMatrix,
    differential: RationalMatrix,
}

impl Cohomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vec<Rational>] {
        &self.representatives
    }

    /// Coordinates of the `H`-component of any cochain in the adapted
    /// splitting (exact and complementary parts are dropped).
    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        self.coordinate_rows.mul_vec(v).expect("length")
    }

    /// Class of a cocycle; zero exactly when it is exact.
    pub fn class_of(&self, v: &[Rational]) -> Result<Vec<Rational>, LieError> {
        let dv = self.differential.mul_vec(v).map_err(|_| LieError::WrongLength {
            got: v.len(),
            expected: self.differential.cols(),
        })?;
        if dv.iter().any(|x| !x.is_zero()) {
            return Err(LieError::NotCocycle(self.degree));
        }
        Ok(self.project(v))
    }
}

/// The full Chevalley–Eilenberg complex of an algebra, with factorisations of
/// each differential and cohomology in every degree.
#[derive(Debug, Clone)]
pub struct CeComplex {
    algebra: LieAlgebra,
    bases: Vec<SubsetBasis>,
    differentials: Vec<RationalMatrix>,
    sparse_columns: Vec<Vec<Vec<(usize, Rational)>>>,
    factorizations: Vec<Factorization>,
    cohomology: Vec<Cohomology>,
}

impl CeComplex {
    pub fn new(algebra: &LieAlgebra) -> Self {
        let dim = algebra.dim();
        let bases: Vec<SubsetBasis> = (0..=dim + 1).map(|k| SubsetBasis::new(dim, k)).collect();
        let differentials: Vec<RationalMatrix> = (0..=dim)
            .map(|k| algebra.ce_differential(k).expect("degree in range"))
            .collect();
        let sparse_columns = differentials
            .iter()
            .map(|m| {
                (0..m.cols())
                    .map(|c| {
                        (0..m.rows())
                            .filter(|&r| !m.get(r, c).is_zero())
                            .map(|r| (r, m.get(r, c).clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let factorizations = differentials.iter().map(Factorization::new).collect();
        let cohomology = (0..=dim)
            .map(|k| {
                let n = bases[k].len();
                let boundaries: Vec<Vec<Rational>> = if k == 0 {
                    Vec::new()
                } else {
                    let prev = &differentials[k - 1];
                    (0..prev.cols()).map(|c| prev.column(c)).collect()
                };
                let cycles = differentials[k].nullspace();
                let b_idx = extend_basis(n, &[], &boundaries);
                let b_basis: Vec<Vec<Rational>> = b_idx.iter().map(|&i| boundaries[i].clone()).collect();
                let h_idx = extend_basis(n, &b_basis, &cycles);
                let reps: Vec<Vec<Rational>> = h_idx.iter().map(|&i| cycles[i].clone()).collect();
                let mut adapted = b_basis.clone();
                adapted.extend(reps.iter().cloned());
                let standard: Vec<Vec<Rational>> = (0..n)
                    .map(|i| {
                        let mut e = vec![Rational::zero(); n];
                        e[i] = Rational::one();
                        e
                    })
                    .collect();
                let c_idx = extend_basis(n, &adapted, &standard);
                adapted.extend(c_idx.iter().map(|&i| standard[i].clone()));
                let inv = RationalMatrix::from_columns(n, &adapted)
                    .inverse()
                    .expect("adapted basis is a basis");
                let start = b_basis.len();
                let rows: Vec<Vec<Rational>> = (start..start + reps.len()).map(|r| inv.row(r).to_vec()).collect();
                let coordinate_rows = if rows.is_empty() {
                    RationalMatrix::zeros(0, n)
                } else {
                    RationalMatrix::from_rows(rows).expect("rectangular")
                };
                Cohomology {
                    degree: k,
                    representatives: reps,
                    coordinate_rows,
                    differential: differentials[k].clone(),
                }
            })
            .collect();
        Self {
            algebra: algebra.clone(),
            bases,
            differentials,
            sparse_columns,
            factorizations,
            cohomology,
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Basis of `Λ^k` (empty for `k > dim`).
    pub fn basis(&self, k: usize) -> &SubsetBasis {
        &self.bases[k.min(self.dim() + 1)]
    }

    pub fn differential(&self, k: usize) -> &RationalMatrix {
        &self.differentials[k]
    }

    /// Nonzero entries `(row, c)` of column `col` of `δ_k`.
    pub fn differential_column(&self, k: usize, col: usize) -> &[(usize, Rational)] {
        &self.sparse_columns[k][col]
    }

    /// Factorisation of `δ_k`, for solving `δ_k x = b`.
    pub fn factorization(&self, k: usize) -> &Factorization {
        &self.factorizations[k]
    }

    pub fn cohomology(&self, k: usize) -> &Cohomology {
        &self.cohomology[k]
    }

    /// `dim H^k` for `k = 0..=dim`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.cohomology.iter().map(Cohomology::dim).collect()
    }

    /// Apply `δ_k` to a dense cochain.
    pub fn apply(&self, k: usize, v: &[Rational]) -> Vec<Rational> {
        if k >= self.differentials.len() {
            return Vec::new();
        }
        self.differentials[k].mul_vec(v).expect("length")
    }
}
