//! Cartan calculus backends.
//!
//! A backend provides graded commutative forms with `d`, wedge, contraction,
//! a potential finder, point evaluation and de Rham cohomology. Two exact
//! implementations exist: polynomial forms on `ℝ^m` ([`Euclidean`]) and the
//! invariant model where forms are Chevalley-Eilenberg cochains of a Lie
//! algebra `𝔥` ([`Invariant`]).

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;
use thiserror::Error;

use crate::foundation::{subsets, IndexSet, Rational, RationalMatrix};

pub mod euclidean;
pub mod form;
pub mod invariant;
pub mod poly;

pub use euclidean::{Euclidean, PolyForm, PolyTerm, PolyVectorField};
pub use form::Form;
pub use invariant::{AlgForm, Invariant};
pub use poly::{Exponent, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("contraction of a degree-0 form")]
    DegreeZero,
    #[error("form of degree {0} is not closed")]
    NotClosed(usize),
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Euclidean,
    Invariant,
}

/// Result of [`Cartan::find_potential`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Potential<K: Ord> {
    Exact(Form<K>),
    /// No potential; `class` holds the coordinates in the chosen basis of
    /// cohomology representatives.
    Obstructed {
        class: Vec<Rational>,
    },
}

/// A de Rham cohomology group given by representatives.
#[derive(Debug, Clone)]
pub struct DeRhamGroup<K: Ord> {
    pub degree: usize,
    pub representatives: Vec<Form<K>>,
}

impl<K: Ord> DeRhamGroup<K> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

pub trait FormKey: Clone + Ord + Hash + Debug + Send + Sync + 'static {}
impl<T: Clone + Ord + Hash + Debug + Send + Sync + 'static> FormKey for T {}

pub trait Cartan: Send + Sync {
    type Key: FormKey;
    type Field: Clone + PartialEq + Debug + Send + Sync;
    /// Piece of a direct-sum decomposition of forms preserved by `d` and by
    /// contraction with the action fields. Solvers work one stratum at a time.
    type Stratum: Clone + Ord + Debug + Send + Sync;

    fn kind(&self) -> BackendKind;
    fn dim(&self) -> usize;
    fn base_point(&self) -> Vec<Rational>;
    fn key_degree(&self, key: &Self::Key) -> usize;

    fn d(&self, a: &Form<Self::Key>) -> Form<Self::Key>;
    /// Wedge product; the flag reports a degree overflow, in which case the
    /// zero form of top degree is returned.
    fn wedge_checked(&self, a: &Form<Self::Key>, b: &Form<Self::Key>) -> (Form<Self::Key>, bool);
    fn contract(&self, v: &Self::Field, a: &Form<Self::Key>) -> Result<Form<Self::Key>, CartanError>;

    fn field_bracket(&self, v: &Self::Field, w: &Self::Field) -> Self::Field;
    fn field_zero(&self) -> Self::Field;
    fn field_combination(&self, terms: &[(Rational, &Self::Field)]) -> Self::Field;
    fn field_is_zero(&self, v: &Self::Field) -> bool;
    fn field_at(&self, v: &Self::Field, point: &[Rational]) -> Result<Vec<Rational>, CartanError>;

    fn evaluate_at(&self, a: &Form<Self::Key>, point: &[Rational])
        -> Result<BTreeMap<IndexSet, Rational>, CartanError>;
    fn find_potential(&self, a: &Form<Self::Key>) -> Result<Potential<Self::Key>, CartanError>;
    fn de_rham(&self, degree: usize) -> DeRhamGroup<Self::Key>;
    /// Coordinates of the class of a closed form with respect to
    /// [`Cartan::de_rham`] representatives. Exact forms map to zero.
    fn de_rham_coordinates(&self, a: &Form<Self::Key>) -> Vec<Rational>;

    fn stratum(&self, key: &Self::Key) -> Self::Stratum;
    /// Basis keys of the given degree inside a stratum, restricted to
    /// coefficient degree at most `bound` when given.
    fn stratum_basis(&self, s: &Self::Stratum, degree: usize, bound: Option<usize>) -> Vec<Self::Key>;
    fn coefficient_degree(&self, key: &Self::Key) -> usize;

    fn wedge(&self, a: &Form<Self::Key>, b: &Form<Self::Key>) -> Form<Self::Key> {
        self.wedge_checked(a, b).0
    }

    fn lie_derivative(&self, v: &Self::Field, a: &Form<Self::Key>) -> Form<Self::Key> {
        let da = self.d(a);
        let mut out = if da.degree() == 0 || da.is_zero() {
            Form::zero(a.degree())
        } else {
            self.contract(v, &da).expect("positive degree")
        };
        if a.degree() > 0 {
            let iv = self.contract(v, a).expect("positive degree");
            out += &self.d(&iv);
        }
        out
    }

    /// `ι_{v_k} ⋯ ι_{v_1} a`, contracting `fields[0]` first.
    fn contract_all(&self, fields: &[&Self::Field], a: &Form<Self::Key>) -> Result<Form<Self::Key>, CartanError> {
        let mut out = a.clone();
        for v in fields {
            out = self.contract(v, &out)?;
        }
        Ok(out)
    }

    fn is_closed(&self, a: &Form<Self::Key>) -> bool {
        self.d(a).is_zero()
    }

    fn constant_one(&self) -> Form<Self::Key>;
}

/// Value of an alternating tensor `Σ_I t_I dx_I` on vectors `v_1, …, v_k`.
pub fn alternating_value(tensor: &BTreeMap<IndexSet, Rational>, vectors: &[Vec<Rational>]) -> Rational {
    let mut acc = Rational::zero();
    for (set, c) in tensor {
        if set.len() != vectors.len() {
            continue;
        }
        let idx = set.to_vec();
        let rows: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
            .collect();
        acc += c * determinant(rows);
    }
    acc
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *dst -= &f * src;
            }
        }
    }
    det
}

/// Verdict of [`nondegeneracy_check`] at one sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointVerdict {
    pub point: Vec<Rational>,
    pub rank: usize,
    pub nondegenerate: bool,
}

/// Rank of `v ↦ ι_v ω_p` at each point; full rank means `ω` is
/// nondegenerate there.
pub fn nondegeneracy_check<C: Cartan>(
    backend: &C,
    omega: &Form<C::Key>,
    points: &[Vec<Rational>],
) -> Result<Vec<PointVerdict>, CartanError> {
    let m = backend.dim();
    let k = omega.degree();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let tensor = backend.evaluate_at(omega, p)?;
        let rank = if k == 0 {
            0
        } else {
            let cols = subsets(m, k - 1);
            let mut mat = RationalMatrix::zeros(m, cols.len());
            for (set, c) in &tensor {
                for (pos, i) in set.iter().enumerate() {
                    let rest = set.remove(i);
                    let j = cols.iter().position(|s| *s == rest).expect("subset basis");
                    let v = if pos % 2 == 0 { c.clone() } else { -c };
                    mat.add_to(i, j, &v);
                }
            }
            mat.rank()
        };
        out.push(PointVerdict {
            point: p.clone(),
            rank,
            nondegenerate: rank == m,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::int;

    #[test]
    fn alternating_value_is_determinant() {
        let mut t = BTreeMap::new();
        t.insert(IndexSet::from_indices([0, 1]), int(1));
        let v = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        assert_eq!(alternating_value(&t, &v), int(-2));
        let w = vec![vec![int(3), int(4)], vec![int(1), int(2)]];
        assert_eq!(alternating_value(&t, &w), int(2));
    }
}
