//! Polynomial differential forms on `ℝ^m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::form::Form;
use super::poly::{exponent_degree, Exponent, Poly};
use super::{BackendKind, Cartan, CartanError, DeRhamGroup, Potential};
use crate::foundation::{frac, int, subsets, IndexSet, Rational};

/// Basis key `x^exp dx_{dx}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyTerm {
    pub dx: IndexSet,
    pub exp: Exponent,
}

impl fmt::Debug for PolyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?} dx[{}]", self.exp, self.dx)
    }
}

pub type PolyForm = Form<PolyTerm>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyVectorField {
    components: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Poly>) -> Self {
        let m = components.len();
        assert!(components.iter().all(|p| p.nvars() == m), "component arity");
        Self { components }
    }

    pub fn zero(m: usize) -> Self {
        Self::new(vec![Poly::zero(m); m])
    }

    /// Constant field `∂_i`.
    pub fn coordinate(m: usize, i: usize) -> Self {
        let mut c = vec![Poly::zero(m); m];
        c[i] = Poly::constant(m, Rational::one());
        Self::new(c)
    }

    /// Linear field `x ↦ A x`, i.e. `Σ_{i,j} A_ij x_j ∂_i`.
    pub fn linear(a: &[Vec<Rational>]) -> Self {
        let m = a.len();
        let comps = a
            .iter()
            .map(|row| {
                let mut p = Poly::zero(m);
                for (j, c) in row.iter().enumerate() {
                    p = &p + &Poly::var(m, j).scaled(c);
                }
                p
            })
            .collect();
        Self::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::new(self.components.iter().map(|p| p.scaled(c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    /// Directional derivative `v(f) = Σ v^i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim());
        for (i, vi) in self.components.iter().enumerate() {
            if !vi.is_zero() {
                out = &out + &(vi * &f.derivative(i));
            }
        }
        out
    }

    /// `[v, w]^i = v(w^i) − w(v^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        Self::new(
            (0..self.dim())
                .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
                .collect(),
        )
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.components.iter().filter_map(Poly::total_degree).max()
    }
}

/// Polynomial forms on `ℝ^m` with the Poincaré homotopy centred at
/// `base_point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Euclidean {
    dim: usize,
    base_point: Vec<Rational>,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        Self::with_base_point(vec![Rational::zero(); dim])
    }

    pub fn with_base_point(base_point: Vec<Rational>) -> Self {
        assert!(base_point.len() <= crate::foundation::combinatorics::MAX_DIM);
        Self {
            dim: base_point.len(),
            base_point,
        }
    }

    /// Single term `c·x^exp dx_I` with zero-based indices.
    pub fn term(&self, dx: &[usize], exp: &[u32], c: Rational) -> PolyForm {
        assert_eq!(exp.len(), self.dim, "exponent length");
        let set = IndexSet::from_indices(dx.iter().copied());
        assert_eq!(set.len(), dx.len(), "repeated index");
        let s = crate::foundation::combinatorics::sort_sign(dx);
        let c = if s < 0 { -c } else { c };
        Form::from_terms(
            dx.len(),
            [(
                PolyTerm {
                    dx: set,
                    exp: exp.to_vec(),
                },
                c,
            )],
        )
    }

    /// `f dx_I`.
    pub fn poly_times(&self, f: &Poly, dx: IndexSet) -> PolyForm {
        Form::from_terms(
            dx.len(),
            f.terms()
                .iter()
                .map(|(e, c)| (PolyTerm { dx, exp: e.clone() }, c.clone())),
        )
    }

    pub fn function(&self, f: &Poly) -> PolyForm {
        self.poly_times(f, IndexSet::EMPTY)
    }

    /// `dx_1 ∧ ⋯ ∧ dx_m`.
    pub fn volume(&self) -> PolyForm {
        self.poly_times(
            &Poly::constant(self.dim, Rational::one()),
            IndexSet::from_indices(0..self.dim),
        )
    }

    /// Coefficient polynomials indexed by `dx_I`.
    pub fn coefficients(&self, a: &PolyForm) -> BTreeMap<IndexSet, Poly> {
        let mut out: BTreeMap<IndexSet, Poly> = BTreeMap::new();
        for (t, c) in a.terms() {
            out.entry(t.dx)
                .or_insert_with(|| Poly::zero(self.dim))
                .add_term(t.exp.clone(), c);
        }
        out
    }

    pub fn from_coefficients(&self, degree: usize, coeffs: &BTreeMap<IndexSet, Poly>) -> PolyForm {
        let mut out = Form::zero(degree);
        for (set, p) in coeffs {
            out += &self.poly_times(p, *set);
        }
        out
    }

    /// Substitute `x ↦ x + offset` in every coefficient.
    pub fn shift(&self, a: &PolyForm, offset: &[Rational]) -> PolyForm {
        if offset.iter().all(Zero::is_zero) {
            return a.clone();
        }
        let mut out = Form::zero(a.degree());
        for (set, p) in self.coefficients(a) {
            out += &self.poly_times(&p.shift(offset), set);
        }
        out
    }

    /// Homotopy operator centred at the origin.
    fn homotopy_at_origin(&self, a: &PolyForm) -> PolyForm {
        let k = a.degree();
        let mut out = Form::zero(k.saturating_sub(1));
        if k == 0 {
            return out;
        }
        for (t, c) in a.terms() {
            let weight = frac(1, (exponent_degree(&t.exp) + k) as i64);
            for (pos, i) in t.dx.iter().enumerate() {
                let mut exp = t.exp.clone();
                exp[i] += 1;
                let s = if pos % 2 == 0 { c * &weight } else { -(c * &weight) };
                out.add_term(
                    PolyTerm {
                        dx: t.dx.remove(i),
                        exp,
                    },
                    &s,
                );
            }
        }
        out
    }

    /// Poincaré homotopy `K` centred at the base point:
    /// `dK + Kd = id` on degrees ≥ 1 and `Kd f = f − f(base)`.
    pub fn homotopy(&self, a: &PolyForm) -> PolyForm {
        let b = &self.base_point;
        let minus_b: Vec<Rational> = b.iter().map(|x| -x).collect();
        let moved = self.shift(a, b);
        self.shift(&self.homotopy_at_origin(&moved), &minus_b)
    }

    fn check_point(&self, point: &[Rational]) -> Result<(), CartanError> {
        if point.len() != self.dim {
            return Err(CartanError::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        Ok(())
    }
}

impl Cartan for Euclidean {
    type Key = PolyTerm;
    type Field = PolyVectorField;
    /// Multidegree `exp + 1_dx`, preserved by `d` and by the homotopy.
    type Stratum = Exponent;

    fn kind(&self) -> BackendKind {
        BackendKind::Euclidean
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn base_point(&self) -> Vec<Rational> {
        self.base_point.clone()
    }

    fn key_degree(&self, key: &PolyTerm) -> usize {
        key.dx.len()
    }

    fn d(&self, a: &PolyForm) -> PolyForm {
        let mut out = Form::zero(a.degree() + 1);
        for (t, c) in a.terms() {
            for i in 0..self.dim {
                if t.exp[i] == 0 || t.dx.contains(i) {
                    continue;
                }
                let mut exp = t.exp.clone();
                exp[i] -= 1;
                let v = c * int(t.exp[i] as i64 * t.dx.insert_sign(i) as i64);
                out.add_term(
                    PolyTerm {
                        dx: t.dx.insert(i),
                        exp,
                    },
                    &v,
                );
            }
        }
        out
    }

    fn wedge_checked(&self, a: &PolyForm, b: &PolyForm) -> (PolyForm, bool) {
        let deg = a.degree() + b.degree();
        if deg > self.dim {
            return (Form::zero(self.dim), true);
        }
        let mut out = Form::zero(deg);
        for (s, c) in a.terms() {
            for (t, e) in b.terms() {
                if !s.dx.is_disjoint(t.dx) {
                    continue;
                }
                let sign = s.dx.wedge_sign(t.dx);
                let v = if sign > 0 { c * e } else { -(c * e) };
                out.add_term(
                    PolyTerm {
                        dx: s.dx.union(t.dx),
                        exp: s.exp.iter().zip(&t.exp).map(|(x, y)| x + y).collect(),
                    },
                    &v,
                );
            }
        }
        (out, false)
    }

    fn contract(&self, v: &PolyVectorField, a: &PolyForm) -> Result<PolyForm, CartanError> {
        if a.degree() == 0 {
            return Err(CartanError::DegreeZero);
        }
        let mut out = Form::zero(a.degree() - 1);
        for (t, c) in a.terms() {
            for (pos, i) in t.dx.iter().enumerate() {
                let vi = v.component(i);
                if vi.is_zero() {
                    continue;
                }
                let s = if pos % 2 == 0 { c.clone() } else { -c };
                let rest = t.dx.remove(i);
                for (e, vc) in vi.terms() {
                    out.add_term(
                        PolyTerm {
                            dx: rest,
                            exp: e.iter().zip(&t.exp).map(|(x, y)| x + y).collect(),
                        },
                        &(vc * &s),
                    );
                }
            }
        }
        Ok(out)
    }

    fn field_bracket(&self, v: &PolyVectorField, w: &PolyVectorField) -> PolyVectorField {
        v.bracket(w)
    }

    fn field_zero(&self) -> PolyVectorField {
        PolyVectorField::zero(self.dim)
    }

    fn field_combination(&self, terms: &[(Rational, &PolyVectorField)]) -> PolyVectorField {
        let mut out = self.field_zero();
        for (c, v) in terms {
            if !c.is_zero() {
                out = out.add(&v.scaled(c));
            }
        }
        out
    }

    fn field_is_zero(&self, v: &PolyVectorField) -> bool {
        v.is_zero()
    }

    fn field_at(&self, v: &PolyVectorField, point: &[Rational]) -> Result<Vec<Rational>, CartanError> {
        self.check_point(point)?;
        Ok(v.eval(point))
    }

    fn evaluate_at(&self, a: &PolyForm, point: &[Rational]) -> Result<BTreeMap<IndexSet, Rational>, CartanError> {
        self.check_point(point)?;
        Ok(self
            .coefficients(a)
            .into_iter()
            .map(|(s, p)| (s, p.eval(point)))
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    fn find_potential(&self, a: &PolyForm) -> Result<Potential<PolyTerm>, CartanError> {
        if a.degree() == 0 || !self.is_closed(a) {
            return Err(CartanError::NotClosed(a.degree()));
        }
        Ok(Potential::Exact(self.homotopy(a)))
    }

    fn de_rham(&self, degree: usize) -> DeRhamGroup<PolyTerm> {
        let representatives = if degree == 0 {
            vec![self.constant_one()]
        } else {
            Vec::new()
        };
        DeRhamGroup {
            degree,
            representatives,
        }
    }

    fn de_rham_coordinates(&self, a: &PolyForm) -> Vec<Rational> {
        if a.degree() == 0 {
            let at = self.evaluate_at(a, &self.base_point).expect("base point");
            vec![at.get(&IndexSet::EMPTY).cloned().unwrap_or_else(Rational::zero)]
        } else {
            Vec::new()
        }
    }

    fn stratum(&self, key: &PolyTerm) -> Exponent {
        let mut s = key.exp.clone();
        for i in key.dx.iter() {
            s[i] += 1;
        }
        s
    }

    fn stratum_basis(&self, s: &Exponent, degree: usize, bound: Option<usize>) -> Vec<PolyTerm> {
        let support: Vec<usize> = (0..self.dim).filter(|&i| s[i] > 0).collect();
        let mut out = Vec::new();
        for sub in subsets(support.len(), degree) {
            let dx = IndexSet::from_indices(sub.iter().map(|j| support[j]));
            let mut exp = s.clone();
            for i in dx.iter() {
                exp[i] -= 1;
            }
            if bound.is_some_and(|b| exponent_degree(&exp) > b) {
                continue;
            }
            out.push(PolyTerm { dx, exp });
        }
        out
    }

    fn coefficient_degree(&self, key: &PolyTerm) -> usize {
        exponent_degree(&key.exp)
    }

    fn constant_one(&self) -> PolyForm {
        self.function(&Poly::constant(self.dim, Rational::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::nondegeneracy_check;

    fn x(m: usize, i: usize) -> Poly {
        Poly::var(m, i)
    }

    #[test]
    fn d_of_x_dy() {
        let e = Euclidean::new(2);
        let a = e.term(&[1], &[1, 0], int(1));
        assert_eq!(e.d(&a), e.volume());
        let c = e.function(&Poly::constant(2, int(5)));
        assert!(e.d(&c).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let e = Euclidean::new(3);
        let dx = e.term(&[0], &[0, 0, 0], int(1));
        assert!(e.wedge(&dx, &dx).is_zero());
        let a = e.term(&[1], &[1, 0, 0], int(1));
        let dz = e.term(&[2], &[0, 0, 0], int(1));
        assert_eq!(e.wedge(&a, &dz), e.term(&[1, 2], &[1, 0, 0], int(1)));
        let (z, overflow) = e.wedge_checked(&e.volume(), &dz);
        assert!(overflow && z.is_zero());
    }

    #[test]
    fn contraction_examples() {
        let e = Euclidean::new(3);
        let dz = PolyVectorField::coordinate(3, 2);
        assert_eq!(
            e.contract(&dz, &e.volume()).unwrap(),
            e.term(&[0, 1], &[0, 0, 0], int(1))
        );
        let e2 = Euclidean::new(2);
        let dy = PolyVectorField::coordinate(2, 1);
        assert_eq!(e2.contract(&dy, &e2.volume()).unwrap(), e2.term(&[0], &[0, 0], int(-1)));
        assert_eq!(e2.contract(&dy, &e2.constant_one()), Err(CartanError::DegreeZero));
    }

    #[test]
    fn lie_derivative_examples() {
        let e = Euclidean::new(3);
        let rot = PolyVectorField::new(vec![x(3, 1).scaled(&int(-1)), x(3, 0), Poly::zero(3)]);
        assert!(e.lie_derivative(&rot, &e.volume()).is_zero());
        let e1 = Euclidean::new(1);
        let a = e1.term(&[0], &[1], int(1));
        let v = PolyVectorField::coordinate(1, 0);
        assert_eq!(e1.lie_derivative(&v, &a), e1.term(&[0], &[0], int(1)));
    }

    #[test]
    fn homotopy_examples() {
        let e = Euclidean::new(2);
        let k = e.homotopy(&e.volume());
        let expected = &e.term(&[1], &[1, 0], frac(1, 2)) - &e.term(&[0], &[0, 1], frac(1, 2));
        assert_eq!(k, expected);
        assert_eq!(e.d(&k), e.volume());
        let dy = e.term(&[1], &[0, 0], int(1));
        assert_eq!(e.homotopy(&dy), e.term(&[], &[0, 1], int(1)));
    }

    #[test]
    fn homotopy_recentred() {
        let e = Euclidean::with_base_point(vec![int(1), int(-2)]);
        let f = e.function(&(&(&x(2, 0) * &x(2, 1)) + &x(2, 1)));
        let kdf = e.homotopy(&e.d(&f));
        let at = e.evaluate_at(&f, &e.base_point()).unwrap();
        let fb = at.get(&IndexSet::EMPTY).cloned().unwrap_or_default();
        assert_eq!(kdf, &f - &e.function(&Poly::constant(2, fb)));
    }

    #[test]
    fn evaluation() {
        let e = Euclidean::new(2);
        let a = e.term(&[1], &[1, 0], int(1));
        assert!(e.evaluate_at(&a, &[int(0), int(0)]).unwrap().is_empty());
        let v = e.evaluate_at(&a, &[int(2), int(0)]).unwrap();
        assert_eq!(v.get(&IndexSet::singleton(1)), Some(&int(2)));
        assert!(e.evaluate_at(&a, &[int(1)]).is_err());
    }

    #[test]
    fn de_rham_is_trivial() {
        let e = Euclidean::new(3);
        let dims: Vec<usize> = (0..=3).map(|k| e.de_rham(k).dim()).collect();
        assert_eq!(dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn nondegeneracy_examples() {
        let e3 = Euclidean::new(3);
        let v = nondegeneracy_check(&e3, &e3.volume(), &[vec![int(1), int(2), int(3)]]).unwrap();
        assert!(v[0].nondegenerate);
        let e2 = Euclidean::new(2);
        let w = e2.term(&[0, 1], &[1, 0], int(1));
        let v = nondegeneracy_check(&e2, &w, &[vec![int(0), int(0)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(v[0].rank, 0);
        assert!(!v[0].nondegenerate);
        assert!(v[1].nondegenerate);
        let z: PolyForm = Form::zero(2);
        assert!(!nondegeneracy_check(&e2, &z, &[vec![int(1), int(1)]]).unwrap()[0].nondegenerate);
    }

    #[test]
    fn strata_partition_keys() {
        let e = Euclidean::new(3);
        let key = PolyTerm {
            dx: IndexSet::from_indices([0, 2]),
            exp: vec![2, 0, 1],
        };
        let s = e.stratum(&key);
        assert_eq!(s, vec![3, 0, 2]);
        let basis = e.stratum_basis(&s, 2, None);
        assert!(basis.contains(&key));
        assert_eq!(basis.len(), 1);
        assert_eq!(e.stratum_basis(&s, 1, None).len(), 2);
        assert_eq!(e.stratum_basis(&s, 0, Some(4)).len(), 0);
    }
}
