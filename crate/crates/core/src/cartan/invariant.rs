//! The invariant model: forms are CE cochains of a Lie algebra `𝔥`, `d` is
//! the CE differential and vector fields are elements of `𝔥`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::form::Form;
use super::{BackendKind, Cartan, CartanError, DeRhamGroup, Potential};
use crate::foundation::{IndexSet, Rational};
use crate::liealg::{CeComplex, LieAlgebra};

pub type AlgForm = Form<IndexSet>;

#[derive(Clone, Debug)]
pub struct Invariant {
    complex: CeComplex,
}

impl Invariant {
    pub fn new(algebra: &LieAlgebra) -> Self {
        Self {
            complex: algebra.complex(),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.complex.algebra()
    }

    pub fn complex(&self) -> &CeComplex {
        &self.complex
    }

    /// `c·ε^I` with zero-based indices.
    pub fn term(&self, indices: &[usize], c: Rational) -> AlgForm {
        let set = IndexSet::from_indices(indices.iter().copied());
        assert_eq!(set.len(), indices.len(), "repeated index");
        let s = crate::foundation::combinatorics::sort_sign(indices);
        let c = if s < 0 { -c } else { c };
        Form::from_terms(indices.len(), [(set, c)])
    }

    pub fn to_dense(&self, a: &AlgForm) -> Vec<Rational> {
        let basis = self.complex.basis(a.degree());
        let mut v = vec![Rational::zero(); basis.len()];
        for (set, c) in a.terms() {
            v[basis.index_of(*set).expect("index in range")] = c.clone();
        }
        v
    }

    pub fn from_dense(&self, degree: usize, v: &[Rational]) -> AlgForm {
        let basis = self.complex.basis(degree);
        Form::from_terms(
            degree,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (basis.get(i), c.clone())),
        )
    }
}

impl Cartan for Invariant {
    type Key = IndexSet;
    type Field = Vec<Rational>;
    type Stratum = ();

    fn kind(&self) -> BackendKind {
        BackendKind::Invariant
    }

    fn dim(&self) -> usize {
        self.complex.dim()
    }

    fn base_point(&self) -> Vec<Rational> {
        Vec::new()
    }

    fn key_degree(&self, key: &IndexSet) -> usize {
        key.len()
    }

    fn d(&self, a: &AlgForm) -> AlgForm {
        let k = a.degree();
        if k >= self.dim() {
            return Form::zero(k + 1);
        }
        let basis = self.complex.basis(k);
        let target = self.complex.basis(k + 1);
        let mut out = Form::zero(k + 1);
        for (set, c) in a.terms() {
            let col = basis.index_of(*set).expect("index in range");
            for (r, v) in self.complex.differential_column(k, col) {
                out.add_term(target.get(*r), &(c * v));
            }
        }
        out
    }

    fn wedge_checked(&self, a: &AlgForm, b: &AlgForm) -> (AlgForm, bool) {
        let deg = a.degree() + b.degree();
        if deg > self.dim() {
            return (Form::zero(self.dim()), true);
        }
        let mut out = Form::zero(deg);
        for (s, c) in a.terms() {
            for (t, e) in b.terms() {
                if !s.is_disjoint(*t) {
                    continue;
                }
                let v = if s.wedge_sign(*t) > 0 { c * e } else { -(c * e) };
                out.add_term(s.union(*t), &v);
            }
        }
        (out, false)
    }

    fn contract(&self, v: &Vec<Rational>, a: &AlgForm) -> Result<AlgForm, CartanError> {
        if a.degree() == 0 {
            return Err(CartanError::DegreeZero);
        }
        let mut out = Form::zero(a.degree() - 1);
        for (set, c) in a.terms() {
            for (pos, i) in set.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let x = c * &v[i];
                out.add_term(set.remove(i), &if pos % 2 == 0 { x.clone() } else { -x });
            }
        }
        Ok(out)
    }

    fn field_bracket(&self, v: &Vec<Rational>, w: &Vec<Rational>) -> Vec<Rational> {
        self.algebra().bracket(v, w)
    }

    fn field_zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim()]
    }

    fn field_combination(&self, terms: &[(Rational, &Vec<Rational>)]) -> Vec<Rational> {
        let mut out = self.field_zero();
        for (c, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }

    fn field_is_zero(&self, v: &Vec<Rational>) -> bool {
        v.iter().all(Zero::is_zero)
    }

    fn field_at(&self, v: &Vec<Rational>, _point: &[Rational]) -> Result<Vec<Rational>, CartanError> {
        Ok(v.clone())
    }

    fn evaluate_at(&self, a: &AlgForm, _point: &[Rational]) -> Result<BTreeMap<IndexSet, Rational>, CartanError> {
        Ok(a.terms().clone())
    }

    fn find_potential(&self, a: &AlgForm) -> Result<Potential<IndexSet>, CartanError> {
        let k = a.degree();
        if k == 0 || !self.is_closed(a) {
            return Err(CartanError::NotClosed(k));
        }
        if k > self.dim() {
            return Ok(Potential::Exact(Form::zero(k - 1)));
        }
        let dense = self.to_dense(a);
        match self.complex.factorization(k - 1).solve_particular(&dense) {
            Some(x) => Ok(Potential::Exact(self.from_dense(k - 1, &x))),
            None => Ok(Potential::Obstructed {
                class: self.complex.cohomology(k).project(&dense),
            }),
        }
    }

    fn de_rham(&self, degree: usize) -> DeRhamGroup<IndexSet> {
        let representatives = if degree > self.dim() {
            Vec::new()
        } else {
            self.complex
                .cohomology(degree)
                .representatives()
                .iter()
                .map(|r| self.from_dense(degree, r))
                .collect()
        };
        DeRhamGroup {
            degree,
            representatives,
        }
    }

    fn de_rham_coordinates(&self, a: &AlgForm) -> Vec<Rational> {
        if a.degree() > self.dim() {
            return Vec::new();
        }
        self.complex.cohomology(a.degree()).project(&self.to_dense(a))
    }

    fn stratum(&self, _key: &IndexSet) {}

    fn stratum_basis(&self, _s: &(), degree: usize, _bound: Option<usize>) -> Vec<IndexSet> {
        if degree > self.dim() {
            return Vec::new();
        }
        self.complex.basis(degree).sets().to_vec()
    }

    fn coefficient_degree(&self, _key: &IndexSet) -> usize {
        0
    }

    fn constant_one(&self) -> AlgForm {
        Form::from_terms(0, [(IndexSet::EMPTY, Rational::from_integer(1.into()))])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::int;

    #[test]
    fn d_matches_ce_differential() {
        let h = Invariant::new(&LieAlgebra::so3());
        assert_eq!(h.d(&h.term(&[0], int(1))), h.term(&[1, 2], int(-1)));
    }

    #[test]
    fn wedge_anticommutes() {
        let h = Invariant::new(&LieAlgebra::so3());
        let a = h.term(&[0], int(1));
        let b = h.term(&[1], int(1));
        assert_eq!(h.wedge(&a, &b), -&h.wedge(&b, &a));
    }

    #[test]
    fn contraction_of_cartan_form() {
        let g = LieAlgebra::so3();
        let h = Invariant::new(&g);
        let omega = h.from_dense(3, &g.cartan_three_cocycle().coeffs);
        let e1 = g.basis_vector(0);
        assert_eq!(h.contract(&e1, &omega).unwrap(), h.term(&[1, 2], int(-2)));
    }

    #[test]
    fn cartan_form_has_no_potential() {
        let g = LieAlgebra::so3();
        let h = Invariant::new(&g);
        let omega = h.from_dense(3, &g.cartan_three_cocycle().coeffs);
        match h.find_potential(&omega).unwrap() {
            Potential::Obstructed { class } => assert!(class.iter().any(|c| !c.is_zero())),
            Potential::Exact(_) => panic!("expected obstruction"),
        }
        let exact = h.term(&[1, 2], int(3));
        match h.find_potential(&exact).unwrap() {
            Potential::Exact(b) => assert_eq!(h.d(&b), exact),
            Potential::Obstructed { .. } => panic!("expected potential"),
        }
    }

    #[test]
    fn de_rham_dims() {
        let so3 = Invariant::new(&LieAlgebra::so3());
        let dims: Vec<usize> = (0..=3).map(|k| so3.de_rham(k).dim()).collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
        let ab = Invariant::new(&LieAlgebra::abelian(2));
        let dims: Vec<usize> = (0..=2).map(|k| ab.de_rham(k).dim()).collect();
        assert_eq!(dims, vec![1, 2, 1]);
    }

    #[test]
    fn evaluation_returns_coefficients() {
        let h = Invariant::new(&LieAlgebra::so3());
        let a = h.term(&[0, 2], int(4));
        let t = h.evaluate_at(&a, &[]).unwrap();
        assert_eq!(t.get(&IndexSet::from_indices([0, 2])), Some(&int(4)));
    }
}
