//! The bicomplex `Λ^• 𝔤* ⊗ Ω^•` and its total differential
//! `D = δ⊗id + (−1)^n (−1)^{i+j} id⊗d` on the `(i, j)` component.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cartan::{Cartan, Form};
use crate::foundation::{IndexSet, Rational};
use crate::liealg::CeComplex;

/// Element of `Λ^i 𝔤* ⊗ Ω^j`, stored as `Σ_J ε^J ⊗ α_J`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bigraded<K: Ord> {
    i: usize,
    j: usize,
    coeffs: BTreeMap<IndexSet, Form<K>>,
}

impl<K: Ord + Clone> Bigraded<K> {
    pub fn zero(i: usize, j: usize) -> Self {
        Self {
            i,
            j,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn coeffs(&self) -> &BTreeMap<IndexSet, Form<K>> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The form `α_J` (zero when absent).
    pub fn get(&self, set: IndexSet) -> Form<K> {
        self.coeffs.get(&set).cloned().unwrap_or_else(|| Form::zero(self.j))
    }

    /// `self += ε^J ⊗ a`.
    pub fn add(&mut self, set: IndexSet, a: &Form<K>) {
        assert_eq!(set.len(), self.i, "Lie degree mismatch");
        if a.is_zero() {
            return;
        }
        assert_eq!(a.degree(), self.j, "form degree mismatch");
        let entry = self.coeffs.entry(set).or_insert_with(|| Form::zero(a.degree()));
        *entry += a;
        if entry.is_zero() {
            self.coeffs.remove(&set);
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        assert_eq!(self.bidegree(), other.bidegree(), "bidegree mismatch");
        for (s, a) in &other.coeffs {
            self.add(*s, &a.scaled(c));
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.i, self.j);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::from_integer(1.into()));
        out
    }

    /// Value on `(v_1, …, v_i)`: `Σ_J det[v_a^{J_b}] α_J`.
    pub fn evaluate(&self, vectors: &[Vec<Rational>]) -> Form<K> {
        assert_eq!(vectors.len(), self.i, "arity");
        let mut out = Form::zero(self.j);
        for (set, a) in &self.coeffs {
            let t: BTreeMap<IndexSet, Rational> = [(*set, Rational::from_integer(1.into()))].into_iter().collect();
            let c = crate::cartan::alternating_value(&t, vectors);
            if !c.is_zero() {
                out.add_scaled(a, &c);
            }
        }
        out
    }

    /// All stored coefficients grouped by form key: `key ↦ (J ↦ c)`.
    pub fn by_form_key(&self) -> BTreeMap<K, BTreeMap<IndexSet, Rational>> {
        let mut out: BTreeMap<K, BTreeMap<IndexSet, Rational>> = BTreeMap::new();
        for (set, a) in &self.coeffs {
            for (k, c) in a.terms() {
                out.entry(k.clone()).or_default().insert(*set, c.clone());
            }
        }
        out
    }
}

/// Element of total degree `degree`, as components indexed by Lie degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Total<K: Ord> {
    degree: usize,
    comps: BTreeMap<usize, Bigraded<K>>,
}

impl<K: Ord + Clone> Total<K> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<usize, Bigraded<K>> {
        &self.comps
    }

    /// Component of Lie degree `i` (zero when absent).
    pub fn component(&self, i: usize) -> Bigraded<K> {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Bigraded::zero(i, self.degree.saturating_sub(i)))
    }

    pub fn set_component(&mut self, b: Bigraded<K>) {
        assert_eq!(b.i + b.j, self.degree, "total degree mismatch");
        if b.is_zero() {
            self.comps.remove(&b.i);
        } else {
            self.comps.insert(b.i, b);
        }
    }

    pub fn add_component(&mut self, b: &Bigraded<K>, c: &Rational) {
        let mut cur = self.component(b.i);
        cur.add_scaled(b, c);
        self.set_component(cur);
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(Bigraded::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "total degree mismatch");
        let mut out = self.clone();
        for b in other.comps.values() {
            out.add_component(b, &-Rational::from_integer(1.into()));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "total degree mismatch");
        let mut out = self.clone();
        for b in other.comps.values() {
            out.add_component(b, &Rational::from_integer(1.into()));
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        for b in self.comps.values() {
            out.add_component(b, c);
        }
        out
    }
}

/// `δ ⊗ id`.
pub fn delta_tensor_id<K: Ord + Clone>(complex: &CeComplex, b: &Bigraded<K>) -> Bigraded<K> {
    let (i, j) = b.bidegree();
    let mut out = Bigraded::zero(i + 1, j);
    if i >= complex.dim() {
        return out;
    }
    let basis = complex.basis(i);
    let target = complex.basis(i + 1);
    for (set, a) in b.coeffs() {
        let col = basis.index_of(*set).expect("index in range");
        for (r, v) in complex.differential_column(i, col) {
            out.add(target.get(*r), &a.scaled(v));
        }
    }
    out
}

/// `id ⊗ d`.
pub fn id_tensor_d<C: Cartan>(backend: &C, b: &Bigraded<C::Key>) -> Bigraded<C::Key> {
    let (i, j) = b.bidegree();
    let mut out = Bigraded::zero(i, j + 1);
    for (set, a) in b.coeffs() {
        out.add(*set, &backend.d(a));
    }
    out
}

/// Sign of the `id ⊗ d` part on bidegree `(i, j)`.
pub fn d_sign(n: usize, i: usize, j: usize) -> Rational {
    crate::foundation::rational::sign_power((n + i + j) as i64)
}

pub fn total_differential<C: Cartan>(backend: &C, complex: &CeComplex, n: usize, x: &Total<C::Key>) -> Total<C::Key> {
    let mut out = Total::zero(x.degree() + 1);
    let one = Rational::from_integer(1.into());
    for b in x.components().values() {
        let (i, j) = b.bidegree();
        let db = delta_tensor_id(complex, b);
        if !db.is_zero() {
            out.add_component(&db, &one);
        }
        let dd = id_tensor_d(backend, b);
        if !dd.is_zero() {
            out.add_component(&dd, &d_sign(n, i, j));
        }
    }
    out
}
