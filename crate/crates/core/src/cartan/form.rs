//! Sparse homogeneous forms over an arbitrary basis key.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::Zero;

use super::poly::add_coefficient;
use crate::foundation::rational::Rational;

/// A homogeneous form of fixed degree, stored as a sparse combination of
/// basis keys. The key type is chosen by the backend.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<K: Ord> {
    degree: usize,
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Form<K> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Rational)>>(degree: usize, it: I) -> Self {
        let mut f = Self::zero(degree);
        for (k, c) in it {
            f.add_term(k, &c);
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<K, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<K, Rational> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &K) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, k: K, c: &Rational) {
        add_coefficient(&mut self.terms, k, c);
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        self.align_degree(other);
        for (k, v) in &other.terms {
            add_coefficient(&mut self.terms, k.clone(), &(v * c));
        }
    }

    fn align_degree(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        } else {
            assert_eq!(self.degree, other.degree, "adding forms of different degree");
        }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Form<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]{{", self.degree)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k:?}: {c}")?;
        }
        write!(f, "}}")
    }
}

impl<K: Ord + Clone> AddAssign<&Form<K>> for Form<K> {
    fn add_assign(&mut self, rhs: &Form<K>) {
        self.align_degree(rhs);
        for (k, v) in &rhs.terms {
            add_coefficient(&mut self.terms, k.clone(), v);
        }
    }
}

impl<K: Ord + Clone> SubAssign<&Form<K>> for Form<K> {
    fn sub_assign(&mut self, rhs: &Form<K>) {
        self.align_degree(rhs);
        for (k, v) in &rhs.terms {
            add_coefficient(&mut self.terms, k.clone(), &-v);
        }
    }
}

impl<K: Ord + Clone> Add for &Form<K> {
    type Output = Form<K>;
    fn add(self, rhs: &Form<K>) -> Form<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &Form<K> {
    type Output = Form<K>;
    fn sub(self, rhs: &Form<K>) -> Form<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for &Form<K> {
    type Output = Form<K>;
    fn neg(self) -> Form<K> {
        Form {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rational::int;

    #[test]
    fn cancellation_drops_terms() {
        let a: Form<u8> = Form::from_terms(1, [(0, int(2)), (1, int(1))]);
        let b: Form<u8> = Form::from_terms(1, [(0, int(2))]);
        let c = &a - &b;
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&1), int(1));
        assert!((&c - &c).is_zero());
    }

    #[test]
    fn zero_adopts_degree() {
        let mut z: Form<u8> = Form::zero(0);
        z += &Form::from_terms(2, [(3, int(1))]);
        assert_eq!(z.degree(), 2);
    }
}
