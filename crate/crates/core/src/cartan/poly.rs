//! Multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::foundation::rational::{int, Rational};

/// Exponent vector of a monomial `x^α`.
pub type Exponent = Vec<u32>;

/// Add `c` to `map[key]`, dropping the entry when it cancels.
pub(crate) fn add_coefficient<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: &Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn exponent_degree(e: &[u32]) -> usize {
    e.iter().map(|&a| a as usize).sum()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: &Rational) {
        if c.is_zero() {
            return;
        }
        add_coefficient(&mut self.terms, e, c);
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximal total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| exponent_degree(e)).max()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiply by the monomial `c·x^e`.
    pub fn times_monomial(&self, e: &[u32], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.iter().zip(e).map(|(x, y)| x + y).collect(), v * c))
                .collect(),
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, &(c * int(e[i] as i64)));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(e) {
                if a > 0 {
                    t *= num_traits::pow(x.clone(), a as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// `x ↦ f(x + offset)`.
    pub fn shift(&self, offset: &[Rational]) -> Self {
        assert_eq!(offset.len(), self.nvars, "offset dimension");
        if offset.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let linear: Vec<Poly> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, offset[i].clone()))
            .collect();
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(self.nvars, c.clone());
            for (i, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    t = &t * &linear[i];
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| {
                        if a == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, a)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}·{}", c, mono.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &rhs.terms {
            for (a, v) in &self.terms {
                #[allow(clippy::suspicious_arithmetic_impl)]
                let m: Exponent = a.iter().zip(e).map(|(x, y)| x + y).collect();
                out.add_term(m, &(v * c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rational::frac;

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) - &(&y * &y);
        let q = &(&x + &y) * &(&x - &y);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(Poly::zero(2).total_degree(), None);
    }

    #[test]
    fn derivative_and_eval() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&(&x * &x) * &y) + &Poly::constant(2, int(3));
        assert_eq!(p.derivative(0), (&x * &y).scaled(&int(2)));
        assert_eq!(p.eval(&[int(2), frac(1, 2)]), int(5));
    }

    #[test]
    fn shift_substitutes() {
        let x = Poly::var(1, 0);
        let p = &x * &x;
        let s = p.shift(&[int(1)]);
        // (x+1)^2
        assert_eq!(s.coefficient(&[2]), int(1));
        assert_eq!(s.coefficient(&[1]), int(2));
        assert_eq!(s.coefficient(&[0]), int(1));
        assert_eq!(s.shift(&[int(-1)]), p);
    }
}
