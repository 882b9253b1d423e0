//! The Lie `n`-algebra of observables of a pre-`n`-plectic form.
//!
//! Degree 0 holds pairs `(v, α)` with `dα = −ι_v ω`; degree `i < 0` holds
//! forms of degree `n − 1 + i`. The brackets are
//!
//! * `l_1(v, α) = 0`, `l_1(α) = dα` (landing in `(0, dα)` from degree −1),
//! * `l_2((v,α),(w,β)) = ([v,w], ι_w ι_v ω)`,
//! * `l_k = −(−1)^{k(k+1)/2} ι_{v_k} ⋯ ι_{v_1} ω` for `3 ≤ k ≤ n+1`,
//!
//! and every `l_k` with `k ≥ 2` vanishes as soon as one argument has nonzero
//! degree.

use std::fmt::Debug;

use thiserror::Error;

use crate::cartan::{Cartan, CartanError, Form};
use crate::foundation::combinatorics::{permutation_sign, rearrangement_sign, unshuffles};
use crate::foundation::rational::sign_power;
use crate::foundation::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObservableError<K: Ord + Debug> {
    #[error("pairing condition dα + ι_v ω = 0 fails")]
    Pairing { residual: Form<K> },
    #[error("ω has degree {got}, expected {expected}")]
    OmegaDegree { expected: usize, got: usize },
    #[error("ω is not closed")]
    OmegaNotClosed,
    #[error("a form of degree {got} cannot sit in observable degree {degree}")]
    Degree { degree: i64, got: usize },
    #[error("l_{0} expects degree-0 arguments")]
    NotPairs(usize),
    #[error("l_{k} is only defined for 1 ≤ k ≤ {max}")]
    Arity { k: usize, max: usize },
    #[error("identities of arity {0} hold trivially (no bracket that long)")]
    TrivialArity(usize),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable<F, K: Ord> {
    Pair {
        field: F,
        form: Form<K>,
    },
    /// Element of negative degree `degree`.
    Form {
        degree: i64,
        form: Form<K>,
    },
}

impl<F, K: Ord + Clone> Observable<F, K> {
    pub fn degree(&self) -> i64 {
        match self {
            Observable::Pair { .. } => 0,
            Observable::Form { degree, .. } => *degree,
        }
    }

    /// The form part (the Hamiltonian form for a pair).
    pub fn form(&self) -> &Form<K> {
        match self {
            Observable::Pair { form, .. } | Observable::Form { form, .. } => form,
        }
    }

    pub fn field(&self) -> Option<&F> {
        match self {
            Observable::Pair { field, .. } => Some(field),
            Observable::Form { .. } => None,
        }
    }
}

pub type Obs<C> = Observable<<C as Cartan>::Field, <C as Cartan>::Key>;
type Err<C> = ObservableError<<C as Cartan>::Key>;

/// A pre-`n`-plectic structure together with its brackets.
#[derive(Debug)]
pub struct BracketTable<'a, C: Cartan> {
    backend: &'a C,
    omega: Form<C::Key>,
    n: usize,
}

impl<'a, C: Cartan> BracketTable<'a, C> {
    pub fn new(backend: &'a C, omega: Form<C::Key>, n: usize) -> Result<Self, Err<C>> {
        if n == 0 {
            return Err(ObservableError::OmegaDegree {
                expected: 2,
                got: omega.degree(),
            });
        }
        if omega.degree() != n + 1 && !omega.is_zero() {
            return Err(ObservableError::OmegaDegree {
                expected: n + 1,
                got: omega.degree(),
            });
        }
        if !backend.is_closed(&omega) {
            return Err(ObservableError::OmegaNotClosed);
        }
        Ok(Self { backend, omega, n })
    }

    pub fn backend(&self) -> &'a C {
        self.backend
    }

    pub fn omega(&self) -> &Form<C::Key> {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dα + ι_v ω`.
    pub fn pairing_residual(&self, v: &C::Field, alpha: &Form<C::Key>) -> Form<C::Key> {
        let mut r = self.backend.d(alpha);
        if !self.omega.is_zero() {
            r += &self.backend.contract(v, &self.omega).expect("ω has positive degree");
        }
        r
    }

    pub fn make_observable(&self, v: C::Field, alpha: Form<C::Key>) -> Result<Obs<C>, Err<C>> {
        if alpha.degree() + 1 != self.n && !alpha.is_zero() {
            return Err(ObservableError::Degree {
                degree: 0,
                got: alpha.degree(),
            });
        }
        let residual = self.pairing_residual(&v, &alpha);
        if !residual.is_zero() {
            return Err(ObservableError::Pairing { residual });
        }
        Ok(Observable::Pair { field: v, form: alpha })
    }

    /// Element of negative degree `degree ∈ [−n+1, −1]`.
    pub fn form_element(&self, degree: i64, form: Form<C::Key>) -> Result<Obs<C>, Err<C>> {
        let expected = self.n as i64 - 1 + degree;
        if degree >= 0 || expected < 0 || (form.degree() as i64 != expected && !form.is_zero()) {
            return Err(ObservableError::Degree {
                degree,
                got: form.degree(),
            });
        }
        let form = if form.is_zero() {
            Form::zero(expected as usize)
        } else {
            form
        };
        Ok(Observable::Form { degree, form })
    }

    /// `l_1`; `None` stands for zero.
    pub fn l1(&self, x: &Obs<C>) -> Option<Obs<C>> {
        match x {
            Observable::Pair { .. } => None,
            Observable::Form { degree, form } => {
                let df = self.backend.d(form);
                if *degree == -1 {
                    Some(Observable::Pair {
                        field: self.backend.field_zero(),
                        form: df,
                    })
                } else {
                    Some(Observable::Form {
                        degree: degree + 1,
                        form: df,
                    })
                }
            }
        }
    }

    /// `l_2` on two degree-0 elements.
    pub fn l2(&self, x: &Obs<C>, y: &Obs<C>) -> Result<Obs<C>, Err<C>> {
        match (x, y) {
            (Observable::Pair { field: v, .. }, Observable::Pair { field: w, .. }) => {
                let form = if self.omega.is_zero() {
                    Form::zero(self.n - 1)
                } else {
                    self.backend.contract_all(&[v, w], &self.omega)?
                };
                Ok(Observable::Pair {
                    field: self.backend.field_bracket(v, w),
                    form,
                })
            }
            _ => Err(ObservableError::NotPairs(2)),
        }
    }

    /// `l_k` for `3 ≤ k ≤ n+1` on degree-0 elements; the result is a form
    /// of degree `n + 1 − k`.
    pub fn lk_form(&self, args: &[&Obs<C>]) -> Result<Form<C::Key>, Err<C>> {
        let k = args.len();
        if k < 3 || k > self.n + 1 {
            return Err(ObservableError::Arity { k, max: self.n + 1 });
        }
        let mut fields = Vec::with_capacity(k);
        for a in args {
            match a.field() {
                Some(v) => fields.push(v),
                None => return Err(ObservableError::NotPairs(k)),
            }
        }
        if self.omega.is_zero() {
            return Ok(Form::zero(self.n + 1 - k));
        }
        let c = self.backend.contract_all(&fields, &self.omega)?;
        let s = -sign_power((k * (k + 1) / 2) as i64);
        Ok(c.scaled(&s))
    }

    /// Any bracket `l_k`, with grounded zeros; `None` stands for zero.
    pub fn bracket(&self, args: &[&Obs<C>]) -> Result<Option<Obs<C>>, Err<C>> {
        let k = args.len();
        if k == 0 || k > self.n + 1 {
            return Err(ObservableError::Arity { k, max: self.n + 1 });
        }
        if k == 1 {
            return Ok(self.l1(args[0]));
        }
        if args.iter().any(|a| a.degree() != 0) {
            return Ok(None);
        }
        if k == 2 {
            return self.l2(args[0], args[1]).map(Some);
        }
        let form = self.lk_form(args)?;
        Ok(Some(Observable::Form {
            degree: 2 - k as i64,
            form,
        }))
    }

    /// `acc += sign·x`, with `None` standing for zero.
    pub fn add_into(&self, acc: &mut Option<Obs<C>>, x: Obs<C>, sign: &Rational) {
        let scaled = match x {
            Observable::Pair { field, form } => Observable::Pair {
                field: self.backend.field_combination(&[(sign.clone(), &field)]),
                form: form.scaled(sign),
            },
            Observable::Form { degree, form } => Observable::Form {
                degree,
                form: form.scaled(sign),
            },
        };
        match (acc.as_mut(), scaled) {
            (None, s) => *acc = Some(s),
            (Some(Observable::Pair { field, form }), Observable::Pair { field: f2, form: a2 }) => {
                let one = Rational::from_integer(1.into());
                *field = self.backend.field_combination(&[(one.clone(), &*field), (one, &f2)]);
                *form += &a2;
            }
            (Some(Observable::Form { degree, form }), Observable::Form { degree: d2, form: a2 }) => {
                assert_eq!(*degree, d2, "summands of different degree");
                *form += &a2;
            }
            _ => panic!("summands of different degree"),
        }
    }

    pub fn is_zero(&self, x: &Option<Obs<C>>) -> bool {
        match x {
            None => true,
            Some(Observable::Pair { field, form }) => self.backend.field_is_zero(field) && form.is_zero(),
            Some(Observable::Form { form, .. }) => form.is_zero(),
        }
    }

    /// Left side of the `L∞` relation of arity `m = xs.len()`:
    /// `Σ_{i+j=m+1} (−1)^{i(j+1)} Σ_σ sgn(σ) ε(σ) l_j(l_i(x_σ(1..i)), x_σ(i+1..m))`
    /// over `(i, m−i)`-unshuffles `σ`. `None` stands for zero.
    pub fn linfty_identity_residual(&self, xs: &[Obs<C>]) -> Result<Option<Obs<C>>, Err<C>> {
        let m = xs.len();
        if m == 0 || m > self.n + 2 {
            return Err(ObservableError::TrivialArity(m));
        }
        let degrees: Vec<i64> = xs.iter().map(|x| x.degree()).collect();
        let mut acc: Option<Obs<C>> = None;
        for i in 1..=m {
            let j = m + 1 - i;
            if i > self.n + 1 || j > self.n + 1 {
                continue;
            }
            let outer = sign_power((i * (j + 1)) as i64);
            for images in unshuffles(i, m - i) {
                let s = permutation_sign(&images) as i64 * rearrangement_sign(&images, &degrees) as i64;
                let inner_args: Vec<&Obs<C>> = images[..i].iter().map(|&a| &xs[a]).collect();
                let Some(inner) = self.bracket(&inner_args)? else {
                    continue;
                };
                let mut outer_args: Vec<&Obs<C>> = vec![&inner];
                outer_args.extend(images[i..].iter().map(|&a| &xs[a]));
                if let Some(val) = self.bracket(&outer_args)? {
                    let c = if s < 0 { -outer.clone() } else { outer.clone() };
                    self.add_into(&mut acc, val, &c);
                }
            }
        }
        if self.is_zero(&acc) {
            Ok(None)
        } else {
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{Euclidean, Poly, PolyVectorField};
    use crate::foundation::int;

    fn plane() -> Euclidean {
        Euclidean::new(2)
    }

    #[test]
    fn make_observable_examples() {
        let e = plane();
        let t = BracketTable::new(&e, e.volume(), 1).unwrap();
        let dx = PolyVectorField::coordinate(2, 0);
        let ok = t.make_observable(dx.clone(), e.term(&[], &[0, 1], int(-1)));
        assert!(ok.is_ok());
        match t.make_observable(dx, e.term(&[], &[0, 1], int(1))) {
            Err(ObservableError::Pairing { residual }) => {
                assert_eq!(residual, e.term(&[1], &[0, 0], int(2)))
            }
            other => panic!("{other:?}"),
        }
        let e3 = Euclidean::new(3);
        let t3 = BracketTable::new(&e3, e3.volume(), 2).unwrap();
        let closed = e3.term(&[2], &[0, 0, 0], int(1));
        assert!(t3.make_observable(e3.field_zero(), closed).is_ok());
    }

    #[test]
    fn l2_on_the_plane() {
        let e = plane();
        let t = BracketTable::new(&e, e.volume(), 1).unwrap();
        let a = t
            .make_observable(PolyVectorField::coordinate(2, 0), e.term(&[], &[0, 1], int(-1)))
            .unwrap();
        let b = t
            .make_observable(PolyVectorField::coordinate(2, 1), e.term(&[], &[1, 0], int(1)))
            .unwrap();
        let c = t.l2(&a, &b).unwrap();
        assert!(c.field().unwrap().is_zero());
        assert_eq!(c.form(), &e.constant_one());
        let aa = t.l2(&a, &a).unwrap();
        assert!(t.is_zero(&Some(aa)));
    }

    #[test]
    fn l1_examples() {
        let e3 = Euclidean::new(3);
        let t = BracketTable::new(&e3, e3.volume(), 2).unwrap();
        let f = t.form_element(-1, e3.term(&[], &[1, 0, 0], int(1))).unwrap();
        match t.l1(&f).unwrap() {
            Observable::Pair { field, form } => {
                assert!(field.is_zero());
                assert_eq!(form, e3.term(&[0], &[0, 0, 0], int(1)));
            }
            other => panic!("{other:?}"),
        }
        let p = t.make_observable(e3.field_zero(), Form::zero(1)).unwrap();
        assert!(t.l1(&p).is_none());
    }

    #[test]
    fn l3_of_coordinate_fields() {
        let e3 = Euclidean::new(3);
        let t = BracketTable::new(&e3, e3.volume(), 2).unwrap();
        let pairs: Vec<_> = (0..3)
            .map(|i| {
                let v = PolyVectorField::coordinate(3, i);
                // α with dα = −ι_v vol: take −K(ι_v vol)
                let iv = e3.contract(&v, &e3.volume()).unwrap();
                let alpha = -&e3.homotopy(&iv);
                t.make_observable(v, alpha).unwrap()
            })
            .collect();
        let l3 = t.lk_form(&[&pairs[0], &pairs[1], &pairs[2]]).unwrap();
        assert_eq!(l3, e3.constant_one().scaled(&int(-1)));
        assert!(t.lk_form(&[&pairs[0], &pairs[0], &pairs[2]]).unwrap().is_zero());
        assert!(matches!(
            t.lk_form(&[&pairs[0], &pairs[1], &pairs[2], &pairs[0]]),
            Err(ObservableError::Arity { .. })
        ));
    }

    #[test]
    fn identities_on_rotations() {
        let e3 = Euclidean::new(3);
        let t = BracketTable::new(&e3, e3.volume(), 2).unwrap();
        let x = |i| Poly::var(3, i);
        let z = Poly::zero(3);
        let fields = [
            PolyVectorField::new(vec![z.clone(), x(2), -&x(1)]),
            PolyVectorField::new(vec![-&x(2), z.clone(), x(0)]),
            PolyVectorField::new(vec![x(1), -&x(0), z.clone()]),
        ];
        let pairs: Vec<_> = fields
            .iter()
            .map(|v| {
                let iv = e3.contract(v, &e3.volume()).unwrap();
                t.make_observable(v.clone(), -&e3.homotopy(&iv)).unwrap()
            })
            .collect();
        let l2 = t.l2(&pairs[0], &pairs[1]).unwrap();
        assert_eq!(l2.field().unwrap(), &fields[2]);
        assert!(t
            .make_observable(l2.field().unwrap().clone(), l2.form().clone())
            .is_ok());
        assert!(t.linfty_identity_residual(&pairs).unwrap().is_none());
        let f = t.form_element(-1, e3.term(&[], &[1, 1, 0], int(1))).unwrap();
        assert!(t
            .linfty_identity_residual(&[pairs[0].clone(), f.clone()])
            .unwrap()
            .is_none());
        assert!(t.linfty_identity_residual(&[f]).unwrap().is_none());
    }
}
