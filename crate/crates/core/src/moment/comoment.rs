//! Homotopy co-moment maps, their potentials and the morphism check.

use num_traits::Zero;

use super::bicomplex::{Bigraded, Total};
use super::{MomentError, Problem};
use crate::cartan::{Cartan, Form};
use crate::foundation::{IndexSet, Rational};
use crate::observables::Observable;

/// `f_1(X) = (ζX, α(X))` and `f_k` for `2 ≤ k ≤ n`. `components[k-1]`
/// holds the form part of `f_k` in `Λ^k 𝔤* ⊗ Ω^{n−k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComomentMap<F, K: Ord> {
    n: usize,
    fields: Vec<F>,
    components: Vec<Bigraded<K>>,
}

/// First failure found by [`ComomentMap::verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum MorphismDefect<F, K: Ord> {
    /// The vector part of `f_1(e_i)` is not `ζ(e_i)`.
    VectorPart { i: usize },
    /// `f_1(e_i)` violates `dα = −ι_v ω`.
    Pairing { i: usize, residual: Form<K> },
    /// `δf_k + l_1 f_{k+1} + f_1^* l_{k+1}` is nonzero on `e_J`.
    Relation {
        k: usize,
        set: IndexSet,
        residual: Observable<F, K>,
    },
    /// Wrong number or shape of components.
    Shape(String),
}

impl<F: Clone, K: Ord + Clone> ComomentMap<F, K> {
    pub fn from_parts(n: usize, fields: Vec<F>, components: Vec<Bigraded<K>>) -> Self {
        Self { n, fields, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> &[F] {
        &self.fields
    }

    /// Form part of `f_k`, `1 ≤ k ≤ n`.
    pub fn component(&self, k: usize) -> &Bigraded<K> {
        &self.components[k - 1]
    }

    pub fn components(&self) -> &[Bigraded<K>] {
        &self.components
    }

    /// `f_1(e_i)` as `(vector field, form)`.
    pub fn f1(&self, i: usize) -> (&F, Form<K>) {
        (&self.fields[i], self.components[0].get(IndexSet::singleton(i)))
    }

    /// The potential `p` with `p_k = −f_k` (form part of `f_1` for `k = 1`).
    pub fn to_potential(&self) -> Total<K> {
        let mut p = Total::zero(self.n);
        let minus = -Rational::from_integer(1.into());
        for c in &self.components {
            p.add_component(c, &minus);
        }
        p
    }
}

impl<F: Clone + PartialEq, K: Ord + Clone + std::fmt::Debug> ComomentMap<F, K> {
    /// Co-moment map of a potential `p` with `D p = g`.
    pub fn from_potential<C>(problem: &Problem<C>, p: &Total<K>) -> Result<Self, MomentError>
    where
        C: Cartan<Field = F, Key = K>,
    {
        let g = problem.build_g()?;
        if p.degree() != problem.n() || problem.differential(p) != g {
            return Err(MomentError::PotentialMismatch);
        }
        if p.components().contains_key(&0) {
            return Err(MomentError::PotentialMismatch);
        }
        let minus = -Rational::from_integer(1.into());
        let n = problem.n();
        let components = (1..=n).map(|k| p.component(k).scaled(&minus)).collect();
        Ok(Self {
            n,
            fields: problem.fields().to_vec(),
            components,
        })
    }

    /// Checks that the vector parts of `f_1` equal `ζ`, that every `f_1(e_i)`
    /// is an observable, and that `δf_k + l_1 f_{k+1} = −f_1^* l_{k+1}` on
    /// every basis tuple for `1 ≤ k ≤ n` (with `f_{n+1} = 0`). The brackets
    /// are evaluated through the observable algebra, independently of `D`.
    pub fn verify<C>(&self, problem: &Problem<C>) -> Result<(), MorphismDefect<F, K>>
    where
        C: Cartan<Field = F, Key = K>,
    {
        let n = problem.n();
        let dim = problem.lie_dim();
        if self.n != n || self.components.len() != n || self.fields.len() != dim {
            return Err(MorphismDefect::Shape(format!(
                "expected n = {n} components over {dim} generators"
            )));
        }
        for (k, c) in self.components.iter().enumerate() {
            if c.bidegree() != (k + 1, n - k - 1) && !c.is_zero() {
                return Err(MorphismDefect::Shape(format!(
                    "f_{} has bidegree {:?}",
                    k + 1,
                    c.bidegree()
                )));
            }
        }
        let table = problem.table();
        for i in 0..dim {
            if self.fields[i] != problem.fields()[i] {
                return Err(MorphismDefect::VectorPart { i });
            }
        }
        let f1: Vec<Observable<F, K>> = (0..dim)
            .map(|i| {
                let (v, a) = self.f1(i);
                let a = if a.is_zero() { Form::zero(n - 1) } else { a };
                Observable::Pair {
                    field: v.clone(),
                    form: a,
                }
            })
            .collect();
        for (i, obs) in f1.iter().enumerate() {
            let residual = table.pairing_residual(obs.field().expect("pair"), obs.form());
            if !residual.is_zero() {
                return Err(MorphismDefect::Pairing { i, residual });
            }
        }
        let one = Rational::from_integer(1.into());
        for k in 1..=n.min(dim.saturating_sub(1)) {
            for &set in problem.complex().basis(k + 1).sets() {
                let idx = set.to_vec();
                let mut acc: Option<Observable<F, K>> = None;
                // δf_k(e_J) = Σ_{a<b} (−1)^{a+b} f_k([e_a, e_b], e_rest)
                for a in 0..idx.len() {
                    for b in a + 1..idx.len() {
                        let br = problem.algebra().bracket_basis(idx[a], idx[b]);
                        if br.iter().all(Zero::is_zero) {
                            continue;
                        }
                        let sign = if (a + b) % 2 == 0 { one.clone() } else { -one.clone() };
                        let mut args = vec![br.clone()];
                        for (c, &x) in idx.iter().enumerate() {
                            if c != a && c != b {
                                args.push(problem.algebra().basis_vector(x));
                            }
                        }
                        let form = self.components[k - 1].evaluate(&args);
                        let val = if k == 1 {
                            Observable::Pair {
                                field: problem.zeta(&br),
                                form,
                            }
                        } else {
                            Observable::Form {
                                degree: 1 - k as i64,
                                form,
                            }
                        };
                        table.add_into(&mut acc, val, &sign);
                    }
                }
                if k < n {
                    let fk1 = self.components[k].get(set);
                    let obs = Observable::Form {
                        degree: -(k as i64),
                        form: if fk1.is_zero() { Form::zero(n - k - 1) } else { fk1 },
                    };
                    if let Some(v) = table.l1(&obs) {
                        table.add_into(&mut acc, v, &one);
                    }
                }
                let args: Vec<&Observable<F, K>> = idx.iter().map(|&x| &f1[x]).collect();
                if let Some(v) = table.bracket(&args).expect("arity within range") {
                    table.add_into(&mut acc, v, &one);
                }
                if !table.is_zero(&acc) {
                    return Err(MorphismDefect::Relation {
                        k,
                        set,
                        residual: acc.expect("nonzero"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Result of [`gauge_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport<K: Ord> {
    /// `D(p − p′) = 0`.
    pub equivalent: bool,
    pub difference_is_zero: bool,
    pub residual: Total<K>,
}

/// Two co-moment maps lifting the same action are gauge equivalent when
/// their potentials differ by a `D`-cocycle.
pub fn gauge_check<C: Cartan>(
    problem: &Problem<C>,
    a: &ComomentMap<C::Field, C::Key>,
    b: &ComomentMap<C::Field, C::Key>,
) -> GaugeReport<C::Key> {
    let diff = a.to_potential().sub(&b.to_potential());
    let residual = problem.differential(&diff);
    GaugeReport {
        equivalent: residual.is_zero() && a.fields() == b.fields(),
        difference_is_zero: diff.is_zero(),
        residual,
    }
}
