//! Level-by-level construction of a potential, from `p_n` downwards.
//!
//! At level `k` the residual `r_k = g_k − d p_k` is `δ`-closed. Its
//! `H^k(𝔤)`-part is a family of closed forms; when they are exact, adding
//! `Σ z_a ⊗ φ_a` to `p_k` (with `dφ_a` the `a`-th part and `z_a` the cocycle
//! representatives) removes it without disturbing the level above, and the
//! remainder is `δ`-exact, which determines `p_{k−1}`. Failure at level `k`
//! happens exactly when `h_k ≠ 0`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::bicomplex::{Bigraded, Total};
use super::obstruction::{project_component, ObstructionLevel};
use super::{MomentError, Problem};
use crate::cartan::{Cartan, Form, Potential};
use crate::exec::Exec;
use crate::foundation::{IndexSet, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseResult<K: Ord> {
    /// Components `p_n, …, p_{max(stop−1, 1)}`.
    pub potential: Total<K>,
    pub stop: usize,
}

/// The level at which the construction stopped, with its class.
#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseFailure<K: Ord> {
    pub k: usize,
    pub level: ObstructionLevel<K>,
}

fn dense(problem_basis: &crate::foundation::SubsetBasis, coeffs: &BTreeMap<IndexSet, Rational>) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); problem_basis.len()];
    for (s, c) in coeffs {
        v[problem_basis.index_of(*s).expect("basis")] = c.clone();
    }
    v
}

/// Run levels `n+1, n, …, stop` (with `1 ≤ stop ≤ n+1`).
#[allow(clippy::type_complexity)]
pub fn staircase<C: Cartan>(
    problem: &Problem<C>,
    g: &Total<C::Key>,
    stop: usize,
    exec: Exec,
) -> Result<Result<StaircaseResult<C::Key>, StaircaseFailure<C::Key>>, MomentError> {
    let n = problem.n();
    let stop = stop.clamp(1, n + 1);
    let backend = problem.backend();
    let complex = problem.complex();
    let dim = problem.lie_dim();
    let mut p = Total::zero(n);
    for k in (stop..=n + 1).rev() {
        let j = n + 1 - k;
        let mut pk = if k <= n { p.component(k) } else { Bigraded::zero(k, 0) };
        let mut r = g.component(k);
        if r.is_zero() {
            r = Bigraded::zero(k, j);
        }
        if k <= n {
            for (set, a) in pk.coeffs() {
                r.add(*set, &backend.d(a).scaled(&-Rational::from_integer(1.into())));
            }
        }
        if k <= dim {
            let coh = complex.cohomology(k);
            let basis = complex.basis(k);
            let grouped = r.by_form_key();
            let mut rho: Vec<Form<C::Key>> = vec![Form::zero(j); coh.dim()];
            for (key, coeffs) in &grouped {
                for (a, x) in coh.project(&dense(basis, coeffs)).iter().enumerate() {
                    if !x.is_zero() {
                        rho[a].add_term(key.clone(), x);
                    }
                }
            }
            if rho.iter().any(|f| !f.is_zero()) {
                let fail = || {
                    let gk = g.component(k);
                    let gk = if gk.is_zero() { Bigraded::zero(k, j) } else { gk };
                    StaircaseFailure {
                        k,
                        level: project_component(problem, &gk),
                    }
                };
                if j == 0 {
                    return Ok(Err(fail()));
                }
                for (a, ra) in rho.iter().enumerate() {
                    if ra.is_zero() {
                        continue;
                    }
                    let phi = match backend.find_potential(ra)? {
                        Potential::Exact(phi) => phi,
                        Potential::Obstructed { .. } => return Ok(Err(fail())),
                    };
                    let dphi = backend.d(&phi);
                    for (pos, z) in coh.representatives()[a].iter().enumerate() {
                        if z.is_zero() {
                            continue;
                        }
                        let set = basis.get(pos);
                        pk.add(set, &phi.scaled(z));
                        r.add(set, &dphi.scaled(&-z));
                    }
                }
                if k <= n {
                    p.set_component(pk);
                }
            }
        }
        if k == 1 {
            if !r.is_zero() {
                return Err(MomentError::NotCocycle);
            }
            continue;
        }
        // δ p_{k−1} = r, one form key at a time
        let grouped: Vec<(C::Key, BTreeMap<IndexSet, Rational>)> = r.by_form_key().into_iter().collect();
        if grouped.is_empty() || k - 1 > dim {
            continue;
        }
        let fact = complex.factorization(k - 1);
        let source = complex.basis(k - 1);
        let target = complex.basis(k);
        let solved = exec.map(&grouped, |(key, coeffs)| {
            fact.solve_particular(&dense(target, coeffs)).map(|x| (key.clone(), x))
        });
        let mut prev = Bigraded::zero(k - 1, j);
        for s in solved {
            let Some((key, x)) = s else {
                return Err(MomentError::NotCocycle);
            };
            for (pos, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    let f = Form::from_terms(j, [(key.clone(), c.clone())]);
                    prev.add(source.get(pos), &f);
                }
            }
        }
        p.set_component(prev);
    }
    Ok(Ok(StaircaseResult { potential: p, stop }))
}
