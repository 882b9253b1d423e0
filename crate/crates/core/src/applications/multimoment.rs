//! Multi-moment maps on `P_𝔤 = ker(δ*: Λ^n 𝔤 → Λ^{n−1} 𝔤)` and the full
//! level-by-level construction of a co-moment map.

use num_traits::Zero;

use crate::cartan::{Cartan, Form};
use crate::exec::Exec;
use crate::foundation::matrix::extend_basis;
use crate::foundation::rational::sign_power;
use crate::foundation::{Factorization, IndexSet, Rational, RationalMatrix};
use crate::liealg::Chain;
use crate::moment::{staircase, Bigraded, ComomentMap, MomentError, Problem, StaircaseFailure};

/// `v̄: P_𝔤 → Ω⁰`, stored on a basis of `P_𝔤`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiMomentMap<K: Ord> {
    pub n: usize,
    /// Basis of `P_𝔤` in the canonical basis of `Λ^n 𝔤`.
    pub basis: Vec<Chain>,
    /// `v̄` of each basis element.
    pub values: Vec<Form<K>>,
    /// The component `f_n ∈ Λ^n 𝔤* ⊗ Ω⁰` it was restricted from.
    pub top: Bigraded<K>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MultimomentDefect<K: Ord> {
    /// `d v̄(p) ≠ ι_{ζ(p)} ω` for the basis element `index`.
    ConditionI {
        index: usize,
        residual: Form<K>,
    },
    /// `v̄(ad_{e_i} p) ≠ ℒ_{ζe_i} v̄(p)`.
    ConditionII {
        i: usize,
        index: usize,
        residual: Form<K>,
    },
    /// `ad_{e_i} p` left the span of the stored basis.
    NotInvariant {
        i: usize,
        index: usize,
    },
    Shape(String),
}

fn p_basis(problem_dim: usize, n: usize, algebra: &crate::liealg::LieAlgebra) -> Vec<Chain> {
    if n > problem_dim {
        return Vec::new();
    }
    algebra.p_g(n).expect("degree in range")
}

fn chain_matrix(basis: &[Chain], len: usize) -> RationalMatrix {
    let cols: Vec<Vec<Rational>> = basis.iter().map(|c| c.coeffs.clone()).collect();
    RationalMatrix::from_columns(len, &cols)
}

/// `ι_{ζ(p)} ω = Σ_J p^J ι_{ζe_{J_n}} ⋯ ι_{ζe_{J_1}} ω`.
fn contract_chain<C: Cartan>(problem: &Problem<C>, p: &Chain) -> Result<Form<C::Key>, MomentError> {
    let mut out = Form::zero(problem.n() + 1 - p.degree);
    for (pos, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let set = problem.complex().basis(p.degree).get(pos);
        let fields: Vec<&C::Field> = set.iter().map(|i| &problem.fields()[i]).collect();
        let f = problem.backend().contract_all(&fields, problem.omega())?;
        out.add_scaled(&f, c);
    }
    Ok(out)
}

/// Two-step construction: levels `n+1` and `n` of the staircase give
/// `f_n = −p_n`, then `v̄ = (−1)^{n(n+1)/2} f_n` restricted to `P_𝔤`. With
/// observables normalized by `dα = −ι_v ω` this is the sign for which
/// `d v̄(p) = ι_{ζ(p)} ω`; for `n = 1` it reads `v̄ = −π_Ω f_1`.
/// Locally constant ambiguity is removed by subtracting base-point values on
/// a complement of `span{ad_X p}` in `P_𝔤`, where the constants are free.
#[allow(clippy::type_complexity)]
pub fn multimoment_construct<C: Cartan>(
    problem: &Problem<C>,
    exec: Exec,
) -> Result<Result<MultiMomentMap<C::Key>, StaircaseFailure<C::Key>>, MomentError> {
    let n = problem.n();
    let g = problem.build_g()?;
    let res = match staircase(problem, &g, n, exec)? {
        Ok(r) => r,
        Err(f) => return Ok(Err(f)),
    };
    let backend = problem.backend();
    let pn = res.potential.component(n);
    let minus = -Rational::from_integer(1.into());
    let top = if pn.is_zero() {
        Bigraded::zero(n, 0)
    } else {
        pn.scaled(&minus)
    };
    let dim = problem.lie_dim();
    let basis = p_basis(dim, n, problem.algebra());
    if basis.is_empty() {
        return Ok(Ok(MultiMomentMap {
            n,
            basis,
            values: Vec::new(),
            top,
        }));
    }
    let sets = problem.complex().basis(n);
    let sign = sign_power((n * (n + 1) / 2) as i64);
    let mut values: Vec<Form<C::Key>> = basis
        .iter()
        .map(|q| {
            let mut v = Form::zero(0);
            for (pos, c) in q.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    v.add_scaled(&top.get(sets.get(pos)), &(c * &sign));
                }
            }
            v
        })
        .collect();

    // normalization
    let r = basis.len();
    let q = chain_matrix(&basis, sets.len());
    let fact = Factorization::new(&q);
    let mut w: Vec<Vec<Rational>> = Vec::new();
    for i in 0..dim {
        let x = problem.algebra().basis_vector(i);
        for b in &basis {
            let ad = problem.algebra().adjoint_on_chains(&x, b)?;
            w.push(fact.solve_particular(&ad.coeffs).expect("P is ad-invariant"));
        }
    }
    let w_basis: Vec<Vec<Rational>> = extend_basis(r, &[], &w).into_iter().map(|i| w[i].clone()).collect();
    let units: Vec<Vec<Rational>> = (0..r)
        .map(|t| {
            let mut e = vec![Rational::zero(); r];
            e[t] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let complement = extend_basis(r, &w_basis, &units);
    let bp = backend.base_point();
    let mut rows = w_basis.clone();
    let mut rhs = vec![Rational::zero(); w_basis.len()];
    for &t in &complement {
        rows.push(units[t].clone());
        let at = backend.evaluate_at(&values[t], &bp)?;
        rhs.push(at.get(&IndexSet::default()).cloned().unwrap_or_else(Rational::zero));
    }
    let m = RationalMatrix::from_rows(rows).expect("rectangular");
    let c = Factorization::new(&m)
        .solve_particular(&rhs)
        .expect("square invertible");
    let one = backend.constant_one();
    for (v, cb) in values.iter_mut().zip(&c) {
        if !cb.is_zero() {
            v.add_scaled(&one, &-cb);
        }
    }
    Ok(Ok(MultiMomentMap { n, basis, values, top }))
}

/// Checks `d v̄(p) = ι_{ζ(p)} ω` and `v̄(ad_X p) = ℒ_{ζX} v̄(p)` on the basis
/// of `P_𝔤` and the generators of `𝔤`.
pub fn multimoment_verify<C: Cartan>(
    problem: &Problem<C>,
    map: &MultiMomentMap<C::Key>,
) -> Result<Result<(), MultimomentDefect<C::Key>>, MomentError> {
    let n = problem.n();
    if map.n != n || map.basis.len() != map.values.len() {
        return Ok(Err(MultimomentDefect::Shape(
            "basis and values differ in length".into(),
        )));
    }
    if map.basis.is_empty() {
        return Ok(Ok(()));
    }
    let backend = problem.backend();
    for (index, (q, v)) in map.basis.iter().zip(&map.values).enumerate() {
        let rhs = contract_chain(problem, q)?;
        let residual = &backend.d(v) - &rhs;
        if !residual.is_zero() {
            return Ok(Err(MultimomentDefect::ConditionI { index, residual }));
        }
    }
    let len = problem.complex().basis(n).len();
    let fact = Factorization::new(&chain_matrix(&map.basis, len));
    for i in 0..problem.lie_dim() {
        let x = problem.algebra().basis_vector(i);
        for (index, q) in map.basis.iter().enumerate() {
            let ad = problem.algebra().adjoint_on_chains(&x, q)?;
            let Some(coords) = fact.solve_particular(&ad.coeffs) else {
                return Ok(Err(MultimomentDefect::NotInvariant { i, index }));
            };
            let mut lhs = Form::zero(0);
            for (c, v) in coords.iter().zip(&map.values) {
                if !c.is_zero() {
                    lhs.add_scaled(v, c);
                }
            }
            let residual = &lhs - &backend.lie_derivative(&problem.fields()[i], &map.values[index]);
            if !residual.is_zero() {
                return Ok(Err(MultimomentDefect::ConditionII { i, index, residual }));
            }
        }
    }
    Ok(Ok(()))
}

/// Continue the staircase down to `f_1`; stops at the first nonzero `h_k`.
#[allow(clippy::type_complexity)]
pub fn iterate_full_comoment<C: Cartan>(
    problem: &Problem<C>,
    exec: Exec,
) -> Result<Result<ComomentMap<C::Field, C::Key>, StaircaseFailure<C::Key>>, MomentError> {
    let g = problem.build_g()?;
    match staircase(problem, &g, 1, exec)? {
        Ok(r) => Ok(Ok(ComomentMap::from_potential(problem, &r.potential)?)),
        Err(f) => Ok(Err(f)),
    }
}
