//! Seeded generators for tests, benches and property checks.

use std::collections::BTreeMap;

use rand::Rng;

use crate::cartan::{AlgForm, Cartan, Euclidean, Form, Invariant, Poly, PolyForm, PolyVectorField, Potential};
use crate::catalogue::{aff1_family, linear_field};
use crate::foundation::{frac, int, subsets, Factorization, IndexSet, Rational, RationalMatrix};
use crate::liealg::LieAlgebra;
use crate::moment::Problem;
use crate::observables::{BracketTable, Obs};

/// A small nonzero-biased rational with numerator in `[-5, 5]` and
/// denominator in `[1, 3]`.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn exponent<R: Rng>(rng: &mut R, nvars: usize, max_degree: usize) -> Vec<u32> {
    let total = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; nvars];
    for _ in 0..total {
        e[rng.gen_range(0..nvars)] += 1;
    }
    e
}

pub fn poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: usize, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        p.add_term(exponent(rng, nvars, max_degree), &rational(rng));
    }
    p
}

/// A random polynomial `k`-form on `ℝ^m`.
pub fn poly_form<R: Rng>(rng: &mut R, backend: &Euclidean, k: usize, max_degree: usize, terms: usize) -> PolyForm {
    let m = backend.dim();
    let sets = subsets(m, k);
    let mut a = PolyForm::zero(k);
    if sets.is_empty() {
        return a;
    }
    for _ in 0..terms {
        let dx = sets[rng.gen_range(0..sets.len())];
        let f = Poly::monomial(exponent(rng, m, max_degree), rational(rng));
        a += &backend.poly_times(&f, dx);
    }
    a
}

pub fn poly_field<R: Rng>(rng: &mut R, m: usize, max_degree: usize, terms: usize) -> PolyVectorField {
    PolyVectorField::new((0..m).map(|_| poly(rng, m, max_degree, terms)).collect())
}

/// A random left-invariant `k`-form.
pub fn alg_form<R: Rng>(rng: &mut R, k: usize, dim: usize) -> AlgForm {
    let mut a = AlgForm::zero(k);
    for s in subsets(dim, k) {
        if rng.gen_bool(0.6) {
            a.add_term(s, &rational(rng));
        }
    }
    a
}

pub fn alg_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rational(rng)).collect()
}

/// A random invertible `m × m` matrix (unit lower times unit upper
/// triangular, so always invertible).
pub fn invertible<R: Rng>(rng: &mut R, m: usize) -> RationalMatrix {
    let mut l = RationalMatrix::identity(m);
    let mut u = RationalMatrix::identity(m);
    for i in 0..m {
        for j in 0..i {
            l.set(i, j, int(rng.gen_range(-2..=2)));
            u.set(j, i, int(rng.gen_range(-2..=2)));
        }
    }
    l.mul(&u).expect("square")
}

/// `r` commuting trace-free linear fields `x ↦ −P D_a P⁻¹ x` on `ℝ^m`, with
/// each `D_a` diagonal.
pub fn commuting_traceless_fields<R: Rng>(rng: &mut R, m: usize, r: usize) -> Vec<PolyVectorField> {
    let p = invertible(rng, m);
    let inv = p.inverse().expect("invertible");
    (0..r)
        .map(|_| {
            let mut d = RationalMatrix::zeros(m, m);
            let mut trace = Rational::from_integer(0.into());
            for i in 0..m - 1 {
                let v = int(rng.gen_range(-3..=3));
                trace += &v;
                d.set(i, i, -v);
            }
            d.set(m - 1, m - 1, trace);
            linear_field(&p.mul(&d).and_then(|x| x.mul(&inv)).expect("square"))
        })
        .collect()
}

/// Random abelian action of rank `r` on `(ℝ^m, vol)` with `n = m − 1`.
pub fn abelian_volume_problem<R: Rng>(rng: &mut R, m: usize, r: usize) -> Problem<Euclidean> {
    let e = Euclidean::new(m);
    let vol = e.volume();
    let fields = commuting_traceless_fields(rng, m, r);
    Problem::new(e, &LieAlgebra::abelian(r), vol, m - 1, fields).expect("volume preserving")
}

/// A random member of the `aff(1)` family on `(ℝ³, vol)`.
pub fn aff1_problem<R: Rng>(rng: &mut R) -> Problem<Euclidean> {
    let a = frac(rng.gen_range(-4..=4), rng.gen_range(1..=2));
    aff1_family(&a, &invertible(rng, 3))
}

/// A random index set of size `k` in `0..dim`.
pub fn index_set<R: Rng>(rng: &mut R, dim: usize, k: usize) -> IndexSet {
    let sets = subsets(dim, k);
    sets[rng.gen_range(0..sets.len())]
}

/// A random Hamiltonian pair `(v, α)` with `dα = −ι_v ω` for a
/// constant-coefficient `ω`: `α` is random and `v` solves `ι_v ω = −dα`
/// monomial by monomial. `None` when `ω` is too degenerate to lift `dα`.
pub fn euclidean_pair<R: Rng>(
    rng: &mut R,
    backend: &Euclidean,
    omega: &PolyForm,
    max_degree: usize,
    terms: usize,
) -> Option<(PolyVectorField, PolyForm)> {
    let m = backend.dim();
    let n = omega.degree() - 1;
    let alpha = poly_form(rng, backend, n - 1, max_degree, terms);
    let theta = backend.d(&alpha);
    let rows = subsets(m, n);
    let columns: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let c = backend
                .contract(&PolyVectorField::coordinate(m, i), omega)
                .expect("positive degree");
            let coeffs = backend.coefficients(&c);
            rows.iter()
                .map(|s| {
                    coeffs
                        .get(s)
                        .map(|p| p.coefficient(&vec![0; m]))
                        .unwrap_or_else(|| Rational::from_integer(0.into()))
                })
                .collect()
        })
        .collect();
    let fact = Factorization::new(&RationalMatrix::from_columns(rows.len(), &columns));
    let mut by_exp: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
    for (key, c) in theta.terms() {
        let row = rows.iter().position(|s| *s == key.dx).expect("degree n");
        by_exp
            .entry(key.exp.clone())
            .or_insert_with(|| vec![Rational::from_integer(0.into()); rows.len()])[row] -= c;
    }
    let mut comps = vec![Poly::zero(m); m];
    for (exp, rhs) in by_exp {
        let x = fact.solve_particular(&rhs)?;
        for (i, c) in x.iter().enumerate() {
            comps[i].add_term(exp.clone(), c);
        }
    }
    Some((PolyVectorField::new(comps), alpha))
}

/// A random pair on an invariant model: `v ∈ 𝔥` random and `α` a potential
/// of `−ι_v ω` plus a random exact form, when one exists.
pub fn invariant_pair<R: Rng>(rng: &mut R, backend: &Invariant, omega: &AlgForm) -> Option<(Vec<Rational>, AlgForm)> {
    let n = omega.degree() - 1;
    let v = alg_vector(rng, backend.dim());
    let theta = backend.contract(&v, omega).ok()?.scaled(&int(-1));
    let mut alpha = if theta.is_zero() {
        AlgForm::zero(n - 1)
    } else {
        match backend.find_potential(&theta).ok()? {
            Potential::Exact(a) => a,
            Potential::Obstructed { .. } => return None,
        }
    };
    if n >= 2 {
        alpha += &backend.d(&alg_form(rng, n - 2, backend.dim()));
    }
    Some((v, alpha))
}

/// `len` random observables: pairs from `pair`, and with probability one half
/// (when `n ≥ 2`) a form element of random negative degree from `form`.
pub fn observables<C: Cartan, R: Rng>(
    rng: &mut R,
    table: &BracketTable<'_, C>,
    len: usize,
    mut pair: impl FnMut(&mut R) -> Option<(C::Field, Form<C::Key>)>,
    mut form: impl FnMut(&mut R, usize) -> Form<C::Key>,
) -> Vec<Obs<C>> {
    let n = table.n();
    (0..len)
        .map(|_| {
            if n >= 2 && rng.gen_bool(0.5) {
                let d = rng.gen_range(1..n) as i64;
                let f = form(rng, n - 1 - d as usize);
                table.form_element(-d, f).expect("degree matches")
            } else {
                loop {
                    if let Some((v, a)) = pair(rng) {
                        break table.make_observable(v, a).expect("hamiltonian pair");
                    }
                }
            }
        })
        .collect()
}
