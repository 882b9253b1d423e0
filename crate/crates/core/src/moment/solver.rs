//! Exact search for a potential `p` with `D p = g`.
//!
//! `D` preserves the backend strata (monomial multidegree on the Euclidean
//! backend), so the linear system is block diagonal: one small exact solve per
//! stratum that occurs in `g`. Strata are independent and may be solved in
//! parallel; the assembled result does not depend on evaluation order.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bicomplex::{d_sign, Bigraded, Total};
use super::comoment::ComomentMap;
use super::obstruction::{obstruction_report, ObstructionReport};
use super::{MomentError, Problem};
use crate::cartan::{Cartan, Form};
use crate::exec::Exec;
use crate::foundation::{Factorization, IndexSet, Rational, RationalMatrix, Solution};

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    /// Largest polynomial coefficient degree allowed in the potential.
    /// `None` selects the default bound, which is always sufficient.
    pub max_coeff_degree: Option<usize>,
    pub exec: Exec,
    /// Shuffle the unknowns with this seed before eliminating, which selects
    /// a different particular solution.
    pub column_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<F, K: Ord> {
    Exists(ComomentMap<F, K>),
    Obstructed(ObstructionReport<K>),
    /// No potential within the bound although every class vanishes.
    Inconclusive(ObstructionReport<K>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult<F, K: Ord> {
    pub outcome: Outcome<F, K>,
    pub bound: usize,
    pub strata: usize,
    pub unknowns: usize,
}

type Slot<K> = (usize, IndexSet, K);
type Rhs<K> = Vec<(Slot<K>, Rational)>;

/// Default coefficient bound: the largest coefficient degree in `g` plus `n`.
pub fn default_bound<C: Cartan>(problem: &Problem<C>, g: &Total<C::Key>) -> usize {
    let backend = problem.backend();
    let max = g
        .components()
        .values()
        .flat_map(|b| b.coeffs().values())
        .flat_map(|f| f.terms().keys())
        .map(|k| backend.coefficient_degree(k))
        .max()
        .unwrap_or(0);
    max + problem.n()
}

struct StratumSolution<K> {
    values: Option<Vec<(Slot<K>, Rational)>>,
    unknowns: usize,
}

fn solve_stratum<C: Cartan>(
    problem: &Problem<C>,
    stratum: &C::Stratum,
    rhs: &[(Slot<C::Key>, Rational)],
    bound: usize,
    seed: Option<u64>,
) -> StratumSolution<C::Key> {
    let n = problem.n();
    let backend = problem.backend();
    let complex = problem.complex();
    let mut unknowns: Vec<Slot<C::Key>> = Vec::new();
    for k in 1..=n.min(problem.lie_dim()) {
        for key in backend.stratum_basis(stratum, n - k, Some(bound)) {
            for &set in complex.basis(k).sets() {
                unknowns.push((k, set, key.clone()));
            }
        }
    }
    if let Some(s) = seed {
        unknowns.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    let mut rows: BTreeMap<Slot<C::Key>, usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(Slot<C::Key>, Rational)>> = Vec::with_capacity(unknowns.len());
    for (k, set, key) in &unknowns {
        let mut col = Vec::new();
        let idx = complex.basis(*k).index_of(*set).expect("basis");
        for (r, v) in complex.differential_column(*k, idx) {
            col.push(((k + 1, complex.basis(k + 1).get(*r), key.clone()), v.clone()));
        }
        let unit = Form::from_terms(n - k, [(key.clone(), Rational::from_integer(1.into()))]);
        let sign = d_sign(n, *k, n - k);
        for (key2, c) in backend.d(&unit).terms() {
            col.push(((*k, *set, key2.clone()), c * &sign));
        }
        for (slot, _) in &col {
            let next = rows.len();
            rows.entry(slot.clone()).or_insert(next);
        }
        columns.push(col);
    }
    for (slot, _) in rhs {
        let next = rows.len();
        rows.entry(slot.clone()).or_insert(next);
    }
    let mut a = RationalMatrix::zeros(rows.len(), unknowns.len());
    for (c, col) in columns.iter().enumerate() {
        for (slot, v) in col {
            a.add_to(rows[slot], c, v);
        }
    }
    let mut b = vec![Rational::zero(); rows.len()];
    for (slot, v) in rhs {
        b[rows[slot]] += v;
    }
    let values = match Factorization::new(&a).solve(&b).expect("dimensions agree") {
        Solution::Solved { x, .. } => Some(unknowns.iter().cloned().zip(x).filter(|(_, v)| !v.is_zero()).collect()),
        Solution::Inconsistent { .. } => None,
    };
    StratumSolution {
        values,
        unknowns: unknowns.len(),
    }
}

/// Search for `p` with `D p = g` and return the co-moment map, or the
/// obstruction report (evaluated at the backend base point) when none exists.
pub fn solve_comoment<C: Cartan>(
    problem: &Problem<C>,
    options: &SolverOptions,
) -> Result<SolveResult<C::Field, C::Key>, MomentError> {
    let g = problem.build_g()?;
    let bound = options.max_coeff_degree.unwrap_or_else(|| default_bound(problem, &g));
    let backend = problem.backend();
    let mut by_stratum: BTreeMap<C::Stratum, Rhs<C::Key>> = BTreeMap::new();
    for b in g.components().values() {
        let k = b.bidegree().0;
        for (set, form) in b.coeffs() {
            for (key, c) in form.terms() {
                by_stratum
                    .entry(backend.stratum(key))
                    .or_default()
                    .push(((k, *set, key.clone()), c.clone()));
            }
        }
    }
    let strata: Vec<(C::Stratum, Rhs<C::Key>)> = by_stratum.into_iter().collect();
    let solved = options.exec.map(&strata, |(s, rhs)| {
        solve_stratum(problem, s, rhs, bound, options.column_seed)
    });
    let unknowns = solved.iter().map(|s| s.unknowns).sum();
    let stats = |outcome| SolveResult {
        outcome,
        bound,
        strata: strata.len(),
        unknowns,
    };
    if solved.iter().any(|s| s.values.is_none()) {
        let report = obstruction_report(problem, &g, &backend.base_point())?;
        let outcome = if report.any_nonzero() || report.point_class.nonzero {
            Outcome::Obstructed(report)
        } else {
            Outcome::Inconclusive(report)
        };
        return Ok(stats(outcome));
    }
    let n = problem.n();
    let mut comps: BTreeMap<usize, Bigraded<C::Key>> = BTreeMap::new();
    for s in &solved {
        for ((k, set, key), v) in s.values.as_ref().expect("solved") {
            let f = Form::from_terms(n - k, [(key.clone(), v.clone())]);
            comps
                .entry(*k)
                .or_insert_with(|| Bigraded::zero(*k, n - k))
                .add(*set, &f);
        }
    }
    let mut p = Total::zero(n);
    for (_, b) in comps {
        p.set_component(b);
    }
    let map = ComomentMap::from_potential(problem, &p)?;
    Ok(stats(Outcome::Exists(map)))
}
