//! Specializations: weak co-moments, the invariant-potential case, universal
//! momentum maps, the covariant obstruction and multi-moment maps.

use num_traits::Zero;
use thiserror::Error;

use crate::cartan::{Cartan, Form, Potential};
use crate::foundation::rational::sign_power;
use crate::foundation::{IndexSet, Rational};
use crate::moment::{
    obstruction::project_component, Bigraded, ComomentMap, MomentError, MorphismDefect, ObstructionLevel, Problem,
};

pub mod multimoment;

pub use multimoment::{
    iterate_full_comoment, multimoment_construct, multimoment_verify, MultiMomentMap, MultimomentDefect,
};

/// `j: 𝔤 → Ω^{n−1}` with `d j(e_i) = −ι_{ζe_i} ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakComoment<K: Ord> {
    pub forms: Vec<Form<K>>,
}

/// `[g_1(e_i)]` in `H^n_{dR}` for each generator; some row is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakObstruction {
    pub classes: Vec<Vec<Rational>>,
}

/// Primitive of `−g_1(e_i)` for every generator.
pub fn weak_comoment<C: Cartan>(
    problem: &Problem<C>,
) -> Result<Result<WeakComoment<C::Key>, WeakObstruction>, MomentError> {
    let g1 = problem.build_g()?.component(1);
    let n = problem.n();
    let backend = problem.backend();
    let minus = -Rational::from_integer(1.into());
    let mut forms = Vec::with_capacity(problem.lie_dim());
    let mut classes = Vec::with_capacity(problem.lie_dim());
    let mut obstructed = false;
    for i in 0..problem.lie_dim() {
        let a = g1.get(IndexSet::singleton(i));
        if a.is_zero() {
            forms.push(Form::zero(n - 1));
            classes.push(vec![Rational::zero(); backend.de_rham(n).dim()]);
            continue;
        }
        match backend.find_potential(&a)? {
            Potential::Exact(phi) => {
                forms.push(phi.scaled(&minus));
                classes.push(vec![Rational::zero(); backend.de_rham(n).dim()]);
            }
            Potential::Obstructed { class } => {
                obstructed = true;
                forms.push(Form::zero(n - 1));
                classes.push(class);
            }
        }
    }
    if obstructed {
        Ok(Err(WeakObstruction { classes }))
    } else {
        Ok(Ok(WeakComoment { forms }))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError<F: std::fmt::Debug, K: Ord + std::fmt::Debug> {
    #[error("d eta ≠ omega")]
    NotPotential { residual: Form<K> },
    #[error("eta is not invariant under e{}", .i + 1)]
    NotInvariant { i: usize, residual: Form<K> },
    #[error("verification failed: {0:?}")]
    Verification(MorphismDefect<F, K>),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// `f_1(X) = (ζX, ι_{ζX} η)` and
/// `f_k(X_1, …, X_k) = (−1)^k (−1)^{k(k+1)/2} ι_{ζX_k} ⋯ ι_{ζX_1} η`
/// for an invariant potential `η` of `ω`. The result is verified before it
/// is returned.
#[allow(clippy::type_complexity)]
pub fn exact_comoment<C: Cartan>(
    problem: &Problem<C>,
    eta: &Form<C::Key>,
) -> Result<ComomentMap<C::Field, C::Key>, ExactError<C::Field, C::Key>> {
    let backend = problem.backend();
    let n = problem.n();
    let eta = if eta.is_zero() { Form::zero(n) } else { eta.clone() };
    let residual = &backend.d(&eta) - problem.omega();
    if !residual.is_zero() || eta.degree() != n {
        return Err(ExactError::NotPotential { residual });
    }
    for (i, v) in problem.fields().iter().enumerate() {
        let residual = backend.lie_derivative(v, &eta);
        if !residual.is_zero() {
            return Err(ExactError::NotInvariant { i, residual });
        }
    }
    let mut components = Vec::with_capacity(n);
    for k in 1..=n {
        let mut b = Bigraded::zero(k, n - k);
        if k <= problem.lie_dim() {
            let sign = sign_power((k + k * (k + 1) / 2) as i64);
            for &set in problem.complex().basis(k).sets() {
                let fields: Vec<&C::Field> = set.iter().map(|i| &problem.fields()[i]).collect();
                let c = backend.contract_all(&fields, &eta).map_err(MomentError::from)?;
                b.add(set, &c.scaled(&sign));
            }
        }
        components.push(b);
    }
    let map = ComomentMap::from_parts(n, problem.fields().to_vec(), components);
    map.verify(problem).map_err(ExactError::Verification)?;
    Ok(map)
}

/// `J(v) = ι_v η` for one field, with its invariance verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalEntry<K: Ord> {
    pub j: Form<K>,
    /// `ℒ_v η = 0`, i.e. `v` preserves the potential.
    pub preserves_eta: bool,
    pub lie_derivative: Form<K>,
}

pub fn universal_momentum_report<C: Cartan>(
    backend: &C,
    eta: &Form<C::Key>,
    fields: &[C::Field],
) -> Result<Vec<UniversalEntry<C::Key>>, MomentError> {
    let deg = eta.degree();
    fields
        .iter()
        .map(|v| {
            let j = if deg == 0 {
                Form::zero(0)
            } else {
                backend.contract(v, eta)?
            };
            let j = if j.is_zero() && deg > 0 { Form::zero(deg - 1) } else { j };
            let lie_derivative = backend.lie_derivative(v, eta);
            Ok(UniversalEntry {
                j,
                preserves_eta: lie_derivative.is_zero(),
                lie_derivative,
            })
        })
        .collect()
}

/// `π_Ω f_1 = J ∘ ζ` on every generator.
pub fn universal_identity_holds<F: Clone, K: Ord + Clone>(
    map: &ComomentMap<F, K>,
    report: &[UniversalEntry<K>],
) -> bool {
    report.len() == map.fields().len()
        && report.iter().enumerate().all(|(i, e)| {
            let (_, a) = map.f1(i);
            (&a - &e.j).is_zero()
        })
}

/// `⟨J, e_i⟩ := −π_Ω f_1(e_i)`, which satisfies `d⟨J, X⟩ = ι_{ζX} ω`.
pub fn covariant_pairing<F: Clone, K: Ord + Clone>(map: &ComomentMap<F, K>, i: usize) -> Form<K> {
    let (_, a) = map.f1(i);
    -&a
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovariantObstruction<K: Ord> {
    /// `c = g_2 + δj ∈ Λ²𝔤* ⊗ Ω^{n−1}`, i.e.
    /// `c(X, Y) = ι_{ζY} ι_{ζX} ω − j([X, Y])`.
    pub cocycle: Bigraded<K>,
    /// Class of `c`, which equals `h_2`.
    pub h2: ObstructionLevel<K>,
    /// A covariant multimomentum map exists iff `h_2 = 0`.
    pub exists: bool,
}

pub fn covariant_obstruction<C: Cartan>(
    problem: &Problem<C>,
    weak: &WeakComoment<C::Key>,
) -> Result<CovariantObstruction<C::Key>, MomentError> {
    let n = problem.n();
    if weak.forms.len() != problem.lie_dim() {
        return Err(MomentError::FieldCount {
            expected: problem.lie_dim(),
            got: weak.forms.len(),
        });
    }
    let g2 = problem.g_component(2)?;
    let mut cocycle = if g2.is_zero() { Bigraded::zero(2, n - 1) } else { g2 };
    if problem.lie_dim() >= 2 {
        let mut j = Bigraded::zero(1, n - 1);
        for (i, a) in weak.forms.iter().enumerate() {
            j.add(IndexSet::singleton(i), a);
        }
        let dj = crate::moment::bicomplex::delta_tensor_id(problem.complex(), &j);
        for (set, a) in dj.coeffs() {
            cocycle.add(*set, a);
        }
    }
    let h2 = project_component(problem, &cocycle);
    Ok(CovariantObstruction {
        exists: !h2.nonzero,
        cocycle,
        h2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::foundation::int;

    #[test]
    fn weak_translations() {
        let p = catalogue::translations_r2();
        let e = p.backend();
        let j = weak_comoment(&p).unwrap().unwrap();
        assert_eq!(j.forms[0], e.term(&[], &[0, 1], int(-1)));
        assert_eq!(j.forms[1], e.term(&[], &[1, 0], int(1)));
        let c = covariant_obstruction(&p, &j).unwrap();
        assert_eq!(c.cocycle.get(IndexSet::from_indices([0, 1])), e.constant_one());
        assert!(c.h2.nonzero && !c.exists);
    }

    #[test]
    fn weak_cartan_exists() {
        let p = catalogue::cartan_so3();
        let j = weak_comoment(&p).unwrap().unwrap();
        let c = covariant_obstruction(&p, &j).unwrap();
        assert!(c.exists);
    }

    #[test]
    fn exact_so3() {
        let p = catalogue::so3_r3_volume();
        let eta = catalogue::so3_eta();
        let map = exact_comoment(&p, &eta).unwrap();
        let report = universal_momentum_report(p.backend(), &eta, p.fields()).unwrap();
        assert!(report.iter().all(|e| e.preserves_eta));
        assert!(universal_identity_holds(&map, &report));
    }

    #[test]
    fn non_invariant_eta_rejected() {
        let p = catalogue::so3_r3_volume();
        let eta = p.backend().term(&[1, 2], &[1, 0, 0], int(1));
        match exact_comoment(&p, &eta) {
            Err(ExactError::NotInvariant { i, .. }) => assert!(i == 1 || i == 2),
            other => panic!("{other:?}"),
        }
    }
}
