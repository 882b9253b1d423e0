//! Homotopy co-moment maps: actions, the cocycle `g`, the potential solver,
//! obstruction classes and the point class.

use std::fmt::Debug;

use num_traits::Zero;
use thiserror::Error;

use crate::cartan::{Cartan, CartanError, Form};
use crate::foundation::rational::sign_power;
use crate::foundation::Rational;
use crate::liealg::{CeComplex, LieAlgebra, LieError};
use crate::observables::BracketTable;

pub mod bicomplex;
pub mod comoment;
pub mod obstruction;
pub mod solver;
pub mod staircase;

pub use bicomplex::{total_differential, Bigraded, Total};
pub use comoment::{gauge_check, ComomentMap, GaugeReport, MorphismDefect};
pub use obstruction::{
    decompose_obstruction, obstruction_report, point_obstruction, ObstructionLevel, ObstructionReport, PointClass,
};
pub use solver::{default_bound, solve_comoment, Outcome, SolveResult, SolverOptions};
pub use staircase::{staircase, StaircaseFailure, StaircaseResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("omega degree {got} ≠ n+1 = {expected}")]
    OmegaDegree { expected: usize, got: usize },
    #[error("omega is not closed")]
    OmegaNotClosed,
    #[error("n must be at least 1")]
    ZeroN,
    #[error("action has {got} generators, the Lie algebra has dimension {expected}")]
    FieldCount { expected: usize, got: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("D g ≠ 0 (the action is not a symmetry of omega)")]
    NotCocycle,
    #[error("D p ≠ g")]
    PotentialMismatch,
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A defect found by [`Problem::validate_action`].
#[derive(Debug, Clone, PartialEq)]
pub enum ActionDefect<F, K: Ord> {
    /// `ζ[e_i, e_j] − [ζe_i, ζe_j]` is nonzero.
    Bracket { i: usize, j: usize, residual: F },
    /// `ℒ_{ζe_i} ω` is nonzero.
    NotSymplectic { i: usize, residual: Form<K> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionReport<F, K: Ord> {
    pub defects: Vec<ActionDefect<F, K>>,
}

impl<F, K: Ord> ActionReport<F, K> {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// A pre-`n`-plectic form together with an infinitesimal action of `𝔤`.
#[derive(Debug, Clone)]
pub struct Problem<C: Cartan> {
    backend: C,
    complex: CeComplex,
    omega: Form<C::Key>,
    n: usize,
    fields: Vec<C::Field>,
}

impl<C: Cartan> Problem<C> {
    pub fn new(
        backend: C,
        algebra: &LieAlgebra,
        omega: Form<C::Key>,
        n: usize,
        fields: Vec<C::Field>,
    ) -> Result<Self, MomentError> {
        if n == 0 {
            return Err(MomentError::ZeroN);
        }
        if omega.degree() != n + 1 && !omega.is_zero() {
            return Err(MomentError::OmegaDegree {
                expected: n + 1,
                got: omega.degree(),
            });
        }
        let omega = if omega.is_zero() { Form::zero(n + 1) } else { omega };
        if !backend.is_closed(&omega) {
            return Err(MomentError::OmegaNotClosed);
        }
        if fields.len() != algebra.dim() {
            return Err(MomentError::FieldCount {
                expected: algebra.dim(),
                got: fields.len(),
            });
        }
        Ok(Self {
            backend,
            complex: algebra.complex(),
            omega,
            n,
            fields,
        })
    }

    pub fn backend(&self) -> &C {
        &self.backend
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.complex.algebra()
    }

    pub fn complex(&self) -> &CeComplex {
        &self.complex
    }

    pub fn omega(&self) -> &Form<C::Key> {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> &[C::Field] {
        &self.fields
    }

    pub fn lie_dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn table(&self) -> BracketTable<'_, C> {
        BracketTable::new(&self.backend, self.omega.clone(), self.n).expect("validated at construction")
    }

    /// `ζ(X)` for `X` in coordinates.
    pub fn zeta(&self, x: &[Rational]) -> C::Field {
        let terms: Vec<(Rational, &C::Field)> = x
            .iter()
            .cloned()
            .zip(self.fields.iter())
            .filter(|(c, _)| !c.is_zero())
            .collect();
        self.backend.field_combination(&terms)
    }

    /// The same problem with a different action.
    pub fn with_fields(&self, fields: Vec<C::Field>) -> Result<Self, MomentError>
    where
        C: Clone,
    {
        Problem::new(self.backend.clone(), self.algebra(), self.omega.clone(), self.n, fields)
    }

    /// Checks `ζ[e_i, e_j] = [ζe_i, ζe_j]` on basis pairs and `ℒ_{ζe_i} ω = 0`.
    pub fn validate_action(&self) -> ActionReport<C::Field, C::Key> {
        let mut defects = Vec::new();
        let dim = self.lie_dim();
        for i in 0..dim {
            for j in i + 1..dim {
                let lhs = self.zeta(&self.algebra().bracket_basis(i, j));
                let rhs = self.backend.field_bracket(&self.fields[i], &self.fields[j]);
                let one = Rational::from_integer(1.into());
                let residual = self.backend.field_combination(&[(one.clone(), &lhs), (-one, &rhs)]);
                if !self.backend.field_is_zero(&residual) {
                    defects.push(ActionDefect::Bracket { i, j, residual });
                }
            }
        }
        for i in 0..dim {
            let residual = self.backend.lie_derivative(&self.fields[i], &self.omega);
            if !residual.is_zero() {
                defects.push(ActionDefect::NotSymplectic { i, residual });
            }
        }
        ActionReport { defects }
    }

    fn require_valid(&self) -> Result<(), MomentError> {
        let report = self.validate_action();
        match report.defects.first() {
            None => Ok(()),
            Some(ActionDefect::Bracket { i, j, .. }) => Err(MomentError::InvalidAction(format!(
                "ζ[e{}, e{}] ≠ [ζe{}, ζe{}]",
                i + 1,
                j + 1,
                i + 1,
                j + 1
            ))),
            Some(ActionDefect::NotSymplectic { i, .. }) => {
                Err(MomentError::InvalidAction(format!("ℒ_ζe{} ω ≠ 0", i + 1)))
            }
        }
    }

    /// `g_k(e_J) = −(−1)^{k(k+1)/2} ι_{ζe_{J_k}} ⋯ ι_{ζe_{J_1}} ω`.
    pub fn g_component(&self, k: usize) -> Result<Bigraded<C::Key>, MomentError> {
        let mut b = Bigraded::zero(k, self.n + 1 - k);
        if k > self.lie_dim() {
            return Ok(b);
        }
        let sign = -sign_power((k * (k + 1) / 2) as i64);
        for &set in self.complex.basis(k).sets() {
            let fields: Vec<&C::Field> = set.iter().map(|i| &self.fields[i]).collect();
            let c = self.backend.contract_all(&fields, &self.omega)?;
            b.add(set, &c.scaled(&sign));
        }
        Ok(b)
    }

    /// The cocycle `g = g_1 + ⋯ + g_{n+1}`; fails when the action is invalid
    /// or `D g ≠ 0`.
    pub fn build_g(&self) -> Result<Total<C::Key>, MomentError> {
        self.require_valid()?;
        let mut g = Total::zero(self.n + 1);
        for k in 1..=self.n + 1 {
            g.set_component(self.g_component(k)?);
        }
        if !self.differential(&g).is_zero() {
            return Err(MomentError::NotCocycle);
        }
        Ok(g)
    }

    pub fn differential(&self, x: &Total<C::Key>) -> Total<C::Key> {
        total_differential(&self.backend, &self.complex, self.n, x)
    }
}
