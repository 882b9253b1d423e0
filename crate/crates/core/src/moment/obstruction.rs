//! Obstruction classes `h_k ∈ H^k(𝔤) ⊗ H^{n+1−k}_{dR}` and the point class.

use num_traits::Zero;

use super::bicomplex::{Bigraded, Total};
use super::{MomentError, Problem};
use crate::cartan::{alternating_value, Cartan};
use crate::foundation::rational::sign_power;
use crate::foundation::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionLevel<K: Ord> {
    pub k: usize,
    /// `dim H^k(𝔤)`.
    pub lie_dim: usize,
    /// `dim H^{n+1−k}_{dR}`.
    pub de_rham_dim: usize,
    /// `h_k` in the product basis, `lie_dim × de_rham_dim`.
    pub coordinates: Vec<Vec<Rational>>,
    /// `Σ h_ab z_a ⊗ w_b` for the chosen representatives.
    pub representative: Bigraded<K>,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointClass {
    pub point: Vec<Rational>,
    /// `c_p(e_J)` for `J` running over the basis of `Λ^{n+1} 𝔤*`.
    pub values: Vec<Rational>,
    /// Coordinates of `[c_p]` in `H^{n+1}(𝔤)`.
    pub class: Vec<Rational>,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport<K: Ord> {
    pub n: usize,
    pub levels: Vec<ObstructionLevel<K>>,
    pub point_class: PointClass,
}

impl<K: Ord> ObstructionReport<K> {
    pub fn any_nonzero(&self) -> bool {
        self.levels.iter().any(|l| l.nonzero)
    }

    /// Smallest `k` with `h_k ≠ 0`.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.levels.iter().find(|l| l.nonzero).map(|l| l.k)
    }

    pub fn level(&self, k: usize) -> Option<&ObstructionLevel<K>> {
        self.levels.iter().find(|l| l.k == k)
    }
}

/// Class of one bigraded component under `π_H ⊗ π'_H`.
pub fn project_component<C: Cartan>(problem: &Problem<C>, b: &Bigraded<C::Key>) -> ObstructionLevel<C::Key> {
    let (k, j) = b.bidegree();
    let backend = problem.backend();
    let de_rham = backend.de_rham(j);
    let r = de_rham.dim();
    let mut representative = Bigraded::zero(k, j);
    if k > problem.lie_dim() {
        return ObstructionLevel {
            k,
            lie_dim: 0,
            de_rham_dim: r,
            coordinates: Vec::new(),
            representative,
            nonzero: false,
        };
    }
    let coh = problem.complex().cohomology(k);
    let basis = problem.complex().basis(k);
    let columns: Vec<Vec<Rational>> = basis
        .sets()
        .iter()
        .map(|&s| {
            let c = backend.de_rham_coordinates(&b.get(s));
            if c.is_empty() {
                vec![Rational::zero(); r]
            } else {
                c
            }
        })
        .collect();
    let mut coordinates = vec![vec![Rational::zero(); r]; coh.dim()];
    for col in 0..r {
        let v: Vec<Rational> = columns.iter().map(|c| c[col].clone()).collect();
        for (a, x) in coh.project(&v).into_iter().enumerate() {
            coordinates[a][col] = x;
        }
    }
    for (a, row) in coordinates.iter().enumerate() {
        for (col, h) in row.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let w = &de_rham.representatives[col];
            for (pos, z) in coh.representatives()[a].iter().enumerate() {
                if !z.is_zero() {
                    representative.add(basis.get(pos), &w.scaled(&(h * z)));
                }
            }
        }
    }
    let nonzero = coordinates.iter().flatten().any(|x| !x.is_zero());
    ObstructionLevel {
        k,
        lie_dim: coh.dim(),
        de_rham_dim: r,
        coordinates,
        representative,
        nonzero,
    }
}

/// `h_k = (π_H ⊗ π'_H)(g_k)` for `k = 1..n+1`, using the adapted splittings
/// on both tensor factors. The projections kill `δ`-exact and `d`-exact
/// parts, so `h_k` only depends on the class of `g`.
pub fn decompose_obstruction<C: Cartan>(problem: &Problem<C>, g: &Total<C::Key>) -> Vec<ObstructionLevel<C::Key>> {
    let n = problem.n();
    (1..=n + 1)
        .map(|k| {
            let mut c = g.component(k);
            if c.is_zero() {
                c = Bigraded::zero(k, n + 1 - k);
            }
            project_component(problem, &c)
        })
        .collect()
}

/// `c_p(X_1, …, X_{n+1}) = −(−1)^n (−1)^{n(n+1)/2} ω(ζX_1, …, ζX_{n+1})|_p`
/// and its class in `H^{n+1}(𝔤)`.
pub fn point_obstruction<C: Cartan>(problem: &Problem<C>, point: &[Rational]) -> Result<PointClass, MomentError> {
    let n = problem.n();
    let backend = problem.backend();
    if n + 1 > problem.lie_dim() {
        if backend.dim() != point.len() && backend.kind() == crate::cartan::BackendKind::Euclidean {
            return Err(crate::cartan::CartanError::DimensionMismatch {
                expected: backend.dim(),
                got: point.len(),
            }
            .into());
        }
        return Ok(PointClass {
            point: point.to_vec(),
            values: Vec::new(),
            class: Vec::new(),
            nonzero: false,
        });
    }
    let tensor = backend.evaluate_at(problem.omega(), point)?;
    let at: Vec<Vec<Rational>> = problem
        .fields()
        .iter()
        .map(|v| backend.field_at(v, point))
        .collect::<Result<_, _>>()?;
    let sign = -sign_power((n + n * (n + 1) / 2) as i64);
    let values: Vec<Rational> = problem
        .complex()
        .basis(n + 1)
        .sets()
        .iter()
        .map(|set| {
            let vs: Vec<Vec<Rational>> = set.iter().map(|i| at[i].clone()).collect();
            &sign * alternating_value(&tensor, &vs)
        })
        .collect();
    let class = problem.complex().cohomology(n + 1).project(&values);
    let nonzero = class.iter().any(|x| !x.is_zero());
    Ok(PointClass {
        point: point.to_vec(),
        values,
        class,
        nonzero,
    })
}

pub fn obstruction_report<C: Cartan>(
    problem: &Problem<C>,
    g: &Total<C::Key>,
    point: &[Rational],
) -> Result<ObstructionReport<C::Key>, MomentError> {
    Ok(ObstructionReport {
        n: problem.n(),
        levels: decompose_obstruction(problem, g),
        point_class: point_obstruction(problem, point)?,
    })
}
