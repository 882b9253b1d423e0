//! Named example problems.

use crate::cartan::{Euclidean, Invariant, Poly, PolyForm, PolyVectorField};
use crate::foundation::{frac, int, Rational, RationalMatrix};
use crate::liealg::LieAlgebra;
use crate::moment::Problem;

fn x(m: usize, i: usize) -> Poly {
    Poly::var(m, i)
}

/// Rotations `z∂y − y∂z`, `x∂z − z∂x`, `y∂x − x∂y`.
pub fn rotation_fields() -> Vec<PolyVectorField> {
    let z = Poly::zero(3);
    vec![
        PolyVectorField::new(vec![z.clone(), x(3, 2), -&x(3, 1)]),
        PolyVectorField::new(vec![-&x(3, 2), z.clone(), x(3, 0)]),
        PolyVectorField::new(vec![x(3, 1), -&x(3, 0), z]),
    ]
}

/// `so(3)` acting by rotations on `(ℝ³, dx∧dy∧dz)`, `n = 2`.
pub fn so3_r3_volume() -> Problem<Euclidean> {
    let e = Euclidean::new(3);
    let vol = e.volume();
    Problem::new(e, &LieAlgebra::so3(), vol, 2, rotation_fields()).expect("catalogue")
}

/// The rotation-invariant potential `(x dy∧dz + y dz∧dx + z dx∧dy)/3` of the
/// volume form.
pub fn so3_eta() -> PolyForm {
    let e = Euclidean::new(3);
    let t = frac(1, 3);
    let mut eta = e.term(&[1, 2], &[1, 0, 0], t.clone());
    eta += &e.term(&[2, 0], &[0, 1, 0], t.clone());
    eta += &e.term(&[0, 1], &[0, 0, 1], t);
    eta
}

/// Translations `∂x, ∂y` on `(ℝ², dx∧dy)`, `n = 1`.
pub fn translations_r2() -> Problem<Euclidean> {
    let e = Euclidean::new(2);
    let vol = e.volume();
    let fields = (0..2).map(|i| PolyVectorField::coordinate(2, i)).collect();
    Problem::new(e, &LieAlgebra::abelian(2), vol, 1, fields).expect("catalogue")
}

/// Translations `∂x, ∂y, ∂z` on `(ℝ³, vol)`, `n = 2`.
pub fn translations_r3() -> Problem<Euclidean> {
    let e = Euclidean::new(3);
    let vol = e.volume();
    let fields = (0..3).map(|i| PolyVectorField::coordinate(3, i)).collect();
    Problem::new(e, &LieAlgebra::abelian(3), vol, 2, fields).expect("catalogue")
}

/// Abelian `span(e₁, e₂)` acting by `∂z` and `x∂y − y∂x` on `(ℝ³, vol)`.
pub fn abelian2_rotation_translation() -> Problem<Euclidean> {
    let e = Euclidean::new(3);
    let vol = e.volume();
    let z = Poly::zero(3);
    let fields = vec![
        PolyVectorField::coordinate(3, 2),
        PolyVectorField::new(vec![-&x(3, 1), x(3, 0), z]),
    ];
    Problem::new(e, &LieAlgebra::abelian(2), vol, 2, fields).expect("catalogue")
}

/// `so(3)` on its own invariant model with the Cartan 3-form, `ζ = id`.
pub fn cartan_so3() -> Problem<Invariant> {
    let g = LieAlgebra::so3();
    let h = Invariant::new(&g);
    let omega = h.from_dense(3, &g.cartan_three_cocycle().coeffs);
    let fields = (0..3).map(|i| g.basis_vector(i)).collect();
    Problem::new(h, &g, omega, 2, fields).expect("catalogue")
}

/// The linear field `x ↦ A x`.
pub fn linear_field(a: &RationalMatrix) -> PolyVectorField {
    let rows: Vec<Vec<Rational>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
    PolyVectorField::linear(&rows)
}

/// `aff(1)` acting on `(ℝ³, vol)` through the representation
/// `ρ(e₁) = diag(a, a−1, 1−2a)`, `ρ(e₂) = E₁₂`, conjugated by `conj`, with
/// `ζ(X) = x ↦ −ρ(X) x`. Trace-free, hence volume preserving.
pub fn aff1_family(a: &Rational, conj: &RationalMatrix) -> Problem<Euclidean> {
    let one = int(1);
    let mut r1 = RationalMatrix::zeros(3, 3);
    r1.set(0, 0, a.clone());
    r1.set(1, 1, a - &one);
    r1.set(2, 2, &one - a * int(2));
    let mut r2 = RationalMatrix::zeros(3, 3);
    r2.set(0, 1, one);
    let inv = conj.inverse().expect("invertible conjugator");
    let fields = [r1, r2]
        .iter()
        .map(|r| {
            let m = conj.mul(&r.mul(&inv).expect("3x3")).expect("3x3");
            let mut neg = RationalMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    neg.set(i, j, -m.get(i, j).clone());
                }
            }
            linear_field(&neg)
        })
        .collect();
    let e = Euclidean::new(3);
    let vol = e.volume();
    Problem::new(e, &LieAlgebra::aff1(), vol, 2, fields).expect("catalogue")
}

/// `aff(1)` by `−x∂x + z∂z` and `−y∂x` on `(ℝ³, vol)`.
pub fn aff1_r3() -> Problem<Euclidean> {
    aff1_family(&int(1), &RationalMatrix::identity(3))
}

/// Two commuting plane rotations on `(ℝ⁴, vol)`, `n = 3`.
pub fn double_rotation_r4() -> Problem<Euclidean> {
    let e = Euclidean::new(4);
    let vol = e.volume();
    let z = Poly::zero(4);
    let fields = vec![
        PolyVectorField::new(vec![x(4, 1), -&x(4, 0), z.clone(), z.clone()]),
        PolyVectorField::new(vec![z.clone(), z, x(4, 3), -&x(4, 2)]),
    ];
    Problem::new(e, &LieAlgebra::abelian(2), vol, 3, fields).expect("catalogue")
}

/// Rotations lifted to `T*ℝ³ = ℝ⁶` with `ω = Σ dq_i ∧ dp_i`, `n = 1`.
pub fn so3_cotangent_r6() -> Problem<Euclidean> {
    let e = Euclidean::new(6);
    let mut omega = e.term(&[0, 3], &[0; 6], int(1));
    omega += &e.term(&[1, 4], &[0; 6], int(1));
    omega += &e.term(&[2, 5], &[0; 6], int(1));
    let z = Poly::zero(6);
    let rot = |a: usize, b: usize, o: usize| {
        // x_b ∂_a − x_a ∂_b on the block starting at o
        let mut c = vec![z.clone(); 6];
        c[o + a] = x(6, o + b);
        c[o + b] = -&x(6, o + a);
        c
    };
    let fields = [(1, 2), (2, 0), (0, 1)]
        .iter()
        .map(|&(a, b)| {
            let q = rot(a, b, 0);
            let p = rot(a, b, 3);
            PolyVectorField::new((0..6).map(|i| &q[i] + &p[i]).collect())
        })
        .collect();
    Problem::new(e, &LieAlgebra::so3(), omega, 1, fields).expect("catalogue")
}

/// Every Euclidean catalogue problem, by name.
pub fn euclidean_problems() -> Vec<(&'static str, Problem<Euclidean>)> {
    vec![
        ("so3_r3_volume", so3_r3_volume()),
        ("translations_r2", translations_r2()),
        ("translations_r3", translations_r3()),
        ("abelian2_rotation_translation", abelian2_rotation_translation()),
        ("aff1_r3", aff1_r3()),
        ("double_rotation_r4", double_rotation_r4()),
        ("so3_cotangent_r6", so3_cotangent_r6()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_actions_are_valid() {
        for (name, p) in euclidean_problems() {
            assert!(p.validate_action().is_ok(), "{name}");
            assert!(p.build_g().is_ok(), "{name}");
        }
        assert!(cartan_so3().validate_action().is_ok());
    }
}
