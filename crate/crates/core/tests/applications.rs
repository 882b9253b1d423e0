use hcomoment::applications::{
    covariant_obstruction, covariant_pairing, exact_comoment, iterate_full_comoment, multimoment_construct,
    multimoment_verify, universal_momentum_report, weak_comoment, MultimomentDefect,
};
use hcomoment::cartan::Cartan;
use hcomoment::catalogue;
use hcomoment::exec::Exec;
use hcomoment::foundation::{frac, int};
use hcomoment::moment::{gauge_check, solve_comoment, Outcome, SolverOptions};
use hcomoment::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn multimoment_abelian_two() {
    let p = catalogue::abelian2_rotation_translation();
    let e = p.backend();
    let mm = multimoment_construct(&p, Exec::default()).unwrap().unwrap();
    assert_eq!(mm.basis.len(), 1);
    let expected = &e.term(&[], &[2, 0, 0], frac(-1, 2)) + &e.term(&[], &[0, 2, 0], frac(-1, 2));
    // basis vector of P is a multiple of e1∧e2
    let scale = mm.basis[0].coeffs[0].clone();
    assert_eq!(mm.values[0], expected.scaled(&scale));
    multimoment_verify(&p, &mm).unwrap().unwrap();

    let mut shifted = mm.clone();
    shifted.values[0] += &e.constant_one();
    multimoment_verify(&p, &shifted).unwrap().unwrap();

    let mut bad = mm.clone();
    bad.values[0] += &e.term(&[], &[0, 0, 1], int(1));
    assert!(matches!(
        multimoment_verify(&p, &bad).unwrap(),
        Err(MultimomentDefect::ConditionI { index: 0, .. })
    ));
}

#[test]
fn multimoment_so3_is_vacuous() {
    let p = catalogue::so3_r3_volume();
    let mm = multimoment_construct(&p, Exec::default()).unwrap().unwrap();
    assert!(mm.basis.is_empty());
    // g_3 = 0 here (the rotation fields are pointwise dependent)
    assert_eq!(mm.top.bidegree(), (2, 0));
    multimoment_verify(&p, &mm).unwrap().unwrap();
}

#[test]
fn multimoment_translations_fail_at_the_top() {
    let p = catalogue::translations_r3();
    let f = multimoment_construct(&p, Exec::default()).unwrap().unwrap_err();
    assert_eq!(f.k, 3);
    assert!(f.level.nonzero);
}

#[test]
fn classical_equivariant_moment_map() {
    let p = catalogue::so3_cotangent_r6();
    let mm = multimoment_construct(&p, Exec::default()).unwrap().unwrap();
    assert_eq!(mm.basis.len(), 3);
    multimoment_verify(&p, &mm).unwrap().unwrap();
}

#[test]
fn aff1_family_always_admits_multimoments() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let p = random::aff1_problem(&mut rng);
        let mm = multimoment_construct(&p, Exec::default()).unwrap().unwrap();
        multimoment_verify(&p, &mm).unwrap().unwrap();
    }
}

#[test]
fn iteration_agrees_with_solver_up_to_gauge() {
    for (name, p) in catalogue::euclidean_problems() {
        let it = iterate_full_comoment(&p, Exec::default()).unwrap();
        let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
        match (it, r.outcome) {
            (Ok(a), Outcome::Exists(b)) => {
                a.verify(&p).unwrap_or_else(|e| panic!("{name}: {e:?}"));
                assert!(gauge_check(&p, &a, &b).equivalent, "{name}");
            }
            (Err(_), Outcome::Obstructed(_)) => {}
            (a, b) => panic!("{name}: {a:?} vs {b:?}"),
        }
    }
    let p = catalogue::cartan_so3();
    assert_eq!(iterate_full_comoment(&p, Exec::default()).unwrap().unwrap_err().k, 3);
}

#[test]
fn zero_action_gives_zero_comoment() {
    let p = catalogue::so3_r3_volume();
    let z = p.with_fields(vec![p.backend().field_zero(); 3]).unwrap();
    let map = iterate_full_comoment(&z, Exec::default()).unwrap().unwrap();
    assert!(map.components().iter().all(|c| c.is_zero()));
    map.verify(&z).unwrap();
    let exact = exact_comoment(&z, &catalogue::so3_eta()).unwrap();
    assert!(exact.components().iter().all(|c| c.is_zero()));
}

#[test]
fn exact_case_is_gauge_equivalent_to_solver() {
    let p = catalogue::so3_r3_volume();
    let eta = catalogue::so3_eta();
    let a = exact_comoment(&p, &eta).unwrap();
    let Outcome::Exists(b) = solve_comoment(&p, &SolverOptions::default()).unwrap().outcome else {
        panic!("solver failed");
    };
    assert!(gauge_check(&p, &a, &b).equivalent);
    let report = universal_momentum_report(p.backend(), &eta, p.fields()).unwrap();
    let (_, f1) = a.f1(2);
    assert_eq!(report[2].j, f1);
}

#[test]
fn universal_report_flags_non_invariant_fields() {
    let p = catalogue::so3_r3_volume();
    let e = p.backend();
    let eta = catalogue::so3_eta();
    let shear = hcomoment::cartan::PolyVectorField::new(vec![
        hcomoment::cartan::Poly::monomial(vec![0, 2, 0], int(1)),
        hcomoment::cartan::Poly::zero(3),
        hcomoment::cartan::Poly::zero(3),
    ]);
    let report = universal_momentum_report(e, &eta, &[shear, e.field_zero()]).unwrap();
    assert!(!report[0].preserves_eta);
    assert!(report[1].preserves_eta && report[1].j.is_zero());
}

#[test]
fn covariant_pairing_sign() {
    let p = catalogue::so3_r3_volume();
    let e = p.backend();
    let Outcome::Exists(map) = solve_comoment(&p, &SolverOptions::default()).unwrap().outcome else {
        panic!("solver failed");
    };
    for i in 0..3 {
        let j = covariant_pairing(&map, i);
        assert_eq!(e.d(&j), e.contract(&p.fields()[i], p.omega()).unwrap());
    }
}

#[test]
fn weak_comoments_on_catalogue() {
    for (name, p) in catalogue::euclidean_problems() {
        let e = p.backend();
        let j = weak_comoment(&p).unwrap().unwrap();
        for (i, a) in j.forms.iter().enumerate() {
            let iw = e.contract(&p.fields()[i], p.omega()).unwrap();
            assert!((&e.d(a) + &iw).is_zero(), "{name}");
        }
        let c = covariant_obstruction(&p, &j).unwrap();
        if p.n() >= 2 {
            assert!(c.exists, "{name}");
        }
        let g = p.build_g().unwrap();
        let h2 = hcomoment::moment::decompose_obstruction(&p, &g);
        assert_eq!(c.h2.coordinates, h2[1].coordinates, "{name}");
    }
    let p = catalogue::so3_r3_volume();
    let j = weak_comoment(&p).unwrap().unwrap();
    assert!(!j.forms[2].is_zero());
}
