use hcomoment::cartan::{Cartan, Euclidean, Potential};
use hcomoment::catalogue;
use hcomoment::exec::Exec;
use hcomoment::foundation::{frac, int, IndexSet};
use hcomoment::moment::{gauge_check, solve_comoment, staircase, ComomentMap, Outcome, SolverOptions};

fn exists<F: std::fmt::Debug, K: Ord + std::fmt::Debug>(o: Outcome<F, K>) -> ComomentMap<F, K> {
    match o {
        Outcome::Exists(m) => m,
        other => panic!("expected a solution, got {other:?}"),
    }
}

#[test]
fn rotations_on_r3_admit_a_comoment() {
    let p = catalogue::so3_r3_volume();
    let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
    let map = exists(r.outcome);
    map.verify(&p).unwrap();
    // π_Ω f_1(e_3) + (x² + y²)/2 dz is closed
    let e = p.backend();
    let (_, a) = map.f1(2);
    let oracle = &e.term(&[2], &[2, 0, 0], frac(-1, 2)) + &e.term(&[2], &[0, 2, 0], frac(-1, 2));
    assert!(e.d(&(&a - &oracle)).is_zero());
}

#[test]
fn cartan_three_form_is_obstructed() {
    let p = catalogue::cartan_so3();
    let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
    let Outcome::Obstructed(report) = r.outcome else {
        panic!("expected obstruction");
    };
    assert!(!report.level(1).unwrap().nonzero);
    assert!(!report.level(2).unwrap().nonzero);
    let h3 = report.level(3).unwrap();
    assert!(h3.nonzero);
    assert_eq!(h3.lie_dim, 1);
    assert_eq!(report.first_nonzero(), Some(3));
}

#[test]
fn translations_on_plane_are_obstructed() {
    let p = catalogue::translations_r2();
    let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
    let Outcome::Obstructed(report) = r.outcome else {
        panic!("expected obstruction");
    };
    assert!(!report.level(1).unwrap().nonzero);
    assert!(report.level(2).unwrap().nonzero);
    assert_eq!(report.point_class.values, vec![int(-1)]);
    assert!(report.point_class.nonzero);
}

#[test]
fn translations_in_space_are_obstructed_at_the_top() {
    let p = catalogue::translations_r3();
    let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
    let Outcome::Obstructed(report) = r.outcome else {
        panic!("expected obstruction");
    };
    assert_eq!(report.first_nonzero(), Some(3));
}

#[test]
fn catalogue_solutions_verify_and_round_trip() {
    for (name, p) in catalogue::euclidean_problems() {
        let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
        if let Outcome::Exists(map) = r.outcome {
            map.verify(&p).unwrap_or_else(|e| panic!("{name}: {e:?}"));
            let back = ComomentMap::from_potential(&p, &map.to_potential()).unwrap();
            assert_eq!(back, map, "{name}");
        }
    }
}

#[test]
fn expected_outcomes() {
    let expect = [
        ("so3_r3_volume", true),
        ("translations_r2", false),
        ("translations_r3", false),
        ("abelian2_rotation_translation", true),
        ("aff1_r3", true),
        ("double_rotation_r4", true),
        ("so3_cotangent_r6", true),
    ];
    for ((name, p), (ename, ok)) in catalogue::euclidean_problems().into_iter().zip(expect) {
        assert_eq!(name, ename);
        let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
        assert_eq!(matches!(r.outcome, Outcome::Exists(_)), ok, "{name}");
    }
}

#[test]
fn different_seeds_are_gauge_equivalent() {
    let p = catalogue::so3_r3_volume();
    let a = exists(solve_comoment(&p, &SolverOptions::default()).unwrap().outcome);
    let b = exists(
        solve_comoment(
            &p,
            &SolverOptions {
                column_seed: Some(7),
                ..Default::default()
            },
        )
        .unwrap()
        .outcome,
    );
    let report = gauge_check(&p, &a, &b);
    assert!(report.equivalent);

    let mut comps = b.components().to_vec();
    let e: &Euclidean = p.backend();
    comps[1].add(IndexSet::from_indices([0, 1]), &e.term(&[], &[0, 1, 0], int(1)));
    let bad = ComomentMap::from_parts(2, b.fields().to_vec(), comps);
    assert!(!gauge_check(&p, &a, &bad).equivalent);
    assert!(bad.verify(&p).is_err());
}

#[test]
fn parallel_and_sequential_agree() {
    for (_, p) in catalogue::euclidean_problems() {
        let a = solve_comoment(
            &p,
            &SolverOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let b = solve_comoment(
            &p,
            &SolverOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn staircase_matches_solver_outcome() {
    for (name, p) in catalogue::euclidean_problems() {
        let g = p.build_g().unwrap();
        let s = staircase(&p, &g, 1, Exec::default()).unwrap();
        let r = solve_comoment(&p, &SolverOptions::default()).unwrap();
        assert_eq!(s.is_ok(), matches!(r.outcome, Outcome::Exists(_)), "{name}");
        if let Ok(res) = s {
            assert_eq!(p.differential(&res.potential), g, "{name}");
        }
    }
    let p = catalogue::cartan_so3();
    let g = p.build_g().unwrap();
    assert_eq!(staircase(&p, &g, 1, Exec::default()).unwrap().unwrap_err().k, 3);
}

#[test]
fn eta_is_a_potential_of_the_volume() {
    let p = catalogue::so3_r3_volume();
    let e = p.backend();
    let eta = catalogue::so3_eta();
    assert_eq!(e.d(&eta), e.volume());
    for v in p.fields() {
        assert!(e.lie_derivative(v, &eta).is_zero());
    }
    assert!(matches!(e.find_potential(&e.volume()), Ok(Potential::Exact(_))));
}
