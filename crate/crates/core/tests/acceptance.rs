//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcomoment::applications::{exact_comoment, multimoment_construct, multimoment_verify, weak_comoment};
use hcomoment::cartan::{Cartan, Euclidean, Invariant};
use hcomoment::catalogue;
use hcomoment::exec::Exec;
use hcomoment::foundation::{binomial, frac, int, IndexSet, Rational};
use hcomoment::liealg::LieAlgebra;
use hcomoment::moment::{gauge_check, point_obstruction, solve_comoment, ComomentMap, Outcome, Problem, SolverOptions};
use hcomoment::random;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn solve<C: Cartan>(p: &Problem<C>) -> Outcome<C::Field, C::Key> {
    solve_comoment(p, &SolverOptions::default())
        .expect("valid problem")
        .outcome
}

fn cartan_nonexistence() -> Result<String, String> {
    let p = catalogue::cartan_so3();
    let Outcome::Obstructed(report) = solve(&p) else {
        return Err("solver did not report nonexistence".into());
    };
    let nz: Vec<bool> = (1..=3).map(|k| report.level(k).unwrap().nonzero).collect();
    ensure(nz == [false, false, true], format!("h nonzero pattern {nz:?}"))?;
    let h3 = report.level(3).unwrap();
    ensure(h3.lie_dim == 1, format!("dim H^3 = {}", h3.lie_dim))?;
    Ok("h1 = h2 = 0, h3 != 0, dim H^3 = 1".into())
}

fn rotations_exist() -> Result<String, String> {
    let p = catalogue::so3_r3_volume();
    let e = p.backend();
    let c = point_obstruction(&p, &e.base_point()).map_err(|e| e.to_string())?;
    ensure(c.values.iter().all(|v| *v == int(0)) && !c.nonzero, "c_origin != 0")?;
    let Outcome::Exists(map) = solve(&p) else {
        return Err("solver failed".into());
    };
    map.verify(&p).map_err(|d| format!("{d:?}"))?;
    let (_, a) = map.f1(2);
    let oracle = &e.term(&[2], &[2, 0, 0], frac(-1, 2)) + &e.term(&[2], &[0, 2, 0], frac(-1, 2));
    ensure(
        e.d(&(&a - &oracle)).is_zero(),
        "f1(e3) differs from the oracle by a non-closed form",
    )?;
    Ok(format!("f1(e3) = {a:?}"))
}

fn symplectic_translations() -> Result<String, String> {
    let p = catalogue::translations_r2();
    let e = p.backend();
    let j = weak_comoment(&p)
        .map_err(|e| e.to_string())?
        .map_err(|o| format!("{o:?}"))?;
    let minus_y = e.term(&[], &[0, 1], int(-1));
    ensure(e.d(&(&j.forms[0] - &minus_y)).is_zero(), "j(e1) != -y + const")?;
    let Outcome::Obstructed(report) = solve(&p) else {
        return Err("solver did not report nonexistence".into());
    };
    ensure(report.level(2).unwrap().nonzero, "h2 = 0")?;
    Ok(format!(
        "j(e1) = {:?}, c_p = {:?}",
        j.forms[0], report.point_class.values
    ))
}

fn exact_case() -> Result<String, String> {
    let p = catalogue::so3_r3_volume();
    let map = exact_comoment(&p, &catalogue::so3_eta()).map_err(|e| e.to_string())?;
    map.verify(&p).map_err(|d| format!("{d:?}"))?;
    let Outcome::Exists(solved) = solve(&p) else {
        return Err("solver failed".into());
    };
    ensure(gauge_check(&p, &map, &solved).equivalent, "not gauge equivalent")?;
    Ok("verified, gauge equivalent to the solver output".into())
}

fn poincare_lemma() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..200 {
        let m = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=m);
        let e = if t % 2 == 0 {
            Euclidean::new(m)
        } else {
            Euclidean::with_base_point((0..m).map(|_| random::rational(&mut rng)).collect())
        };
        let a = random::poly_form(&mut rng, &e, k, 4, 4);
        let back = &e.d(&e.homotopy(&a)) + &e.homotopy(&e.d(&a));
        ensure(back == a, format!("dK + Kd != id on sample {t}: {a:?}"))?;
    }
    Ok("200 samples".into())
}

fn cocycle_property() -> Result<String, String> {
    let mut count = 0;
    for (name, p) in catalogue::euclidean_problems() {
        let g = p.build_g().map_err(|e| format!("{name}: {e}"))?;
        ensure(p.differential(&g).is_zero(), name)?;
        count += 1;
    }
    let p = catalogue::cartan_so3();
    ensure(
        p.differential(&p.build_g().map_err(|e| e.to_string())?).is_zero(),
        "cartan_so3",
    )?;
    count += 1;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..50 {
        let m = rng.gen_range(2..=4);
        let r = rng.gen_range(1..=3);
        let p = random::abelian_volume_problem(&mut rng, m, r);
        let g = p.build_g().map_err(|e| format!("random action {t}: {e}"))?;
        ensure(p.differential(&g).is_zero(), format!("random action {t}"))?;
        count += 1;
    }
    Ok(format!("{count} actions"))
}

fn linfty_euclidean(p: &Problem<Euclidean>, rng: &mut ChaCha8Rng, per_arity: usize) -> Result<usize, String> {
    let e = p.backend();
    let table = p.table();
    let n = p.n();
    let mut count = 0;
    for m in 1..=n + 2 {
        for _ in 0..per_arity {
            let xs = random::observables(
                rng,
                &table,
                m,
                |r| random::euclidean_pair(r, e, p.omega(), 2, 2),
                |r, k| random::poly_form(r, e, k, 2, 2),
            );
            let res = table.linfty_identity_residual(&xs).map_err(|e| format!("{e:?}"))?;
            ensure(res.is_none(), format!("arity {m}: residual {res:?}"))?;
            count += 1;
        }
    }
    Ok(count)
}

fn linfty_invariant(p: &Problem<Invariant>, rng: &mut ChaCha8Rng, per_arity: usize) -> Result<usize, String> {
    let h = p.backend();
    let table = p.table();
    let n = p.n();
    let mut count = 0;
    for m in 1..=n + 2 {
        for _ in 0..per_arity {
            let xs = random::observables(
                rng,
                &table,
                m,
                |r| random::invariant_pair(r, h, p.omega()),
                |r, k| random::alg_form(r, k, h.dim()),
            );
            let res = table.linfty_identity_residual(&xs).map_err(|e| format!("{e:?}"))?;
            ensure(res.is_none(), format!("arity {m}: residual {res:?}"))?;
            count += 1;
        }
    }
    Ok(count)
}

fn linfty_structure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for p in [
        catalogue::translations_r2(),
        catalogue::so3_r3_volume(),
        catalogue::double_rotation_r4(),
        catalogue::so3_cotangent_r6(),
    ] {
        total += linfty_euclidean(&p, &mut rng, 100)?;
    }
    total += linfty_invariant(&catalogue::cartan_so3(), &mut rng, 100)?;
    Ok(format!("{total} tuples over 5 manifolds"))
}

fn round_trip<C: Cartan>(p: &Problem<C>, map: &ComomentMap<C::Field, C::Key>) -> Result<(), String> {
    map.verify(p).map_err(|d| format!("{d:?}"))?;
    let back = ComomentMap::from_potential(p, &map.to_potential()).map_err(|e| e.to_string())?;
    ensure(&back == map, "round trip changed the map")?;
    back.verify(p).map_err(|d| format!("{d:?}"))
}

fn correspondence_round_trip() -> Result<String, String> {
    let mut count = 0;
    for (name, p) in catalogue::euclidean_problems() {
        if let Outcome::Exists(map) = solve(&p) {
            round_trip(&p, &map).map_err(|e| format!("{name}: {e}"))?;
            count += 1;
        }
    }
    let p = catalogue::so3_r3_volume();
    round_trip(
        &p,
        &exact_comoment(&p, &catalogue::so3_eta()).map_err(|e| e.to_string())?,
    )?;
    count += 1;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let p = random::aff1_problem(&mut rng);
        if let Outcome::Exists(map) = solve(&p) {
            round_trip(&p, &map)?;
            count += 1;
        }
    }
    Ok(format!("{count} solutions"))
}

fn unicity() -> Result<String, String> {
    let p = catalogue::so3_r3_volume();
    let Outcome::Exists(base) = solve(&p) else {
        return Err("solver failed".into());
    };
    let mut distinct = 0;
    for seed in 1..=5u64 {
        let opts = SolverOptions {
            column_seed: Some(seed),
            ..Default::default()
        };
        let Outcome::Exists(other) = solve_comoment(&p, &opts).map_err(|e| e.to_string())?.outcome else {
            return Err(format!("seed {seed}: solver failed"));
        };
        let r = gauge_check(&p, &base, &other);
        ensure(r.equivalent, format!("seed {seed}: not equivalent"))?;
        if !r.difference_is_zero {
            distinct += 1;
        }
    }
    let e = p.backend();
    // δ-exact ⊗ constant: a D-cocycle, still equivalent
    let mut comps = base.components().to_vec();
    comps[1].add(IndexSet::from_indices([1, 2]), &e.constant_one());
    let shifted = ComomentMap::from_parts(2, base.fields().to_vec(), comps);
    let r = gauge_check(&p, &base, &shifted);
    ensure(r.equivalent && !r.difference_is_zero, "cocycle perturbation rejected")?;
    let mut comps = base.components().to_vec();
    comps[1].add(IndexSet::from_indices([0, 1]), &e.term(&[], &[0, 1, 0], int(1)));
    let broken = ComomentMap::from_parts(2, base.fields().to_vec(), comps);
    ensure(
        !gauge_check(&p, &base, &broken).equivalent,
        "non-cocycle perturbation accepted",
    )?;
    Ok(format!(
        "5 seeds equivalent ({distinct} with distinct potentials), fault detected"
    ))
}

fn multimoments() -> Result<String, String> {
    let p = catalogue::abelian2_rotation_translation();
    let e = p.backend();
    let mm = multimoment_construct(&p, Exec::default())
        .map_err(|e| e.to_string())?
        .map_err(|f| format!("failed at h{}", f.k))?;
    multimoment_verify(&p, &mm)
        .map_err(|e| e.to_string())?
        .map_err(|d| format!("{d:?}"))?;
    ensure(mm.basis.len() == 1, "dim P != 1")?;
    let scale: Rational = mm.basis[0].coeffs[0].clone();
    let oracle = (&e.term(&[], &[2, 0, 0], frac(-1, 2)) + &e.term(&[], &[0, 2, 0], frac(-1, 2))).scaled(&scale);
    ensure(mm.values[0] == oracle, format!("v(e1^e2) = {:?}", mm.values[0]))?;

    let aff = LieAlgebra::aff1().complex();
    ensure(aff.cohomology(2).dim() == 0, "H^2(aff1) != 0")?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in 0..20 {
        let p = random::aff1_problem(&mut rng);
        let mm = multimoment_construct(&p, Exec::default())
            .map_err(|e| e.to_string())?
            .map_err(|f| format!("aff1 sample {t} failed at h{}", f.k))?;
        multimoment_verify(&p, &mm)
            .map_err(|e| e.to_string())?
            .map_err(|d| format!("aff1 sample {t}: {d:?}"))?;
    }

    let p = catalogue::translations_r3();
    match multimoment_construct(&p, Exec::default()).map_err(|e| e.to_string())? {
        Err(f) if f.k == 3 && f.level.nonzero => {}
        other => return Err(format!("translations: {other:?}")),
    }
    Ok("v(e1^e2) = -(x^2+y^2)/2, 20 aff(1) actions ok, translations fail at h3".into())
}

fn ce_cohomology() -> Result<String, String> {
    let so3 = LieAlgebra::so3().complex().betti_numbers();
    ensure(so3 == [1, 0, 0, 1], format!("so(3): {so3:?}"))?;
    for d in 1..=6 {
        let b = LieAlgebra::abelian(d).complex().betti_numbers();
        let expected: Vec<usize> = (0..=d).map(|k| binomial(d, k)).collect();
        ensure(b == expected, format!("abelian {d}: {b:?}"))?;
    }
    let aff = LieAlgebra::aff1().complex().betti_numbers();
    ensure(aff[2] == 0, format!("aff(1): {aff:?}"))?;
    Ok(format!("so(3) {so3:?}, aff(1) {aff:?}"))
}

fn main() {
    let checks: [(&str, Check, Option<Duration>); 11] = [
        (
            "cartan 3-form has no co-moment",
            cartan_nonexistence,
            Some(Duration::from_secs(1)),
        ),
        (
            "rotations on R^3 have a co-moment",
            rotations_exist,
            Some(Duration::from_secs(5)),
        ),
        (
            "symplectic translations obstruction",
            symplectic_translations,
            Some(Duration::from_secs(1)),
        ),
        ("invariant potential gives a co-moment", exact_case, None),
        ("poincare homotopy dK + Kd = id", poincare_lemma, None),
        ("g is a D-cocycle", cocycle_property, None),
        ("observable L-infinity identities", linfty_structure, None),
        ("potential <-> co-moment round trip", correspondence_round_trip, None),
        ("unicity up to D-cocycles", unicity, None),
        ("multi-moment maps", multimoments, None),
        ("CE cohomology dimensions", ce_cohomology, Some(Duration::from_secs(1))),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{elapsed:.2?}] {detail}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{elapsed:.2?}] {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
