use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcomoment::applications::{MultiMomentMap, WeakComoment};
use hcomoment::cartan::{Euclidean, Form, Invariant};
use hcomoment::foundation::{subsets, Rational};
use hcomoment::liealg::{Chain, LieAlgebra};
use hcomoment::moment::{Bigraded, ComomentMap};
use hcomoment::random;

use hcomoment_cli::artifact::{
    canonical_json, decode_comoment, decode_multimoment, decode_weak, encode_comoment, encode_multimoment, encode_weak,
    parse_json, ComomentArtifact, MultimomentArtifact, WeakArtifact,
};
use hcomoment_cli::problem::{load, LoadError};
use hcomoment_cli::terms::Backend;

const INSTANCES: u64 = 200;

fn bigraded<K: Ord + Clone>(
    r: &mut ChaCha8Rng,
    lie_dim: usize,
    i: usize,
    j: usize,
    mut form: impl FnMut(&mut ChaCha8Rng) -> Form<K>,
) -> Bigraded<K> {
    let mut b = Bigraded::zero(i, j);
    if i <= lie_dim {
        for set in subsets(lie_dim, i) {
            if r.gen_bool(0.6) {
                b.add(set, &form(r));
            }
        }
    }
    b
}

fn random_comoment(
    r: &mut ChaCha8Rng,
) -> (
    Euclidean,
    ComomentMap<hcomoment::cartan::PolyVectorField, hcomoment::cartan::PolyTerm>,
) {
    let n = r.gen_range(1..=3);
    let m = r.gen_range(n..=4);
    let lie_dim = r.gen_range(1..=4);
    let e = if r.gen_bool(0.5) {
        Euclidean::new(m)
    } else {
        Euclidean::with_base_point((0..m).map(|_| random::rational(r)).collect())
    };
    let fields = (0..lie_dim).map(|_| random::poly_field(r, m, 2, 3)).collect();
    let comps = (1..=n)
        .map(|k| bigraded(r, lie_dim, k, n - k, |r| random::poly_form(r, &e, n - k, 3, 3)))
        .collect();
    (e, ComomentMap::from_parts(n, fields, comps))
}

fn random_invariant_comoment(
    r: &mut ChaCha8Rng,
) -> (Invariant, ComomentMap<Vec<Rational>, hcomoment::foundation::IndexSet>) {
    let g = if r.gen_bool(0.5) {
        LieAlgebra::so3()
    } else {
        LieAlgebra::abelian(4)
    };
    let h = Invariant::new(&g);
    let dim = g.dim();
    let n = r.gen_range(1..dim);
    let lie_dim = r.gen_range(1..=3);
    let fields = (0..lie_dim).map(|_| random::alg_vector(r, dim)).collect();
    let comps = (1..=n)
        .map(|k| bigraded(r, lie_dim, k, n - k, |r| random::alg_form(r, n - k, dim)))
        .collect();
    (h, ComomentMap::from_parts(n, fields, comps))
}

/// `parse(print(x)) = x`, and printing again is byte-identical.
fn check_comoment<C: Backend>(backend: &C, map: &ComomentMap<C::Field, C::Key>) {
    let text = canonical_json(&encode_comoment(backend, map));
    let art: ComomentArtifact = parse_json(&text).expect("parses");
    let back = decode_comoment(backend, &art).expect("decodes");
    assert_eq!(&back, map);
    assert_eq!(canonical_json(&encode_comoment(backend, &back)), text);
}

#[test]
fn comoment_artifacts_round_trip() {
    for seed in 0..INSTANCES {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        if seed % 2 == 0 {
            let (e, map) = random_comoment(&mut r);
            check_comoment(&e, &map);
        } else {
            let (h, map) = random_invariant_comoment(&mut r);
            check_comoment(&h, &map);
        }
    }
}

#[test]
fn weak_artifacts_round_trip() {
    for seed in 0..INSTANCES {
        let mut r = ChaCha8Rng::seed_from_u64(1000 + seed);
        let m = r.gen_range(1..=4);
        let n = r.gen_range(1..=m);
        let e = Euclidean::new(m);
        let forms = (0..r.gen_range(1..=4))
            .map(|_| {
                if r.gen_bool(0.2) {
                    Form::zero(n - 1)
                } else {
                    random::poly_form(&mut r, &e, n - 1, 3, 3)
                }
            })
            .collect();
        let w = WeakComoment { forms };
        let text = canonical_json(&encode_weak(&e, n, &w));
        let art: WeakArtifact = parse_json(&text).expect("parses");
        let (n2, back) = decode_weak(&e, &art).expect("decodes");
        assert_eq!(n2, n);
        assert_eq!(back, w);
        assert_eq!(canonical_json(&encode_weak(&e, n, &back)), text);
    }
}

#[test]
fn multimoment_artifacts_round_trip() {
    for seed in 0..INSTANCES {
        let mut r = ChaCha8Rng::seed_from_u64(5000 + seed);
        let lie_dim = r.gen_range(1..=4);
        let n = r.gen_range(1..=lie_dim);
        let m = r.gen_range(1..=3);
        let e = Euclidean::new(m);
        let len = subsets(lie_dim, n).len();
        let count = r.gen_range(0..=len);
        let basis: Vec<Chain> = (0..count)
            .map(|_| Chain {
                degree: n,
                coeffs: (0..len)
                    .map(|_| {
                        if r.gen_bool(0.5) {
                            random::rational(&mut r)
                        } else {
                            Rational::from_integer(0.into())
                        }
                    })
                    .collect(),
            })
            .collect();
        let values = (0..count).map(|_| random::poly_form(&mut r, &e, 0, 3, 3)).collect();
        let top = bigraded(&mut r, lie_dim, n, 0, |r| random::poly_form(r, &e, 0, 3, 3));
        let mm = MultiMomentMap { n, basis, values, top };
        let text = canonical_json(&encode_multimoment(&e, lie_dim, &mm));
        let art: MultimomentArtifact = parse_json(&text).expect("parses");
        let back = decode_multimoment(&e, &art).expect("decodes");
        assert_eq!(back, mm);
        assert_eq!(canonical_json(&encode_multimoment(&e, lie_dim, &back)), text);
    }
}

#[test]
fn artifact_of_the_wrong_backend_is_rejected() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let (e, map) = random_comoment(&mut r);
    let text = canonical_json(&encode_comoment(&e, &map));
    let art: ComomentArtifact = parse_json(&text).unwrap();
    let h = Invariant::new(&LieAlgebra::so3());
    let err = decode_comoment(&h, &art).unwrap_err();
    assert_eq!(err.path, "backend");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let text = "n = 2\n[lie_algebra]\ndim = = 3\n";
    match load(text) {
        Err(LoadError::Parse { line, column, .. }) => {
            assert_eq!(line, 3);
            assert!(column >= 5, "column {column}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let text = "n = -1\n";
    assert!(matches!(load(text), Err(LoadError::Parse { line: 1, .. })));
}

#[test]
fn semantic_errors_name_the_key_path() {
    let base = |action: &str| {
        format!(
            "n = 1\n[lie_algebra]\ndim = 1\n[backend]\nkind = \"euclidean\"\ndim = 2\n\
             [[omega]]\nindices = [1, 2]\nexponents = [0, 0]\ncoeff = \"1\"\n{action}"
        )
    };
    let cases = [
        ("[[action]]\ncomponents = [[]]\n", "action[0].components"),
        (
            "[[action]]\ncomponents = [[{ exponents = [1], coeff = \"1\" }], []]\n",
            "action[0].components[0][0].exponents",
        ),
        (
            "[[action]]\ncomponents = [[{ exponents = [1, 0], coeff = \"x\" }], []]\n",
            "action[0].components[0][0].coeff",
        ),
        ("", "action"),
    ];
    for (action, path) in cases {
        match load(&base(action)) {
            Err(LoadError::Semantic(e)) => assert_eq!(e.path, path, "{e}"),
            other => panic!("expected a semantic error at {path}, got {other:?}"),
        }
    }
    let bad_index = "n = 1\n[lie_algebra]\ndim = 2\nstructure = [{ i = 1, j = 3, k = 1, c = \"1\" }]\n\
                     [backend]\nkind = \"euclidean\"\ndim = 2\n";
    match load(bad_index) {
        Err(LoadError::Semantic(e)) => assert_eq!(e.path, "lie_algebra.structure[0].j"),
        other => panic!("{other:?}"),
    }
    let bad_kind = "n = 1\n[lie_algebra]\ndim = 1\n[backend]\nkind = \"torus\"\ndim = 2\n";
    match load(bad_kind) {
        Err(LoadError::Semantic(e)) => assert_eq!(e.path, "backend.kind"),
        other => panic!("{other:?}"),
    }
}
