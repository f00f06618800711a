use houghton::config::EndoConfig;
use houghton::endo::DEFAULT_MAX_SUPPORT;
use houghton::{
    element_to_word, AbelianizationMatrix, Endomorphism, Error, EventualTranslation,
    FinitePermutation, KernelClass, Limits, Point, Word,
};
use proptest::prelude::*;

fn pt(r: usize, p: i64) -> Point {
    Point::new(r, p)
}

fn read(name: &str) -> String {
    let path = format!("{}/../../configs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn config(name: &str) -> Endomorphism {
    EndoConfig::parse(&read(name)).unwrap().build().unwrap()
}

fn elem(w: &str, n: usize) -> EventualTranslation {
    Word::parse(w).unwrap().evaluate(n).unwrap()
}

fn gen(n: usize, i: usize) -> EventualTranslation {
    EventualTranslation::generator(n, i).unwrap()
}

#[test]
fn builds() {
    for name in ["identity", "square", "worked_example", "collapse", "h2_identity"] {
        let phi = config(name);
        assert!(phi.report().evaluated > 0, "{name}");
    }
}

#[test]
fn broken_config_fails_a_relation() {
    let e = EndoConfig::parse(&read("broken")).unwrap().build().unwrap_err();
    match e {
        Error::RelationFailure { relation, witness } => {
            assert_eq!(relation, "α^{g2⁻¹} = α^{g3⁻¹}");
            assert_eq!(witness, pt(1, 2));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn apply_examples() {
    let id = Endomorphism::identity(3).unwrap();
    let g = elem("g2 g3^-1 g2", 3);
    assert_eq!(id.apply(&g).unwrap(), g);
    let sq = Endomorphism::power_map(3, 2).unwrap();
    assert_eq!(sq.apply(&gen(3, 2)).unwrap(), gen(3, 2).pow(2));
    let phi = config("worked_example");
    let a = EventualTranslation::alpha(3);
    let want = FinitePermutation::parse_cycles(3, "((2,1)(1,4))((1,2)(1,3))").unwrap();
    assert_eq!(phi.apply(&a).unwrap(), EventualTranslation::from_fsym(&want));
    assert_eq!(phi.alpha_image().to_fsym().unwrap(), want);
}

#[test]
fn worked_example_images() {
    let phi = config("worked_example");
    let f2 = FinitePermutation::parse_cycles(3, "((1,1)(1,2)(2,1))").unwrap();
    let want = gen(3, 2).pow(2).compose(&EventualTranslation::from_fsym(&f2)).unwrap();
    assert_eq!(phi.image(2), &want);
}

#[test]
fn iterate_examples() {
    let phi = config("worked_example");
    assert_eq!(phi.iterate(2, 0).unwrap(), gen(3, 2));
    let sq = Endomorphism::power_map(3, 2).unwrap();
    assert_eq!(sq.iterate(2, 3).unwrap(), gen(3, 2).pow(8));
    assert_eq!(phi.iterate(2, 2).unwrap().pi().to_vec(), vec![-4, 4, 0]);
    for k in 0..4 {
        let next = phi.iterate(3, k + 1).unwrap();
        assert_eq!(next, phi.apply(&phi.iterate(3, k).unwrap()).unwrap());
    }
}

#[test]
fn iterate_respects_support_cap() {
    let phi = config("worked_example").with_limits(Limits { max_support: 40 });
    let e = phi.iterate(2, 8).unwrap_err();
    assert!(matches!(e, Error::ResourceLimit { cap: 40, .. }));
    assert_eq!(Limits::default().max_support, DEFAULT_MAX_SUPPORT);
}

#[test]
fn classification_examples() {
    assert_eq!(
        Endomorphism::identity(3).unwrap().classify_kernel().unwrap(),
        KernelClass::MonoCandidate
    );
    let g2 = gen(3, 2);
    let fold = Endomorphism::from_fn(3, |_| Ok(g2.clone())).unwrap();
    assert_eq!(fold.classify_kernel().unwrap(), KernelClass::ContainsFSym);
    assert_eq!(
        config("worked_example").classify_kernel().unwrap(),
        KernelClass::MonoCandidate
    );
    assert_eq!(KernelClass::ContainsFAlt.to_string(), "kernel-contains-FAlt");
}

#[test]
fn matrix_examples() {
    let a = Endomorphism::identity(4).unwrap().abelianization_matrix();
    assert_eq!(a, AbelianizationMatrix::identity(3));
    assert!((a.spectral_radius() - 1.0).abs() < 1e-6);
    for l in 2..=4 {
        let a = Endomorphism::power_map(3, l).unwrap().abelianization_matrix();
        assert_eq!(a, AbelianizationMatrix::identity(2).scale(l));
        assert!((a.spectral_radius() - l as f64).abs() < 1e-6);
    }
    let a = config("collapse").abelianization_matrix();
    assert_eq!(a.to_string(), "[[2,2],[0,0]]");
    assert!((a.spectral_radius() - 2.0).abs() < 1e-6);
    assert!((a.spectral_radius_in::<f32>() - 2.0).abs() < 1e-4);
    assert!((a.trace_root(20) - 2.0).abs() < 1e-6);
}

#[test]
fn spectral_radius_of_rotation() {
    // eigenvalues ±i: modulus one, trace of odd powers vanishes
    let a = AbelianizationMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]);
    assert!((a.spectral_radius() - 1.0).abs() < 1e-6);
    assert!(AbelianizationMatrix::from_rows(vec![vec![0, 1], vec![0, 0]]).is_nilpotent());
}

#[test]
fn functoriality_of_matrices() {
    for phi in [config("worked_example"), config("collapse"), config("square")] {
        let a = phi.abelianization_matrix();
        for k in 0..=6 {
            assert_eq!(phi.power(k).unwrap().abelianization_matrix(), a.pow(k));
        }
    }
    let phi = config("worked_example");
    let psi = Endomorphism::ray_permutation(&[2, 1, 3]).unwrap();
    assert_eq!(
        phi.compose(&psi).unwrap().abelianization_matrix(),
        phi.abelianization_matrix().mul(&psi.abelianization_matrix())
    );
}

#[test]
fn automorphism_constructors() {
    let id = Endomorphism::identity(3).unwrap();
    let inner = Endomorphism::inner(&EventualTranslation::identity(3)).unwrap();
    let perm = Endomorphism::ray_permutation(&[1, 2, 3]).unwrap();
    for i in 2..=3 {
        assert_eq!(inner.image(i), id.image(i));
        assert_eq!(perm.image(i), id.image(i));
    }
    let swap = Endomorphism::ray_permutation(&[1, 3, 2]).unwrap();
    assert_eq!(swap.image(2), &gen(3, 3));
    assert_eq!(swap.image(3), &gen(3, 2));
    let rot = Endomorphism::ray_permutation(&[2, 3, 1]).unwrap();
    assert_eq!(rot.image(2), &gen(3, 2).inverse().compose(&gen(3, 3)).unwrap());
    assert_eq!(rot.image(3), &gen(3, 2).inverse());
    assert!(Endomorphism::ray_permutation(&[1, 1, 2]).is_err());
    let h = elem("g2 g3^-1", 3);
    let inner = Endomorphism::inner(&h).unwrap();
    assert_eq!(inner.image(2), &gen(3, 2).conjugate(&h).unwrap());
}

#[test]
fn h2_endomorphisms() {
    let phi = config("h2_identity");
    assert_eq!(phi.n(), 2);
    assert_eq!(phi.alpha_image(), &EventualTranslation::alpha(2));
    let swap = Endomorphism::inner(&gen(2, 2)).unwrap();
    assert_eq!(swap.classify_kernel().unwrap(), KernelClass::MonoCandidate);
}

#[test]
fn config_schema() {
    let c = EndoConfig::parse(&read("worked_example")).unwrap();
    assert_eq!(c.n, 3);
    assert_eq!(c.images["g2"].word.as_deref(), Some("g2^2"));
    assert_eq!(c.images["g3"].cycles.as_deref(), Some("((1,1)(1,2)(2,1)(3,2))"));
    assert_eq!(EndoConfig::parse(&c.to_json()).unwrap(), c);
    match EndoConfig::parse("{\"n\": 3,\n \"images\": {\"g2\": {\"wrod\": \"g2\"}}}") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(EndoConfig::parse("{\"n\": 3"), Err(Error::Parse { .. })));
    let bad_key = EndoConfig::parse(r#"{"n": 3, "images": {"g4": {"word": "g2"}}}"#).unwrap();
    assert!(matches!(bad_key.images(), Err(Error::Parse { .. })));
    let missing = EndoConfig::parse(r#"{"n": 3, "images": {"g2": {"word": "g2"}}}"#).unwrap();
    assert!(matches!(missing.images(), Err(Error::Precondition(_))));
    let no_alpha = EndoConfig::parse(r#"{"n": 2, "images": {"g2": {"word": "g2"}}}"#).unwrap();
    assert!(matches!(no_alpha.images(), Err(Error::Precondition(_))));
    let bad_word = EndoConfig::parse(r#"{"n": 3, "images": {"g2": {"word": "g2 h3"}, "g3": {}}}"#)
        .unwrap();
    assert!(matches!(bad_word.build(), Err(Error::Parse { .. })));
}

#[test]
fn iterated_relations_survive() {
    let phi = config("worked_example");
    let a = phi.alpha_image();
    for (i, j) in [(2, 3), (3, 2)] {
        let (gi, gj) = (phi.image(i), phi.image(j));
        for k in 1..=6 {
            let c = a.conjugate(&gi.pow(k + 1)).unwrap().commutator(gj).unwrap();
            assert!(c.is_identity(), "k={k}");
            let l = a.conjugate(&gi.pow(-k)).unwrap();
            let r = a.conjugate(&gj.pow(-k)).unwrap();
            assert_eq!(l, r, "k={k}");
        }
    }
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        prop_oneof![Just("g2"), Just("g3"), Just("g2^-1"), Just("g3^-1")],
        0..max,
    )
    .prop_map(|v| Word::parse(&v.join(" ")).unwrap())
}

fn corpus() -> Vec<Endomorphism> {
    vec![
        config("worked_example"),
        config("square"),
        config("collapse"),
        Endomorphism::inner(&elem("g2 g3", 3)).unwrap(),
        Endomorphism::ray_permutation(&[3, 1, 2]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn homomorphism(a in word(7), b in word(7)) {
        let (x, y) = (a.evaluate(3).unwrap(), b.evaluate(3).unwrap());
        for phi in corpus() {
            let lhs = phi.apply(&x.compose(&y).unwrap()).unwrap();
            let rhs = phi.apply(&x).unwrap().compose(&phi.apply(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_ignores_the_word(a in word(8)) {
        let x = a.evaluate(3).unwrap();
        for phi in corpus() {
            prop_assert_eq!(phi.apply_word(&a).unwrap(), phi.apply(&x).unwrap());
            prop_assert_eq!(phi.apply_word(&element_to_word(&x)).unwrap(), phi.apply(&x).unwrap());
        }
    }

    #[test]
    fn inner_is_mono_candidate(a in word(6)) {
        let h = a.evaluate(3).unwrap();
        let phi = Endomorphism::inner(&h).unwrap();
        prop_assert_eq!(phi.classify_kernel().unwrap(), KernelClass::MonoCandidate);
        let g = gen(3, 2);
        prop_assert_eq!(phi.apply(&g).unwrap(), g.conjugate(&h).unwrap());
    }
}
