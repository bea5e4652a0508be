use proptest::prelude::*;
use vertexkit::exact_algebra::{rat, CoefficientRing};
use vertexkit::fgl::{fgl_from_log, random_logarithm, FormalGroupLaw};
use vertexkit::hs_vertex::harness::{equivalence_harness, iterativity_harness, standard_mutations, HarnessConfig};
use vertexkit::hs_vertex::{check_f_derivation, check_hs_axioms, check_iterative, translation_derivation, HSDerivation, PolyCarrier, VertexStructure};

const CAP: usize = 6;
const DEPTH: usize = 4;

fn q() -> CoefficientRing {
    CoefficientRing::Rational
}

fn carrier() -> PolyCarrier {
    PolyCarrier::new(q(), CAP)
}

/// Generator values `D_m(t)`, each a short integer polynomial in `t`.
fn generator_values() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop_oneof![
        // u(t + aX): iterative
        (-3i64..=3).prop_map(|a| {
            let mut v = vec![vec![0]; DEPTH];
            v[0] = vec![a];
            v
        }),
        prop::collection::vec(prop::collection::vec(-2i64..=2, 1..3), DEPTH),
    ]
}

fn from_values(values: &[Vec<i64>]) -> HSDerivation {
    let c = carrier();
    HSDerivation::from_generator(c.clone(), values.iter().map(|v| c.from_ints(v)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_derivations_satisfy_leibniz(values in generator_values()) {
        prop_assert!(check_hs_axioms(&from_values(&values), 1, 0).passed());
    }

    #[test]
    fn iterative_iff_additive_derivation(values in generator_values(), seed in 0u64..50) {
        let d = from_values(&values);
        let fa = FormalGroupLaw::additive(q(), DEPTH);
        let it = check_iterative(&d, 1, seed).passed();
        let fd = check_f_derivation(&d, &fa, 1, seed).unwrap().passed();
        prop_assert_eq!(it, fd);
        // generator t + aX is the only iterative shape with constant values
        if values[1..].iter().all(|v| v.iter().all(|&c| c == 0)) && values[0].len() == 1 {
            prop_assert!(it);
        }
    }

    #[test]
    fn translation_of_log_laws_passes(seed in 0u64..200) {
        let f = fgl_from_log(&random_logarithm(CAP, seed)).unwrap();
        let d = translation_derivation(&f, &carrier(), DEPTH).unwrap();
        prop_assert!(check_hs_axioms(&d, 1, seed).passed());
        prop_assert!(check_f_derivation(&d, &f, 1, seed).unwrap().passed());
        prop_assert!(VertexStructure::new(d, Some(f)).check_f_weak_associativity_on_generators(1, seed).passed());
    }

    #[test]
    fn mutations_break_both_checks(seed in 0u64..200, k in 0usize..9) {
        let f = fgl_from_log(&random_logarithm(CAP, seed)).unwrap();
        let c = carrier();
        let d = translation_derivation(&f, &c, DEPTH).unwrap();
        let (m, delta) = standard_mutations(&c, DEPTH, 9)[k].clone();
        let bad = d.perturb_generator(m, &delta).unwrap();
        prop_assert!(!check_f_derivation(&bad, &f, 1, seed).unwrap().passed());
        prop_assert!(!VertexStructure::new(bad, Some(f)).check_f_weak_associativity_on_generators(1, seed).passed());
    }
}

#[test]
fn additive_translation_is_binomial() {
    let c = carrier();
    let d = translation_derivation(&FormalGroupLaw::additive(q(), CAP), &c, DEPTH).unwrap();
    // D_2(t^5) = C(5, 2) t^3
    let got = d.apply(2, &c.t_pow(5));
    let want = c.scale(&c.t_pow(3), &rat(10, 1));
    assert!(got.agrees_with(&want));
}

#[test]
fn multiplicative_translation_is_not_iterative() {
    let c = carrier();
    let fm = FormalGroupLaw::multiplicative(q(), CAP);
    let d = translation_derivation(&fm, &c, DEPTH).unwrap();
    assert!(check_f_derivation(&d, &fm, 2, 0).unwrap().passed());
    assert!(!check_iterative(&d, 2, 0).passed());
}

#[test]
fn harness_over_small_laws() {
    let laws = vec![
        ("F_a".to_string(), FormalGroupLaw::additive(q(), CAP)),
        ("F_m".to_string(), FormalGroupLaw::multiplicative(q(), CAP)),
        ("log1".to_string(), fgl_from_log(&random_logarithm(CAP, 1)).unwrap()),
    ];
    let cfg = HarnessConfig { degree_cap: CAP, depth: DEPTH, mutations: 5, samples: 1, seed: 3 };
    let cases = equivalence_harness(&laws, &cfg).unwrap();
    assert_eq!(cases.len(), 18);
    assert!(cases.iter().all(|c| c.agree));

    let derivations: Vec<(String, HSDerivation)> = laws
        .iter()
        .map(|(n, f)| (n.clone(), translation_derivation(f, &carrier(), DEPTH).unwrap()))
        .collect();
    let it = iterativity_harness(&derivations, 1, 0).unwrap();
    assert!(it.iter().all(|c| c.agree));
}
