use proptest::prelude::*;
use vertexkit::exact_algebra::{rat, Scalar};
use vertexkit::mlde::{evaluate_candidate, frobenius_solve, indicial_polynomial, mlde_from_exponents, residual, scan_characters, MonicMlde, ScanConfig};

/// Partitions of each `m <= n` into parts drawn from `allowed`.
fn restricted_partitions(n: usize, allowed: impl Fn(usize) -> bool) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for part in (1..=n).filter(|&k| allowed(k)) {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p
}

fn ints(c: &[Scalar]) -> Vec<i64> {
    c.iter()
        .map(|x| {
            assert!(x.is_integer(), "{x} is not integral");
            i64::try_from(x.to_integer()).unwrap()
        })
        .collect()
}

#[test]
fn yang_lee_characters_are_rogers_ramanujan() {
    let n = 50;
    let m = mlde_from_exponents(2, &[rat(-1, 60), rat(11, 60)]).unwrap();
    let g = frobenius_solve(&m, &rat(-1, 60), n).unwrap();
    let h = frobenius_solve(&m, &rat(11, 60), n).unwrap();
    assert!(!g.resonance && !h.resonance);
    assert_eq!(ints(g.series.coeffs()), restricted_partitions(n, |k| k % 5 == 1 || k % 5 == 4));
    assert_eq!(ints(h.series.coeffs()), restricted_partitions(n, |k| k % 5 == 2 || k % 5 == 3));
}

#[test]
fn a1_character_is_theta_over_eta() {
    let n = 30;
    let m = mlde_from_exponents(2, &[rat(-1, 24), rat(5, 24)]).unwrap();
    let sol = frobenius_solve(&m, &rat(-1, 24), n).unwrap();

    // sum_m q^(m^2) times the partition generating function
    let p = restricted_partitions(n, |_| true);
    let mut theta = vec![0i64; n + 1];
    for k in -6i64..=6 {
        let e = (k * k) as usize;
        if e <= n {
            theta[e] += 1;
        }
    }
    let oracle: Vec<i64> = (0..=n).map(|d| (0..=d).map(|i| theta[i] * p[d - i]).sum()).collect();
    assert_eq!(ints(sol.series.coeffs()), oracle);
}

#[test]
fn indicial_roots_of_yang_lee() {
    let m = mlde_from_exponents(2, &[rat(-1, 60), rat(11, 60)]).unwrap();
    assert_eq!(m.kappa(), &rat(-11, 3600));
    let p = indicial_polynomial(&m);
    assert_eq!(p.eval(&rat(-1, 60)), rat(0, 1));
    assert_eq!(p.eval(&rat(11, 60)), rat(0, 1));
    assert!(frobenius_solve(&m, &rat(1, 60), 4).is_err());
}

#[test]
fn integer_gap_is_resonant() {
    // roots -5/12 and 7/12 differ by 1
    let m = mlde_from_exponents(2, &[rat(-5, 12), rat(7, 12)]).unwrap();
    assert!(frobenius_solve(&m, &rat(-5, 12), 5).unwrap().resonance);
    assert!(!frobenius_solve(&m, &rat(7, 12), 5).unwrap().resonance);
}

#[test]
fn wrong_exponent_sum_is_an_error() {
    assert!(mlde_from_exponents(2, &[rat(0, 1), rat(1, 2)]).is_err());
    assert!(mlde_from_exponents(3, &[rat(0, 1), rat(1, 6), rat(1, 6)]).is_err());
    assert!(MonicMlde::new(1, rat(0, 1), rat(0, 1)).is_err());
}

#[test]
fn central_charge_is_minus_24_x_vac() {
    let cfg = ScanConfig::default();
    let a1 = evaluate_candidate(&[rat(-1, 24), rat(5, 24)], &cfg).unwrap();
    assert!(a1.survived());
    assert_eq!(a1.central_charge, rat(1, 1));
    assert_eq!(a1.conformal_weights[1], rat(1, 4));
    let ly = evaluate_candidate(&[rat(-1, 60), rat(11, 60)], &cfg).unwrap();
    assert!(ly.survived());
    assert_eq!(ly.central_charge, rat(2, 5));
}

#[test]
fn small_scan_is_deterministic() {
    let cfg = ScanConfig { max_denominator: 24, terms: 20, ..ScanConfig::default() };
    let a = scan_characters(&cfg).unwrap();
    let b = scan_characters(&cfg).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.exponents, y.exponents);
        assert_eq!(x.verdict, y.verdict);
    }
    let survivors: Vec<_> = a.iter().filter(|c| c.survived()).map(|c| c.exponents.clone()).collect();
    assert!(survivors.contains(&vec![rat(-1, 24), rat(5, 24)]));
    assert!(survivors.contains(&vec![rat(-1, 12), rat(1, 4)]));
}

fn order2_pair() -> impl Strategy<Value = Scalar> {
    (-30i64..0, 1i64..=60).prop_map(|(p, q)| rat(p, q))
}

fn order3_triple() -> impl Strategy<Value = (Scalar, Scalar)> {
    ((-20i64..20, 1i64..=24), (-20i64..20, 1i64..=24)).prop_map(|((a, b), (c, d))| (rat(a, b), rat(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order2_round_trip(x in order2_pair()) {
        let y = rat(1, 6) - &x;
        let m = mlde_from_exponents(2, &[x.clone(), y.clone()]).unwrap();
        let p = indicial_polynomial(&m);
        prop_assert_eq!(p.eval(&x), rat(0, 1));
        prop_assert_eq!(p.eval(&y), rat(0, 1));
        let sol = frobenius_solve(&m, &x, 12).unwrap();
        if !sol.resonance {
            prop_assert!(residual(&m, &sol.series).is_zero());
        }
    }

    #[test]
    fn order3_round_trip((a, b) in order3_triple()) {
        let c = rat(1, 2) - &a - &b;
        let m = mlde_from_exponents(3, &[a.clone(), b.clone(), c.clone()]).unwrap();
        let p = indicial_polynomial(&m);
        for x in [&a, &b, &c] {
            prop_assert_eq!(p.eval(x), rat(0, 1));
            let sol = frobenius_solve(&m, x, 8).unwrap();
            if !sol.resonance {
                prop_assert!(residual(&m, &sol.series).is_zero());
            }
        }
    }
}
