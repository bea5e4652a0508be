//! Hasse-Schmidt derivations on a truncated polynomial carrier and the
//! vertex operators `Y(u, z)v = sum_n D_n(u) v z^n` they define.
//!
//! Identities that quantify over all `u` are checked on the monomials
//! `t, t^2, t^3` plus a few seeded random elements. Comparisons only look at
//! the `t`-coefficients both sides actually know (see [`CarrierElem`]).

mod carrier;
mod derivation;
pub mod harness;
mod vertex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use carrier::{CarrierElem, PolyCarrier};
pub use derivation::{translation_derivation, HSDerivation};
pub use vertex::{CarrierSeries, Eq34Report, VertexStructure};

use crate::error::{Error, Result};
use crate::exact_algebra::{BivariateSeries, Scalar};
use crate::fgl::FormalGroupLaw;
use crate::report::{Failure, Report};

/// Depth used when none is given: `min(M, order(F), 8)`.
pub fn default_depth(carrier: &PolyCarrier, fgl_order: usize) -> usize {
    carrier.degree_cap().min(fgl_order).min(8)
}

/// Elements standing in for "all `u`": `t, t^2, t^3` and `samples` random
/// elements drawn from `seed`.
pub fn test_elements(carrier: &PolyCarrier, samples: usize, seed: u64) -> Vec<CarrierElem> {
    let mut out: Vec<CarrierElem> = (1..=3.min(carrier.degree_cap())).map(|n| carrier.t_pow(n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        out.push(carrier.random(&mut rng, 4));
    }
    out
}

fn failure(indices: Vec<usize>, element: String, lhs: &CarrierElem, rhs: &CarrierElem) -> Failure {
    Failure {
        indices,
        element,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// `D_0 = id`, `D_m(1) = 0` and the Leibniz rule
/// `D_m(uv) = sum_{i+j=m} D_i(u) D_j(v)` on monomial pairs and random pairs.
pub fn check_hs_axioms(d: &HSDerivation, samples: usize, seed: u64) -> Report {
    Report::new("hs_axioms", hs_axioms_failure(d, samples, seed))
}

fn hs_axioms_failure(d: &HSDerivation, samples: usize, seed: u64) -> Option<Failure> {
    let c = d.carrier();
    for n in 0..=c.degree_cap() {
        let u = c.t_pow(n);
        let got = d.apply(0, &u);
        if !got.agrees_with(&u) {
            return Some(failure(vec![0, n], u.to_string(), &got, &u));
        }
    }
    let one = c.one();
    for m in 1..=d.depth() {
        let got = d.apply(m, &one);
        if !got.is_zero() {
            return Some(failure(vec![m], one.to_string(), &got, &c.zero()));
        }
    }

    let mut pairs = Vec::new();
    let cap = c.degree_cap().min(4);
    for a in 1..=cap {
        for b in a..=cap {
            pairs.push((c.t_pow(a), c.t_pow(b)));
        }
    }
    let randoms = test_elements(c, 2 * samples, seed);
    for w in randoms[3.min(c.degree_cap())..].chunks(2) {
        if let [u, v] = w {
            pairs.push((u.clone(), v.clone()));
        }
    }
    for m in 1..=d.depth() {
        for (u, v) in &pairs {
            let lhs = d.apply(m, &c.mul(u, v));
            let mut rhs = c.zero();
            for i in 0..=m {
                rhs = c.add(&rhs, &c.mul(&d.apply(i, u), &d.apply(m - i, v)));
            }
            if !lhs.agrees_with(&rhs) {
                return Some(failure(vec![m], format!("({u}, {v})"), &lhs, &rhs));
            }
        }
    }
    None
}

/// Iterativity: `D_i o D_j = C(i+j, i) D_{i+j}` for all `i + j <= depth`.
pub fn check_iterative(d: &HSDerivation, samples: usize, seed: u64) -> Report {
    let c = d.carrier();
    let binom = binomials(d.depth());
    for u in test_elements(c, samples, seed) {
        for s in 0..=d.depth() {
            let ds = d.apply(s, &u);
            for i in 0..=s {
                let lhs = d.apply(i, &d.apply(s - i, &u));
                let rhs = c.scale(&ds, &binom[s][i]);
                if !lhs.agrees_with(&rhs) {
                    return Report::new("iterative", Some(failure(vec![i, s - i], u.to_string(), &lhs, &rhs)));
                }
            }
        }
    }
    Report::new("iterative", None)
}

/// The HS `F`-derivation identity
/// `sum D_j(D_i(u)) X^i Y^j = sum_n D_n(u) (X +_F Y)^n`, compared
/// coefficientwise to total degree `depth`.
pub fn check_f_derivation(d: &HSDerivation, f: &FormalGroupLaw, samples: usize, seed: u64) -> Result<Report> {
    f.ring().check_same(d.carrier().base())?;
    if d.depth() > f.order() {
        return Err(Error::InvalidArgument(format!(
            "depth {} exceeds formal group law order {}",
            d.depth(),
            f.order()
        )));
    }
    let c = d.carrier();
    let fpow = fgl_powers(f, d.depth());
    for u in test_elements(c, samples, seed) {
        let du: Vec<CarrierElem> = (0..=d.depth()).map(|n| d.apply(n, &u)).collect();
        for s in 0..=d.depth() {
            for i in 0..=s {
                let j = s - i;
                let lhs = d.apply(j, &du[i]);
                let mut rhs = c.zero();
                for (n, dn) in du.iter().enumerate().take(s + 1) {
                    rhs = c.add_scaled(&rhs, fpow[n].coeff_ref(i, j), dn);
                }
                if !lhs.agrees_with(&rhs) {
                    return Ok(Report::new("f_derivation", Some(failure(vec![i, j], u.to_string(), &lhs, &rhs))));
                }
            }
        }
    }
    Ok(Report::new("f_derivation", None))
}

/// `F^0, F^1, ..., F^n` truncated at total degree `n`.
pub(crate) fn fgl_powers(f: &FormalGroupLaw, n: usize) -> Vec<BivariateSeries> {
    let body = f.body().truncate(n);
    let mut out = vec![BivariateSeries::one(f.ring().clone(), n)];
    for k in 1..=n {
        let next = out[k - 1].mul(&body).expect("same ring");
        out.push(next);
    }
    out
}

fn binomials(n: usize) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let row = (0..=s)
            .map(|i| {
                if i == 0 || i == s {
                    Scalar::from_integer(1.into())
                } else {
                    &rows[s - 1][i - 1] + &rows[s - 1][i]
                }
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::CoefficientRing;
    use crate::fgl::{fgl_from_log, random_logarithm};

    fn q() -> CoefficientRing {
        CoefficientRing::Rational
    }

    fn setup(f: &FormalGroupLaw, cap: usize, depth: usize) -> HSDerivation {
        translation_derivation(f, &PolyCarrier::new(f.ring().clone(), cap), depth).unwrap()
    }

    #[test]
    fn translation_derivations_satisfy_hs_axioms() {
        let fa = FormalGroupLaw::additive(q(), 16);
        assert!(check_hs_axioms(&setup(&fa, 8, 6), 3, 1).passed());
        let fm6 = FormalGroupLaw::multiplicative(CoefficientRing::Mod(6), 16);
        assert!(check_hs_axioms(&setup(&fm6, 8, 6), 3, 1).passed());
        let fl = fgl_from_log(&random_logarithm(16, 5)).unwrap();
        assert!(check_hs_axioms(&setup(&fl, 8, 6), 3, 1).passed());
    }

    #[test]
    fn hand_built_leibniz_violation() {
        let c = PolyCarrier::new(q(), 4);
        let id: Vec<CarrierElem> = (0..=4).map(|n| c.t_pow(n)).collect();
        let mut d1 = vec![c.zero(); 5];
        d1[1] = c.t_pow(1);
        d1[2] = c.t_pow(1);
        let d = HSDerivation::from_table(c.clone(), vec![id, d1]).unwrap();
        let r = check_hs_axioms(&d, 0, 0);
        let f = r.first_failure.unwrap();
        assert_eq!(f.indices, vec![1]);
        assert_eq!(f.element, format!("({}, {})", c.t_pow(1), c.t_pow(1)));
    }

    #[test]
    fn iterativity_examples() {
        let fa = FormalGroupLaw::additive(q(), 16);
        assert!(check_iterative(&setup(&fa, 8, 6), 3, 2).passed());
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        let r = check_iterative(&setup(&fm, 8, 6), 3, 2);
        let f = r.first_failure.unwrap();
        assert_eq!(f.indices, vec![1, 1]);
        assert_eq!(f.element, PolyCarrier::new(q(), 8).t_pow(1).to_string());
        let c = PolyCarrier::new(q(), 8);
        assert!(check_iterative(&HSDerivation::zero_tail(c, 6), 3, 2).passed());
    }

    #[test]
    fn f_derivation_examples() {
        let laws = [
            FormalGroupLaw::additive(q(), 16),
            FormalGroupLaw::multiplicative(q(), 16),
            fgl_from_log(&random_logarithm(16, 9)).unwrap(),
        ];
        for f in &laws {
            let r = check_f_derivation(&setup(f, 8, 6), f, 3, 4).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = check_f_derivation(&setup(&laws[0], 8, 6), &laws[1], 3, 4).unwrap();
        assert_eq!(r.first_failure.unwrap().indices, vec![1, 1]);
        let zero = HSDerivation::zero_tail(PolyCarrier::new(q(), 8), 6);
        for f in &laws {
            assert!(check_f_derivation(&zero, f, 3, 4).unwrap().passed());
        }
    }

    #[test]
    fn f_derivation_over_z6() {
        let fm = FormalGroupLaw::multiplicative(CoefficientRing::Mod(6), 16);
        assert!(check_f_derivation(&setup(&fm, 8, 6), &fm, 3, 4).unwrap().passed());
    }

    #[test]
    fn f_derivation_errors() {
        let fa = FormalGroupLaw::additive(q(), 16);
        let d = setup(&fa, 8, 6);
        let f5 = FormalGroupLaw::additive(CoefficientRing::Mod(5), 16);
        assert!(check_f_derivation(&d, &f5, 0, 0).is_err());
        assert!(check_f_derivation(&d, &FormalGroupLaw::additive(q(), 4), 0, 0).is_err());
    }

    #[test]
    fn binomial_rows() {
        let b = binomials(4);
        assert_eq!(b[4][2], Scalar::from_integer(6.into()));
    }
}
