use std::fmt;

use serde::{Deserialize, Serialize};

use super::{fgl_powers, test_elements, CarrierElem, HSDerivation, PolyCarrier};
use crate::exact_algebra::BivariateSeries;
use crate::fgl::FormalGroupLaw;
use crate::report::{Failure, Report};

/// Series in `z` with carrier coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierSeries {
    pub coeffs: Vec<CarrierElem>,
}

impl CarrierSeries {
    /// Value at `z = 0`.
    pub fn at_zero(&self) -> &CarrierElem {
        &self.coeffs[0]
    }
}

impl fmt::Display for CarrierSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `(k, D, F)`: vacuum `1`, vertex operators from `D`, and the formal group
/// law twisting weak associativity (additive when absent).
#[derive(Clone, Debug)]
pub struct VertexStructure {
    derivation: HSDerivation,
    fgl: Option<FormalGroupLaw>,
}

/// Coefficients `[m][n]` of `z^m w^n`, `m + n <= depth`.
type Grid = Vec<Vec<CarrierElem>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq34Report {
    /// Smallest multiplier exponent at which the truncated identity holds.
    pub least_n: Option<usize>,
    pub n_max: usize,
    pub per_n: Vec<Report>,
}

impl VertexStructure {
    pub fn new(derivation: HSDerivation, fgl: Option<FormalGroupLaw>) -> Self {
        VertexStructure { derivation, fgl }
    }

    pub fn carrier(&self) -> &PolyCarrier {
        self.derivation.carrier()
    }

    pub fn derivation(&self) -> &HSDerivation {
        &self.derivation
    }

    pub fn vacuum(&self) -> CarrierElem {
        self.carrier().one()
    }

    fn depth(&self) -> usize {
        self.derivation.depth()
    }

    fn law(&self) -> FormalGroupLaw {
        match &self.fgl {
            Some(f) => f.clone(),
            None => FormalGroupLaw::additive(self.carrier().base().clone(), self.depth().max(1)),
        }
    }

    /// `Y(u, z)v = sum_n D_n(u) v z^n` up to `z^depth`.
    pub fn vertex_y(&self, u: &CarrierElem, v: &CarrierElem) -> CarrierSeries {
        let c = self.carrier();
        CarrierSeries {
            coeffs: (0..=self.depth())
                .map(|n| c.mul(&self.derivation.apply(n, u), v))
                .collect(),
        }
    }

    /// Both sides of `Y(Y(a, z)b, w)c = Y(a, z +_F w) Y(b, w)c`.
    fn weak_assoc_sides(&self, a: &CarrierElem, b: &CarrierElem, c: &CarrierElem, fpow: &[BivariateSeries]) -> (Grid, Grid) {
        let car = self.carrier();
        let d = &self.derivation;
        let depth = self.depth();

        let lhs: Grid = (0..=depth)
            .map(|m| {
                let inner = car.mul(&d.apply(m, a), b);
                (0..=depth - m).map(|n| car.mul(&d.apply(n, &inner), c)).collect()
            })
            .collect();

        let da: Vec<CarrierElem> = (0..=depth).map(|k| d.apply(k, a)).collect();
        let ybc: Vec<CarrierElem> = (0..=depth).map(|j| car.mul(&d.apply(j, b), c)).collect();
        // Y(a, z +_F w) as a grid
        let ya: Grid = (0..=depth)
            .map(|m| {
                (0..=depth - m)
                    .map(|n| {
                        let mut acc = car.zero();
                        for (k, dk) in da.iter().enumerate().take(m + n + 1) {
                            acc = car.add_scaled(&acc, fpow[k].coeff_ref(m, n), dk);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let rhs: Grid = (0..=depth)
            .map(|m| {
                (0..=depth - m)
                    .map(|n| {
                        let mut acc = car.zero();
                        for j in 0..=n {
                            acc = car.add(&acc, &car.mul(&ya[m][n - j], &ybc[j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        (lhs, rhs)
    }

    fn first_grid_difference(lhs: &Grid, rhs: &Grid, element: impl Fn() -> String) -> Option<Failure> {
        let depth = lhs.len() - 1;
        for s in 0..=depth {
            for m in (0..=s).rev() {
                let n = s - m;
                if !lhs[m][n].agrees_with(&rhs[m][n]) {
                    return Some(Failure {
                        indices: vec![m, n],
                        element: element(),
                        lhs: lhs[m][n].to_string(),
                        rhs: rhs[m][n].to_string(),
                    });
                }
            }
        }
        None
    }

    /// `F`-weak associativity for one triple, compared as series in
    /// `(z, w)` to total degree `depth`.
    pub fn check_f_weak_associativity(&self, a: &CarrierElem, b: &CarrierElem, c: &CarrierElem) -> Report {
        let fpow = fgl_powers(&self.law(), self.depth());
        let (lhs, rhs) = self.weak_assoc_sides(a, b, c, &fpow);
        Report::new(
            "f_weak_associativity",
            Self::first_grid_difference(&lhs, &rhs, || triple_label(a, b, c)),
        )
    }

    /// Weak associativity over `a` in [`test_elements`] and `b, c` in `{1, t}`.
    pub fn check_f_weak_associativity_on_generators(&self, samples: usize, seed: u64) -> Report {
        let car = self.carrier();
        let fpow = fgl_powers(&self.law(), self.depth());
        let small = [car.one(), car.t_pow(1)];
        for a in test_elements(car, samples, seed) {
            for b in &small {
                for c in &small {
                    let (lhs, rhs) = self.weak_assoc_sides(&a, b, c, &fpow);
                    if let Some(f) = Self::first_grid_difference(&lhs, &rhs, || triple_label(&a, b, c)) {
                        return Report::new("f_weak_associativity", Some(f));
                    }
                }
            }
        }
        Report::new("f_weak_associativity", None)
    }

    /// Multiplies both sides of weak associativity by `(z +_F w)^N` for
    /// `N = 0..=n_max` and records the least `N` at which the truncated
    /// identity holds. Exploratory: a pass is evidence, not a theorem.
    pub fn check_eq34_conjecture(&self, a: &CarrierElem, b: &CarrierElem, c: &CarrierElem, n_max: usize) -> Eq34Report {
        let depth = self.depth();
        let fpow = fgl_powers(&self.law(), depth);
        let (lhs, rhs) = self.weak_assoc_sides(a, b, c, &fpow);
        let law = self.law().body().truncate(depth);
        let mut multiplier = BivariateSeries::one(law.ring().clone(), depth);
        let mut per_n = Vec::with_capacity(n_max + 1);
        let mut least_n = None;
        for n in 0..=n_max {
            if n > 0 {
                multiplier = multiplier.mul(&law).expect("same ring");
            }
            let l = self.scalar_times_grid(&multiplier, &lhs);
            let r = self.scalar_times_grid(&multiplier, &rhs);
            let report = Report::new(
                format!("eq34_n{n}"),
                Self::first_grid_difference(&l, &r, || triple_label(a, b, c)),
            );
            if report.passed() && least_n.is_none() {
                least_n = Some(n);
            }
            per_n.push(report);
        }
        Eq34Report { least_n, n_max, per_n }
    }

    fn scalar_times_grid(&self, s: &BivariateSeries, g: &Grid) -> Grid {
        let car = self.carrier();
        let depth = g.len() - 1;
        let terms = s.terms();
        (0..=depth)
            .map(|m| {
                (0..=depth - m)
                    .map(|n| {
                        let mut acc = car.zero();
                        for (i, j, coef) in &terms {
                            if *i <= m && *j <= n {
                                acc = car.add_scaled(&acc, coef, &g[m - i][n - j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

fn triple_label(a: &CarrierElem, b: &CarrierElem, c: &CarrierElem) -> String {
    format!("a = {a}, b = {b}, c = {c}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::CoefficientRing;
    use crate::hs_vertex::{check_f_derivation, translation_derivation};

    fn q() -> CoefficientRing {
        CoefficientRing::Rational
    }

    fn structure(f: &FormalGroupLaw, law: Option<FormalGroupLaw>) -> VertexStructure {
        let car = PolyCarrier::new(q(), 8);
        VertexStructure::new(translation_derivation(f, &car, 5).unwrap(), law)
    }

    #[test]
    fn vacuum_and_creation() {
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        let v = structure(&fm, Some(fm.clone()));
        let car = v.carrier().clone();
        let u = car.from_ints(&[2, -1, 3]);
        let y1 = v.vertex_y(&v.vacuum(), &u);
        assert!(y1.coeffs[0].agrees_with(&u));
        assert!(y1.coeffs[1..].iter().all(CarrierElem::is_zero));
        assert!(v.vertex_y(&u, &v.vacuum()).at_zero().agrees_with(&u));
    }

    #[test]
    fn y_of_t_squared() {
        let car = PolyCarrier::new(q(), 2);
        let fa = FormalGroupLaw::additive(q(), 8);
        let v = VertexStructure::new(translation_derivation(&fa, &car, 2).unwrap(), None);
        let y = v.vertex_y(&car.t_pow(2), &car.one());
        assert!(y.coeffs[0].agrees_with(&car.t_pow(2)));
        assert!(y.coeffs[1].agrees_with(&car.from_ints(&[0, 2])));
        assert!(y.coeffs[2].agrees_with(&car.one()));
    }

    #[test]
    fn weak_associativity_holds_for_translation() {
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        let v = structure(&fm, Some(fm.clone()));
        assert!(v.check_f_weak_associativity_on_generators(2, 7).passed());
        let fa = FormalGroupLaw::additive(q(), 16);
        assert!(structure(&fa, None).check_f_weak_associativity_on_generators(2, 7).passed());
    }

    #[test]
    fn weak_associativity_detects_wrong_law() {
        let fa = FormalGroupLaw::additive(q(), 16);
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        let v = structure(&fa, Some(fm));
        let r = v.check_f_weak_associativity_on_generators(0, 0);
        assert!(!r.passed());
        assert_eq!(r.first_failure.unwrap().indices, vec![1, 1]);
    }

    #[test]
    fn vacuum_triple_matches_f_derivation_check() {
        let fa = FormalGroupLaw::additive(q(), 16);
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        for (d_law, law) in [(&fa, &fm), (&fm, &fm), (&fm, &fa)] {
            let v = structure(d_law, Some(law.clone()));
            let car = v.carrier().clone();
            let t = car.t_pow(1);
            let wa = v.check_f_weak_associativity(&t, &car.one(), &car.one());
            let fd = check_f_derivation(v.derivation(), law, 0, 0).unwrap();
            assert_eq!(wa.verdict, fd.verdict);
        }
    }

    #[test]
    fn eq34_reports() {
        let fm = FormalGroupLaw::multiplicative(q(), 16);
        let v = structure(&fm, Some(fm.clone()));
        let car = v.carrier().clone();
        let t = car.t_pow(1);
        let r = v.check_eq34_conjecture(&t, &t, &car.one(), 3);
        assert_eq!(r.least_n, Some(0));
        let r0 = v.check_eq34_conjecture(&t, &t, &car.one(), 0);
        assert_eq!(r0.per_n.len(), 1);
        assert_eq!(r0.per_n[0].verdict, v.check_f_weak_associativity(&t, &t, &car.one()).verdict);

        let fa = FormalGroupLaw::additive(q(), 16);
        let bad = structure(&fa, Some(fm));
        let r = bad.check_eq34_conjecture(&t, &car.one(), &car.one(), 3);
        assert_eq!(r.per_n.len(), 4);
        assert_ne!(r.least_n, Some(0));
    }
}
