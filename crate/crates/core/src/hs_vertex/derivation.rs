use num_traits::Zero;

use super::carrier::{CarrierElem, PolyCarrier};
use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;

/// A Hasse-Schmidt derivation `D = (D_0, D_1, ..., D_depth)` on a
/// [`PolyCarrier`], stored as the table `D_m(t^n)` and extended linearly.
#[derive(Clone, Debug)]
pub struct HSDerivation {
    carrier: PolyCarrier,
    depth: usize,
    /// `table[m][n] = D_m(t^n)` for `m <= depth`, `n <= M`.
    table: Vec<Vec<CarrierElem>>,
    /// `D_m(t)` for `m = 0..=depth` when the derivation was built from its
    /// values on the generator.
    generator: Option<Vec<CarrierElem>>,
}

impl HSDerivation {
    /// The unique derivation of `k[[t]]` with `D_0(t) = t` and the given
    /// values `D_m(t)` for `m = 1..=depth`, i.e. the ring map
    /// `u(t) -> u(t + sum_m D_m(t) X^m)`.
    pub fn from_generator(carrier: PolyCarrier, values: Vec<CarrierElem>) -> Self {
        let depth = values.len();
        let mut generator = Vec::with_capacity(depth + 1);
        generator.push(carrier.t_pow(1));
        generator.extend(values);

        let cap = carrier.degree_cap();
        let mut table: Vec<Vec<CarrierElem>> = (0..=depth).map(|_| Vec::with_capacity(cap + 1)).collect();
        // D(t^0) = 1
        let mut power: Vec<CarrierElem> = (0..=depth)
            .map(|m| if m == 0 { carrier.one() } else { carrier.zero() })
            .collect();
        for _ in 0..=cap {
            for m in 0..=depth {
                table[m].push(power[m].clone());
            }
            // D(t^(n+1)) = D(t^n) * D(t) in carrier[X] / X^(depth+1)
            power = (0..=depth)
                .map(|m| {
                    let mut acc = carrier.mul(&power[0], &generator[m]);
                    for i in 1..=m {
                        acc = carrier.add(&acc, &carrier.mul(&power[i], &generator[m - i]));
                    }
                    acc
                })
                .collect();
        }
        HSDerivation {
            carrier,
            depth,
            table,
            generator: Some(generator),
        }
    }

    /// An explicitly tabulated family of maps; `table[m][n]` is `D_m(t^n)`.
    /// Nothing is assumed about it, which makes it the way to hand-build
    /// violations of the axioms.
    pub fn from_table(carrier: PolyCarrier, table: Vec<Vec<CarrierElem>>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidArgument("derivation table needs D_0".into()));
        }
        if table.iter().any(|row| row.len() != carrier.full_precision()) {
            return Err(Error::InvalidArgument(format!(
                "each row must list D_m(t^n) for n = 0..={}",
                carrier.degree_cap()
            )));
        }
        Ok(HSDerivation {
            depth: table.len() - 1,
            carrier,
            table,
            generator: None,
        })
    }

    /// `D_0 = id`, `D_m = 0` for `m >= 1`.
    pub fn zero_tail(carrier: PolyCarrier, depth: usize) -> Self {
        let values = (0..depth).map(|_| carrier.zero()).collect();
        HSDerivation::from_generator(carrier, values)
    }

    pub fn carrier(&self) -> &PolyCarrier {
        &self.carrier
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `D_m(t)` for the generator, when known.
    pub fn generator_values(&self) -> Option<&[CarrierElem]> {
        self.generator.as_deref()
    }

    /// `D_m(u)`. Unknown high coefficients of `u` can reach down `m`
    /// degrees, so the result is `m` coefficients shorter than `u`.
    pub fn apply(&self, m: usize, u: &CarrierElem) -> CarrierElem {
        assert!(m <= self.depth, "D_{m} beyond derivation depth {}", self.depth);
        let len = u.precision().saturating_sub(m);
        let mut acc = self.carrier.zero().truncated(len);
        for (n, c) in u.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = self.carrier.add_scaled(&acc, c, &self.table[m][n]);
            }
        }
        acc
    }

    /// Same derivation with `D_m(t)` replaced by `D_m(t) + delta`, all other
    /// values re-extended through the Leibniz rule.
    pub fn perturb_generator(&self, m: usize, delta: &CarrierElem) -> Result<Self> {
        let gen = self
            .generator
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("derivation has no generator values".into()))?;
        if m == 0 || m > self.depth {
            return Err(Error::InvalidArgument(format!("cannot perturb D_{m}")));
        }
        let mut values: Vec<CarrierElem> = gen[1..].to_vec();
        values[m - 1] = self.carrier.add(&values[m - 1], delta);
        Ok(HSDerivation::from_generator(self.carrier.clone(), values))
    }
}

/// The translation derivation of `F`: `sum_n D_n(u(t)) X^n = u(t +_F X)`.
///
/// `D_m(t) = sum_i c_{i,m} t^i` is known up to `t^(order(F) - m)`. For
/// `F = F_a` this is the divided-power derivation `D_m(t^n) = C(n, m) t^(n-m)`.
pub fn translation_derivation(f: &FormalGroupLaw, carrier: &PolyCarrier, depth: usize) -> Result<HSDerivation> {
    f.ring().check_same(carrier.base())?;
    if depth > f.order() {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} exceeds formal group law order {}",
            f.order()
        )));
    }
    let n = f.order();
    let values = (1..=depth)
        .map(|m| {
            let coeffs = (0..=n - m).map(|i| f.coeff(i, m)).collect();
            carrier.from_scalars(coeffs, n - m + 1)
        })
        .collect();
    Ok(HSDerivation::from_generator(carrier.clone(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{CoefficientRing, Scalar};

    fn carrier() -> PolyCarrier {
        PolyCarrier::new(CoefficientRing::Rational, 6)
    }

    #[test]
    fn additive_translation_is_divided_powers() {
        let c = carrier();
        let d = translation_derivation(&FormalGroupLaw::additive(CoefficientRing::Rational, 12), &c, 4).unwrap();
        let t2 = c.t_pow(2);
        assert_eq!(d.apply(1, &t2).coeffs(), &c.from_ints(&[0, 2]).coeffs()[..6]);
        assert_eq!(d.apply(2, &t2).coeffs(), &c.one().coeffs()[..5]);
        for n in 0..=6 {
            for m in 0..=4 {
                let want = if m <= n { binom(n, m) } else { 0 };
                let got = d.apply(m, &c.t_pow(n));
                let mut expect = vec![0i64; 7];
                if m <= n {
                    expect[n - m] = want;
                }
                assert!(got.agrees_with(&c.from_ints(&expect)), "D_{m}(t^{n})");
            }
        }
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
    }

    #[test]
    fn constants_are_killed() {
        let c = carrier();
        let fm = FormalGroupLaw::multiplicative(CoefficientRing::Rational, 12);
        let d = translation_derivation(&fm, &c, 5).unwrap();
        for m in 1..=5 {
            assert!(d.apply(m, &c.one()).is_zero());
        }
    }

    #[test]
    fn multiplicative_translation_first_map() {
        let c = carrier();
        let fm = FormalGroupLaw::multiplicative(CoefficientRing::Rational, 12);
        let d = translation_derivation(&fm, &c, 3).unwrap();
        assert!(d.apply(1, &c.t_pow(1)).agrees_with(&c.from_ints(&[1, 1])));
        assert!(d.apply(2, &c.t_pow(1)).is_zero());
    }

    #[test]
    fn rejects_mismatched_ring_and_depth() {
        let c = carrier();
        let f5 = FormalGroupLaw::additive(CoefficientRing::Mod(5), 8);
        assert!(translation_derivation(&f5, &c, 2).is_err());
        let fq = FormalGroupLaw::additive(CoefficientRing::Rational, 3);
        assert!(translation_derivation(&fq, &c, 4).is_err());
    }

    #[test]
    fn precision_drops_by_m() {
        let c = carrier();
        let d = HSDerivation::zero_tail(c.clone(), 3);
        assert_eq!(d.apply(3, &c.t_pow(1)).precision(), 4);
        assert_eq!(d.apply(0, &c.t_pow(1)).coeffs()[1], Scalar::from_integer(1.into()));
    }

    #[test]
    fn perturbation_changes_one_value() {
        let c = carrier();
        let d = translation_derivation(&FormalGroupLaw::additive(CoefficientRing::Rational, 12), &c, 4).unwrap();
        let p = d.perturb_generator(2, &c.one()).unwrap();
        assert!(p.apply(2, &c.t_pow(1)).agrees_with(&c.one()));
        assert!(p.apply(1, &c.t_pow(1)).agrees_with(&c.one()));
        assert!(d.perturb_generator(0, &c.one()).is_err());
    }
}
