//! Exact q-expansions of level-one modular objects and the Serre derivative.
//!
//! A [`QExpansion`] is `q^x * sum_{n=0}^{N} a_n q^n` with rational `x` and
//! rational `a_n`. Products add leading exponents, and results are kept in
//! canonical form (`a_0 != 0` unless the expansion is identically zero).

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{format_rational, parse_rational, rat, rat_int, CoefficientRing, Scalar, TruncSeries};

#[derive(Clone, Debug)]
pub struct QExpansion {
    leading_exponent: Scalar,
    coeffs: Vec<Scalar>,
    weight: Option<i64>,
    quasi_modular: bool,
}

impl QExpansion {
    /// Builds `q^x * sum a_n q^n` with `N = coeffs.len() - 1`, shifting away
    /// leading zeros.
    pub fn new(leading_exponent: Scalar, coeffs: Vec<Scalar>, weight: Option<i64>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least one coefficient");
        let mut e = QExpansion {
            leading_exponent,
            coeffs,
            weight,
            quasi_modular: false,
        };
        e.canonicalize();
        e
    }

    pub fn from_ints(leading_exponent: Scalar, coeffs: &[i64], weight: Option<i64>) -> Self {
        QExpansion::new(leading_exponent, coeffs.iter().map(|&c| rat_int(c)).collect(), weight)
    }

    /// The constant `c` known to order `n`.
    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); order + 1];
        coeffs[0] = c;
        QExpansion::new(Scalar::zero(), coeffs, Some(0))
    }

    /// `q^x` known to order `n`, weight untagged.
    pub fn monomial(x: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); order + 1];
        coeffs[0] = Scalar::one();
        QExpansion::new(x, coeffs, None)
    }

    fn canonicalize(&mut self) {
        if let Some(k) = self.coeffs.iter().position(|c| !c.is_zero()) {
            if k > 0 {
                self.coeffs.drain(..k);
                self.leading_exponent += rat_int(k as i64);
            }
        }
    }

    pub fn leading_exponent(&self) -> &Scalar {
        &self.leading_exponent
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `a_n`, the coefficient of `q^(x+n)`.
    pub fn coeff(&self, n: usize) -> Scalar {
        self.coeffs.get(n).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Number of tail terms beyond the leading one.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn is_quasi_modular(&self) -> bool {
        self.quasi_modular
    }

    pub fn with_weight(mut self, weight: Option<i64>) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Exponent of the last known coefficient, `x + N`.
    pub fn precision(&self) -> Scalar {
        &self.leading_exponent + rat_int(self.order() as i64)
    }

    /// Coefficient of `q^e`; `None` when `e` lies beyond the known range or
    /// off the `x + Z` lattice.
    pub fn coeff_at(&self, e: &Scalar) -> Option<Scalar> {
        let shift = e - &self.leading_exponent;
        if !shift.is_integer() {
            return if self.is_zero() { Some(Scalar::zero()) } else { None };
        }
        if shift.is_negative() {
            return Some(Scalar::zero());
        }
        shift.to_integer().to_usize().and_then(|n| self.coeffs.get(n).cloned())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut e = self.clone();
        e.coeffs.truncate(order + 1);
        e
    }

    /// Integer-step tail as a power series over Q.
    pub fn tail(&self) -> TruncSeries {
        TruncSeries::new(CoefficientRing::Rational, self.order(), self.coeffs.clone()).expect("rationals")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut c = vec![Scalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let mut out = QExpansion::new(&self.leading_exponent + &other.leading_exponent, c, weight);
        out.quasi_modular = self.quasi_modular || other.quasi_modular;
        out
    }

    pub fn pow(&self, r: i64) -> Result<Self> {
        let base = if r < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QExpansion::constant(Scalar::one(), base.order()).with_weight(Some(0));
        let mut sq = base;
        let mut e = r.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        let inv = self.tail().invert_unit()?;
        Ok(QExpansion::new(
            -&self.leading_exponent,
            inv.coeffs().to_vec(),
            self.weight.map(|w| -w),
        ))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = QExpansion::new(
            self.leading_exponent.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
            self.weight,
        );
        out.quasi_modular = self.quasi_modular;
        out
    }

    /// Sum of two expansions whose exponents differ by an integer.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let shift = &other.leading_exponent - &self.leading_exponent;
        if !shift.is_integer() {
            if self.is_zero() {
                return Ok(other.clone());
            }
            if other.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::InvalidArgument(format!(
                "cannot add q^{} and q^{} series",
                format_rational(&self.leading_exponent),
                format_rational(&other.leading_exponent)
            )));
        }
        let base = if shift.is_negative() { &other.leading_exponent } else { &self.leading_exponent }.clone();
        let prec = {
            let a = self.precision();
            let b = other.precision();
            if a < b { a } else { b }
        };
        let n = (&prec - &base).to_integer().to_i64().unwrap_or(0).max(0) as usize;
        let coeffs = (0..=n)
            .map(|k| {
                let e = &base + rat_int(k as i64);
                self.coeff_at(&e).unwrap_or_default() + other.coeff_at(&e).unwrap_or_default()
            })
            .collect();
        let weight = if self.weight == other.weight { self.weight } else { None };
        let mut out = QExpansion::new(base, coeffs, weight);
        out.quasi_modular = self.quasi_modular || other.quasi_modular;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// `q d/dq`: multiplies the coefficient of `q^e` by `e`.
    pub fn q_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * (&self.leading_exponent + rat_int(n as i64)))
            .collect();
        let mut out = QExpansion::new(self.leading_exponent.clone(), coeffs, self.weight.map(|w| w + 2));
        out.quasi_modular = true;
        out
    }

    pub fn to_json(&self) -> QExpansionJson {
        QExpansionJson {
            leading_exponent: format_rational(&self.leading_exponent),
            coefficients: self.coeffs.iter().map(format_rational).collect(),
            weight: self.weight,
        }
    }

    pub fn from_json(j: &QExpansionJson) -> Result<Self> {
        let x = parse_rational(&j.leading_exponent)?;
        let coeffs = j.coefficients.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        Ok(QExpansion::new(x, coeffs, j.weight))
    }
}

/// `q^x * (a_0 + a_1 q + ... + O(q^(N+1)))`; the prefix is dropped when `x = 0`.
impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.leading_exponent.is_zero() {
            write!(f, "q^({}) * (", format_rational(&self.leading_exponent))?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (n, c.abs().is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)?;
        if !self.leading_exponent.is_zero() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl PartialEq for QExpansion {
    /// Coefficientwise equality on the range both expansions know; weight
    /// tags are bookkeeping and do not take part.
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        let shift = &other.leading_exponent - &self.leading_exponent;
        if !shift.is_integer() {
            return false;
        }
        let lo = if shift.is_negative() { &other.leading_exponent } else { &self.leading_exponent }.clone();
        let hi = {
            let a = self.precision();
            let b = other.precision();
            if a < b { a } else { b }
        };
        let mut e = lo;
        while e <= hi {
            if self.coeff_at(&e) != other.coeff_at(&e) {
                return false;
            }
            e += Scalar::one();
        }
        true
    }
}

/// `{leading_exponent: "p/q", coefficients: ["..."], weight: k | null}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QExpansionJson {
    pub leading_exponent: String,
    pub coefficients: Vec<String>,
    pub weight: Option<i64>,
}

/// `sigma_k(n)`, the sum of `d^k` over divisors `d` of `n`.
pub fn divisor_sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Normalized Eisenstein series `E_2`, `E_4`, `E_6` to `q^N`.
///
/// `E_2` is quasi-modular; it carries weight tag 2 with the quasi-modular
/// flag set.
pub fn eisenstein(k: i64, n: usize) -> Result<QExpansion> {
    let (mult, power) = match k {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        other => return Err(Error::UnsupportedWeight(other)),
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Scalar::one());
    for m in 1..=n {
        coeffs.push(Scalar::from_integer(divisor_sigma(power, m as u64) * mult));
    }
    let mut e = QExpansion::new(Scalar::zero(), coeffs, Some(k));
    e.quasi_modular = k == 2;
    Ok(e)
}

/// `prod_{n>=1} (1 - q^n)` to `q^N`.
fn euler_product(n: usize) -> TruncSeries {
    let q = CoefficientRing::Rational;
    let mut acc = TruncSeries::one(q.clone(), n);
    for m in 1..=n {
        let mut factor = vec![0i64; m + 1];
        factor[0] = 1;
        factor[m] = -1;
        acc = acc.mul(&TruncSeries::from_ints(q.clone(), n, &factor)).expect("same ring");
    }
    acc
}

/// `eta^r = q^(r/24) prod (1 - q^n)^r` to `q^N`, any integer `r`.
pub fn eta_power(r: i64, n: usize) -> QExpansion {
    let base = QExpansion::new(rat(1, 24), euler_product(n).coeffs().to_vec(), None);
    let weight = if r % 2 == 0 { Some(r / 2) } else { None };
    base.pow(r).expect("eta tail is a unit").with_weight(weight)
}

/// `Delta = (E_4^3 - E_6^2) / 1728`, weight 12.
pub fn delta(n: usize) -> QExpansion {
    let e4 = eisenstein(4, n + 1).expect("weight 4");
    let e6 = eisenstein(6, n + 1).expect("weight 6");
    let num = e4.pow(3).expect("positive power").sub(&e6.pow(2).expect("positive power")).expect("integral exponents");
    num.scale(&rat(1, 1728)).truncate(n).with_weight(Some(12))
}

/// `j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ...`, coefficients through
/// `q^N` (`N >= -1`).
pub fn j_invariant(n: i64) -> Result<QExpansion> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("j needs N >= -1, got {n}")));
    }
    let tail = (n + 1) as usize;
    let e4 = eisenstein(4, tail)?;
    let d = delta(tail);
    Ok(e4.pow(3)?.mul(&d.inverse()?).truncate(tail).with_weight(Some(0)))
}

/// Modular derivative `D_k f = q df/dq - (k/12) E_2 f`; weight tag `k + 2`.
pub fn serre_derivative(f: &QExpansion, k: i64) -> QExpansion {
    let e2 = eisenstein(2, f.order()).expect("weight 2");
    let correction = e2.mul(f).scale(&rat(k, 12));
    let mut out = f
        .q_derivative()
        .sub(&correction)
        .expect("same exponent lattice")
        .with_weight(Some(k + 2));
    out.quasi_modular = f.quasi_modular;
    out
}

/// `D_0^n = D_{2n-2} o ... o D_2 o D_0`.
pub fn iterate_d0(f: &QExpansion, n: usize) -> QExpansion {
    (0..n).fold(f.clone(), |acc, i| serre_derivative(&acc, 2 * i as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub re: f64,
    pub im: f64,
    /// `|a_N| |q|^(N+1) / (1 - |q|)` when the last few coefficients grow
    /// monotonically in size; a heuristic, not a rigorous bound.
    pub tail_bound: Option<f64>,
}

impl Evaluation {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Partial sum `q^x sum_{n<=terms} a_n q^n` at `q = exp(2 pi i tau)`.
pub fn evaluate(f: &QExpansion, tau: Complex64, terms: usize) -> Result<Evaluation> {
    if tau.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane(tau.im.to_string()));
    }
    let terms = terms.min(f.order());
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let q = (two_pi_i * tau).exp();
    let x = f.leading_exponent.to_f64().unwrap_or(0.0);
    let mut sum = Complex64::zero();
    for n in (0..=terms).rev() {
        sum = sum * q + Complex64::new(f.coeffs[n].to_f64().unwrap_or(f64::NAN), 0.0);
    }
    let value = (two_pi_i * tau * x).exp() * sum;

    let mags: Vec<f64> = f.coeffs[..=terms].iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).collect();
    let window = &mags[terms.saturating_sub(3)..];
    let monotone = window.len() >= 2 && window.windows(2).all(|w| w[0] <= w[1]);
    let qa = q.norm();
    let tail_bound = monotone.then(|| {
        let scale = (-2.0 * std::f64::consts::PI * tau.im * x).exp();
        scale * mags[terms] * qa.powi(terms as i32 + 1) / (1.0 - qa)
    });
    Ok(Evaluation {
        re: value.re,
        im: value.im,
        tail_bound,
    })
}
