use std::fmt;

use num_traits::{One, Zero};

use super::rational::format_rational;
use super::{CoefficientRing, Scalar, SeriesLike};
use crate::error::{Error, Result};

/// Element of `k[[X]]` known modulo `X^(order+1)`.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    ring: CoefficientRing,
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TruncSeries {
    /// Builds a series from its low coefficients. Extra coefficients past
    /// `order` are dropped and missing ones are zero.
    pub fn new(ring: CoefficientRing, order: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        let mut c = Vec::with_capacity(order + 1);
        for x in coeffs.iter().take(order + 1) {
            c.push(ring.element(x)?);
        }
        c.resize(order + 1, Scalar::zero());
        Ok(TruncSeries { ring, order, coeffs: c })
    }

    pub fn from_ints(ring: CoefficientRing, order: usize, coeffs: &[i64]) -> Self {
        let mut c: Vec<Scalar> = coeffs.iter().take(order + 1).map(|&v| ring.int(v)).collect();
        c.resize(order + 1, Scalar::zero());
        TruncSeries { ring, order, coeffs: c }
    }

    pub(crate) fn from_normalized(ring: CoefficientRing, order: usize, mut coeffs: Vec<Scalar>) -> Self {
        coeffs.resize(order + 1, Scalar::zero());
        TruncSeries { ring, order, coeffs }
    }

    pub fn zero(ring: CoefficientRing, order: usize) -> Self {
        TruncSeries::from_normalized(ring, order, Vec::new())
    }

    pub fn one(ring: CoefficientRing, order: usize) -> Self {
        let one = ring.one();
        TruncSeries::from_normalized(ring, order, vec![one])
    }

    /// The generator `X`.
    pub fn x(ring: CoefficientRing, order: usize) -> Self {
        let one = ring.one();
        TruncSeries::from_normalized(ring, order, vec![Scalar::zero(), one])
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Scalar {
        self.coeffs.get(degree).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries::from_normalized(self.ring.clone(), order, self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        TruncSeries::from_normalized(self.ring.clone(), self.order, c)
    }

    /// Truncated Cauchy product at order `min(self.order, other.order)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let v = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        TruncSeries::from_normalized(self.ring.clone(), self.order, v)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = TruncSeries::one(self.ring.clone(), self.order);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let c = (0..=order)
            .map(|d| self.ring.add(&self.coeffs[d], &other.coeffs[d]))
            .collect();
        TruncSeries::from_normalized(self.ring.clone(), order, c)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut c = vec![Scalar::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                c[i + j] += a * b;
            }
        }
        let c = c.into_iter().map(|x| self.ring.normalize(x)).collect();
        TruncSeries::from_normalized(self.ring.clone(), order, c)
    }

    /// `self(inner(X))`, truncated at the smaller order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.ring.check_same(&inner.ring)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(format_rational(&inner.coeffs[0])));
        }
        Ok(self.substitute(inner))
    }

    /// Evaluates `self` at any zero-constant series (Horner's scheme).
    pub fn substitute<S: SeriesLike>(&self, inner: &S) -> S {
        debug_assert!(inner.has_zero_constant());
        let order = self.order.min(inner.order());
        let inner = inner.with_order(order);
        let mut acc = inner.zero_like();
        for k in (0..=order).rev() {
            acc = acc.mul(&inner).add(&inner.one_like().scale(&self.coeffs[k]));
        }
        acc
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let inv0 = self
            .ring
            .inverse(&self.coeffs[0])
            .ok_or_else(|| Error::NotAUnit(format_rational(&self.coeffs[0])))?;
        let mut b = vec![Scalar::zero(); self.order + 1];
        b[0] = inv0.clone();
        for n in 1..=self.order {
            let mut s = Scalar::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !b[n - k].is_zero() {
                    s += &self.coeffs[k] * &b[n - k];
                }
            }
            let s = self.ring.normalize(s);
            b[n] = self.ring.mul(&self.ring.neg(&s), &inv0);
        }
        Ok(TruncSeries::from_normalized(self.ring.clone(), self.order, b))
    }

    /// Compositional inverse `g` with `self(g(X)) = X`.
    ///
    /// Requires a zero constant term and a unit linear coefficient.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(format_rational(&self.coeffs[0])));
        }
        let a1 = self.coeff(1);
        let inv1 = self
            .ring
            .inverse(&a1)
            .ok_or_else(|| Error::NotAUnit(format_rational(&a1)))?;
        let x = TruncSeries::x(self.ring.clone(), self.order);
        let mut g = x.scale(&inv1);
        // each pass fixes one more degree of g
        for _ in 1..self.order {
            let err = self.substitute(&g).add_unchecked(&x.neg());
            if err.is_zero() {
                break;
            }
            g = g.add_unchecked(&err.scale(&inv1).neg());
        }
        Ok(g)
    }
}

impl PartialEq for TruncSeries {
    /// Equal when the rings match and the coefficients agree up to the
    /// smaller truncation order.
    fn eq(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        self.ring == other.ring && self.coeffs[..=order] == other.coeffs[..=order]
    }
}

impl SeriesLike for TruncSeries {
    fn ring(&self) -> &CoefficientRing {
        &self.ring
    }
    fn order(&self) -> usize {
        self.order
    }
    fn with_order(&self, order: usize) -> Self {
        self.truncate(order)
    }
    fn zero_like(&self) -> Self {
        TruncSeries::zero(self.ring.clone(), self.order)
    }
    fn one_like(&self) -> Self {
        TruncSeries::one(self.ring.clone(), self.order)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn scale(&self, c: &Scalar) -> Self {
        TruncSeries::scale(self, c)
    }
    fn has_zero_constant(&self) -> bool {
        self.coeffs[0].is_zero()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = format_rational(c);
            let (sign, body) = match s.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{body}")?,
                _ => {
                    if !c.abs_is_one() {
                        write!(f, "{body}*")?;
                    }
                    if d == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{d}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.order + 1)
    }
}

trait AbsIsOne {
    fn abs_is_one(&self) -> bool;
}

impl AbsIsOne for Scalar {
    fn abs_is_one(&self) -> bool {
        self.is_one() || (-self).is_one()
    }
}
