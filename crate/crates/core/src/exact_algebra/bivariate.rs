use std::fmt;

use num_traits::Zero;

use super::rational::format_rational;
use super::{powers, CoefficientRing, Scalar, SeriesLike, TruncSeries};
use crate::error::{Error, Result};

/// Element of `k[[X, Y]]` truncated by total degree.
///
/// Row `i` holds the coefficients of `X^i Y^j` for `j = 0..=order-i`.
#[derive(Clone, Debug)]
pub struct BivariateSeries {
    ring: CoefficientRing,
    order: usize,
    rows: Vec<Vec<Scalar>>,
}

impl BivariateSeries {
    pub fn zero(ring: CoefficientRing, order: usize) -> Self {
        let rows = (0..=order).map(|i| vec![Scalar::zero(); order + 1 - i]).collect();
        BivariateSeries { ring, order, rows }
    }

    pub fn one(ring: CoefficientRing, order: usize) -> Self {
        let mut s = BivariateSeries::zero(ring, order);
        s.rows[0][0] = s.ring.one();
        s
    }

    pub fn x(ring: CoefficientRing, order: usize) -> Self {
        let mut s = BivariateSeries::zero(ring, order);
        if order >= 1 {
            s.rows[1][0] = s.ring.one();
        }
        s
    }

    pub fn y(ring: CoefficientRing, order: usize) -> Self {
        let mut s = BivariateSeries::zero(ring, order);
        if order >= 1 {
            s.rows[0][1] = s.ring.one();
        }
        s
    }

    /// Builds a series from `(i, j, c)` monomials; repeated monomials add up
    /// and monomials above the truncation order are dropped.
    pub fn from_terms(ring: CoefficientRing, order: usize, terms: &[(usize, usize, Scalar)]) -> Result<Self> {
        let mut s = BivariateSeries::zero(ring, order);
        for (i, j, c) in terms {
            if i + j <= order {
                let c = s.ring.element(c)?;
                s.rows[*i][*j] = s.ring.add(&s.rows[*i][*j], &c);
            }
        }
        Ok(s)
    }

    pub fn from_int_terms(ring: CoefficientRing, order: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut s = BivariateSeries::zero(ring, order);
        for &(i, j, c) in terms {
            if i + j <= order {
                let c = s.ring.int(c);
                s.rows[i][j] = s.ring.add(&s.rows[i][j], &c);
            }
        }
        s
    }

    /// `s(X)` viewed as a series in `X` and `Y`.
    pub fn from_x_series(s: &TruncSeries) -> Self {
        let mut out = BivariateSeries::zero(s.ring().clone(), s.order());
        for (i, c) in s.coeffs().iter().enumerate() {
            out.rows[i][0] = c.clone();
        }
        out
    }

    /// `s(Y)` viewed as a series in `X` and `Y`.
    pub fn from_y_series(s: &TruncSeries) -> Self {
        let mut out = BivariateSeries::zero(s.ring().clone(), s.order());
        for (j, c) in s.coeffs().iter().enumerate() {
            out.rows[0][j] = c.clone();
        }
        out
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        if i + j > self.order {
            return Scalar::zero();
        }
        self.rows[i][j].clone()
    }

    pub(crate) fn coeff_ref(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    /// Nonzero monomials in lexicographic `(i, j)` order.
    pub fn terms(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let rows = (0..=order).map(|i| self.rows[i][..=order - i].to_vec()).collect();
        BivariateSeries { ring: self.ring.clone(), order, rows }
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
        self.map(|c| self.ring.neg(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|x| self.ring.mul(x, c))
    }

    /// `F(Y, X)`.
    pub fn swap(&self) -> Self {
        let mut out = BivariateSeries::zero(self.ring.clone(), self.order);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out.rows[j][i] = c.clone();
            }
        }
        out
    }

    /// `F(X, 0)` as a series in `X`.
    pub fn at_y_zero(&self) -> TruncSeries {
        let c = self.rows.iter().map(|r| r[0].clone()).collect();
        TruncSeries::from_normalized(self.ring.clone(), self.order, c)
    }

    /// `F(0, Y)` as a series in `Y`.
    pub fn at_x_zero(&self) -> TruncSeries {
        TruncSeries::from_normalized(self.ring.clone(), self.order, self.rows[0].clone())
    }

    /// `F(a, b)` for zero-constant arguments in any series algebra.
    pub fn substitute<S: SeriesLike>(&self, a: &S, b: &S) -> Result<S> {
        self.ring.check_same(a.ring())?;
        self.ring.check_same(b.ring())?;
        if !a.has_zero_constant() || !b.has_zero_constant() {
            return Err(Error::NonzeroConstant("argument of F".into()));
        }
        let order = self.order.min(a.order()).min(b.order());
        let a = a.with_order(order);
        let b = b.with_order(order);
        let bpow = powers(&b, order);
        let mut acc = a.zero_like();
        for i in (0..=order).rev() {
            let mut inner = a.zero_like();
            for (j, c) in self.rows[i].iter().enumerate() {
                if !c.is_zero() {
                    inner = inner.add(&bpow[j].scale(c));
                }
            }
            acc = acc.mul(&a).add(&inner);
        }
        Ok(acc)
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(&f).collect()).collect();
        BivariateSeries { ring: self.ring.clone(), order: self.order, rows }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let rows = (0..=order)
            .map(|i| {
                (0..=order - i)
                    .map(|j| self.ring.add(&self.rows[i][j], &other.rows[i][j]))
                    .collect()
            })
            .collect();
        BivariateSeries { ring: self.ring.clone(), order, rows }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = BivariateSeries::zero(self.ring.clone(), order);
        let rhs = other.terms();
        for (i1, row) in self.rows.iter().enumerate().take(order + 1) {
            for (j1, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (i2, j2, b) in &rhs {
                    if i1 + j1 + i2 + j2 <= order {
                        out.rows[i1 + i2][j1 + j2] += a * b;
                    }
                }
            }
        }
        if let CoefficientRing::Mod(_) = self.ring {
            out = out.map(|c| self.ring.normalize(c.clone()));
        }
        out
    }
}

impl PartialEq for BivariateSeries {
    fn eq(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        self.ring == other.ring
            && (0..=order).all(|i| self.rows[i][..=order - i] == other.rows[i][..=order - i])
    }
}

impl SeriesLike for BivariateSeries {
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
        BivariateSeries::zero(self.ring.clone(), self.order)
    }
    fn one_like(&self) -> Self {
        BivariateSeries::one(self.ring.clone(), self.order)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn scale(&self, c: &Scalar) -> Self {
        BivariateSeries::scale(self, c)
    }
    fn has_zero_constant(&self) -> bool {
        self.rows[0][0].is_zero()
    }
}

impl fmt::Display for BivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (i, j, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", format_rational(c))?;
            match i {
                0 => {}
                1 => write!(f, "*X")?,
                _ => write!(f, "*X^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*Y")?,
                _ => write!(f, "*Y^{j}")?,
            }
        }
        write!(f, " + O(deg {})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoefficientRing {
        CoefficientRing::Rational
    }

    #[test]
    fn product_truncates_by_total_degree() {
        let xy = BivariateSeries::from_int_terms(q(), 3, &[(1, 0, 1), (0, 1, 1)]);
        let sq = xy.mul(&xy).unwrap();
        assert_eq!(sq.coeff(1, 1), Scalar::from_integer(2.into()));
        let cube = sq.mul(&xy).unwrap().mul(&xy).unwrap();
        assert!(cube.is_zero());
    }

    #[test]
    fn substitute_generators_is_identity() {
        let f = BivariateSeries::from_int_terms(q(), 5, &[(1, 0, 1), (0, 1, 1), (1, 1, 3), (2, 1, -1)]);
        let x = BivariateSeries::x(q(), 5);
        let y = BivariateSeries::y(q(), 5);
        assert_eq!(f.substitute(&x, &y).unwrap(), f);
        assert_eq!(f.substitute(&y, &x).unwrap(), f.swap());
    }

    #[test]
    fn restrictions() {
        let f = BivariateSeries::from_int_terms(q(), 4, &[(1, 0, 1), (0, 1, 1), (2, 0, 1)]);
        assert_eq!(f.at_y_zero(), TruncSeries::from_ints(q(), 4, &[0, 1, 1]));
        assert_eq!(f.at_x_zero(), TruncSeries::from_ints(q(), 4, &[0, 1]));
    }
}
