use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::exact_algebra::{format_rational, CoefficientRing, Scalar};

/// The carrier ring `k[[t]] / (t^(M+1))` on which derivations act.
///
/// Elements carry their own precision: a [`CarrierElem`] stores only the
/// coefficients it knows, so applying `D_m` (which can lower `t`-degree by
/// up to `m`) shortens the known prefix instead of inventing digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCarrier {
    base: CoefficientRing,
    degree_cap: usize,
}

/// Coefficients of `t^0 .. t^(len-1)`; everything above is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierElem {
    coeffs: Vec<Scalar>,
}

impl CarrierElem {
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Number of known coefficients.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first known coefficient where the two elements differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub(crate) fn truncated(&self, len: usize) -> Self {
        CarrierElem {
            coeffs: self.coeffs[..len.min(self.coeffs.len())].to_vec(),
        }
    }
}

impl fmt::Display for CarrierElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = format_rational(c);
            match (d, c.is_one()) {
                (0, _) => write!(f, "{s}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{s}*t")?,
                (_, true) => write!(f, "t^{d}")?,
                (_, false) => write!(f, "{s}*t^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.coeffs.len())
    }
}

impl PolyCarrier {
    pub fn new(base: CoefficientRing, degree_cap: usize) -> Self {
        PolyCarrier { base, degree_cap }
    }

    pub fn base(&self) -> &CoefficientRing {
        &self.base
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// Full precision: `M + 1` coefficients.
    pub fn full_precision(&self) -> usize {
        self.degree_cap + 1
    }

    pub fn zero(&self) -> CarrierElem {
        CarrierElem {
            coeffs: vec![Scalar::zero(); self.full_precision()],
        }
    }

    pub fn constant(&self, c: i64) -> CarrierElem {
        let mut e = self.zero();
        e.coeffs[0] = self.base.int(c);
        e
    }

    pub fn one(&self) -> CarrierElem {
        self.constant(1)
    }

    /// `t^n` (zero when `n > M`).
    pub fn t_pow(&self, n: usize) -> CarrierElem {
        let mut e = self.zero();
        if n <= self.degree_cap {
            e.coeffs[n] = self.base.one();
        }
        e
    }

    pub fn from_ints(&self, c: &[i64]) -> CarrierElem {
        let mut e = self.zero();
        for (d, &v) in c.iter().enumerate().take(self.full_precision()) {
            e.coeffs[d] = self.base.int(v);
        }
        e
    }

    /// Element known only to `precision` coefficients.
    pub fn from_scalars(&self, mut coeffs: Vec<Scalar>, precision: usize) -> CarrierElem {
        let precision = precision.min(self.full_precision());
        coeffs.resize(precision, Scalar::zero());
        CarrierElem {
            coeffs: coeffs.into_iter().map(|c| self.base.normalize(c)).collect(),
        }
    }

    /// Random element with small integer coefficients.
    pub fn random<R: Rng>(&self, rng: &mut R, max_degree: usize) -> CarrierElem {
        let mut e = self.zero();
        for d in 0..=max_degree.min(self.degree_cap) {
            e.coeffs[d] = self.base.int(rng.gen_range(-2..=2));
        }
        e
    }

    pub fn add(&self, a: &CarrierElem, b: &CarrierElem) -> CarrierElem {
        CarrierElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &CarrierElem, b: &CarrierElem) -> CarrierElem {
        CarrierElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.sub(x, y))
                .collect(),
        }
    }

    /// `a + c * b`, keeping the precision of both operands.
    pub fn add_scaled(&self, a: &CarrierElem, c: &Scalar, b: &CarrierElem) -> CarrierElem {
        if c.is_zero() {
            return a.truncated(b.precision());
        }
        CarrierElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.add(x, &self.base.mul(c, y)))
                .collect(),
        }
    }

    pub fn scale(&self, a: &CarrierElem, c: &Scalar) -> CarrierElem {
        CarrierElem {
            coeffs: a.coeffs.iter().map(|x| self.base.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &CarrierElem, b: &CarrierElem) -> CarrierElem {
        let len = a.precision().min(b.precision());
        let mut out = vec![Scalar::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        CarrierElem {
            coeffs: out.into_iter().map(|c| self.base.normalize(c)).collect(),
        }
    }
}
