use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::format_rational;
use crate::error::{Error, Result};

/// Exact scalar used as the storage type for every coefficient ring.
pub type Scalar = BigRational;

/// The scalar ring `k` a series lives over.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Rational,
    Integer,
    Mod(u64),
}

impl CoefficientRing {
    pub fn modulo(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("Z/{n} needs n >= 2")));
        }
        Ok(CoefficientRing::Mod(n))
    }

    pub fn is_q_algebra(&self) -> bool {
        matches!(self, CoefficientRing::Rational)
    }

    /// Maps an arbitrary rational into the ring, failing when its
    /// denominator is not invertible there.
    pub fn element(&self, x: &Scalar) -> Result<Scalar> {
        let not_repr = || Error::NotRepresentable {
            value: format_rational(x),
            ring: self.to_string(),
        };
        match self {
            CoefficientRing::Rational => Ok(x.clone()),
            CoefficientRing::Integer => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(not_repr())
                }
            }
            CoefficientRing::Mod(n) => {
                let n = BigInt::from(*n);
                let den = x.denom().mod_floor(&n);
                let inv = mod_inverse(&den, &n).ok_or_else(not_repr)?;
                let v = (x.numer().mod_floor(&n) * inv).mod_floor(&n);
                Ok(Scalar::from_integer(v))
            }
        }
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.normalize(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    /// Canonical form of a sum or product of ring elements.
    pub(crate) fn normalize(&self, x: Scalar) -> Scalar {
        match self {
            CoefficientRing::Mod(n) => {
                debug_assert!(x.is_integer());
                Scalar::from_integer(x.numer().mod_floor(&BigInt::from(*n)))
            }
            _ => x,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a - b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(-a)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return Scalar::zero();
        }
        self.normalize(a * b)
    }

    pub fn inverse(&self, a: &Scalar) -> Option<Scalar> {
        match self {
            CoefficientRing::Rational => {
                if a.is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            CoefficientRing::Integer => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            CoefficientRing::Mod(n) => {
                let n = BigInt::from(*n);
                mod_inverse(&a.numer().mod_floor(&n), &n).map(Scalar::from_integer)
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inverse(a).is_some()
    }

    pub(crate) fn check_same(&self, other: &CoefficientRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(n);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(n))
    } else {
        None
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Rational => write!(f, "Q"),
            CoefficientRing::Integer => write!(f, "Z"),
            CoefficientRing::Mod(n) => write!(f, "Z/{n}"),
        }
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "QQ" => Ok(CoefficientRing::Rational),
            "Z" | "ZZ" => Ok(CoefficientRing::Integer),
            other => {
                let n = other
                    .strip_prefix("Z/")
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidRing(other.to_string()))?;
                CoefficientRing::modulo(n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn mod_n_reduces_to_canonical_representative() {
        let r = CoefficientRing::Mod(6);
        assert_eq!(r.add(&rat(5, 1), &rat(4, 1)), rat(3, 1));
        assert_eq!(r.neg(&rat(1, 1)), rat(5, 1));
        assert_eq!(r.mul(&rat(3, 1), &rat(4, 1)), rat(0, 1));
        assert_eq!(r.element(&rat(-17, 1)).unwrap(), rat(1, 1));
    }

    #[test]
    fn rational_into_mod_n() {
        let r = CoefficientRing::Mod(7);
        // 1/2 = 4 mod 7
        assert_eq!(r.element(&rat(1, 2)).unwrap(), rat(4, 1));
        assert!(CoefficientRing::Mod(6).element(&rat(1, 2)).is_err());
        assert!(CoefficientRing::Integer.element(&rat(1, 2)).is_err());
    }

    #[test]
    fn units() {
        assert!(CoefficientRing::Mod(6).is_unit(&rat(5, 1)));
        assert!(!CoefficientRing::Mod(6).is_unit(&rat(3, 1)));
        assert!(CoefficientRing::Integer.is_unit(&rat(-1, 1)));
        assert!(!CoefficientRing::Integer.is_unit(&rat(2, 1)));
        assert!(!CoefficientRing::Rational.is_unit(&rat(0, 1)));
    }

    #[test]
    fn parse() {
        assert_eq!("Q".parse::<CoefficientRing>().unwrap(), CoefficientRing::Rational);
        assert_eq!("Z/12".parse::<CoefficientRing>().unwrap(), CoefficientRing::Mod(12));
        assert!("Z/1".parse::<CoefficientRing>().is_err());
        assert!("R".parse::<CoefficientRing>().is_err());
    }
}
