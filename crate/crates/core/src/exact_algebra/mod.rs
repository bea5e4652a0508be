//! Exact coefficient rings and truncated formal power series.
//!
//! Every coefficient is a [`Scalar`] (an arbitrary-precision rational). A
//! [`CoefficientRing`] decides which scalars are admissible and how results
//! are normalised: integers keep denominator one, and `Z/n` keeps the
//! canonical representative in `[0, n)`.

mod bivariate;
mod rational;
mod ring;
mod series;

pub use bivariate::BivariateSeries;
pub use rational::{format_rational, parse_rational, rat, rat_int};
pub use ring::{CoefficientRing, Scalar};
pub use series::TruncSeries;

/// Minimal algebra interface used by power-series substitution.
///
/// Implementors are truncated series in some set of variables; all arguments
/// handed to one another are assumed to share a coefficient ring.
pub trait SeriesLike: Clone {
    fn ring(&self) -> &CoefficientRing;
    fn order(&self) -> usize;
    fn with_order(&self, order: usize) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn has_zero_constant(&self) -> bool;
}

/// Successive powers `s^0, s^1, ..., s^n`.
pub(crate) fn powers<S: SeriesLike>(s: &S, n: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(s.one_like());
    for k in 1..=n {
        let next = out[k - 1].mul(s);
        out.push(next);
    }
    out
}
