//! Exact computer algebra around vertex rings and their characters.
//!
//! The crate is split along the objects it computes with:
//!
//! - [`exact_algebra`]: coefficient rings and truncated power series in one and two variables.
//! - [`fgl`]: one-dimensional commutative formal group laws.
//! - [`hs_vertex`]: Hasse-Schmidt derivations, F-derivations and the vertex operators they induce.
//! - [`modular_forms`]: q-expansions of Eisenstein series, eta powers, the discriminant and `j`.
//! - [`mlde`]: monic modular linear differential equations and their Frobenius solutions.
//! - [`pierce`]: idempotents, Boolean spectra and stalks of finite commutative rings.
//! - [`lattice_theta`]: integral lattices and their genus-one and genus-two theta series.

pub mod error;
pub mod exact_algebra;
pub mod fgl;
pub mod hs_vertex;
pub mod lattice_theta;
pub mod mlde;
pub mod modular_forms;
pub mod pierce;
pub mod report;

pub use error::{Error, Result};
pub use exact_algebra::{BivariateSeries, CoefficientRing, Scalar, TruncSeries};
