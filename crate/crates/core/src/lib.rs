//! Coupled Painleve III system in dimension four with affine Weyl group
//! symmetry, in two coordinate charts: a six-variable autonomous symmetric
//! form and a four-dimensional nonautonomous Hamiltonian form.
//!
//! The crate machine-verifies the structural claims about the system
//! (first integrals, invariant divisors, invariance under the five birational
//! symmetry generators, Hamiltonian consistency, the chart reduction, and the
//! pairwise relation orders of the generators) by exact rational evaluation
//! at random points, and numerically integrates both systems with
//! conservation-drift diagnostics.

pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod model;
pub mod scalar;
pub mod symmetry;
pub mod verify;

pub use error::{Error, PoleDivisor};
pub use model::{FState, Parameters, QPState, TimeChange};
pub use scalar::{Dual, Rat, Scalar, ScalarRef};
