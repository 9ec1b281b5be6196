//! Simulation toolkit for zeros of random polynomials drawn from weighted
//! L2 spaces of the complex plane.
//!
//! The crate builds orthonormal polynomial bases for several classical
//! weighted geometries, samples random coefficient vectors from a family of
//! ensembles, finds all complex zeros through balanced companion-matrix QR
//! iterations, and offers the statistical machinery (empirical measures,
//! equilibrium references, logarithmic moment bounds, expected real-zero
//! counts, central-limit diagnostics) needed to check the predicted
//! asymptotics numerically.
//!
//! Everything numeric is generic over the [`Scalar`] floating-point type;
//! `f64` aliases are exported at the crate root for the common case.

pub mod basis;
pub mod ensembles;
pub mod equilibrium;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod quadrature;
pub mod realzeros;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod stats;
pub mod zeros;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex number over the default `f64` scalar.
pub type C64 = num_complex::Complex<f64>;
