//! Reconstruction of band-limited functions from nonuniform samples with
//! Gaussian and hyper-Gaussian regularized Lagrange-type sampling series.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequences`]: uniform, perturbed and sine-type sampling sequences
//! * [`signals`]: closed-form band-limited test functions
//! * [`genfun`]: generating functions, interpolation bases and contour floors
//! * [`regularizers`]: Gaussian and hyper-Gaussian regularizers
//! * [`reconstruction`]: plans and the regularized sampling series
//! * [`bounds`]: explicit error bounds
//! * [`oracle`]: contour-integral and Laplace-method cross-checks
//! * [`harness`]: configuration-driven sweeps, rate fits and reports

// `!(x > 0.0)` rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod genfun;
pub mod harness;
pub mod numeric;
pub mod oracle;
pub mod quadrature;
pub mod reconstruction;
pub mod regularizers;
pub mod roots;
pub mod sequences;
pub mod signals;

pub use error::{Error, Result};
pub use num_complex::Complex64;
