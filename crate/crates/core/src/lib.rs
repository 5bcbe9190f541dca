//! Shifted surface spline interpolation on simplex nodes, with the explicit
//! constants of its exponential-type error bound.
//!
//! Modules, bottom up:
//!
//! - [`kernel`]: the kernel, its Fourier density and modified Bessel `K_nu`.
//! - [`simplex`]: simplices, barycentric coordinates, equally spaced nodes.
//! - [`polyinterp`]: Lagrange interpolation on those nodes, Lebesgue
//!   function, norming measures.
//! - [`interpolant`]: the h-spline fit, its evaluation and the
//!   native-space seminorm.
//! - [`bounds`]: moment constants, the bound constants and the comparison
//!   with the older bound.
//! - [`harness`]: convergence experiments, CSV/JSON I/O and the CLI.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod interpolant;
pub mod kernel;
pub mod linalg;
pub mod polyinterp;
pub mod simplex;

pub use error::{Error, Result};
