//! Steklov eigenpairs of planar domains and their use as a spectral basis for
//! the Laplace equation with Dirichlet or Robin boundary data.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: boundary parametrizations, conformal maps and the builtin domains.
//! - [`trig_tools`]: periodic grids, trapezoidal quadrature, discrete Fourier analysis and
//!   the logarithmic-kernel quadrature weights.
//! - [`numerics`]: dense linear algebra (generalized eigenproblems, QR, SVD, slope fits).
//! - [`layer_ops`]: discretized single layer and Neumann–Poincaré operators, interior
//!   potentials.
//! - [`steklov`]: the three eigenpair solvers plus the closed-form square spectrum.
//! - [`expansion`]: truncated Steklov series for Dirichlet and Robin problems and the error
//!   norms used to study their convergence.
//! - [`harness`]: experiment drivers, CSV output and SVG plots used by the `steklov` binary.

pub mod error;
pub mod expansion;
pub mod geometry;
pub mod harness;
pub mod layer_ops;
pub mod numerics;
pub mod steklov;
pub mod trig_tools;

pub use error::{Error, Result};
pub use num_complex::Complex64;
