//! Numerical core for the complex-rotated anharmonic oscillators
//!
//! ```text
//! A(2k, θ) = -d²/dx² + e^{iθ} x^{2k},   k ≥ 1,  |θ| < (k+1)π/(2k)
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. It provides:
//!
//! - [`specfun`]: real Gamma, complex Airy `Ai`, a branch-tracked square root
//!   and adaptive Gauss–Legendre integration along straight complex segments.
//! - [`asymptotics`]: closed-form quantities of the large-index theory (saddle
//!   point, phase, exponential rate `c_k(θ)`, Laplace prefactor, Weyl law,
//!   semigroup threshold).
//! - [`spectral`]: Hermite–Galerkin discretisation, dense eigensolve,
//!   instability indices, eigenfunction evaluation and WKB comparison.
//! - [`pseudospectra`]: resolvent norms, grids and the pseudospectral disk check.
//! - [`semigroup`]: the projection series `Σ e^{-tλ_n} Π_n`.
//! - [`linalg`]: the dense complex linear algebra all of the above rely on.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod error;
pub mod linalg;
pub mod pseudospectra;
pub mod semigroup;
pub mod specfun;
pub mod spectral;

pub use num_complex::Complex64 as C64;

pub use asymptotics::{AsymptoticReport, OscillatorParams};
pub use error::{Error, Result};
pub use pseudospectra::{GridSpec, ResolventGrid, ResolventNorm};
pub use semigroup::{Convergence, SemigroupSeriesReport};
pub use spectral::{DiscretizationConfig, Eigenpair, Kappa, SpectrumResult};
