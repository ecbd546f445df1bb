//! Hermite–Galerkin discretisation of `A(2k, θ)` and everything computed
//! from its eigenpairs.
//!
//! The basis is `√α φ_j(αx)`, `j = 0..N`, with `φ_j` the orthonormal Hermite
//! functions. In it the operator becomes `α² P² + e^{iθ} α^{-2k} X^{2k}`, a
//! complex-symmetric matrix with bandwidth `2k` that splits into even and odd
//! index blocks.

mod config;
pub(crate) mod fit;
mod galerkin;
mod hermite;
mod kappa;
mod solve;
mod wkb;

pub use config::{default_scale, DiscretizationConfig};
pub use fit::{fit_rate, RateFit};
pub use galerkin::{build_matrix, build_parity_blocks, parity_indices, ParityBlocks};
pub use hermite::{evaluate_eigenfunction, hermite_functions, resolvable_radius, EigenfunctionValues};
pub use kappa::{kappa_from_coeffs, Kappa, PRECISION_LIMIT};
pub use solve::{kappa_spectrum, solve_spectrum, Eigenpair, KappaEntry, SpectrumResult, RESIDUAL_TOL};
pub use wkb::{wkb_action, wkb_leading_error, WkbComparison, WKB_MAX_H};
