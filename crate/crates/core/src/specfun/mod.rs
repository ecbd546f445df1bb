//! Special functions and quadrature.

mod airy;
mod gamma;
mod quadrature;
mod sqrt;

pub use airy::{airy_ai, airy_ai_pair};
pub use gamma::gamma_real;
pub use quadrature::{gauss_legendre, integrate_line, QuadratureConfig};
pub use sqrt::{branched_sqrt, cut_sqrt, BranchedSqrtState};
