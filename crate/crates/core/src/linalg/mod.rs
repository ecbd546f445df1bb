//! Dense complex linear algebra.

mod eigen;
mod expm;
mod lu;
mod matrix;
mod svd;

pub use eigen::{eig, eigvals, hessenberg, EigenDecomposition};
pub use expm::expm;
pub use lu::Lu;
pub use matrix::{compensated_sum, compensated_sum_real, dot_conj, vec_norm, CMatrix};
pub use svd::{sigma_min, singular_values};
