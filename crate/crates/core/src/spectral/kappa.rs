use crate::linalg::{compensated_sum, compensated_sum_real};
use crate::{Error, Result, C64};

/// Indices above this are flagged as precision-limited and left out of fits.
pub const PRECISION_LIMIT: f64 = 1e12;
const OVERFLOW_RATIO: f64 = 1e-300;

/// Instability index `κ = Σ|c_j|² / |Σ c_j²|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kappa {
    Value(f64),
    /// `|Σ c_j²|` vanished relative to `Σ|c_j|²`.
    Overflow,
}

impl Kappa {
    pub fn value(&self) -> Option<f64> {
        match self {
            Kappa::Value(v) => Some(*v),
            Kappa::Overflow => None,
        }
    }

    /// Finite and at most [`PRECISION_LIMIT`].
    pub fn fit_value(&self) -> Option<f64> {
        self.value().filter(|v| *v <= PRECISION_LIMIT)
    }

    pub fn is_precision_limited(&self) -> bool {
        match self {
            Kappa::Value(v) => *v > PRECISION_LIMIT,
            Kappa::Overflow => true,
        }
    }
}

pub fn kappa_from_coeffs(coeffs: &[C64]) -> Result<Kappa> {
    let num = compensated_sum_real(coeffs.iter().map(|c| c.norm_sqr()));
    if !(num > 0.0) {
        return Err(Error::Domain("instability index of a zero vector".into()));
    }
    let den = compensated_sum(coeffs.iter().map(|c| c * c)).norm();
    if den < OVERFLOW_RATIO * num {
        return Ok(Kappa::Overflow);
    }
    Ok(Kappa::Value((num / den).max(1.0)))
}
