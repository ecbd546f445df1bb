use alloc::format;

use crate::asymptotics::weyl_modulus;
use crate::{Error, Result};

/// Basis size, coordinate scale and number of trusted eigenpairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscretizationConfig {
    pub basis_size: usize,
    /// Dilation `α`: basis functions are `φ_j(αx)`.
    pub scale: f64,
    pub n_max: usize,
}

/// `α = weyl_modulus(n_max, k)^{(k-1)/(4k)}`.
///
/// Balances `α² P²` against `α^{-2k} X^{2k}` at the top of the trusted window;
/// gives `α = 1` for `k = 1`.
pub fn default_scale(k: u32, n_max: usize) -> f64 {
    let kf = k as f64;
    libm::pow(weyl_modulus(n_max, k), (kf - 1.0) / (4.0 * kf))
}

impl DiscretizationConfig {
    pub fn new(basis_size: usize, scale: f64, n_max: usize) -> Result<Self> {
        let c = Self {
            basis_size,
            scale,
            n_max,
        };
        c.validate()?;
        Ok(c)
    }

    /// [`DiscretizationConfig::new`] with [`default_scale`].
    pub fn with_default_scale(k: u32, basis_size: usize, n_max: usize) -> Result<Self> {
        Self::new(basis_size, default_scale(k, n_max), n_max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::Config(format!("scale must be positive and finite, got {}", self.scale)));
        }
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be positive".into()));
        }
        if 4 * self.n_max > self.basis_size {
            return Err(Error::Config(format!(
                "n_max = {} exceeds basis_size/4 = {} (only the lowest quarter of a Galerkin spectrum is trusted)",
                self.n_max,
                self.basis_size / 4
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_trust_rule() {
        assert!(DiscretizationConfig::new(40, 1.0, 10).is_ok());
        assert!(matches!(DiscretizationConfig::new(39, 1.0, 10), Err(Error::Config(_))));
        assert!(DiscretizationConfig::new(40, 0.0, 10).is_err());
        assert!(DiscretizationConfig::new(40, 1.0, 0).is_err());
    }

    #[test]
    fn default_scale_values() {
        assert_eq!(default_scale(1, 25), 1.0);
        let a2 = default_scale(2, 25);
        assert!(a2 > 1.5 && a2 < 2.5);
        assert!(default_scale(3, 25) > a2);
    }
}
