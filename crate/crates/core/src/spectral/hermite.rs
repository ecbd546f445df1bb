use alloc::vec;
use alloc::vec::Vec;

use crate::C64;

/// `φ_0(x), …, φ_{n-1}(x)` by the three-term recurrence
/// `φ_j = √(2/j) x φ_{j-1} - √((j-1)/j) φ_{j-2}`.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    // π^{-1/4}
    const PI_M14: f64 = 0.751_125_544_464_942_5;
    out[0] = PI_M14 * libm::exp(-0.5 * x * x);
    if n > 1 {
        out[1] = core::f64::consts::SQRT_2 * x * out[0];
    }
    for j in 2..n {
        let jf = j as f64;
        out[j] = libm::sqrt(2.0 / jf) * x * out[j - 1] - libm::sqrt((jf - 1.0) / jf) * out[j - 2];
    }
    out
}

/// `√(2N)/α`: beyond this the basis cannot represent oscillation or decay.
pub fn resolvable_radius(basis_size: usize, scale: f64) -> f64 {
    libm::sqrt(2.0 * basis_size as f64) / scale
}

/// Pointwise values with a count of points outside the resolvable region.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenfunctionValues {
    pub values: Vec<C64>,
    /// `Σ_j |c_j φ_j(αx)|` per point, the scale of rounding error in `values`.
    pub magnitudes: Vec<f64>,
    pub out_of_range: usize,
    pub radius: f64,
}

impl EigenfunctionValues {
    pub fn has_range_warning(&self) -> bool {
        self.out_of_range > 0
    }
}

/// `Σ_j c_j φ_j(α x)` at each `x`.
///
/// The orthonormal basis function is `√α φ_j(αx)`; the factor `√α` is left out.
pub fn evaluate_eigenfunction(coeffs: &[C64], scale: f64, xs: &[f64]) -> EigenfunctionValues {
    let n = coeffs.len();
    let radius = resolvable_radius(n, scale);
    let mut values = Vec::with_capacity(xs.len());
    let mut magnitudes = Vec::with_capacity(xs.len());
    let mut out_of_range = 0;
    for &x in xs {
        if libm::fabs(x) > radius {
            out_of_range += 1;
        }
        let phis = hermite_functions(scale * x, n);
        let mut s = C64::new(0.0, 0.0);
        let mut m = 0.0;
        for (c, p) in coeffs.iter().zip(&phis) {
            s += c * *p;
            m += c.norm() * libm::fabs(*p);
        }
        values.push(s);
        magnitudes.push(m);
    }
    EigenfunctionValues {
        values,
        magnitudes,
        out_of_range,
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_line, QuadratureConfig};

    fn unit(n: usize, j: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[j] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn examples() {
        let pm14 = libm::pow(core::f64::consts::PI, -0.25);
        let e1 = evaluate_eigenfunction(&unit(8, 0), 1.0, &[0.0, 1.0]);
        assert!((e1.values[0].re - pm14).abs() < 1e-15);
        assert!((e1.values[1].re - pm14 * libm::exp(-0.5)).abs() < 1e-15);
        let e2 = evaluate_eigenfunction(&unit(8, 1), 1.0, &[0.0]);
        assert_eq!(e2.values[0], C64::new(0.0, 0.0));
        assert!(!e1.has_range_warning());
    }

    #[test]
    fn range_warning() {
        let r = evaluate_eigenfunction(&unit(8, 0), 1.0, &[3.0, 4.5, -5.0]);
        assert_eq!(r.out_of_range, 2);
        assert_eq!(r.radius, 4.0);
    }

    #[test]
    fn orthonormal_by_quadrature() {
        let cfg = QuadratureConfig::default();
        for (i, j) in [(0, 0), (3, 3), (7, 7), (2, 4), (5, 9)] {
            let f = |x: crate::C64| {
                let h = hermite_functions(x.re, 10);
                crate::C64::new(h[i] * h[j], 0.0)
            };
            let v = integrate_line(f, crate::C64::new(-12.0, 0.0), crate::C64::new(12.0, 0.0), &cfg).unwrap().re;
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "({i},{j}) -> {v}");
        }
    }
}
