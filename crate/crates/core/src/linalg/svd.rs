use alloc::vec::Vec;

use super::CMatrix;
use crate::C64;

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order, by one-sided Jacobi rotations.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let m = a.rows();
    let n = a.cols();
    // work on columns stored contiguously
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let ap = &mut left[p];
                let aq = &mut right[0];
                let alpha: f64 = ap.iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = aq.iter().map(|x| x.norm_sqr()).sum();
                let gamma: C64 = ap.iter().zip(aq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::hypot(1.0, zeta));
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                for i in 0..m {
                    let x = ap[i];
                    let y = aq[i] * phase;
                    ap[i] = x * c - y * s;
                    aq[i] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|x| x.norm_sqr()).sum::<f64>()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value, or zero for an empty matrix.
pub fn sigma_min(a: &CMatrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b], [0, d]] real: σ² are roots of s² - (a²+b²+d²)s + a²d²
        let (a, b, d) = (-0.1f64, 1.0f64, -0.1f64);
        let tr = a * a + b * b + d * d;
        let det = a * a * d * d;
        let smax = libm::sqrt((tr + libm::sqrt(tr * tr - 4.0 * det)) / 2.0);
        let smin = libm::sqrt(det) / smax;
        let m = CMatrix::from_rows(&[
            &[C64::new(a, 0.0), C64::new(b, 0.0)],
            &[C64::new(0.0, 0.0), C64::new(d, 0.0)],
        ]);
        assert!((sigma_min(&m) - smin).abs() < 1e-15);
        assert!((1.0 / smin - 100.990_195_135_927_85).abs() < 1e-9);
    }

    #[test]
    fn frobenius_norm_is_preserved() {
        let a = CMatrix::from_fn(9, 9, |i, j| {
            C64::new(libm::sin((i * 3 + j) as f64), libm::cos((i + 5 * j) as f64))
        });
        let sv = singular_values(&a);
        let fro2: f64 = sv.iter().map(|s| s * s).sum();
        assert!((fro2.sqrt() - a.norm_frobenius()).abs() < 1e-12 * a.norm_frobenius());
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
    }
}
