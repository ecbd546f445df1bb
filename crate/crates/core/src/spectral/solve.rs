use alloc::vec::Vec;

use super::{build_parity_blocks, kappa_from_coeffs, DiscretizationConfig, Kappa};
use crate::asymptotics::OscillatorParams;
use crate::linalg::{compensated_sum, eig, vec_norm};
use crate::{Error, Result, C64};

/// Largest admissible `‖(A_N - λ)c‖` for a retained pair.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// One retained eigenpair. `index` is 1-based in order of `|λ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub index: usize,
    pub lambda: C64,
    /// Unit Euclidean norm, largest entry real positive.
    pub coeffs: Vec<C64>,
    pub kappa: Kappa,
}

impl Eigenpair {
    /// `0` for even eigenfunctions, `1` for odd.
    pub fn parity(&self) -> usize {
        (self.index + 1) % 2
    }

    /// Coefficients rescaled so that `Σ c_j² = 1` (the biorthogonal normalisation).
    pub fn biorthogonal_coeffs(&self) -> Vec<C64> {
        let s = compensated_sum(self.coeffs.iter().map(|c| c * c)).sqrt();
        self.coeffs.iter().map(|c| c / s).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub params: OscillatorParams,
    pub config: DiscretizationConfig,
    pub pairs: Vec<Eigenpair>,
    /// `‖(A_N - λ_n) c_n‖` per retained pair.
    pub residuals: Vec<f64>,
}

impl SpectrumResult {
    pub fn lambdas(&self) -> Vec<C64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }
}

struct Candidate {
    lambda: C64,
    parity: usize,
    vector: Vec<C64>,
    residual: f64,
}

/// Dense eigendecomposition of the even and odd blocks, merged and sorted by
/// `(|λ|, Re λ)`; the first `n_max` pairs are kept.
pub fn solve_spectrum(params: &OscillatorParams, config: &DiscretizationConfig) -> Result<SpectrumResult> {
    let blocks = build_parity_blocks(params, config)?;
    let mut cands = Vec::with_capacity(config.basis_size);
    for parity in 0..2 {
        let b = &blocks.blocks[parity];
        let e = eig(b)?;
        for (i, lambda) in e.values.iter().enumerate() {
            let v = e.vectors.column(i);
            let bv = b.matvec(&v);
            let r: Vec<C64> = bv.iter().zip(&v).map(|(x, y)| x - lambda * y).collect();
            cands.push(Candidate {
                lambda: *lambda,
                parity,
                vector: v,
                residual: vec_norm(&r),
            });
        }
    }
    cands.sort_by(|a, b| {
        a.lambda
            .norm()
            .total_cmp(&b.lambda.norm())
            .then(a.lambda.re.total_cmp(&b.lambda.re))
    });
    let mut pairs = Vec::with_capacity(config.n_max);
    let mut residuals = Vec::with_capacity(config.n_max);
    for (i, c) in cands.into_iter().take(config.n_max).enumerate() {
        let index = i + 1;
        if !(c.residual <= RESIDUAL_TOL) {
            return Err(Error::Accuracy {
                index,
                residual: c.residual,
            });
        }
        let mut coeffs = blocks.embed(c.parity, &c.vector);
        fix_phase(&mut coeffs);
        let kappa = kappa_from_coeffs(&coeffs)?;
        pairs.push(Eigenpair {
            index,
            lambda: c.lambda,
            coeffs,
            kappa,
        });
        residuals.push(c.residual);
    }
    Ok(SpectrumResult {
        params: *params,
        config: *config,
        pairs,
        residuals,
    })
}

/// Unit norm, largest-modulus entry real positive.
fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > v[best].norm() {
            best = i;
        }
    }
    let p = v[best];
    let rot = p.conj() / p.norm();
    let n = vec_norm(v);
    for x in v.iter_mut() {
        *x = *x * rot / n;
    }
    v[best] = C64::new(v[best].norm(), 0.0);
}

/// `(n, |λ_n|, κ_n)` for every retained pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaEntry {
    pub n: usize,
    pub modulus: f64,
    pub kappa: Kappa,
}

pub fn kappa_spectrum(params: &OscillatorParams, config: &DiscretizationConfig) -> Result<Vec<KappaEntry>> {
    Ok(solve_spectrum(params, config)?
        .pairs
        .iter()
        .map(|p| KappaEntry {
            n: p.index,
            modulus: p.lambda.norm(),
            kappa: p.kappa,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{rate_c, weyl_modulus};
    use crate::linalg::CMatrix;
    use crate::spectral::{build_matrix, fit_rate};
    use core::f64::consts::{FRAC_PI_2, PI};

    fn p(k: u32, t: f64) -> OscillatorParams {
        OscillatorParams::new(k, t).unwrap()
    }

    fn cfg(k: u32, n: usize, n_max: usize) -> DiscretizationConfig {
        DiscretizationConfig::with_default_scale(k, n, n_max).unwrap()
    }

    #[test]
    fn harmonic_eigenvalues_exact() {
        let r = solve_spectrum(&p(1, 0.0), &DiscretizationConfig::new(64, 1.0, 10).unwrap()).unwrap();
        for (i, pair) in r.pairs.iter().enumerate() {
            assert!((pair.lambda - C64::new(2.0 * i as f64 + 1.0, 0.0)).norm() < 1e-12);
            assert_eq!(pair.index, i + 1);
        }
    }

    #[test]
    fn rotated_harmonic() {
        let r = solve_spectrum(&p(1, PI / 3.0), &DiscretizationConfig::new(120, 1.0, 10).unwrap()).unwrap();
        for (i, pair) in r.pairs.iter().enumerate() {
            let want = C64::from_polar(2.0 * i as f64 + 1.0, PI / 6.0);
            assert!((pair.lambda - want).norm() < 1e-10, "n={} {}", i + 1, pair.lambda);
        }
    }

    #[test]
    fn quartic_weyl_and_half_line() {
        let r = solve_spectrum(&p(2, 0.0), &cfg(2, 200, 10)).unwrap();
        let l10 = r.pairs[9].lambda.norm();
        assert!((l10 / weyl_modulus(9, 2) - 1.0).abs() < 0.01);

        let r = solve_spectrum(&p(1, 1.0), &cfg(1, 200, 10)).unwrap();
        for pair in &r.pairs {
            assert!((pair.lambda.arg() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn invariants_on_rotated_quartic() {
        let q = p(2, 0.6);
        let r = solve_spectrum(&q, &cfg(2, 160, 12)).unwrap();
        let r0 = solve_spectrum(&p(2, 0.0), &cfg(2, 160, 12)).unwrap();
        let rot = C64::from_polar(1.0, 0.6 / 3.0);
        for (a, b) in r.pairs.iter().zip(&r0.pairs) {
            // rotation identity
            assert!((a.lambda - rot * b.lambda).norm() < 1e-9 * b.lambda.norm().max(1.0));
            // unit norm, positive leading entry, pure parity, κ ≥ 1
            assert!((vec_norm(&a.coeffs) - 1.0).abs() < 1e-14);
            for (j, c) in a.coeffs.iter().enumerate() {
                if j % 2 != a.parity() {
                    assert_eq!(*c, C64::new(0.0, 0.0));
                }
            }
            assert!(a.kappa.value().unwrap() >= 1.0);
        }
        for w in r.pairs.windows(2) {
            assert!(w[0].lambda.norm() <= w[1].lambda.norm());
        }
        assert!(r.residuals.iter().all(|x| *x <= RESIDUAL_TOL));
    }

    #[test]
    fn biorthogonality() {
        for (k, th) in [(1, 1.0), (2, 0.6)] {
            let r = solve_spectrum(&p(k, th), &cfg(k, 160, 10)).unwrap();
            let b: Vec<Vec<C64>> = r.pairs.iter().map(|x| x.biorthogonal_coeffs()).collect();
            for n in 0..10 {
                for m in 0..10 {
                    let s: C64 = b[n].iter().zip(&b[m]).map(|(x, y)| x * y).sum();
                    let want = if n == m { 1.0 } else { 0.0 };
                    assert!((s - want).norm() < 1e-8, "k={k} ({n},{m}) {s}");
                }
            }
        }
    }

    #[test]
    fn selfadjoint_kappa_is_one() {
        for k in 1..=3 {
            for e in kappa_spectrum(&p(k, 0.0), &cfg(k, 120, 15)).unwrap() {
                assert!((e.kappa.value().unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kappa_growth_k1() {
        let q = p(1, FRAC_PI_2);
        let e = kappa_spectrum(&q, &cfg(1, 300, 25)).unwrap();
        for w in e[2..].windows(2) {
            assert!(w[1].kappa.value().unwrap() > w[0].kappa.value().unwrap());
        }
        let pts: Vec<(usize, Kappa)> = e.iter().map(|x| (x.n, x.kappa)).collect();
        let f = fit_rate(&pts, 10, 25).unwrap();
        let c = rate_c(&q).unwrap();
        assert!((f.plain_slope / c - 1.0).abs() < 0.1);
        assert!((f.slope / c - 1.0).abs() < 0.1);
    }

    #[test]
    fn basis_size_stability() {
        let q = p(2, 0.8);
        let a = kappa_spectrum(&q, &DiscretizationConfig::new(150, 1.9, 15).unwrap()).unwrap();
        let b = kappa_spectrum(&q, &DiscretizationConfig::new(200, 1.9, 15).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let (u, v) = (x.kappa.value().unwrap(), y.kappa.value().unwrap());
            assert!(((u - v) / v).abs() < 1e-6, "n={}: {u} vs {v}", x.n);
        }
    }

    #[test]
    fn accuracy_violation_is_reported() {
        // far too small a basis for 6 pairs of a rotated sextic
        let q = p(3, 1.0);
        let c = DiscretizationConfig::new(24, 1.0, 6).unwrap();
        let m: CMatrix = build_matrix(&q, &c).unwrap();
        assert!(m.rows() == 24);
        match solve_spectrum(&q, &c) {
            Ok(r) => assert!(r.residuals.iter().all(|x| *x <= RESIDUAL_TOL)),
            Err(Error::Accuracy { index, .. }) => assert!(index >= 1),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
