//! Resolvent norms `‖(A_N - z)^{-1}‖` of the Galerkin matrix on complex grids.
//!
//! `σ_min(M - z)` is taken blockwise over the even and odd parity blocks,
//! which is exact because the matrix is block diagonal in that ordering.
//! Blocks of size up to [`DENSE_SVD_MAX`] use a full Jacobi SVD; larger ones
//! use inverse iteration on `(M - z)^H (M - z)` through an LU factorisation,
//! seeded from the previous node of the same grid row.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::asymptotics::{weyl_modulus, OscillatorParams};
use crate::linalg::{sigma_min, vec_norm, CMatrix, Lu};
use crate::spectral::{build_parity_blocks, solve_spectrum, DiscretizationConfig, ParityBlocks};
use crate::{Error, Result, C64};

/// Largest block handled by the dense SVD.
pub const DENSE_SVD_MAX: usize = 64;
/// `σ_min < SINGULAR_RTOL·‖M‖_F` is reported as [`ResolventNorm::Infinite`].
pub const SINGULAR_RTOL: f64 = 1e-14;
/// Cap on `nx·ny`.
pub const MAX_GRID_NODES: usize = 1_000_000;
/// Fraction of `|λ_{n_max}|` inside which grid nodes are trusted.
pub const TRUSTED_FRACTION: f64 = 0.8;
const INVERSE_ITERATION_RTOL: f64 = 1e-12;
const INVERSE_ITERATION_MAX: usize = 500;

/// `1/σ_min(M - z)`, or the sentinel at (numerical) eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResolventNorm {
    Finite(f64),
    Infinite,
}

impl ResolventNorm {
    /// `f64::INFINITY` for the sentinel.
    pub fn value(self) -> f64 {
        match self {
            ResolventNorm::Finite(v) => v,
            ResolventNorm::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ResolventNorm::Infinite)
    }
}

/// Resolvent norm of a single square matrix.
pub fn resolvent_norm(matrix: &CMatrix, z: C64) -> ResolventNorm {
    assert!(matrix.is_square(), "resolvent_norm needs a square matrix");
    let floor = SINGULAR_RTOL * matrix.norm_frobenius();
    let (s, _) = sigma_min_seeded(&matrix.shifted(z), None);
    classify(s, floor)
}

fn classify(s: f64, floor: f64) -> ResolventNorm {
    if !(s >= floor) || s == 0.0 {
        ResolventNorm::Infinite
    } else {
        ResolventNorm::Finite(1.0 / s)
    }
}

/// Smallest singular value and, for the iterative path, the converged right
/// singular vector estimate.
fn sigma_min_seeded(b: &CMatrix, seed: Option<&[C64]>) -> (f64, Option<Vec<C64>>) {
    let n = b.rows();
    if n <= DENSE_SVD_MAX {
        return (sigma_min(b), None);
    }
    let lu = Lu::new(b);
    if lu.is_singular() {
        return (0.0, None);
    }
    let mut x: Vec<C64> = match seed {
        Some(s) if s.len() == n && vec_norm(s) > 0.0 => s.to_vec(),
        _ => (0..n).map(|j| C64::new(1.0, 0.25 * (j % 7) as f64)).collect(),
    };
    let nx = vec_norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut est = 0.0;
    for _ in 0..INVERSE_ITERATION_MAX {
        // x ← (B^H B)^{-1} x
        let w = lu.solve_adjoint(&x);
        let v = lu.solve(&w);
        let nw = vec_norm(&w);
        let nv = vec_norm(&v);
        if !(nv.is_finite() && nw.is_finite()) || nv == 0.0 {
            return (0.0, None);
        }
        // ‖B^{-H}x‖ increases monotonically towards 1/σ_min
        let next = nw;
        x = v.into_iter().map(|c| c / nv).collect();
        let done = (next - est).abs() <= INVERSE_ITERATION_RTOL * next;
        est = next;
        if done {
            break;
        }
    }
    (1.0 / est, Some(x))
}

/// Rectangle `[re_min, re_max] × [im_min, im_max]` sampled on `nx × ny` nodes,
/// endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self {
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::Config(format!(
                "grid needs re_min < re_max and im_min < im_max, got [{}, {}] x [{}, {}]",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Config("grid resolution must be positive".into()));
        }
        if self.nx.saturating_mul(self.ny) > MAX_GRID_NODES {
            return Err(Error::Config(format!(
                "grid has {} x {} nodes, above the cap of {MAX_GRID_NODES}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    fn coord(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        if n == 1 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Node in column `ix`, row `iy`.
    pub fn node(&self, ix: usize, iy: usize) -> C64 {
        C64::new(
            Self::coord(self.re_min, self.re_max, ix, self.nx),
            Self::coord(self.im_min, self.im_max, iy, self.ny),
        )
    }
}

/// Parity blocks of a Galerkin matrix, ready for resolvent evaluation.
#[derive(Clone, Debug)]
pub struct ResolventOperator {
    blocks: ParityBlocks,
    floor: f64,
}

impl ResolventOperator {
    pub fn new(params: &OscillatorParams, config: &DiscretizationConfig) -> Result<Self> {
        Ok(Self::from_blocks(build_parity_blocks(params, config)?))
    }

    pub fn from_blocks(blocks: ParityBlocks) -> Self {
        let fro = blocks
            .blocks
            .iter()
            .map(|b| b.norm_frobenius() * b.norm_frobenius())
            .sum::<f64>();
        Self {
            blocks,
            floor: SINGULAR_RTOL * libm::sqrt(fro),
        }
    }

    pub fn norm_at(&self, z: C64) -> ResolventNorm {
        self.norm_seeded(z, &mut [None, None])
    }

    fn norm_seeded(&self, z: C64, seeds: &mut [Option<Vec<C64>>; 2]) -> ResolventNorm {
        let mut s = f64::INFINITY;
        for (b, seed) in self.blocks.blocks.iter().zip(seeds.iter_mut()) {
            let (sb, v) = sigma_min_seeded(&b.shifted(z), seed.as_deref());
            *seed = v;
            s = s.min(sb);
        }
        classify(s, self.floor)
    }

    /// One grid row, left to right, with continuation seeding.
    pub fn row(&self, spec: &GridSpec, iy: usize) -> Vec<f64> {
        let mut seeds = [None, None];
        (0..spec.nx)
            .map(|ix| self.norm_seeded(spec.node(ix, iy), &mut seeds).value())
            .collect()
    }
}

/// Resolvent norms on a grid, row-major with `values[iy·nx + ix]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub params: OscillatorParams,
    pub config: DiscretizationConfig,
    /// `0.8·|λ_{n_max}|` from the leading Weyl term.
    pub trusted_radius: f64,
    /// Nodes with `|z|` beyond `trusted_radius`.
    pub untrusted_nodes: usize,
}

impl ResolventGrid {
    /// Assembles a grid from rows computed by [`ResolventOperator::row`].
    pub fn from_rows(
        params: &OscillatorParams,
        config: &DiscretizationConfig,
        spec: &GridSpec,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        spec.validate()?;
        if rows.len() != spec.ny || rows.iter().any(|r| r.len() != spec.nx) {
            return Err(Error::Config("row count or length does not match the grid".into()));
        }
        let trusted_radius = TRUSTED_FRACTION * weyl_modulus(config.n_max - 1, params.k());
        let mut untrusted_nodes = 0;
        for iy in 0..spec.ny {
            for ix in 0..spec.nx {
                if spec.node(ix, iy).norm() > trusted_radius {
                    untrusted_nodes += 1;
                }
            }
        }
        Ok(Self {
            spec: *spec,
            values: rows.into_iter().flatten().collect(),
            params: *params,
            config: *config,
            trusted_radius,
            untrusted_nodes,
        })
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.spec.nx + ix]
    }

    pub fn has_truncation_warning(&self) -> bool {
        self.untrusted_nodes > 0
    }
}

/// Resolvent norms of the Galerkin matrix at every grid node.
pub fn grid(params: &OscillatorParams, config: &DiscretizationConfig, spec: &GridSpec) -> Result<ResolventGrid> {
    spec.validate()?;
    let op = ResolventOperator::new(params, config)?;
    let rows = (0..spec.ny).map(|iy| op.row(spec, iy)).collect();
    ResolventGrid::from_rows(params, config, spec, rows)
}

/// `(δ, ‖(A_N - z)^{-1}‖·δ/κ_n)` at `z = λ_n + δ·i·λ_n/|λ_n|`, perpendicular
/// to the eigenvalue half-line on its counterclockwise side.
pub fn disk_inclusion_check(
    params: &OscillatorParams,
    config: &DiscretizationConfig,
    n: usize,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if n == 0 || n > config.n_max {
        return Err(Error::Precondition(format!("index {n} outside 1..={}", config.n_max)));
    }
    let spec = solve_spectrum(params, config)?;
    let pair = &spec.pairs[n - 1];
    let kappa = pair.kappa.value().ok_or_else(|| {
        Error::PrecisionLimited(format!("κ_{n} overflows double precision"))
    })?;
    let gap = spec
        .pairs
        .iter()
        .filter(|p| p.index != n)
        .map(|p| (p.lambda - pair.lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let dir = C64::new(0.0, 1.0) * pair.lambda / pair.lambda.norm();
    let op = ResolventOperator::new(params, config)?;
    let mut out = vec![];
    for &d in deltas {
        if !(d > 0.0) || d > 0.5 * gap {
            return Err(Error::Precondition(format!(
                "delta {d} must be positive and at most half the gap {gap} at λ_{n}"
            )));
        }
        let r = op.norm_at(pair.lambda + dir * d);
        out.push((d, r.value() * d / kappa));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigvals;
    use core::f64::consts::FRAC_PI_2;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p(k: u32, t: f64) -> OscillatorParams {
        OscillatorParams::new(k, t).unwrap()
    }

    /// Deterministic dense test matrix with spread-out spectrum.
    fn test_matrix(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let x = ((i * 37 + j * 101) % 53) as f64 / 53.0 - 0.5;
            let y = ((i * 13 + j * 29) % 31) as f64 / 31.0 - 0.5;
            let d = if i == j { i as f64 } else { 0.0 };
            c(d + x, y)
        })
    }

    #[test]
    fn diagonal_example() {
        let m = CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!((resolvent_norm(&m, c(0.0, 0.0)).value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jordan_block_example() {
        let m = CMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        // [[a,1],[0,a]]: s1·s2 = a², s1² + s2² = 2a² + 1
        let a2: f64 = 0.01;
        let sum = 2.0 * a2 + 1.0;
        let smax = libm::sqrt(0.5 * (sum + libm::sqrt(sum * sum - 4.0 * a2 * a2)));
        let want = smax / a2;
        let got = resolvent_norm(&m, c(0.1, 0.0)).value();
        assert!((got / want - 1.0).abs() < 1e-12, "{got} vs {want}");
        assert!((got - 100.99019513592785).abs() < 1e-9);
    }

    #[test]
    fn sentinel_at_eigenvalue() {
        let m = CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(resolvent_norm(&m, c(2.0, 0.0)).is_infinite());
        let q = p(1, 0.0);
        let cfg = DiscretizationConfig::new(200, 1.0, 20).unwrap();
        let g = grid(&q, &cfg, &GridSpec::new(1.0, 3.0, -1.0, 1.0, 2, 3).unwrap()).unwrap();
        assert_eq!(g.value(0, 1), f64::INFINITY);
        assert_eq!(g.value(1, 1), f64::INFINITY);
        assert!(g.value(0, 0).is_finite());
    }

    #[test]
    fn iterative_path_matches_dense_svd() {
        let m = test_matrix(90);
        for z in [c(0.3, 0.2), c(10.5, -1.0), c(44.9, 0.01), c(-5.0, 3.0)] {
            let dense = 1.0 / sigma_min(&m.shifted(z));
            let iter = resolvent_norm(&m, z).value();
            assert!((iter / dense - 1.0).abs() < 1e-9, "{z}: {iter} vs {dense}");
        }
    }

    #[test]
    fn blockwise_equals_full_matrix() {
        let q = p(2, 0.6);
        let cfg = DiscretizationConfig::with_default_scale(2, 100, 20).unwrap();
        let op = ResolventOperator::new(&q, &cfg).unwrap();
        let m = crate::spectral::build_matrix(&q, &cfg).unwrap();
        for z in [c(3.0, 1.0), c(10.0, 5.0), c(0.0, -2.0)] {
            let full = 1.0 / sigma_min(&m.shifted(z));
            assert!((op.norm_at(z).value() / full - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lower_bound_by_distance_to_spectrum() {
        let q = p(2, 0.6);
        let cfg = DiscretizationConfig::with_default_scale(2, 80, 20).unwrap();
        let m = crate::spectral::build_matrix(&q, &cfg).unwrap();
        let ev = eigvals(&m).unwrap();
        let spec = GridSpec::new(-2.0, 20.0, -4.0, 12.0, 9, 7).unwrap();
        let g = grid(&q, &cfg, &spec).unwrap();
        for iy in 0..spec.ny {
            for ix in 0..spec.nx {
                let z = spec.node(ix, iy);
                let d = ev.iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(g.value(ix, iy) >= (1.0 - 1e-9) / d);
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let cfg = DiscretizationConfig::with_default_scale(2, 100, 20).unwrap();
        let a = grid(&p(2, 0.6), &cfg, &GridSpec::new(0.0, 15.0, -6.0, 6.0, 6, 5).unwrap()).unwrap();
        let b = grid(&p(2, -0.6), &cfg, &GridSpec::new(0.0, 15.0, -6.0, 6.0, 6, 5).unwrap()).unwrap();
        for iy in 0..5 {
            for ix in 0..6 {
                let (u, v) = (a.value(ix, iy), b.value(ix, 4 - iy));
                assert!((u / v - 1.0).abs() < 1e-9, "({ix},{iy}) {u} {v}");
            }
        }
    }

    #[test]
    fn decay_outside_numerical_range() {
        // W(A_N) lies in the sector 0 ≤ arg ≤ θ, so on the negative imaginary
        // axis ‖R(z)‖ ≤ 1/|z|
        let q = p(1, FRAC_PI_2);
        let cfg = DiscretizationConfig::new(200, 1.0, 25).unwrap();
        let op = ResolventOperator::new(&q, &cfg).unwrap();
        for r in [5.0, 10.0, 20.0, 40.0] {
            let prod = op.norm_at(c(0.0, -r)).value() * r;
            assert!(prod <= 1.0 + 1e-12 && prod > 0.5, "r={r}: {prod}");
        }
    }

    #[test]
    fn determinism_and_blow_up() {
        let q = p(1, FRAC_PI_2);
        let cfg = DiscretizationConfig::new(160, 1.0, 25).unwrap();
        let spec = GridSpec::new(0.5, 4.0, 0.5, 4.0, 8, 4).unwrap();
        let a = grid(&q, &cfg, &spec).unwrap();
        let b = grid(&q, &cfg, &spec).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));

        let l1 = solve_spectrum(&q, &cfg).unwrap().pairs[0].lambda;
        let op = ResolventOperator::new(&q, &cfg).unwrap();
        let start = l1 + c(-0.5, 0.3);
        let vals: Vec<f64> = (0..12)
            .map(|i| op.norm_at(l1 + (start - l1) * libm::pow(0.5, i as f64)).value())
            .collect();
        for w in vals[4..].windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn truncation_warning() {
        let q = p(1, 0.0);
        let cfg = DiscretizationConfig::new(80, 1.0, 10).unwrap();
        let inside = grid(&q, &cfg, &GridSpec::new(0.0, 10.0, -2.0, 2.0, 3, 3).unwrap()).unwrap();
        assert!(!inside.has_truncation_warning());
        let outside = grid(&q, &cfg, &GridSpec::new(0.0, 30.0, -2.0, 2.0, 3, 3).unwrap()).unwrap();
        assert_eq!(outside.untrusted_nodes, 3);
        assert!((outside.trusted_radius - 0.8 * 19.0).abs() < 1e-12);
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(1.0, 0.0, 0.0, 1.0, 2, 2).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 0.0, 2, 2).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 0, 2).is_err());
        assert!(matches!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 1001, 1000), Err(Error::Config(_))));
        let g = GridSpec::new(0.0, 1.0, -1.0, 1.0, 3, 5).unwrap();
        assert_eq!(g.node(2, 4), c(1.0, 1.0));
        assert_eq!(g.node(1, 2), c(0.5, 0.0));
    }

    #[test]
    fn disk_ratio_rotated_harmonic() {
        let q = p(1, FRAC_PI_2);
        let cfg = DiscretizationConfig::new(200, 1.0, 25).unwrap();
        let l4 = solve_spectrum(&q, &cfg).unwrap().pairs[3].lambda.norm();
        let r = disk_inclusion_check(&q, &cfg, 4, &[1e-2 * l4, 1e-3 * l4, 1e-4 * l4]).unwrap();
        for w in r.windows(2) {
            assert!((w[1].1 - 1.0).abs() < (w[0].1 - 1.0).abs());
        }
        assert!((r[2].1 - 1.0).abs() < 0.02, "{r:?}");
    }

    #[test]
    fn disk_ratio_selfadjoint() {
        let q = p(2, 0.0);
        let cfg = DiscretizationConfig::with_default_scale(2, 120, 20).unwrap();
        let r = disk_inclusion_check(&q, &cfg, 3, &[1e-3, 1e-5]).unwrap();
        for (_, ratio) in r {
            assert!((ratio - 1.0).abs() < 1e-3);
        }
        assert!(matches!(
            disk_inclusion_check(&q, &cfg, 3, &[100.0]),
            Err(Error::Precondition(_))
        ));
        assert!(disk_inclusion_check(&q, &cfg, 21, &[1e-3]).is_err());
    }

    proptest! {
        #[test]
        fn resolvent_exceeds_inverse_distance(seed in 0u64..1000, zr in -3.0f64..8.0, zi in -3.0f64..3.0) {
            let n = 6;
            let m = CMatrix::from_fn(n, n, |i, j| {
                let h = (seed.wrapping_mul(6364136223846793005).wrapping_add(((i * n + j) as u64).wrapping_mul(1442695040888963407))) >> 33;
                c((h % 1000) as f64 / 500.0 - 1.0 + if i == j { i as f64 } else { 0.0 }, ((h / 1000) % 1000) as f64 / 500.0 - 1.0)
            });
            let z = c(zr, zi);
            let d = eigvals(&m).unwrap().iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
            let r = resolvent_norm(&m, z).value();
            prop_assert!(r >= (1.0 - 1e-9) / d);
        }
    }
}
