//! Closed-form large-index quantities for `A(2k, θ)`.
//!
//! Every function depends on `θ` only through `|θ|`.
//!
//! Index convention: [`weyl_modulus`] takes a 0-based index, so the `n`-th
//! eigenvalue in 1-based order (as stored in [`crate::Eigenpair`]) pairs with
//! `weyl_modulus(n - 1, k)`.

use alloc::format;

use core::f64::consts::PI;

use crate::specfun::{gamma_real, integrate_line, cut_sqrt, BranchedSqrtState, QuadratureConfig};
use crate::{Error, Result, C64};

/// Closed-form saddle point must satisfy `|φ'| ≤` this.
pub const SADDLE_STATIONARITY_TOL: f64 = 1e-10;
/// Branch points closer than this to the integration ray are rejected.
pub const BRANCH_PROXIMITY_TOL: f64 = 1e-8;
const PHI_SECOND_STEP: f64 = 1e-5;
const PHI_SECOND_CHECK_STEP: f64 = 1e-4;
const PHI_SECOND_CHECK_TOL: f64 = 1e-4;

/// The pair `(k, θ)` of `A(2k, θ) = -d²/dx² + e^{iθ} x^{2k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorParams {
    k: u32,
    theta: f64,
}

impl OscillatorParams {
    /// Validates `k ≥ 1` and `|θ| < (k+1)π/(2k)`.
    pub fn new(k: u32, theta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("k must be a positive integer".into()));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("theta must be finite, got {theta}")));
        }
        let limit = max_abs_theta(k);
        if libm::fabs(theta) >= limit {
            return Err(Error::Domain(format!(
                "theta = {theta} violates |theta| < (k+1)*pi/(2k) = {limit} for k = {k}"
            )));
        }
        Ok(Self { k, theta })
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn abs_theta(&self) -> f64 {
        libm::fabs(self.theta)
    }

    /// Expected argument `θ/(k+1)` of every eigenvalue.
    pub fn eigenvalue_arg(&self) -> f64 {
        self.theta / (self.k as f64 + 1.0)
    }

    /// Same `k`, angle replaced.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.k, theta)
    }

    fn kf(&self) -> f64 {
        self.k as f64
    }

    /// `|θ| / (2(k+1))`, the argument of the integration ray.
    fn ray_arg(&self) -> f64 {
        self.abs_theta() / (2.0 * (self.kf() + 1.0))
    }

    /// `k|θ|/(k+1)`.
    fn gamma(&self) -> f64 {
        self.kf() * self.abs_theta() / (self.kf() + 1.0)
    }

    /// `x^{2k} e^{ik|θ|/(k+1)} - 1`.
    fn w(&self, x: f64) -> C64 {
        C64::from_polar(libm::pow(x, 2.0 * self.kf()), self.gamma()) - 1.0
    }
}

/// `(k+1)π/(2k)`.
pub fn max_abs_theta(k: u32) -> f64 {
    (k as f64 + 1.0) * PI / (2.0 * k as f64)
}

/// `(k+1)√π Γ((k+1)/2k) / Γ(1/2k)`; exactly 2 for `k = 1`.
pub fn weyl_coefficient(k: u32) -> f64 {
    assert!(k >= 1, "k must be positive");
    if k == 1 {
        return 2.0;
    }
    let kf = k as f64;
    let num = gamma_real((kf + 1.0) / (2.0 * kf)).expect("positive argument");
    let den = gamma_real(1.0 / (2.0 * kf)).expect("positive argument");
    (kf + 1.0) * libm::sqrt(PI) * num / den
}

/// Leading Weyl term `(W(k)(n + ½))^{2k/(k+1)}` for 0-based `n`.
pub fn weyl_modulus(n: usize, k: u32) -> f64 {
    let kf = k as f64;
    let base = weyl_coefficient(k) * (n as f64 + 0.5);
    if k == 1 {
        base
    } else {
        libm::pow(base, 2.0 * kf / (kf + 1.0))
    }
}

/// Semiclassical parameter `h = |λ|^{-(k+1)/(2k)}`.
pub fn h_of_modulus(lambda_abs: f64, k: u32) -> Result<f64> {
    if !(lambda_abs > 0.0) || !lambda_abs.is_finite() {
        return Err(Error::Domain(format!("|lambda| must be positive and finite, got {lambda_abs}")));
    }
    let kf = k as f64;
    Ok(libm::pow(lambda_abs, -(kf + 1.0) / (2.0 * kf)))
}

/// Closed-form stationary point of `φ`, checked against `φ'`.
pub fn saddle_x(params: &OscillatorParams) -> Result<f64> {
    if params.theta == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    let kf = params.kf();
    let t = libm::tan(params.abs_theta() / (kf + 1.0));
    let g = params.gamma();
    let x = libm::pow(t / (libm::sin(g) + libm::cos(g) * t), 1.0 / (2.0 * kf));
    let d = phi_prime(params, x)?;
    if libm::fabs(d) > SADDLE_STATIONARITY_TOL {
        return Err(Error::NumericalDegeneracy(format!(
            "phi'(x_saddle = {x}) = {d:e} exceeds the stationarity tolerance"
        )));
    }
    Ok(x)
}

/// `φ'(x) = -|w|^{1/2} cos(½ arg w + |θ|/(2(k+1)))`, `w = x^{2k}e^{ik|θ|/(k+1)} - 1`,
/// with `arg w ∈ [0, 2π)`.
pub fn phi_prime(params: &OscillatorParams, x: f64) -> Result<f64> {
    let w = params.w(x);
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "phi' is undefined at the branch point x = {x}"
        )));
    }
    let mut arg = w.arg();
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    Ok(-libm::sqrt(w.norm()) * libm::cos(0.5 * arg + params.ray_arg()))
}

/// Central difference of [`phi_prime`].
pub fn phi_second(params: &OscillatorParams, x: f64, step: f64) -> Result<f64> {
    let p = phi_prime(params, x + step)?;
    let m = phi_prime(params, x - step)?;
    Ok((p - m) / (2.0 * step))
}

/// `φ(x) = Im ∫_0^{x e^{i|θ|/(2(k+1))}} (1 - t^{2k})^{1/2} dt`.
pub fn phi(params: &OscillatorParams, x: f64) -> Result<f64> {
    phi_with(params, x, &QuadratureConfig::default())
}

/// [`phi`] with explicit quadrature settings.
pub fn phi_with(params: &OscillatorParams, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("phi needs a finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let k = params.k;
    let dir = C64::from_polar(1.0, params.ray_arg());
    let end = dir * x;
    let dist = branch_distance(k, end);
    if dist < BRANCH_PROXIMITY_TOL {
        return Err(Error::BranchProximity { distance: dist });
    }
    let kk = 2 * k as i32;
    // (1 - t^{2k})^{1/2} = -i · √(t^{2k} - 1) with √ cut along [0, +∞)
    let integrand = move |t: C64| -> C64 { C64::new(0.0, -1.0) * cut_sqrt(t.powi(kk) - 1.0) };
    assert_continuous_branch(end, kk)?;
    let v = integrate_line(integrand, C64::new(0.0, 0.0), end, cfg)?;
    Ok(v.im)
}

/// Distance from the segment `[0, end]` to the branch points `e^{ijπ/k}`.
fn branch_distance(k: u32, end: C64) -> f64 {
    let len = end.norm();
    let dir = end / len;
    (0..2 * k)
        .map(|j| {
            let b = C64::from_polar(1.0, j as f64 * PI / k as f64);
            let s = (b * dir.conj()).re.clamp(0.0, len);
            (b - dir * s).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// The fixed determination must agree with continuation along the ray.
fn assert_continuous_branch(end: C64, kk: i32) -> Result<()> {
    const SAMPLES: usize = 256;
    let mut state = BranchedSqrtState::new();
    for i in 0..=SAMPLES {
        let t = end * (i as f64 / SAMPLES as f64);
        let w = t.powi(kk) - 1.0;
        let fixed = cut_sqrt(w);
        let tracked = state.next(w)?;
        if (fixed - tracked).norm() > 1e-12 * (1.0 + fixed.norm()) {
            return Err(Error::BranchCut { re: w.re, im: w.im });
        }
    }
    Ok(())
}

/// `c_k(θ) = 2 W(k) φ(x_{θ,k})`, and `0` at `θ = 0`.
pub fn rate_c(params: &OscillatorParams) -> Result<f64> {
    if params.theta == 0.0 {
        return Ok(0.0);
    }
    let x = saddle_x(params)?;
    Ok(2.0 * weyl_coefficient(params.k) * phi(params, x)?)
}

/// `2 Re f(z)`, `f(z) = log(z + √(z²-1)) - z√(z²-1)`, `z = e^{i|θ|/4}/√(2cos(θ/2))`.
pub fn davies_kuijlaars_c1(theta: f64) -> Result<f64> {
    if !(libm::fabs(theta) < PI) {
        return Err(Error::Domain(format!("davies_kuijlaars_c1 needs |theta| < pi, got {theta}")));
    }
    let z = C64::from_polar(1.0, libm::fabs(theta) / 4.0) / libm::sqrt(2.0 * libm::cos(theta / 2.0));
    let s = cut_sqrt(z * z - 1.0);
    let f = (z + s).ln() - z * s;
    Ok(2.0 * f.re)
}

/// `C_k(θ) = 2√π / |w(x_s) φ''(x_s)|^{1/2}`.
///
/// This is the Laplace-method constant for `∫ |w|^{-1/2} e^{2φ/h}`; it is a
/// factor `√2` below the expression `2√(2π)/|…|^{1/2}` sometimes quoted.
pub fn laplace_prefactor(params: &OscillatorParams) -> Result<f64> {
    if params.theta == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    let x = saddle_x(params)?;
    let d2 = phi_second(params, x, PHI_SECOND_STEP)?;
    let check = phi_second(params, x, PHI_SECOND_CHECK_STEP)?;
    if !d2.is_finite() || d2 == 0.0 || libm::fabs(d2 - check) > PHI_SECOND_CHECK_TOL * libm::fabs(d2) {
        return Err(Error::NumericalDegeneracy(format!(
            "phi'' at the saddle is unstable under step change: {d2:e} vs {check:e}"
        )));
    }
    let w = params.w(x);
    let c = 2.0 * libm::sqrt(PI) / libm::sqrt(libm::fabs(w.norm() * d2));
    if !c.is_finite() {
        return Err(Error::NumericalDegeneracy(format!("prefactor is not finite ({c})")));
    }
    Ok(c)
}

/// Paper threshold `T(θ) = c_1(θ)/cos(θ/2)`, `|θ| ≤ π/2`.
pub fn semigroup_threshold(theta: f64) -> Result<f64> {
    check_threshold_angle(theta)?;
    let c1 = rate_c(&OscillatorParams::new(1, theta)?)?;
    Ok(c1 / libm::cos(theta / 2.0))
}

/// Term-rate threshold `c_1(θ)/(2cos(θ/2))`: the `t` where `e^{-t Re λ_n} κ_n`
/// stops growing, from `Re λ_n ≈ 2(n+½)cos(θ/2)` and `log κ_n ≈ c_1 n`.
pub fn term_rate_threshold(theta: f64) -> Result<f64> {
    Ok(semigroup_threshold(theta)? / 2.0)
}

fn check_threshold_angle(theta: f64) -> Result<()> {
    if !(libm::fabs(theta) <= PI / 2.0) {
        return Err(Error::Domain(format!(
            "the semigroup threshold needs |theta| <= pi/2, got {theta}"
        )));
    }
    Ok(())
}

/// All closed-form constants for one `(k, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub params: OscillatorParams,
    /// `None` at `θ = 0`.
    pub x_saddle: Option<f64>,
    pub phi_at_saddle: f64,
    pub d_k: f64,
    pub c_k: f64,
    /// `None` at `θ = 0`.
    pub laplace_prefactor: Option<f64>,
    pub weyl_coefficient: f64,
    /// `k = 1` and `|θ| ≤ π/2` only.
    pub semigroup_threshold: Option<f64>,
    /// Companion of `semigroup_threshold`, see [`term_rate_threshold`].
    pub term_rate_threshold: Option<f64>,
}

impl AsymptoticReport {
    pub fn compute(params: &OscillatorParams) -> Result<Self> {
        let w = weyl_coefficient(params.k);
        let (x_saddle, phi_s, pref) = if params.theta == 0.0 {
            (None, 0.0, None)
        } else {
            let x = saddle_x(params)?;
            (Some(x), phi(params, x)?, Some(laplace_prefactor(params)?))
        };
        let d_k = 2.0 * phi_s;
        let (t_nominal, t_rate) = if params.k == 1 && params.abs_theta() <= PI / 2.0 {
            (
                Some(semigroup_threshold(params.theta)?),
                Some(term_rate_threshold(params.theta)?),
            )
        } else {
            (None, None)
        };
        Ok(Self {
            params: *params,
            x_saddle,
            phi_at_saddle: phi_s,
            d_k,
            c_k: d_k * w,
            laplace_prefactor: pref,
            weyl_coefficient: w,
            semigroup_threshold: t_nominal,
            term_rate_threshold: t_rate,
        })
    }
}
