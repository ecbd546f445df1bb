use alloc::format;
use alloc::vec::Vec;

use super::{evaluate_eigenfunction, hermite_functions, solve_spectrum, DiscretizationConfig, Eigenpair};
use crate::asymptotics::{h_of_modulus, OscillatorParams};
use crate::specfun::{integrate_line, QuadratureConfig};
use crate::{Error, Result, C64};

/// Largest semiclassical parameter accepted by [`wkb_leading_error`].
pub const WKB_MAX_H: f64 = 0.2;
const WINDOW: (f64, f64) = (1.5, 2.5);
const WINDOW_POINTS: usize = 41;
const REFERENCE_Y: f64 = 2.0;
/// A sample must exceed its rounding floor by this factor.
const FLOOR_MARGIN: f64 = 1e2;

/// Action `S(y) = ∫_1^y √(t^{2k} - 1) dt` for `y ≥ 1`.
pub fn wkb_action(k: u32, y: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain(format!("the WKB action needs y >= 1, got {y}")));
    }
    // t = 1 + s² removes the square-root endpoint behaviour
    let kk = 2.0 * k as f64;
    let f = move |s: C64| {
        let s = s.re;
        let inner = libm::expm1(kk * libm::log1p(s * s));
        C64::new(2.0 * s * libm::sqrt(inner), 0.0)
    };
    let end = libm::sqrt(y - 1.0);
    Ok(integrate_line(f, C64::new(0.0, 0.0), C64::new(end, 0.0), &QuadratureConfig::default())?.re)
}

/// Leading-order WKB check of one eigenfunction.
#[derive(Clone, Debug, PartialEq)]
pub struct WkbComparison {
    pub index: usize,
    pub h: f64,
    /// `max_y |ψ(y)/ψ(2) - W(y)/W(2)| / |W(y)/W(2)|` over `y ∈ [1.5, 2.5]`.
    pub max_deviation: f64,
    pub ys: Vec<f64>,
    pub deviations: Vec<f64>,
}

/// Compares the rescaled eigenfunction `ψ_h(y) = u_n(h^{-1/(k+1)} y)` of the
/// selfadjoint problem with `(y^{2k}-1)^{-1/4} e^{-S(y)/h}` on `[1.5, 2.5]`,
/// both normalised at `y = 2`.
///
/// The eigenfunction is taken from the `θ = 0` problem at the same index: on
/// the ray `e^{iθ/(2k+2)}ℝ` the rotated eigenfunction coincides with it.
/// Samples that do not clear their rounding and coefficient-error floor give
/// [`Error::PrecisionLimited`].
pub fn wkb_leading_error(
    params: &OscillatorParams,
    eigenpair: &Eigenpair,
    config: &DiscretizationConfig,
) -> Result<WkbComparison> {
    let k = params.k();
    let h = h_of_modulus(eigenpair.lambda.norm(), k)?;
    if h > WKB_MAX_H {
        return Err(Error::Precondition(format!(
            "h = {h} for index {} exceeds {WKB_MAX_H}; use a higher eigenpair",
            eigenpair.index
        )));
    }
    let partner = solve_spectrum(&params.with_theta(0.0)?, config)?;
    let i = eigenpair.index - 1;
    let pair = partner
        .pairs
        .get(i)
        .ok_or_else(|| Error::Precondition(format!("index {} exceeds n_max", eigenpair.index)))?;
    // selfadjoint partner: angle to the exact eigenvector is at most residual / gap
    let gap = partner
        .pairs
        .iter()
        .filter(|q| q.index != pair.index && q.parity() == pair.parity())
        .map(|q| (q.lambda - pair.lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let coeff_error = partner.residuals[i] / gap;
    let coeffs = &pair.coeffs;
    let mu = libm::pow(h, -1.0 / (k as f64 + 1.0));
    let ys: Vec<f64> = (0..WINDOW_POINTS)
        .map(|i| WINDOW.0 + (WINDOW.1 - WINDOW.0) * i as f64 / (WINDOW_POINTS - 1) as f64)
        .collect();
    let xs: Vec<f64> = ys.iter().map(|y| mu * y).collect();
    let ev = evaluate_eigenfunction(coeffs, config.scale, &xs);
    for (i, (v, m)) in ev.values.iter().zip(&ev.magnitudes).enumerate() {
        let basis_norm = libm::sqrt(
            hermite_functions(config.scale * xs[i], coeffs.len())
                .iter()
                .map(|p| p * p)
                .sum::<f64>(),
        );
        let floor = 64.0 * f64::EPSILON * m + coeff_error * basis_norm;
        if !(v.norm() > FLOOR_MARGIN * floor) {
            return Err(Error::PrecisionLimited(format!(
                "eigenfunction {} at y = {} is {:e}, within {FLOOR_MARGIN:e} of its error floor {floor:e}",
                eigenpair.index,
                ys[i],
                v.norm()
            )));
        }
    }
    let iref = ys
        .iter()
        .position(|y| (y - REFERENCE_Y).abs() < 1e-12)
        .expect("reference point on the grid");
    let kk = 2 * k as i32;
    let s_ref = wkb_action(k, REFERENCE_Y)?;
    let amp_ref = libm::pow(libm::pow(REFERENCE_Y, kk as f64) - 1.0, -0.25);
    let mut deviations = Vec::with_capacity(ys.len());
    for (i, y) in ys.iter().enumerate() {
        let ratio_psi = ev.values[i] / ev.values[iref];
        let amp = libm::pow(libm::pow(*y, kk as f64) - 1.0, -0.25);
        let ratio_wkb = amp / amp_ref * libm::exp(-(wkb_action(k, *y)? - s_ref) / h);
        deviations.push((ratio_psi - ratio_wkb).norm() / ratio_wkb);
    }
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(WkbComparison {
        index: eigenpair.index,
        h,
        max_deviation,
        ys,
        deviations,
    })
}
