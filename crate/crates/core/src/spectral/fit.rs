use alloc::format;
use alloc::vec::Vec;

use super::Kappa;
use crate::{Error, Result};

/// Least-squares growth rate of `κ_n` over an index window.
///
/// `slope` and `fitted_k` come from `log κ_n + ½ log n = log K + slope·n`,
/// the form `κ_n ∼ K e^{c n}/√n`; `plain_slope` fits `log κ_n` alone.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub plain_slope: f64,
    pub fitted_k: f64,
    pub n_used: Vec<usize>,
    /// Window entries left out as overflow or precision-limited.
    pub excluded: usize,
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits over entries `(n, κ_n)` with `lo ≤ n ≤ hi`.
pub fn fit_rate(entries: &[(usize, Kappa)], lo: usize, hi: usize) -> Result<RateFit> {
    let mut ns = Vec::new();
    let mut xs = Vec::new();
    let mut log_k = Vec::new();
    let mut excluded = 0;
    for (n, kappa) in entries.iter().filter(|(n, _)| *n >= lo && *n <= hi) {
        match kappa.fit_value() {
            Some(v) => {
                ns.push(*n);
                xs.push(*n as f64);
                log_k.push(libm::log(v));
            }
            None => excluded += 1,
        }
    }
    if xs.len() < 2 {
        return Err(Error::Precondition(format!(
            "rate fit over n in [{lo}, {hi}] has {} usable points, need at least 2",
            xs.len()
        )));
    }
    let (plain_slope, _) = least_squares(&xs, &log_k);
    let corrected: Vec<f64> = xs.iter().zip(&log_k).map(|(n, l)| l + 0.5 * libm::log(*n)).collect();
    let (slope, intercept) = least_squares(&xs, &corrected);
    Ok(RateFit {
        slope,
        plain_slope,
        fitted_k: libm::exp(intercept),
        n_used: ns,
        excluded,
    })
}
