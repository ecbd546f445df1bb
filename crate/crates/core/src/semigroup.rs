//! The projection series `Σ e^{-tλ_n} Π_n` with `‖Π_n‖ = κ_n`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::asymptotics::{semigroup_threshold, term_rate_threshold};
use crate::linalg::{expm, vec_norm};
use crate::spectral::{build_parity_blocks, fit::least_squares, SpectrumResult};
use crate::{Error, Result, C64};

/// `|slope|` below this is inconclusive.
pub const CONVERGENCE_TOL: f64 = 0.02;
pub const MIN_WINDOW: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    Converging,
    Diverging,
    Inconclusive,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::Converging => "converging",
            Convergence::Diverging => "diverging",
            Convergence::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub convergence: Convergence,
    /// Least-squares slope of `log term` against `n`.
    pub slope: Option<f64>,
    pub reason: Option<String>,
}

/// `e^{-t Re λ_n} κ_n` per retained pair; `None` where `κ_n` is overflow or
/// precision-limited.
pub fn term_norms(spectrum: &SpectrumResult, t: f64) -> Result<Vec<Option<f64>>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    Ok(spectrum
        .pairs
        .iter()
        .map(|p| p.kappa.fit_value().map(|k| libm::exp(-t * p.lambda.re) * k))
        .collect())
}

/// Upper half of `0..len`.
pub fn default_window(len: usize) -> Range<usize> {
    len / 2..len
}

/// Classifies a window of terms by the sign of the fitted log-slope.
pub fn classify_convergence(terms: &[Option<f64>]) -> Result<Classification> {
    if terms.len() < MIN_WINDOW {
        return Err(Error::Precondition(format!(
            "classification window has {} terms, need at least {MIN_WINDOW}",
            terms.len()
        )));
    }
    let excluded = terms.iter().filter(|t| t.is_none()).count();
    if excluded > 0 {
        return Ok(Classification {
            convergence: Convergence::Inconclusive,
            slope: None,
            reason: Some(format!("{excluded} terms in the window have overflow-flagged κ")),
        });
    }
    let xs: Vec<f64> = (0..terms.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = terms.iter().map(|t| libm::log(t.unwrap_or(f64::NAN))).collect();
    let (slope, _) = least_squares(&xs, &ys);
    let convergence = if slope < -CONVERGENCE_TOL {
        Convergence::Converging
    } else if slope > CONVERGENCE_TOL {
        Convergence::Diverging
    } else {
        Convergence::Inconclusive
    };
    Ok(Classification {
        convergence,
        slope: Some(slope),
        reason: None,
    })
}

/// Threshold candidates for the series at `k = 1`, plus the measured crossover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// `T(θ) = c_1(θ)/cos(θ/2)`.
    pub nominal: Option<f64>,
    /// `c_1(θ)/(2cos(θ/2))`, from `κ_n ∼ e^{c_1 n}` and `Re λ_n ≈ 2n cos(θ/2)`.
    pub term_rate: Option<f64>,
    /// `slope(log κ_n)/slope(Re λ_n)` over the window: the `t` where the term slope vanishes.
    pub empirical: Option<f64>,
}

impl Thresholds {
    pub fn compute(spectrum: &SpectrumResult, window: Range<usize>) -> Self {
        let theta = spectrum.params.theta();
        let k1 = spectrum.params.k() == 1;
        let nominal = if k1 { semigroup_threshold(theta).ok() } else { None };
        let term_rate = if k1 { term_rate_threshold(theta).ok() } else { None };
        Self {
            nominal,
            term_rate,
            empirical: empirical_crossover(spectrum, window),
        }
    }

    pub fn min(&self) -> Option<f64> {
        [self.nominal, self.term_rate].into_iter().flatten().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        [self.nominal, self.term_rate].into_iter().flatten().reduce(f64::max)
    }
}

fn empirical_crossover(spectrum: &SpectrumResult, window: Range<usize>) -> Option<f64> {
    let pairs = spectrum.pairs.get(window)?;
    let mut xs = Vec::new();
    let mut log_k = Vec::new();
    let mut re = Vec::new();
    for p in pairs {
        let k = p.kappa.fit_value()?;
        xs.push(p.index as f64);
        log_k.push(libm::log(k));
        re.push(p.lambda.re);
    }
    if xs.len() < 2 {
        return None;
    }
    let (sk, _) = least_squares(&xs, &log_k);
    let (sr, _) = least_squares(&xs, &re);
    (sr > 0.0).then(|| sk / sr)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupSeriesReport {
    pub t: f64,
    pub term_norms: Vec<Option<f64>>,
    /// Terms left out for overflow-flagged κ.
    pub excluded: usize,
    pub window: Range<usize>,
    pub classification: Classification,
    pub thresholds: Thresholds,
    pub comparison_error: Option<f64>,
}

impl SemigroupSeriesReport {
    /// Report at time `t`, classified over `window` (default: upper half).
    pub fn compute(spectrum: &SpectrumResult, t: f64, window: Option<Range<usize>>) -> Result<Self> {
        let terms = term_norms(spectrum, t)?;
        let window = window.unwrap_or_else(|| default_window(terms.len()));
        let slice = terms.get(window.clone()).ok_or_else(|| {
            Error::Precondition(format!(
                "window {}..{} exceeds the {} retained terms",
                window.start,
                window.end,
                terms.len()
            ))
        })?;
        let classification = classify_convergence(slice)?;
        Ok(Self {
            t,
            excluded: terms.iter().filter(|x| x.is_none()).count(),
            thresholds: Thresholds::compute(spectrum, window.clone()),
            term_norms: terms,
            window,
            classification,
            comparison_error: None,
        })
    }

    /// Adds the partial-sum comparison for `v` with `n_terms` terms.
    pub fn with_comparison(mut self, spectrum: &SpectrumResult, v: &[C64], n_terms: usize) -> Result<Self> {
        self.comparison_error = Some(partial_sum_error(spectrum, self.t, v, n_terms, &self.classification)?);
        Ok(self)
    }
}

/// Rank-one projection `⟨v, ū_n⟩ u_n` with `Σ_j (u_n)_j² = 1`.
pub fn project(u: &[C64], v: &[C64]) -> Vec<C64> {
    let a: C64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
    u.iter().map(|x| a * x).collect()
}

/// `‖Σ_{n ≤ n_terms} e^{-tλ_n} Π_n v - e^{-tM} v‖ / ‖v‖`.
///
/// Refused when the series classifies as diverging at `t` over the default
/// window, since the projections then do not sum to the semigroup.
pub fn compare_partial_sum(spectrum: &SpectrumResult, t: f64, v: &[C64], n_terms: usize) -> Result<f64> {
    let terms = term_norms(spectrum, t)?;
    let class = classify_convergence(&terms[default_window(terms.len())])?;
    partial_sum_error(spectrum, t, v, n_terms, &class)
}

fn partial_sum_error(spectrum: &SpectrumResult, t: f64, v: &[C64], n_terms: usize, class: &Classification) -> Result<f64> {
    if class.convergence == Convergence::Diverging {
        return Err(Error::Refused(format!(
            "the projection series is not normally convergent at t = {t} (term slope {:.4}); \
             it does not represent the semigroup",
            class.slope.unwrap_or(f64::NAN)
        )));
    }
    let n = spectrum.config.basis_size;
    if v.len() != n {
        return Err(Error::Precondition(format!("vector has length {}, basis size is {n}", v.len())));
    }
    if n_terms == 0 || n_terms > spectrum.pairs.len() {
        return Err(Error::Precondition(format!(
            "n_terms = {n_terms} outside 1..={}",
            spectrum.pairs.len()
        )));
    }
    let nv = vec_norm(v);
    if nv == 0.0 {
        return Err(Error::Domain("comparison vector is zero".into()));
    }
    let mut series = alloc::vec![C64::new(0.0, 0.0); n];
    for p in &spectrum.pairs[..n_terms] {
        let e = (-p.lambda * t).exp();
        for (s, x) in series.iter_mut().zip(project(&p.biorthogonal_coeffs(), v)) {
            *s += e * x;
        }
    }
    let exact = semigroup_apply(spectrum, t, v)?;
    let diff: Vec<C64> = series.iter().zip(&exact).map(|(a, b)| a - b).collect();
    Ok(vec_norm(&diff) / nv)
}

/// `e^{-tM} v` for the Galerkin matrix, per parity block.
pub fn semigroup_apply(spectrum: &SpectrumResult, t: f64, v: &[C64]) -> Result<Vec<C64>> {
    let blocks = build_parity_blocks(&spectrum.params, &spectrum.config)?;
    let mut out = alloc::vec![C64::new(0.0, 0.0); v.len()];
    for parity in 0..2 {
        let idx = &blocks.indices[parity];
        let e = expm(&blocks.blocks[parity].scale(C64::new(-t, 0.0)));
        let sub: Vec<C64> = idx.iter().map(|&i| v[i]).collect();
        for (&i, y) in idx.iter().zip(e.matvec(&sub)) {
            out[i] = y;
        }
    }
    Ok(out)
}
