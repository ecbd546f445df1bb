//! Pass/fail checks shared by `verify` and the acceptance test target.
//! Every tolerance is pinned here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use spectral_instability_core::asymptotics::{
    davies_kuijlaars_c1, max_abs_theta, phi_prime, rate_c, saddle_x, weyl_modulus, SADDLE_STATIONARITY_TOL,
};
use spectral_instability_core::pseudospectra::disk_inclusion_check;
use spectral_instability_core::semigroup::{compare_partial_sum, default_window, Thresholds};
use spectral_instability_core::spectral::{fit_rate, solve_spectrum, wkb_leading_error};
use spectral_instability_core::{
    Convergence, DiscretizationConfig, Error, Kappa, OscillatorParams, SemigroupSeriesReport, SpectrumResult, C64,
};

pub const A1_K1_TOL: f64 = 0.10;
pub const A1_K2_TOL: f64 = 0.15;
pub const A1_MAX_SECONDS: f64 = 120.0;
pub const DK_TOL: f64 = 1e-10;
pub const HALF_LINE_TOL: f64 = 1e-8;
pub const WEYL_TOL_10: f64 = 0.01;
pub const WEYL_TOL_20: f64 = 0.005;
pub const DISK_LO: f64 = 0.85;
pub const DISK_HI: f64 = 1.15;
pub const BIORTHO_TOL: f64 = 1e-8;
pub const PARTIAL_SUM_TOL: f64 = 1e-6;
pub const WKB_RATIO: f64 = 0.7;
pub const SELFADJOINT_KAPPA_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:<4} {} | {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.description,
            self.detail,
            self.seconds
        )
    }
}

type Outcome = Result<(bool, String), Error>;

fn timed(id: &str, description: &str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id: id.into(),
        description: description.into(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn params(k: u32, theta: f64) -> Result<OscillatorParams, Error> {
    OscillatorParams::new(k, theta)
}

fn solve(k: u32, theta: f64, n: usize, n_max: usize) -> Result<SpectrumResult, Error> {
    solve_spectrum(&params(k, theta)?, &DiscretizationConfig::with_default_scale(k, n, n_max)?)
}

fn max_arg_error(r: &SpectrumResult) -> f64 {
    let want = r.params.eigenvalue_arg();
    r.pairs.iter().map(|p| (p.lambda.arg() - want).abs()).fold(0.0, f64::max)
}

fn max_biorthogonality(r: &SpectrumResult, m: usize) -> f64 {
    let b: Vec<Vec<C64>> = r.pairs.iter().take(m).map(|p| p.biorthogonal_coeffs()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..b.len() {
        for j in 0..b.len() {
            if i != j {
                let s: C64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                worst = worst.max(s.norm());
            }
        }
    }
    worst
}

fn rate_check(k: u32, theta: f64, n: usize, n_max: usize, lo: usize, hi: usize, tol: f64) -> Outcome {
    let start = Instant::now();
    let r = solve(k, theta, n, n_max)?;
    let pts: Vec<(usize, Kappa)> = r.pairs.iter().map(|p| (p.index, p.kappa)).collect();
    let fit = fit_rate(&pts, lo, hi)?;
    let c = rate_c(&r.params)?;
    let gap = (fit.slope - c).abs() / c;
    let plain = (fit.plain_slope - c).abs() / c;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        gap <= tol && secs <= A1_MAX_SECONDS,
        format!(
            "k={k} θ={theta}: slope {:.5} vs c {c:.5}, gap {:.2}% (plain slope gap {:.2}%), K {:.4}, excluded {}, {secs:.1}s",
            fit.slope,
            100.0 * gap,
            100.0 * plain,
            fit.fitted_k,
            fit.excluded
        ),
    ))
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    let (pa, da) = a?;
    let (pb, db) = b?;
    Ok((pa && pb, format!("{da}; {db}")))
}

pub fn a1() -> CheckResult {
    timed("A1", "exponential rate of κ_n", || {
        both(
            rate_check(1, FRAC_PI_2, 300, 25, 10, 25, A1_K1_TOL),
            rate_check(2, 0.8, 300, 20, 8, 18, A1_K2_TOL),
        )
    })
}

pub fn a2() -> CheckResult {
    timed("A2", "Davies–Kuijlaars identity at k=1", || {
        let mut worst: f64 = 0.0;
        for th in [0.2, 0.7, 1.2, 1.5] {
            worst = worst.max((rate_c(&params(1, th)?)? - davies_kuijlaars_c1(th)?).abs());
        }
        Ok((worst <= DK_TOL, format!("max |rate_c - c_1| = {worst:.3e}")))
    })
}

pub fn a3() -> CheckResult {
    timed("A3", "eigenvalues on the half-line arg = θ/(k+1)", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (k, th) in [(1, 1.0), (2, 0.6), (3, 0.5)] {
            let e = max_arg_error(&solve(k, th, 200, 20)?);
            ok &= e <= HALF_LINE_TOL;
            parts.push(format!("k={k}: {e:.2e}"));
        }
        Ok((ok, format!("max |arg λ_n - θ/(k+1)|, n ≤ 20: {}", parts.join(", "))))
    })
}

pub fn a4() -> CheckResult {
    timed("A4", "Weyl law at k=2", || {
        let r = solve(2, 0.0, 200, 20)?;
        let gap = |n: usize| (r.pairs[n - 1].lambda.norm() / weyl_modulus(n - 1, 2) - 1.0).abs();
        let (g10, g20) = (gap(10), gap(20));
        Ok((
            g10 <= WEYL_TOL_10 && g20 <= WEYL_TOL_20 && g20 < g10,
            format!("gap n=10: {:.4}%, n=20: {:.4}%", 100.0 * g10, 100.0 * g20),
        ))
    })
}

pub fn a5() -> CheckResult {
    timed("A5", "saddle stationarity", || {
        let mut worst: f64 = 0.0;
        for k in 1..=3 {
            for th in [0.3f64, 0.8, 1.2] {
                let p = params(k, th.min(0.99 * max_abs_theta(k)))?;
                worst = worst.max(phi_prime(&p, saddle_x(&p)?)?.abs());
            }
        }
        Ok((worst <= SADDLE_STATIONARITY_TOL, format!("max |φ'(x_saddle)| = {worst:.3e}")))
    })
}

pub fn a6() -> CheckResult {
    timed("A6", "pseudospectral disk radius κ·ε at λ_4", || {
        let p = params(1, FRAC_PI_2)?;
        let cfg = DiscretizationConfig::new(200, 1.0, 25)?;
        let l4 = solve_spectrum(&p, &cfg)?.pairs[3].lambda.norm();
        let r = disk_inclusion_check(&p, &cfg, 4, &[1e-3 * l4, 1e-4 * l4])?;
        let (r1, r2) = (r[0].1, r[1].1);
        let inside = |x: f64| (DISK_LO..=DISK_HI).contains(&x);
        Ok((
            inside(r1) && inside(r2) && (r2 - 1.0).abs() < (r1 - 1.0).abs(),
            format!("ratio at δ/|λ_4| = 1e-3: {r1:.6}, 1e-4: {r2:.6}"),
        ))
    })
}

pub fn a7() -> CheckResult {
    timed("A7", "biorthogonality of eigenvectors", || {
        let a = max_biorthogonality(&solve(1, 1.0, 160, 10)?, 10);
        let b = max_biorthogonality(&solve(2, 0.6, 160, 10)?, 10);
        Ok((
            a <= BIORTHO_TOL && b <= BIORTHO_TOL,
            format!("max |Σ c_n c_m|, n≠m ≤ 10: k=1 {a:.2e}, k=2 {b:.2e}"),
        ))
    })
}

pub fn a8() -> CheckResult {
    timed("A8", "semigroup projection series", || {
        let mut ok = true;
        let mut parts = Vec::new();
        let s = solve(2, FRAC_PI_4, 200, 20)?;
        let mut e1 = vec![C64::new(0.0, 0.0); 200];
        e1[0] = C64::new(1.0, 0.0);
        for t in [0.1, 0.5, 1.0] {
            let r = SemigroupSeriesReport::compute(&s, t, None)?;
            let err = compare_partial_sum(&s, t, &e1, 20)?;
            ok &= r.classification.convergence == Convergence::Converging && err <= PARTIAL_SUM_TOL;
            parts.push(format!("k=2 t={t}: {} err {err:.2e}", r.classification.convergence.as_str()));
        }
        let s = solve(1, FRAC_PI_2, 300, 25)?;
        let th = Thresholds::compute(&s, default_window(s.pairs.len()));
        let (lo, hi) = match (th.min(), th.max()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok((false, "k=1 thresholds unavailable".into())),
        };
        let low = SemigroupSeriesReport::compute(&s, 0.1 * lo, None)?.classification.convergence;
        let high = SemigroupSeriesReport::compute(&s, 3.0 * hi, None)?.classification.convergence;
        ok &= low == Convergence::Diverging && high == Convergence::Converging;
        parts.push(format!(
            "k=1: {} at t={:.4}, {} at t={:.4}; T nominal {:.6}, term-rate {:.6}, measured crossover {}",
            low.as_str(),
            0.1 * lo,
            high.as_str(),
            3.0 * hi,
            th.nominal.unwrap_or(f64::NAN),
            th.term_rate.unwrap_or(f64::NAN),
            th.empirical.map_or("n/a".into(), |e| format!("{e:.6}"))
        ));
        Ok((ok, parts.join("; ")))
    })
}

pub fn a9() -> CheckResult {
    timed("A9", "WKB leading-order error is O(h)", || {
        let p = params(1, 0.0)?;
        let cfg = DiscretizationConfig::new(160, 1.0, 40)?;
        let r = solve_spectrum(&p, &cfg)?;
        let w20 = wkb_leading_error(&p, &r.pairs[19], &cfg)?;
        let w40 = wkb_leading_error(&p, &r.pairs[39], &cfg)?;
        let ratio = w40.max_deviation / w20.max_deviation;
        Ok((
            ratio <= WKB_RATIO,
            format!(
                "deviation n=20: {:.4e} (h={:.4}), n=40: {:.4e} (h={:.4}), ratio {ratio:.4}",
                w20.max_deviation, w20.h, w40.max_deviation, w40.h
            ),
        ))
    })
}

pub fn a10() -> CheckResult {
    timed("A10", "κ_n = 1 for the selfadjoint case", || {
        let mut worst: f64 = 0.0;
        for k in 1..=3 {
            for p in solve(k, 0.0, 120, 15)?.pairs {
                worst = worst.max(p.kappa.value().map_or(f64::INFINITY, |v| (v - 1.0).abs()));
            }
        }
        Ok((worst <= SELFADJOINT_KAPPA_TOL, format!("max |κ_n - 1|, n ≤ 15, k = 1..3: {worst:.2e}")))
    })
}

pub fn acceptance_suite() -> Vec<CheckResult> {
    vec![a1(), a2(), a3(), a4(), a5(), a6(), a7(), a8(), a9(), a10()]
}

/// Checks that apply to one `(k, θ)` and discretisation.
pub fn verify_params(p: &OscillatorParams, cfg: &DiscretizationConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let solved = solve_spectrum(p, cfg);
    out.push(timed("V1", "eigenpair residuals within threshold", || match &solved {
        Ok(r) => Ok((
            true,
            format!("max residual {:.2e}", r.residuals.iter().copied().fold(0.0, f64::max)),
        )),
        Err(e) => Err(e.clone()),
    }));
    let Ok(r) = solved else {
        return out;
    };
    out.push(timed("V2", "eigenvalues on the half-line", || {
        let e = max_arg_error(&r);
        Ok((e <= HALF_LINE_TOL, format!("max |arg λ_n - θ/(k+1)| = {e:.2e}")))
    }));
    out.push(timed("V3", "instability indices", || {
        let ks: Vec<f64> = r.pairs.iter().filter_map(|x| x.kappa.value()).collect();
        let min = ks.iter().copied().fold(f64::INFINITY, f64::min);
        if p.theta() == 0.0 {
            let dev = ks.iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max);
            Ok((
                dev <= SELFADJOINT_KAPPA_TOL && ks.len() == r.pairs.len(),
                format!("selfadjoint: max |κ_n - 1| = {dev:.2e}"),
            ))
        } else {
            Ok((min >= 1.0, format!("min κ_n = {min:.6}")))
        }
    }));
    out.push(timed("V4", "biorthogonality", || {
        let b = max_biorthogonality(&r, 10);
        Ok((b <= BIORTHO_TOL, format!("max |Σ c_n c_m| = {b:.2e}")))
    }));
    if p.theta() != 0.0 {
        out.push(timed("V5", "saddle stationarity", || {
            let d = phi_prime(p, saddle_x(p)?)?.abs();
            Ok((d <= SADDLE_STATIONARITY_TOL, format!("|φ'(x_saddle)| = {d:.2e}")))
        }));
    }
    if p.k() == 1 {
        out.push(timed("V6", "Davies–Kuijlaars identity", || {
            let d = (rate_c(p)? - davies_kuijlaars_c1(p.theta())?).abs();
            Ok((d <= DK_TOL, format!("|rate_c - c_1| = {d:.2e}")))
        }));
    }
    if p.theta() == 0.0 && r.pairs.len() >= 4 {
        out.push(timed("V7", "Weyl gap shrinks with n", || {
            let k = p.k();
            let gap = |n: usize| (r.pairs[n - 1].lambda.norm() / weyl_modulus(n - 1, k) - 1.0).abs();
            let (a, b) = (gap(r.pairs.len() / 2), gap(r.pairs.len()));
            Ok((b <= a + 1e-12, format!("gap at n={}: {a:.2e}, at n={}: {b:.2e}", r.pairs.len() / 2, r.pairs.len())))
        }));
    }
    out
}
