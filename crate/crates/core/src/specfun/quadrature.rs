use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result, C64};

/// Tolerances and budget for [`integrate_line`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Gauss–Legendre nodes per panel.
    pub rule_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
            rule_order: 15,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Config(format!(
                "quadrature tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.rule_order < 2 {
            return Err(Error::Config(format!(
                "rule_order must be at least 2, got {}",
                self.rule_order
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Panel {
    t0: f64,
    t1: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `∫_a^b f(z) dz` along the straight segment from `a` to `b`, by globally
/// adaptive Gauss–Legendre panels.
pub fn integrate_line<F>(mut f: F, a: C64, b: C64, cfg: &QuadratureConfig) -> Result<C64>
where
    F: FnMut(C64) -> C64,
{
    cfg.validate()?;
    let (nodes, weights) = gauss_legendre(cfg.rule_order);
    let dz = b - a;
    if dz.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut rule = |t0: f64, t1: f64| -> C64 {
        let half = 0.5 * (t1 - t0);
        let mid = 0.5 * (t1 + t0);
        let mut s = C64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            s += f(a + dz * (mid + half * x)) * *w;
        }
        s * dz * half
    };
    let mut make_panel = |t0: f64, t1: f64| -> Panel {
        let tm = 0.5 * (t0 + t1);
        let whole = rule(t0, t1);
        let split = rule(t0, tm) + rule(tm, t1);
        let error = (whole - split).norm();
        Panel {
            t0,
            t1,
            value: split,
            error: if error.is_finite() { error } else { f64::INFINITY },
        }
    };

    let mut heap = BinaryHeap::new();
    heap.push(make_panel(0.0, 1.0));
    let mut subdivisions = 0usize;
    loop {
        let total: C64 = heap.iter().map(|p| p.value).sum();
        let err: f64 = heap.iter().map(|p| p.error).sum();
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) && total.re.is_finite() && total.im.is_finite() {
            return Ok(total);
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total,
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let tm = 0.5 * (worst.t0 + worst.t1);
        if !(tm > worst.t0 && tm < worst.t1) {
            // panel below floating-point resolution
            heap.push(worst);
            let total: C64 = heap.iter().map(|p| p.value).sum();
            return Err(Error::Convergence {
                estimate: total,
                error_estimate: err,
            });
        }
        heap.push(make_panel(worst.t0, tm));
        heap.push(make_panel(tm, worst.t1));
        subdivisions += 1;
    }
}
