//! Airy function `Ai` on the complex plane.
//!
//! Three regimes:
//! - `|z| ≤ 2`: Maclaurin series.
//! - `|z| > 8`: asymptotic expansions (exponential form for `|arg z| ≤ π/2`,
//!   oscillatory form in `-z` otherwise).
//! - in between: whichever of the Maclaurin series or inward Taylor stepping
//!   of `y'' = z y` from `|z| = 9.5` along the same ray loses fewer digits.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use crate::C64;

pub(crate) const AI0: f64 = 0.355_028_053_887_817_24;
pub(crate) const AIP0: f64 = -0.258_819_403_792_806_8;

const MACLAURIN_RADIUS: f64 = 2.0;
const ASYMPTOTIC_RADIUS: f64 = 8.0;
const STEP_START_RADIUS: f64 = 9.5;
const MAX_STEP: f64 = 0.5;

/// `Ai(z)`.
pub fn airy_ai(z: C64) -> C64 {
    airy_ai_pair(z).0
}

/// `(Ai(z), Ai'(z))`.
pub fn airy_ai_pair(z: C64) -> (C64, C64) {
    let r = z.norm();
    if r <= MACLAURIN_RADIUS {
        return maclaurin(z);
    }
    if r > ASYMPTOTIC_RADIUS {
        return asymptotic(z);
    }
    let phi = libm::fabs(z.arg());
    let zeta_mod = 2.0 / 3.0 * r * libm::sqrt(r);
    let cos_arg = libm::cos(1.5 * phi);
    let series_loss = if phi < FRAC_PI_3 {
        zeta_mod * (1.0 + cos_arg)
    } else {
        zeta_mod * (1.0 - (-cos_arg).max(0.0))
    };
    let zeta_start = 2.0 / 3.0 * STEP_START_RADIUS * libm::sqrt(STEP_START_RADIUS);
    let step_loss = 2.0 * (-cos_arg).max(0.0) * (zeta_start - zeta_mod);
    if series_loss <= step_loss {
        maclaurin(z)
    } else {
        step_inward(z)
    }
}

fn maclaurin(z: C64) -> (C64, C64) {
    taylor(C64::new(0.0, 0.0), C64::new(AI0, 0.0), C64::new(AIP0, 0.0), z)
}

/// Value and derivative at `z0 + h` from the Taylor series of `y'' = z y` at `z0`.
fn taylor(z0: C64, y0: C64, dy0: C64, h_target: C64) -> (C64, C64) {
    let h = h_target - z0;
    // coefficients a_m of (z - z0)^m; a_{m+2} = (z0 a_m + a_{m-1}) / ((m+2)(m+1))
    let mut a_mm1 = C64::new(0.0, 0.0); // a_{m-1}
    let mut a_prev = y0; // a_m
    let mut a_cur = dy0; // a_{m+1}
    let mut hp = h; // h^{m+1}
    let mut y = y0 + dy0 * h;
    let mut dy = dy0;
    let mut m = 0usize;
    let mut small = 0;
    loop {
        // a_{m+2}
        let mf = m as f64;
        let next = (z0 * a_prev + a_mm1) / ((mf + 2.0) * (mf + 1.0));
        a_mm1 = a_prev;
        a_prev = a_cur;
        a_cur = next;
        // term of y': (m+2) a_{m+2} h^{m+1}; term of y: a_{m+2} h^{m+2}
        let dterm = next * hp * (mf + 2.0);
        hp *= h;
        let yterm = next * hp;
        y += yterm;
        dy += dterm;
        m += 1;
        let tiny = yterm.norm() <= f64::EPSILON * 1e-3 * y.norm()
            && dterm.norm() <= f64::EPSILON * 1e-3 * dy.norm();
        if tiny {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        if m > 2000 {
            break;
        }
    }
    (y, dy)
}

fn step_inward(z: C64) -> (C64, C64) {
    let r = z.norm();
    let dir = z / r;
    let start = dir * STEP_START_RADIUS;
    let (mut y, mut dy) = asymptotic(start);
    let steps = libm::ceil((STEP_START_RADIUS - r) / MAX_STEP).max(1.0) as usize;
    let mut zc = start;
    for i in 1..=steps {
        let rad = STEP_START_RADIUS - (STEP_START_RADIUS - r) * i as f64 / steps as f64;
        let zn = if i == steps { z } else { dir * rad };
        let (ny, ndy) = taylor(zc, y, dy, zn);
        y = ny;
        dy = ndy;
        zc = zn;
    }
    (y, dy)
}

/// Coefficients `u_k` and `v_k` of the large-argument expansions.
fn uv(n: usize) -> ([f64; 64], [f64; 64]) {
    let mut u = [0.0; 64];
    let mut v = [0.0; 64];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..n.min(64) {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
}

/// Alternating sums `Σ (-1)^k c_k ζ^{-k}` truncated at the smallest term.
fn asym_sum(c: &[f64], zeta: C64, even_odd: Option<usize>) -> C64 {
    let inv = C64::new(1.0, 0.0) / zeta;
    let mut sum = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    match even_odd {
        None => {
            let mut p = C64::new(1.0, 0.0);
            for (k, ck) in c.iter().enumerate() {
                let term = p * *ck * if k % 2 == 0 { 1.0 } else { -1.0 };
                let tn = term.norm();
                if tn > last {
                    break;
                }
                sum += term;
                last = tn;
                if tn <= f64::EPSILON * 1e-2 * sum.norm() {
                    break;
                }
                p *= inv;
            }
        }
        Some(parity) => {
            // Σ_k (-1)^k c_{2k+parity} ζ^{-(2k+parity)}
            let inv2 = inv * inv;
            let mut p = if parity == 0 { C64::new(1.0, 0.0) } else { inv };
            let mut k = 0usize;
            while 2 * k + parity < c.len() {
                let term = p * c[2 * k + parity] * if k % 2 == 0 { 1.0 } else { -1.0 };
                let tn = term.norm();
                if tn > last {
                    break;
                }
                sum += term;
                last = tn;
                if tn <= f64::EPSILON * 1e-2 * sum.norm() {
                    break;
                }
                p *= inv2;
                k += 1;
            }
        }
    }
    sum
}

fn asymptotic(z: C64) -> (C64, C64) {
    let (u, v) = uv(64);
    let sqrt_pi = libm::sqrt(PI);
    if libm::fabs(z.arg()) <= FRAC_PI_2 {
        let zeta = z * z.sqrt() * (2.0 / 3.0);
        let q = z.sqrt().sqrt();
        let e = (-zeta).exp();
        let ai = e / (q * 2.0 * sqrt_pi) * asym_sum(&u, zeta, None);
        let aip = -(q * e) / (2.0 * sqrt_pi) * asym_sum(&v, zeta, None);
        (ai, aip)
    } else {
        let w = -z;
        let zeta = w * w.sqrt() * (2.0 / 3.0);
        let q = w.sqrt().sqrt();
        let ph = zeta - C64::new(FRAC_PI_4, 0.0);
        let (c, s) = (ph.cos(), ph.sin());
        let ai = (c * asym_sum(&u, zeta, Some(0)) + s * asym_sum(&u, zeta, Some(1))) / (q * sqrt_pi);
        let aip = q / sqrt_pi * (s * asym_sum(&v, zeta, Some(0)) - c * asym_sum(&v, zeta, Some(1)));
        (ai, aip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // mpmath reference values (50-digit arithmetic, rounded to f64)
    const REAL_REF: [(f64, f64, f64); 9] = [
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_8),
        (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_21),
        (-1.0, 0.535_560_883_292_352_12, -0.010_160_567_116_645_209),
        (3.0, 0.006_591_139_357_460_719, -0.011_912_976_705_951_319),
        (5.0, 1.083_444_281_360_744_2e-4, -2.474_138_908_684_624_8e-4),
        (-5.0, 0.350_761_009_024_114_32, 0.327_192_818_554_443_14),
        (8.0, 4.692_207_616_099_231_6e-8, -1.341_439_297_906_786_6e-7),
        (-8.0, -0.052_705_050_356_386_203, 0.935_560_938_198_306_55),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
    ];

    #[test]
    fn real_axis_against_reference() {
        for (x, ai, aip) in REAL_REF {
            let (a, d) = airy_ai_pair(C64::new(x, 0.0));
            assert!(rel(a, C64::new(ai, 0.0)) < 1e-10, "Ai({x}) = {a}, want {ai}");
            assert!(rel(d, C64::new(aip, 0.0)) < 1e-10, "Ai'({x}) = {d}, want {aip}");
        }
        let a = airy_ai(C64::new(25.0, 0.0));
        assert!(rel(a, C64::new(8.116_026_824_691_386_7e-38, 0.0)) < 1e-10);
        let a = airy_ai(C64::new(-10.0, 0.0));
        assert!(rel(a, C64::new(0.040_241_238_486_443_19, 0.0)) < 1e-10);
    }

    #[test]
    fn complex_plane_against_reference() {
        let refs = [
            (C64::new(1.0, 1.0), C64::new(0.060_458_308_371_838_149, -0.151_889_565_877_181_4)),
            (C64::new(-3.0, 2.0), C64::new(-4.419_689_554_264_167_3, 5.454_622_517_782_667_4)),
            (C64::new(4.0, 6.0), C64::new(0.042_892_735_249_552_74, -0.024_752_152_915_448_027)),
            (C64::new(0.0, 7.0), C64::new(-1_027.632_482_871_460_1, -324.384_386_015_705_86)),
            (C64::new(-6.0, -1.0), C64::new(-1.866_530_581_244_939_8, -0.955_965_483_518_478_12)),
            (C64::new(2.0, -9.0), C64::new(-122.223_338_856_372_3, -603.207_826_721_859_92)),
            (C64::new(0.0, 2.5), C64::new(-0.902_636_388_075_986_1, -1.160_018_916_928_939_7)),
            (C64::new(6.0, -8.0), C64::new(-0.001_907_944_525_221_153_2, 0.003_111_516_723_146_274_6)),
            (C64::new(-7.0, 7.0), C64::new(16_352_742.280_413_376, 30_075_154.810_412_22)),
        ];
        for (z, want) in refs {
            let got = airy_ai(z);
            assert!(rel(got, want) < 1e-10, "Ai({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn leading_asymptotic_at_25() {
        let zeta: f64 = 25.0;
        let lead = 1.0 / (2.0 * libm::sqrt(PI) * libm::pow(zeta, 0.25)) * libm::exp(-2.0 / 3.0 * libm::pow(zeta, 1.5));
        let got = airy_ai(C64::new(zeta, 0.0)).re;
        assert!(((got - lead) / lead).abs() < 0.02);
    }

    #[test]
    fn first_zero_by_secant_on_series() {
        // root-finding oracle on the Maclaurin series, seeded near -2.3
        let f = |x: f64| maclaurin(C64::new(x, 0.0)).0.re;
        let (mut x0, mut x1) = (-2.3, -2.4);
        for _ in 0..60 {
            let (f0, f1) = (f(x0), f(x1));
            if f1 == f0 {
                break;
            }
            let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            x1 = x2;
        }
        assert!((x1 - (-2.338_107_410_459_767)).abs() < 1e-12);
        assert!(airy_ai(C64::new(x1, 0.0)).norm() < 1e-9);
        assert!(airy_ai(C64::new(-2.338_107_410, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn regimes_agree_at_crossovers() {
        for k in 0..24 {
            let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / 24.0;
            let dir = C64::from_polar(1.0, phi);
            for r in [2.000_001, 8.0] {
                let z = dir * r;
                let (a, d) = airy_ai_pair(z);
                let (b, e) = if r < 3.0 { maclaurin(z) } else { asymptotic(z) };
                assert!(rel(a, b) < 1e-8, "Ai at {z}: {a} vs {b}");
                assert!(rel(d, e) < 1e-8, "Ai' at {z}: {d} vs {e}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for z in [C64::new(3.0, 4.0), C64::new(-5.5, 0.5), C64::new(1.0, 9.0)] {
            let a = airy_ai(z);
            let b = airy_ai(z.conj());
            assert!(rel(b, a.conj()) < 1e-13);
        }
    }

    #[test]
    fn coefficient_recurrences() {
        let (u, v) = uv(4);
        assert!((u[1] - 5.0 / 72.0).abs() < 1e-16);
        assert!((v[1] + 7.0 / 72.0).abs() < 1e-16);
        assert!((u[2] - 385.0 / 10368.0).abs() < 1e-16);
    }

    /// Double-double arithmetic for the ODE-residual oracle.
    mod dd {
        #[derive(Clone, Copy, Debug)]
        pub struct Dd(pub f64, pub f64);

        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }

        fn quick(a: f64, b: f64) -> Dd {
            let s = a + b;
            Dd(s, b - (s - a))
        }

        impl Dd {
            pub fn add(self, o: Dd) -> Dd {
                let (s, e) = two_sum(self.0, o.0);
                let (t, f) = two_sum(self.1, o.1);
                let r = quick(s, e + t);
                quick(r.0, r.1 + f)
            }
            pub fn neg(self) -> Dd {
                Dd(-self.0, -self.1)
            }
            pub fn mul(self, o: Dd) -> Dd {
                let p = self.0 * o.0;
                let e = libm::fma(self.0, o.0, -p);
                quick(p, e + self.0 * o.1 + self.1 * o.0)
            }
            pub fn div_f64(self, b: f64) -> Dd {
                let q1 = self.0 / b;
                let p = q1 * b;
                let e = libm::fma(q1, b, -p);
                let r = (self.0 - p - e + self.1) / b;
                quick(q1, r)
            }
        }

        #[derive(Clone, Copy, Debug)]
        pub struct Cdd(pub Dd, pub Dd);

        impl Cdd {
            pub fn from_f64(re: f64, im: f64) -> Cdd {
                Cdd(Dd(re, 0.0), Dd(im, 0.0))
            }
            pub fn add(self, o: Cdd) -> Cdd {
                Cdd(self.0.add(o.0), self.1.add(o.1))
            }
            pub fn mul(self, o: Cdd) -> Cdd {
                Cdd(
                    self.0.mul(o.0).add(self.1.mul(o.1).neg()),
                    self.0.mul(o.1).add(self.1.mul(o.0)),
                )
            }
            pub fn div_f64(self, b: f64) -> Cdd {
                Cdd(self.0.div_f64(b), self.1.div_f64(b))
            }
            pub fn norm_hi(self) -> f64 {
                libm::hypot(self.0 .0, self.1 .0)
            }
        }
    }

    /// `Ai''(z) = Σ m(m-1) a_m z^{m-2}` in double-double, with
    /// `a_{m+3} = a_m / ((m+3)(m+2))`, `a_0 = Ai(0)`, `a_1 = Ai'(0)`, `a_2 = 0`.
    fn second_derivative_oracle(z: C64) -> C64 {
        use dd::{Cdd, Dd};
        let zz = Cdd::from_f64(z.re, z.im);
        let z3 = zz.mul(zz).mul(zz);
        // terms b_m = m(m-1) a_m z^{m-2}, chains starting at m = 3 and m = 4
        let a0 = Dd(0.3550280538878172, 2.05233632436212e-17);
        let a1 = Dd(-0.2588194037928068, 2.522243111610832e-17);
        let mut sum = Cdd::from_f64(0.0, 0.0);
        for (start, lead) in [(3usize, Cdd(a0, Dd(0.0, 0.0)).mul(zz)), (4, Cdd(a1, Dd(0.0, 0.0)).mul(zz).mul(zz))] {
            let mut b = lead;
            let mut m = start;
            let mut quiet = 0;
            loop {
                sum = sum.add(b);
                b = b.mul(z3).div_f64((m * (m - 1)) as f64);
                m += 3;
                if b.norm_hi() < 1e-34 * sum.norm_hi().max(1e-300) {
                    quiet += 1;
                    if quiet > 2 {
                        break;
                    }
                }
                if m > 3000 {
                    break;
                }
            }
        }
        C64::new(sum.0 .0 + sum.0 .1, sum.1 .0 + sum.1 .1)
    }

    #[test]
    fn ode_residual_on_disk_of_radius_ten() {
        for i in -10..=10 {
            for j in -10..=10 {
                let z = C64::new(i as f64, j as f64 * 0.999);
                if z.norm() > 10.0 {
                    continue;
                }
                let ai = airy_ai(z);
                let d2 = second_derivative_oracle(z);
                let res = (d2 - z * ai).norm();
                assert!(res <= 1e-8 * (1.0 + ai.norm()), "z = {z}: residual {res}, |Ai| = {}", ai.norm());
                // the absolute form above is loose where Ai is tiny; check relatively too
                assert!(res <= 1e-10 * (z * ai).norm().max(1e-300), "z = {z}: relative residual {}", res / (z * ai).norm());
            }
        }
    }
}
