//! Dense complex eigensolver: Householder reduction to Hessenberg form,
//! shifted QR iteration to complex Schur form, then back-substitution for
//! eigenvectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{vec_norm, CMatrix};
use crate::{Error, Result, C64};

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues and unit-norm right eigenvectors (stored as columns).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

/// Full eigendecomposition of a square complex matrix.
pub fn eig(a: &CMatrix) -> Result<EigenDecomposition> {
    assert!(a.is_square(), "eigensolver needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let (mut t, mut z) = hessenberg(a);
    schur(&mut t, &mut z)?;
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let vectors = triangular_eigenvectors(&t, &z);
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only (still runs the full Schur iteration).
pub fn eigvals(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.rows();
    let (mut t, mut z) = hessenberg(a);
    schur(&mut t, &mut z)?;
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Returns `(H, Q)` with `A = Q H Qᴴ` and `H` upper Hessenberg.
pub fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    let mut v = vec![C64::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = libm::sqrt(tail + x0.norm_sqr());
        let phase = if x0.is_zero() {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        for i in 0..n {
            v[i] = if i > k { h[(i, k)] } else { C64::zero() };
        }
        v[k + 1] -= alpha;
        let vn = vec_norm(&v[k + 1..]);
        for x in &mut v[k + 1..] {
            *x /= vn;
        }
        // H <- (I - 2 v vᴴ) H
        for j in k..n {
            let mut s = C64::zero();
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            let s2 = s * 2.0;
            for i in k + 1..n {
                let vi = v[i];
                h[(i, j)] -= vi * s2;
            }
        }
        // H <- H (I - 2 v vᴴ), Q <- Q (I - 2 v vᴴ)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let row = m.row_mut(i);
                let mut s = C64::zero();
                for j in k + 1..n {
                    s += row[j] * v[j];
                }
                let s2 = s * 2.0;
                for j in k + 1..n {
                    row[j] -= s2 * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::zero();
        }
    }
    (h, q)
}

#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    /// Rotation `G` with `G [a; b] = [r; 0]`.
    fn new(a: C64, b: C64) -> Self {
        let an = a.norm();
        let bn = b.norm();
        if bn == 0.0 {
            return Self { c: 1.0, s: C64::zero() };
        }
        if an == 0.0 {
            return Self {
                c: 0.0,
                s: b.conj() / bn,
            };
        }
        let rho = libm::hypot(an, bn);
        Self {
            c: an / rho,
            s: (a / an) * b.conj() / rho,
        }
    }

    /// Rows `k, k+1` of `m`, columns `from..`.
    fn apply_left(&self, m: &mut CMatrix, k: usize, from: usize) {
        let n = m.cols();
        for j in from..n {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Columns `k, k+1` of `m` times `Gᴴ`, rows `..rows`.
    fn apply_right_adjoint(&self, m: &mut CMatrix, k: usize, rows: usize) {
        for i in 0..rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + self.s.conj() * y;
            m[(i, k + 1)] = -self.s * x + y * self.c;
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let den = if (p + disc).norm() >= (p - disc).norm() {
        p + disc
    } else {
        p - disc
    };
    if den.is_zero() {
        d
    } else {
        d - bc / den
    }
}

/// Reduces Hessenberg `t` to upper-triangular Schur form in place,
/// accumulating the unitary similarity into `z`.
fn schur(t: &mut CMatrix, z: &mut CMatrix) -> Result<()> {
    let n = t.rows();
    let hnorm = t.norm_frobenius();
    if hnorm == 0.0 {
        return Ok(());
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n.max(1);
    let mut rots: Vec<Givens> = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let scale = t[(l - 1, l - 1)].norm() + t[(l, l)].norm();
            let scale = if scale == 0.0 { hnorm } else { scale };
            if t[(l, l - 1)].norm() <= EPS * scale {
                t[(l, l - 1)] = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::Solver(format!(
                "QR iteration did not converge within {budget} sweeps (active block {l}..={hi})"
            )));
        }
        let mu = if iter % 10 == 0 {
            let sub = t[(hi, hi - 1)].norm()
                + if hi >= 2 { t[(hi - 1, hi - 2)].norm() } else { 0.0 };
            t[(hi, hi)] + C64::new(0.75 * sub, 0.5 * sub)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };
        for i in l..=hi {
            t[(i, i)] -= mu;
        }
        rots.clear();
        for k in l..hi {
            let g = Givens::new(t[(k, k)], t[(k + 1, k)]);
            g.apply_left(t, k, k);
            t[(k + 1, k)] = C64::zero();
            rots.push(g);
        }
        for (off, g) in rots.iter().enumerate() {
            let k = l + off;
            g.apply_right_adjoint(t, k, (k + 2).min(hi + 1));
            g.apply_right_adjoint(z, k, n);
        }
        for i in l..=hi {
            t[(i, i)] += mu;
        }
    }
    Ok(())
}

fn triangular_eigenvectors(t: &CMatrix, z: &CMatrix) -> CMatrix {
    let n = t.rows();
    let tnorm = t.norm_frobenius();
    let smin = (EPS * tnorm).max(f64::MIN_POSITIVE);
    let mut vectors = CMatrix::zeros(n, n);
    let mut x = vec![C64::zero(); n];
    for i in 0..n {
        let lam = t[(i, i)];
        for v in x.iter_mut() {
            *v = C64::zero();
        }
        x[i] = C64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut s = C64::zero();
            for m in j + 1..=i {
                s += t[(j, m)] * x[m];
            }
            let mut d = t[(j, j)] - lam;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            x[j] = -s / d;
            // rescale to avoid overflow in long back-substitutions
            let xn = x[j].norm();
            if xn > 1e100 {
                for v in &mut x[j..=i] {
                    *v /= xn;
                }
            }
        }
        let mut col = vec![C64::zero(); n];
        for (r, c) in col.iter_mut().enumerate() {
            let zr = z.row(r);
            let mut s = C64::zero();
            for m in 0..=i {
                s += zr[m] * x[m];
            }
            *c = s;
        }
        let cn = vec_norm(&col);
        for (r, c) in col.iter().enumerate() {
            vectors[(r, i)] = c / cn;
        }
    }
    vectors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(n: usize, seed: f64) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let x = seed + (i * 13 + j * 7) as f64;
            C64::new(libm::sin(x * 1.7), libm::cos(x * 0.3 + 1.0))
        })
    }

    fn max_residual(a: &CMatrix, e: &EigenDecomposition) -> f64 {
        let n = a.rows();
        (0..n)
            .map(|i| {
                let v = e.vectors.column(i);
                let av = a.matvec(&v);
                let r: Vec<C64> = av.iter().zip(&v).map(|(x, y)| x - e.values[i] * y).collect();
                vec_norm(&r)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn hessenberg_is_a_unitary_similarity() {
        let a = test_matrix(12, 0.4);
        let (h, q) = hessenberg(&a);
        for i in 0..12usize {
            for j in 0..i.saturating_sub(1) {
                assert!(h[(i, j)].is_zero());
            }
        }
        let back = q.matmul(&h).matmul(&q.adjoint());
        assert!(back.sub(&a).norm_frobenius() < 1e-12 * a.norm_frobenius());
        let qq = q.adjoint().matmul(&q);
        assert!(qq.sub(&CMatrix::identity(12)).norm_frobenius() < 1e-13);
    }

    #[test]
    fn random_matrices_have_small_residuals() {
        for (n, seed) in [(1, 0.0), (2, 1.0), (5, 2.0), (30, 3.0), (80, 4.0)] {
            let a = test_matrix(n, seed);
            let e = eig(&a).unwrap();
            assert!(max_residual(&a, &e) < 1e-11 * a.norm_frobenius().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let a = test_matrix(40, 7.0);
        let vals = eigvals(&a).unwrap();
        let tr: C64 = (0..40).map(|i| a[(i, i)]).sum();
        let s: C64 = vals.iter().sum();
        assert!((tr - s).norm() < 1e-11 * a.norm_frobenius());
    }

    #[test]
    fn jordan_block_and_diagonal_cases() {
        let d = CMatrix::diagonal(&[C64::new(3.0, 0.0), C64::new(-1.0, 2.0), C64::new(0.5, 0.0)]);
        let mut vals = eigvals(&d).unwrap();
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(vals[0], C64::new(-1.0, 2.0));
        assert_eq!(vals[2], C64::new(3.0, 0.0));

        // nilpotent shift matrix: all eigenvalues zero
        let j = CMatrix::from_fn(6, 6, |i, k| {
            if k == i + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::zero()
            }
        });
        for v in eigvals(&j).unwrap() {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn companion_matrix_roots() {
        // p(x) = (x-1)(x-2)(x-3)(x-i)
        let roots = [
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(3.0, 0.0),
            C64::new(0.0, 1.0),
        ];
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![C64::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += *c;
                next[i + 1] -= c * r;
            }
            coeffs = next;
        }
        let n = roots.len();
        let comp = CMatrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -coeffs[j + 1]
            } else if j + 1 == i {
                C64::new(1.0, 0.0)
            } else {
                C64::zero()
            }
        });
        let vals = eigvals(&comp).unwrap();
        for r in roots {
            let best = vals.iter().map(|v| (v - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "root {r} missed by {best}");
        }
    }
}
