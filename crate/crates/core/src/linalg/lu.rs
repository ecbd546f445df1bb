use alloc::vec::Vec;

use num_traits::Zero;

use super::CMatrix;
use crate::C64;

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Self { lu, perm, singular }
    }

    /// True if an exactly zero pivot was met.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ y = b, then Lᴴ q = y, then x = Pᵀ q.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = alloc::vec![C64::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve(&b.column(j));
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;

    fn test_matrix(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let x = (i * 7 + j * 3) as f64;
            C64::new(libm::sin(x) + if i == j { 0.5 } else { 0.0 }, libm::cos(1.3 * x))
        })
    }

    #[test]
    fn solve_and_adjoint_solve_invert_the_matrix() {
        let a = test_matrix(9);
        let lu = Lu::new(&a);
        let b: Vec<C64> = (0..9).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let x = lu.solve(&b);
        let r: Vec<C64> = a.matvec(&x).iter().zip(&b).map(|(u, v)| u - v).collect();
        assert!(vec_norm(&r) < 1e-12 * vec_norm(&b));

        let y = lu.solve_adjoint(&b);
        let r: Vec<C64> = a.adjoint().matvec(&y).iter().zip(&b).map(|(u, v)| u - v).collect();
        assert!(vec_norm(&r) < 1e-12 * vec_norm(&b));
    }

    #[test]
    fn zero_pivot_is_reported() {
        let a = CMatrix::from_rows(&[
            &[C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
            &[C64::new(2.0, 0.0), C64::new(4.0, 0.0)],
        ]);
        assert!(Lu::new(&a).is_singular());
    }
}
