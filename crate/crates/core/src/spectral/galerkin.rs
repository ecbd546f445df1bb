use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::DiscretizationConfig;
use crate::asymptotics::OscillatorParams;
use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

/// Real matrix of `x²` in the Hermite basis, size `n`.
fn x2_dense(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for j in 0..n {
        m[j * n + j] = j as f64 + 0.5;
        if j + 2 < n {
            let v = libm::sqrt(((j + 1) * (j + 2)) as f64) / 2.0;
            m[j * n + j + 2] = v;
            m[(j + 2) * n + j] = v;
        }
    }
    m
}

fn real_matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = a[i * n + l];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[l * n + j];
            }
        }
    }
    out
}

/// `X^{2k}` restricted to the first `n` basis functions, exact for the
/// infinite matrix: computed as `(X²)^k` on `n + 2k` functions and truncated.
fn x2k(n: usize, k: u32) -> Vec<f64> {
    let big = n + 2 * k as usize;
    let x2 = x2_dense(big);
    let mut p = x2.clone();
    for _ in 1..k {
        p = real_matmul(&p, &x2, big);
    }
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = p[i * big + j];
        }
    }
    // enforce exact symmetry
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (out[i * n + j] + out[j * n + i]);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}

/// Galerkin matrix `α² P² + e^{iθ} α^{-2k} X^{2k}` of size `N × N`.
pub fn build_matrix(params: &OscillatorParams, config: &DiscretizationConfig) -> Result<CMatrix> {
    config.validate()?;
    let n = config.basis_size;
    let k = params.k();
    if n < 4 * k as usize {
        return Err(Error::Config(format!(
            "basis_size = {n} is below 4k = {} for k = {k}",
            4 * k
        )));
    }
    let alpha = config.scale;
    let kin = alpha * alpha;
    let pot = C64::from_polar(libm::pow(alpha, -2.0 * k as f64), params.theta());
    let x = x2k(n, k);
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = x[i * n + j];
            if v != 0.0 {
                m[(i, j)] = pot * v;
            }
        }
    }
    for j in 0..n {
        m[(j, j)] += C64::new(kin * (j as f64 + 0.5), 0.0);
        if j + 2 < n {
            let off = -kin * libm::sqrt(((j + 1) * (j + 2)) as f64) / 2.0;
            m[(j, j + 2)] += C64::new(off, 0.0);
            m[(j + 2, j)] += C64::new(off, 0.0);
        }
    }
    Ok(m)
}

/// Basis indices of one parity (`0` even, `1` odd) below `n`.
pub fn parity_indices(n: usize, parity: usize) -> Vec<usize> {
    (parity..n).step_by(2).collect()
}

/// The even and odd diagonal blocks of a Galerkin matrix.
#[derive(Clone, Debug)]
pub struct ParityBlocks {
    pub size: usize,
    /// `[even, odd]`.
    pub blocks: [CMatrix; 2],
    pub indices: [Vec<usize>; 2],
}

impl ParityBlocks {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.rows();
        let even = parity_indices(n, 0);
        let odd = parity_indices(n, 1);
        Self {
            size: n,
            blocks: [m.principal_submatrix(&even), m.principal_submatrix(&odd)],
            indices: [even, odd],
        }
    }

    /// Embeds a block vector into a full-length coefficient vector.
    pub fn embed(&self, parity: usize, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.size];
        for (&i, x) in self.indices[parity].iter().zip(v) {
            out[i] = *x;
        }
        out
    }
}

pub fn build_parity_blocks(params: &OscillatorParams, config: &DiscretizationConfig) -> Result<ParityBlocks> {
    Ok(ParityBlocks::from_matrix(&build_matrix(params, config)?))
}
