use super::{CMatrix, Lu};
use crate::C64;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.rows();
    let norm = a.norm_one();
    let s = if norm > THETA13 {
        libm::ceil(libm::log2(norm / THETA13)) as i32
    } else {
        0
    };
    let a = a.scale(C64::new(libm::exp2(-f64::from(s)), 0.0));
    let id = CMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = |i: usize| C64::new(PADE13[i], 0.0);
    let lin = |x: &CMatrix, cx: usize, y: &CMatrix, cy: usize, z: &CMatrix, cz: usize| {
        x.scale(b(cx)).add(&y.scale(b(cy))).add(&z.scale(b(cz)))
    };

    let u_inner = a6.matmul(&lin(&a6, 13, &a4, 11, &a2, 9));
    let u = a.matmul(&u_inner.add(&lin(&a6, 7, &a4, 5, &a2, 3)).add(&id.scale(b(1))));
    let v_inner = a6.matmul(&lin(&a6, 12, &a4, 10, &a2, 8));
    let v = v_inner.add(&lin(&a6, 6, &a4, 4, &a2, 2)).add(&id.scale(b(0)));

    let p = v.add(&u);
    let q = v.sub(&u);
    let mut r = Lu::new(&q).solve_matrix(&p);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn diagonal_matches_scalar_exponentials() {
        let d = [C64::new(-3.0, 1.0), C64::new(0.5, -2.0), C64::new(10.0, 0.0)];
        let e = expm(&CMatrix::diagonal(&d));
        for (i, z) in d.iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() < 1e-13 * z.exp().norm());
        }
    }

    #[test]
    fn nilpotent_series_is_exact() {
        // exp(N) = I + N + N²/2 for a 3x3 shift matrix
        let nmat = CMatrix::from_fn(3, 3, |i, j| {
            if j == i + 1 {
                C64::new(2.0, 0.0)
            } else {
                C64::zero()
            }
        });
        let e = expm(&nmat);
        assert!((e[(0, 1)] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((e[(0, 2)] - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((e[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn semigroup_property() {
        let a = CMatrix::from_fn(8, 8, |i, j| {
            C64::new(libm::sin((i + 2 * j) as f64), 0.3 * libm::cos((3 * i + j) as f64))
        });
        let e1 = expm(&a.scale(C64::new(0.7, 0.0)));
        let e2 = expm(&a.scale(C64::new(1.3, 0.0)));
        let e12 = expm(&a.scale(C64::new(2.0, 0.0)));
        let d = e1.matmul(&e2).sub(&e12).norm_frobenius();
        assert!(d < 1e-12 * e12.norm_frobenius());
    }
}
