//! Dense complex matrix exponential by Pade approximation with scaling and
//! squaring (Higham 2005, Algorithm 2.3).  Chosen over eigendecomposition
//! because the generators handled here can be non-normal and near-defective
//! at strong coupling.

use ndarray::prelude::*;
use ndarray_linalg::Solve;
use num_complex::Complex64;

use crate::op::CMat;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0_f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

fn pade_coeffs(m: usize) -> Vec<f64> {
    match m {
        3 => std::vec![120.0, 60.0, 12.0, 1.0],
        5 => std::vec![30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => std::vec![17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => std::vec![
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        13 => std::vec![
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
        ],
        _ => unreachable!(),
    }
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Evaluate the order-m Pade approximant r_m(A) = q_m(A)^{-1} p_m(A) by
/// solving the linear system (-U + V) X = (U + V).
fn pade(a: &CMat, m: usize) -> CMat {
    let n = a.nrows();
    let b = pade_coeffs(m);
    let a2 = a.dot(a);
    let (u, v) = if m < 13 {
        // U = A (sum_k b_{2k+1} A^{2k}), V = sum_k b_{2k} A^{2k}
        let mut even: CMat = Array2::eye(n).mapv(|z: Complex64| z * c64(b[0]));
        let mut odd: CMat = Array2::eye(n).mapv(|z: Complex64| z * c64(b[1]));
        let mut pow = a2.clone();
        let mut k = 2;
        while k <= m {
            even = even + pow.mapv(|z| z * c64(b[k]));
            if k + 1 <= m {
                odd = odd + pow.mapv(|z| z * c64(b[k + 1]));
            }
            if k + 2 <= m {
                pow = pow.dot(&a2);
            }
            k += 2;
        }
        (a.dot(&odd), even)
    } else {
        let a4 = a2.dot(&a2);
        let a6 = a4.dot(&a2);
        let id: CMat = Array2::eye(n);
        let u_hi = a6.mapv(|z| z * c64(b[13])) + a4.mapv(|z| z * c64(b[11])) + a2.mapv(|z| z * c64(b[9]));
        let u_lo = a6.mapv(|z| z * c64(b[7]))
            + a4.mapv(|z| z * c64(b[5]))
            + a2.mapv(|z| z * c64(b[3]))
            + id.mapv(|z| z * c64(b[1]));
        let u = a.dot(&(a6.dot(&u_hi) + u_lo));
        let v_hi = a6.mapv(|z| z * c64(b[12])) + a4.mapv(|z| z * c64(b[10])) + a2.mapv(|z| z * c64(b[8]));
        let v = a6.dot(&v_hi)
            + a6.mapv(|z| z * c64(b[6]))
            + a4.mapv(|z| z * c64(b[4]))
            + a2.mapv(|z| z * c64(b[2]))
            + id.mapv(|z| z * c64(b[0]));
        (u, v)
    };
    let lhs = &v - &u;
    let rhs = &v + &u;
    // column-by-column solve of lhs X = rhs
    let mut out = Array2::zeros((n, n));
    let f = &lhs;
    for j in 0..n {
        let col = rhs.column(j).to_owned();
        let x = f.solve(&col).expect("pade solve failed");
        out.column_mut(j).assign(&x);
    }
    out
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm: matrix must be square");
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    if norm <= THETA_3 {
        return pade(a, 3);
    }
    if norm <= THETA_5 {
        return pade(a, 5);
    }
    if norm <= THETA_7 {
        return pade(a, 7);
    }
    if norm <= THETA_9 {
        return pade(a, 9);
    }
    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
    let scaled = a.mapv(|z| z / c64(2f64.powi(s as i32)));
    let mut r = pade(&scaled, 13);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// exp(s * A).
pub fn expm_scaled(a: &CMat, s: f64) -> CMat {
    expm(&a.mapv(|z| z * c64(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{ONE, ZERO};

    #[test]
    fn exponential_of_zero_is_identity() {
        let z: CMat = Array2::zeros((4, 4));
        let e = expm(&z);
        let id: CMat = Array2::eye(4);
        let err = (&e - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn rotation_matrix() {
        // exp(theta * [[0,-1],[1,0]]) = [[cos, -sin],[sin, cos]]
        let theta = 1.3_f64;
        let g = array![[ZERO, -ONE], [ONE, ZERO]].mapv(|z| z * Complex64::new(theta, 0.0));
        let e = expm(&g);
        assert!((e[[0, 0]].re - theta.cos()).abs() < 1e-13);
        assert!((e[[1, 0]].re - theta.sin()).abs() < 1e-13);
        assert!(e[[0, 1]].im.abs() < 1e-13);
    }

    #[test]
    fn large_norm_uses_squaring() {
        // nilpotent with large entries: exp = I + N exactly
        let big = Complex64::new(4.0e3, 0.0);
        let n = array![[ZERO, big], [ZERO, ZERO]];
        let e = expm(&n);
        assert!((e[[0, 0]] - ONE).norm() < 1e-9);
        assert!((e[[0, 1]] - big).norm() < 1e-9 * big.norm());
        assert!(e[[1, 0]].norm() < 1e-12);
    }

    #[test]
    fn semigroup_property() {
        // a non-normal matrix
        let a = array![
            [Complex64::new(-0.3, 0.1), Complex64::new(2.0, -0.4)],
            [ZERO, Complex64::new(-1.0, 0.7)]
        ];
        let half = expm_scaled(&a, 0.3);
        let full = expm_scaled(&a, 0.6);
        let err = (&half.dot(&half) - &full)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "semigroup violation {err}");
    }
}
