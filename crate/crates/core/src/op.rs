//! Dense operators on a tagged Hilbert space: tensor products, partial
//! traces, norms and the vectorization convention used throughout.
//!
//! Vectorization is column-stacking: `vec(X)[i + d*j] = X[i, j]`, so the
//! superoperator of `X -> A X B` has matrix `B^T (x) A`.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::{SpaceTag, Subsystem};

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Column-stacking vectorization.
pub fn vec(x: &CMat) -> CVec {
    let d = x.nrows();
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + d * j] = x[[i, j]];
        }
    }
    v
}

/// Inverse of [`vec`].
pub fn unvec(v: &CVec, d: usize) -> CMat {
    assert_eq!(v.len(), d * d, "unvec: length must be d^2");
    let mut m = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            m[[i, j]] = v[i + d * j];
        }
    }
    m
}

pub fn dagger(x: &CMat) -> CMat {
    x.t().mapv(|z| z.conj())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// A d x d complex matrix tagged with the Hilbert space it acts on.
#[derive(Clone, Debug)]
pub struct Operator {
    space: SpaceTag,
    mat: CMat,
}

impl Operator {
    pub fn new(space: SpaceTag, mat: CMat) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                context: "Operator::new",
                expected: space.dim(),
                got: mat.nrows(),
            });
        }
        Ok(Operator { space, mat })
    }

    pub fn zeros(space: SpaceTag) -> Self {
        Operator { space, mat: Array2::zeros((space.dim(), space.dim())) }
    }

    pub fn identity(space: SpaceTag) -> Self {
        Operator { space, mat: Array2::eye(space.dim()) }
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Operator { space: self.space, mat: dagger(&self.mat) }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diag().sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Operator { space: self.space, mat: self.mat.mapv(|z| z * c) }
    }

    pub fn add(&self, other: &Operator) -> Self {
        assert_eq!(self.space, other.space, "operator add: space mismatch");
        Operator { space: self.space, mat: &self.mat + &other.mat }
    }

    pub fn sub(&self, other: &Operator) -> Self {
        assert_eq!(self.space, other.space, "operator sub: space mismatch");
        Operator { space: self.space, mat: &self.mat - &other.mat }
    }

    /// Matrix product on the same space.
    pub fn matmul(&self, other: &Operator) -> Self {
        assert_eq!(self.space, other.space, "operator matmul: space mismatch");
        Operator { space: self.space, mat: self.mat.dot(&other.mat) }
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Hilbert-Schmidt inner product `<self, other> = Tr[self^+ other]`.
    pub fn hs_inner(&self, other: &Operator) -> Complex64 {
        assert_eq!(self.space, other.space, "hs_inner: space mismatch");
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Trace norm: sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.mat)
    }

    /// Operator norm: largest singular value.
    pub fn op_norm(&self) -> f64 {
        op_norm(&self.mat)
    }

    pub fn hermitize(&self) -> Self {
        let h = self.mat.mapv(|z| z * Complex64::new(0.5, 0.0))
            + dagger(&self.mat).mapv(|z| z * Complex64::new(0.5, 0.0));
        Operator { space: self.space, mat: h }
    }

    /// Largest entry of `X - X^+`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = &self.mat - &dagger(&self.mat);
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product of an operator on A with one on B.
    /// Basis ordering is A outer, B inner.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        if self.space.which != Subsystem::A
            || other.space.which != Subsystem::B
            || !self.space.same_partition(&other.space)
        {
            return Err(Error::SpaceMismatch { context: "tensor(A, B)" });
        }
        Ok(Operator {
            space: self.space.retag(Subsystem::AB),
            mat: kron(&self.mat, &other.mat),
        })
    }

    /// Partial trace over the A factor; trace preserving.
    pub fn partial_trace_a(&self) -> Result<Operator> {
        if self.space.which != Subsystem::AB {
            return Err(Error::SpaceMismatch { context: "partial_trace_a" });
        }
        let (da, db) = (self.space.dim_a, self.space.dim_b);
        let mut out = Array2::zeros((db, db));
        for b in 0..db {
            for bp in 0..db {
                let mut acc = ZERO;
                for a in 0..da {
                    acc += self.mat[[a * db + b, a * db + bp]];
                }
                out[[b, bp]] = acc;
            }
        }
        Ok(Operator { space: self.space.retag(Subsystem::B), mat: out })
    }

    /// Partial trace over the B factor.
    pub fn partial_trace_b(&self) -> Result<Operator> {
        if self.space.which != Subsystem::AB {
            return Err(Error::SpaceMismatch { context: "partial_trace_b" });
        }
        let (da, db) = (self.space.dim_a, self.space.dim_b);
        let mut out = Array2::zeros((da, da));
        for a in 0..da {
            for ap in 0..da {
                let mut acc = ZERO;
                for b in 0..db {
                    acc += self.mat[[a * db + b, ap * db + b]];
                }
                out[[a, ap]] = acc;
            }
        }
        Ok(Operator { space: self.space.retag(Subsystem::A), mat: out })
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        let (vals, _) = self.mat.eigh(UPLO::Lower)?;
        Ok(vals.to_vec())
    }

    /// Project onto the positive cone: clip small negative eigenvalues to
    /// zero.  Returns the clipped operator and the most negative eigenvalue
    /// encountered.
    pub fn clip_negative_eigenvalues(&self) -> Result<(Operator, f64)> {
        let (vals, vecs) = self.mat.eigh(UPLO::Lower)?;
        let min_eig = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let d = self.dim();
        let mut out: CMat = Array2::zeros((d, d));
        for (k, &v) in vals.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            let col = vecs.column(k);
            for i in 0..d {
                for j in 0..d {
                    out[[i, j]] += Complex64::new(v, 0.0) * col[i] * col[j].conj();
                }
            }
        }
        Ok((Operator { space: self.space, mat: out }, min_eig))
    }
}

pub fn trace_norm(x: &CMat) -> f64 {
    let (_, s, _) = x.svd(false, false).expect("svd failed");
    s.sum()
}

pub fn op_norm(x: &CMat) -> f64 {
    let (_, s, _) = x.svd(false, false).expect("svd failed");
    s.iter().cloned().fold(0.0, f64::max)
}

/// The four 2x2 Pauli-basis matrices `I, sigma_1, sigma_2, sigma_3`.
pub fn pauli(k: usize) -> CMat {
    match k {
        0 => array![[ONE, ZERO], [ZERO, ONE]],
        1 => array![[ZERO, ONE], [ONE, ZERO]],
        2 => array![[ZERO, -I], [I, ZERO]],
        3 => array![[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index must be 0..=3"),
    }
}

/// Lowering operator `sigma_- = (sigma_1 - i sigma_2)/2`.
pub fn sigma_minus() -> CMat {
    array![[ZERO, ZERO], [ONE, ZERO]]
}

/// Raising operator `sigma_+ = (sigma_1 + i sigma_2)/2`.
pub fn sigma_plus() -> CMat {
    array![[ZERO, ONE], [ZERO, ZERO]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceTag;

    fn op_a(m: CMat) -> Operator {
        Operator::new(SpaceTag::a(2, 2), m).unwrap()
    }
    fn op_b(m: CMat) -> Operator {
        Operator::new(SpaceTag::b(2, 2), m).unwrap()
    }

    #[test]
    fn vec_convention_column_stacking() {
        let v = vec(&pauli(0));
        assert_eq!(v.to_vec(), std::vec![ONE, ZERO, ZERO, ONE]);
        let x = array![[ONE, 3.0 * ONE], [2.0 * ONE, 4.0 * ONE]];
        let v = vec(&x);
        assert_eq!(v[1], 2.0 * ONE);
        assert_eq!(v[2], 3.0 * ONE);
        assert_eq!(unvec(&v, 2), x);
    }

    #[test]
    fn hs_inner_is_vec_inner() {
        let x = array![[ONE, I], [ZERO, 2.0 * ONE]];
        let y = array![[2.0 * ONE, ZERO], [I, ONE]];
        let a = op_a(x.clone());
        let b = op_a(y.clone());
        let lhs = a.hs_inner(&b);
        let rhs: Complex64 = vec(&x)
            .iter()
            .zip(vec(&y).iter())
            .map(|(p, q)| p.conj() * q)
            .sum();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn tensor_identity_and_entries() {
        let i2a = Operator::identity(SpaceTag::a(2, 2));
        let i2b = Operator::identity(SpaceTag::b(2, 2));
        let t = i2a.tensor(&i2b).unwrap();
        assert_eq!(t.mat(), &Array2::<Complex64>::eye(4));

        // sigma3 (x) sigma1: entries [0,1] = 1 and [2,3] = -1.
        let t = op_a(pauli(3)).tensor(&op_b(pauli(1))).unwrap();
        assert_eq!(t.mat()[[0, 1]], ONE);
        assert_eq!(t.mat()[[2, 3]], -ONE);
    }

    #[test]
    fn partial_trace_of_product_factorizes() {
        let x = op_a(array![[ONE, I], [-I, 3.0 * ONE]]);
        let y = op_b(array![[2.0 * ONE, ONE], [ONE, ZERO]]);
        let z = x.tensor(&y).unwrap();
        let red = z.partial_trace_a().unwrap();
        let expected = y.scale(x.trace());
        assert!(red.sub(&expected).max_abs() < 1e-13);
        // traceless first factor kills the product
        let z = op_a(pauli(3)).tensor(&op_b(pauli(1))).unwrap();
        assert!(z.partial_trace_a().unwrap().max_abs() < 1e-14);
        // trace preservation
        let z = x.tensor(&y).unwrap();
        assert!((z.partial_trace_a().unwrap().trace() - z.trace()).norm() < 1e-13);
    }

    #[test]
    fn trace_norm_values() {
        assert!((op_a(pauli(1)).trace_norm() - 2.0).abs() < 1e-12);
        let ket01 = array![[ZERO, ONE], [ZERO, ZERO]];
        assert!((op_a(ket01).trace_norm() - 1.0).abs() < 1e-12);
        // density matrix
        let rho = array![
            [Complex64::new(0.25, 0.0), ZERO],
            [ZERO, Complex64::new(0.75, 0.0)]
        ];
        assert!((op_a(rho).trace_norm() - 1.0).abs() < 1e-12);
    }
}
