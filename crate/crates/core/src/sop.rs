//! Superoperators: linear maps between operator spaces, stored as dense
//! `d_out^2 x d_in^2` matrices in the column-stacking convention.

use ndarray::prelude::*;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm;
use crate::op::{dagger, kron, unvec, vec, CMat, Operator, ZERO};
use crate::space::{SpaceTag, Subsystem};

/// A linear map from operators on `domain` to operators on `codomain`.
#[derive(Clone, Debug)]
pub struct SuperOperator {
    domain: SpaceTag,
    codomain: SpaceTag,
    mat: CMat,
}

impl SuperOperator {
    pub fn new(domain: SpaceTag, codomain: SpaceTag, mat: CMat) -> Result<Self> {
        let (dn, dm) = (codomain.dim() * codomain.dim(), domain.dim() * domain.dim());
        if mat.nrows() != dn || mat.ncols() != dm {
            return Err(Error::DimensionMismatch {
                context: "SuperOperator::new",
                expected: dn,
                got: mat.nrows(),
            });
        }
        Ok(SuperOperator { domain, codomain, mat })
    }

    pub fn identity(space: SpaceTag) -> Self {
        let d2 = space.dim() * space.dim();
        SuperOperator { domain: space, codomain: space, mat: Array2::eye(d2) }
    }

    pub fn zeros(domain: SpaceTag, codomain: SpaceTag) -> Self {
        let (dn, dm) = (codomain.dim() * codomain.dim(), domain.dim() * domain.dim());
        SuperOperator { domain, codomain, mat: Array2::zeros((dn, dm)) }
    }

    pub fn domain(&self) -> SpaceTag {
        self.domain
    }

    pub fn codomain(&self) -> SpaceTag {
        self.codomain
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Superoperator of `X -> A X B` on the common space of `a` and `b`.
    pub fn sandwich(a: &Operator, b: &Operator) -> Self {
        assert_eq!(a.space(), b.space(), "sandwich: space mismatch");
        let bt = b.mat().t().to_owned();
        SuperOperator {
            domain: a.space(),
            codomain: a.space(),
            mat: kron(&bt, a.mat()),
        }
    }

    /// `X -> -i [H, X]` for a Hamiltonian on the given space.
    pub fn hamiltonian_commutator(h: &Operator) -> Self {
        let left = SuperOperator::sandwich(h, &Operator::identity(h.space()));
        let right = SuperOperator::sandwich(&Operator::identity(h.space()), h);
        left.sub(&right).scale(Complex64::new(0.0, -1.0))
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        if x.space() != self.domain {
            return Err(Error::SpaceMismatch { context: "SuperOperator::apply" });
        }
        let v = self.mat.dot(&vec(x.mat()));
        Operator::new(self.codomain, unvec(&v, self.codomain.dim()))
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &SuperOperator) -> Self {
        assert_eq!(
            self.domain, other.codomain,
            "compose: domain/codomain mismatch"
        );
        SuperOperator {
            domain: other.domain,
            codomain: self.codomain,
            mat: self.mat.dot(&other.mat),
        }
    }

    pub fn add(&self, other: &SuperOperator) -> Self {
        assert_eq!(self.domain, other.domain, "superop add: domain mismatch");
        assert_eq!(self.codomain, other.codomain, "superop add: codomain mismatch");
        SuperOperator {
            domain: self.domain,
            codomain: self.codomain,
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &SuperOperator) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SuperOperator {
            domain: self.domain,
            codomain: self.codomain,
            mat: self.mat.mapv(|z| z * c),
        }
    }

    /// Hilbert-Schmidt adjoint; the conjugate transpose in this convention.
    pub fn adjoint(&self) -> Self {
        SuperOperator {
            domain: self.codomain,
            codomain: self.domain,
            mat: dagger(&self.mat),
        }
    }

    /// Matrix exponential `exp(s * self)` for square superoperators.
    pub fn expm(&self, s: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SpaceMismatch { context: "expm of non-square superoperator" });
        }
        Ok(SuperOperator {
            domain: self.domain,
            codomain: self.codomain,
            mat: expm::expm_scaled(&self.mat, s),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `sup_X ||T(X)||_inf`-free largest-entry distance between two maps.
    pub fn distance_max(&self, other: &SuperOperator) -> f64 {
        self.sub(other).max_abs()
    }

    /// `Tr[T(X)] = 0` for all X, checked entrywise on the matrix.
    pub fn is_trace_annihilating(&self, tol: f64) -> bool {
        // rows belonging to diagonal output entries must sum to zero per column
        let d = self.codomain.dim();
        let d2 = self.domain.dim() * self.domain.dim();
        for c in 0..d2 {
            let mut acc = ZERO;
            for i in 0..d {
                acc += self.mat[[i + d * i, c]];
            }
            if acc.norm() > tol {
                return false;
            }
        }
        true
    }

    /// `T(X^+) = T(X)^+` for all X.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        let (dn, dm) = (self.codomain.dim(), self.domain.dim());
        for i in 0..dn {
            for j in 0..dn {
                for k in 0..dm {
                    for l in 0..dm {
                        let lhs = self.mat[[i + dn * j, k + dm * l]];
                        let rhs = self.mat[[j + dn * i, l + dm * k]].conj();
                        if (lhs - rhs).norm() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Tensor product of a superoperator on A with one on B, acting on
    /// operators on AB (A indices outer, B inner).
    pub fn kron_ab(ta: &SuperOperator, tb: &SuperOperator) -> Result<SuperOperator> {
        if ta.domain.which != Subsystem::A
            || tb.domain.which != Subsystem::B
            || !ta.is_square()
            || !tb.is_square()
            || !ta.domain.same_partition(&tb.domain)
        {
            return Err(Error::SpaceMismatch { context: "kron_ab" });
        }
        let (da, db) = (ta.domain.dim_a, tb.domain.dim_b);
        let d = da * db;
        let mut out = Array2::zeros((d * d, d * d));
        for a in 0..da {
            for ap in 0..da {
                for c in 0..da {
                    for cp in 0..da {
                        let x = ta.mat[[a + da * ap, c + da * cp]];
                        if x == ZERO {
                            continue;
                        }
                        for b in 0..db {
                            for bp in 0..db {
                                let r = (a * db + b) + d * (ap * db + bp);
                                for e in 0..db {
                                    for ep in 0..db {
                                        let y = tb.mat[[b + db * bp, e + db * ep]];
                                        if y != ZERO {
                                            out[[r, (c * db + e) + d * (cp * db + ep)]] = x * y;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(SuperOperator {
            domain: ta.domain.retag(Subsystem::AB),
            codomain: ta.domain.retag(Subsystem::AB),
            mat: out,
        })
    }

    /// The partial trace over A as a superoperator from AB to B.
    pub fn trace_out_a(space: SpaceTag) -> SuperOperator {
        assert_eq!(space.which, Subsystem::AB, "trace_out_a expects an AB tag");
        let (da, db) = (space.dim_a, space.dim_b);
        let d = da * db;
        let mut mat = Array2::zeros((db * db, d * d));
        for b in 0..db {
            for bp in 0..db {
                for a in 0..da {
                    mat[[b + db * bp, (a * db + b) + d * (a * db + bp)]] = Complex64::new(1.0, 0.0);
                }
            }
        }
        SuperOperator { domain: space, codomain: space.retag(Subsystem::B), mat }
    }

    /// The embedding `X -> pi_A (x) X` as a superoperator from B to AB.
    pub fn embed_with(pi_a: &Operator) -> SuperOperator {
        assert_eq!(pi_a.space().which, Subsystem::A, "embed_with expects pi on A");
        let (da, db) = (pi_a.space().dim_a, pi_a.space().dim_b);
        let d = da * db;
        let mut mat = Array2::zeros((d * d, db * db));
        for a in 0..da {
            for ap in 0..da {
                let p = pi_a.mat()[[a, ap]];
                if p == ZERO {
                    continue;
                }
                for b in 0..db {
                    for bp in 0..db {
                        mat[[(a * db + b) + d * (ap * db + bp), b + db * bp]] = p;
                    }
                }
            }
        }
        SuperOperator { domain: pi_a.space().retag(Subsystem::B), codomain: pi_a.space().retag(Subsystem::AB), mat }
    }

    /// Rank-one superoperator `|Y><X| : Z -> <X, Z> Y`.
    pub fn ket_bra(y: &Operator, x: &Operator) -> SuperOperator {
        let vy = vec(y.mat());
        let vx = vec(x.mat());
        let mut mat = Array2::zeros((vy.len(), vx.len()));
        for i in 0..vy.len() {
            for j in 0..vx.len() {
                mat[[i, j]] = vy[i] * vx[j].conj();
            }
        }
        SuperOperator { domain: x.space(), codomain: y.space(), mat }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{pauli, I, ONE};

    fn op(space: SpaceTag, m: CMat) -> Operator {
        Operator::new(space, m).unwrap()
    }

    #[test]
    fn sandwich_rule_matches_direct_product() {
        let sp = SpaceTag::a(2, 1);
        let a = op(sp, array![[ONE, I], [ZERO, 2.0 * ONE]]);
        let b = op(sp, array![[ONE, ZERO], [3.0 * ONE, -I]]);
        let x = op(sp, pauli(2));
        let t = SuperOperator::sandwich(&a, &b);
        let direct = a.matmul(&x).matmul(&b);
        let via = t.apply(&x).unwrap();
        assert!(via.sub(&direct).max_abs() < 1e-14);
    }

    #[test]
    fn pauli_conjugation_flips_sign() {
        // sigma1 sigma3 sigma1 = -sigma3
        let sp = SpaceTag::a(2, 1);
        let s1 = op(sp, pauli(1));
        let t = SuperOperator::sandwich(&s1, &s1);
        let out = t.apply(&op(sp, pauli(3))).unwrap();
        assert!(out.add(&op(sp, pauli(3))).max_abs() < 1e-14);
    }

    #[test]
    fn commutator_annihilates_hamiltonian() {
        let sp = SpaceTag::a(2, 1);
        let h = op(sp, pauli(2));
        let k = SuperOperator::hamiltonian_commutator(&h);
        assert!(k.apply(&h).unwrap().max_abs() < 1e-14);
        assert!(k.is_trace_annihilating(1e-12));
        assert!(k.is_hermiticity_preserving(1e-12));
    }

    #[test]
    fn kron_ab_matches_tensor_action() {
        // (T_A (x) id)(x (x) y) = T_A(x) (x) y with T_A a sandwich
        let sa = SpaceTag::a(2, 2);
        let sb = SpaceTag::b(2, 2);
        let m = op(sa, array![[ONE, 2.0 * I], [ZERO, -ONE]]);
        let ta = SuperOperator::sandwich(&m, &m.dagger());
        let tb = SuperOperator::identity(sb);
        let t = SuperOperator::kron_ab(&ta, &tb).unwrap();
        let x = op(sa, pauli(3));
        let y = op(sb, pauli(1));
        let z = x.tensor(&y).unwrap();
        let lhs = t.apply(&z).unwrap();
        let rhs = ta.apply(&x).unwrap().tensor(&y).unwrap();
        assert!(lhs.sub(&rhs).max_abs() < 1e-13);
    }

    #[test]
    fn trace_out_and_embed_compose_to_projection() {
        let sab = SpaceTag::ab(2, 2);
        let tr_a = SuperOperator::trace_out_a(sab);
        let pi = op(SpaceTag::a(2, 2), array![[0.25 * ONE, ZERO], [ZERO, 0.75 * ONE]]);
        let v = SuperOperator::embed_with(&pi);
        let p = v.compose(&tr_a);
        // P(pi (x) R) = pi (x) R
        let r = op(SpaceTag::b(2, 2), array![[0.5 * ONE, I], [-I, 0.5 * ONE]]);
        let z = pi.tensor(&r).unwrap();
        assert!(p.apply(&z).unwrap().sub(&z).max_abs() < 1e-13);
        // P^2 = P
        assert!(p.compose(&p).distance_max(&p) < 1e-13);
    }

    #[test]
    fn ket_bra_action() {
        let sp = SpaceTag::a(2, 1);
        let y = op(sp, pauli(1));
        let x = op(sp, pauli(3));
        let t = SuperOperator::ket_bra(&y, &x);
        let z = op(sp, array![[2.0 * ONE, ZERO], [ZERO, ONE]]);
        // <sigma3, z> = 2 - 1 = 1
        let out = t.apply(&z).unwrap();
        assert!(out.sub(&y).max_abs() < 1e-14);
    }
}
