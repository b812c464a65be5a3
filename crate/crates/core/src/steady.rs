//! Stationary expansion of the steady state in inverse coupling strength:
//! the range/kernel splitting of the coherent generator, the unique
//! decomposition `X = K_P V + D_P W`, the order-by-order hierarchy, and the
//! exact null-space steady state used as the oracle.

use ndarray::prelude::*;
use ndarray_linalg::{Inverse, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{analyze_spectrum, default_cluster_tol};
use crate::op::{op_norm, unvec, vec, CMat, CVec, Operator, ONE};
use crate::sop::SuperOperator;
use crate::zeno::{build_composite, CompositeModel, ZenoObjects};

/// Relative singular-value threshold for rank decisions on `K_P`.
const RANK_TOL: f64 = 1e-10;
/// Per-order residual tolerance for the hierarchy.
pub const HIERARCHY_RESIDUAL_TOL: f64 = 1e-8;

/// Orthonormal bases for `ran(K_P)` and `ker(K_P) /\ traceless`, plus the
/// factorized decomposition map `(V, W) -> K_P V + D_P W`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    pub v_basis: Vec<Operator>,
    pub w_basis: Vec<Operator>,
    /// Inverse of the coordinate matrix of `(V, W) -> K_P V + D_P W` on the
    /// traceless subspace.
    solver_inv: CMat,
    /// Coordinate matrix itself, for residual checks.
    solver: CMat,
    /// Pseudo-inverse data of `K_P` for solving `K_P V = X` within the range.
    kp_pinv: CMat,
    kp_mat: CMat,
    /// Trace-norm bound constants for the inverse blocks (diagnostics).
    pub c_v: f64,
    pub c_w: f64,
}

fn hs_coord(basis: &[Operator], x: &Operator) -> CVec {
    Array1::from_iter(basis.iter().map(|b| b.hs_inner(x)))
}

fn from_coords(basis_v: &[Operator], basis_w: &[Operator], c: &CVec) -> (Operator, Operator) {
    let space = if let Some(b) = basis_v.first() {
        b.space()
    } else {
        basis_w.first().expect("empty bases").space()
    };
    let mut v = Operator::zeros(space);
    for (i, b) in basis_v.iter().enumerate() {
        v = v.add(&b.scale(c[i]));
    }
    let mut w = Operator::zeros(space);
    for (j, b) in basis_w.iter().enumerate() {
        w = w.add(&b.scale(c[basis_v.len() + j]));
    }
    (v, w)
}

/// Build the splitting from the coherent and dissipative projected
/// generators.  Fails when `dim V + dim W + 1 != d_B^2` or when the
/// decomposition map is singular (which signals a non-ergodic averaged
/// dissipator).
pub fn build_subspaces(k_p: &SuperOperator, d_p: &SuperOperator) -> Result<SubspaceBasis> {
    let space = k_p.domain();
    let d = space.dim();
    let n = d * d;
    let (u, sv, vt) = k_p.mat().svd(true, true)?;
    let u = u.expect("svd vectors");
    let vt = vt.expect("svd vectors");
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thresh = RANK_TOL * smax.max(1e-300);
    let rank = sv.iter().filter(|&&s| s > thresh).count();

    let mut v_basis = Vec::with_capacity(rank);
    for k in 0..rank {
        v_basis.push(Operator::new(space, unvec(&u.column(k).to_owned(), d))?);
    }

    // kernel basis from the trailing right-singular vectors, then project out
    // the identity direction and re-orthonormalize
    let e_id = vec(&Array2::eye(d)).mapv(|z| z / Complex64::new((d as f64).sqrt(), 0.0));
    let mut w_basis: Vec<Operator> = Vec::new();
    let mut kept: Vec<CVec> = Vec::new();
    for k in rank..n {
        let mut cand: CVec = vt.row(k).mapv(|z| z.conj());
        let overlap: Complex64 = e_id.iter().zip(cand.iter()).map(|(a, b)| a.conj() * b).sum();
        cand = cand - e_id.mapv(|z| z * overlap);
        for prev in &kept {
            let ov: Complex64 = prev.iter().zip(cand.iter()).map(|(a, b)| a.conj() * b).sum();
            cand = cand - prev.mapv(|z| z * ov);
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cand.mapv_inplace(|z| z / Complex64::new(norm, 0.0));
            kept.push(cand.clone());
            w_basis.push(Operator::new(space, unvec(&cand, d))?);
        }
    }

    if v_basis.len() + w_basis.len() + 1 != n {
        return Err(Error::InvariantViolation(format!(
            "subspace dimensions {} + {} + 1 != {}",
            v_basis.len(),
            w_basis.len(),
            n
        )));
    }

    // coordinate matrix of (V, W) -> K_P V + D_P W in the traceless basis
    let full: Vec<Operator> = v_basis.iter().chain(w_basis.iter()).cloned().collect();
    let m = full.len();
    let mut solver: CMat = Array2::zeros((m, m));
    for (col, b) in v_basis.iter().enumerate() {
        let img = k_p.apply(b)?;
        let coords = hs_coord(&full, &img);
        for row in 0..m {
            solver[[row, col]] = coords[row];
        }
    }
    for (j, b) in w_basis.iter().enumerate() {
        let img = d_p.apply(b)?;
        let coords = hs_coord(&full, &img);
        for row in 0..m {
            solver[[row, v_basis.len() + j]] = coords[row];
        }
    }
    let solver_inv = solver.inv().map_err(|_| Error::NotErgodic {
        what: "averaged projected dissipator",
        detail: "decomposition map K_P V + D_P W is singular".into(),
    })?;

    // residual sanity on basis vectors
    let id_err = {
        let prod = solver_inv.dot(&solver);
        let eye: CMat = Array2::eye(m);
        (&prod - &eye).iter().map(|z| z.norm()).fold(0.0, f64::max)
    };
    if id_err > 1e-10 * op_norm(&solver_inv).max(1.0) {
        return Err(Error::InvariantViolation(format!(
            "decomposition solver residual {id_err:.3e}"
        )));
    }

    // pseudo-inverse of K_P for range solves
    let mut kp_pinv: CMat = Array2::zeros((n, n));
    for k in 0..rank {
        let uk = u.column(k);
        let vk = vt.row(k).mapv(|z| z.conj());
        let inv_s = Complex64::new(1.0 / sv[k], 0.0);
        for i in 0..n {
            for j in 0..n {
                kp_pinv[[i, j]] += vk[i] * inv_s * uk[j].conj();
            }
        }
    }

    // trace-norm bound constants from the inverse blocks, HS -> trace norm
    // conversion via the dimension factor sqrt(d^2)
    let r = v_basis.len();
    let dim_factor = d as f64;
    let c_v = if r > 0 {
        op_norm(&solver_inv.slice(ndarray::s![0..r, ..]).to_owned()) * dim_factor
    } else {
        0.0
    };
    let c_w = if m > r {
        op_norm(&solver_inv.slice(ndarray::s![r..m, ..]).to_owned()) * dim_factor
    } else {
        0.0
    };

    Ok(SubspaceBasis {
        v_basis,
        w_basis,
        solver_inv,
        solver,
        kp_pinv,
        kp_mat: k_p.mat().clone(),
        c_v,
        c_w,
    })
}

impl SubspaceBasis {
    /// Unique `(V, W)` with `x = K_P V + D_P W`, `V` in the range of `K_P`
    /// and `W` in the traceless kernel.
    pub fn decompose(&self, x: &Operator) -> Result<(Operator, Operator)> {
        let scale = x.max_abs().max(1.0);
        if x.trace().norm() > 1e-10 * scale {
            return Err(Error::InvalidInput(format!(
                "decompose requires a traceless operator (trace {:.3e})",
                x.trace().norm()
            )));
        }
        let full: Vec<Operator> = self.v_basis.iter().chain(self.w_basis.iter()).cloned().collect();
        let coords = hs_coord(&full, x);
        let c = self.solver_inv.dot(&coords);
        let back = self.solver.dot(&c);
        let resid = (&back - &coords).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if resid > 1e-9 * scale {
            return Err(Error::InvariantViolation(format!(
                "decomposition solve residual {resid:.3e}"
            )));
        }
        Ok(from_coords(&self.v_basis, &self.w_basis, &c))
    }

    /// Solve `K_P V = x` for `V` in the range of `K_P`; errors when `x` has
    /// a component outside the range.
    pub fn solve_in_range(&self, x: &Operator) -> Result<Operator> {
        let d = x.dim();
        let v = unvec(&self.kp_pinv.dot(&vec(x.mat())), d);
        let v = Operator::new(x.space(), v)?;
        let resid = unvec(&self.kp_mat.dot(&vec(v.mat())), d);
        let err = (&resid - x.mat()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err > 1e-8 * x.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "right-hand side is not in ran(K_P) (residual {err:.3e})"
            )));
        }
        Ok(v)
    }
}

/// Decompose a traceless operator as `K_P V + D_P W`.
pub fn decompose(x: &Operator, basis: &SubspaceBasis) -> Result<(Operator, Operator)> {
    basis.decompose(x)
}

/// The solved hierarchy: corrections `n_k` on the full space with
/// per-order residuals, and the data to assemble truncated steady states.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub r_bar: Operator,
    pub pi_a: Operator,
    pub n_bar: Vec<Operator>,
    pub m_tilde: Vec<Operator>,
    /// `V_0 .. V_{K+1}` (range components fixed by solvability).
    pub v_terms: Vec<Operator>,
    /// `W_0 .. W_K` (kernel components fixed one order later).
    pub w_terms: Vec<Operator>,
    /// `||D n_k + K n_{k-1}||_1` per order.
    pub per_order_residuals: Vec<f64>,
}

impl ExpansionResult {
    /// `pi_A (x) R + sum_{k<=K} g^{-(k+1)} n_k`; unit trace by construction,
    /// positivity holds only asymptotically and is not enforced.
    pub fn truncated_state(&self, gamma: f64, order: usize) -> Operator {
        let mut state = self.pi_a.tensor(&self.r_bar).expect("truncated_state tensor");
        for (k, n) in self.n_bar.iter().enumerate().take(order + 1) {
            let w = Complex64::new(gamma.powi(-(k as i32 + 1)), 0.0);
            state = state.add(&n.scale(w));
        }
        state
    }

    pub fn max_order(&self) -> usize {
        self.n_bar.len().saturating_sub(1)
    }
}

/// Solve the stationary hierarchy to the given order.
///
/// `m_0 = -S K (pi (x) R) + pi (x) V_0` with `K_P V_0 = -D_P R`; for each
/// `k`: `F_k = Tr_A[K S K m_k]` splits as `D_P W_k + K_P V_{k+1}`, then
/// `n_k = m_k + pi (x) W_k` and `m_{k+1} = -S K n_k + pi (x) V_{k+1}`.
/// Every order is verified against `D n_k = -K n_{k-1}`.
pub fn solve_hierarchy(
    model: &CompositeModel,
    zeno: &ZenoObjects,
    d_p_sharp: &SuperOperator,
    order: usize,
) -> Result<ExpansionResult> {
    let sharp_summary = analyze_spectrum(d_p_sharp, default_cluster_tol(d_p_sharp))?;
    if !sharp_summary.is_ergodic {
        return Err(Error::NotErgodic {
            what: "averaged projected dissipator",
            detail: format!(
                "zero multiplicity {}, imaginary eigenvalues: {}",
                sharp_summary.zero_multiplicity, sharp_summary.has_imaginary_eigenvalues
            ),
        });
    }
    let r_bar = sharp_summary.steady_state.clone().expect("ergodic implies steady state");

    let basis = build_subspaces(&zeno.k_p, &zeno.d_p)?;
    let ops = build_composite(model);
    let proj = &zeno.projectors;
    let pi_a = zeno.pi_a.clone();

    let embed = |x: &Operator| -> Operator { pi_a.tensor(x).expect("pi (x) X") };
    let minus_sk = |x: &Operator| -> Operator {
        proj.s
            .apply(&ops.k.apply(x).expect("K apply"))
            .expect("S apply")
            .scale(-ONE)
    };

    // V_0 from K_P V_0 = -D_P R
    let rhs0 = zeno.d_p.apply(&r_bar)?.scale(-ONE);
    let v0 = basis.solve_in_range(&rhs0)?;

    let base = embed(&r_bar);
    let mut m_tilde = std::vec![minus_sk(&base).add(&embed(&v0))];
    let mut v_terms = std::vec![v0];
    let mut w_terms: Vec<Operator> = Vec::new();
    let mut n_bar: Vec<Operator> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();

    for k in 0..=order {
        let mk = m_tilde[k].clone();
        // F_k = Tr_A[K S K m_k] = D_P W_k + K_P V_{k+1}
        let f_k = ops
            .k
            .apply(&proj.s.apply(&ops.k.apply(&mk)?)?)?
            .partial_trace_a()?;
        let (v_next, w_k) = basis.decompose(&f_k)?;
        let n_k = mk.add(&embed(&w_k));

        let prev = if k == 0 { base.clone() } else { n_bar[k - 1].clone() };
        let residual = ops.d.apply(&n_k)?.add(&ops.k.apply(&prev)?).trace_norm();
        if residual > HIERARCHY_RESIDUAL_TOL {
            return Err(Error::ResidualFailure { order: k, residual });
        }
        residuals.push(residual);

        m_tilde.push(minus_sk(&n_k).add(&embed(&v_next)));
        v_terms.push(v_next);
        w_terms.push(w_k);
        n_bar.push(n_k);
    }

    Ok(ExpansionResult {
        r_bar,
        pi_a,
        n_bar,
        m_tilde,
        v_terms,
        w_terms,
        per_order_residuals: residuals,
    })
}

/// Null-space steady state of an ergodic generator: extract, Hermitize,
/// clip, normalize.
pub fn exact_steady_state(l_gamma: &SuperOperator) -> Result<Operator> {
    let summary = analyze_spectrum(l_gamma, default_cluster_tol(l_gamma))?;
    if !summary.is_ergodic {
        return Err(Error::NotErgodic {
            what: "generator",
            detail: format!(
                "zero multiplicity {}, imaginary eigenvalues: {}",
                summary.zero_multiplicity, summary.has_imaginary_eigenvalues
            ),
        });
    }
    Ok(summary.steady_state.expect("ergodic implies steady state"))
}

/// Outcome of the reduced-boundary-state test: the effective boundary
/// Hamiltonian, its commutator with the boundary steady state, and the
/// norm of the partial trace of the first correction.  The two vanish
/// together.
#[derive(Clone, Debug)]
pub struct BoundaryReducedReport {
    pub k_a: Operator,
    pub commutator_norm: f64,
    pub tr_b_n0_norm: f64,
    pub iff_agrees: bool,
}

/// `K_A = H_A + Tr_B[(1 (x) R) H_AB]`; `[pi_A, K_A] = 0` iff
/// `Tr_B n_0 = 0`.
pub fn boundary_reduced_state_test(
    model: &CompositeModel,
    expansion: &ExpansionResult,
    tol: f64,
) -> Result<BoundaryReducedReport> {
    let id_a = Operator::identity(model.h_a().space());
    let weighted = id_a.tensor(&expansion.r_bar)?.matmul(model.h_ab());
    let k_a = model.h_a().add(&weighted.partial_trace_b()?).hermitize();
    let commutator_norm = expansion.pi_a.commutator(&k_a).trace_norm();
    let tr_b_n0_norm = expansion.n_bar[0].partial_trace_b()?.trace_norm();
    let iff_agrees = (commutator_norm <= tol) == (tr_b_n0_norm <= tol);
    Ok(BoundaryReducedReport { k_a, commutator_norm, tr_b_n0_norm, iff_agrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davies::{bohr_decompose, default_bohr_tol, sharp_superop};
    use crate::models::{example_model, example_t};
    use crate::op::pauli;
    use crate::space::SpaceTag;

    fn setup(beta: f64, gamma: f64) -> (CompositeModel, ZenoObjects, SuperOperator) {
        let model = example_model(beta, gamma);
        let zeno = ZenoObjects::build(&model).unwrap();
        let bohr = bohr_decompose(&zeno.h_p, default_bohr_tol(&zeno.h_p)).unwrap();
        let sharp = sharp_superop(&zeno.d_p, &bohr);
        (model, zeno, sharp)
    }

    #[test]
    fn example_subspaces_split_as_expected() {
        let (_, zeno, _) = setup(1.0, 10.0);
        let basis = build_subspaces(&zeno.k_p, &zeno.d_p).unwrap();
        // ran K_P = span{sigma1, sigma3}, ker /\ traceless = span{sigma2}
        assert_eq!(basis.v_basis.len(), 2);
        assert_eq!(basis.w_basis.len(), 1);
        let sb = SpaceTag::b(2, 2);
        let s2 = Operator::new(sb, pauli(2)).unwrap();
        let overlap = basis.w_basis[0].hs_inner(&s2).norm();
        assert!((overlap - s2.hs_norm()).abs() < 1e-10, "W is not the sigma2 line");
        for v in &basis.v_basis {
            assert!(v.hs_inner(&s2).norm() < 1e-10);
        }
    }

    #[test]
    fn decompose_round_trip() {
        let (_, zeno, _) = setup(0.8, 10.0);
        let basis = build_subspaces(&zeno.k_p, &zeno.d_p).unwrap();
        let sb = SpaceTag::b(2, 2);
        // x = K_P(sigma1) is a pure range element
        let s1 = Operator::new(sb, pauli(1)).unwrap();
        let x = zeno.k_p.apply(&s1).unwrap();
        let (v, w) = basis.decompose(&x).unwrap();
        assert!(w.max_abs() < 1e-10);
        assert!(zeno.k_p.apply(&v).unwrap().sub(&x).max_abs() < 1e-10);
        // x = D_P(sigma2) pulls out the kernel component
        let s2 = Operator::new(sb, pauli(2)).unwrap();
        let x = zeno.d_p.apply(&s2).unwrap();
        let (v, w) = basis.decompose(&x).unwrap();
        assert!(v.max_abs() < 1e-10);
        assert!(w.sub(&s2).max_abs() < 1e-10);
    }

    #[test]
    fn hierarchy_first_orders_match_closed_form() {
        let beta = 1.0;
        let t = example_t(beta);
        let (model, zeno, sharp) = setup(beta, 10.0);
        let exp = solve_hierarchy(&model, &zeno, &sharp, 1).unwrap();
        // R = 1/2
        assert!(exp.r_bar.sub(&Operator::identity(exp.r_bar.space()).scale(0.5 * ONE)).max_abs() < 1e-10);
        // V_0 = -(t/2) sigma1, W_0 = 0, V_1 = (t/4) sigma3
        let sb = SpaceTag::b(2, 2);
        let s1 = Operator::new(sb, pauli(1)).unwrap();
        let s3 = Operator::new(sb, pauli(3)).unwrap();
        assert!(exp.v_terms[0].sub(&s1.scale(Complex64::new(-t / 2.0, 0.0))).max_abs() < 1e-10);
        assert!(exp.w_terms[0].max_abs() < 1e-10);
        assert!(exp.v_terms[1].sub(&s3.scale(Complex64::new(t / 4.0, 0.0))).max_abs() < 1e-10);
        for r in &exp.per_order_residuals {
            assert!(*r < 1e-10);
        }
        // n_k traceless and self-adjoint
        for n in &exp.n_bar {
            assert!(n.trace().norm() < 1e-9);
            assert!(n.hermiticity_deviation() < 1e-9);
        }
    }

    #[test]
    fn truncation_converges_to_exact_steady_state() {
        let (model, zeno, sharp) = setup(1.0, 100.0);
        let exp = solve_hierarchy(&model, &zeno, &sharp, 1).unwrap();
        let ops = build_composite(&model);
        let exact = exact_steady_state(&ops.l_gamma).unwrap();
        let err0 = exact.sub(&exp.truncated_state(100.0, 0)).trace_norm();
        let err1 = exact.sub(&exp.truncated_state(100.0, 1)).trace_norm();
        assert!(err1 < err0, "higher order must improve the truncation");
        assert!(err1 < 1e-4, "order-1 error at gamma=100 is {err1:.3e}");
    }
}
