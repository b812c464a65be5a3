//! Reduction of a boundary-driven composite model to effective dynamics on
//! the bulk factor: the steady-manifold projectors, the generalized inverse,
//! the projected Hamiltonian and dissipator, the explicit jump-operator form
//! of the projected dissipator, and the second-order corrector.

use ndarray::prelude::*;
use ndarray_linalg::{Eig, Eigh, Inverse, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{
    analyze_spectrum, build_dissipator, default_cluster_tol, gks_conditional_cp_test,
    LindbladSpec, SpectralSummary, GKS_TOL,
};
use crate::op::{dagger, op_norm, unvec, CMat, Operator, ONE, ZERO};
use crate::sop::SuperOperator;
use crate::space::{SpaceTag, Subsystem};

/// Minimum spectral gap accepted as "gapped".
pub const GAP_MIN: f64 = 1e-6;

/// Condition-number guard for the jump-extraction eigenbasis.
pub const EXTRACTION_COND_MAX: f64 = 1e8;

/// A boundary-driven model: bipartite Hamiltonian parts plus a dissipator
/// acting on the A factor only, with coupling strength `gamma`.
///
/// The constructor normalizes the Hamiltonian so that `Tr H = 0` and both
/// partial traces of the interaction part vanish, recording whether an
/// adjustment was made.
#[derive(Clone, Debug)]
pub struct CompositeModel {
    space: SpaceTag,
    h_a: Operator,
    h_ab: Operator,
    h_b: Operator,
    dissipator_a: LindbladSpec,
    gamma: f64,
    normalization_adjusted: bool,
    adjustment_magnitude: f64,
    d_a_summary: SpectralSummary,
}

impl CompositeModel {
    pub fn new(
        h_a: Operator,
        h_ab: Operator,
        h_b: Operator,
        dissipator_a: LindbladSpec,
        gamma: f64,
    ) -> Result<Self> {
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
        }
        if h_a.space().which != Subsystem::A
            || h_b.space().which != Subsystem::B
            || h_ab.space().which != Subsystem::AB
            || !h_a.space().same_partition(&h_b.space())
            || !h_a.space().same_partition(&h_ab.space())
        {
            return Err(Error::SpaceMismatch { context: "CompositeModel parts" });
        }
        if dissipator_a.space() != h_a.space() {
            return Err(Error::SpaceMismatch { context: "CompositeModel dissipator_a" });
        }
        for (name, part) in [("H_A", &h_a), ("H_AB", &h_ab), ("H_B", &h_b)] {
            let dev = part.hermiticity_deviation();
            if dev > 1e-10 * part.max_abs().max(1.0) {
                return Err(Error::NotSelfAdjoint {
                    what: match name {
                        "H_A" => "H_A",
                        "H_AB" => "H_AB",
                        _ => "H_B",
                    },
                    deviation: dev,
                });
            }
        }
        let space = h_ab.space();
        let (da, db) = (space.dim_a, space.dim_b);

        // assemble, center, re-split: H_A = Tr_B[H]/d_B, H_B = Tr_A[H]/d_A
        let id_a = Operator::identity(h_a.space());
        let id_b = Operator::identity(h_b.space());
        let mut h = h_a
            .tensor(&id_b)?
            .add(&h_ab)
            .add(&id_a.tensor(&h_b)?);
        let tr = h.trace();
        let dim = (da * db) as f64;
        h = h.sub(&Operator::identity(space).scale(tr / Complex64::new(dim, 0.0)));
        let new_h_a = h.partial_trace_b()?.scale(Complex64::new(1.0 / db as f64, 0.0));
        let new_h_b = h.partial_trace_a()?.scale(Complex64::new(1.0 / da as f64, 0.0));
        let new_h_ab = h
            .sub(&new_h_a.tensor(&id_b)?)
            .sub(&id_a.tensor(&new_h_b)?);
        let adjustment = new_h_a.sub(&h_a).max_abs().max(new_h_b.sub(&h_b).max_abs())
            .max(new_h_ab.sub(&h_ab).max_abs())
            .max(tr.norm() / dim);
        let adjusted = adjustment > 1e-12 * h.max_abs().max(1.0);

        // D_A must be ergodic and gapped
        let d_a = build_dissipator(&dissipator_a);
        let summary = analyze_spectrum(&d_a, default_cluster_tol(&d_a))?;
        if !summary.is_ergodic {
            return Err(Error::NotErgodic {
                what: "D_A",
                detail: format!(
                    "zero multiplicity {}, imaginary eigenvalues: {}",
                    summary.zero_multiplicity, summary.has_imaginary_eigenvalues
                ),
            });
        }
        if summary.gap <= GAP_MIN {
            return Err(Error::NotGapped { what: "D_A", gap: summary.gap });
        }

        Ok(CompositeModel {
            space,
            h_a: new_h_a,
            h_ab: new_h_ab,
            h_b: new_h_b,
            dissipator_a,
            gamma,
            normalization_adjusted: adjusted,
            adjustment_magnitude: adjustment,
            d_a_summary: summary,
        })
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }
    pub fn h_a(&self) -> &Operator {
        &self.h_a
    }
    pub fn h_ab(&self) -> &Operator {
        &self.h_ab
    }
    pub fn h_b(&self) -> &Operator {
        &self.h_b
    }
    pub fn dissipator_a(&self) -> &LindbladSpec {
        &self.dissipator_a
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn normalization_adjusted(&self) -> bool {
        self.normalization_adjusted
    }
    pub fn adjustment_magnitude(&self) -> f64 {
        self.adjustment_magnitude
    }
    pub fn d_a_summary(&self) -> &SpectralSummary {
        &self.d_a_summary
    }
    pub fn d_a_gap(&self) -> f64 {
        self.d_a_summary.gap
    }

    /// The centered Hamiltonian `H_A (x) 1 + H_AB + 1 (x) H_B`.
    pub fn hamiltonian(&self) -> Operator {
        let id_a = Operator::identity(self.h_a.space());
        let id_b = Operator::identity(self.h_b.space());
        self.h_a
            .tensor(&id_b)
            .unwrap()
            .add(&self.h_ab)
            .add(&id_a.tensor(&self.h_b).unwrap())
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
        }
        let mut m = self.clone();
        m.gamma = gamma;
        Ok(m)
    }
}

/// The full-space generators of a model.
#[derive(Clone, Debug)]
pub struct CompositeOps {
    /// `-i[H, .]` on AB.
    pub k: SuperOperator,
    /// `D_A (x) id_B` on AB.
    pub d: SuperOperator,
    /// `K + gamma D`.
    pub l_gamma: SuperOperator,
}

/// `K`, `D` and `L_gamma` for a model.
pub fn build_composite(model: &CompositeModel) -> CompositeOps {
    let h = model.hamiltonian();
    let k = SuperOperator::hamiltonian_commutator(&h);
    let d_a = build_dissipator(model.dissipator_a());
    let id_b = SuperOperator::identity(model.space().retag(Subsystem::B));
    let d = SuperOperator::kron_ab(&d_a, &id_b).expect("kron_ab in build_composite");
    let l_gamma = k.add(&d.scale(Complex64::new(model.gamma(), 0.0)));
    CompositeOps { k, d, l_gamma }
}

/// Steady-manifold projectors and the generalized inverse, on both the A
/// factor and the full space.
#[derive(Clone, Debug)]
pub struct Projectors {
    pub pi_a: Operator,
    pub p_a: SuperOperator,
    pub q_a: SuperOperator,
    pub s_a: SuperOperator,
    pub p: SuperOperator,
    pub q: SuperOperator,
    pub s: SuperOperator,
    /// Partial trace over A as a superoperator AB -> B.
    pub tr_a: SuperOperator,
    /// Embedding `X -> pi_A (x) X`, B -> AB.
    pub v: SuperOperator,
}

/// Build `pi_A`, `P`, `Q` and the generalized inverse `S` with
/// `S D = D S = Q` and `S P = P S = 0`.
///
/// `S` is computed in closed form as `(D - P)^{-1} Q` on the A factor:
/// `D - P` acts as `-id` on the range of `P` and as the invertible
/// restriction of `D` on the range of `Q`, so no quadrature is involved.
pub fn build_projectors(model: &CompositeModel) -> Result<Projectors> {
    let pi_a = model
        .d_a_summary()
        .steady_state
        .clone()
        .ok_or_else(|| Error::NotErgodic { what: "D_A", detail: "no steady state".into() })?;
    let space_a = model.h_a().space();
    let d_a = build_dissipator(model.dissipator_a());
    let p_a = SuperOperator::ket_bra(&pi_a, &Operator::identity(space_a));
    let q_a = SuperOperator::identity(space_a).sub(&p_a);
    let shifted = d_a.sub(&p_a);
    let inv = shifted.mat().inv()?;
    let s_a_mat = inv.dot(q_a.mat());
    let s_a = SuperOperator::new(space_a, space_a, s_a_mat)?;

    let id_b = SuperOperator::identity(model.space().retag(Subsystem::B));
    let p = SuperOperator::kron_ab(&p_a, &id_b)?;
    let q = SuperOperator::identity(model.space()).sub(&p);
    let s = SuperOperator::kron_ab(&s_a, &id_b)?;
    let tr_a = SuperOperator::trace_out_a(model.space());
    let v = SuperOperator::embed_with(&pi_a);
    Ok(Projectors { pi_a, p_a, q_a, s_a, p, q, s, tr_a, v })
}

/// Projected Hamiltonian `H_P` (traceless representative of
/// `Tr_A[(pi_A (x) 1) H]`) and the coherent generator `K_P = -i[H_P, .]`.
///
/// Centering the full Hamiltonian shifts `Tr_A[(pi_A (x) 1) H]` by a
/// multiple of the identity, so only the traceless part is well defined
/// under the model normalization; the commutator is unaffected.
pub fn projected_hamiltonian(model: &CompositeModel, proj: &Projectors) -> Result<(Operator, SuperOperator)> {
    let h = model.hamiltonian();
    let id_b = Operator::identity(model.h_b().space());
    let weighted = proj.pi_a.tensor(&id_b)?.matmul(&h);
    let raw = weighted.partial_trace_a()?;
    let dev = raw.hermiticity_deviation();
    if dev > 1e-10 * raw.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { what: "H_P", deviation: dev });
    }
    let sym = raw.hermitize();
    let db = model.space().dim_b as f64;
    let h_p = sym.sub(&Operator::identity(sym.space()).scale(sym.trace() / Complex64::new(db, 0.0)));
    let k_p = SuperOperator::hamiltonian_commutator(&h_p);
    Ok((h_p, k_p))
}

/// Projected dissipator `D_P = -Tr_A K S K V` as a superoperator on B.
pub fn projected_dissipator(model: &CompositeModel, proj: &Projectors) -> Result<SuperOperator> {
    let h = model.hamiltonian();
    let k = SuperOperator::hamiltonian_commutator(&h);
    let d_p = proj
        .tr_a
        .compose(&k)
        .compose(&proj.s)
        .compose(&k)
        .compose(&proj.v)
        .scale(-ONE);
    // the projected generator is always in Lindblad form; a failure here
    // signals numerical breakdown, not physics
    let rep = gks_conditional_cp_test(&d_p, 100.0 * GKS_TOL);
    if !rep.is_lindblad {
        return Err(Error::PsdViolation {
            what: "projected dissipator (conditional CP test)",
            min_eig: rep.min_projected_choi_eigenvalue,
        });
    }
    Ok(d_p)
}

/// Second-order corrector `B_P(R) = Tr_A[K (S K S K - S^2 K P K)(pi_A (x) R)]`.
pub fn second_order_corrector(model: &CompositeModel, proj: &Projectors) -> SuperOperator {
    let h = model.hamiltonian();
    let k = SuperOperator::hamiltonian_commutator(&h);
    let sksk = proj.s.compose(&k).compose(&proj.s).compose(&k);
    let sskpk = proj.s.compose(&proj.s).compose(&k).compose(&proj.p).compose(&k);
    proj.tr_a.compose(&k).compose(&sksk.sub(&sskpk)).compose(&proj.v)
}

/// Explicit Lindblad form of the projected dissipator.
#[derive(Clone, Debug)]
pub struct DpLindbladForm {
    /// Expansion coefficients `G_j` of `H = sum_j X_j (x) G_j`, `j = 0..n_A`.
    pub g_ops: Vec<Operator>,
    /// The matrix `M_{j,k} = -<S_A^+ X_k, X_j pi_A>`, indices `1..n_A`.
    pub m_mat: CMat,
    /// Hermitian part of `M`; positive semidefinite.
    pub a_mat: CMat,
    /// Skew part of `M` divided by `i`.
    pub b_mat: CMat,
    /// Jump operators `V_l` and Hamiltonian part `H_L` on B.
    pub spec: LindbladSpec,
    /// Largest deviation between the rebuilt dissipator and `D_P`.
    pub rebuild_error: f64,
    /// Most negative eigenvalue of `A` before clipping.
    pub a_min_eig: f64,
}

/// Extract jump operators for `D_P` via the eigenbasis of `D_A`:
/// the dual basis `X_j`, the coefficients `G_j`, the matrix `M`, its
/// positive-semidefinite Hermitian part `A`, and the jumps
/// `V_l = sqrt(mu_l) sum_k conj(v_k^(l)) G_k` with `H_L = sum B_jk G_k^+ G_j`.
///
/// Restricted to diagonalizable `D_A`: refuses when the eigenvector matrix
/// condition number exceeds [`EXTRACTION_COND_MAX`].
pub fn extract_dp_lindblad_form(
    model: &CompositeModel,
    proj: &Projectors,
    d_p: &SuperOperator,
) -> Result<DpLindbladForm> {
    let space_a = model.h_a().space();
    let space_b = model.h_b().space();
    let da = space_a.dim();
    let n_full = da * da;
    let n_a = n_full - 1;

    let d_a = build_dissipator(model.dissipator_a());
    let (evals, evecs) = d_a.mat().eig()?;

    // zero mode goes first, scaled to trace one (Y_0 = pi_A)
    let mut order: Vec<usize> = (0..n_full).collect();
    order.sort_by(|&i, &j| evals[i].norm().partial_cmp(&evals[j].norm()).unwrap());
    let zero_idx = order[0];
    if evals[zero_idx].norm() > default_cluster_tol(&d_a) * 10.0 {
        return Err(Error::ExtractionUnavailable {
            reason: format!("no zero eigenvalue found (closest {:.3e})", evals[zero_idx].norm()),
        });
    }

    let mut basis: CMat = Array2::zeros((n_full, n_full));
    let mut col = 0;
    {
        let y0 = unvec(&evecs.column(zero_idx).to_owned(), da);
        let tr = y0.diag().sum();
        if tr.norm() < 1e-12 {
            return Err(Error::ExtractionUnavailable { reason: "zero mode has zero trace".into() });
        }
        for (i, z) in evecs.column(zero_idx).iter().enumerate() {
            basis[[i, col]] = *z / tr;
        }
        col += 1;
    }
    for &k in order.iter().skip(1) {
        for i in 0..n_full {
            basis[[i, col]] = evecs[[i, k]];
        }
        col += 1;
    }
    debug_assert_eq!(col, n_full);

    let basis_inv = basis.inv().map_err(|_| Error::ExtractionUnavailable {
        reason: "eigenvector matrix is singular (defective D_A)".into(),
    })?;
    let cond = op_norm(&basis) * op_norm(&basis_inv);
    if cond > EXTRACTION_COND_MAX {
        return Err(Error::ExtractionUnavailable {
            reason: format!("eigenbasis condition number {cond:.3e} exceeds guard"),
        });
    }

    // dual basis: vec(X_j) is the conjugated j-th row of the inverse
    let mut x_ops: Vec<Operator> = Vec::with_capacity(n_full);
    for j in 0..n_full {
        let row: Array1<Complex64> = basis_inv.row(j).mapv(|z| z.conj());
        x_ops.push(Operator::new(space_a, unvec(&row, da))?);
    }
    // X_0 = identity is forced by the normalization Y_0 = pi_A
    let x0_dev = x_ops[0].sub(&Operator::identity(space_a)).max_abs();
    if x0_dev > 1e-6 {
        return Err(Error::ExtractionUnavailable {
            reason: format!("dual basis sanity check failed (X_0 deviates by {x0_dev:.3e})"),
        });
    }

    // G_j = Tr_A[(Y_j^+ (x) 1) H]
    let h = model.hamiltonian();
    let id_b = Operator::identity(space_b);
    let mut g_ops: Vec<Operator> = Vec::with_capacity(n_full);
    for j in 0..n_full {
        let yj = Operator::new(space_a, unvec(&basis.column(j).to_owned(), da))?;
        let g = yj.dagger().tensor(&id_b)?.matmul(&h).partial_trace_a()?;
        g_ops.push(g);
    }

    // M_{j,k} = -<S_A^+ X_k, X_j pi_A>, 1-based in the paper, 0-based here
    let s_a_adj = proj.s_a.adjoint();
    let mut m_mat: CMat = Array2::zeros((n_a, n_a));
    for k in 1..=n_a {
        let sx = s_a_adj.apply(&x_ops[k])?;
        for j in 1..=n_a {
            let xp = x_ops[j].matmul(&proj.pi_a);
            m_mat[[j - 1, k - 1]] = -sx.hs_inner(&xp);
        }
    }
    let half = Complex64::new(0.5, 0.0);
    let a_mat: CMat = m_mat.mapv(|z| z * half) + dagger(&m_mat).mapv(|z| z * half);
    let b_mat: CMat = (m_mat.mapv(|z| z * half) - dagger(&m_mat).mapv(|z| z * half))
        .mapv(|z| z / Complex64::new(0.0, 1.0));

    let (mu, vv) = a_mat.eigh(UPLO::Lower)?;
    let a_min_eig = mu.iter().cloned().fold(f64::INFINITY, f64::min);
    if a_min_eig < -1e-8 {
        return Err(Error::PsdViolation { what: "A matrix of the projected dissipator", min_eig: a_min_eig });
    }

    let mut jumps: Vec<Operator> = Vec::new();
    for (l, &mu_l) in mu.iter().enumerate() {
        let mu_l = if (-1e-9..0.0).contains(&mu_l) { 0.0 } else { mu_l };
        if mu_l <= 0.0 {
            continue;
        }
        let root = Complex64::new(mu_l.sqrt(), 0.0);
        let mut v_l = Operator::zeros(space_b);
        for k in 1..=n_a {
            let w = vv[[k - 1, l]].conj() * root;
            if w != ZERO {
                v_l = v_l.add(&g_ops[k].scale(w));
            }
        }
        if v_l.max_abs() > 1e-14 {
            jumps.push(v_l);
        }
    }

    let mut h_l = Operator::zeros(space_b);
    for j in 1..=n_a {
        for k in 1..=n_a {
            let b_jk = b_mat[[j - 1, k - 1]];
            if b_jk != ZERO {
                h_l = h_l.add(&g_ops[k].dagger().matmul(&g_ops[j]).scale(b_jk));
            }
        }
    }
    let h_l = h_l.hermitize();

    let spec = LindbladSpec::new(space_b, jumps, h_l)?;
    let rebuilt = build_dissipator(&spec);
    let rebuild_error = rebuilt.distance_max(d_p);

    Ok(DpLindbladForm { g_ops, m_mat, a_mat, b_mat, spec, rebuild_error, a_min_eig })
}

/// Everything the reduction produces for one model.
#[derive(Clone, Debug)]
pub struct ZenoObjects {
    pub pi_a: Operator,
    pub projectors: Projectors,
    pub h_p: Operator,
    pub k_p: SuperOperator,
    pub d_p: SuperOperator,
    pub b_p: SuperOperator,
    /// `K_P + gamma^{-1} D_P` at the model's gamma.
    pub l_p_gamma: SuperOperator,
    pub dp_lindblad: Option<DpLindbladForm>,
    /// Why extraction was skipped, when it was.
    pub extraction_note: Option<String>,
}

impl ZenoObjects {
    pub fn build(model: &CompositeModel) -> Result<Self> {
        let projectors = build_projectors(model)?;
        let (h_p, k_p) = projected_hamiltonian(model, &projectors)?;
        let d_p = projected_dissipator(model, &projectors)?;
        let b_p = second_order_corrector(model, &projectors);
        let l_p_gamma = k_p.add(&d_p.scale(Complex64::new(1.0 / model.gamma(), 0.0)));
        let (dp_lindblad, extraction_note) = match extract_dp_lindblad_form(model, &projectors, &d_p) {
            Ok(form) => (Some(form), None),
            Err(Error::ExtractionUnavailable { reason }) => (None, Some(reason)),
            Err(e) => return Err(e),
        };
        Ok(ZenoObjects {
            pi_a: projectors.pi_a.clone(),
            projectors,
            h_p,
            k_p,
            d_p,
            b_p,
            l_p_gamma,
            dp_lindblad,
            extraction_note,
        })
    }

    /// `K_P + gamma^{-1} D_P` at an arbitrary gamma.
    pub fn l_p_at(&self, gamma: f64) -> SuperOperator {
        self.k_p.add(&self.d_p.scale(Complex64::new(1.0 / gamma, 0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::example_model;
    use crate::op::pauli;

    #[test]
    fn projector_identities_hold() {
        let model = example_model(1.0, 10.0);
        let proj = build_projectors(&model).unwrap();
        let ops = build_composite(&model);
        assert!(proj.p.compose(&proj.p).distance_max(&proj.p) < 1e-10);
        assert!(proj.p.compose(&proj.q).max_abs() < 1e-10);
        assert!(proj.s.compose(&proj.p).max_abs() < 1e-10);
        assert!(proj.p.compose(&proj.s).max_abs() < 1e-10);
        let sd = proj.s.compose(&ops.d);
        let ds = ops.d.compose(&proj.s);
        assert!(sd.distance_max(&proj.q) < 1e-10);
        assert!(ds.distance_max(&proj.q) < 1e-10);
        // P = V Tr_A
        assert!(proj.v.compose(&proj.tr_a).distance_max(&proj.p) < 1e-12);
    }

    #[test]
    fn projected_hamiltonian_is_sigma2_for_example() {
        let model = example_model(1.0, 10.0);
        let proj = build_projectors(&model).unwrap();
        let (h_p, k_p) = projected_hamiltonian(&model, &proj).unwrap();
        let dev = (h_p.mat() - &pauli(2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12, "H_P deviates from sigma2 by {dev}");
        // Tr_A[K(pi (x) R)] = -i[H_P, R] for random-ish R
        let r = Operator::new(model.h_b().space(), array![[ONE, 0.3 * ONE + 0.2 * crate::op::I], [0.3 * ONE - 0.2 * crate::op::I, 0.5 * ONE]]).unwrap();
        let ops = build_composite(&model);
        let lhs = ops
            .k
            .apply(&proj.pi_a.tensor(&r).unwrap())
            .unwrap()
            .partial_trace_a()
            .unwrap();
        let rhs = k_p.apply(&r).unwrap();
        assert!(lhs.sub(&rhs).max_abs() < 1e-11);
    }

    #[test]
    fn dp_independent_of_h_b() {
        let m1 = example_model(0.7, 5.0);
        let m2 = {
            let h_b = Operator::zeros(m1.h_b().space());
            CompositeModel::new(m1.h_a().clone(), m1.h_ab().clone(), h_b, m1.dissipator_a().clone(), 5.0).unwrap()
        };
        let p1 = build_projectors(&m1).unwrap();
        let p2 = build_projectors(&m2).unwrap();
        let d1 = projected_dissipator(&m1, &p1).unwrap();
        let d2 = projected_dissipator(&m2, &p2).unwrap();
        assert!(d1.distance_max(&d2) < 1e-11);
    }

    #[test]
    fn no_interaction_means_no_projected_dissipation() {
        let m = example_model(1.0, 10.0);
        let zero_ab = Operator::zeros(m.h_ab().space());
        let m0 = CompositeModel::new(m.h_a().clone(), zero_ab, m.h_b().clone(), m.dissipator_a().clone(), 10.0).unwrap();
        let p = build_projectors(&m0).unwrap();
        let d_p = projected_dissipator(&m0, &p).unwrap();
        assert!(d_p.max_abs() < 1e-12);
        let b_p = second_order_corrector(&m0, &p);
        assert!(b_p.max_abs() < 1e-12);
    }
}
