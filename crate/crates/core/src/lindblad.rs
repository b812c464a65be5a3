//! Lindblad generators in canonical form, structure tests (trace
//! annihilation, Hermiticity preservation, conditional complete positivity)
//! and spectral analysis (ergodicity, gap, steady state).

use ndarray::prelude::*;
use ndarray_linalg::{Eig, Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::op::{kron, unvec, vec, CMat, Operator, ZERO};
use crate::sop::SuperOperator;
use crate::space::SpaceTag;

/// Tolerance used by the conditional-complete-positivity test.
pub const GKS_TOL: f64 = 1e-9;

/// Jump operators plus a self-adjoint Hamiltonian part defining a dissipator
/// `D(rho) = sum_j (2 L_j rho L_j^+ - L_j^+ L_j rho - rho L_j^+ L_j) - i[K_L, rho]`.
#[derive(Clone, Debug)]
pub struct LindbladSpec {
    space: SpaceTag,
    jumps: Vec<Operator>,
    hamiltonian_part: Operator,
}

impl LindbladSpec {
    pub fn new(space: SpaceTag, jumps: Vec<Operator>, hamiltonian_part: Operator) -> Result<Self> {
        for j in &jumps {
            if j.space() != space {
                return Err(Error::SpaceMismatch { context: "LindbladSpec jumps" });
            }
        }
        if hamiltonian_part.space() != space {
            return Err(Error::SpaceMismatch { context: "LindbladSpec hamiltonian_part" });
        }
        let dev = hamiltonian_part.hermiticity_deviation();
        if dev > 1e-12 * hamiltonian_part.max_abs().max(1.0) {
            return Err(Error::NotSelfAdjoint { what: "hamiltonian_part", deviation: dev });
        }
        Ok(LindbladSpec { space, jumps, hamiltonian_part })
    }

    /// Purely dissipative spec (no Hamiltonian part).
    pub fn from_jumps(space: SpaceTag, jumps: Vec<Operator>) -> Result<Self> {
        let h = Operator::zeros(space);
        LindbladSpec::new(space, jumps, h)
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn jumps(&self) -> &[Operator] {
        &self.jumps
    }

    pub fn hamiltonian_part(&self) -> &Operator {
        &self.hamiltonian_part
    }
}

/// Superoperator matrix of the canonical form; trace-annihilating and
/// Hermiticity-preserving by construction.
pub fn build_dissipator(spec: &LindbladSpec) -> SuperOperator {
    let space = spec.space();
    let id = Operator::identity(space);
    let mut acc = SuperOperator::zeros(space, space);
    for l in spec.jumps() {
        let ld = l.dagger();
        let ldl = ld.matmul(l);
        let hop = SuperOperator::sandwich(l, &ld).scale(Complex64::new(2.0, 0.0));
        let left = SuperOperator::sandwich(&ldl, &id);
        let right = SuperOperator::sandwich(&id, &ldl);
        acc = acc.add(&hop.sub(&left).sub(&right));
    }
    if spec.hamiltonian_part().max_abs() > 0.0 {
        acc = acc.add(&SuperOperator::hamiltonian_commutator(spec.hamiltonian_part()));
    }
    acc
}

/// Choi matrix `J(T) = sum_ij E_ij (x) T(E_ij)`.
pub fn choi_matrix(t: &SuperOperator) -> CMat {
    assert!(t.is_square(), "choi_matrix: square superoperator expected");
    let d = t.domain().dim();
    let mut j: CMat = Array2::zeros((d * d, d * d));
    for a in 0..d {
        for b in 0..d {
            let mut e: CMat = Array2::zeros((d, d));
            e[[a, b]] = Complex64::new(1.0, 0.0);
            let te = unvec(&t.mat().dot(&vec(&e)), d);
            j = j + kron(&e, &te);
        }
    }
    j
}

/// Result of the conditional-complete-positivity test.
#[derive(Clone, Debug)]
pub struct GksReport {
    pub is_hermiticity_preserving: bool,
    pub is_trace_annihilating: bool,
    pub min_projected_choi_eigenvalue: f64,
    pub is_lindblad: bool,
}

/// Necessary-and-sufficient test for a superoperator to be a Lindblad
/// generator: Hermiticity preservation, trace annihilation, and positive
/// semidefiniteness of the Choi matrix compressed to the complement of the
/// maximally entangled vector.
pub fn gks_conditional_cp_test(l: &SuperOperator, tol: f64) -> GksReport {
    let d = l.domain().dim();
    let j = choi_matrix(l);
    // P_perp = 1 - |Omega><Omega|, Omega = sum_i |ii>/sqrt(d)
    let mut omega: Array1<Complex64> = Array1::zeros(d * d);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        omega[i * d + i] = amp;
    }
    let mut p_perp: CMat = Array2::eye(d * d);
    for i in 0..d * d {
        for k in 0..d * d {
            p_perp[[i, k]] -= omega[i] * omega[k].conj();
        }
    }
    let projected = p_perp.dot(&j).dot(&p_perp);
    let herm = projected.mapv(|z| z * Complex64::new(0.5, 0.0))
        + projected.t().mapv(|z| z.conj() * Complex64::new(0.5, 0.0));
    let (vals, _) = herm.eigh(UPLO::Lower).expect("eigh failed in gks test");
    let min_eig = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = l.max_abs().max(1.0);
    let hp = l.is_hermiticity_preserving(tol * scale);
    let ta = l.is_trace_annihilating(tol * scale);
    GksReport {
        is_hermiticity_preserving: hp,
        is_trace_annihilating: ta,
        min_projected_choi_eigenvalue: min_eig,
        is_lindblad: hp && ta && min_eig >= -tol * scale,
    }
}

/// Complete positivity / trace preservation of a map.
#[derive(Clone, Debug)]
pub struct CptpReport {
    pub is_cp: bool,
    pub is_tp: bool,
    pub min_choi_eigenvalue: f64,
}

pub fn cptp_check(map: &SuperOperator) -> CptpReport {
    let j = choi_matrix(map);
    let herm = j.mapv(|z| z * Complex64::new(0.5, 0.0))
        + j.t().mapv(|z| z.conj() * Complex64::new(0.5, 0.0));
    let (vals, _) = herm.eigh(UPLO::Lower).expect("eigh failed in cptp check");
    let min_eig = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    // trace preservation: Tr[T(E_ab)] = delta_ab
    let dn = map.codomain().dim();
    let dm = map.domain().dim();
    let mut is_tp = true;
    for a in 0..dm {
        for b in 0..dm {
            let mut acc = ZERO;
            for i in 0..dn {
                acc += map.mat()[[i + dn * i, a + dm * b]];
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            if (acc - Complex64::new(expect, 0.0)).norm() > 1e-9 * map.max_abs().max(1.0) {
                is_tp = false;
            }
        }
    }
    CptpReport { is_cp: min_eig >= -GKS_TOL * map.max_abs().max(1.0), is_tp, min_choi_eigenvalue: min_eig }
}

/// Spectral structure of a generator.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<Complex64>,
    /// `a := -max{Re lambda : lambda outside the zero cluster}`.
    pub gap: f64,
    pub zero_multiplicity: usize,
    pub is_ergodic: bool,
    pub has_imaginary_eigenvalues: bool,
    pub steady_state: Option<Operator>,
    /// Most negative eigenvalue of the Hermitized steady-state candidate
    /// before clipping, when one was extracted.
    pub steady_state_min_eig: Option<f64>,
}

/// Default clustering tolerance, scaled by the magnitude of the generator.
pub fn default_cluster_tol(l: &SuperOperator) -> f64 {
    1e-8 * l.max_abs().max(1.0)
}

/// Dense eigendecomposition of a square superoperator with zero-cluster
/// detection, gap computation and steady-state extraction.
pub fn analyze_spectrum(l: &SuperOperator, tol: f64) -> Result<SpectralSummary> {
    if !l.is_square() {
        return Err(Error::SpaceMismatch { context: "analyze_spectrum" });
    }
    let d = l.domain().dim();
    let (evals, evecs) = l.mat().eig()?;
    let eigenvalues: Vec<Complex64> = evals.to_vec();

    let mut zero_idx: Vec<usize> = Vec::new();
    let mut has_imag = false;
    let mut max_re_nonzero = f64::NEG_INFINITY;
    for (k, ev) in eigenvalues.iter().enumerate() {
        if ev.re.abs() < tol && ev.im.abs() < tol {
            zero_idx.push(k);
        } else if ev.re.abs() < tol {
            has_imag = true;
        } else {
            max_re_nonzero = max_re_nonzero.max(ev.re);
        }
    }
    // purely imaginary eigenvalues are outside the zero cluster but have
    // vanishing real part; the gap is still governed by the decaying modes
    let gap = if max_re_nonzero.is_finite() { -max_re_nonzero } else { 0.0 };
    let zero_multiplicity = zero_idx.len();
    let mut is_ergodic = zero_multiplicity == 1 && !has_imag;

    let mut steady_state = None;
    let mut steady_min_eig = None;
    if is_ergodic {
        let k = zero_idx[0];
        let cand = unvec(&evecs.column(k).to_owned(), d);
        let cand = Operator::new(l.domain(), cand)?;
        let tr = cand.trace();
        if tr.norm() < 1e-12 * cand.max_abs().max(1e-300) {
            // zero-trace null vector: cannot normalize
            is_ergodic = false;
        } else {
            // dividing by the trace also removes the arbitrary phase of the
            // eigenvector; Hermitizing before that would cancel the state
            // for phases near +-i
            let normalized = cand.scale(Complex64::new(1.0, 0.0) / tr).hermitize();
            let (clipped, min_eig) = normalized.clip_negative_eigenvalues()?;
            steady_min_eig = Some(min_eig);
            let tr2 = clipped.trace();
            let state = clipped.scale(Complex64::new(1.0, 0.0) / tr2);
            steady_state = Some(state);
        }
    }
    Ok(SpectralSummary {
        eigenvalues,
        gap,
        zero_multiplicity,
        is_ergodic,
        has_imaginary_eigenvalues: has_imag,
        steady_state,
        steady_state_min_eig: steady_min_eig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{pauli, sigma_minus, ONE};

    fn sp() -> SpaceTag {
        SpaceTag::a(2, 1)
    }

    fn op(m: CMat) -> Operator {
        Operator::new(sp(), m).unwrap()
    }

    #[test]
    fn single_jump_dissipator_action() {
        // L = sigma_-: D(|1><1|) = -2|1><1| + 2|0><0|
        let spec = LindbladSpec::from_jumps(sp(), std::vec![op(sigma_minus())]).unwrap();
        let d = build_dissipator(&spec);
        let e11 = op(array![[ONE, ZERO], [ZERO, ZERO]]);
        let out = d.apply(&e11).unwrap();
        let expected = array![[-2.0 * ONE, ZERO], [ZERO, 2.0 * ONE]];
        assert!((out.mat() - &expected).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-13);
    }

    #[test]
    fn pure_commutator_annihilates_hamiltonian() {
        let h = op(pauli(1));
        let spec = LindbladSpec::new(sp(), std::vec![], h.clone()).unwrap();
        let d = build_dissipator(&spec);
        assert!(d.apply(&h).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn canonical_form_passes_gks() {
        let spec = LindbladSpec::new(
            sp(),
            std::vec![op(sigma_minus()), op(pauli(1).mapv(|z| z * 0.3 * ONE))],
            op(pauli(3)),
        )
        .unwrap();
        let d = build_dissipator(&spec);
        let rep = gks_conditional_cp_test(&d, GKS_TOL);
        assert!(rep.is_lindblad, "{rep:?}");
        // sign-flipped dissipative generator is not conditionally CP
        let rep = gks_conditional_cp_test(&d.scale(-ONE), GKS_TOL);
        assert!(!rep.is_lindblad);
        assert!(rep.min_projected_choi_eigenvalue < -1e-3);
    }

    #[test]
    fn spectrum_of_pure_commutator() {
        let h = op(pauli(3));
        let k = SuperOperator::hamiltonian_commutator(&h);
        let s = analyze_spectrum(&k, 1e-10).unwrap();
        assert_eq!(s.zero_multiplicity, 2);
        assert!(s.has_imaginary_eigenvalues);
        assert!(!s.is_ergodic);
    }

    #[test]
    fn cptp_of_exponential() {
        let spec = LindbladSpec::from_jumps(sp(), std::vec![op(sigma_minus())]).unwrap();
        let d = build_dissipator(&spec);
        let e = d.expm(0.7).unwrap();
        let rep = cptp_check(&e);
        assert!(rep.is_cp && rep.is_tp, "{rep:?}");
    }

    use crate::op::ZERO;
}
