//! Multistart gradient-free maximization used for superoperator trace-norm
//! witnesses and total-variation suprema.
//!
//! The trace-norm unit ball has rank-one extreme points, so the supremum of
//! `||T(X)||_1` is attained at `X = |psi><phi|` (or `psi = phi` in the
//! Hermitian-restricted case).  Each restart runs a monotone alternating
//! ascent: for the current candidate, the optimal dual unitary comes from an
//! SVD of `T(X)`, and for a fixed dual the optimal rank-one `X` comes from a
//! singular pair (or extremal eigenvector) of `T^+(U)`.  Reported values are
//! certified lower bounds; under repeated convergence to the same optimum
//! they are the norm to the requested tolerance.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::op::{dagger, trace_norm, unvec, vec, CMat, CVec, Operator};
use crate::sop::SuperOperator;

/// Settings for the multistart witnesses.
#[derive(Clone, Copy, Debug)]
pub struct OptimCfg {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimCfg {
    fn default() -> Self {
        OptimCfg { restarts: 64, max_iter: 200, tol: 1e-9, seed: 0 }
    }
}

impl OptimCfg {
    pub fn with_seed(seed: u64) -> Self {
        OptimCfg { seed, ..Default::default() }
    }

    pub fn fast(seed: u64) -> Self {
        OptimCfg { restarts: 24, max_iter: 120, tol: 1e-8, seed }
    }
}

pub(crate) fn random_unit_vector(rng: &mut impl Rng, d: usize) -> CVec {
    let mut v: CVec = Array1::zeros(d);
    loop {
        for z in v.iter_mut() {
            // Box-Muller pairs; isotropic complex Gaussian
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            *z = Complex64::new(r * (std::f64::consts::TAU * u2).cos(), r * (std::f64::consts::TAU * u2).sin());
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            v.mapv_inplace(|z| z / Complex64::new(n, 0.0));
            return v;
        }
    }
}

fn outer(psi: &CVec, phi: &CVec) -> CMat {
    let d = psi.len();
    let mut m = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            m[[i, j]] = psi[i] * phi[j].conj();
        }
    }
    m
}

/// Polar unitary U maximizing Re Tr[U^+ M]; from the SVD M = W S V^+ it is
/// U = W V^+ and the maximum is the trace norm of M.
fn polar_unitary(m: &CMat) -> (CMat, f64) {
    let (w, s, vt) = m.svd(true, true).expect("svd failed");
    let w = w.unwrap();
    let vt = vt.unwrap();
    (w.dot(&vt), s.sum())
}

fn top_singular_pair(m: &CMat) -> (CVec, CVec, f64) {
    let (w, s, vt) = m.svd(true, true).expect("svd failed");
    let w = w.unwrap();
    let vt = vt.unwrap();
    let psi = w.column(0).to_owned();
    let phi = vt.row(0).mapv(|z| z.conj());
    (psi, phi, s[0])
}

fn extremal_eigvec(h: &CMat, largest: bool) -> (CVec, f64) {
    let (vals, vecs) = h.eigh(UPLO::Lower).expect("eigh failed");
    let idx = if largest { vals.len() - 1 } else { 0 };
    (vecs.column(idx).to_owned(), vals[idx])
}

fn hermitian_part(m: &CMat) -> CMat {
    let half = Complex64::new(0.5, 0.0);
    m.mapv(|z| z * half) + dagger(m).mapv(|z| z * half)
}

/// One ascent run for the full 1->1 norm from a given rank-one start.
fn ascend_full(t: &SuperOperator, mut psi: CVec, mut phi: CVec, cfg: &OptimCfg) -> (f64, CVec, CVec) {
    let din = t.domain().dim();
    let tmat = t.mat();
    let tadj = dagger(tmat);
    let mut value = 0.0_f64;
    for _ in 0..cfg.max_iter {
        let x = outer(&psi, &phi);
        let tx = unvec(&tmat.dot(&vec(&x)), t.codomain().dim());
        let (u, val) = polar_unitary(&tx);
        let w = unvec(&tadj.dot(&vec(&u)), din);
        // Re Tr[(T^+ U)^+ psi phi^+] = <psi, W phi>; maximize by the top
        // singular pair of W.
        let (npsi, nphi, _) = top_singular_pair(&w);
        psi = npsi;
        phi = nphi;
        if (val - value).abs() <= cfg.tol * val.max(1.0) {
            value = val;
            break;
        }
        value = val;
    }
    (value, psi, phi)
}

/// One ascent run for the Hermitian-restricted norm from a pure start.
fn ascend_hermitian(t: &SuperOperator, mut psi: CVec, cfg: &OptimCfg) -> (f64, CVec) {
    let din = t.domain().dim();
    let tmat = t.mat();
    let tadj = dagger(tmat);
    let mut value = 0.0_f64;
    for _ in 0..cfg.max_iter {
        let x = outer(&psi, &psi);
        let tx = unvec(&tmat.dot(&vec(&x)), t.codomain().dim());
        let (u, val) = polar_unitary(&tx);
        let w = hermitian_part(&unvec(&tadj.dot(&vec(&u)), din));
        let (top, lam_max) = extremal_eigvec(&w, true);
        let (bot, lam_min) = extremal_eigvec(&w, false);
        // extreme points are +-|psi><psi|; the sign is absorbed by |.|_1
        psi = if lam_max.abs() >= lam_min.abs() { top } else { bot };
        if (val - value).abs() <= cfg.tol * val.max(1.0) {
            value = val;
            break;
        }
        value = val;
    }
    (value, psi)
}

/// Lower-bound witness for the superoperator trace norm `||T||_{1->1}`
/// (optionally restricted to Hermitian inputs).
pub fn norm_1to1_witness(t: &SuperOperator, hermitian_restricted: bool, cfg: &OptimCfg) -> f64 {
    norm_1to1_witness_with(t, hermitian_restricted, cfg).0
}

/// Same as [`norm_1to1_witness`], also returning the attaining input.
pub fn norm_1to1_witness_with(
    t: &SuperOperator,
    hermitian_restricted: bool,
    cfg: &OptimCfg,
) -> (f64, Operator) {
    let din = t.domain().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = 0.0;
    let mut best_x: Option<CMat> = None;
    for r in 0..cfg.restarts.max(1) {
        let (val, x) = if hermitian_restricted {
            let psi0 = if r == 0 {
                basis_vector(din, 0)
            } else {
                random_unit_vector(&mut rng, din)
            };
            let (v, psi) = ascend_hermitian(t, psi0, cfg);
            (v, outer(&psi, &psi))
        } else {
            let (psi0, phi0) = if r == 0 {
                (basis_vector(din, 0), basis_vector(din, din - 1))
            } else {
                (random_unit_vector(&mut rng, din), random_unit_vector(&mut rng, din))
            };
            let (v, psi, phi) = ascend_full(t, psi0, phi0, cfg);
            (v, outer(&psi, &phi))
        };
        if val > best {
            best = val;
            best_x = Some(x);
        }
    }
    let x = best_x.unwrap_or_else(|| Array2::eye(din));
    (best, Operator::new(t.domain(), x).expect("witness operator"))
}

fn basis_vector(d: usize, k: usize) -> CVec {
    let mut v: CVec = Array1::zeros(d);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// Supremum witness of the total-variation distance
/// `sup d_TV(M rho0, M rho1)` over pairs of density matrices for a
/// (typically CPTP) map `M`; the sup is attained on pure-state pairs.
pub fn tv_sup_witness(map: &SuperOperator, cfg: &OptimCfg) -> (f64, Operator, Operator) {
    tv_sup_witness_seeded(map, cfg, &[])
}

/// Like [`tv_sup_witness`], with extra deterministic warm starts.
pub fn tv_sup_witness_seeded(
    map: &SuperOperator,
    cfg: &OptimCfg,
    warm: &[(CVec, CVec)],
) -> (f64, Operator, Operator) {
    let d = map.domain().dim();
    let mmat = map.mat();
    let madj = dagger(mmat);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = -1.0;
    let mut best_pair = (basis_vector(d, 0), basis_vector(d, d - 1));

    let run = |psi0: CVec, phi0: CVec| -> (f64, CVec, CVec) {
        let mut psi = psi0;
        let mut phi = phi0;
        let mut value = -1.0_f64;
        for _ in 0..cfg.max_iter {
            let x = outer(&psi, &psi) - outer(&phi, &phi);
            let mx = unvec(&mmat.dot(&vec(&x)), map.codomain().dim());
            let (u, val) = polar_unitary(&mx);
            let val = 0.5 * val;
            let w = hermitian_part(&unvec(&madj.dot(&vec(&u)), d));
            let (top, _) = extremal_eigvec(&w, true);
            let (bot, _) = extremal_eigvec(&w, false);
            psi = top;
            phi = bot;
            if (val - value).abs() <= cfg.tol * val.max(1.0) {
                value = val;
                break;
            }
            value = val;
        }
        (value, psi, phi)
    };

    let mut starts: Vec<(CVec, CVec)> = Vec::new();
    starts.push((basis_vector(d, 0), basis_vector(d, d - 1)));
    starts.extend(warm.iter().cloned());
    while starts.len() < cfg.restarts.max(2) {
        starts.push((random_unit_vector(&mut rng, d), random_unit_vector(&mut rng, d)));
    }
    for (p0, q0) in starts {
        let (v, p, q) = run(p0, q0);
        if v > best {
            best = v;
            best_pair = (p, q);
        }
    }
    let rho0 = Operator::new(map.domain(), outer(&best_pair.0, &best_pair.0)).unwrap();
    let rho1 = Operator::new(map.domain(), outer(&best_pair.1, &best_pair.1)).unwrap();
    (best, rho0, rho1)
}

/// `d_TV` between two states after applying `map`.
pub fn tv_after(map: &SuperOperator, rho0: &Operator, rho1: &Operator) -> f64 {
    let a = map.apply(rho0).expect("tv_after");
    let b = map.apply(rho1).expect("tv_after");
    0.5 * trace_norm(&(a.mat() - b.mat()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{pauli, ONE};
    use crate::space::SpaceTag;

    #[test]
    fn cptp_map_has_unit_norm() {
        // unitary conjugation by exp(-i sigma2 / 3)
        let sp = SpaceTag::a(2, 1);
        let h = Operator::new(sp, pauli(2)).unwrap();
        let k = SuperOperator::hamiltonian_commutator(&h);
        let u = k.expm(0.33).unwrap();
        let cfg = OptimCfg { restarts: 8, ..OptimCfg::with_seed(7) };
        let w = norm_1to1_witness(&u, false, &cfg);
        assert!((w - 1.0).abs() < 1e-8, "witness {w}");
    }

    #[test]
    fn commutator_norm_bounded_by_twice_op_norm() {
        let sp = SpaceTag::a(2, 1);
        let h = Operator::new(sp, pauli(3).mapv(|z| z * 1.7 * ONE)).unwrap();
        let k = SuperOperator::hamiltonian_commutator(&h);
        let cfg = OptimCfg { restarts: 16, ..OptimCfg::with_seed(3) };
        let w = norm_1to1_witness(&k, false, &cfg);
        assert!(w <= 2.0 * 1.7 + 1e-9, "witness {w} exceeds 2||H||");
        // for sigma3 the bound is attained at |0><1|
        assert!(w > 2.0 * 1.7 - 1e-6, "witness {w} too small");
    }

    #[test]
    fn tv_sup_for_identity_map_is_one() {
        let sp = SpaceTag::a(2, 1);
        let id = SuperOperator::identity(sp);
        let cfg = OptimCfg { restarts: 8, ..OptimCfg::with_seed(11) };
        let (v, r0, r1) = tv_sup_witness(&id, &cfg);
        assert!((v - 1.0).abs() < 1e-9);
        assert!((tv_after(&id, &r0, &r1) - v).abs() < 1e-9);
    }
}
