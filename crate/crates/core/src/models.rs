//! Built-in model constructors: the two-qubit boundary-driven example used
//! throughout the test suite (parametric in the bath inverse temperature)
//! and random ergodic models for property tests.

use ndarray::prelude::*;
use num_complex::Complex64;
use rand::Rng;

use crate::lindblad::{analyze_spectrum, build_dissipator, default_cluster_tol, LindbladSpec};
use crate::op::{pauli, sigma_minus, sigma_plus, CMat, Operator};
use crate::space::SpaceTag;
use crate::zeno::CompositeModel;

/// The two-qubit model: `H_A = sigma_3`, `H_AB = sigma_- (x) sigma_+ +
/// sigma_+ (x) sigma_-`, `H_B = sigma_2`, and a thermal qubit dissipator on A
/// with jumps `c sigma_+`, `s sigma_-` where `c^2 = e^{-beta/2}/Z`,
/// `s^2 = e^{beta/2}/Z`.  Its steady structure is known in closed form,
/// which makes it the fixture for the verification suite.
pub fn example_model(beta: f64, gamma: f64) -> CompositeModel {
    let sa = SpaceTag::a(2, 2);
    let sb = SpaceTag::b(2, 2);
    let sab = SpaceTag::ab(2, 2);
    let z = (beta / 2.0).exp() + (-beta / 2.0).exp();
    let c = ((-beta / 2.0).exp() / z).sqrt();
    let s = ((beta / 2.0).exp() / z).sqrt();
    let jumps = std::vec![
        Operator::new(sa, sigma_plus().mapv(|v| v * Complex64::new(c, 0.0))).unwrap(),
        Operator::new(sa, sigma_minus().mapv(|v| v * Complex64::new(s, 0.0))).unwrap(),
    ];
    let dissipator_a = LindbladSpec::from_jumps(sa, jumps).unwrap();

    let h_a = Operator::new(sa, pauli(3)).unwrap();
    let sm = Operator::new(sa, sigma_minus()).unwrap();
    let sp = Operator::new(sa, sigma_plus()).unwrap();
    let smb = Operator::new(sb, sigma_minus()).unwrap();
    let spb = Operator::new(sb, sigma_plus()).unwrap();
    let h_ab = sm.tensor(&spb).unwrap().add(&sp.tensor(&smb).unwrap());
    let h_b = Operator::new(sb, pauli(2)).unwrap();
    debug_assert_eq!(h_ab.space(), sab);

    CompositeModel::new(h_a, h_ab, h_b, dissipator_a, gamma).expect("example model is valid")
}

/// `tanh(beta/2)`, the parameter the example's fixtures are expressed in.
pub fn example_t(beta: f64) -> f64 {
    (beta / 2.0).tanh()
}

/// A variant of the example with `H_B` proportional to `sigma_3`, for which
/// `pi_A (x) pi_A` is an exact steady state at every coupling.
pub fn example_model_hb_sigma3(beta: f64, gamma: f64) -> CompositeModel {
    let base = example_model(beta, gamma);
    let h_b = Operator::new(base.h_b().space(), pauli(3)).unwrap();
    CompositeModel::new(
        base.h_a().clone(),
        base.h_ab().clone(),
        h_b,
        base.dissipator_a().clone(),
        gamma,
    )
    .expect("sigma3 variant is valid")
}

fn random_complex_matrix(rng: &mut impl Rng, d: usize, scale: f64) -> CMat {
    let mut m: CMat = Array2::zeros((d, d));
    for z in m.iter_mut() {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt() * scale;
        *z = Complex64::new(r * (std::f64::consts::TAU * u2).cos(), r * (std::f64::consts::TAU * u2).sin());
    }
    m
}

fn random_hermitian(rng: &mut impl Rng, d: usize, scale: f64) -> CMat {
    let m = random_complex_matrix(rng, d, scale);
    let md = m.t().mapv(|z| z.conj());
    (m + md).mapv(|z| z * Complex64::new(0.5, 0.0))
}

/// Random boundary-driven model with an ergodic, gapped dissipator on A.
/// Two generic jump operators make the dissipator ergodic for almost every
/// draw; non-ergodic draws are rejected and resampled.
pub fn random_model(rng: &mut impl Rng, d_a: usize, d_b: usize, gamma: f64) -> CompositeModel {
    let sa = SpaceTag::a(d_a, d_b);
    let sb = SpaceTag::b(d_a, d_b);
    let sab = SpaceTag::ab(d_a, d_b);
    loop {
        let jumps = std::vec![
            Operator::new(sa, random_complex_matrix(rng, d_a, 0.5)).unwrap(),
            Operator::new(sa, random_complex_matrix(rng, d_a, 0.5)).unwrap(),
        ];
        let k_l = Operator::new(sa, random_hermitian(rng, d_a, 0.3)).unwrap();
        let spec = match LindbladSpec::new(sa, jumps, k_l) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let d_a_sop = build_dissipator(&spec);
        let summary = match analyze_spectrum(&d_a_sop, default_cluster_tol(&d_a_sop)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if !summary.is_ergodic || summary.gap < 1e-3 {
            continue;
        }
        let h_a = Operator::new(sa, random_hermitian(rng, d_a, 0.7)).unwrap();
        let h_b = Operator::new(sb, random_hermitian(rng, d_b, 0.7)).unwrap();
        let h_ab = Operator::new(sab, random_hermitian(rng, d_a * d_b, 0.5)).unwrap();
        match CompositeModel::new(h_a, h_ab, h_b, spec, gamma) {
            Ok(m) => return m,
            Err(_) => continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use crate::op::ONE;
    use num_complex::Complex64;

    #[test]
    fn example_dissipator_matches_known_actions() {
        let model = example_model(1.0, 10.0);
        let t = example_t(1.0);
        let d = build_dissipator(model.dissipator_a());
        let sa = model.h_a().space();
        let sm = Operator::new(sa, sigma_minus()).unwrap();
        let s3 = Operator::new(sa, pauli(3)).unwrap();
        // D_A(sigma_-) = -sigma_-, D_A(sigma_3) = -2 sigma_3
        assert!(d.apply(&sm).unwrap().add(&sm).max_abs() < 1e-12);
        assert!(d.apply(&s3).unwrap().add(&s3.scale(Complex64::new(2.0, 0.0))).max_abs() < 1e-12);
        // steady state (1 - t sigma_3)/2, gap 1
        let summary = model.d_a_summary();
        assert!((summary.gap - 1.0).abs() < 1e-9);
        let pi = summary.steady_state.as_ref().unwrap();
        let expected = Operator::new(sa, (pauli(0) - pauli(3).mapv(|z| z * Complex64::new(t, 0.0))).mapv(|z| z * Complex64::new(0.5, 0.0))).unwrap();
        assert!(pi.sub(&expected).max_abs() < 1e-10);
    }

    #[test]
    fn random_models_are_ergodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let m = random_model(&mut rng, 2, 3, 4.0);
            assert!(m.d_a_summary().is_ergodic);
            assert!(m.d_a_gap() > 1e-3);
            // normalization invariants
            let h = m.hamiltonian();
            assert!(h.trace().norm() < 1e-9);
            assert!(m.h_ab().partial_trace_a().unwrap().max_abs() < 1e-9);
            assert!(m.h_ab().partial_trace_b().unwrap().max_abs() < 1e-9);
        }
    }
}
