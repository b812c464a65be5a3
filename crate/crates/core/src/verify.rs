//! The built-in fixture suite for the two-qubit example: every closed-form
//! quantity the model admits, parametric in `t = tanh(beta/2)`, checked at
//! tight tolerances.  Used by the acceptance tests and by the CLI.

use num_complex::Complex64;

use crate::davies::{bohr_decompose, default_bohr_tol, sharp_lindblad_form, sharp_superop};
use crate::error::Result;
use crate::lindblad::{analyze_spectrum, build_dissipator, default_cluster_tol, gks_conditional_cp_test, GKS_TOL};
use crate::models::{example_model, example_model_hb_sigma3, example_t};
use crate::op::{pauli, sigma_minus, sigma_plus, CMat, Operator, I};
use crate::space::SpaceTag;
use crate::steady::{exact_steady_state, solve_hierarchy, boundary_reduced_state_test};
use crate::zeno::{build_composite, ZenoObjects};

/// One named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn of(name: &'static str, err: f64, tol: f64) -> Self {
        CheckResult {
            name,
            passed: err <= tol,
            detail: format!("deviation {err:.3e} (tolerance {tol:.1e})"),
        }
    }

    fn flag(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult { name, passed, detail }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn op_b(m: CMat) -> Operator {
    Operator::new(SpaceTag::b(2, 2), m).unwrap()
}

fn op_ab(m: CMat) -> Operator {
    Operator::new(SpaceTag::ab(2, 2), m).unwrap()
}

fn kron2(a: &CMat, b: &CMat) -> CMat {
    crate::op::kron(a, b)
}

/// Closed form of the first correction:
/// `n_0 = -(t/4)(s1 (x) s2 - s2 (x) s1) - (t/4) 1 (x) s1 + (t^2/4) s3 (x) s1`.
pub fn n0_closed_form(t: f64) -> Operator {
    let m = kron2(&pauli(1), &pauli(2)).mapv(|z| z * c(-t / 4.0))
        + kron2(&pauli(2), &pauli(1)).mapv(|z| z * c(t / 4.0))
        + kron2(&pauli(0), &pauli(1)).mapv(|z| z * c(-t / 4.0))
        + kron2(&pauli(3), &pauli(1)).mapv(|z| z * c(t * t / 4.0));
    op_ab(m)
}

/// Closed form of the second correction.
pub fn n1_closed_form(t: f64) -> Operator {
    let m = kron2(&pauli(0), &pauli(2)).mapv(|z| z * c(-1.5 * t))
        + kron2(&pauli(0), &pauli(3)).mapv(|z| z * c(t / 8.0))
        + kron2(&pauli(1), &pauli(1)).mapv(|z| z * c(-t / 2.0))
        + kron2(&pauli(2), &pauli(0)).mapv(|z| z * c(-t * t / 4.0))
        + kron2(&pauli(2), &pauli(2)).mapv(|z| z * c(-t / 2.0))
        + kron2(&pauli(2), &pauli(3)).mapv(|z| z * c(-t / 4.0))
        + kron2(&pauli(3), &pauli(0)).mapv(|z| z * c(t / 4.0))
        + kron2(&pauli(3), &pauli(2)).mapv(|z| z * c(1.5 * t * t))
        + kron2(&pauli(3), &pauli(3)).mapv(|z| z * c(-3.0 * t * t / 8.0));
    op_ab(m)
}

/// Steady state of the projected generator at finite coupling:
/// `(1/2) 1 - (g t / (2 g^2 + 1)) s1 - (t / (4 g^2 + 2)) s3`.
pub fn projected_steady_state_closed_form(t: f64, gamma: f64) -> Operator {
    let g = gamma;
    let m = pauli(0).mapv(|z| z * c(0.5))
        + pauli(1).mapv(|z| z * c(-g * t / (2.0 * g * g + 1.0)))
        + pauli(3).mapv(|z| z * c(-t / (4.0 * g * g + 2.0)));
    op_b(m)
}

/// The nilpotent `a = (s1 - i s3)/2` entering the averaged jumps.
pub fn a_operator() -> Operator {
    let m = (pauli(1) - pauli(3).mapv(|z| z * I)).mapv(|z| z * c(0.5));
    op_b(m)
}

/// Match two operators up to a global phase.
fn phase_free_distance(x: &Operator, y: &Operator) -> f64 {
    let nx = x.hs_norm();
    let ny = y.hs_norm();
    let ov = x.hs_inner(y).norm();
    // ||x e^{i phi} - y||^2 minimized over phi = nx^2 + ny^2 - 2|<x,y>|
    (nx * nx + ny * ny - 2.0 * ov).max(0.0).sqrt()
}

/// Run every closed-form check for the example at the given inverse
/// temperature.  All fixtures are parametric in `t = tanh(beta/2)`.
pub fn example_fixture_suite(beta: f64, seed: u64) -> Result<Vec<CheckResult>> {
    let _ = seed;
    let t = example_t(beta);
    let tol = 1e-9;
    let mut checks = Vec::new();

    let model = example_model(beta, 10.0);
    let zeno = ZenoObjects::build(&model)?;
    let sb = SpaceTag::b(2, 2);
    let s1 = op_b(pauli(1));
    let s2 = op_b(pauli(2));
    let s3 = op_b(pauli(3));
    let id_b = Operator::identity(sb);

    // boundary dissipator: gap and steady state
    let summary = model.d_a_summary();
    checks.push(CheckResult::of("gap(D_A) = 1", (summary.gap - 1.0).abs(), tol));
    let pi_expected = Operator::new(
        model.h_a().space(),
        (pauli(0) - pauli(3).mapv(|z| z * c(t))).mapv(|z| z * c(0.5)),
    )
    .unwrap();
    checks.push(CheckResult::of(
        "pi_A = (1 - t s3)/2",
        zeno.pi_a.sub(&pi_expected).max_abs(),
        tol,
    ));

    // projected Hamiltonian
    checks.push(CheckResult::of(
        "H_P = sigma2",
        (zeno.h_p.mat() - &pauli(2)).iter().map(|z| z.norm()).fold(0.0, f64::max),
        tol,
    ));

    // projected dissipator eigen-actions
    let sm = op_b(sigma_minus());
    let sp = op_b(sigma_plus());
    let pi_b_pattern = op_b((pauli(0) - pauli(3).mapv(|z| z * c(t))).mapv(|z| z * c(0.5)));
    checks.push(CheckResult::of(
        "D_P(sigma-) = -sigma-",
        zeno.d_p.apply(&sm)?.add(&sm).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "D_P(sigma+) = -sigma+",
        zeno.d_p.apply(&sp)?.add(&sp).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "D_P(sigma3) = -2 sigma3",
        zeno.d_p.apply(&s3)?.add(&s3.scale(c(2.0))).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "D_P((1 - t s3)/2) = 0",
        zeno.d_p.apply(&pi_b_pattern)?.max_abs(),
        tol,
    ));

    // extracted jump operators match the boundary ones up to phase
    if let Some(form) = &zeno.dp_lindblad {
        let z = (beta / 2.0).exp() + (-beta / 2.0).exp();
        let cc = ((-beta / 2.0).exp() / z).sqrt();
        let ss = ((beta / 2.0).exp() / z).sqrt();
        let expected = [sp.scale(c(cc)), sm.scale(c(ss))];
        let mut worst: f64 = 0.0;
        for e in &expected {
            let best = form
                .spec
                .jumps()
                .iter()
                .map(|v| phase_free_distance(v, e))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        checks.push(CheckResult::of("extracted jumps = {c s+, s s-} up to phase", worst, 1e-8));
        checks.push(CheckResult::of("D_P rebuild from jumps", form.rebuild_error, 1e-8));
        checks.push(CheckResult::flag(
            "A matrix diagonal (detailed balance)",
            {
                let mut off: f64 = 0.0;
                for i in 0..form.a_mat.nrows() {
                    for j in 0..form.a_mat.ncols() {
                        if i != j {
                            off = off.max(form.a_mat[[i, j]].norm());
                        }
                    }
                }
                off < 1e-9
            },
            "off-diagonal of A".into(),
        ));
        checks.push(CheckResult::of(
            "H_L = 0",
            form.spec.hamiltonian_part().max_abs(),
            1e-9,
        ));
    } else {
        checks.push(CheckResult::flag(
            "extracted jumps = {c s+, s s-} up to phase",
            false,
            format!("extraction unavailable: {:?}", zeno.extraction_note),
        ));
    }

    // averaged dissipator: eigen-actions and the explicit Lindblad form
    let bohr = bohr_decompose(&zeno.h_p, default_bohr_tol(&zeno.h_p))?;
    checks.push(CheckResult::flag(
        "spectrum of i K_P is {-2, 0, 2}",
        bohr.frequencies.len() == 3
            && bohr
                .frequencies
                .iter()
                .zip([-2.0, 0.0, 2.0])
                .all(|(a, b)| (a - b).abs() < tol)
            && (bohr.b.unwrap_or(0.0) - 2.0).abs() < tol,
        format!("frequencies {:?}, b {:?}", bohr.frequencies, bohr.b),
    ));
    let sharp = sharp_superop(&zeno.d_p, &bohr);
    checks.push(CheckResult::of("D_P#(1) = 0", sharp.apply(&id_b)?.max_abs(), tol));
    checks.push(CheckResult::of(
        "D_P#(s1) = -(3/2) s1",
        sharp.apply(&s1)?.add(&s1.scale(c(1.5))).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "D_P#(s2) = -s2",
        sharp.apply(&s2)?.add(&s2).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "D_P#(s3) = -(3/2) s3",
        sharp.apply(&s3)?.add(&s3.scale(c(1.5))).max_abs(),
        tol,
    ));

    // D_P#(R) = (a R a' + a' R a + s2 R s2)/2 - R, canonical jumps {a/2, a'/2, s2/2}
    let a_op = a_operator();
    let expected_sharp = {
        let jumps = std::vec![
            a_op.scale(c(0.5)),
            a_op.dagger().scale(c(0.5)),
            s2.scale(c(0.5)),
        ];
        build_dissipator(&crate::lindblad::LindbladSpec::from_jumps(sb, jumps).unwrap())
    };
    checks.push(CheckResult::of(
        "D_P# = (a.a' + a'.a + s2.s2)/2 - id",
        sharp.distance_max(&expected_sharp),
        tol,
    ));

    // averaged jump list contains (c/2) a up to phase
    if let Some(form) = &zeno.dp_lindblad {
        let sharp_spec = sharp_lindblad_form(&form.spec, &bohr)?;
        let rebuilt = build_dissipator(&sharp_spec);
        checks.push(CheckResult::of(
            "averaged Lindblad form rebuilds D_P#",
            rebuilt.distance_max(&sharp),
            1e-8,
        ));
        let z = (beta / 2.0).exp() + (-beta / 2.0).exp();
        let cc = ((-beta / 2.0).exp() / z).sqrt();
        let target = a_op.scale(c(cc / 2.0));
        let best = sharp_spec
            .jumps()
            .iter()
            .map(|v| phase_free_distance(v, &target))
            .fold(f64::INFINITY, f64::min);
        checks.push(CheckResult::of("averaged jumps contain (c/2) a", best, 1e-8));
    }

    // steady state of the averaged generator
    let sharp_summary = analyze_spectrum(&sharp, default_cluster_tol(&sharp))?;
    let r_bar = sharp_summary.steady_state.clone().expect("ergodic averaged generator");
    checks.push(CheckResult::of(
        "Rbar = 1/2",
        r_bar.sub(&id_b.scale(c(0.5))).max_abs(),
        tol,
    ));

    // projected generator at finite coupling: spectrum and steady state
    for gamma in [2.0, 10.0] {
        let l_p = zeno.l_p_at(gamma);
        let ssum = analyze_spectrum(&l_p, default_cluster_tol(&l_p))?;
        let disc = (16.0 * gamma * gamma - 1.0).sqrt();
        let expected = [
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0 / gamma, 0.0),
            Complex64::new(-3.0 / (2.0 * gamma), disc / (2.0 * gamma)),
            Complex64::new(-3.0 / (2.0 * gamma), -disc / (2.0 * gamma)),
        ];
        let mut worst: f64 = 0.0;
        for e in expected {
            let d = ssum
                .eigenvalues
                .iter()
                .map(|l| (l - e).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        checks.push(CheckResult::of(
            if gamma == 2.0 {
                "spec(L_P) = {0, -1/g, (-3 +- i sqrt(16g^2-1))/2g} at g=2"
            } else {
                "spec(L_P) = {0, -1/g, (-3 +- i sqrt(16g^2-1))/2g} at g=10"
            },
            worst,
            tol,
        ));
        let steady = ssum.steady_state.clone().expect("ergodic projected generator");
        let expected = projected_steady_state_closed_form(t, gamma);
        checks.push(CheckResult::of(
            if gamma == 2.0 {
                "Rbar_g closed form at g=2"
            } else {
                "Rbar_g closed form at g=10"
            },
            steady.sub(&expected).max_abs(),
            tol,
        ));
    }

    // hierarchy: first two orders in closed form
    let expansion = solve_hierarchy(&model, &zeno, &sharp, 1)?;
    checks.push(CheckResult::of(
        "n_0 closed form",
        expansion.n_bar[0].sub(&n0_closed_form(t)).max_abs(),
        1e-10,
    ));
    checks.push(CheckResult::of(
        "n_1 closed form",
        expansion.n_bar[1].sub(&n1_closed_form(t)).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "V_0 = -(t/2) s1",
        expansion.v_terms[0].sub(&s1.scale(c(-t / 2.0))).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of("W_0 = 0", expansion.w_terms[0].max_abs(), tol));
    checks.push(CheckResult::of(
        "V_1 = (t/4) s3",
        expansion.v_terms[1].sub(&s3.scale(c(t / 4.0))).max_abs(),
        tol,
    ));

    // reduced states of the order-1 truncation
    let tr_b_n1 = expansion.n_bar[1].partial_trace_b()?;
    let expected_tr_b = op_b_to_a(
        &model,
        pauli(2).mapv(|z| z * c(-t * t / 2.0)) + pauli(3).mapv(|z| z * c(t / 2.0)),
    );
    checks.push(CheckResult::of(
        "Tr_B n_1 = -(t^2/2) s2 + (t/2) s3",
        tr_b_n1.sub(&expected_tr_b).max_abs(),
        tol,
    ));
    let tr_a_n1 = expansion.n_bar[1].partial_trace_a()?;
    let expected_tr_a = op_b(pauli(2).mapv(|z| z * c(-3.0 * t)) + pauli(3).mapv(|z| z * c(t / 4.0)));
    checks.push(CheckResult::of(
        "Tr_A n_1 = -3t s2 + (t/4) s3",
        tr_a_n1.sub(&expected_tr_a).max_abs(),
        tol,
    ));
    let tr_a_n0 = expansion.n_bar[0].partial_trace_a()?;
    checks.push(CheckResult::of(
        "Tr_A n_0 = -(t/2) s1",
        tr_a_n0.sub(&s1.scale(c(-t / 2.0))).max_abs(),
        tol,
    ));
    checks.push(CheckResult::of(
        "Tr_B n_0 = 0",
        expansion.n_bar[0].partial_trace_b()?.max_abs(),
        tol,
    ));

    // boundary reduced-state criterion: K_A = sigma3 commutes with pi_A
    let boundary = boundary_reduced_state_test(&model, &expansion, tol)?;
    checks.push(CheckResult::of(
        "K_A = sigma3",
        (boundary.k_a.mat() - &pauli(3)).iter().map(|z| z.norm()).fold(0.0, f64::max),
        tol,
    ));
    checks.push(CheckResult::flag(
        "[pi_A, K_A] = 0 iff Tr_B n_0 = 0",
        boundary.iff_agrees && boundary.commutator_norm <= tol && boundary.tr_b_n0_norm <= tol,
        format!(
            "commutator {:.3e}, ||Tr_B n_0||_1 {:.3e}",
            boundary.commutator_norm, boundary.tr_b_n0_norm
        ),
    ));

    // the order-(1/g^2) corrected generator is never conditionally CP;
    // the threshold carries the conditional-CP test tolerance as slack
    // (at g = 100 the exact magnitude sits at 1e-6 itself)
    for gamma in [1.0, 10.0, 100.0] {
        let lc = zeno
            .k_p
            .add(&zeno.d_p.scale(c(1.0 / gamma)))
            .add(&zeno.b_p.scale(c(1.0 / (gamma * gamma))));
        let rep = gks_conditional_cp_test(&lc, GKS_TOL);
        let name = match gamma as u32 {
            1 => "corrected generator not CP at g=1",
            10 => "corrected generator not CP at g=10",
            _ => "corrected generator not CP at g=100",
        };
        checks.push(CheckResult::flag(
            name,
            rep.min_projected_choi_eigenvalue < -1e-6 + GKS_TOL,
            format!("min projected-Choi eigenvalue {:.6e}", rep.min_projected_choi_eigenvalue),
        ));
    }

    // exact steady state: reduced state at g = 10 matches the expansion of
    // Tr_A through second order with an O(g^-3) allowance
    {
        let gamma = 10.0;
        let m10 = model.with_gamma(gamma)?;
        let ops = build_composite(&m10);
        let exact = exact_steady_state(&ops.l_gamma)?;
        let tr_a = exact.partial_trace_a()?;
        let predicted = id_b
            .scale(c(0.5))
            .add(&s1.scale(c(-t / 2.0 / gamma)))
            .add(&expected_tr_a.scale(c(1.0 / (gamma * gamma))));
        checks.push(CheckResult::of(
            "Tr_A of exact steady state through g^-2 at g=10",
            tr_a.sub(&predicted).trace_norm(),
            3e-3,
        ));
    }

    // H_B ~ sigma3 variant: pi_A (x) pi_A is exactly steady at every coupling
    {
        let variant = example_model_hb_sigma3(beta, 7.0);
        let ops = build_composite(&variant);
        let pi_pi = zeno.pi_a.tensor(&pi_b_pattern)?;
        checks.push(CheckResult::of(
            "pi_A (x) pi_A steady for the sigma3 variant",
            ops.l_gamma.apply(&pi_pi)?.max_abs(),
            tol,
        ));
        let exact = exact_steady_state(&ops.l_gamma)?;
        checks.push(CheckResult::of(
            "exact steady state of the sigma3 variant",
            exact.sub(&pi_pi).max_abs(),
            1e-8,
        ));
    }

    // at beta = 0 every t-proportional term vanishes
    if beta == 0.0 {
        let ops = build_composite(&model);
        let exact = exact_steady_state(&ops.l_gamma)?;
        let quarter = Operator::identity(model.space()).scale(c(0.25));
        checks.push(CheckResult::of(
            "steady state is 1/4 at beta = 0",
            exact.sub(&quarter).max_abs(),
            tol,
        ));
        for (k, n) in expansion.n_bar.iter().enumerate() {
            checks.push(CheckResult::of(
                if k == 0 { "n_0 vanishes at beta = 0" } else { "n_1 vanishes at beta = 0" },
                n.max_abs(),
                tol,
            ));
        }
    }

    Ok(checks)
}

// Tr_B of an AB operator lives on A; fixtures written in Pauli language
// need the HA tag.
fn op_b_to_a(model: &crate::zeno::CompositeModel, m: CMat) -> Operator {
    Operator::new(model.h_a().space(), m).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_suite_passes_at_default_temperature() {
        let checks = example_fixture_suite(1.0, 0).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(
            failed.is_empty(),
            "failed checks: {:#?}",
            failed.iter().map(|c| (c.name, &c.detail)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn fixture_suite_is_t_parametric() {
        for beta in [0.0, 2.0] {
            let checks = example_fixture_suite(beta, 0).unwrap();
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            assert!(
                failed.is_empty(),
                "beta {beta}: failed {:#?}",
                failed.iter().map(|c| (c.name, &c.detail)).collect::<Vec<_>>()
            );
        }
    }
}
