//! Time propagation and the empirical side of the comparison theorems:
//! trace-norm trajectory gaps with scaling fits, and mixing-time
//! estimation by bisection over a multistart total-variation supremum.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lindblad::{analyze_spectrum, default_cluster_tol};
use crate::op::Operator;
use crate::optim::{
    norm_1to1_witness_with, random_unit_vector, tv_after, tv_sup_witness_seeded, OptimCfg,
};
use crate::sop::SuperOperator;
use crate::zeno::{build_composite, CompositeModel, ZenoObjects};

/// Propagate a state along a time grid; each step exponentiates the
/// increment so the grid need not be uniform.
pub fn propagate(l: &SuperOperator, rho0: &Operator, times: &[f64]) -> Result<Vec<Operator>> {
    if !l.is_square() {
        return Err(Error::SpaceMismatch { context: "propagate" });
    }
    let mut out = Vec::with_capacity(times.len());
    let mut current = rho0.clone();
    let mut t_prev = 0.0;
    for &t in times {
        if t < t_prev {
            return Err(Error::InvalidInput("time grid must be non-decreasing".into()));
        }
        if t > t_prev {
            current = l.expm(t - t_prev)?.apply(&current)?;
        }
        t_prev = t;
        out.push(current.clone());
    }
    Ok(out)
}

/// Which comparison statement a scan exercises.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TheoremTag {
    /// Leakage off the steady manifold from manifold data: `Q e^{tL} P`.
    Tzcvs,
    /// Replacing initial data by its projection: `e^{tL} Q`.
    Eullim,
    /// Reduced trajectory vs the projected semigroup.
    Coherentsc,
    /// Full trajectory vs embedded projected semigroup.
    Mtilrm,
    /// Full trajectory vs embedded coherent semigroup.
    Mtilrmeul,
    /// Interaction picture of the projected semigroup vs the averaged one.
    Projmozlth,
    /// Interaction picture of the full semigroup vs the averaged one.
    Projmozltha,
}

impl TheoremTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TZCVS" => Some(Self::Tzcvs),
            "EULLIM" => Some(Self::Eullim),
            "COHERENTSC" => Some(Self::Coherentsc),
            "MTILRM" => Some(Self::Mtilrm),
            "MTILRMEUL" => Some(Self::Mtilrmeul),
            "PROJMOZLTH" => Some(Self::Projmozlth),
            "PROJMOZLTHA" => Some(Self::Projmozltha),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tzcvs => "TZCVS",
            Self::Eullim => "EULLIM",
            Self::Coherentsc => "COHERENTSC",
            Self::Mtilrm => "MTILRM",
            Self::Mtilrmeul => "MTILRMEUL",
            Self::Projmozlth => "PROJMOZLTH",
            Self::Projmozltha => "PROJMOZLTHA",
        }
    }

    /// Scaling law the gap is fitted against: the log-log slope for power
    /// laws, with EULLIM fitted against `log(1+g)/g` instead.
    pub fn expected_slope(&self) -> f64 {
        match self {
            Self::Coherentsc => -2.0,
            _ => -1.0,
        }
    }
}

/// Scan settings.
#[derive(Clone, Copy, Debug)]
pub struct ScanCfg {
    /// Random pure states sampled per grid point (plus the maximally mixed).
    pub n_states: usize,
    /// Points in the geometric time grid.
    pub time_points: usize,
    /// Horizon `T` for the finite-window statements.
    pub horizon: Option<f64>,
    pub seed: u64,
}

impl Default for ScanCfg {
    fn default() -> Self {
        ScanCfg { n_states: 32, time_points: 64, horizon: None, seed: 0 }
    }
}

/// Gap series for one coupling value.
#[derive(Clone, Debug)]
pub struct GapSeries {
    pub gamma: f64,
    pub times: Vec<f64>,
    pub gaps: Vec<f64>,
    pub sup_gap: f64,
}

/// Scan output: per-coupling gap trajectories plus the scaling fit.
#[derive(Clone, Debug)]
pub struct TrajectoryGapReport {
    pub theorem_tag: TheoremTag,
    pub series: Vec<GapSeries>,
    /// Log-log slope of the per-coupling supremum against the coupling.
    pub fitted_rate: f64,
    /// For the log-corrected law: R^2 of the fit against `log(1+g)/g`.
    pub shape_r2: Option<f64>,
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| lo * ratio.powi(k as i32)).collect()
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

fn ols_r2(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if syy == 0.0 {
        return 1.0;
    }
    (sxy * sxy) / (sxx * syy)
}

/// Supremum of `||map(rho)||_1` over density matrices: sampled pure states
/// plus the maximally mixed state, refined by a short multistart ascent
/// warm-started at the best sample.
fn state_sup(map: &SuperOperator, n_states: usize, rng: &mut ChaCha8Rng) -> f64 {
    let d = map.domain().dim();
    let mixed = Operator::identity(map.domain()).scale(Complex64::new(1.0 / d as f64, 0.0));
    let mut best = map.apply(&mixed).expect("state_sup").trace_norm();
    for _ in 0..n_states {
        let psi = random_unit_vector(rng, d);
        let mut m = ndarray::Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[[i, j]] = psi[i] * psi[j].conj();
            }
        }
        let rho = Operator::new(map.domain(), m).expect("state_sup rho");
        best = best.max(map.apply(&rho).expect("state_sup").trace_norm());
    }
    // refinement over the Hermitian unit ball; its extreme points are pure
    // states, so the refined value is still attained by a state
    let cfg = OptimCfg { restarts: 4, max_iter: 60, tol: 1e-8, seed: rng.get_word_pos() as u64 };
    let (refined, _) = norm_1to1_witness_with(map, true, &cfg);
    best.max(refined)
}

/// Compute the theorem's left-hand quantity over the grids and fit the
/// decay law in the coupling.
pub fn theorem_gap_scan(
    model: &CompositeModel,
    zeno: &ZenoObjects,
    d_p_sharp: &SuperOperator,
    tag: TheoremTag,
    gamma_grid: &[f64],
    cfg: &ScanCfg,
) -> Result<TrajectoryGapReport> {
    if gamma_grid.len() < 3 {
        return Err(Error::InvalidInput(
            "gamma grid too small for a scaling fit (need >= 3 points)".into(),
        ));
    }
    let a = model.d_a_gap();
    let mut series = Vec::with_capacity(gamma_grid.len());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &gamma in gamma_grid {
        let m = model.with_gamma(gamma)?;
        let ops = build_composite(&m);
        let t_gamma = 2.0 * gamma.max(2.0).ln() / (a * gamma);
        let horizon = cfg.horizon.unwrap_or(match tag {
            TheoremTag::Coherentsc => 5.0,
            TheoremTag::Projmozlth | TheoremTag::Projmozltha => 2.0,
            TheoremTag::Mtilrm | TheoremTag::Mtilrmeul => 1.0,
            _ => 10.0 / a,
        });
        let times = match tag {
            TheoremTag::Tzcvs => geometric_grid(t_gamma / 4.0, 10.0 / a, cfg.time_points),
            TheoremTag::Eullim => geometric_grid(t_gamma, 10.0 / a, cfg.time_points),
            TheoremTag::Coherentsc => geometric_grid(t_gamma / 4.0, horizon, cfg.time_points),
            TheoremTag::Mtilrm => geometric_grid(0.1, gamma * horizon, cfg.time_points),
            TheoremTag::Mtilrmeul => geometric_grid(0.1, horizon, cfg.time_points),
            TheoremTag::Projmozlth | TheoremTag::Projmozltha => {
                geometric_grid(horizon / 100.0, horizon, cfg.time_points)
            }
        };
        let mut gaps = Vec::with_capacity(times.len());
        for &t in &times {
            let diff = difference_map(zeno, d_p_sharp, &ops, tag, gamma, t)?;
            gaps.push(state_sup(&diff, cfg.n_states, &mut rng));
        }
        let sup_gap = gaps.iter().cloned().fold(0.0, f64::max);
        series.push(GapSeries { gamma, times, gaps, sup_gap });
    }
    let xs: Vec<f64> = series.iter().map(|s| s.gamma.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|s| s.sup_gap.max(1e-300).ln()).collect();
    let fitted_rate = ols_slope(&xs, &ys);
    let shape_r2 = if tag == TheoremTag::Eullim {
        let xs: Vec<f64> = series.iter().map(|s| (1.0 + s.gamma).ln() / s.gamma).collect();
        let ys: Vec<f64> = series.iter().map(|s| s.sup_gap).collect();
        Some(ols_r2(&xs, &ys))
    } else {
        None
    };
    Ok(TrajectoryGapReport { theorem_tag: tag, series, fitted_rate, shape_r2 })
}

/// The superoperator whose state-supremum trace norm is the theorem's
/// left-hand side at time `t` and coupling `gamma`.
fn difference_map(
    zeno: &ZenoObjects,
    d_p_sharp: &SuperOperator,
    ops: &crate::zeno::CompositeOps,
    tag: TheoremTag,
    gamma: f64,
    t: f64,
) -> Result<SuperOperator> {
    let proj = &zeno.projectors;
    let l_p = zeno.l_p_at(gamma);
    Ok(match tag {
        TheoremTag::Tzcvs => proj.q.compose(&ops.l_gamma.expm(t)?).compose(&proj.p),
        TheoremTag::Eullim => ops.l_gamma.expm(t)?.compose(&proj.q),
        TheoremTag::Coherentsc => proj
            .tr_a
            .compose(&ops.l_gamma.expm(t)?)
            .compose(&proj.v)
            .sub(&l_p.expm(t)?),
        TheoremTag::Mtilrm => ops
            .l_gamma
            .expm(t)?
            .sub(&proj.v.compose(&l_p.expm(t)?).compose(&proj.tr_a)),
        TheoremTag::Mtilrmeul => ops
            .l_gamma
            .expm(t)?
            .sub(&proj.v.compose(&zeno.k_p.expm(t)?).compose(&proj.tr_a)),
        TheoremTag::Projmozlth => {
            // here t plays the role of the rescaled time tau
            let back = zeno.k_p.expm(-gamma * t)?;
            back.compose(&l_p.expm(gamma * t)?).sub(&d_p_sharp.expm(t)?)
        }
        TheoremTag::Projmozltha => {
            let back = zeno.k_p.expm(-gamma * t)?;
            back.compose(&proj.tr_a)
                .compose(&ops.l_gamma.expm(gamma * t)?)
                .compose(&proj.v)
                .sub(&d_p_sharp.expm(t)?)
        }
    })
}

/// Mixing-time estimate.
#[derive(Clone, Debug)]
pub struct MixingReport {
    pub epsilon: f64,
    /// `None` encodes the infinity flag: the supremum stays above epsilon
    /// at the exploration horizon.
    pub t_mix: Option<f64>,
    pub witness_pair: (Operator, Operator),
    /// Supremum at the reported mixing time.
    pub sup_at_t_mix: f64,
    pub method: &'static str,
}

/// Mixing-time settings.
#[derive(Clone, Copy, Debug)]
pub struct MixingCfg {
    pub optim: OptimCfg,
    /// Relative bisection resolution.
    pub resolution: f64,
    /// Horizon multiple: explore up to `horizon_factor / gap`.
    pub horizon_factor: f64,
}

impl Default for MixingCfg {
    fn default() -> Self {
        MixingCfg {
            optim: OptimCfg { restarts: 16, max_iter: 80, tol: 1e-9, seed: 0 },
            resolution: 1e-3,
            horizon_factor: 1e4,
        }
    }
}

/// First time all pairs of evolved states are within `epsilon` in total
/// variation, found by bisection; the supremum over pairs is estimated by
/// multistart optimization over pure-state pairs (the extreme points).
/// Monotone non-increase of the supremum along a CPTP semigroup justifies
/// the bisection.
pub fn mixing_time(l: &SuperOperator, epsilon: f64, cfg: &MixingCfg) -> Result<MixingReport> {
    if !(0.0 < epsilon && epsilon < 0.5) {
        return Err(Error::InvalidInput(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    let summary = analyze_spectrum(l, default_cluster_tol(l))?;
    let gap = summary.gap.max(1e-8);
    let t_max = (cfg.horizon_factor / gap).min(1e9);

    let mut warm: Vec<(crate::op::CVec, crate::op::CVec)> = Vec::new();
    let eval = |t: f64, warm: &[(crate::op::CVec, crate::op::CVec)]| -> Result<(f64, Operator, Operator)> {
        let map = l.expm(t)?;
        let (v, r0, r1) = tv_sup_witness_seeded(&map, &cfg.optim, warm);
        Ok((v, r0, r1))
    };

    // horizon test first: establishes finiteness
    let (sup_end, r0e, r1e) = eval(t_max, &warm)?;
    if sup_end >= epsilon {
        return Ok(MixingReport {
            epsilon,
            t_mix: None,
            witness_pair: (r0e, r1e),
            sup_at_t_mix: sup_end,
            method: "bisection",
        });
    }

    // bracket: double from 1/gap until the supremum drops below epsilon
    let mut t_lo = 0.0;
    let mut t_hi = 1.0 / gap;
    let mut witness = (r0e, r1e);
    let mut guard = 0;
    loop {
        let (v, r0, r1) = eval(t_hi, &warm)?;
        push_warm(&mut warm, &r0, &r1);
        if v < epsilon {
            witness = (r0, r1);
            break;
        }
        t_lo = t_hi;
        t_hi *= 2.0;
        guard += 1;
        if t_hi >= t_max || guard > 60 {
            t_hi = t_max;
            break;
        }
    }

    let mut sup_hi = f64::NAN;
    while t_hi - t_lo > cfg.resolution * t_hi {
        let mid = 0.5 * (t_lo + t_hi);
        let (v, r0, r1) = eval(mid, &warm)?;
        push_warm(&mut warm, &r0, &r1);
        if v < epsilon {
            t_hi = mid;
            sup_hi = v;
            witness = (r0, r1);
        } else {
            t_lo = mid;
        }
    }
    if sup_hi.is_nan() {
        let (v, _, _) = eval(t_hi, &warm)?;
        sup_hi = v;
    }
    Ok(MixingReport {
        epsilon,
        t_mix: Some(t_hi),
        witness_pair: witness,
        sup_at_t_mix: sup_hi,
        method: "bisection",
    })
}

fn push_warm(warm: &mut Vec<(crate::op::CVec, crate::op::CVec)>, r0: &Operator, r1: &Operator) {
    // keep the dominant eigenvector of each witness state as a warm start
    use ndarray_linalg::{Eigh, UPLO};
    if warm.len() >= 4 {
        warm.remove(0);
    }
    let top = |op: &Operator| {
        let (vals, vecs) = op.mat().eigh(UPLO::Lower).expect("witness eigh");
        let k = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        vecs.column(k).to_owned()
    };
    warm.push((top(r0), top(r1)));
}

/// Re-evaluate the supremum attained by a report's witness pair.
pub fn witness_tv(l: &SuperOperator, t: f64, report: &MixingReport) -> Result<f64> {
    let map = l.expm(t)?;
    Ok(tv_after(&map, &report.witness_pair.0, &report.witness_pair.1))
}

/// One row of the mixing comparison.
#[derive(Clone, Debug)]
pub struct MixingRatioRow {
    pub gamma: f64,
    pub t_mix_full: f64,
    pub t_mix_projected: f64,
    /// `t_mix(L_gamma)/gamma`.
    pub ratio_full: f64,
    /// `t_mix(L_{P,gamma})/gamma`.
    pub ratio_projected: f64,
    /// `|ratio - t#| / t#` for the full generator.
    pub dev_full: f64,
    pub dev_projected: f64,
}

/// Comparison of scaled mixing times against the averaged generator.
#[derive(Clone, Debug)]
pub struct MixingRatioScan {
    pub epsilon: f64,
    pub t_mix_sharp: f64,
    pub rows: Vec<MixingRatioRow>,
}

/// Scaled mixing times of the full and projected generators against the
/// coupling-free averaged one.
pub fn mixing_ratio_scan(
    model: &CompositeModel,
    zeno: &ZenoObjects,
    d_p_sharp: &SuperOperator,
    epsilon: f64,
    gamma_grid: &[f64],
    cfg: &MixingCfg,
) -> Result<MixingRatioScan> {
    let sharp_report = mixing_time(d_p_sharp, epsilon, cfg)?;
    let t_sharp = sharp_report.t_mix.ok_or_else(|| Error::NotErgodic {
        what: "averaged projected dissipator",
        detail: "infinite mixing time".into(),
    })?;
    let mut rows = Vec::with_capacity(gamma_grid.len());
    for &gamma in gamma_grid {
        let m = model.with_gamma(gamma)?;
        let ops = build_composite(&m);
        let full = mixing_time(&ops.l_gamma, epsilon, cfg)?;
        let projected = mixing_time(&zeno.l_p_at(gamma), epsilon, cfg)?;
        let (Some(tf), Some(tp)) = (full.t_mix, projected.t_mix) else {
            return Err(Error::NotErgodic {
                what: "generator at finite coupling",
                detail: format!("infinite mixing time at gamma = {gamma}"),
            });
        };
        let ratio_full = tf / gamma;
        let ratio_projected = tp / gamma;
        rows.push(MixingRatioRow {
            gamma,
            t_mix_full: tf,
            t_mix_projected: tp,
            ratio_full,
            ratio_projected,
            dev_full: (ratio_full - t_sharp).abs() / t_sharp,
            dev_projected: (ratio_projected - t_sharp).abs() / t_sharp,
        });
    }
    Ok(MixingRatioScan { epsilon, t_mix_sharp: t_sharp, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::build_dissipator;
    use crate::models::example_model;
    use crate::op::ONE;
    use crate::op::pauli;
    use crate::space::SpaceTag;

    #[test]
    fn propagation_preserves_trace_and_steady_manifold() {
        let model = example_model(1.0, 10.0);
        let ops = build_composite(&model);
        let zeno = ZenoObjects::build(&model).unwrap();
        let r = Operator::identity(SpaceTag::b(2, 2)).scale(Complex64::new(0.5, 0.0));
        let manifold = zeno.pi_a.tensor(&r).unwrap();
        // D alone fixes the manifold
        let states = propagate(&ops.d, &manifold, &[0.5, 1.5]).unwrap();
        for s in &states {
            assert!(s.sub(&manifold).max_abs() < 1e-11);
        }
        // full evolution preserves trace and hermiticity
        let states = propagate(&ops.l_gamma, &manifold, &[0.3, 0.9, 2.0]).unwrap();
        for s in &states {
            assert!((s.trace() - ONE).norm() < 1e-9);
            assert!(s.hermiticity_deviation() < 1e-9);
        }
    }

    #[test]
    fn mixing_time_of_boundary_dissipator() {
        // D_A of the example: gap 1, mixing time ln(1/eps) for the sigma3 pair
        let model = example_model(1.0, 10.0);
        let d_a = build_dissipator(model.dissipator_a());
        let cfg = MixingCfg::default();
        let rep = mixing_time(&d_a, 0.25, &cfg).unwrap();
        let t = rep.t_mix.expect("finite");
        assert!(rep.sup_at_t_mix <= 0.25 + 1e-6);
        // slowest decay is the coherence (rate 1): t_mix = ln(4)
        assert!((t - 4.0_f64.ln()).abs() < 0.02, "t_mix {t}");
    }

    #[test]
    fn unitary_generator_never_mixes() {
        let sp = SpaceTag::a(2, 1);
        let h = Operator::new(sp, pauli(3)).unwrap();
        let k = SuperOperator::hamiltonian_commutator(&h);
        let rep = mixing_time(&k, 0.25, &MixingCfg::default()).unwrap();
        assert!(rep.t_mix.is_none());
    }
}
