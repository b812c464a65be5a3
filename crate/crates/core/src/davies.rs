//! Spectral (Bohr-frequency) machinery for the projected Hamiltonian and the
//! oscillation-averaging operation on operators and superoperators.
//!
//! The average of `X` under the coherent group is the pinching
//! `sum_mu P_mu X P_mu`; for a superoperator it is the frequency-matched
//! double sum over the spectral projections of `H_P`.

use ndarray_linalg::{Eigh, UPLO};

use crate::error::{Error, Result};
use crate::lindblad::LindbladSpec;
use crate::op::{CMat, Operator};
use crate::sop::SuperOperator;

/// Spectral decomposition of `H_P` with clustered eigenvalues, the Bohr
/// frequencies, and the frequency gap `b`.
#[derive(Clone, Debug)]
pub struct BohrDecomposition {
    /// Distinct eigenvalues of `H_P`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Spectral projections `P_mu`, aligned with `eigenvalues`.
    pub projections: Vec<Operator>,
    /// Distinct Bohr frequencies `mu - nu`, ascending.
    pub frequencies: Vec<f64>,
    /// Minimum gap among distinct frequencies; `None` when the spectrum is a
    /// single point (the average degenerates to the identity).
    pub b: Option<f64>,
    /// Set when some frequency difference lies in `(tol, 10 tol)`: the
    /// clustering decision is then sensitive to the tolerance.
    pub near_degenerate: bool,
    pub cluster_tol: f64,
}

impl BohrDecomposition {
    fn freq_index(&self, mu: f64, nu: f64) -> usize {
        let f = mu - nu;
        let mut best = 0;
        let mut bestd = f64::INFINITY;
        for (k, &w) in self.frequencies.iter().enumerate() {
            let d = (w - f).abs();
            if d < bestd {
                bestd = d;
                best = k;
            }
        }
        best
    }
}

fn cluster(values: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for &i in &idx {
        match out.last_mut() {
            Some((rep, members)) if (values[i] - *rep).abs() <= tol => {
                // running mean keeps clusters centered
                let n = members.len() as f64;
                *rep = (*rep * n + values[i]) / (n + 1.0);
                members.push(i);
            }
            _ => out.push((values[i], std::vec![i])),
        }
    }
    out
}

/// Cluster the spectrum of a self-adjoint `h_p` and assemble projections,
/// frequencies and the gap `b`.
pub fn bohr_decompose(h_p: &Operator, cluster_tol: f64) -> Result<BohrDecomposition> {
    let dev = h_p.hermiticity_deviation();
    if dev > 1e-10 * h_p.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { what: "H_P in bohr_decompose", deviation: dev });
    }
    let (vals, vecs) = h_p.mat().eigh(UPLO::Lower)?;
    let d = h_p.dim();
    let clusters = cluster(vals.as_slice().unwrap(), cluster_tol);
    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for (rep, members) in &clusters {
        eigenvalues.push(*rep);
        let mut p: CMat = ndarray::Array2::zeros((d, d));
        for &m in members {
            let col = vecs.column(m);
            for i in 0..d {
                for j in 0..d {
                    p[[i, j]] += col[i] * col[j].conj();
                }
            }
        }
        projections.push(Operator::new(h_p.space(), p)?);
    }

    let mut raw_freqs = Vec::new();
    for &mu in &eigenvalues {
        for &nu in &eigenvalues {
            raw_freqs.push(mu - nu);
        }
    }
    let fclusters = cluster(&raw_freqs, cluster_tol);
    let frequencies: Vec<f64> = fclusters.iter().map(|(rep, _)| *rep).collect();

    let mut b = None;
    let mut near = false;
    for i in 0..frequencies.len() {
        for j in (i + 1)..frequencies.len() {
            let gap = (frequencies[j] - frequencies[i]).abs();
            if gap > cluster_tol && gap < 10.0 * cluster_tol {
                near = true;
            }
            if gap > cluster_tol {
                b = Some(b.map_or(gap, |cur: f64| cur.min(gap)));
            }
        }
    }
    Ok(BohrDecomposition {
        eigenvalues,
        projections,
        frequencies,
        b,
        near_degenerate: near,
        cluster_tol,
    })
}

/// Default clustering tolerance for a given `H_P`.
pub fn default_bohr_tol(h_p: &Operator) -> f64 {
    1e-8 * h_p.op_norm().max(1.0)
}

/// Pinching `sum_mu P_mu X P_mu`; the time average of `X` under the
/// coherent group.  Idempotent.
pub fn sharp_operator(x: &Operator, bohr: &BohrDecomposition) -> Operator {
    let mut out = Operator::zeros(x.space());
    for p in &bohr.projections {
        out = out.add(&p.matmul(x).matmul(p));
    }
    out
}

/// Frequency-matched double sum
/// `T# = sum delta_{(nu-mu)-(nu'-mu')} Q_{mu nu} T Q_{mu' nu'}` with
/// `Q_{mu nu}(X) = P_mu X P_nu`.
pub fn sharp_superop(t: &SuperOperator, bohr: &BohrDecomposition) -> SuperOperator {
    assert!(t.is_square(), "sharp_superop expects a square superoperator");
    let n = bohr.eigenvalues.len();
    let mut out = SuperOperator::zeros(t.domain(), t.codomain());
    for mu in 0..n {
        for nu in 0..n {
            let f_out = bohr.freq_index(bohr.eigenvalues[nu], bohr.eigenvalues[mu]);
            let q_out = SuperOperator::sandwich(&bohr.projections[mu], &bohr.projections[nu]);
            for mup in 0..n {
                for nup in 0..n {
                    let f_in = bohr.freq_index(bohr.eigenvalues[nup], bohr.eigenvalues[mup]);
                    if f_in != f_out {
                        continue;
                    }
                    let q_in = SuperOperator::sandwich(&bohr.projections[mup], &bohr.projections[nup]);
                    out = out.add(&q_out.compose(t).compose(&q_in));
                }
            }
        }
    }
    out
}

/// Frequency components `Z_omega = sum_{mu - mu' = omega} P_mu' Z P_mu` of an
/// operator, one per Bohr frequency, zero components dropped.
pub fn frequency_components(z: &Operator, bohr: &BohrDecomposition) -> Vec<(f64, Operator)> {
    let n = bohr.eigenvalues.len();
    let mut parts: Vec<Operator> = bohr.frequencies.iter().map(|_| Operator::zeros(z.space())).collect();
    for mu in 0..n {
        for mup in 0..n {
            let f = bohr.freq_index(bohr.eigenvalues[mu], bohr.eigenvalues[mup]);
            let term = bohr.projections[mup].matmul(z).matmul(&bohr.projections[mu]);
            parts[f] = parts[f].add(&term);
        }
    }
    bohr.frequencies
        .iter()
        .cloned()
        .zip(parts)
        .filter(|(_, p)| p.max_abs() > 1e-14)
        .collect()
}

/// Lindblad form of the averaged dissipator: jumps `V_{j,omega}` over all
/// original jumps and Bohr frequencies, plus the pinched Hamiltonian part.
pub fn sharp_lindblad_form(dp_lindblad: &LindbladSpec, bohr: &BohrDecomposition) -> Result<LindbladSpec> {
    let mut jumps = Vec::new();
    for v in dp_lindblad.jumps() {
        for (_, vw) in frequency_components(v, bohr) {
            jumps.push(vw);
        }
    }
    let h0 = sharp_operator(dp_lindblad.hamiltonian_part(), bohr);
    LindbladSpec::new(dp_lindblad.space(), jumps, h0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::{pauli, ONE, ZERO};
    use num_complex::Complex64;
    use crate::space::SpaceTag;
    use ndarray::array;

    fn opb(m: CMat) -> Operator {
        Operator::new(SpaceTag::b(2, 2), m).unwrap()
    }

    #[test]
    fn sigma2_spectrum_and_frequencies() {
        let h = opb(pauli(2));
        let bohr = bohr_decompose(&h, 1e-8).unwrap();
        assert_eq!(bohr.eigenvalues.len(), 2);
        assert!((bohr.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((bohr.eigenvalues[1] - 1.0).abs() < 1e-12);
        assert_eq!(bohr.frequencies.len(), 3);
        assert!((bohr.b.unwrap() - 2.0).abs() < 1e-12);
        // projections (1 +- sigma2)/2
        let p1 = &bohr.projections[1];
        let expect = (pauli(0) + pauli(2)).mapv(|z| z * Complex64::new(0.5, 0.0));
        assert!((p1.mat() - &expect).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn three_level_frequencies() {
        let h = Operator::new(
            SpaceTag::b(1, 3),
            array![
                [ZERO, ZERO, ZERO],
                [ZERO, ONE, ZERO],
                [ZERO, ZERO, 3.0 * ONE]
            ],
        )
        .unwrap();
        let bohr = bohr_decompose(&h, 1e-8).unwrap();
        let freqs: Vec<i64> = bohr.frequencies.iter().map(|f| f.round() as i64).collect();
        assert_eq!(freqs, std::vec![-3, -2, -1, 0, 1, 2, 3]);
        assert!((bohr.b.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pinching_is_idempotent_and_kills_offdiagonal() {
        let h = opb(pauli(2));
        let bohr = bohr_decompose(&h, 1e-8).unwrap();
        // sigma1 is purely off-diagonal in the sigma2 eigenbasis
        let x = opb(pauli(1));
        assert!(sharp_operator(&x, &bohr).max_abs() < 1e-12);
        // commuting operators are fixed
        let y = opb(pauli(2));
        assert!(sharp_operator(&y, &bohr).sub(&y).max_abs() < 1e-12);
        let z = opb(array![[ONE, 0.3 * ONE], [0.3 * ONE, -ONE]]);
        let s1 = sharp_operator(&z, &bohr);
        let s2 = sharp_operator(&s1, &bohr);
        assert!(s2.sub(&s1).max_abs() < 1e-13);
    }

    #[test]
    fn degenerate_spectrum_averages_to_identity() {
        let h = opb(pauli(0));
        let bohr = bohr_decompose(&h, 1e-8).unwrap();
        assert!(bohr.b.is_none());
        let t = SuperOperator::sandwich(&opb(pauli(1)), &opb(pauli(3)));
        let sh = sharp_superop(&t, &bohr);
        assert!(sh.distance_max(&t) < 1e-12);
    }
}
