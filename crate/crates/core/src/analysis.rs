//! Entanglement measures, fidelity, depolarizing noise, and simulated
//! Pauli-basis state tomography.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::statevec::{C64, DensityMatrix, PureState};

/// Wootters concurrence of a two-qubit density matrix, in [0, 1]:
/// `max(0, λ₁ − λ₂ − λ₃ − λ₄)` where the λᵢ are the decreasing square roots
/// of the eigenvalues of `√ρ · ρ̃ · √ρ` and `ρ̃ = (Y⊗Y) ρ* (Y⊗Y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::dims(format!(
            "concurrence needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let yy = {
        let y = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        );
        y.kronecker(&y)
    };
    let conj = rho.matrix().map(|z| z.conj());
    let rho_tilde = &yy * conj * &yy;
    let sqrt_rho = linalg::hermitian_sqrt(rho.matrix());
    let m = &sqrt_rho * rho_tilde * &sqrt_rho;
    let mut lambdas: Vec<f64> = linalg::hermitian_eigenvalues(&m)
        .iter()
        .map(|&v| linalg::psd_sqrt_eigenvalue(v))
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Concurrence of a pure two-qubit state: `2 |ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀|`.
pub fn concurrence_pure(state: &PureState) -> Result<f64> {
    if state.dims() != [2, 2] {
        return Err(Error::dims(format!(
            "concurrence needs a two-qubit state, got dims {:?}",
            state.dims()
        )));
    }
    let a = state.amps();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// Von Neumann entropy of a density matrix in bits, with eigenvalues at or
/// below 1e-12 contributing zero.
pub fn von_neumann_entropy_bits(rho: &DensityMatrix) -> f64 {
    linalg::hermitian_eigenvalues(rho.matrix())
        .iter()
        .filter(|&&v| v > 1e-12)
        .map(|&v| -v * v.log2())
        .sum()
}

/// Entanglement entropy (bits) of a pure state across the given cut: the
/// entropy of the reduced state on `cut`. The cut must be a proper,
/// non-empty subset of the subsystems.
pub fn entanglement_entropy(state: &PureState, cut: &[usize]) -> Result<f64> {
    if cut.is_empty() || cut.len() >= state.num_subsystems() {
        return Err(Error::arg(format!(
            "cut must be a proper non-empty subset, got {} of {} subsystems",
            cut.len(),
            state.num_subsystems()
        )));
    }
    let reduced = state.reduced_density_matrix(cut)?;
    Ok(von_neumann_entropy_bits(&reduced))
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, in [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::dims(format!(
            "fidelity dims mismatch: {:?} vs {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let sqrt_rho = linalg::hermitian_sqrt(rho.matrix());
    let m = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    let tr: f64 = linalg::hermitian_eigenvalues(&m)
        .iter()
        .map(|&v| linalg::psd_sqrt_eigenvalue(v))
        .sum();
    Ok((tr * tr).clamp(0.0, 1.0 + 1e-9))
}

/// Trace distance `(1/2) Tr |ρ − σ|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::dims("trace distance dims mismatch"));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5
        * linalg::hermitian_eigenvalues(&diff)
            .iter()
            .map(|v| v.abs())
            .sum::<f64>())
}

/// Depolarizing channel `(1−p) ρ + p I/D` for `p ∈ [0, 1]`.
pub fn depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("depolarizing probability {p} outside [0, 1]")));
    }
    let d = rho.dim();
    let mixed = C64::new(p / d as f64, 0.0);
    let keep = C64::new(1.0 - p, 0.0);
    let mut mat = rho.matrix().map(|z| keep * z);
    for i in 0..d {
        mat[(i, i)] += mixed;
    }
    DensityMatrix::new(rho.dims().to_vec(), mat)
}

/// Shot budget for simulated tomography: either exact expectation values or
/// a finite sampled number of shots per basis setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotPlan {
    Exact,
    Sampled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TomoMethod {
    LinearInversion,
    PsdProjected,
}

/// Output of simulated tomography. `min_eigenvalue`/`psd_ok` flag PSD
/// violations of the raw linear inversion.
#[derive(Debug, Clone, Serialize)]
pub struct TomographyResult {
    pub rho: DensityMatrix,
    pub basis_settings: usize,
    pub shots_per_setting: ShotPlan,
    pub method: TomoMethod,
    pub min_eigenvalue: f64,
    pub psd_ok: bool,
}

const PAULIS: [char; 3] = ['X', 'Y', 'Z'];

fn pauli_matrix(which: char) -> DMatrix<C64> {
    match which {
        'I' => DMatrix::from_diagonal_element(2, 2, C64::new(1.0, 0.0)),
        'X' => DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ),
        'Y' => DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ),
        'Z' => DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
        ),
        _ => unreachable!(),
    }
}

/// Basis-change unitary that maps the given Pauli's eigenbasis onto the
/// computational basis: measure σ after applying it.
fn basis_rotation(which: char) -> DMatrix<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match which {
        'Z' => DMatrix::from_diagonal_element(2, 2, C64::new(1.0, 0.0)),
        'X' => DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
        ),
        // H · S†
        'Y' => DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(h, 0.0), C64::new(0.0, -h), C64::new(h, 0.0), C64::new(0.0, h)],
        ),
        _ => unreachable!(),
    }
}

fn settings(n: usize) -> Vec<Vec<char>> {
    let mut out: Vec<Vec<char>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|s| {
                PAULIS.iter().map(move |&p| {
                    let mut t = s.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

/// Simulated quantum state tomography of a 2- or 3-qubit state.
///
/// Measures the state in all `3^n` Pauli basis settings (sampled shots per
/// setting, or exact outcome probabilities under [`ShotPlan::Exact`]) and
/// reconstructs by linear inversion over the Pauli expectation basis;
/// [`TomoMethod::PsdProjected`] additionally clips negative eigenvalues and
/// renormalizes the trace.
pub fn tomography(
    rho: &DensityMatrix,
    plan: ShotPlan,
    seed: u64,
    method: TomoMethod,
) -> Result<TomographyResult> {
    let n = rho.dims().len();
    if !(2..=3).contains(&n) || rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::dims(format!(
            "tomography supports 2 or 3 qubits, got dims {:?}",
            rho.dims()
        )));
    }
    if let ShotPlan::Sampled(0) = plan {
        return Err(Error::arg("shots per setting must be at least 1"));
    }
    let dim = rho.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_settings = settings(n);

    // frequency estimate per setting
    let mut freqs: Vec<Vec<f64>> = Vec::with_capacity(all_settings.len());
    for setting in &all_settings {
        let mut rot = DMatrix::from_row_slice(1, 1, &[C64::new(1.0, 0.0)]);
        for &p in setting {
            rot = rot.kronecker(&basis_rotation(p));
        }
        let rotated = &rot * rho.matrix() * rot.adjoint();
        let probs: Vec<f64> = (0..dim).map(|i| rotated[(i, i)].re.max(0.0)).collect();
        let freq = match plan {
            ShotPlan::Exact => probs,
            ShotPlan::Sampled(shots) => {
                let widx = WeightedIndex::new(&probs)
                    .map_err(|e| Error::arg(format!("bad outcome distribution: {e}")))?;
                let mut counts = vec![0u64; dim];
                for _ in 0..shots {
                    counts[widx.sample(&mut rng)] += 1;
                }
                counts.iter().map(|&c| c as f64 / shots as f64).collect()
            }
        };
        freqs.push(freq);
    }

    // expectation of the Z-parity over `support` for one setting's frequencies
    let parity_expect = |freq: &[f64], support: &[usize]| -> f64 {
        freq.iter()
            .enumerate()
            .map(|(z, &f)| {
                let mut sign = 1.0;
                for &q in support {
                    if (z >> (n - 1 - q)) & 1 == 1 {
                        sign = -sign;
                    }
                }
                sign * f
            })
            .sum()
    };

    // linear inversion: rho = (1/2^n) Σ_P <P> P, averaging each Pauli string
    // estimate over all compatible settings
    let mut mat = DMatrix::<C64>::zeros(dim, dim);
    let strings = {
        let mut out: Vec<Vec<char>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|s| {
                    ['I', 'X', 'Y', 'Z'].iter().map(move |&p| {
                        let mut t = s.clone();
                        t.push(p);
                        t
                    })
                })
                .collect();
        }
        out
    };
    for string in &strings {
        let support: Vec<usize> = (0..n).filter(|&q| string[q] != 'I').collect();
        let value = if support.is_empty() {
            1.0
        } else {
            let mut sum = 0.0;
            let mut count = 0usize;
            for (s_idx, setting) in all_settings.iter().enumerate() {
                if support.iter().all(|&q| setting[q] == string[q]) {
                    sum += parity_expect(&freqs[s_idx], &support);
                    count += 1;
                }
            }
            sum / count as f64
        };
        let mut pmat = DMatrix::from_row_slice(1, 1, &[C64::new(1.0, 0.0)]);
        for &p in string {
            pmat = pmat.kronecker(&pauli_matrix(p));
        }
        mat += pmat.map(|z| z * C64::new(value / dim as f64, 0.0));
    }

    // enforce exact hermiticity against floating-point drift
    let mat = (mat.clone() + mat.adjoint()).map(|z| z * C64::new(0.5, 0.0));
    let raw_min = linalg::hermitian_eigenvalues(&mat)
        .first()
        .copied()
        .unwrap_or(0.0);

    let (final_mat, min_eig) = match method {
        TomoMethod::LinearInversion => (mat, raw_min),
        TomoMethod::PsdProjected => {
            let (vals, vecs) = linalg::hermitian_eigen(&mat);
            let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            if total <= 0.0 {
                return Err(Error::arg("projected state has zero trace"));
            }
            let mut diag = DMatrix::<C64>::zeros(dim, dim);
            for (i, &v) in clipped.iter().enumerate() {
                diag[(i, i)] = C64::new(v / total, 0.0);
            }
            let projected = &vecs * diag * vecs.adjoint();
            let m = linalg::hermitian_eigenvalues(&projected)
                .first()
                .copied()
                .unwrap_or(0.0);
            (projected, m)
        }
    };

    Ok(TomographyResult {
        rho: DensityMatrix::from_parts_unchecked(rho.dims().to_vec(), final_mat),
        basis_settings: all_settings.len(),
        shots_per_setting: plan,
        method,
        min_eigenvalue: min_eig,
        psd_ok: min_eig >= -crate::statevec::PSD_TOL,
    })
}
