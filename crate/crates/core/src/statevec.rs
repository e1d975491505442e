//! Dense multi-qudit state vectors and density matrices.
//!
//! A [`PureState`] stores one complex amplitude per basis state of an ordered
//! list of qudit subsystems. Subsystem 0 is the *most significant* digit of
//! the mixed-radix basis index, so a ket written `|1101⟩` maps onto digits
//! left-to-right. All values are immutable after construction; operations
//! return new states.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

pub type C64 = Complex64;

/// Tolerance for normalization and unitarity checks.
pub const NORM_TOL: f64 = 1e-9;
/// Eigenvalue floor below which a density matrix is rejected as non-PSD.
pub const PSD_TOL: f64 = 1e-7;
/// Measurement outcomes with probability at or below this are dropped.
pub const PROB_FLOOR: f64 = 1e-12;
/// Hard cap on the dense representation.
pub const MAX_AMPS: usize = 1_000_000;

const SCHEMA_VERSION: u32 = 1;

/// Per-subsystem strides for mixed-radix indexing (subsystem 0 most
/// significant).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut s = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Mixed-radix encode: digits (one per subsystem) to a flat index.
pub fn encode_digits(dims: &[usize], digits: &[usize]) -> Result<usize> {
    if dims.len() != digits.len() {
        return Err(Error::dims(format!(
            "{} digits for {} subsystems",
            digits.len(),
            dims.len()
        )));
    }
    let mut idx = 0usize;
    for (&d, &dig) in dims.iter().zip(digits) {
        if dig >= d {
            return Err(Error::arg(format!("digit {dig} out of range for dimension {d}")));
        }
        idx = idx * d + dig;
    }
    Ok(idx)
}

/// Mixed-radix decode: flat index to per-subsystem digits.
pub fn decode_index(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut digits = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        digits[i] = index % dims[i];
        index /= dims[i];
    }
    digits
}

fn product_dim(dims: &[usize]) -> Result<usize> {
    let mut total = 1usize;
    for &d in dims {
        if d == 0 {
            return Err(Error::arg("subsystem dimension 0"));
        }
        total = total
            .checked_mul(d)
            .ok_or(Error::TooLarge(usize::MAX, MAX_AMPS))?;
        if total > MAX_AMPS {
            return Err(Error::TooLarge(total, MAX_AMPS));
        }
    }
    Ok(total)
}

fn validate_targets(n: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::IndexOutOfRange { index: t, count: n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateIndex(t));
        }
    }
    Ok(())
}

/// Flat offsets contributed by the target subsystems, indexed by the
/// mixed-radix position over the target dims (in target order).
fn target_offsets(dims: &[usize], targets: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let m: usize = tdims.iter().product();
    (0..m)
        .map(|tpos| {
            decode_index(&tdims, tpos)
                .iter()
                .zip(targets)
                .map(|(&dig, &t)| dig * st[t])
                .sum()
        })
        .collect()
}

/// Flat base offsets of every configuration of the non-target subsystems, in
/// ascending mixed-radix order over those subsystems (original order kept).
fn complement_bases(dims: &[usize], targets: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let others: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let odims: Vec<usize> = others.iter().map(|&i| dims[i]).collect();
    let count: usize = odims.iter().product();
    (0..count)
        .map(|opos| {
            decode_index(&odims, opos)
                .iter()
                .zip(&others)
                .map(|(&dig, &o)| dig * st[o])
                .sum()
        })
        .collect()
}

/// Label of the generalized Bell state family: dimension `d`, phase index
/// `k`, shift index `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedBellLabel {
    pub d: usize,
    pub k: usize,
    pub l: usize,
}

impl GeneralizedBellLabel {
    pub fn new(d: usize, k: usize, l: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::arg(format!("generalized Bell dimension d = {d} < 2")));
        }
        if k >= d || l >= d {
            return Err(Error::arg(format!("label indices (k={k}, l={l}) must lie in [0,{d})")));
        }
        Ok(Self { d, k, l })
    }
}

impl std::fmt::Display for GeneralizedBellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "psi[{},{}](d={})", self.k, self.l, self.d)
    }
}

/// A pure multi-qudit state: subsystem dimensions plus a unit-norm complex
/// amplitude vector of length `∏ dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl PureState {
    /// Build a state from raw parts, checking length and normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let total = product_dim(&dims)?;
        if amps.len() != total {
            return Err(Error::dims(format!(
                "amplitude vector length {} != product of dims {}",
                amps.len(),
                total
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = product_dim(&dims)?;
        let idx = encode_digits(&dims, digits)?;
        let mut amps = vec![C64::new(0.0, 0.0); total];
        amps[idx] = C64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|² — overlap fidelity of two pure states.
    pub fn fidelity_pure(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Entrywise equality within `tol`.
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        self.dims == other.dims
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality modulo one global phase, within `tol` entrywise after the
    /// phase is fixed on the largest amplitude of `other`.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        if self.dims != other.dims {
            return false;
        }
        let Some((i, _)) = other
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        else {
            return false;
        };
        if other.amps[i].norm() <= tol {
            return self.approx_eq(other, tol);
        }
        let phase = self.amps[i] / other.amps[i];
        if (phase.norm() - 1.0).abs() > 1e-6 {
            return false;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a - phase * b).norm() <= tol)
    }

    /// Tensor product of the listed states, dims concatenated in order.
    pub fn tensor_all(states: &[&PureState]) -> Result<PureState> {
        if states.is_empty() {
            return Err(Error::arg("tensor of an empty list"));
        }
        let mut dims: Vec<usize> = Vec::new();
        for s in states {
            dims.extend_from_slice(&s.dims);
        }
        let total = product_dim(&dims)?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for s in states {
            let mut next = Vec::with_capacity(amps.len() * s.amps.len());
            for a in &amps {
                for b in &s.amps {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        debug_assert_eq!(amps.len(), total);
        Ok(PureState { dims, amps })
    }

    /// Apply the unitary `u` to the listed subsystems (first target is the
    /// most significant digit of `u`'s index space); all others untouched.
    pub fn apply_unitary(&self, u: &DMatrix<C64>, targets: &[usize]) -> Result<PureState> {
        validate_targets(self.dims.len(), targets)?;
        let m: usize = targets.iter().map(|&t| self.dims[t]).product();
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::dims(format!(
                "operator is {}x{} but target subsystems span dimension {m}",
                u.nrows(),
                u.ncols()
            )));
        }
        let dev = linalg::unitarity_deviation(u);
        if dev > NORM_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(self.apply_operator_unchecked(u, targets))
    }

    pub(crate) fn apply_operator_unchecked(&self, u: &DMatrix<C64>, targets: &[usize]) -> PureState {
        let toffsets = target_offsets(&self.dims, targets);
        let bases = complement_bases(&self.dims, targets);
        let m = toffsets.len();
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        let mut gathered = vec![C64::new(0.0, 0.0); m];
        for &base in &bases {
            for (j, &off) in toffsets.iter().enumerate() {
                gathered[j] = self.amps[base + off];
            }
            for (r, &off_r) in toffsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (c, g) in gathered.iter().enumerate() {
                    acc += u[(r, c)] * g;
                }
                out[base + off_r] = acc;
            }
        }
        PureState {
            dims: self.dims.clone(),
            amps: out,
        }
    }

    /// Apply a basis permutation on the listed subsystems:
    /// `perm[input] = output` over the targets' combined mixed-radix index.
    pub(crate) fn apply_permutation(&self, perm: &[usize], targets: &[usize]) -> PureState {
        let toffsets = target_offsets(&self.dims, targets);
        let bases = complement_bases(&self.dims, targets);
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for &base in &bases {
            for (j, &off) in toffsets.iter().enumerate() {
                out[base + toffsets[perm[j]]] = self.amps[base + off];
            }
        }
        PureState {
            dims: self.dims.clone(),
            amps: out,
        }
    }

    /// Projective computational-basis measurement of the listed subsystems,
    /// fully enumerated: one record per outcome with probability above
    /// [`PROB_FLOOR`], ordered by outcome digits ascending. Residuals are
    /// normalized and keep their branch phase, so summing
    /// `√prob · |outcome⟩ ⊗ residual` over the records reconstructs the
    /// input state exactly.
    pub fn measure_enumerate(&self, targets: &[usize]) -> Result<Vec<MeasurementRecord>> {
        if targets.is_empty() {
            return Err(Error::arg("measurement needs at least one target subsystem"));
        }
        validate_targets(self.dims.len(), targets)?;
        let tdims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        let odims: Vec<usize> = (0..self.dims.len())
            .filter(|i| !targets.contains(i))
            .map(|i| self.dims[i])
            .collect();
        let toffsets = target_offsets(&self.dims, targets);
        let bases = complement_bases(&self.dims, targets);
        let mut records = Vec::new();
        for (tpos, &toff) in toffsets.iter().enumerate() {
            let mut residual: Vec<C64> = Vec::with_capacity(bases.len());
            let mut prob = 0.0f64;
            for &base in &bases {
                let a = self.amps[base + toff];
                prob += a.norm_sqr();
                residual.push(a);
            }
            if prob > PROB_FLOOR {
                let inv = 1.0 / prob.sqrt();
                for a in &mut residual {
                    *a *= inv;
                }
                records.push(MeasurementRecord {
                    measured: targets.to_vec(),
                    outcome: decode_index(&tdims, tpos),
                    prob,
                    residual: PureState {
                        dims: odims.clone(),
                        amps: residual,
                    },
                });
            }
        }
        Ok(records)
    }

    /// Sample a single measurement outcome (Born rule) using the given RNG.
    pub fn measure_sample<R: Rng>(
        &self,
        targets: &[usize],
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        let mut records = self.measure_enumerate(targets)?;
        let weights: Vec<f64> = records.iter().map(|r| r.prob).collect();
        let widx = WeightedIndex::new(&weights)
            .map_err(|e| Error::arg(format!("bad outcome distribution: {e}")))?;
        Ok(records.swap_remove(widx.sample(rng)))
    }

    /// Reproducible multinomial sample of all subsystems in the
    /// computational basis: a histogram of basis labels, counts summing to
    /// `shots`.
    pub fn sample_shots(&self, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
        if shots < 1 {
            return Err(Error::arg("shots must be at least 1"));
        }
        let weights: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        let widx = WeightedIndex::new(&weights)
            .map_err(|e| Error::arg(format!("bad amplitude distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = BTreeMap::new();
        for _ in 0..shots {
            let idx = widx.sample(&mut rng);
            *hist.entry(self.basis_label(idx)).or_insert(0u64) += 1;
        }
        Ok(hist)
    }

    /// Human/machine-readable label of a basis index: digits concatenated
    /// (comma-separated once any subsystem dimension exceeds 10).
    pub fn basis_label(&self, index: usize) -> String {
        let digits = decode_index(&self.dims, index);
        let sep = if self.dims.iter().any(|&d| d > 10) { "," } else { "" };
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// |ψ⟩⟨ψ| as a dense density matrix.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let d = self.dim();
        if d * d > MAX_AMPS {
            return Err(Error::TooLarge(d * d, MAX_AMPS));
        }
        let mat = DMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        Ok(DensityMatrix {
            dims: self.dims.clone(),
            mat,
        })
    }

    /// Reduced density matrix on `keep` (in the given order), computed
    /// directly from the amplitudes without forming the full |ψ⟩⟨ψ|.
    pub fn reduced_density_matrix(&self, keep: &[usize]) -> Result<DensityMatrix> {
        validate_targets(self.dims.len(), keep)?;
        if keep.is_empty() {
            return Err(Error::arg("keep set must be non-empty"));
        }
        let koffsets = target_offsets(&self.dims, keep);
        let bases = complement_bases(&self.dims, keep);
        let m = koffsets.len();
        let mut mat = DMatrix::<C64>::zeros(m, m);
        for &base in &bases {
            for (i, &ki) in koffsets.iter().enumerate() {
                let ai = self.amps[base + ki];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, &kj) in koffsets.iter().enumerate() {
                    mat[(i, j)] += ai * self.amps[base + kj].conj();
                }
            }
        }
        Ok(DensityMatrix {
            dims: keep.iter().map(|&i| self.dims[i]).collect(),
            mat,
        })
    }
}

/// Generalized Bell state `(1/√d) Σ_m exp(2πi·mk/d) |m⟩|m−l mod d⟩` on two
/// d-dimensional subsystems.
pub fn make_generalized_bell(label: GeneralizedBellLabel) -> Result<PureState> {
    let GeneralizedBellLabel { d, k, l } = label;
    if d < 2 {
        return Err(Error::arg(format!("generalized Bell dimension d = {d} < 2")));
    }
    if k >= d || l >= d {
        return Err(Error::arg(format!("label indices (k={k}, l={l}) must lie in [0,{d})")));
    }
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    let inv = 1.0 / (d as f64).sqrt();
    for m in 0..d {
        let phase = 2.0 * std::f64::consts::PI * (m * k) as f64 / d as f64;
        amps[m * d + (m + d - l % d) % d] = C64::from_polar(inv, phase);
    }
    PureState::new(vec![d, d], amps)
}

/// Two-qubit superposition `a|01⟩ + b|10⟩`, or `a|00⟩ + b|11⟩` when
/// `flipped`. Rejects non-normalized `(a, b)`.
pub fn make_pair(a: C64, b: C64, flipped: bool) -> Result<PureState> {
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let zero = C64::new(0.0, 0.0);
    let amps = if flipped {
        vec![a, zero, zero, b]
    } else {
        vec![zero, a, b, zero]
    };
    PureState::new(vec![2, 2], amps)
}

/// n-party GHZ state `(1/√d) Σ_m |m⟩^⊗n`.
pub fn make_ghz(d: usize, n: usize) -> Result<PureState> {
    if d < 2 || n < 2 {
        return Err(Error::arg(format!("GHZ requires d ≥ 2 and n ≥ 2, got d={d}, n={n}")));
    }
    let dims = vec![d; n];
    let total = product_dim(&dims)?;
    let mut amps = vec![C64::new(0.0, 0.0); total];
    let inv = 1.0 / (d as f64).sqrt();
    for m in 0..d {
        let mut idx = 0usize;
        for _ in 0..n {
            idx = idx * d + m;
        }
        amps[idx] = C64::new(inv, 0.0);
    }
    PureState::new(dims, amps)
}

/// Tensor product of a list of states (free-function form of
/// [`PureState::tensor_all`]).
pub fn tensor(states: &[&PureState]) -> Result<PureState> {
    PureState::tensor_all(states)
}

/// One projective-measurement outcome: which subsystems were measured, the
/// outcome digits, the outcome probability, and the normalized residual
/// state on the unmeasured subsystems (branch phase retained).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub measured: Vec<usize>,
    pub outcome: Vec<usize>,
    pub prob: f64,
    pub residual: PureState,
}

/// Hermitian, trace-one, PSD (within tolerance) operator on a multi-qudit
/// space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    /// Build and validate: Hermitian within 1e-9 entrywise, trace within
    /// 1e-9 of one, minimum eigenvalue ≥ −1e-7.
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let total = product_dim(&dims)?;
        if mat.nrows() != total || mat.ncols() != total {
            return Err(Error::dims(format!(
                "matrix is {}x{} but dims span {total}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dm = Self { dims, mat };
        dm.validate()?;
        Ok(dm)
    }

    /// Build without the PSD/trace checks. Intended for estimators (e.g.
    /// linear-inversion tomography) whose output may violate positivity.
    pub fn from_parts_unchecked(dims: Vec<usize>, mat: DMatrix<C64>) -> Self {
        Self { dims, mat }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.mat.nrows();
        for i in 0..n {
            for j in i..n {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > NORM_TOL {
                    return Err(Error::arg(format!(
                        "not Hermitian at entry ({i},{j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::arg(format!("trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::arg(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.mat)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// Maximally mixed state `I/d ⊗ ... ⊗ I/d` over the given dims.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = product_dim(&dims)?;
        let mat = DMatrix::from_diagonal_element(total, total, C64::new(1.0 / total as f64, 0.0));
        Ok(Self { dims, mat })
    }

    /// Trace out everything except `keep` (result ordered as `keep`);
    /// trace is preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        validate_targets(self.dims.len(), keep)?;
        if keep.is_empty() {
            return Err(Error::arg("keep set must be non-empty"));
        }
        let koffsets = target_offsets(&self.dims, keep);
        let bases = complement_bases(&self.dims, keep);
        let m = koffsets.len();
        let mut mat = DMatrix::<C64>::zeros(m, m);
        for (i, &ki) in koffsets.iter().enumerate() {
            for (j, &kj) in koffsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &base in &bases {
                    acc += self.mat[(base + ki, base + kj)];
                }
                mat[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix {
            dims: keep.iter().map(|&i| self.dims[i]).collect(),
            mat,
        })
    }
}

// ---------------------------------------------------------------------------
// Serialization: versioned JSON documents with complex numbers as [re, im].
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    version: u32,
    dims: Vec<usize>,
    amps: Vec<(f64, f64)>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PureStateRepr {
            version: SCHEMA_VERSION,
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| (a.re, a.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PureStateRepr::deserialize(deserializer)?;
        if repr.version != SCHEMA_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported state schema version {}",
                repr.version
            )));
        }
        let amps = repr.amps.iter().map(|&(re, im)| C64::new(re, im)).collect();
        PureState::new(repr.dims, amps).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    version: u32,
    dims: Vec<usize>,
    mat: Vec<Vec<(f64, f64)>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.mat.nrows();
        let mat = (0..n)
            .map(|i| (0..n).map(|j| (self.mat[(i, j)].re, self.mat[(i, j)].im)).collect())
            .collect();
        DensityMatrixRepr {
            version: SCHEMA_VERSION,
            dims: self.dims.clone(),
            mat,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DensityMatrixRepr::deserialize(deserializer)?;
        if repr.version != SCHEMA_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported schema version {}",
                repr.version
            )));
        }
        let n = repr.mat.len();
        if repr.mat.iter().any(|row| row.len() != n) {
            return Err(D::Error::custom("density matrix rows are ragged"));
        }
        let mat = DMatrix::from_fn(n, n, |i, j| {
            let (re, im) = repr.mat[i][j];
            C64::new(re, im)
        });
        DensityMatrix::new(repr.dims, mat).map_err(D::Error::custom)
    }
}
