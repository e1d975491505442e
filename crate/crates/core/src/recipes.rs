//! Entanglement-generation pipelines.
//!
//! Each recipe prepares a product of locally entangled groups, walks the
//! first particle against the others as cyclic coins, measures particles 2
//! and 3 (subsystems 1 and 2), and returns every measurement branch together
//! with its closed-form target state and the fidelity to it. The circle
//! variants of these walks provably cannot entangle the target particles;
//! [`circle_search`] demonstrates that numerically with Haar-random coins.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{concurrence_pure, entanglement_entropy};
use crate::error::{Error, Result};
use crate::linalg;
use crate::statevec::{
    make_generalized_bell, make_ghz, make_pair, tensor, C64, GeneralizedBellLabel,
    MeasurementRecord, PureState, NORM_TOL,
};
use crate::walk::{build_coin, run_schedule, CoinKind, CoinOp, GraphKind, WalkSchedule};

/// Symbolic description of the state a recipe branch is expected to reach.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum TargetForm {
    /// A two-qubit superposition written in terms of the input amplitudes.
    TwoQubitPair { description: String },
    /// A generalized Bell state |ψ_{k,l}⟩.
    GeneralizedBell { d: usize, k: usize, l: usize },
    /// The n-party GHZ state.
    Ghz { d: usize, parties: usize },
    /// GHZ-class state Σ_{p,q} ω^{phase_index·(p+q)} |base+p+q, p, q⟩ / d.
    GhzLike { d: usize, base: usize, phase_index: usize },
    /// Closed form without a standard name.
    General { description: String },
}

impl std::fmt::Display for TargetForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetForm::TwoQubitPair { description } => write!(f, "{description}"),
            TargetForm::GeneralizedBell { d, k, l } => write!(f, "psi[{k},{l}](d={d})"),
            TargetForm::Ghz { d, parties } => write!(f, "ghz(d={d}, n={parties})"),
            TargetForm::GhzLike { d, base, phase_index } => {
                write!(f, "ghz-like(d={d}, base={base}, phase={phase_index})")
            }
            TargetForm::General { description } => write!(f, "{description}"),
        }
    }
}

/// One measurement branch of a recipe: the raw record, the particles the
/// recipe targets, the achieved state on them, and the fidelity to the
/// symbolic target.
#[derive(Debug, Clone, Serialize)]
pub struct RecipeOutcome {
    pub record: MeasurementRecord,
    pub target_particles: Vec<usize>,
    pub achieved: PureState,
    pub target_form: TargetForm,
    pub fidelity_to_target: f64,
}

/// Coin orderings for the three-step two-qubit walk on the 2-complete graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CoinVariant {
    Ihx,
    Ixh,
    Xxh,
    Xhx,
}

impl CoinVariant {
    pub fn coin_kinds(&self) -> [CoinKind; 3] {
        match self {
            CoinVariant::Ihx => [CoinKind::Identity, CoinKind::Hadamard, CoinKind::WeylX],
            CoinVariant::Ixh => [CoinKind::Identity, CoinKind::WeylX, CoinKind::Hadamard],
            CoinVariant::Xxh => [CoinKind::WeylX, CoinKind::WeylX, CoinKind::Hadamard],
            CoinVariant::Xhx => [CoinKind::WeylX, CoinKind::Hadamard, CoinKind::WeylX],
        }
    }
}

impl std::str::FromStr for CoinVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "IHX" => Ok(CoinVariant::Ihx),
            "IXH" => Ok(CoinVariant::Ixh),
            "XXH" => Ok(CoinVariant::Xxh),
            "XHX" => Ok(CoinVariant::Xhx),
            other => Err(Error::arg(format!(
                "unknown coin variant {other:?} (expected IHX, IXH, XXH or XHX)"
            ))),
        }
    }
}

impl std::fmt::Display for CoinVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CoinVariant::Ihx => "IHX",
            CoinVariant::Ixh => "IXH",
            CoinVariant::Xxh => "XXH",
            CoinVariant::Xhx => "XHX",
        };
        write!(f, "{s}")
    }
}

/// Input family for the two-qudit recipe: either a pair of identical
/// generalized Bell states, or two general diagonal-correlated states with
/// the given amplitude lists.
#[derive(Debug, Clone, PartialEq)]
pub enum QuditPairInput {
    Maximal(GeneralizedBellLabel),
    General { a: Vec<C64>, b: Vec<C64> },
}

/// A recipe specification: enough to build the initial state and schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum Recipe {
    Bell2Line { a: C64, b: C64 },
    Bell2Complete { a: C64, b: C64, variant: CoinVariant },
    QuditPair { d: usize, input: QuditPairInput },
    Ghz2Line { a: C64, b: C64 },
    Ghz2Complete { a: C64, b: C64 },
    GhzQudit { d: usize, label: GeneralizedBellLabel },
}

fn check_pair_norm(a: C64, b: C64) -> Result<()> {
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

fn check_amp_list(name: &str, v: &[C64], d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::dims(format!(
            "amplitude list {name} has {} entries for d = {d}",
            v.len()
        )));
    }
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Σ_i v_i |ii⟩ on two d-dimensional subsystems.
fn diagonal_pair(v: &[C64]) -> Result<PureState> {
    let d = v.len();
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for (i, &x) in v.iter().enumerate() {
        amps[i * d + i] = x;
    }
    PureState::new(vec![d, d], amps)
}

fn phase(d: usize, exponent: i64) -> C64 {
    let e = exponent.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / d as f64)
}

impl Recipe {
    pub fn validate(&self) -> Result<()> {
        match self {
            Recipe::Bell2Line { a, b }
            | Recipe::Ghz2Line { a, b }
            | Recipe::Ghz2Complete { a, b }
            | Recipe::Bell2Complete { a, b, .. } => check_pair_norm(*a, *b),
            Recipe::QuditPair { d, input } => {
                if *d < 2 {
                    return Err(Error::arg(format!("d = {d} < 2")));
                }
                match input {
                    QuditPairInput::Maximal(label) => {
                        if label.d != *d {
                            return Err(Error::dims(format!(
                                "label dimension {} != recipe dimension {d}",
                                label.d
                            )));
                        }
                        Ok(())
                    }
                    QuditPairInput::General { a, b } => {
                        check_amp_list("a", a, *d)?;
                        check_amp_list("b", b, *d)
                    }
                }
            }
            Recipe::GhzQudit { d, label } => {
                if *d < 2 {
                    return Err(Error::arg(format!("d = {d} < 2")));
                }
                if label.d != *d {
                    return Err(Error::dims(format!(
                        "label dimension {} != recipe dimension {d}",
                        label.d
                    )));
                }
                Ok(())
            }
        }
    }

    /// Initial state and walk schedule for this recipe. The walker is
    /// subsystem 0; the remaining subsystems are the coins in order.
    pub fn build(&self) -> Result<(PureState, WalkSchedule)> {
        self.validate()?;
        match *self {
            Recipe::Bell2Line { a, b } => {
                let pair = make_pair(a, b, false)?;
                let init = tensor(&[&pair, &pair])?;
                let sched = WalkSchedule::new(
                    GraphKind::Line { n: 2 },
                    0,
                    vec![1, 2, 3],
                    vec![build_coin(CoinKind::Hadamard, 2)?, build_coin(CoinKind::Identity, 2)?],
                    2,
                )?;
                Ok((init, sched))
            }
            Recipe::Bell2Complete { a, b, variant } => {
                let pair = make_pair(a, b, false)?;
                let init = tensor(&[&pair, &pair])?;
                let ops = variant
                    .coin_kinds()
                    .iter()
                    .map(|&k| build_coin(k, 2))
                    .collect::<Result<Vec<_>>>()?;
                let sched =
                    WalkSchedule::new(GraphKind::Complete { n: 2 }, 0, vec![1, 2, 3], ops, 3)?;
                Ok((init, sched))
            }
            Recipe::QuditPair { d, ref input } => {
                let (first, second) = match input {
                    QuditPairInput::Maximal(label) => {
                        let s = make_generalized_bell(*label)?;
                        (s.clone(), s)
                    }
                    QuditPairInput::General { a, b } => (diagonal_pair(a)?, diagonal_pair(b)?),
                };
                let init = tensor(&[&first, &second])?;
                let sched = WalkSchedule::new(
                    GraphKind::Complete { n: d },
                    0,
                    vec![1, 2, 3],
                    vec![
                        build_coin(CoinKind::Identity, d)?,
                        build_coin(CoinKind::Fourier, d)?,
                        build_coin(CoinKind::WeylX, d)?,
                    ],
                    3,
                )?;
                Ok((init, sched))
            }
            Recipe::Ghz2Line { a, b } => {
                let init = tensor(&[&make_pair(a, b, false)?, &make_ghz(2, 3)?])?;
                let sched = WalkSchedule::new(
                    GraphKind::Line { n: 2 },
                    0,
                    vec![1, 2, 3, 4],
                    vec![build_coin(CoinKind::Hadamard, 2)?, build_coin(CoinKind::WeylX, 2)?],
                    2,
                )?;
                Ok((init, sched))
            }
            Recipe::Ghz2Complete { a, b } => {
                let init = tensor(&[&make_pair(a, b, false)?, &make_ghz(2, 3)?])?;
                let sched = WalkSchedule::new(
                    GraphKind::Complete { n: 2 },
                    0,
                    vec![1, 2, 3, 4],
                    vec![
                        build_coin(CoinKind::Identity, 2)?,
                        build_coin(CoinKind::Identity, 2)?,
                        build_coin(CoinKind::Hadamard, 2)?,
                        build_coin(CoinKind::Hadamard, 2)?,
                    ],
                    4,
                )?;
                Ok((init, sched))
            }
            Recipe::GhzQudit { d, label } => {
                let init = tensor(&[&make_generalized_bell(label)?, &make_ghz(d, 3)?])?;
                let sched = WalkSchedule::new(
                    GraphKind::Complete { n: d },
                    0,
                    vec![1, 2, 3, 4],
                    vec![
                        build_coin(CoinKind::Identity, d)?,
                        build_coin(CoinKind::Identity, d)?,
                        build_coin(CoinKind::Fourier, d)?,
                        build_coin(CoinKind::Fourier, d)?,
                    ],
                    4,
                )?;
                Ok((init, sched))
            }
        }
    }

    /// Fully walked state before any measurement.
    pub fn final_state(&self) -> Result<PureState> {
        let (init, sched) = self.build()?;
        run_schedule(&init, &sched)
    }

    /// Subsystems measured by the recipe (particles 2 and 3).
    pub fn measured_subsystems(&self) -> [usize; 2] {
        [1, 2]
    }

    /// Target particles left entangled (0-based subsystem indices).
    pub fn target_subsystems(&self) -> Vec<usize> {
        match self {
            Recipe::Bell2Line { .. } | Recipe::Bell2Complete { .. } | Recipe::QuditPair { .. } => {
                vec![0, 3]
            }
            _ => vec![0, 3, 4],
        }
    }

    /// Closed-form target for a given measurement outcome.
    pub fn target_for_outcome(&self, outcome: &[usize]) -> Result<(TargetForm, PureState)> {
        let zero = C64::new(0.0, 0.0);
        match *self {
            Recipe::Bell2Line { a, b } => {
                let state = PureState::new(vec![2, 2], vec![b, zero, zero, a])?;
                Ok((
                    TargetForm::TwoQubitPair {
                        description: "a|11> + b|00>".into(),
                    },
                    state,
                ))
            }
            Recipe::Bell2Complete { a, b, variant } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let ch = C64::new(h, 0.0);
                let (description, amps) = match (variant, outcome[1]) {
                    (CoinVariant::Ihx, 0) => ("a|10> + b|01>", vec![zero, b, a, zero]),
                    (CoinVariant::Ihx, _) => ("a|00> - b|11>", vec![a, zero, zero, -b]),
                    (CoinVariant::Ixh, 0) => ("(|01> + |10>)/sqrt2", vec![zero, ch, ch, zero]),
                    (CoinVariant::Ixh, _) => ("(|00> - |11>)/sqrt2", vec![ch, zero, zero, -ch]),
                    (CoinVariant::Xxh, 0) => ("(|00> + |11>)/sqrt2", vec![ch, zero, zero, ch]),
                    (CoinVariant::Xxh, _) => ("(|10> - |01>)/sqrt2", vec![zero, -ch, ch, zero]),
                    (CoinVariant::Xhx, 0) => ("a|00> + b|11>", vec![a, zero, zero, b]),
                    (CoinVariant::Xhx, _) => ("a|10> - b|01>", vec![zero, -b, a, zero]),
                };
                Ok((
                    TargetForm::TwoQubitPair {
                        description: description.into(),
                    },
                    PureState::new(vec![2, 2], amps)?,
                ))
            }
            Recipe::QuditPair { d, ref input } => match input {
                QuditPairInput::Maximal(label) => {
                    let (form, state) = qudit_pair_phased_target(*label, outcome[0], outcome[1])?;
                    Ok((form, state))
                }
                QuditPairInput::General { b, .. } => {
                    let (i0, c0) = (outcome[0], outcome[1]);
                    let mut amps = vec![zero; d * d];
                    for (j, &bj) in b.iter().enumerate() {
                        let row = (2 * i0 + j + c0 + 1) % d;
                        let col = (j + 1) % d;
                        amps[row * d + col] += bj * phase(d, (j * c0) as i64);
                    }
                    let norm = amps.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                    for x in &mut amps {
                        *x /= norm;
                    }
                    Ok((
                        TargetForm::General {
                            description: format!(
                                "sum_j b_j w^(j*{c0}) |2*{i0}+j+{c0}+1, j+1> (mod {d})"
                            ),
                        },
                        PureState::new(vec![d, d], amps)?,
                    ))
                }
            },
            Recipe::Ghz2Line { .. } => Ok((TargetForm::Ghz { d: 2, parties: 3 }, make_ghz(2, 3)?)),
            Recipe::Ghz2Complete { .. } => {
                let half = C64::new(0.5, 0.0);
                let mut amps = vec![zero; 8];
                let base;
                if outcome[1] == 0 {
                    // (|100> + |001> + |010> + |111>)/2
                    for idx in [4usize, 1, 2, 7] {
                        amps[idx] = half;
                    }
                    base = 1;
                } else {
                    // (|000> - |101> - |110> + |011>)/2
                    amps[0] = half;
                    amps[3] = half;
                    amps[5] = -half;
                    amps[6] = -half;
                    base = 0;
                }
                Ok((
                    TargetForm::GhzLike {
                        d: 2,
                        base,
                        phase_index: outcome[1],
                    },
                    PureState::new(vec![2, 2, 2], amps)?,
                ))
            }
            Recipe::GhzQudit { d, label } => {
                let m = (outcome[0] + label.l) % d;
                let n = outcome[1];
                let x0 = (2 * m + 2 * d - label.l + n) % d;
                let mut amps = vec![zero; d * d * d];
                let inv = 1.0 / d as f64;
                for p in 0..d {
                    for q in 0..d {
                        let idx = ((x0 + p + q) % d) * d * d + p * d + q;
                        amps[idx] = phase(d, (n * (p + q)) as i64) * C64::new(inv, 0.0);
                    }
                }
                Ok((
                    TargetForm::GhzLike {
                        d,
                        base: x0,
                        phase_index: n,
                    },
                    PureState::new(vec![d; 3], amps)?,
                ))
            }
        }
    }

    /// Run the full pipeline: walk, enumerate the two local measurements,
    /// attach targets and fidelities.
    pub fn run(&self) -> Result<Vec<RecipeOutcome>> {
        let final_state = self.final_state()?;
        let records = final_state.measure_enumerate(&self.measured_subsystems())?;
        let targets = self.target_subsystems();
        records
            .into_iter()
            .map(|record| {
                let (target_form, target) = self.target_for_outcome(&record.outcome)?;
                let fidelity = target.fidelity_pure(&record.residual);
                Ok(RecipeOutcome {
                    achieved: record.residual.clone(),
                    record,
                    target_particles: targets.clone(),
                    target_form,
                    fidelity_to_target: fidelity,
                })
            })
            .collect()
    }
}

/// Amplitude-exact target for the maximal two-qudit recipe: the reduced
/// state for outcome digits `(o2, o3)` is
/// `exp(2πi·m₀k/d) · exp(−2πi(2m₀+p₀−2l+1)(k+p₀)/d) · |ψ_{k+p₀, 2m₀+p₀−l}⟩`
/// with `m₀ = o2 + l`, `p₀ = o3`; the first factor is the measured branch's
/// own phase.
pub fn qudit_pair_phased_target(
    label: GeneralizedBellLabel,
    o2: usize,
    o3: usize,
) -> Result<(TargetForm, PureState)> {
    let GeneralizedBellLabel { d, k, l } = label;
    let m0 = (o2 + l) % d;
    let p0 = o3;
    let new_k = (k + p0) % d;
    let new_l = (2 * m0 + p0 + 2 * d - l) % d;
    let exponent = (m0 * k) as i64
        - (2 * m0 as i64 + p0 as i64 - 2 * l as i64 + 1) * (k as i64 + p0 as i64);
    let ph = phase(d, exponent);
    let bare = make_generalized_bell(GeneralizedBellLabel::new(d, new_k, new_l)?)?;
    let amps = bare.amps().iter().map(|&a| ph * a).collect();
    Ok((
        TargetForm::GeneralizedBell {
            d,
            k: new_k,
            l: new_l,
        },
        PureState::new(vec![d, d], amps)?,
    ))
}

// Free-function forms of the six pipelines.

pub fn bell_2line(a: C64, b: C64) -> Result<Vec<RecipeOutcome>> {
    Recipe::Bell2Line { a, b }.run()
}

pub fn bell_2complete(a: C64, b: C64, variant: CoinVariant) -> Result<Vec<RecipeOutcome>> {
    Recipe::Bell2Complete { a, b, variant }.run()
}

pub fn qudit_pair_dcomplete(d: usize, input: QuditPairInput) -> Result<Vec<RecipeOutcome>> {
    Recipe::QuditPair { d, input }.run()
}

pub fn ghz_2line(a: C64, b: C64) -> Result<Vec<RecipeOutcome>> {
    Recipe::Ghz2Line { a, b }.run()
}

pub fn ghz_2complete(a: C64, b: C64) -> Result<Vec<RecipeOutcome>> {
    Recipe::Ghz2Complete { a, b }.run()
}

pub fn ghz_qudit_dcomplete(d: usize, label: GeneralizedBellLabel) -> Result<Vec<RecipeOutcome>> {
    Recipe::GhzQudit { d, label }.run()
}

/// Which impossibility claim the circle search probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleCase {
    TwoQubit3Coins,
    Ghz4Coins,
}

/// Result of a randomized search for a coin tuple that would entangle the
/// target particles on the 2-circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleSearchReport {
    pub case: CircleCase,
    pub samples: u64,
    pub seed: u64,
    pub threshold: f64,
    /// Max over sampled coin tuples of the minimum-over-outcomes target
    /// entanglement (concurrence for the two-qubit case; minimum
    /// single-particle entropy normalized by log2(d) for the GHZ case).
    pub max_min_entanglement: f64,
    pub witness_found: bool,
}

/// Sample Haar-random coin tuples for the 2-circle walk (t = number of
/// coins, maximal a = b = 1/√2 inputs) and report the best
/// minimum-over-outcomes entanglement seen. The 2-circle shift acts on the
/// position alone, so every step is a local unitary and no sample can beat
/// the threshold; the search quantifies that claim without a symbolic proof.
pub fn circle_search(
    case: CircleCase,
    samples: u64,
    seed: u64,
    threshold: f64,
) -> Result<CircleSearchReport> {
    if samples < 1 {
        return Err(Error::arg("samples must be at least 1"));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::arg(format!("threshold {threshold} outside (0, 1]")));
    }
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let initial = match case {
        CircleCase::TwoQubit3Coins => {
            let pair = make_pair(h, h, false)?;
            tensor(&[&pair, &pair])?
        }
        CircleCase::Ghz4Coins => tensor(&[&make_pair(h, h, false)?, &make_ghz(2, 3)?])?,
    };
    let num_coins = match case {
        CircleCase::TwoQubit3Coins => 3,
        CircleCase::Ghz4Coins => 4,
    };
    let coins: Vec<usize> = (1..=num_coins).collect();

    let mut max_min: f64 = 0.0;
    for sample in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample + 1);
        let ops = (0..num_coins)
            .map(|_| CoinOp::custom(linalg::haar_unitary(2, &mut rng)))
            .collect::<Result<Vec<_>>>()?;
        let sched = WalkSchedule::new(GraphKind::Circle { n: 2 }, 0, coins.clone(), ops, num_coins)?;
        let fin = run_schedule(&initial, &sched)?;
        let mut min_ent = f64::INFINITY;
        for record in fin.measure_enumerate(&[1, 2])? {
            let ent = match case {
                CircleCase::TwoQubit3Coins => concurrence_pure(&record.residual)?,
                CircleCase::Ghz4Coins => {
                    let mut worst = f64::INFINITY;
                    for cut in 0..3 {
                        worst = worst.min(entanglement_entropy(&record.residual, &[cut])?);
                    }
                    worst // log2(2) = 1, already normalized
                }
            };
            min_ent = min_ent.min(ent);
        }
        if min_ent.is_finite() {
            max_min = max_min.max(min_ent);
        }
    }
    Ok(CircleSearchReport {
        case,
        samples,
        seed,
        threshold,
        max_min_entanglement: max_min,
        witness_found: max_min >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::concurrence;

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn amp_pairs() -> Vec<(C64, C64)> {
        vec![
            (c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0)),
            (c(1.0, 0.0), c(0.0, 0.0)),
            (c(0.6, 0.0), c(0.8, 0.0)),
        ]
    }

    #[test]
    fn bell_2line_balanced() {
        let outcomes = bell_2line(c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0)).unwrap();
        assert_eq!(outcomes.len(), 4);
        for o in &outcomes {
            assert!((o.record.prob - 0.25).abs() < 1e-12);
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            assert!((concurrence_pure(&o.achieved).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bell_2line_degenerate_and_partial() {
        let outcomes = bell_2line(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        for o in &outcomes {
            let expect = PureState::basis(vec![2, 2], &[1, 1]).unwrap();
            assert!(o.achieved.approx_eq_up_to_phase(&expect, 1e-9));
            assert!(concurrence_pure(&o.achieved).unwrap() < 1e-9);
        }

        let outcomes = bell_2line(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        for o in &outcomes {
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            // concurrence 2|ab| = 0.96, via both routes
            assert!((concurrence_pure(&o.achieved).unwrap() - 0.96).abs() < 1e-9);
            let rho = o.achieved.to_density_matrix().unwrap();
            assert!((concurrence(&rho).unwrap() - 0.96).abs() < 1e-9);
        }
    }

    #[test]
    fn bell_2line_residual_same_for_all_outcomes() {
        for (a, b) in amp_pairs() {
            let outcomes = bell_2line(a, b).unwrap();
            for pair in outcomes.windows(2) {
                assert!(
                    (pair[0].achieved.fidelity_pure(&pair[1].achieved) - 1.0).abs() < 1e-9
                );
            }
        }
    }

    #[test]
    fn bell_2complete_ihx_balanced() {
        let outcomes =
            bell_2complete(c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0), CoinVariant::Ihx).unwrap();
        assert_eq!(outcomes.len(), 4);
        let mut psi_plus = 0;
        let mut phi_minus = 0;
        for o in &outcomes {
            assert!((o.record.prob - 0.25).abs() < 1e-12);
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            assert!((concurrence_pure(&o.achieved).unwrap() - 1.0).abs() < 1e-9);
            let psi = PureState::new(
                vec![2, 2],
                vec![c(0.0, 0.0), c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0), c(0.0, 0.0)],
            )
            .unwrap();
            let phi = PureState::new(
                vec![2, 2],
                vec![c(INV_SQRT2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-INV_SQRT2, 0.0)],
            )
            .unwrap();
            if o.achieved.approx_eq_up_to_phase(&psi, 1e-9) {
                psi_plus += 1;
            } else if o.achieved.approx_eq_up_to_phase(&phi, 1e-9) {
                phi_minus += 1;
            }
        }
        assert_eq!((psi_plus, phi_minus), (2, 2));
    }

    #[test]
    fn bell_2complete_eight_joint_outcomes() {
        // measuring the target pair as well gives 8 outcomes at 1/8 each
        let recipe = Recipe::Bell2Complete {
            a: c(INV_SQRT2, 0.0),
            b: c(INV_SQRT2, 0.0),
            variant: CoinVariant::Ihx,
        };
        let fin = recipe.final_state().unwrap();
        let recs = fin.measure_enumerate(&[0, 1, 2, 3]).unwrap();
        assert_eq!(recs.len(), 8);
        for r in &recs {
            assert!((r.prob - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_2complete_degenerate() {
        let outcomes = bell_2complete(c(1.0, 0.0), c(0.0, 0.0), CoinVariant::Ihx).unwrap();
        // outcomes with first digit 0 carry probability |b|^2/2 = 0 and are
        // dropped; (1,0) and (1,1) remain at 1/2 each
        assert_eq!(outcomes.len(), 2);
        assert!(outcomes.iter().all(|o| o.record.outcome[0] == 1));
        for o in &outcomes {
            assert!((o.record.prob - 0.5).abs() < 1e-12);
            // residuals are product states: |10> or |00>
            assert!(concurrence_pure(&o.achieved).unwrap() < 1e-9);
            let expect = if o.record.outcome[1] == 0 {
                PureState::basis(vec![2, 2], &[1, 0]).unwrap()
            } else {
                PureState::basis(vec![2, 2], &[0, 0]).unwrap()
            };
            assert!(o.achieved.approx_eq_up_to_phase(&expect, 1e-9));
        }
    }

    #[test]
    fn bell_2complete_alternate_variants() {
        // closed-form targets frozen from the step-by-step substitution
        for variant in [CoinVariant::Ixh, CoinVariant::Xxh, CoinVariant::Xhx] {
            for (a, b) in amp_pairs() {
                let outcomes = bell_2complete(a, b, variant).unwrap();
                for o in &outcomes {
                    assert!(
                        (o.fidelity_to_target - 1.0).abs() < 1e-9,
                        "{variant} {:?} fidelity {}",
                        o.record.outcome,
                        o.fidelity_to_target
                    );
                }
            }
            // min-outcome concurrence 1 at a = b = 1/sqrt2
            let outcomes =
                bell_2complete(c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0), variant).unwrap();
            let min = outcomes
                .iter()
                .map(|o| concurrence_pure(&o.achieved).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!((min - 1.0).abs() < 1e-9, "{variant}");
        }
    }

    #[test]
    fn qudit_pair_d2_reduces_to_bell_generation() {
        let label = GeneralizedBellLabel::new(2, 0, 0).unwrap();
        let outcomes = qudit_pair_dcomplete(2, QuditPairInput::Maximal(label)).unwrap();
        assert_eq!(outcomes.len(), 4);
        for o in &outcomes {
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            assert!((concurrence_pure(&o.achieved).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn qudit_pair_d3_identity_outcome() {
        let label = GeneralizedBellLabel::new(3, 0, 0).unwrap();
        let outcomes = qudit_pair_dcomplete(3, QuditPairInput::Maximal(label)).unwrap();
        assert_eq!(outcomes.len(), 9);
        let o00 = outcomes
            .iter()
            .find(|o| o.record.outcome == vec![0, 0])
            .unwrap();
        // phase exp(-2pi i * 1 * 0 / 3) = 1, so the residual IS |psi_{0,0}>
        let expect = make_generalized_bell(label).unwrap();
        assert!(o00.achieved.approx_eq(&expect, 1e-9));
        assert!((o00.fidelity_to_target - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qudit_pair_phase_matches_amplitude_wise() {
        for d in [2usize, 3] {
            for k in 0..d {
                for l in 0..d {
                    let label = GeneralizedBellLabel::new(d, k, l).unwrap();
                    let outcomes =
                        qudit_pair_dcomplete(d, QuditPairInput::Maximal(label)).unwrap();
                    assert_eq!(outcomes.len(), d * d);
                    for o in &outcomes {
                        assert!((o.record.prob - 1.0 / (d * d) as f64).abs() < 1e-9);
                        let (_, target) =
                            qudit_pair_phased_target(label, o.record.outcome[0], o.record.outcome[1])
                                .unwrap();
                        assert!(
                            o.achieved.approx_eq(&target, 1e-9),
                            "d={d} k={k} l={l} outcome {:?}",
                            o.record.outcome
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn qudit_pair_general_input_schmidt_rank() {
        let a = vec![
            c(0.5f64.sqrt(), 0.0),
            c(0.3f64.sqrt(), 0.0),
            c(0.2f64.sqrt(), 0.0),
        ];
        let b = vec![c(1.0 / 3f64.sqrt(), 0.0); 3];
        let outcomes = qudit_pair_dcomplete(3, QuditPairInput::General { a, b }).unwrap();
        assert_eq!(outcomes.len(), 9);
        for o in &outcomes {
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            // Schmidt rank from the reduced state's spectrum
            let red = o.achieved.reduced_density_matrix(&[0]).unwrap();
            let rank = crate::linalg::hermitian_eigenvalues(red.matrix())
                .iter()
                .filter(|&&v| v > 1e-9)
                .count();
            assert_eq!(rank, 3, "outcome {:?}", o.record.outcome);
        }
    }

    #[test]
    fn ghz_2line_always_ghz() {
        for (a, b) in amp_pairs() {
            let outcomes = ghz_2line(a, b).unwrap();
            for o in &outcomes {
                assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            }
            // residual independent of outcome
            for pair in outcomes.windows(2) {
                assert!((pair[0].achieved.fidelity_pure(&pair[1].achieved) - 1.0).abs() < 1e-9);
            }
        }
        let balanced = ghz_2line(c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0)).unwrap();
        assert_eq!(balanced.len(), 4);
        for o in &balanced {
            assert!((o.record.prob - 0.25).abs() < 1e-12);
        }
        let degenerate = ghz_2line(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(degenerate.len(), 2);
        for o in &degenerate {
            assert!((o.record.prob - 0.5).abs() < 1e-12);
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ghz_2complete_ghz_like_residuals() {
        let outcomes = ghz_2complete(c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0)).unwrap();
        assert_eq!(outcomes.len(), 4);
        for o in &outcomes {
            assert!((o.record.prob - 0.25).abs() < 1e-12);
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
            for cut in 0..3 {
                let ent = entanglement_entropy(&o.achieved, &[cut]).unwrap();
                assert!((ent - 1.0).abs() < 1e-9);
            }
        }

        // a=1: only outcomes with first digit 1 survive, residuals stay
        // GHZ-like
        let degenerate = ghz_2complete(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(degenerate.len(), 2);
        for o in &degenerate {
            assert_eq!(o.record.outcome[0], 1);
            assert!((o.record.prob - 0.5).abs() < 1e-12);
            assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ghz_qudit_entropies() {
        for d in [2usize, 3] {
            let label = GeneralizedBellLabel::new(d, 0, 0).unwrap();
            let outcomes = ghz_qudit_dcomplete(d, label).unwrap();
            assert_eq!(outcomes.len(), d * d);
            let log2d = (d as f64).log2();
            let mut total = 0.0;
            for o in &outcomes {
                total += o.record.prob;
                assert!((o.achieved.norm() - 1.0).abs() < 1e-9);
                assert!((o.fidelity_to_target - 1.0).abs() < 1e-9);
                for cut in 0..3 {
                    let ent = entanglement_entropy(&o.achieved, &[cut]).unwrap();
                    assert!((ent - log2d).abs() < 1e-9, "d={d} cut={cut}");
                }
            }
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ghz_qudit_d3_identity_outcome_reduced_states() {
        // outcome (0,0) at k=l=0: residual Σ|p+q,p,q>/3 with I/3 marginals
        let label = GeneralizedBellLabel::new(3, 0, 0).unwrap();
        let outcomes = ghz_qudit_dcomplete(3, label).unwrap();
        let o00 = outcomes
            .iter()
            .find(|o| o.record.outcome == vec![0, 0])
            .unwrap();
        let mut amps = vec![c(0.0, 0.0); 27];
        for p in 0..3 {
            for q in 0..3 {
                amps[((p + q) % 3) * 9 + p * 3 + q] = c(1.0 / 3.0, 0.0);
            }
        }
        let expect = PureState::new(vec![3, 3, 3], amps).unwrap();
        assert!(o00.achieved.approx_eq_up_to_phase(&expect, 1e-9));
        for sub in 0..3 {
            let red = o00.achieved.reduced_density_matrix(&[sub]).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let e = if i == j { 1.0 / 3.0 } else { 0.0 };
                    assert!((red.matrix()[(i, j)] - c(e, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one_and_residuals_normalized() {
        let label3 = GeneralizedBellLabel::new(3, 1, 2).unwrap();
        let all: Vec<Vec<RecipeOutcome>> = vec![
            bell_2line(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
            bell_2complete(c(0.6, 0.0), c(0.0, 0.8), CoinVariant::Xhx).unwrap(),
            qudit_pair_dcomplete(3, QuditPairInput::Maximal(label3)).unwrap(),
            ghz_2line(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
            ghz_2complete(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
            ghz_qudit_dcomplete(3, label3).unwrap(),
        ];
        for outcomes in all {
            let total: f64 = outcomes.iter().map(|o| o.record.prob).sum();
            assert!((total - 1.0).abs() < 1e-9);
            for o in &outcomes {
                assert!((o.achieved.norm() - 1.0).abs() < 1e-9);
                assert!(o.fidelity_to_target <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn recipe_rejects_bad_input() {
        assert!(bell_2line(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!("IHQ".parse::<CoinVariant>().is_err());
        assert!("ixh".parse::<CoinVariant>().is_ok());
        let short = vec![c(1.0, 0.0)];
        assert!(
            qudit_pair_dcomplete(3, QuditPairInput::General { a: short.clone(), b: short })
                .is_err()
        );
    }

    #[test]
    fn circle_identity_coins_no_entanglement() {
        // with all coins = identity the evolution permutes positions only
        let h = c(INV_SQRT2, 0.0);
        let pair = make_pair(h, h, false).unwrap();
        let init = tensor(&[&pair, &pair]).unwrap();
        let ops = (0..3)
            .map(|_| build_coin(CoinKind::Identity, 2).unwrap())
            .collect();
        let sched =
            WalkSchedule::new(GraphKind::Circle { n: 2 }, 0, vec![1, 2, 3], ops, 3).unwrap();
        let fin = run_schedule(&init, &sched).unwrap();
        for r in fin.measure_enumerate(&[1, 2]).unwrap() {
            assert!(concurrence_pure(&r.residual).unwrap() < 1e-12);
        }
    }

    #[test]
    fn circle_search_small_runs() {
        let report = circle_search(CircleCase::TwoQubit3Coins, 25, 7, 0.99).unwrap();
        assert!(!report.witness_found);
        assert!(report.max_min_entanglement < 1e-9);

        let report2 = circle_search(CircleCase::TwoQubit3Coins, 25, 7, 0.99).unwrap();
        assert_eq!(
            report.max_min_entanglement.to_bits(),
            report2.max_min_entanglement.to_bits()
        );

        let ghz_report = circle_search(CircleCase::Ghz4Coins, 10, 7, 0.99).unwrap();
        assert!(!ghz_report.witness_found);
        assert!(ghz_report.max_min_entanglement < 1e-9);

        assert!(circle_search(CircleCase::Ghz4Coins, 0, 7, 0.99).is_err());
        assert!(circle_search(CircleCase::Ghz4Coins, 1, 7, 1.5).is_err());
    }
}
