//! Multiparty quantum secret sharing built on walk-based entanglement
//! swapping.
//!
//! The sender prepares one generalized Bell pair per party, arranged in a
//! ring so that adjacent parties share a pair. One protocol round either
//! checks every shared pair in a randomly announced mutually unbiased basis
//! (probability `q`), or transmits: the sender encodes a secret digit with
//! `U_i = X_d^i` on her half of the last pair, and a chain of three-step
//! walks (coins I, F, X_d) followed by two local measurements swaps the
//! entanglement along the ring until the last agent holds both halves of one
//! pair. The announced measurement digits plus that pair's label determine
//! the secret. `d` must be odd so the outcome-to-label map is a bijection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{
    make_generalized_bell, tensor, C64, GeneralizedBellLabel, PureState,
};
use crate::walk::{build_coin, run_schedule, CoinKind, GraphKind, WalkSchedule};

/// Protocol parameters. `d` must be odd (the decode map divides by 2 mod d);
/// `q` is the probability that a round is a channel check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QssConfig {
    pub d: usize,
    pub k: usize,
    pub l: usize,
    pub q: f64,
    pub parties: usize,
    pub seed: u64,
}

impl QssConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 3 || self.d.is_multiple_of(2) {
            return Err(Error::arg(format!("d must be odd and at least 3, got {}", self.d)));
        }
        if self.k >= self.d || self.l >= self.d {
            return Err(Error::arg(format!(
                "label indices (k={}, l={}) must lie in [0,{})",
                self.k, self.l, self.d
            )));
        }
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::arg(format!("check probability q={} outside [0,1)", self.q)));
        }
        if self.parties < 3 {
            return Err(Error::arg(format!("need at least 3 parties, got {}", self.parties)));
        }
        Ok(())
    }

    pub fn label(&self) -> Result<GeneralizedBellLabel> {
        GeneralizedBellLabel::new(self.d, self.k, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryStrategy {
    None,
    InterceptResendComputational,
}

/// Eavesdropper model: intercept-resend in the computational basis on the
/// in-transit qudit of one shared pair (`target_channel` is the 1-based pair
/// index along the ring).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adversary {
    pub strategy: AdversaryStrategy,
    pub target_channel: usize,
}

impl Adversary {
    pub fn none() -> Self {
        Self {
            strategy: AdversaryStrategy::None,
            target_channel: 0,
        }
    }

    pub fn intercept_resend(target_channel: usize) -> Self {
        Self {
            strategy: AdversaryStrategy::InterceptResendComputational,
            target_channel,
        }
    }

    fn validate(&self, parties: usize) -> Result<()> {
        if self.strategy == AdversaryStrategy::InterceptResendComputational
            && !(1..=parties).contains(&self.target_channel)
        {
            return Err(Error::arg(format!(
                "target channel {} outside 1..={parties}",
                self.target_channel
            )));
        }
        Ok(())
    }
}

/// Measurement basis for channel checks: computational, or the conjugate
/// Fourier family |ĩ⟩ = (1/√d) Σ_j exp(2πi·ij/d) |j⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckBasis {
    Computational,
    FourierTilde,
}

/// One channel check: for a pair labelled (k, l), the outcomes must satisfy
/// `v1 − v2 ≡ l (mod d)` in the computational basis and `v1 + v2 ≡ k (mod
/// d)` in the tilde basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub channel: usize,
    pub basis: CheckBasis,
    pub alice_outcome: usize,
    pub agent_outcome: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QssPhase {
    Check,
    Message,
}

/// Full record of one protocol round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QssTranscript {
    pub phase: QssPhase,
    pub check_results: Vec<CheckRecord>,
    /// Sender's announced digits from the first swap.
    pub alice_announcement: Option<(usize, usize)>,
    /// First agent's digits from the second swap.
    pub bob_outcomes: Option<(usize, usize)>,
    /// Swap digits beyond the second (empty for the 3-party protocol).
    pub extra_announcements: Vec<(usize, usize)>,
    /// Computational measurement of the final shared pair by the last agent.
    pub final_pair_outcome: Option<(usize, usize)>,
    pub decoded_secret: Option<usize>,
    pub true_secret: usize,
    pub aborted: bool,
    pub d: usize,
    pub parties: usize,
}

/// Apply `U_i = X_d^i` to the second qudit of a two-qudit pair; on
/// |ψ_{k,l}⟩ this yields |ψ_{k,l−i}⟩.
pub fn encode_secret(pair: &PureState, i: usize, d: usize) -> Result<PureState> {
    if pair.dims() != [d, d] {
        return Err(Error::dims(format!(
            "expected a two-qudit pair of dims [{d}, {d}], got {:?}",
            pair.dims()
        )));
    }
    if i >= d {
        return Err(Error::arg(format!("encoding index {i} outside [0,{d})")));
    }
    let x = build_coin(CoinKind::WeylX, d)?;
    let mut u = nalgebra::DMatrix::from_diagonal_element(d, d, C64::new(1.0, 0.0));
    for _ in 0..i {
        u = x.matrix() * u;
    }
    pair.apply_unitary(&u, &[1])
}

fn intercept_resend_pair(
    pair: &PureState,
    transit_subsystem: usize,
    rng: &mut impl Rng,
) -> Result<PureState> {
    let rec = pair.measure_sample(&[transit_subsystem], rng)?;
    let collapsed = PureState::basis(vec![pair.dims()[transit_subsystem]], &rec.outcome)?;
    if transit_subsystem == 0 {
        tensor(&[&collapsed, &rec.residual])
    } else {
        tensor(&[&rec.residual, &collapsed])
    }
}

fn measure_pair_in_basis(
    pair: &PureState,
    label: &GeneralizedBellLabel,
    basis: CheckBasis,
    channel: usize,
    rng: &mut impl Rng,
) -> Result<CheckRecord> {
    let d = label.d;
    let state = match basis {
        CheckBasis::Computational => pair.clone(),
        CheckBasis::FourierTilde => {
            let f = build_coin(CoinKind::Fourier, d)?;
            let f_dag = f.matrix().adjoint();
            pair.apply_unitary(&f_dag, &[0])?.apply_unitary(&f_dag, &[1])?
        }
    };
    let rec = state.measure_sample(&[0, 1], rng)?;
    let (v1, v2) = (rec.outcome[0], rec.outcome[1]);
    let pass = match basis {
        CheckBasis::Computational => (v1 + d - v2) % d == label.l,
        CheckBasis::FourierTilde => (v1 + v2) % d == label.k,
    };
    Ok(CheckRecord {
        channel,
        basis,
        alice_outcome: v1,
        agent_outcome: v2,
        pass,
    })
}

/// Measure both ends of a shared pair in the announced basis and test the
/// correlation implied by its label. The adversary, when active, first
/// measures the transmitted (second) qudit in the computational basis and
/// resends the collapsed state.
pub fn channel_check(
    pair: &PureState,
    label: &GeneralizedBellLabel,
    basis: CheckBasis,
    adversary: &Adversary,
    seed: u64,
) -> Result<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = if adversary.strategy == AdversaryStrategy::InterceptResendComputational {
        intercept_resend_pair(pair, 1, &mut rng)?
    } else {
        pair.clone()
    };
    measure_pair_in_basis(&state, label, basis, adversary.target_channel.max(1), &mut rng)
}

/// One branch of a swap: the two measured digits, the branch probability,
/// and the new shared pair on the outer qudits.
#[derive(Debug, Clone, Serialize)]
pub struct SwapBranch {
    pub digits: (usize, usize),
    pub prob: f64,
    pub pair: PureState,
}

fn swap_schedule(d: usize) -> Result<WalkSchedule> {
    WalkSchedule::new(
        GraphKind::Complete { n: d },
        0,
        vec![1, 2, 3],
        vec![
            build_coin(CoinKind::Identity, d)?,
            build_coin(CoinKind::Fourier, d)?,
            build_coin(CoinKind::WeylX, d)?,
        ],
        3,
    )
}

/// Enumerate every outcome of one entanglement-swapping step.
///
/// The composite must be the four-qudit product of the walker-side pair
/// (qudits 1, 2 of the composite) and a fresh pair (qudits 3, 4). The walk
/// runs three steps with coins I, F, X_d on the d-complete graph, then
/// qudits 2 and 3 are measured. For input labels (x, y) ⊗ (k, l) and
/// outcome digits (m−y, p) the new pair on the outer qudits is
/// |ψ_{k+p, 2m+p−y}⟩ up to a phase.
pub fn swap_step_enumerate(composite: &PureState, d: usize) -> Result<Vec<SwapBranch>> {
    if composite.dims() != vec![d; 4] {
        return Err(Error::dims(format!(
            "swap composite must be four qudits of dimension {d}, got {:?}",
            composite.dims()
        )));
    }
    let sched = swap_schedule(d)?;
    let fin = run_schedule(composite, &sched)?;
    Ok(fin
        .measure_enumerate(&[1, 2])?
        .into_iter()
        .map(|rec| SwapBranch {
            digits: (rec.outcome[0], rec.outcome[1]),
            prob: rec.prob,
            pair: rec.residual,
        })
        .collect())
}

/// Sample one swap outcome (Born rule) with the caller's RNG.
pub fn swap_step(composite: &PureState, d: usize, rng: &mut impl Rng) -> Result<SwapBranch> {
    let sched = swap_schedule(d)?;
    let fin = run_schedule(composite, &sched)?;
    let rec = fin.measure_sample(&[1, 2], rng)?;
    Ok(SwapBranch {
        digits: (rec.outcome[0], rec.outcome[1]),
        prob: rec.prob,
        pair: rec.residual,
    })
}

/// Decode the secret from the announced swap digits and the final pair's
/// computational outcome: unwind y_{j+1} = 2α_j + β_j + y_j back to y_1 and
/// return l − y_1 (mod d).
fn decode(d: usize, l: usize, swaps: &[(usize, usize)], final_outcome: (usize, usize)) -> usize {
    let di = d as i64;
    let mut y = (final_outcome.0 as i64 - final_outcome.1 as i64).rem_euclid(di);
    for &(alpha, beta) in swaps.iter().rev() {
        y = (y - 2 * alpha as i64 - beta as i64).rem_euclid(di);
    }
    (l as i64 - y).rem_euclid(di) as usize
}

/// Base three-party protocol round (sender + two agents).
pub fn run_protocol(config: &QssConfig, secret: usize, adversary: &Adversary) -> Result<QssTranscript> {
    if config.parties != 3 {
        return Err(Error::arg(format!(
            "base protocol has 3 parties, got {} (use run_protocol_n)",
            config.parties
        )));
    }
    run_protocol_n(config, secret, adversary)
}

/// N-party protocol round.
///
/// Ring layout: pair j (j = 1..=N) lives on qudits (2j−1, 2j); the sender
/// holds qudit 1 and qudit 2N, agent j holds qudits 2j and 2j+1. With
/// probability `q` every pair is checked in a random MUB and the round
/// aborts on any failed correlation. Otherwise the sender applies
/// `U_secret` to qudit 2N and the swap chain runs: first her own swap (pair
/// N against pair 1, measuring qudits 2N and 1), then one swap per agent
/// down the ring; the last agent measures the final pair.
pub fn run_protocol_n(
    config: &QssConfig,
    secret: usize,
    adversary: &Adversary,
) -> Result<QssTranscript> {
    config.validate()?;
    adversary.validate(config.parties)?;
    if secret >= config.d {
        return Err(Error::arg(format!("secret {secret} outside [0,{})", config.d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let label = config.label()?;
    let n = config.parties;
    let mut pairs: Vec<PureState> = vec![make_generalized_bell(label)?; n];

    // distribution: the tampered pair collapses while its qudit is in
    // transit (pair 1 transmits its second qudit, every other pair its
    // first)
    if adversary.strategy == AdversaryStrategy::InterceptResendComputational {
        let t = adversary.target_channel;
        let transit = if t == 1 { 1 } else { 0 };
        pairs[t - 1] = intercept_resend_pair(&pairs[t - 1], transit, &mut rng)?;
    }

    let check_round = rng.random::<f64>() < config.q;
    if check_round {
        let mut check_results = Vec::with_capacity(n);
        let mut aborted = false;
        for (j, pair) in pairs.iter().enumerate() {
            let basis = if rng.random::<bool>() {
                CheckBasis::Computational
            } else {
                CheckBasis::FourierTilde
            };
            let rec = measure_pair_in_basis(pair, &label, basis, j + 1, &mut rng)?;
            aborted |= !rec.pass;
            check_results.push(rec);
        }
        return Ok(QssTranscript {
            phase: QssPhase::Check,
            check_results,
            alice_announcement: None,
            bob_outcomes: None,
            extra_announcements: Vec::new(),
            final_pair_outcome: None,
            decoded_secret: None,
            true_secret: secret,
            aborted,
            d: config.d,
            parties: n,
        });
    }

    // message round: encode on the sender's half of pair N, then swap down
    // the ring
    let mut live = encode_secret(&pairs[n - 1], secret, config.d)?;
    let mut swaps: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    for fresh in pairs.iter().take(n - 1) {
        let composite = tensor(&[&live, fresh])?;
        let branch = swap_step(&composite, config.d, &mut rng)?;
        swaps.push(branch.digits);
        live = branch.pair;
    }
    let final_rec = live.measure_sample(&[0, 1], &mut rng)?;
    let final_outcome = (final_rec.outcome[0], final_rec.outcome[1]);
    let decoded = decode(config.d, config.l, &swaps, final_outcome);

    Ok(QssTranscript {
        phase: QssPhase::Message,
        check_results: Vec::new(),
        alice_announcement: Some(swaps[0]),
        bob_outcomes: swaps.get(1).copied(),
        extra_announcements: swaps.iter().skip(2).copied().collect(),
        final_pair_outcome: Some(final_outcome),
        decoded_secret: Some(decoded),
        true_secret: secret,
        aborted: false,
        d: config.d,
        parties: n,
    })
}
