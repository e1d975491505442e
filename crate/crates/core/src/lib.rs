//! Multi-coin discrete-time quantum walk simulator.
//!
//! This crate simulates coined quantum walks in which `k` distinct coin
//! subsystems are used cyclically, one per step, on three graph families
//! (line, circle, complete). On top of the walk engine it provides:
//!
//! * [`statevec`] — dense multi-qudit state vectors: construction, tensor
//!   products, local unitaries, projective measurement, partial trace,
//!   seeded shot sampling.
//! * [`walk`] — shift/coin operator builders and the walk evolution engine.
//! * [`recipes`] — one-call pipelines that generate two-qubit, two-qudit,
//!   three-qubit-GHZ and three-qudit-GHZ entangled states between initially
//!   unrelated particles by walking and measuring, plus a randomized search
//!   showing that the 2-circle never produces such entanglement.
//! * [`analysis`] — concurrence, entanglement entropy, Uhlmann fidelity,
//!   depolarizing noise, and simulated Pauli-basis state tomography.
//! * [`qss`] — a multiparty quantum secret sharing protocol built from the
//!   walk-based entanglement swapping step, with channel checks in mutually
//!   unbiased bases and an intercept-resend adversary.
//!
//! All randomness is driven by explicit seeds (ChaCha8); every operation is a
//! pure function over immutable values, so states and schedules can be shared
//! freely across threads.
//!
//! ## Example
//!
//! Entangle particles 1 and 4 of two separable pairs with a three-step walk
//! on the 2-complete graph and two local measurements:
//!
//! ```
//! use mcwalk::recipes::{CoinVariant, Recipe};
//! use mcwalk::statevec::C64;
//!
//! let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
//! let outcomes = Recipe::Bell2Complete { a: h, b: h, variant: CoinVariant::Ihx }
//!     .run()
//!     .unwrap();
//! assert_eq!(outcomes.len(), 4);
//! for outcome in &outcomes {
//!     assert!((outcome.record.prob - 0.25).abs() < 1e-9);
//!     assert!((outcome.fidelity_to_target - 1.0).abs() < 1e-9);
//! }
//! ```

pub mod analysis;
pub mod error;
pub(crate) mod linalg;
pub mod qss;
pub mod recipes;
pub mod statevec;
pub mod walk;

pub use error::{Error, Result};
pub use statevec::{C64, DensityMatrix, GeneralizedBellLabel, MeasurementRecord, PureState};
