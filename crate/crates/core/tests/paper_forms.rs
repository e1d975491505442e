#![allow(clippy::needless_range_loop)] // index loops mirror the summation formulas

//! The engine's walked states against independently constructed closed
//! forms of the same evolutions.

mod common;

use common::*;
use mcwalk::recipes::{CoinVariant, Recipe, QuditPairInput};
use mcwalk::statevec::{C64, GeneralizedBellLabel, PureState};

#[test]
fn two_step_line_walk_matches_closed_form() {
    for (a, b) in amplitude_pairs() {
        let simulated = Recipe::Bell2Line { a, b }.final_state().unwrap();
        let expected = two_step_line_form(a, b);
        assert_states_match_up_to_phase(&simulated, &expected, 1e-9, "two-step line");
        // the engine reproduces the form exactly, not just up to phase
        assert!(simulated.approx_eq(&expected, 1e-12));
    }
}

#[test]
fn three_step_complete_walk_matches_closed_form() {
    for (a, b) in amplitude_pairs() {
        let simulated = Recipe::Bell2Complete {
            a,
            b,
            variant: CoinVariant::Ihx,
        }
        .final_state()
        .unwrap();
        let expected = three_step_complete_form(a, b);
        assert_states_match_up_to_phase(&simulated, &expected, 1e-9, "three-step complete");
        assert!(simulated.approx_eq(&expected, 1e-12));
    }
}

#[test]
fn ghz_two_step_line_walk_matches_closed_form() {
    for (a, b) in amplitude_pairs() {
        let simulated = Recipe::Ghz2Line { a, b }.final_state().unwrap();
        let expected = ghz_two_step_line_form(a, b);
        assert_states_match_up_to_phase(&simulated, &expected, 1e-9, "GHZ two-step line");
        assert!(simulated.approx_eq(&expected, 1e-12));
    }
}

#[test]
fn ghz_four_step_complete_walk_matches_closed_form() {
    for (a, b) in amplitude_pairs() {
        let simulated = Recipe::Ghz2Complete { a, b }.final_state().unwrap();
        let expected = ghz_four_step_complete_form(a, b);
        assert_states_match_up_to_phase(&simulated, &expected, 1e-9, "GHZ four-step complete");
        assert!(simulated.approx_eq(&expected, 1e-12));
    }
}

/// General-input three-step walk on the d-complete graph:
/// |ψ(3)⟩ = (1/√d) Σ_{i,c} a_i |i⟩_2 |c⟩_3 (Σ_j b_j ω^{jc} |2i+j+c+1⟩_1 |j+1⟩_4).
#[test]
fn qudit_general_input_full_state_matches_formula() {
    let d = 3usize;
    let a = vec![
        C64::new(0.5f64.sqrt(), 0.0),
        C64::new(0.3f64.sqrt(), 0.0),
        C64::new(0.2f64.sqrt(), 0.0),
    ];
    let b = vec![C64::new(1.0 / 3f64.sqrt(), 0.0); 3];
    let simulated = Recipe::QuditPair {
        d,
        input: QuditPairInput::General {
            a: a.clone(),
            b: b.clone(),
        },
    }
    .final_state()
    .unwrap();

    let mut amps = vec![C64::new(0.0, 0.0); d * d * d * d];
    let inv = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        for cc in 0..d {
            for j in 0..d {
                let p1 = (2 * i + j + cc + 1) % d;
                let p4 = (j + 1) % d;
                let index = ((p1 * d + i) * d + cc) * d + p4;
                let phase =
                    C64::from_polar(inv, 2.0 * std::f64::consts::PI * (j * cc) as f64 / d as f64);
                amps[index] += a[i] * b[j] * phase;
            }
        }
    }
    let expected = PureState::new(vec![d; 4], amps).unwrap();
    assert!(simulated.approx_eq(&expected, 1e-12));
}

/// Maximal-input three-step walk: grouped form with the reduced pair
/// |ψ_{k+p, 2m+p−l}⟩ and phase, summed back into the full state.
#[test]
fn qudit_maximal_input_full_state_matches_formula() {
    for d in [2usize, 3] {
        for k in 0..d {
            for l in 0..d {
                let label = GeneralizedBellLabel::new(d, k, l).unwrap();
                let simulated = Recipe::QuditPair {
                    d,
                    input: QuditPairInput::Maximal(label),
                }
                .final_state()
                .unwrap();

                let mut amps = vec![C64::new(0.0, 0.0); d.pow(4)];
                let tau = 2.0 * std::f64::consts::PI / d as f64;
                // (1/d) Σ_{m,p} e^{2πi·mk/d} |m−l⟩_2 |p⟩_3 ⊗ inner(m,p)
                for m in 0..d {
                    for p in 0..d {
                        let outer = C64::from_polar(1.0 / d as f64, tau * ((m * k) % d) as f64);
                        let p2 = (m + d - l) % d;
                        // inner: (1/√d) Σ_n e^{2πi(k+p)n/d} |2m+p+n−2l+1⟩_1 |n−l+1⟩_4
                        for n in 0..d {
                            let inner = C64::from_polar(
                                1.0 / (d as f64).sqrt(),
                                tau * (((k + p) * n) % d) as f64,
                            );
                            let p1 = (2 * m + p + n + 4 * d - 2 * l + 1) % d;
                            let p4 = (n + d - l + 1 + d) % d;
                            let index = ((p1 * d + p2) * d + p) * d + p4;
                            amps[index] += outer * inner;
                        }
                    }
                }
                let expected = PureState::new(vec![d; 4], amps).unwrap();
                assert!(
                    simulated.approx_eq(&expected, 1e-12),
                    "d={d} k={k} l={l}"
                );
            }
        }
    }
}
