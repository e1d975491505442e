#![allow(clippy::type_complexity, clippy::needless_range_loop, dead_code)]

//! Shared oracles: the displayed closed forms of the walked states, built
//! directly from their grouped factorizations (independent of the engine).

use mcwalk::statevec::{C64, PureState};

pub const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn idx(dims: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&dig, &d)| acc * d + dig)
}

/// Two-step line walk result:
/// (1/√2)(−a|00⟩ + a|01⟩ + b|10⟩ + b|11⟩)_{2,3} ⊗ (a|11⟩ + b|00⟩)_{1,4}.
pub fn two_step_line_form(a: C64, b: C64) -> PureState {
    let dims = [2usize; 4];
    let mut amps = vec![c(0.0, 0.0); 16];
    let inv = c(INV_SQRT2, 0.0);
    let factor23: [((usize, usize), C64); 4] =
        [((0, 0), -a), ((0, 1), a), ((1, 0), b), ((1, 1), b)];
    let factor14: [((usize, usize), C64); 2] = [((1, 1), a), ((0, 0), b)];
    for ((p2, p3), amp23) in factor23 {
        for ((p1, p4), amp14) in factor14 {
            amps[idx(&dims, &[p1, p2, p3, p4])] += inv * amp23 * amp14;
        }
    }
    PureState::new(dims.to_vec(), amps).unwrap()
}

/// Three-step complete-graph walk result:
/// (1/√2)[(b|00⟩ + a|10⟩)_{2,3}(a|10⟩ + b|01⟩)_{1,4}
///      + (b|01⟩ + a|11⟩)_{2,3}(a|00⟩ − b|11⟩)_{1,4}].
pub fn three_step_complete_form(a: C64, b: C64) -> PureState {
    let dims = [2usize; 4];
    let mut amps = vec![c(0.0, 0.0); 16];
    let inv = c(INV_SQRT2, 0.0);
    let groups: [(Vec<((usize, usize), C64)>, Vec<((usize, usize), C64)>); 2] = [
        (
            vec![((0, 0), b), ((1, 0), a)],
            vec![((1, 0), a), ((0, 1), b)],
        ),
        (
            vec![((0, 1), b), ((1, 1), a)],
            vec![((0, 0), a), ((1, 1), -b)],
        ),
    ];
    for (factor23, factor14) in groups {
        for &((p2, p3), amp23) in &factor23 {
            for &((p1, p4), amp14) in &factor14 {
                amps[idx(&dims, &[p1, p2, p3, p4])] += inv * amp23 * amp14;
            }
        }
    }
    PureState::new(dims.to_vec(), amps).unwrap()
}

/// Two-step line walk with a GHZ input:
/// (1/2)(−a|00⟩ + a|01⟩ + b|10⟩ + b|11⟩)_{2,3} ⊗ (|000⟩ + |111⟩)_{1,4,5}.
pub fn ghz_two_step_line_form(a: C64, b: C64) -> PureState {
    let dims = [2usize; 5];
    let mut amps = vec![c(0.0, 0.0); 32];
    let half = c(0.5, 0.0);
    let factor23: [((usize, usize), C64); 4] =
        [((0, 0), -a), ((0, 1), a), ((1, 0), b), ((1, 1), b)];
    for ((p2, p3), amp23) in factor23 {
        for m in 0..2 {
            amps[idx(&dims, &[m, p2, p3, m, m])] += half * amp23;
        }
    }
    PureState::new(dims.to_vec(), amps).unwrap()
}

/// Four-step complete-graph walk with a GHZ input:
/// (1/(2√2))[(b|00⟩ + a|10⟩)_{2,3}(|100⟩ + |001⟩ + |010⟩ + |111⟩)_{1,4,5}
///         + (b|01⟩ + a|11⟩)_{2,3}(|000⟩ − |101⟩ − |110⟩ + |011⟩)_{1,4,5}].
pub fn ghz_four_step_complete_form(a: C64, b: C64) -> PureState {
    let dims = [2usize; 5];
    let mut amps = vec![c(0.0, 0.0); 32];
    let inv = c(0.5 * INV_SQRT2, 0.0);
    let one = c(1.0, 0.0);
    let groups: [(Vec<((usize, usize), C64)>, Vec<([usize; 3], C64)>); 2] = [
        (
            vec![((0, 0), b), ((1, 0), a)],
            vec![
                ([1, 0, 0], one),
                ([0, 0, 1], one),
                ([0, 1, 0], one),
                ([1, 1, 1], one),
            ],
        ),
        (
            vec![((0, 1), b), ((1, 1), a)],
            vec![
                ([0, 0, 0], one),
                ([1, 0, 1], -one),
                ([1, 1, 0], -one),
                ([0, 1, 1], one),
            ],
        ),
    ];
    for (factor23, factor145) in groups {
        for &((p2, p3), amp23) in &factor23 {
            for &([p1, p4, p5], amp145) in &factor145 {
                amps[idx(&dims, &[p1, p2, p3, p4, p5])] += inv * amp23 * amp145;
            }
        }
    }
    PureState::new(dims.to_vec(), amps).unwrap()
}

pub fn assert_states_match_up_to_phase(actual: &PureState, expected: &PureState, tol: f64, what: &str) {
    assert!(
        actual.approx_eq_up_to_phase(expected, tol),
        "{what}: states differ beyond {tol}"
    );
}

/// The three amplitude pairs the closed forms are instantiated at.
pub fn amplitude_pairs() -> Vec<(C64, C64)> {
    vec![
        (c(INV_SQRT2, 0.0), c(INV_SQRT2, 0.0)),
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(0.6, 0.0), c(0.8, 0.0)),
    ]
}
