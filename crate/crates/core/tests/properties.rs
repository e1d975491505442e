//! Property tests for the state-vector core and the walk engine.

use mcwalk::statevec::{
    decode_index, encode_digits, tensor, C64, PureState,
};
use mcwalk::walk::{run_schedule, CoinOp, GraphKind, WalkSchedule};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn haar(dim: usize, rng: &mut ChaCha8Rng) -> nalgebra::DMatrix<C64> {
    // Ginibre + QR with phase-fixed R diagonal
    use rand_distr::StandardNormal;
    let g = nalgebra::DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / 2f64.sqrt()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn random_state(dims: &[usize], seed: u64) -> PureState {
    let total: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<C64> = (0..total)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new(dims.to_vec(), amps).unwrap()
}

proptest! {
    #[test]
    fn mixed_radix_round_trips(dims in prop::collection::vec(2usize..=5, 1..=4)) {
        let total: usize = dims.iter().product();
        for idx in 0..total {
            let digits = decode_index(&dims, idx);
            prop_assert_eq!(encode_digits(&dims, &digits).unwrap(), idx);
        }
    }

    #[test]
    fn unitaries_preserve_norm(
        dims in prop::collection::vec(2usize..=5, 1..=3),
        target in 0usize..3,
        seed in any::<u64>(),
    ) {
        let target = target % dims.len();
        let state = random_state(&dims, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let u = haar(dims[target], &mut rng);
        let out = state.apply_unitary(&u, &[target]).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measurement_probabilities_and_reconstruction(
        dims in prop::collection::vec(2usize..=4, 2..=4),
        raw_target in 0usize..4,
        seed in any::<u64>(),
    ) {
        let target = raw_target % dims.len();
        let state = random_state(&dims, seed);
        let targets = [target];
        let records = state.measure_enumerate(&targets).unwrap();

        let total: f64 = records.iter().map(|r| r.prob).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);

        // Σ_o sqrt(p_o) |o> ⊗ residual_o == input, with branch phases
        let others: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let odims: Vec<usize> = others.iter().map(|&i| dims[i]).collect();
        let mut rebuilt = vec![C64::new(0.0, 0.0); state.dim()];
        for rec in &records {
            prop_assert!((rec.residual.norm() - 1.0).abs() < 1e-9);
            for (ridx, &amp) in rec.residual.amps().iter().enumerate() {
                let rdigits = decode_index(&odims, ridx);
                let mut full = vec![0usize; dims.len()];
                for (pos, &t) in targets.iter().enumerate() {
                    full[t] = rec.outcome[pos];
                }
                for (pos, &o) in others.iter().enumerate() {
                    full[o] = rdigits[pos];
                }
                rebuilt[encode_digits(&dims, &full).unwrap()] +=
                    C64::new(rec.prob.sqrt(), 0.0) * amp;
            }
        }
        for (a, b) in rebuilt.iter().zip(state.amps()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn tensor_then_trace_recovers_factors(seed in any::<u64>(), s2 in any::<u64>()) {
        let f1 = random_state(&[2, 3], seed);
        let f2 = random_state(&[2], s2);
        let joint = tensor(&[&f1, &f2]).unwrap();

        let red1 = joint.reduced_density_matrix(&[0, 1]).unwrap();
        let expect1 = f1.to_density_matrix().unwrap();
        for i in 0..6 {
            for j in 0..6 {
                prop_assert!((red1.matrix()[(i, j)] - expect1.matrix()[(i, j)]).norm() < 1e-9);
            }
        }

        let red2 = joint.reduced_density_matrix(&[2]).unwrap();
        let expect2 = f2.to_density_matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((red2.matrix()[(i, j)] - expect2.matrix()[(i, j)]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn state_json_round_trips(dims in prop::collection::vec(2usize..=4, 1..=3), seed in any::<u64>()) {
        let state = random_state(&dims, seed);
        let json = serde_json::to_string(&state).unwrap();
        let back: PureState = serde_json::from_str(&json).unwrap();
        prop_assert!(state.approx_eq(&back, 1e-12));
    }

    #[test]
    fn walk_schedules_preserve_norm(seed in any::<u64>(), steps in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graph = match seed % 3 {
            0 => GraphKind::Line { n: 2 },
            1 => GraphKind::Circle { n: 2 },
            _ => GraphKind::Complete { n: 3 },
        };
        let cd = graph.coin_dim();
        let dims = vec![graph.n(), cd, cd];
        let state = random_state(&dims, seed ^ 0x77);
        let ops: Vec<CoinOp> = (0..steps)
            .map(|_| CoinOp::custom(haar(cd, &mut rng)).unwrap())
            .collect();
        let sched = WalkSchedule::new(graph, 0, vec![1, 2], ops, steps).unwrap();
        let out = run_schedule(&state, &sched).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }
}
