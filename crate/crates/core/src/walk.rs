//! Shift/coin operator builders and the multi-coin walk engine.
//!
//! One walk step with the i-th coin is `U_i = (S ⊗ I)(I ⊗ C_i)`: the active
//! coin is flipped with `C_i`, then the conditional shift `S` moves the
//! walker. With `k` coins the engine selects coin `(i-1) mod k` at step `i`,
//! for any number of steps `t ≥ 1`; when `k` divides `t` this reduces to the
//! usual `(U_k ⋯ U_1)^{t/k}` block form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::statevec::{C64, PureState, NORM_TOL};

/// Walk graph family plus vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphKind {
    Line { n: usize },
    Circle { n: usize },
    Complete { n: usize },
}

impl GraphKind {
    pub fn validate(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(Error::arg(format!("graph needs at least 2 vertices, got {}", self.n())));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            GraphKind::Line { n } | GraphKind::Circle { n } | GraphKind::Complete { n } => n,
        }
    }

    /// Coin-space dimension: `n` on the complete graph (one coin value per
    /// jump length), 2 on line and circle (left/right).
    pub fn coin_dim(&self) -> usize {
        match *self {
            GraphKind::Complete { n } => n,
            GraphKind::Line { .. } | GraphKind::Circle { .. } => 2,
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphKind::Line { n } => write!(f, "{n}-line"),
            GraphKind::Circle { n } => write!(f, "{n}-circle"),
            GraphKind::Complete { n } => write!(f, "{n}-complete"),
        }
    }
}

/// A conditional shift operator on position ⊗ coin, stored as the basis
/// permutation it implements (index = position*coin_dim + coin).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOp {
    graph: GraphKind,
    perm: Vec<usize>,
}

impl ShiftOp {
    pub fn graph(&self) -> GraphKind {
        self.graph
    }

    /// Image of the combined (position, coin) index under the shift.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Dense matrix form (a 0/1 permutation matrix).
    pub fn matrix(&self) -> DMatrix<C64> {
        let m = self.perm.len();
        let mut mat = DMatrix::<C64>::zeros(m, m);
        for (input, &output) in self.perm.iter().enumerate() {
            mat[(output, input)] = C64::new(1.0, 0.0);
        }
        mat
    }
}

/// Build the conditional shift for a graph:
///
/// * complete: `|x, j⟩ → |x+j mod N, j⟩`
/// * circle:   `|x, 0⟩ → |x+1 mod N, 0⟩`, `|x, 1⟩ → |x−1 mod N, 1⟩`
/// * line: interior moves as on the circle but without wraparound; at the
///   walls the coin flips instead (`|N−1, 0⟩ → |N−1, 1⟩`, `|0, 1⟩ → |0, 0⟩`).
pub fn build_shift(graph: GraphKind) -> Result<ShiftOp> {
    graph.validate()?;
    let n = graph.n();
    let c = graph.coin_dim();
    let mut perm = vec![0usize; n * c];
    match graph {
        GraphKind::Complete { .. } => {
            for x in 0..n {
                for j in 0..n {
                    perm[x * c + j] = ((x + j) % n) * c + j;
                }
            }
        }
        GraphKind::Circle { .. } => {
            for x in 0..n {
                perm[x * c] = ((x + 1) % n) * c;
                perm[x * c + 1] = ((x + n - 1) % n) * c + 1;
            }
        }
        GraphKind::Line { .. } => {
            for x in 0..n - 1 {
                perm[x * c] = (x + 1) * c;
            }
            for x in 1..n {
                perm[x * c + 1] = (x - 1) * c + 1;
            }
            perm[(n - 1) * c] = (n - 1) * c + 1; // right wall: coin 0 -> 1
            perm[1] = 0; // left wall: |0, 1> -> |0, 0>
        }
    }
    Ok(ShiftOp { graph, perm })
}

/// Named coin operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoinKind {
    Identity,
    Hadamard,
    WeylX,
    Fourier,
    Custom,
}

/// A unitary coin operator on a d-dimensional coin space.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOp {
    kind: CoinKind,
    d: usize,
    mat: DMatrix<C64>,
}

impl CoinOp {
    pub fn kind(&self) -> CoinKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Wrap an arbitrary matrix as a coin; rejected unless unitary.
    pub fn custom(mat: DMatrix<C64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() < 2 {
            return Err(Error::dims("custom coin must be square with d >= 2"));
        }
        let dev = linalg::unitarity_deviation(&mat);
        if dev > NORM_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self {
            kind: CoinKind::Custom,
            d: mat.nrows(),
            mat,
        })
    }
}

/// Build a named coin of dimension `d`:
/// identity, Hadamard (d = 2 only), the cyclic raising operator
/// `X_d = Σ |i+1 mod d⟩⟨i|`, or the Fourier coin with entries
/// `exp(2πi·jk/d)/√d`.
pub fn build_coin(kind: CoinKind, d: usize) -> Result<CoinOp> {
    if d < 2 {
        return Err(Error::arg(format!("coin dimension {d} < 2")));
    }
    let mat = match kind {
        CoinKind::Identity => DMatrix::from_diagonal_element(d, d, C64::new(1.0, 0.0)),
        CoinKind::Hadamard => {
            if d != 2 {
                return Err(Error::arg(format!("hadamard coin requires d = 2, got {d}")));
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(h, 0.0),
                    C64::new(h, 0.0),
                    C64::new(h, 0.0),
                    C64::new(-h, 0.0),
                ],
            )
        }
        CoinKind::WeylX => {
            let mut m = DMatrix::<C64>::zeros(d, d);
            for i in 0..d {
                m[((i + 1) % d, i)] = C64::new(1.0, 0.0);
            }
            m
        }
        CoinKind::Fourier => {
            let inv = 1.0 / (d as f64).sqrt();
            DMatrix::from_fn(d, d, |j, k| {
                C64::from_polar(inv, 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64)
            })
        }
        CoinKind::Custom => {
            return Err(Error::arg("custom coins are built from a matrix, not a name"))
        }
    };
    Ok(CoinOp { kind, d, mat })
}

/// A full walk specification: graph, walker subsystem, coin subsystems (used
/// cyclically), one coin operator per step, and the number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSchedule {
    pub graph: GraphKind,
    pub walker: usize,
    pub coins: Vec<usize>,
    pub coin_ops: Vec<CoinOp>,
    pub steps: usize,
}

impl WalkSchedule {
    pub fn new(
        graph: GraphKind,
        walker: usize,
        coins: Vec<usize>,
        coin_ops: Vec<CoinOp>,
        steps: usize,
    ) -> Result<Self> {
        let sched = Self {
            graph,
            walker,
            coins,
            coin_ops,
            steps,
        };
        sched.validate()?;
        Ok(sched)
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if self.steps < 1 {
            return Err(Error::arg("schedule needs at least one step"));
        }
        if self.coins.is_empty() {
            return Err(Error::arg("schedule needs at least one coin"));
        }
        if self.coins.contains(&self.walker) {
            return Err(Error::DuplicateIndex(self.walker));
        }
        for (i, &c) in self.coins.iter().enumerate() {
            if self.coins[..i].contains(&c) {
                return Err(Error::DuplicateIndex(c));
            }
        }
        if self.coin_ops.len() != self.steps {
            return Err(Error::arg(format!(
                "{} coin operators for {} steps (one per step required)",
                self.coin_ops.len(),
                self.steps
            )));
        }
        let cd = self.graph.coin_dim();
        for (i, op) in self.coin_ops.iter().enumerate() {
            if op.dim() != cd {
                return Err(Error::dims(format!(
                    "coin operator at step {} has dimension {} but the {} coin space is {}",
                    i + 1,
                    op.dim(),
                    self.graph,
                    cd
                )));
            }
        }
        Ok(())
    }

    /// Coin subsystem active at 1-based step `i`.
    pub fn active_coin(&self, step_index: usize) -> usize {
        self.coins[(step_index - 1) % self.coins.len()]
    }

    fn check_state(&self, state: &PureState) -> Result<()> {
        let dims = state.dims();
        let need = self.coins.iter().chain(std::iter::once(&self.walker));
        for &idx in need {
            if idx >= dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    count: dims.len(),
                });
            }
        }
        if dims[self.walker] != self.graph.n() {
            return Err(Error::dims(format!(
                "walker subsystem has dimension {} but the {} position space is {}",
                dims[self.walker],
                self.graph,
                self.graph.n()
            )));
        }
        let cd = self.graph.coin_dim();
        for &c in &self.coins {
            if dims[c] != cd {
                return Err(Error::dims(format!(
                    "coin subsystem {c} has dimension {} but the {} coin space is {}",
                    dims[c], self.graph, cd
                )));
            }
        }
        Ok(())
    }
}

/// One walk step (1-based `step_index`): coin operator on the active coin,
/// then the shift on (walker, active coin).
pub fn walk_step(state: &PureState, schedule: &WalkSchedule, step_index: usize) -> Result<PureState> {
    schedule.validate()?;
    schedule.check_state(state)?;
    if step_index < 1 || step_index > schedule.steps {
        return Err(Error::arg(format!(
            "step index {step_index} outside [1, {}]",
            schedule.steps
        )));
    }
    let coin = schedule.active_coin(step_index);
    let op = &schedule.coin_ops[step_index - 1];
    let shift = build_shift(schedule.graph)?;
    let state = state.apply_operator_unchecked(op.matrix(), &[coin]);
    Ok(state.apply_permutation(shift.permutation(), &[schedule.walker, coin]))
}

/// Run all `steps` of the schedule in order.
pub fn run_schedule(state: &PureState, schedule: &WalkSchedule) -> Result<PureState> {
    schedule.validate()?;
    schedule.check_state(state)?;
    let shift = build_shift(schedule.graph)?;
    let mut current = state.clone();
    for i in 1..=schedule.steps {
        let coin = schedule.active_coin(i);
        let op = &schedule.coin_ops[i - 1];
        current = current.apply_operator_unchecked(op.matrix(), &[coin]);
        current = current.apply_permutation(shift.permutation(), &[schedule.walker, coin]);
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// Serialization: {graph: {kind, n}, walker, coins, coin_ops, steps} where a
// coin op is a builtin name string or an explicit matrix.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoinOpRepr {
    Named(String),
    Matrix(Vec<Vec<(f64, f64)>>),
}

#[derive(Serialize, Deserialize)]
struct WalkScheduleRepr {
    graph: GraphKind,
    walker: usize,
    coins: Vec<usize>,
    coin_ops: Vec<CoinOpRepr>,
    steps: usize,
}

impl Serialize for WalkSchedule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coin_ops = self
            .coin_ops
            .iter()
            .map(|op| match op.kind() {
                CoinKind::Identity => CoinOpRepr::Named("identity".into()),
                CoinKind::Hadamard => CoinOpRepr::Named("hadamard".into()),
                CoinKind::WeylX => CoinOpRepr::Named("weyl_x".into()),
                CoinKind::Fourier => CoinOpRepr::Named("fourier".into()),
                CoinKind::Custom => {
                    let d = op.dim();
                    CoinOpRepr::Matrix(
                        (0..d)
                            .map(|i| {
                                (0..d)
                                    .map(|j| (op.matrix()[(i, j)].re, op.matrix()[(i, j)].im))
                                    .collect()
                            })
                            .collect(),
                    )
                }
            })
            .collect();
        WalkScheduleRepr {
            graph: self.graph,
            walker: self.walker,
            coins: self.coins.clone(),
            coin_ops,
            steps: self.steps,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WalkSchedule {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = WalkScheduleRepr::deserialize(deserializer)?;
        let cd = repr.graph.coin_dim();
        let coin_ops = repr
            .coin_ops
            .into_iter()
            .map(|r| match r {
                CoinOpRepr::Named(name) => {
                    let kind = match name.as_str() {
                        "identity" => CoinKind::Identity,
                        "hadamard" => CoinKind::Hadamard,
                        "weyl_x" => CoinKind::WeylX,
                        "fourier" => CoinKind::Fourier,
                        other => return Err(D::Error::custom(format!("unknown coin name {other:?}"))),
                    };
                    build_coin(kind, cd).map_err(D::Error::custom)
                }
                CoinOpRepr::Matrix(rows) => {
                    let d = rows.len();
                    if rows.iter().any(|r| r.len() != d) {
                        return Err(D::Error::custom("coin matrix rows are ragged"));
                    }
                    let mat = DMatrix::from_fn(d, d, |i, j| {
                        let (re, im) = rows[i][j];
                        C64::new(re, im)
                    });
                    CoinOp::custom(mat).map_err(D::Error::custom)
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        WalkSchedule::new(repr.graph, repr.walker, repr.coins, coin_ops, repr.steps)
            .map_err(D::Error::custom)
    }
}
