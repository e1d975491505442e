//! `mcwalk` — multi-coin quantum walk simulator CLI.
//!
//! Every randomized command takes `--seed` (default 7) and produces
//! byte-identical output for identical invocations. Exit codes: 0 success,
//! 1 numerical/verification failure, 2 usage error.

mod complexarg;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcwalk::analysis::{
    depolarize, entanglement_entropy, fidelity, tomography, ShotPlan, TomoMethod, TomographyResult,
};
use mcwalk::qss::{run_protocol_n, Adversary, QssConfig, QssPhase, QssTranscript};
use mcwalk::recipes::{
    circle_search, qudit_pair_phased_target, CircleCase, CoinVariant, QuditPairInput, Recipe,
    RecipeOutcome,
};
use mcwalk::statevec::{make_generalized_bell, make_ghz, GeneralizedBellLabel};
use serde::Serialize;

use complexarg::{parse_complex, parse_complex_list};
use emit::Format;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "mcwalk",
    version,
    about = "Multi-coin quantum walk simulator: entanglement recipes, tomography, and quantum secret sharing",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an entanglement-generation recipe and list every measurement branch.
    Recipe(RecipeArgs),
    /// Sample computational-basis shots from a recipe's walked state.
    Sample(SampleArgs),
    /// Simulated Pauli-basis state tomography.
    Tomo(TomoArgs),
    /// Randomized search for entangling coin tuples on the 2-circle.
    CircleSearch(CircleSearchArgs),
    /// Quantum secret sharing rounds.
    #[command(subcommand)]
    Qss(QssCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecipeName {
    #[value(name = "bell-2line")]
    Bell2Line,
    #[value(name = "bell-2complete")]
    Bell2Complete,
    #[value(name = "qudit-pair")]
    QuditPair,
    #[value(name = "ghz-2line")]
    Ghz2Line,
    #[value(name = "ghz-2complete")]
    Ghz2Complete,
    #[value(name = "ghz-qudit")]
    GhzQudit,
}

#[derive(Args)]
struct RecipeCommonParams {
    /// First pair amplitude (complex: `0.6`, `0.6+0.8j`, `prob:0.36,phase:0`).
    #[arg(long, default_value = "0.7071067811865476")]
    a: String,
    /// Second pair amplitude.
    #[arg(long, default_value = "0.7071067811865476")]
    b: String,
    /// Coin ordering for bell-2complete (IHX, IXH, XXH, XHX).
    #[arg(long, default_value = "IHX")]
    variant: String,
    /// Qudit dimension for qudit-pair and ghz-qudit.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Generalized Bell phase index.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Generalized Bell shift index.
    #[arg(long, default_value_t = 0)]
    l: usize,
    /// Amplitude list for the first general qudit pair (comma-separated).
    #[arg(long)]
    amps_a: Option<String>,
    /// Amplitude list for the second general qudit pair.
    #[arg(long)]
    amps_b: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecipeArgs {
    /// Recipe to run.
    #[arg(value_enum)]
    name: RecipeName,
    #[command(flatten)]
    params: RecipeCommonParams,
    /// Gate every invariant of this command; exit 1 on any failure.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// Recipe whose walked state is sampled.
    #[arg(long, value_enum)]
    recipe: RecipeName,
    #[command(flatten)]
    params: RecipeCommonParams,
    /// Number of shots.
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum TomoStateArg {
    /// Two-qubit Bell pair (|00> + |11>)/sqrt(2).
    Bell,
    /// Three-qubit GHZ state.
    Ghz3,
}

#[derive(Clone, Copy, ValueEnum)]
enum TomoMethodArg {
    Linear,
    Psd,
}

#[derive(Args)]
struct TomoArgs {
    /// Tomograph every measurement branch of this recipe instead of a named
    /// state (keyed by the (q2, q3) outcome).
    #[arg(long, value_enum)]
    recipe: Option<RecipeName>,
    #[command(flatten)]
    params: RecipeCommonParams,
    /// Named state to tomograph when no recipe is given.
    #[arg(long, value_enum, default_value_t = TomoStateArg::Bell)]
    state: TomoStateArg,
    /// Shots per basis setting.
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    /// Use exact expectation values (no sampling).
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Reconstruction method.
    #[arg(long, value_enum, default_value_t = TomoMethodArg::Psd)]
    method: TomoMethodArg,
    /// Depolarizing noise applied before measurement.
    #[arg(long, default_value_t = 0.0)]
    noise_p: f64,
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircleCaseArg {
    #[value(name = "two-qubit-3coins")]
    TwoQubit3Coins,
    #[value(name = "ghz-4coins")]
    Ghz4Coins,
}

#[derive(Args)]
struct CircleSearchArgs {
    /// Which impossibility claim to probe.
    #[arg(long, value_enum)]
    case: CircleCaseArg,
    /// Number of Haar-random coin tuples.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Witness threshold (fraction of maximal entanglement).
    #[arg(long, default_value_t = 0.99)]
    threshold: f64,
    /// Fail (exit 1) if a witness is found.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum QssCommand {
    /// One protocol round.
    Run(QssRunArgs),
    /// Many seeded rounds, one JSON transcript per line plus a summary.
    Batch(QssBatchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AdversaryArg {
    None,
    InterceptResend,
}

#[derive(Args)]
struct QssProtocolParams {
    /// Protocol config as a JSON file; overrides the individual flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Qudit dimension (odd, >= 3).
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    l: usize,
    /// Probability that a round is a channel check.
    #[arg(long, default_value_t = 0.25)]
    q: f64,
    /// Number of parties (sender + agents).
    #[arg(long, default_value_t = 3)]
    parties: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AdversaryArg::None)]
    adversary: AdversaryArg,
    /// 1-based index of the attacked link.
    #[arg(long, default_value_t = 1)]
    target_channel: usize,
}

#[derive(Args)]
struct QssRunArgs {
    #[command(flatten)]
    protocol: QssProtocolParams,
    /// Secret digit in [0, d).
    #[arg(long)]
    secret: usize,
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QssBatchArgs {
    #[command(flatten)]
    protocol: QssProtocolParams,
    /// Number of rounds (seeds seed, seed+1, ...).
    #[arg(long)]
    runs: u64,
    /// Fixed secret; when omitted, run i uses secret i mod d.
    #[arg(long)]
    secret: Option<usize>,
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<mcwalk::Error> for CliError {
    fn from(e: mcwalk::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failure(msg: impl Into<String>) -> CliError {
    CliError::Failure(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Recipe(args) => cmd_recipe(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Tomo(args) => cmd_tomo(args),
        Command::CircleSearch(args) => cmd_circle_search(args),
        Command::Qss(QssCommand::Run(args)) => cmd_qss_run(args),
        Command::Qss(QssCommand::Batch(args)) => cmd_qss_batch(args),
    }
}

fn build_recipe(name: RecipeName, p: &RecipeCommonParams) -> CliResult<Recipe> {
    let a = parse_complex(&p.a).map_err(usage)?;
    let b = parse_complex(&p.b).map_err(usage)?;
    let recipe = match name {
        RecipeName::Bell2Line => Recipe::Bell2Line { a, b },
        RecipeName::Bell2Complete => {
            let variant: CoinVariant = p.variant.parse()?;
            Recipe::Bell2Complete { a, b, variant }
        }
        RecipeName::QuditPair => {
            let input = match (&p.amps_a, &p.amps_b) {
                (Some(sa), Some(sb)) => QuditPairInput::General {
                    a: parse_complex_list(sa).map_err(usage)?,
                    b: parse_complex_list(sb).map_err(usage)?,
                },
                (None, None) => {
                    QuditPairInput::Maximal(GeneralizedBellLabel::new(p.d, p.k, p.l)?)
                }
                _ => return Err(usage("provide both --amps-a and --amps-b, or neither")),
            };
            Recipe::QuditPair { d: p.d, input }
        }
        RecipeName::Ghz2Line => Recipe::Ghz2Line { a, b },
        RecipeName::Ghz2Complete => Recipe::Ghz2Complete { a, b },
        RecipeName::GhzQudit => Recipe::GhzQudit {
            d: p.d,
            label: GeneralizedBellLabel::new(p.d, p.k, p.l)?,
        },
    };
    recipe.validate()?;
    Ok(recipe)
}

fn verify_recipe(recipe: &Recipe, outcomes: &[RecipeOutcome]) -> CliResult<()> {
    let total: f64 = outcomes.iter().map(|o| o.record.prob).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(failure(format!("outcome probabilities sum to {total}, not 1")));
    }
    for o in outcomes {
        if (o.achieved.norm() - 1.0).abs() > 1e-9 {
            return Err(failure(format!(
                "residual for outcome {:?} has norm {}",
                o.record.outcome,
                o.achieved.norm()
            )));
        }
        if o.fidelity_to_target < 1.0 - 1e-9 {
            return Err(failure(format!(
                "fidelity {} below 1 for outcome {:?}",
                o.fidelity_to_target, o.record.outcome
            )));
        }
    }
    match recipe {
        Recipe::QuditPair {
            input: QuditPairInput::Maximal(label),
            ..
        } => {
            for o in outcomes {
                let (_, phased) =
                    qudit_pair_phased_target(*label, o.record.outcome[0], o.record.outcome[1])?;
                if !o.achieved.approx_eq(&phased, 1e-9) {
                    return Err(failure(format!(
                        "amplitude-wise phase mismatch at outcome {:?}",
                        o.record.outcome
                    )));
                }
            }
        }
        Recipe::GhzQudit { d, .. } => {
            let log2d = (*d as f64).log2();
            for o in outcomes {
                for cut in 0..3 {
                    let ent = entanglement_entropy(&o.achieved, &[cut])?;
                    if (ent - log2d).abs() > 1e-9 {
                        return Err(failure(format!(
                            "single-particle entropy {ent} != log2({d}) at outcome {:?}",
                            o.record.outcome
                        )));
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn digits_label(digits: &[usize]) -> String {
    digits
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn cmd_recipe(args: RecipeArgs) -> CliResult<()> {
    let recipe = build_recipe(args.name, &args.params)?;
    let outcomes = recipe.run()?;
    if args.verify {
        verify_recipe(&recipe, &outcomes)?;
    }
    let content = match args.output.format {
        Format::Json => emit::canonical_json(&outcomes).map_err(failure)?,
        Format::Csv | Format::Table => {
            let header = ["outcome", "prob", "fidelity_to_target", "target_form"];
            let rows: Vec<Vec<String>> = outcomes
                .iter()
                .map(|o| {
                    vec![
                        digits_label(&o.record.outcome),
                        o.record.prob.to_string(),
                        o.fidelity_to_target.to_string(),
                        o.target_form.to_string(),
                    ]
                })
                .collect();
            if args.output.format == Format::Csv {
                emit::csv(&header, &rows)
            } else {
                emit::table(&header, &rows)
            }
        }
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))
}

fn cmd_sample(args: SampleArgs) -> CliResult<()> {
    if args.shots < 1 {
        return Err(usage("shots must be at least 1"));
    }
    let recipe = build_recipe(args.recipe, &args.params)?;
    let final_state = recipe.final_state()?;
    let hist = final_state.sample_shots(args.shots, args.seed)?;
    if args.verify {
        let counted: u64 = hist.values().sum();
        if counted != args.shots {
            return Err(failure(format!("counts sum to {counted}, not {}", args.shots)));
        }
        let all: Vec<usize> = (0..final_state.num_subsystems()).collect();
        let support: std::collections::BTreeSet<String> = final_state
            .measure_enumerate(&all)?
            .iter()
            .map(|r| {
                r.outcome
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(if final_state.dims().iter().any(|&d| d > 10) { "," } else { "" })
            })
            .collect();
        for key in hist.keys() {
            if !support.contains(key) {
                return Err(failure(format!("sampled outcome {key} has zero probability")));
            }
        }
    }
    let content = match args.output.format {
        Format::Json => emit::canonical_json(&hist).map_err(failure)?,
        Format::Csv | Format::Table => {
            let rows: Vec<Vec<String>> = hist
                .iter()
                .map(|(k, v)| vec![k.clone(), v.to_string()])
                .collect();
            if args.output.format == Format::Csv {
                emit::csv(&["outcome", "count"], &rows)
            } else {
                emit::table(&["outcome", "count"], &rows)
            }
        }
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))
}

#[derive(Serialize)]
struct TomoReport {
    source: String,
    outcome: Option<Vec<usize>>,
    noise_p: f64,
    fidelity_to_theory: f64,
    result: TomographyResult,
}

fn cmd_tomo(args: TomoArgs) -> CliResult<()> {
    let method = match args.method {
        TomoMethodArg::Linear => TomoMethod::LinearInversion,
        TomoMethodArg::Psd => TomoMethod::PsdProjected,
    };
    let plan = if args.exact {
        ShotPlan::Exact
    } else {
        if args.shots < 1 {
            return Err(usage("shots must be at least 1"));
        }
        ShotPlan::Sampled(args.shots)
    };

    // (source label, outcome digits, ideal pure state) per tomography run
    let mut jobs: Vec<(String, Option<Vec<usize>>, mcwalk::PureState)> = Vec::new();
    match args.recipe {
        Some(name) => {
            let recipe = build_recipe(name, &args.params)?;
            for o in recipe.run()? {
                let (_, target) = recipe.target_for_outcome(&o.record.outcome)?;
                jobs.push((
                    format!("recipe:{}", digits_label(&o.record.outcome)),
                    Some(o.record.outcome.clone()),
                    target,
                ));
            }
        }
        None => {
            let state = match args.state {
                TomoStateArg::Bell => {
                    make_generalized_bell(GeneralizedBellLabel::new(2, 0, 0)?)?
                }
                TomoStateArg::Ghz3 => make_ghz(2, 3)?,
            };
            let label = match args.state {
                TomoStateArg::Bell => "state:bell",
                TomoStateArg::Ghz3 => "state:ghz3",
            };
            jobs.push((label.to_string(), None, state));
        }
    }

    let mut reports = Vec::new();
    for (idx, (source, outcome, theory)) in jobs.iter().enumerate() {
        let ideal = theory.to_density_matrix()?;
        let input = depolarize(&ideal, args.noise_p)?;
        let result = tomography(&input, plan, args.seed.wrapping_add(idx as u64), method)?;
        let fid = fidelity(&result.rho, &ideal)?;
        reports.push(TomoReport {
            source: source.clone(),
            outcome: outcome.clone(),
            noise_p: args.noise_p,
            fidelity_to_theory: fid,
            result,
        });
    }

    if args.verify {
        for r in &reports {
            if method == TomoMethod::PsdProjected && !r.result.psd_ok {
                return Err(failure(format!("{}: projected state is not PSD", r.source)));
            }
            let gate = match (args.exact, args.noise_p == 0.0) {
                (true, true) => Some(1.0 - 1e-6),
                (false, true) => Some(0.98),
                _ => None,
            };
            if let Some(gate) = gate {
                if r.fidelity_to_theory < gate {
                    return Err(failure(format!(
                        "{}: fidelity {} below {gate}",
                        r.source, r.fidelity_to_theory
                    )));
                }
            }
        }
    }

    let content = match args.output.format {
        Format::Json => emit::canonical_json(&reports).map_err(failure)?,
        Format::Csv | Format::Table => {
            let header = ["source", "fidelity_to_theory", "min_eigenvalue", "psd_ok"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.source.clone(),
                        r.fidelity_to_theory.to_string(),
                        format!("{:.3e}", r.result.min_eigenvalue),
                        r.result.psd_ok.to_string(),
                    ]
                })
                .collect();
            if args.output.format == Format::Csv {
                emit::csv(&header, &rows)
            } else {
                emit::table(&header, &rows)
            }
        }
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))
}

fn cmd_circle_search(args: CircleSearchArgs) -> CliResult<()> {
    let case = match args.case {
        CircleCaseArg::TwoQubit3Coins => CircleCase::TwoQubit3Coins,
        CircleCaseArg::Ghz4Coins => CircleCase::Ghz4Coins,
    };
    let report = circle_search(case, args.samples, args.seed, args.threshold)?;
    if args.verify && report.witness_found {
        return Err(failure(format!(
            "witness found: min-outcome entanglement {} exceeds threshold {}",
            report.max_min_entanglement, report.threshold
        )));
    }
    let content = match args.output.format {
        Format::Json => emit::canonical_json(&report).map_err(failure)?,
        Format::Csv | Format::Table => {
            let header = [
                "case",
                "samples",
                "seed",
                "threshold",
                "max_min_entanglement",
                "witness_found",
            ];
            let case_name = match report.case {
                CircleCase::TwoQubit3Coins => "two-qubit-3coins",
                CircleCase::Ghz4Coins => "ghz-4coins",
            };
            let rows = vec![vec![
                case_name.to_string(),
                report.samples.to_string(),
                report.seed.to_string(),
                report.threshold.to_string(),
                report.max_min_entanglement.to_string(),
                report.witness_found.to_string(),
            ]];
            if args.output.format == Format::Csv {
                emit::csv(&header, &rows)
            } else {
                emit::table(&header, &rows)
            }
        }
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))
}

fn load_qss_config(p: &QssProtocolParams) -> CliResult<QssConfig> {
    let config = match &p.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("bad config file: {e}")))?
        }
        None => QssConfig {
            d: p.d,
            k: p.k,
            l: p.l,
            q: p.q,
            parties: p.parties,
            seed: p.seed,
        },
    };
    config.validate()?;
    Ok(config)
}

fn build_adversary(p: &QssProtocolParams) -> Adversary {
    match p.adversary {
        AdversaryArg::None => Adversary::none(),
        AdversaryArg::InterceptResend => Adversary::intercept_resend(p.target_channel),
    }
}

fn transcript_row(seed: u64, t: &QssTranscript) -> Vec<String> {
    vec![
        seed.to_string(),
        format!("{:?}", t.phase).to_lowercase(),
        t.aborted.to_string(),
        t.true_secret.to_string(),
        t.decoded_secret.map_or("-".into(), |s| s.to_string()),
        t.decoded_secret.map_or("-".into(), |s| (s == t.true_secret).to_string()),
    ]
}

const TRANSCRIPT_HEADER: [&str; 6] = ["seed", "phase", "aborted", "secret", "decoded", "ok"];

fn cmd_qss_run(args: QssRunArgs) -> CliResult<()> {
    let config = load_qss_config(&args.protocol)?;
    let adversary = build_adversary(&args.protocol);
    let transcript = run_protocol_n(&config, args.secret, &adversary)?;
    if args.verify
        && adversary.strategy == mcwalk::qss::AdversaryStrategy::None
        && transcript.phase == QssPhase::Message
        && transcript.decoded_secret != Some(args.secret)
    {
        return Err(failure(format!(
            "decoded {:?} but the secret was {}",
            transcript.decoded_secret, args.secret
        )));
    }
    let content = match args.output.format {
        Format::Json => emit::canonical_json(&transcript).map_err(failure)?,
        Format::Csv => emit::csv(&TRANSCRIPT_HEADER, &[transcript_row(config.seed, &transcript)]),
        Format::Table => emit::table(&TRANSCRIPT_HEADER, &[transcript_row(config.seed, &transcript)]),
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))
}

#[derive(Serialize)]
struct QssBatchSummary {
    runs: u64,
    check_rounds: u64,
    message_rounds: u64,
    aborts: u64,
    decode_failures: u64,
    abort_rate: f64,
    /// Pairs prepared per delivered message round (expectation
    /// parties / (1 - q)).
    pairs_consumed: u64,
    pairs_per_message: Option<f64>,
}

fn cmd_qss_batch(args: QssBatchArgs) -> CliResult<()> {
    if args.runs < 1 {
        return Err(usage("runs must be at least 1"));
    }
    let base = load_qss_config(&args.protocol)?;
    let adversary = build_adversary(&args.protocol);
    if let Some(secret) = args.secret {
        if secret >= base.d {
            return Err(usage(format!("secret {secret} outside [0,{})", base.d)));
        }
    }

    let mut transcripts: Vec<(u64, QssTranscript)> = Vec::with_capacity(args.runs as usize);
    for i in 0..args.runs {
        let mut config = base;
        config.seed = base.seed.wrapping_add(i);
        let secret = args.secret.unwrap_or((i % base.d as u64) as usize);
        let t = run_protocol_n(&config, secret, &adversary)?;
        transcripts.push((config.seed, t));
    }

    let check_rounds = transcripts.iter().filter(|(_, t)| t.phase == QssPhase::Check).count() as u64;
    let message_rounds = args.runs - check_rounds;
    let aborts = transcripts.iter().filter(|(_, t)| t.aborted).count() as u64;
    let decode_failures = transcripts
        .iter()
        .filter(|(_, t)| {
            t.phase == QssPhase::Message && t.decoded_secret != Some(t.true_secret)
        })
        .count() as u64;
    let pairs_consumed = args.runs * base.parties as u64;
    let summary = QssBatchSummary {
        runs: args.runs,
        check_rounds,
        message_rounds,
        aborts,
        decode_failures,
        abort_rate: aborts as f64 / args.runs as f64,
        pairs_consumed,
        pairs_per_message: (message_rounds > 0)
            .then(|| pairs_consumed as f64 / message_rounds as f64),
    };

    if args.verify
        && adversary.strategy == mcwalk::qss::AdversaryStrategy::None
        && decode_failures > 0
    {
        return Err(failure(format!("{decode_failures} decode failures without an adversary")));
    }

    let content = match args.output.format {
        Format::Json => {
            let lines: Vec<&QssTranscript> = transcripts.iter().map(|(_, t)| t).collect();
            emit::json_lines(&lines).map_err(failure)?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = transcripts
                .iter()
                .map(|(seed, t)| transcript_row(*seed, t))
                .collect();
            emit::csv(&TRANSCRIPT_HEADER, &rows)
        }
        Format::Table => {
            let rows = vec![
                vec!["runs".into(), summary.runs.to_string()],
                vec!["check_rounds".into(), summary.check_rounds.to_string()],
                vec!["message_rounds".into(), summary.message_rounds.to_string()],
                vec!["aborts".into(), summary.aborts.to_string()],
                vec!["decode_failures".into(), summary.decode_failures.to_string()],
                vec!["abort_rate".into(), summary.abort_rate.to_string()],
                vec![
                    "pairs_per_message".into(),
                    summary
                        .pairs_per_message
                        .map_or("-".into(), |v| format!("{v:.3}")),
                ],
            ];
            emit::table(&["metric", "value"], &rows)
        }
    };
    emit::write_output(&args.output.out, &content).map_err(|e| failure(e.to_string()))?;
    if args.output.format != Format::Table {
        eprintln!(
            "{}",
            emit::canonical_json(&summary).map_err(failure)?.trim_end()
        );
    }
    Ok(())
}
