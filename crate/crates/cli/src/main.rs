//! `curbkit` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 unreadable or
//! malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use curbkit::curb::CurbReport;
use curbkit::experiments::{write_csv_to, Algorithm, ExperimentSpec};
use curbkit::format::{parse_game, serialize_any};
use curbkit::generators::{default_big_z, default_epsilon, seeded_rng, Family, GeneratorSpec};
use curbkit::{
    all_minimal_curb, min_containing_curb, nash_via_curb_preprocessing, one_minimal_curb, run_distribution_experiment,
    run_runtime_experiment, smallest_minimal_curb, support_enumeration_nash, AnyGame, CurbError, Game, NashProfile,
    Rational, Scalar, StrategyRef, StrategySet,
};

#[derive(Parser)]
#[command(name = "curbkit", version, about = "CURB sets of two-player normal-form games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a game from one of the built-in families.
    Generate {
        family: FamilyName,
        #[command(flatten)]
        params: FamilyParams,
        /// Generator seed; random (and reported on stderr) when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute CURB sets of a game file.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMode::All)]
        mode: SolveMode,
        /// Seed strategy for `containing`, as r:K or c:K (1-based).
        #[arg(long)]
        seed_strategy: Option<StrategyRef>,
        /// Seed for `one`; random (and reported) when omitted.
        #[arg(long)]
        rng_seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Find Nash equilibria by support enumeration.
    Nash {
        game: PathBuf,
        /// Restrict the search to a smallest minimal CURB set first.
        #[arg(long)]
        preprocess_curb: bool,
        /// Largest support size per player.
        #[arg(long)]
        max_support: Option<usize>,
        /// Report every equilibrium found, not just the first.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a batch experiment and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Random,
    Covariant,
    Gamma,
    Padded,
    Omega,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    All,
    One,
    Small,
    Containing,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Distribution,
    Runtime,
}

#[derive(Args, Clone)]
struct FamilyParams {
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Payoff correlation for the covariant family.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    /// Extra strategies per player for the omega family.
    #[arg(long)]
    k: Option<usize>,
    /// Omega reward, as an integer or p/q.
    #[arg(long)]
    epsilon: Option<Rational>,
    /// Omega penalty, as an integer or p/q.
    #[arg(long)]
    z: Option<Rational>,
    /// Rows of the top-left block of a padded game.
    #[arg(long)]
    block_rows: Option<usize>,
    /// Columns of the top-left block of a padded game.
    #[arg(long)]
    block_cols: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Experiment::Distribution)]
    experiment: Experiment,
    #[arg(long, value_enum, default_value_t = FamilyName::Random)]
    family: FamilyName,
    #[command(flatten)]
    params: FamilyParams,
    /// Total game sizes (rows + cols) for freely sized families.
    #[arg(long, value_delimiter = ',', default_value = "20")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, value_delimiter = ',', default_value = "all_mc,one_mc,small_mc")]
    algorithms: Vec<Algorithm>,
    /// Run seed; random (and reported on stderr) when omitted.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<CurbError> for Failure {
    fn from(e: CurbError) -> Self {
        match e {
            CurbError::Parse { .. } | CurbError::Io(_) => Failure::Input(e.to_string()),
            CurbError::InvalidParameter(_)
            | CurbError::IndexOutOfRange { .. }
            | CurbError::EmptySide
            | CurbError::InvalidMixture(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate { family, params, seed, out } => generate(family, &params, seed, out.as_deref()),
        Command::Solve { game, mode, seed_strategy, rng_seed, json } => {
            let game = read_game(&game)?;
            let report = match &game {
                AnyGame::Rational(g) => solve(g, mode, seed_strategy, rng_seed, json)?,
                AnyGame::Float(g) => solve(g, mode, seed_strategy, rng_seed, json)?,
            };
            emit(&report)
        }
        Command::Nash { game, preprocess_curb, max_support, all, json } => {
            let game = read_game(&game)?;
            let report = match &game {
                AnyGame::Rational(g) => nash(g, preprocess_curb, max_support, all, json)?,
                AnyGame::Float(g) => nash(g, preprocess_curb, max_support, all, json)?,
            };
            emit(&report)
        }
        Command::Bench(args) => bench(&args),
    }
}

fn emit(text: &str) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Internal(e.to_string()))
}

fn resolve_seed(seed: Option<u64>, what: &str) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("{what}: {s}");
        s
    })
}

fn read_game(path: &Path) -> CliResult<AnyGame> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_game(&text)?)
}

fn require(value: Option<usize>, flag: &str, family: &str) -> CliResult<usize> {
    value.ok_or_else(|| Failure::Usage(format!("the {family} family needs --{flag}")))
}

fn family_from(name: FamilyName, p: &FamilyParams, sized_by_bench: bool) -> CliResult<Family> {
    // Bench resizes random and covariant games itself.
    let dims = |family: &str| -> CliResult<(usize, usize)> {
        if sized_by_bench {
            return Ok((1, 1));
        }
        Ok((require(p.rows, "rows", family)?, require(p.cols, "cols", family)?))
    };
    Ok(match name {
        FamilyName::Random => {
            let (rows, cols) = dims("random")?;
            Family::Random { rows, cols }
        }
        FamilyName::Covariant => {
            let (rows, cols) = dims("covariant")?;
            let rho = p.rho.ok_or_else(|| Failure::Usage("the covariant family needs --rho".into()))?;
            Family::Covariant { rows, cols, rho }
        }
        FamilyName::Gamma => {
            Family::Gamma { r_prime: require(p.rows, "rows", "gamma")?, c_prime: require(p.cols, "cols", "gamma")? }
        }
        FamilyName::Padded => Family::Padded {
            rows: require(p.rows, "rows", "padded")?,
            cols: require(p.cols, "cols", "padded")?,
            r_prime: require(p.block_rows, "block-rows", "padded")?,
            c_prime: require(p.block_cols, "block-cols", "padded")?,
        },
        FamilyName::Omega => Family::Omega {
            k: require(p.k, "k", "omega")?,
            epsilon: p.epsilon.clone().unwrap_or_else(default_epsilon),
            big_z: p.z.clone().unwrap_or_else(default_big_z),
        },
    })
}

fn is_randomized(name: FamilyName) -> bool {
    matches!(name, FamilyName::Random | FamilyName::Covariant)
}

fn generate(name: FamilyName, params: &FamilyParams, seed: Option<u64>, out: Option<&Path>) -> CliResult<()> {
    let family = family_from(name, params, false)?;
    let seed = if is_randomized(name) { resolve_seed(seed, "seed") } else { seed.unwrap_or(0) };
    let game = GeneratorSpec::new(family, seed).generate()?;
    let text = serialize_any(&game);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => emit(&text),
    }
}

fn labels(indices: &std::collections::BTreeSet<usize>) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn set_json(set: &StrategySet) -> Value {
    json!({ "rows": labels(&set.rows), "cols": labels(&set.cols), "size": set.size() })
}

fn report_json(report: &CurbReport) -> Value {
    let mut v = set_json(&report.set);
    v["lfp_calls"] = json!(report.lfp_calls);
    v["minimal"] = json!(report.minimal);
    v["seed"] = json!(report.seed.map(|s| s.to_string()));
    v
}

fn report_line(report: &CurbReport) -> String {
    format!("{}  size {}  lfp_calls {}", report.set, report.size(), report.lfp_calls)
}

fn solve<T: Scalar>(
    game: &Game<T>,
    mode: SolveMode,
    seed_strategy: Option<StrategyRef>,
    rng_seed: Option<u64>,
    json: bool,
) -> CliResult<String> {
    let (name, reports, lfp_calls, rng) = match mode {
        SolveMode::All => {
            let all = all_minimal_curb(game)?;
            ("all", all.reports, all.lfp_calls, None)
        }
        SolveMode::One => {
            let seed = resolve_seed(rng_seed, "rng seed");
            let report = one_minimal_curb(game, &mut seeded_rng(seed))?;
            let calls = report.lfp_calls;
            ("one", vec![report], calls, Some(seed))
        }
        SolveMode::Small => {
            let report = smallest_minimal_curb(game)?;
            let calls = report.lfp_calls;
            ("small", vec![report], calls, None)
        }
        SolveMode::Containing => {
            let seed = seed_strategy.ok_or_else(|| Failure::Usage("--mode containing needs --seed-strategy".into()))?;
            game.check_strategy(seed)?;
            let report = min_containing_curb(&game.view(), seed)?;
            let calls = report.lfp_calls;
            ("containing", vec![report], calls, None)
        }
    };
    if json {
        let doc = json!({
            "mode": name,
            "numeric_mode": T::MODE.to_string(),
            "rng_seed": rng,
            "lfp_calls": lfp_calls,
            "sets": reports.iter().map(report_json).collect::<Vec<_>>(),
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    }
    let mut out = format!("mode: {name}\n");
    if let Some(seed) = rng {
        out.push_str(&format!("rng seed: {seed}\n"));
    }
    for (i, report) in reports.iter().enumerate() {
        out.push_str(&format!("set {}: {}\n", i + 1, report_line(report)));
    }
    out.push_str(&format!("lfp_calls: {lfp_calls}\n"));
    Ok(out)
}

fn profile_json<T: Scalar>(p: &NashProfile<T>) -> Value {
    let mix = |m: &curbkit::MixedStrategy<T>| -> Value {
        Value::Object(m.iter().map(|(i, v)| ((i + 1).to_string(), json!(v.to_token()))).collect())
    };
    json!({ "row": mix(&p.row_mix), "col": mix(&p.col_mix), "regret": p.regret.to_token() })
}

fn nash<T: Scalar>(
    game: &Game<T>,
    preprocess: bool,
    max_support: Option<usize>,
    all: bool,
    json: bool,
) -> CliResult<String> {
    let (curb, equilibria) = if preprocess && !all && max_support.is_none() {
        let out = nash_via_curb_preprocessing(game)?;
        (Some(out.curb), out.equilibrium.into_iter().collect::<Vec<_>>())
    } else {
        let (curb, within) = if preprocess {
            let report = smallest_minimal_curb(game)?;
            let set = report.set.clone();
            (Some(report), set)
        } else {
            (None, game.full_set())
        };
        (curb, support_enumeration_nash(game, &within, max_support, !all)?)
    };
    if json {
        let doc = json!({
            "numeric_mode": T::MODE.to_string(),
            "curb": curb.as_ref().map(report_json),
            "equilibria": equilibria.iter().map(profile_json).collect::<Vec<_>>(),
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    }
    let mut out = String::new();
    if let Some(report) = &curb {
        out.push_str(&format!("curb: {}\n", report_line(report)));
    }
    if equilibria.is_empty() {
        out.push_str("no equilibrium found\n");
    }
    for (i, p) in equilibria.iter().enumerate() {
        out.push_str(&format!("equilibrium {}: {} {}  regret {}\n", i + 1, p.row_mix, p.col_mix, p.regret));
    }
    Ok(out)
}

fn bench(args: &BenchArgs) -> CliResult<()> {
    let family = family_from(args.family, &args.params, true)?;
    let rng_seed = resolve_seed(args.rng_seed, "rng seed");
    let spec = ExperimentSpec {
        generator: GeneratorSpec::new(family, 0),
        instance_count: args.instances,
        sizes: args.sizes.clone(),
        algorithms: args.algorithms.clone(),
        rng_seed,
        output: args.out.clone(),
    };
    let mut buf = Vec::new();
    match args.experiment {
        Experiment::Distribution => {
            let rows = run_distribution_experiment(&spec)?;
            if args.out.is_none() {
                write_csv_to(&mut buf, &rows)?;
            }
        }
        Experiment::Runtime => {
            let rows = run_runtime_experiment(&spec)?;
            if args.out.is_none() {
                write_csv_to(&mut buf, &rows)?;
            }
        }
    }
    if args.out.is_none() {
        emit(&String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    Ok(())
}
