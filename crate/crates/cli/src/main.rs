//! `snp`: validate, export, simulate, analyze and query SN P systems.
//!
//! Exit status: 0 on success or a reachable target, 1 for an invalid system
//! or an unreachable target, 2 for usage and parse errors.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use snp_core::engine::{run_trace, trace_identity_reports, Computation, DelayMode, Policy, DEFAULT_NODE_LIMIT};
use snp_core::reachability::{reach_between, verify_delay_closed_form, Verdict};
use snp_core::{parse_system, validate, SnpSystem};

#[derive(Parser, Debug)]
#[command(name = "snp", version, about = "Matrix tools for spiking neural P systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Standard,
    PaperTrace,
}

impl From<Mode> for DelayMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Standard => DelayMode::Standard,
            Mode::PaperTrace => DelayMode::PaperTrace,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    First,
    Random,
    Exhaustive,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a system description and list every problem found.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the spiking, augmented, production, consumption and structure matrices.
    Matrices {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the system and print the per-step vectors.
    Simulate {
        path: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::First)]
        policy: PolicyArg,
        /// Required with `--policy random`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Mode::Standard)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Structural report; for systems with delays also compares the step formulas along a trace.
    Analyze {
        path: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::Standard)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether a configuration is reachable within a step bound.
    Reach {
        path: PathBuf,
        /// Target configuration, e.g. `2,1,2`.
        #[arg(long)]
        target: String,
        /// Step bound from the initial configuration.
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        /// Start from this configuration instead of the initial one.
        #[arg(long)]
        from: Option<String>,
        /// Step bound when `--from` is given.
        #[arg(long)]
        vmax: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    /// Bad flags, unreadable file or parse error.
    Usage(String),
    /// The system does not validate.
    Invalid(String),
}

fn load(path: &Path) -> Result<SnpSystem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| Failure::Usage(format!("{}:{}: {e}", path.display(), e.line())))
}

fn load_valid(path: &Path) -> Result<SnpSystem, Failure> {
    let sys = load(path)?;
    let report = validate(&sys);
    if report.is_valid() {
        Ok(sys)
    } else {
        Err(Failure::Invalid(render::issues(&sys, &report)))
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

fn parse_vector(flag: &str, text: &str, len: usize) -> Result<Vec<i64>, Failure> {
    let values: Result<Vec<u64>, _> = text.split(',').map(|s| s.trim().parse::<u64>()).collect();
    let values = values.map_err(|_| Failure::Usage(format!("--{flag} expects comma-separated nonnegative integers")))?;
    if values.len() != len {
        return Err(Failure::Usage(format!("--{flag} has {} entries, the system has {len} neurons", values.len())));
    }
    Ok(values.into_iter().map(|v| v as i64).collect())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { path, format } => {
            let sys = load(&path)?;
            let report = validate(&sys);
            match format {
                Format::Json => print_json(&report),
                Format::Text => print!("{}", render::validation(&sys, &report)),
            }
            Ok(if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Matrices { path, format } => {
            let sys = load_valid(&path)?;
            let set = render::MatrixSet::of(&sys);
            match format {
                Format::Json => print_json(&set),
                Format::Text => print!("{}", set.text()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { path, steps, policy, seed, mode, format } => {
            let policy = match (policy, seed) {
                (PolicyArg::Random, Some(s)) => Policy::SeededRandom(s),
                (PolicyArg::Random, None) => return Err(Failure::Usage("--policy random needs --seed".into())),
                (_, Some(_)) => return Err(Failure::Usage("--seed only applies to --policy random".into())),
                (PolicyArg::First, None) => Policy::First,
                (PolicyArg::Exhaustive, None) => Policy::Exhaustive { node_limit: DEFAULT_NODE_LIMIT },
            };
            let sys = load_valid(&path)?;
            let computation = run_trace(&sys, steps, policy, mode.into()).map_err(|e| Failure::Usage(e.to_string()))?;
            match (computation, format) {
                (Computation::Linear(t), Format::Json) => {
                    for r in &t.records {
                        print_json(r);
                    }
                    print_json(&render::TraceSummary::of(&t));
                }
                (Computation::Linear(t), Format::Text) => print!("{}", render::trace(&sys, &t)),
                (Computation::Tree(tree), Format::Json) => {
                    let traces = tree.leaf_traces();
                    for t in &traces {
                        print_json(t);
                    }
                    print_json(&render::TreeSummary::of(mode.into(), &traces));
                }
                (Computation::Tree(tree), Format::Text) => print!("{}", render::tree(&sys, &tree.leaf_traces())),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { path, steps, mode, format } => {
            let sys = load_valid(&path)?;
            let delay = if sys.has_delays() {
                let Computation::Linear(trace) = run_trace(&sys, steps, Policy::First, mode.into())
                    .map_err(|e| Failure::Usage(e.to_string()))?
                else {
                    unreachable!("first policy gives one trace")
                };
                let identities =
                    trace_identity_reports(&sys, &trace.spiking_vectors(), mode.into()).map_err(|e| Failure::Usage(e.to_string()))?;
                let closed_form = verify_delay_closed_form(&sys, &trace).map_err(|e| Failure::Usage(e.to_string()))?;
                Some(render::DelayAnalysis { mode: mode.into(), steps, identities, closed_form })
            } else {
                None
            };
            let analysis = render::Analysis { structure: snp_core::forms::structural_report(&sys), delay };
            match format {
                Format::Json => print_json(&analysis),
                Format::Text => print!("{}", analysis.text(&sys)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reach { path, target, kmax, from, vmax, format } => {
            let sys = load_valid(&path)?;
            let m = sys.neuron_count();
            let to = parse_vector("target", &target, m)?;
            let (origin, bound) = match (from, vmax) {
                (Some(f), v) => (parse_vector("from", &f, m)?, v.unwrap_or(kmax)),
                (None, Some(_)) => return Err(Failure::Usage("--vmax needs --from".into())),
                (None, None) => (sys.initial_configuration(), kmax),
            };
            let cert = reach_between(&sys, &origin, &to, bound).map_err(|e| Failure::Usage(e.to_string()))?;
            match format {
                Format::Json => print_json(&cert),
                Format::Text => print!("{}", render::certificate(&cert)),
            }
            Ok(if cert.verdict == Verdict::Reachable { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprint!("{msg}");
            ExitCode::from(1)
        }
    }
}
