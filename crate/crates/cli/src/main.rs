mod commands;
mod error;
mod io;
mod manifest;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symspace_core::norms::NormSpec;
use symspace_core::suite::Suite;

use commands::{MethodArg, Outcome, Output};
use error::CliError;
use manifest::RunManifest;

const DEFAULT_PRECISION: i32 = 40;

#[derive(Parser)]
#[command(name = "symspace", version, about = "Exact computations on rearrangement-invariant function spaces")]
struct Cli {
    /// Input document, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Output destination, or `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Wrap the result in a run manifest.
    #[arg(long, global = true)]
    manifest: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decreasing rearrangement of a step function.
    Rearrange,
    /// Distribution function `y ↦ μ{|f| > y}`.
    Distribution,
    /// Whether `{"f", "g"}` are equimeasurable.
    Equimeasurable,
    /// Measure-preserving map `φ` with `f = ξ_f ∘ φ`, verified.
    Transport,
    /// Upper and right cutoff residual norms for `n = 1..=n_max`.
    Cutoff {
        #[arg(long, value_parser = parse_spec)]
        spec: NormSpec,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Norms of one function (JSON) or of an array of functions (CSV table).
    Norm {
        /// Repeatable: `Lp:3/2`, `LInf`, `L1CapLInf`, `L1PlusLInf`,
        /// `LInfPlusTail` or `{"variant":"Lp","p":"1/2"}`.
        #[arg(long, value_parser = parse_spec, required = true)]
        spec: Vec<NormSpec>,
    },
    /// Associate (Köthe dual) norm.
    DualNorm {
        #[arg(long, value_parser = parse_spec)]
        spec: NormSpec,
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
        /// Cells per segment of the rearrangement in the oracle.
        #[arg(long, default_value_t = 1)]
        refinement: usize,
    },
    /// Second associate norm, compared against the norm itself.
    SecondDual {
        #[arg(long, value_parser = parse_spec)]
        spec: NormSpec,
    },
    /// Gap between the norm of a limit and the sup over a chain `{"chain", "limit"}`.
    PropertyC {
        #[arg(long, value_parser = parse_spec)]
        spec: NormSpec,
    },
    /// Fatou check on `{"sequence", "limit"}`.
    Fatou {
        #[arg(long, value_parser = parse_spec)]
        spec: NormSpec,
    },
    /// Boolean algebra generated by `{"n", "generators"}` with its Stone representation.
    Stone,
    /// Randomized invariant suite; always emits a manifest.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_spec(s: &str) -> Result<NormSpec, String> {
    commands::parse_spec(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: symspace_core::Error| e.to_string())
}

/// Comparison tolerance `2^-k`, with `k` from `SYMSPACE_PRECISION`.
fn tolerance() -> Result<f64, CliError> {
    let k = match std::env::var("SYMSPACE_PRECISION") {
        Ok(s) => s
            .trim()
            .parse::<i32>()
            .ok()
            .filter(|k| (1..=52).contains(k))
            .ok_or_else(|| CliError::Input(format!("SYMSPACE_PRECISION must be an integer in 1..=52, got {s:?}")))?,
        Err(_) => DEFAULT_PRECISION,
    };
    Ok(2f64.powi(-k))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Rearrange => "rearrange",
        Command::Distribution => "distribution",
        Command::Equimeasurable => "equimeasurable",
        Command::Transport => "transport",
        Command::Cutoff { .. } => "cutoff",
        Command::Norm { .. } => "norm",
        Command::DualNorm { .. } => "dual-norm",
        Command::SecondDual { .. } => "second-dual",
        Command::PropertyC { .. } => "property-c",
        Command::Fatou { .. } => "fatou",
        Command::Stone => "stone",
        Command::Verify { .. } => "verify",
    }
}

fn dispatch(cli: &Cli, input: &str) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Rearrange => commands::rearrange(input),
        Command::Distribution => commands::distribution_cmd(input),
        Command::Equimeasurable => commands::equimeasurable_cmd(input),
        Command::Transport => commands::transport(input),
        Command::Cutoff { spec, n_max, format } => commands::cutoff(input, spec, *n_max, *format == Format::Csv),
        Command::Norm { spec } => commands::norm_cmd(input, spec),
        Command::DualNorm {
            spec,
            method,
            refinement,
        } => commands::dual_norm(input, spec, *method, *refinement),
        Command::SecondDual { spec } => commands::second_dual(input, spec, tolerance()?),
        Command::PropertyC { spec } => commands::property_c(input, spec),
        Command::Fatou { spec } => commands::fatou(input, spec),
        Command::Stone => commands::stone(input),
        Command::Verify { suite, n, seed } => commands::verify(*suite, *n, *seed),
    }
}

fn render(cli: &Cli, input: &[u8], outcome: Outcome) -> Result<String, CliError> {
    let seed = match &cli.command {
        Command::Verify { seed, .. } => Some(*seed),
        _ => None,
    };
    if cli.manifest || seed.is_some() {
        let outputs = match outcome.output {
            Output::Json(v) => v,
            Output::Csv(s) => serde_json::Value::String(s),
        };
        let m = RunManifest::new(command_name(&cli.command), input, seed, outputs);
        return Ok(serde_json::to_string_pretty(&m)? + "\n");
    }
    Ok(match outcome.output {
        Output::Json(v) => serde_json::to_string_pretty(&v)? + "\n",
        Output::Csv(s) => s,
    })
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    tolerance()?;
    let input = match &cli.command {
        Command::Verify { suite, n, seed } => format!("suite={suite} n={n} seed={seed}"),
        _ => io::read_input(&cli.input)?,
    };
    let outcome = dispatch(cli, &input)?;
    let violation = outcome.violation;
    io::write_output(&cli.output, &render(cli, input.as_bytes(), outcome)?)?;
    Ok(violation)
}

fn main() -> ExitCode {
    // clap's own usage errors exit with 2, which is reserved for violations here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result))
}

/// 0 success, 1 input error, 2 property violation.
fn exit_code(result: &Result<bool, CliError>) -> u8 {
    match result {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(_) => 1,
    }
}
