//! `trop-moduli`: enumerate strata, export the cone complex and run the
//! verification checks from the command line.
//!
//! JSON reports go to stdout, progress to stderr. Exit status: 0 on success,
//! 1 if a verification verdict is FAIL, 2 on bad usage, 3 when the request is
//! outside the supported range of n.

mod commands;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use trop_moduli::report::DEFAULT_SEED;
use trop_moduli::Verdict;

#[derive(Debug, Parser)]
#[command(
    name = "trop-moduli",
    version,
    about = "Stable genus-0 tropical curves as a cone complex"
)]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List stable trees up to isomorphism, by number of edges.
    Enumerate(EnumerateArgs),
    /// Export the face poset as JSON, or a graph as DOT.
    Complex(ComplexArgs),
    /// Compute the automorphism group and check it against S_n.
    Aut(AutArgs),
    /// Check the expansion-count formula or the power-of-two lemma.
    Count(CountArgs),
    /// Build the genus-2 complex and search for automorphisms.
    Genus2(Genus2Args),
    /// Run the full verification battery.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Only list strata with this many edges.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotKind {
    Hasse,
    Compat,
}

#[derive(Debug, Args)]
struct ComplexArgs {
    #[arg(long)]
    n: usize,
    /// Emit DOT for the Hasse diagram or the compatibility graph instead of JSON.
    #[arg(long, value_enum)]
    dot: Option<DotKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Graph,
    Poset,
    Both,
}

#[derive(Debug, Args)]
struct AutArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
    format: JsonOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum JsonOnly {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountCheck {
    Formula,
    Lemma,
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Marking count for the formula check.
    #[arg(long, required_if_eq("check", "formula"))]
    n: Option<usize>,
    #[arg(long, value_enum)]
    check: CountCheck,
    /// Largest exponent in the lemma sweep.
    #[arg(long, default_value_t = trop_moduli::report::LEMMA_BOUND)]
    bound: u64,
    #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
    format: JsonOnly,
}

#[derive(Debug, Args)]
struct Genus2Args {
    /// Run the automorphism search, not just the fixture checks.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
    format: JsonOnly,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 6)]
    max_n: usize,
}

#[derive(Debug, Serialize)]
struct RunReport {
    schema: u32,
    subcommand: &'static str,
    parameters: Value,
    wall_time_ms: u128,
    verdict: Verdict,
    payload: Value,
}

/// What a subcommand produced.
pub enum Output {
    Report { verdict: Verdict, payload: Value },
    Text(String),
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<trop_moduli::Error>() {
        Some(e) if e.is_resource() => 3,
        _ => 2,
    }
}

/// Write to stdout; a closed pipe is not an error.
fn emit(text: &str) -> ExitCode {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (name, parameters, result) = commands::run(&cli.command, cli.seed);
    let wall_time_ms = start.elapsed().as_millis();
    match result {
        Ok(Output::Text(text)) => emit(&text),
        Ok(Output::Report { verdict, payload }) => {
            let report = RunReport {
                schema: 1,
                subcommand: name,
                parameters,
                wall_time_ms,
                verdict,
                payload,
            };
            let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            eprintln!("{name}: {verdict} in {wall_time_ms} ms");
            if emit(&json) != ExitCode::SUCCESS || verdict == Verdict::Fail {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
