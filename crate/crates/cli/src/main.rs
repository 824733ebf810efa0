//! `permcover`: covering radii of permutation group codes from the command line.
//!
//! Every invocation prints one run manifest. With `--format json` (the default)
//! the manifest, result included, goes to stdout; with `--format csv` the
//! result table goes to stdout and the manifest to stderr as a JSON line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible request, 4 failed
//! verification.

mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permcover_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "permcover", version, about = "Covering radii of permutation group codes under the l-infinity metric")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the solvers.
    #[arg(long, env = "PERMCOVER_THREADS", global = true)]
    threads: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Leave wall time out of the manifest so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed-form radius or bound.
    Formulas(FormulaArgs),
    /// Build and verify an exposed permutation.
    Witness(WitnessArgs),
    /// Exact covering radius of a code.
    Radius(RadiusArgs),
    /// Exact r(D_n) over a range of n, with bound annotations.
    Table1(Table1Args),
    /// A-set breakdown of the exposure test for one permutation.
    Explain(ExplainArgs),
    /// Largest and smallest radius over all relabelings.
    Extrema(ExtremaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Query {
    RCyclic,
    LmaxCyclic,
    RPq,
    LmaxPq,
    RProduct,
    LmaxProduct,
    DnBounds,
    DnWeakLower,
    LminCyclicLower,
    LminPqLower,
}

#[derive(Args, Debug, Serialize)]
pub struct FormulaArgs {
    #[arg(long, value_enum)]
    query: Query,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    /// Factor profile, e.g. `4,3,2`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    parts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Pq,
    Lmax,
    Dn,
    DnRefined,
}

#[derive(Args, Debug, Serialize)]
pub struct WitnessArgs {
    #[arg(long, value_enum, required_unless_present = "verify")]
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    /// Re-complete the placement at random this many times and verify each.
    #[arg(long, default_value_t = 0)]
    recomplete: usize,
    /// Verify a bundle read from a JSON file instead of building one.
    #[arg(long, conflicts_with = "family")]
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct RadiusArgs {
    /// Code descriptor JSON, e.g. `{"kind":"dihedral","n":12}`.
    #[arg(long)]
    code: String,
    /// Run only the restricted search with this guess.
    #[arg(long, conflicts_with = "force_bruteforce")]
    #[serde(skip_serializing_if = "Option::is_none")]
    rtilde: Option<usize>,
    #[arg(long)]
    force_bruteforce: bool,
    /// Lift the brute-force degree cap.
    #[arg(long)]
    cap_override: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct Table1Args {
    #[arg(long, default_value_t = 3)]
    from: usize,
    #[arg(long, default_value_t = 20)]
    to: usize,
    /// Allow degrees above 20.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ExplainArgs {
    #[arg(long)]
    code: String,
    /// Permutation in one-line form, e.g. `[3,1,2]`.
    #[arg(long)]
    perm: String,
    #[arg(long)]
    r: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ExtremaArgs {
    #[arg(long, required_unless_present = "reduction")]
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<String>,
    /// Check L_min(G_{p,q}) >= L_min(G_p) exhaustively for `p,q`.
    #[arg(long, value_delimiter = ',', conflicts_with = "code")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reduction: Vec<usize>,
    /// Scan every conjugator instead of one per distinct code.
    #[arg(long)]
    no_quotient: bool,
    #[arg(long)]
    cap_override: bool,
}

/// What a command hands back: a JSON payload and, for tabular results, CSV.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: Value,
    version: &'static str,
    threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorReport>,
}

#[derive(Serialize)]
struct ErrorReport {
    kind: &'static str,
    message: String,
}

pub struct Context {
    pub threads: Option<usize>,
    pub seed: u64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegreeCap { .. } => 3,
        Error::VerificationFailed(_) => 4,
        _ => 2,
    }
}

fn error_kind(code: u8) -> &'static str {
    match code {
        3 => "infeasible",
        4 => "verification",
        _ => "validation",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let ctx = Context {
        threads: cli.threads,
        seed: cli.seed,
    };
    let (name, params, outcome) = match &cli.command {
        Command::Formulas(a) => ("formulas", to_value(a), commands::formulas(a)),
        Command::Witness(a) => ("witness", to_value(a), commands::witness(a, &ctx)),
        Command::Radius(a) => ("radius", to_value(a), commands::radius(a, &ctx)),
        Command::Table1(a) => ("table1", to_value(a), commands::table1(a, &ctx)),
        Command::Explain(a) => ("explain", to_value(a), commands::explain(a)),
        Command::Extrema(a) => ("extrema", to_value(a), commands::extrema(a, &ctx)),
    };
    let mut params = params;
    if let Value::Object(m) = &mut params {
        m.insert("seed".into(), cli.seed.into());
    }
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut manifest = RunManifest {
        command: name,
        parameters: params,
        version: env!("CARGO_PKG_VERSION"),
        threads,
        wall_time_ms: None,
        result: None,
        error: None,
    };
    let (code, csv) = match outcome {
        Ok(out) => {
            manifest.result = Some(out.json);
            (0, out.csv)
        }
        Err(e) => {
            let code = exit_code(&e);
            manifest.error = Some(ErrorReport {
                kind: error_kind(code),
                message: e.to_string(),
            });
            (code, None)
        }
    };
    if !cli.no_timing {
        manifest.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let line = serde_json::to_string(&manifest).expect("manifest serialises");
    match (cli.format, csv) {
        (Format::Csv, Some(table)) => {
            print!("{table}");
            eprintln!("{line}");
        }
        (Format::Csv, None) if code == 0 => {
            // non-tabular result: the manifest is the output
            println!("{line}");
        }
        _ if code != 0 => {
            println!("{line}");
            eprintln!("error: {}", manifest.error.as_ref().map_or("", |e| e.message.as_str()));
        }
        _ => println!("{line}"),
    }
    ExitCode::from(code)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}
