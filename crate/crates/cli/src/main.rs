use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use hyperdyn::cb_rank::{
    admits_expansive_kp, admits_hyper_expansive, build_adjacent_example, limit_degree,
    OrdinalDescriptor, SpaceTree,
};
use hyperdyn::dynamics::{
    build_finite_system, build_theorem2_system, build_translation_example, classify_all, Verdict,
};
use hyperdyn::oracle::{auto_horizon, separation_constant, SeparationReport};
use hyperdyn::{parse_space, Error, Rational, SymbolicSystem};

mod export;

#[derive(Parser)]
#[command(name = "hyperdyn", version, about = "Hyper-expansive dynamics on countable compact subsets of the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a catalog space as JSON.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Report the verdict for a system, or CB data for a tree.
    Analyze(InputArg),
    /// Run the window separation oracle on a system.
    Oracle(OracleArgs),
    /// Orbit graph of a system.
    Export {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "dot")]
        format: ExportFormat,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Fixed limit points with one logistic chain per gap.
    Theorem2 {
        #[arg(long, value_delimiter = ',', required = true)]
        limits: Vec<Rational>,
    },
    /// `{0} ∪ {1/m}` with a single orbit through every `1/m`.
    Translation,
    /// Depth-k stage of the adjacent-pair construction.
    Adjacent {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 8)]
        tail: u64,
    },
    /// Finite space of periodic cycles; repeat --cycle for each cycle.
    Finite {
        #[arg(long, required = true)]
        cycle: Vec<Cycle>,
    },
}

#[derive(Args)]
struct InputArg {
    /// Input file; stdin when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArg,
    /// Window size M.
    #[arg(long, required_unless_present = "curve")]
    window: Option<u64>,
    /// Horizon N, or `auto`.
    #[arg(long, default_value = "auto")]
    horizon: Horizon,
    /// Only nested pairs A ⊊ B.
    #[arg(long)]
    nested: bool,
    /// Inclusive range of window sizes, e.g. `2..5`.
    #[arg(long, conflicts_with = "window")]
    curve: Option<CurveRange>,
    /// Exit 1 when some reported c is below this value.
    #[arg(long)]
    assert_delta: Option<Rational>,
}

#[derive(Clone, Copy)]
enum Horizon {
    Auto,
    Fixed(u64),
}

impl std::str::FromStr for Horizon {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Horizon::Auto);
        }
        s.parse()
            .map(Horizon::Fixed)
            .map_err(|_| format!("expected a non-negative integer or `auto`, got {s:?}"))
    }
}

#[derive(Clone, Copy)]
struct CurveRange(u64, u64);

impl std::str::FromStr for CurveRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected M1..M2, got {s:?}");
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let a: u64 = a.parse().map_err(|_| bad())?;
        let b: u64 = b.parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(bad());
        }
        Ok(CurveRange(a, b))
    }
}

/// Comma-separated points of one cycle, in orbit order.
#[derive(Clone)]
struct Cycle(Vec<Rational>);

impl std::str::FromStr for Cycle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        s.split(',').map(str::parse).collect::<Result<_, _>>().map(Cycle)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

/// Why a command failed, mapped to the exit code.
enum Failure {
    Assert(String),
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, failure) = match run(cli.command) {
        Ok(out) => (Some(out), None),
        Err(Failure::Assert(out)) => (Some(out), Some((1, "assertion failed".to_string()))),
        Err(Failure::Input(msg)) => (None, Some((2, msg))),
        Err(Failure::Resource(msg)) => (None, Some((3, msg))),
    };
    if let Some(out) = out {
        let mut stdout = io::stdout().lock();
        if stdout.write_all(out.as_bytes()).is_err() {
            return ExitCode::from(2);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some((code, msg)) => {
            eprintln!("hyperdyn: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Build { kind } => cmd_build(kind),
        Command::Analyze(input) => cmd_analyze(&read_input(&input)?),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Export { input, format } => cmd_export(&read_input(&input)?, format),
    }
}

fn read_input(arg: &InputArg) -> Result<String, Failure> {
    let mut text = String::new();
    match &arg.input {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

enum Document {
    System(SymbolicSystem),
    Tree(SpaceTree),
}

fn parse_document(text: &str) -> Result<Document, Failure> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("parse error: {e}")))?;
    let has = |key: &str| value.get(key).is_some();
    match (has("roots"), has("limits")) {
        (true, false) => Ok(Document::Tree(SpaceTree::from_json(text)?)),
        (false, true) => Ok(Document::System(parse_space(text)?)),
        _ => Err(Failure::Input(
            "input is neither a space description nor a tree".into(),
        )),
    }
}

fn parse_system(text: &str) -> Result<SymbolicSystem, Failure> {
    match parse_document(text)? {
        Document::System(s) => Ok(s),
        Document::Tree(_) => Err(Failure::Input(
            "expected a space description, got a tree".into(),
        )),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_build(kind: BuildKind) -> CmdResult {
    let json = match kind {
        BuildKind::Theorem2 { limits } => build_theorem2_system(&limits)?.to_json(),
        BuildKind::Translation => build_translation_example().to_json(),
        BuildKind::Adjacent { depth, tail } => build_adjacent_example(depth, tail)
            .map_err(|e| Failure::Input(e.to_string()))?
            .tree
            .to_json(),
        BuildKind::Finite { cycle } => {
            let cycles: Vec<Vec<Rational>> = cycle.into_iter().map(|c| c.0).collect();
            build_finite_system(&cycles)?.to_json()
        }
    };
    Ok(format!("{json}\n"))
}

#[derive(Serialize)]
struct PeriodicEntry {
    point: Rational,
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Rational>,
}

#[derive(Serialize)]
pub(crate) struct SystemReport {
    #[serde(flatten)]
    verdict: Verdict,
    periodic: Vec<PeriodicEntry>,
}

#[derive(Serialize)]
struct TreeReport {
    admits_hyper_expansive: bool,
    card_acu: Option<usize>,
    limit_degree: OrdinalDescriptor,
    admits_expansive: bool,
}

pub(crate) fn system_report(system: &SymbolicSystem) -> SystemReport {
    use hyperdyn::dynamics::{hyper_expansive_verdict, FixedPointClass};
    let periodic = classify_all(system)
        .into_iter()
        .map(|(p, class)| PeriodicEntry {
            point: system.value(p),
            class: class.label(),
            gamma: match class {
                FixedPointClass::Attractor { gamma } | FixedPointClass::Repeller { gamma } => {
                    Some(gamma)
                }
                _ => None,
            },
        })
        .collect();
    SystemReport {
        verdict: hyper_expansive_verdict(system),
        periodic,
    }
}

fn cmd_analyze(text: &str) -> CmdResult {
    match parse_document(text)? {
        Document::System(s) => Ok(pretty(&system_report(&s))),
        Document::Tree(t) => {
            let admits = admits_hyper_expansive(&t);
            let d = limit_degree(&t)?;
            Ok(pretty(&TreeReport {
                admits_hyper_expansive: admits.admits,
                card_acu: admits.card_acu,
                limit_degree: d,
                admits_expansive: admits_expansive_kp(d),
            }))
        }
    }
}

fn cmd_oracle(args: OracleArgs) -> CmdResult {
    let system = parse_system(&read_input(&args.input)?)?;
    let sizes: Vec<u64> = match (args.curve, args.window) {
        (Some(CurveRange(a, b)), _) => (a..=b).collect(),
        (None, Some(m)) => vec![m],
        (None, None) => unreachable!("clap requires one of them"),
    };
    let reports: Vec<SeparationReport> = sizes
        .into_iter()
        .map(|m| {
            let n = match args.horizon {
                Horizon::Auto => auto_horizon(&system, m),
                Horizon::Fixed(n) => n,
            };
            separation_constant(&system, m, n, args.nested)
        })
        .collect::<Result<_, _>>()?;
    let out = if args.curve.is_some() {
        pretty(&reports)
    } else {
        pretty(&reports[0])
    };
    match &args.assert_delta {
        Some(d) if reports.iter().any(|r| r.c < *d) => Err(Failure::Assert(out)),
        _ => Ok(out),
    }
}

fn cmd_export(text: &str, format: ExportFormat) -> CmdResult {
    let system = parse_system(text)?;
    Ok(match format {
        ExportFormat::Dot => export::to_dot(&system),
        ExportFormat::Json => pretty(&export::to_json(&system)),
    })
}
