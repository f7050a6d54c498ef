use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use planar_cc::exclusion::Ordering;
use planar_cc_cli::candidates::parse_candidates;
use planar_cc_cli::commands::{cmd_bench, cmd_search, cmd_verify, search_banner, BenchGrid, OutputPaths, RunManifest};
use planar_cc_cli::CliError;

/// Rigorous enumeration and verification of planar central configurations
/// of the equal-mass n-body problem.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "PLANAR_CC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find every central configuration of n equal masses.
    Search(SearchArgs),
    /// Certify candidate configurations given by their points.
    Verify(VerifyArgs),
    /// Time searches over a grid of settings and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Increasing,
    Decreasing,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Increasing => Ordering::Increasing,
            OrderingArg::Decreasing => Ordering::Decreasing,
        }
    }
}

#[derive(Args)]
struct Outputs {
    /// Text report path (printed to stdout when omitted).
    #[arg(long, env = "PLANAR_CC_REPORT")]
    report: Option<PathBuf>,
    /// Solutions file with exact interval bounds.
    #[arg(long, env = "PLANAR_CC_SOLUTIONS")]
    solutions: Option<PathBuf>,
    /// Directory for one SVG per configuration.
    #[arg(long, env = "PLANAR_CC_SVG_DIR")]
    svg_dir: Option<PathBuf>,
}

impl From<Outputs> for OutputPaths {
    fn from(o: Outputs) -> Self {
        OutputPaths {
            report: o.report,
            solutions: o.solutions,
            svg_dir: o.svg_dir,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, env = "PLANAR_CC_N")]
    n: usize,
    #[arg(long, env = "PLANAR_CC_EPS", default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, env = "PLANAR_CC_BIAS", default_value_t = 1e-2)]
    bias: f64,
    #[arg(long, env = "PLANAR_CC_OVERLAP", default_value_t = 1e-3)]
    overlap: f64,
    #[arg(long, env = "PLANAR_CC_ORDERING", value_enum, default_value_t = OrderingArg::Decreasing)]
    ordering: OrderingArg,
    /// Allow n above 7.
    #[arg(long, env = "PLANAR_CC_ALLOW_LARGE")]
    allow_large: bool,
    /// Print progress to stderr.
    #[arg(long)]
    progress: bool,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Candidate file: `x y` per body, blank lines between configurations.
    #[arg(long, env = "PLANAR_CC_CANDIDATES")]
    candidates: PathBuf,
    /// Initial half-width of the verification box.
    #[arg(long, env = "PLANAR_CC_DELTA", default_value_t = 1e-6)]
    delta: f64,
    /// Largest half-width tried (the width doubles on each failure).
    #[arg(long, env = "PLANAR_CC_MAX_DELTA", default_value_t = 1e-3)]
    max_delta: f64,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [4])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-2])]
    bias: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [OrderingArg::Decreasing])]
    ordering: Vec<OrderingArg>,
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 1e-3)]
    overlap: f64,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Manifest(e.to_string()))?;
    }
    match cli.command {
        Cmd::Search(a) => {
            let mut m = RunManifest::search(a.n)?;
            m.config.eps = a.eps;
            m.config.bias = a.bias;
            m.config.overlap = a.overlap;
            m.config.ordering = a.ordering.into();
            m.config.progress = a.progress;
            m.allow_large = a.allow_large;
            let print = a.outputs.report.is_none();
            m.outputs = a.outputs.into();
            let run = cmd_search(&m)?;
            if print {
                print!("{}", run.report);
            }
            if let Some(b) = search_banner(&run) {
                eprintln!("{b}");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify(a) => {
            let text = std::fs::read_to_string(&a.candidates).map_err(|e| CliError::Io { path: a.candidates.clone(), source: e })?;
            let mut m = RunManifest::verify(parse_candidates(&text)?);
            m.verify.delta = a.delta;
            m.verify.max_delta = a.max_delta;
            let print = a.outputs.report.is_none();
            m.outputs = a.outputs.into();
            let run = cmd_verify(&m)?;
            if print {
                print!("{}", run.report);
            }
            if !run.all_verified() {
                eprintln!("*** some candidates could not be verified ***");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench(a) => {
            let grid = BenchGrid {
                ns: a.n,
                biases: a.bias,
                orderings: a.ordering.into_iter().map(Ordering::from).collect(),
                eps: a.eps,
                overlap: a.overlap,
            };
            match a.output {
                Some(p) => {
                    let f = std::fs::File::create(&p).map_err(|e| CliError::Io { path: p.clone(), source: e })?;
                    cmd_bench(&grid, f)?;
                }
                None => {
                    cmd_bench(&grid, std::io::stdout().lock())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
