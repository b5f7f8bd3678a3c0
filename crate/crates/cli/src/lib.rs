//! Command-line front end for `mqi-core`: body files, run reports, graph
//! export and the randomized suites.

pub mod bodies;
pub mod commands;
pub mod error;
pub mod export;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use error::CliError;
use export::GraphFormat;
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "mqi", version, about = "Mixed volumes and Minkowski's quadratic inequality for 3D polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Seed for random bodies and suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Command specific tolerance (kernel window, cluster tolerance).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Target element length on graph edges.
    #[arg(long = "mesh-h", global = true)]
    pub mesh_h: Option<f64>,
    /// Absolute tolerance of the adaptive arc quadrature.
    #[arg(long = "quad-tol", global = true, default_value_t = 1e-10)]
    pub quad_tol: f64,
    /// Number of eigenvalues (spectrum) or of clusters (lower-spectrum).
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Body K: builtin name or PolytopeFile path.
    #[arg(long = "K", global = true)]
    pub k: Option<String>,
    #[arg(long = "L", global = true)]
    pub l: Option<String>,
    #[arg(long = "M", global = true)]
    pub m: Option<String>,
    /// Normal of the plane containing a lower dimensional M: `x,y,z` or e1, e2, e3.
    #[arg(long, global = true)]
    pub w: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Expect {
    Equality,
    Strict,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// V(K,L,M) by polarization and by measure integration.
    Mixvol,
    /// The quadratic deficit V(K,L,M)^2 - V(K,K,M) V(L,L,M).
    Deficit,
    /// Metric graph of M with its structural checks; optionally export it.
    Graph {
        #[arg(long, value_enum)]
        export: Option<GraphFormat>,
        /// Destination of the exported graph (standard output when absent).
        #[arg(long = "graph-out")]
        graph_out: Option<PathBuf>,
    },
    /// Leading spectrum and kernel of the discretized operator of M.
    Spectrum,
    /// Equality certificate for full-dimensional M.
    CertifyFull {
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Equality certificate for M of dimension 1 or 2.
    CertifyLower {
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Weak stability inequality with its explicit witness.
    Stability,
    /// Quantitative rigidity inequality.
    Rigidity,
    /// Spectrum clusters of the operator for lower dimensional M.
    LowerSpectrum,
    /// Seeded randomized suite.
    Randtest {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        n: u64,
    },
    /// A short tour of the library on fixed bodies.
    Demo,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mixvol => "mixvol",
            Command::Deficit => "deficit",
            Command::Graph { .. } => "graph",
            Command::Spectrum => "spectrum",
            Command::CertifyFull { .. } => "certify-full",
            Command::CertifyLower { .. } => "certify-lower",
            Command::Stability => "stability",
            Command::Rigidity => "rigidity",
            Command::LowerSpectrum => "lower-spectrum",
            Command::Randtest { .. } => "randtest",
            Command::Demo => "demo",
        }
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parse, run, print. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(report) => {
            eprintln!("{}: {}", report.command, if report.passed { "pass" } else { "FAIL" });
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("mqi {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

/// Run the command and emit its report (and graph export, if requested).
pub fn execute(cli: &Cli) -> Result<report::RunReport, CliError> {
    let start = Instant::now();
    let mut report = commands::dispatch(&cli.command, &cli.opts)?;
    report.wall_time_s = start.elapsed().as_secs_f64();
    // An exported graph without --graph-out owns standard output.
    let graph_on_stdout = matches!(cli.command, Command::Graph { export: Some(_), graph_out: None });
    if !graph_on_stdout || cli.opts.out.is_some() {
        let text = report.render(cli.opts.format)?;
        write_or_print(cli.opts.out.as_ref(), &text)?;
    }
    Ok(report)
}
