//! Command-line front end. Three subcommands:
//!
//! * `verify` — the eight-check verification suite plus DISCREPANCIES.md;
//! * `figure <id>` — deterministic data files for one named figure;
//! * `point` — both evaluation paths at a single parameter point, as JSON.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 truncation/numeric failure. `PACSMZI_THREADS` (integer ≥ 1) caps
//! worker parallelism; output is identical whatever the cap.

pub mod figures;
pub mod io;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::analytic::{self, InputConfig, VariancePath};
use crate::fock::{self, DEFAULT_FD_STEP, DEFAULT_N_MAX};
use crate::specfun::PolynomialOrder;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "pacs-mzi",
    version,
    about = "Phase sensitivity of an interferometer fed with photon-added coherent light",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suite; exit 0 only if every check passes
    Verify(VerifyCmd),
    /// Emit the data files for one named figure
    Figure(FigureCmd),
    /// Evaluate one parameter point on both paths and print JSON
    Point(PointCmd),
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    /// Fock cutoff for the brute-force oracle
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    /// Directory for verify_report.json, DISCREPANCIES.md, run_manifest.json
    #[arg(long, default_value = ".")]
    pub out: String,
    /// Compute the photon-added variance from the verbatim ratio form; its
    /// defect then breaks the landmark check, demonstrating the impact
    #[arg(long)]
    pub paper_verbatim_variance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FigureCmd {
    /// One of: fig1b, fig1c, fig2a, fig2b, fig2c, fig3, fig4
    pub id: String,
    /// Coherent amplitude of the non-added arm (real)
    #[arg(long)]
    pub alpha_a: Option<f64>,
    /// Coherent amplitude of the photon-added arm, before addition (real)
    #[arg(long)]
    pub alpha_b: Option<f64>,
    /// Number of added photons
    #[arg(long)]
    pub m: Option<u32>,
    /// Interferometer phase
    #[arg(long)]
    pub phi: Option<f64>,
    /// Fock cutoff for oracle evaluations and Wigner rendering
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Points per curve axis, per grid side, or per Wigner-panel side
    #[arg(long)]
    pub grid: Option<usize>,
    /// Vacuum in the non-added arm (only for figures already built on it)
    #[arg(long)]
    pub vacuum_a: bool,
    /// Use the verbatim ratio-form variance instead of the factorial route
    #[arg(long)]
    pub paper_verbatim_variance: bool,
    /// Output directory; defaults to the figure id
    #[arg(long)]
    pub out: Option<String>,
    /// Data file format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct PointCmd {
    /// Coherent amplitude of the non-added arm (real)
    #[arg(
        long,
        required_unless_present = "vacuum_a",
        conflicts_with = "vacuum_a"
    )]
    pub alpha_a: Option<f64>,
    /// Vacuum in the non-added arm
    #[arg(long)]
    pub vacuum_a: bool,
    /// Coherent amplitude of the photon-added arm, before addition (real)
    #[arg(long)]
    pub alpha_b: f64,
    /// Number of added photons
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Interferometer phase
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Fock cutoff for the oracle
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    /// Use the verbatim ratio-form variance on the analytic side
    #[arg(long)]
    pub paper_verbatim_variance: bool,
}

/// Applies `PACSMZI_THREADS` to the global worker pool before any work runs.
fn init_threads() -> std::result::Result<(), String> {
    let raw = match std::env::var("PACSMZI_THREADS") {
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(format!("PACSMZI_THREADS: {e}")),
        Ok(raw) => raw,
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("PACSMZI_THREADS must be an integer ≥ 1, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("worker pool initialization failed: {e}"))
}

fn run_point(cmd: &PointCmd) -> Result<()> {
    let m = PolynomialOrder::new(cmd.m)?;
    let config = match cmd.alpha_a {
        Some(a) => {
            InputConfig::coherent_pacs(Complex64::new(a, 0.0), Complex64::new(cmd.alpha_b, 0.0), m)?
        }
        None => InputConfig::vacuum_pacs(Complex64::new(cmd.alpha_b, 0.0), m)?,
    };
    let variance = if cmd.paper_verbatim_variance {
        VariancePath::RatioForm
    } else {
        VariancePath::FactorialMoment
    };
    let oracle = fock::delta_phi_numeric(&config, cmd.phi, DEFAULT_FD_STEP, cmd.nmax)?;
    let (analytic_ms, analytic_note) = match analytic::moments_with(&config, cmd.phi, variance) {
        Ok(ms) => (Some(ms), None),
        Err(Error::NoClosedForm { m }) => (
            None,
            Some(format!(
                "no closed form for a coherent arm with {m} additions; oracle only"
            )),
        ),
        Err(e) => return Err(e),
    };
    let max_abs_gap = analytic_ms.map(|a| {
        json!({
            "mean_nd": (a.mean_nd - oracle.mean_nd).abs(),
            "var_nd": (a.var_nd - oracle.var_nd).abs(),
            "slope": (a.slope - oracle.slope).abs(),
        })
    });
    let out = json!({
        "config": config,
        "phi": cmd.phi,
        "n_max": cmd.nmax,
        "fd_step": DEFAULT_FD_STEP,
        "analytic": analytic_ms,
        "analytic_note": analytic_note,
        "oracle": oracle,
        "max_abs_gap": max_abs_gap,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::NoClosedForm { .. } => 2,
        Error::Truncation { .. } => 3,
        Error::Io(_) | Error::Json(_) => 1,
    }
}

/// Parses arguments, runs the chosen subcommand, and returns the process
/// exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    let outcome = match &cli.command {
        Command::Verify(cmd) => verify::run_verify(cmd).map(|ok| if ok { 0 } else { 1 }),
        Command::Figure(cmd) => figures::run_figure(cmd).map(|()| 0),
        Command::Point(cmd) => run_point(cmd).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
