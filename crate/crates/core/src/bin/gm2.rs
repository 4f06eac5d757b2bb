//! Command-line front end: parses inputs, dispatches to the library, and
//! writes JSON/CSV artifacts.
//!
//! Every failure maps to a documented exit code (see `--help` or the
//! README) with the error printed on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gm2::geom::{self, Normalization};
use gm2::io;
use gm2::phase_plane::{self, OdeState, PeriodicSearchConfig};
use gm2::quad::QuadratureConfig;
use gm2::scalar::{self, ConstantSolutionSet};
use gm2::solve::{self, SolverConfig};
use gm2::theta;

/// Exit codes, one per failure category; the precise error variant is
/// printed on stderr.
mod exit_codes {
    pub const PARSE: u8 = 3;
    pub const DOMAIN: u8 = 4;
    pub const QUADRATURE: u8 = 5;
    pub const ODE: u8 = 6;
    pub const CONTINUATION: u8 = 7;
    pub const IO: u8 = 8;
}

#[derive(Parser)]
#[command(
    name = "gm2",
    about = "Planar Gaussian-Minkowski toolkit",
    after_help = "Exit codes: 2 usage, 3 input parse, 4 domain/validation, \
                  5 quadrature failure, 6 ODE/shooting failure, 7 continuation failure, 8 I/O.\n\
                  GM2_THREADS caps the worker pool used by grid scans."
)]
struct Cli {
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Small,
    Large,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the constant solutions for a prescribed constant density C.
    ConstantSolutions {
        /// Constant density (the equation's right side including 1/2π).
        #[arg(long = "C")]
        c: f64,
        /// Treat the input as the 2π-free level instead.
        #[arg(long)]
        normalized: bool,
    },
    /// Gaussian surface-area measure of a polygon file.
    Measure {
        #[arg(long)]
        polygon: PathBuf,
    },
    /// Measure density of a support-samples file.
    Density {
        #[arg(long)]
        support: PathBuf,
    },
    /// Evaluate Θ for one good pair (r derived from h0 when omitted).
    Theta {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        h0: f64,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Scan min Θ over the admissible interval for each level.
    ScanTheta {
        /// Levels c (repeatable or comma-separated).
        #[arg(long = "c", value_delimiter = ',', required = true)]
        c_list: Vec<f64>,
        /// Grid points per level.
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Integrate an orbit and emit the trajectory table.
    PhasePortrait {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        h0: f64,
        /// Angular span to integrate.
        #[arg(long)]
        span: f64,
        /// Local error tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Search for nonconstant 2π-periodic solutions over levels.
    SearchPeriodic {
        #[arg(long = "c", value_delimiter = ',', required = true)]
        c_list: Vec<f64>,
        #[arg(long, default_value_t = 48)]
        n: usize,
    },
    /// Solve the prescribed-measure problem for even data.
    Solve {
        /// Data file: {"n","values"} or {"fourier_cos": [...]}.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, value_enum)]
        branch: BranchArg,
        /// Grid size used when the data file carries Fourier modes.
        #[arg(long, default_value_t = 128)]
        n: usize,
        /// Opt-in circular Gaussian smoothing bandwidth for rough data.
        #[arg(long)]
        mollify: Option<f64>,
    },
    /// Gaussian isoperimetric inequality check on a body file.
    IsoCheck {
        #[arg(long)]
        body: PathBuf,
    },
}

#[derive(Debug)]
struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, err: impl std::fmt::Display) -> Self {
        CmdError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<io::IoError> for CmdError {
    fn from(e: io::IoError) -> Self {
        let code = match &e {
            io::IoError::Io { .. } => exit_codes::IO,
            io::IoError::Parse { .. } => exit_codes::PARSE,
            io::IoError::Geom { .. } | io::IoError::Data { .. } => exit_codes::DOMAIN,
        };
        CmdError::new(code, e)
    }
}

impl From<scalar::ScalarError> for CmdError {
    fn from(e: scalar::ScalarError) -> Self {
        CmdError::new(exit_codes::DOMAIN, e)
    }
}

impl From<geom::GeomError> for CmdError {
    fn from(e: geom::GeomError) -> Self {
        CmdError::new(exit_codes::DOMAIN, e)
    }
}

impl From<theta::ThetaError> for CmdError {
    fn from(e: theta::ThetaError) -> Self {
        let code = match &e {
            theta::ThetaError::Quadrature(_) | theta::ThetaError::AllPointsFailed(_) => {
                exit_codes::QUADRATURE
            }
            _ => exit_codes::DOMAIN,
        };
        CmdError::new(code, e)
    }
}

impl From<phase_plane::PhaseError> for CmdError {
    fn from(e: phase_plane::PhaseError) -> Self {
        let code = match &e {
            phase_plane::PhaseError::Theta(t) => {
                return CmdError::from(t.clone());
            }
            phase_plane::PhaseError::Scalar(_) => exit_codes::DOMAIN,
            _ => exit_codes::ODE,
        };
        CmdError::new(code, e)
    }
}

impl From<solve::SolveError> for CmdError {
    fn from(e: solve::SolveError) -> Self {
        let code = match &e {
            solve::SolveError::ContinuationFailed { .. } | solve::SolveError::ConvexityLost { .. } => {
                exit_codes::CONTINUATION
            }
            _ => exit_codes::DOMAIN,
        };
        CmdError::new(code, e)
    }
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("GM2_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn write_artifact(out_dir: &PathBuf, name: &str, contents: &str) -> Result<(), CmdError> {
    io::write_file(&out_dir.join(name), contents).map_err(CmdError::from)
}

fn write_json(out_dir: &PathBuf, name: &str, value: &Value) -> Result<(), CmdError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_artifact(out_dir, name, &text)
}

fn run(cli: Cli) -> Result<(), CmdError> {
    let out = &cli.out_dir;
    match cli.command {
        Command::ConstantSolutions { c, normalized } => {
            let set = scalar::constant_solutions(c, normalized)?;
            let value = match set {
                ConstantSolutionSet::None => json!({"count": 0}),
                ConstantSolutionSet::One(t) => json!({"count": 1, "t": t}),
                ConstantSolutionSet::Two { r2, r1 } => json!({"count": 2, "r2": r2, "r1": r1}),
            };
            write_json(out, "constant_solutions.json", &value)?;
            println!("{value}");
        }
        Command::Measure { polygon } => {
            let p = io::read_polygon(&polygon)?;
            let measure = geom::boundary_measure_polygon(&p);
            let value = io::measure_json(&measure);
            write_json(out, "measure.json", &value)?;
            println!("{value}");
        }
        Command::Density { support } => {
            let h = io::read_support(&support)?;
            let density = geom::density_smooth(&h, Normalization::Density)?;
            let total = geom::pairwise_sum(&density) * 2.0 * std::f64::consts::PI
                / density.len() as f64;
            let value = json!({"n": h.n(), "density": density, "total": total});
            write_json(out, "density.json", &value)?;
            println!("{value}");
        }
        Command::Theta { c, h0, r } => {
            let pair = match r {
                Some(r) => scalar::GoodPair::new(c, h0, r, 1e-8)
                    .map_err(|e| CmdError::new(exit_codes::DOMAIN, e))?,
                None => scalar::good_pair_from_h0(c, h0)?.ok_or_else(|| {
                    CmdError::new(
                        exit_codes::DOMAIN,
                        format!("h0 = {h0} is outside the admissible interval for c = {c}"),
                    )
                })?,
            };
            let result = theta::theta_eval(&pair, &QuadratureConfig::default())?;
            let value = json!({
                "pair": {"c": pair.c, "h0": pair.h0, "r": pair.r, "energy": pair.energy},
                "theta": io::theta_result_json(&result),
            });
            write_json(out, "theta.json", &value)?;
            println!("{value}");
        }
        Command::ScanTheta { c_list, n } => {
            let cfg = QuadratureConfig::default();
            let mut reports = Vec::new();
            for (idx, &c) in c_list.iter().enumerate() {
                let scan = theta::scan_min_theta(c, n, &cfg)?;
                let csv_name = if c_list.len() == 1 {
                    "theta_surface.csv".to_string()
                } else {
                    format!("theta_surface_{idx}.csv")
                };
                write_artifact(out, &csv_name, &io::theta_surface_csv(&scan))?;
                reports.push(io::theta_scan_json(&scan));
                println!(
                    "c = {c}: min theta = {}, margin over pi = {}",
                    scan.min_theta, scan.margin
                );
            }
            write_json(out, "scan_theta.json", &Value::Array(reports))?;
        }
        Command::PhasePortrait { c, h0, span, tol } => {
            let init = OdeState {
                theta: 0.0,
                h: h0,
                hp: 0.0,
            };
            let traj = phase_plane::integrate(c, init, span, tol)?;
            write_artifact(out, "trajectory.csv", &io::trajectory_csv(&traj))?;
            let value = json!({
                "c": c,
                "samples": traj.samples.len(),
                "e0": traj.e0,
                "max_drift": traj.max_drift,
            });
            write_json(out, "trajectory.json", &value)?;
            println!("{value}");
        }
        Command::SearchPeriodic { c_list, n } => {
            let cfg = PeriodicSearchConfig {
                n_h0: n,
                ..Default::default()
            };
            let report = phase_plane::search_periodic(&c_list, &cfg)?;
            let value = serde_json::to_value(&report).expect("serializable");
            write_json(out, "search_periodic.json", &value)?;
            println!(
                "scanned {} levels: {} nonconstant candidates, margins {:?}",
                report.c_grid.len(),
                report.found_nonconstant.len(),
                report.per_c_margin
            );
        }
        Command::Solve {
            f,
            branch,
            n,
            mollify,
        } => {
            let mut data = io::read_f(&f, n)?;
            if let Some(sigma) = mollify {
                let smoothed = solve::mollify(data.values(), sigma);
                data = solve::validate_f(&smoothed).map_err(CmdError::from)?;
            }
            let branch = match branch {
                BranchArg::Small => solve::Branch::Small,
                BranchArg::Large => solve::Branch::Large,
            };
            let result = solve::solve_branch(&data, branch, &SolverConfig::default())?;
            let value = io::solve_json(&result);
            write_json(out, "solve.json", &value)?;
            write_artifact(out, "solution.csv", &io::solution_csv(&result, &data))?;
            println!("{value}");
        }
        Command::IsoCheck { body } => {
            let body = io::read_body(&body)?;
            let report = geom::isoperimetric_check(&body)?;
            let value = serde_json::to_value(report).expect("serializable");
            write_json(out, "iso_check.json", &value)?;
            println!("{value}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
