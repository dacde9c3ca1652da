//! Command-line front end.
//!
//! Exit codes: 0/1 carry the equivalence decision, 2 parse/usage, 3
//! degenerate or mis-oriented curve, 4 dimension or grid mismatch, 5
//! non-unimodular map, 6 integration drift, 7 other numeric failure.

use clap::{Parser, Subcommand};
use equiaffine::curve::CurveProvider;
use equiaffine::equivalence::check_equivalence;
use equiaffine::error::{Error, Result};
use equiaffine::formats;
use equiaffine::group::{apply, random_map};
use equiaffine::invariants::{check_regular, invariant_profile};
use equiaffine::linalg::{Mat, Vector};
use equiaffine::natural::{arc_length, reparametrize};
use equiaffine::reconstruct::integrate_frame;
use std::path::PathBuf;

const CURVE_ARG_HELP: &str = "Curve: JSON file, catalog:name:p1:..., or csv:path[:fd_order]";

#[derive(Parser)]
#[command(
    name = "equiaffine",
    version,
    about = "Special-affine invariants of curves: arc length, curvatures, \
             equivalence, reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the curvature profile chi_1..chi_{n-1} on a uniform
    /// arc-length grid as CSV
    Invariants {
        #[arg(help = CURVE_ARG_HELP)]
        curve: String,
        /// Grid points for the profile and internal tables
        #[arg(long, default_value_t = 501)]
        npts: usize,
        /// Stencil accuracy for csv curves without an explicit order
        #[arg(long, default_value_t = 4)]
        fd_order: usize,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate special affine arc length as CSV (t, sigma, density)
    Arclength {
        #[arg(help = CURVE_ARG_HELP)]
        curve: String,
        #[arg(long, default_value_t = 501)]
        npts: usize,
        #[arg(long, default_value_t = 4)]
        fd_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide special-affine equivalence of two curves; prints a JSON
    /// report, exits 0 when equivalent and 1 when not
    Check {
        #[arg(help = CURVE_ARG_HELP)]
        curve1: String,
        #[arg(help = CURVE_ARG_HELP)]
        curve2: String,
        /// Decision tolerance on profiles and verification residual
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long, default_value_t = 501)]
        npts: usize,
        #[arg(long, default_value_t = 4)]
        fd_order: usize,
    },
    /// Apply a map file to a curve and write sampled positions as CSV
    Transform {
        #[arg(help = CURVE_ARG_HELP)]
        curve: String,
        /// Map JSON file {"n", "B", "tau"}
        map: PathBuf,
        /// Sample count over the curve domain
        #[arg(long, default_value_t = 4097)]
        npts: usize,
        #[arg(long, default_value_t = 4)]
        fd_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the frame ODE for a curvature spec and write the curve as
    /// CSV (s, x_1..x_n)
    Reconstruct {
        /// Curvature-spec JSON file {"n", "L", "channels"}
        spec: PathBuf,
        /// Initial frame JSON (row-major [[...]]); default: identity
        #[arg(long)]
        frame: Option<PathBuf>,
        /// Initial position, comma-separated; default: origin
        #[arg(long)]
        p0: Option<String>,
        /// Integration step
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the frame trace (s, det F, frame entries) as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print a seeded random special-affine map as JSON
    Randmap {
        /// Ambient dimension (>= 2)
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => formats::write_file(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Invariants {
            curve,
            npts,
            fd_order,
            out,
        } => {
            let provider = formats::parse_curve_arg(&curve, fd_order)?;
            check_regular(&provider, npts)?;
            let natural = reparametrize(provider, npts)?;
            let profile = invariant_profile(&natural, npts)?;
            emit(&out, &formats::profile_to_csv(&profile))?;
            Ok(0)
        }
        Cmd::Arclength {
            curve,
            npts,
            fd_order,
            out,
        } => {
            let provider = formats::parse_curve_arg(&curve, fd_order)?;
            let table = arc_length(&provider, npts)?;
            let mut csv = String::from("t,sigma,rho\n");
            for i in 0..table.len() {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    formats::fmt17(table.t(i)),
                    formats::fmt17(table.sigma(i)),
                    formats::fmt17(table.rho(i))
                ));
            }
            emit(&out, &csv)?;
            Ok(0)
        }
        Cmd::Check {
            curve1,
            curve2,
            tol,
            npts,
            fd_order,
        } => {
            let c1 = formats::parse_curve_arg(&curve1, fd_order)?;
            let c2 = formats::parse_curve_arg(&curve2, fd_order)?;
            let report = check_equivalence(c1, c2, npts, tol)?;
            println!("{}", formats::report_to_json(&report));
            Ok(if report.equivalent { 0 } else { 1 })
        }
        Cmd::Transform {
            curve,
            map,
            npts,
            fd_order,
            out,
        } => {
            if npts < 2 {
                return Err(Error::BadParams(format!("npts must be >= 2, got {npts}")));
            }
            let provider = formats::parse_curve_arg(&curve, fd_order)?;
            let map = formats::map_from_json(&formats::read_file(&map)?, &map.display().to_string())?;
            let moved = apply(map, provider)?;
            let (a, b) = moved.domain();
            let mut ts = Vec::with_capacity(npts);
            let mut points = Vec::with_capacity(npts);
            for i in 0..npts {
                let t = a + (b - a) * i as f64 / (npts - 1) as f64;
                ts.push(t);
                points.push(moved.position(t)?);
            }
            emit(&out, &formats::samples_to_csv("t", &ts, &points))?;
            Ok(0)
        }
        Cmd::Reconstruct {
            spec,
            frame,
            p0,
            h,
            out,
            trace,
        } => {
            let cspec = formats::curvature_spec_from_json(
                &formats::read_file(&spec)?,
                &spec.display().to_string(),
            )?;
            let n = cspec.dim();
            let f0 = match &frame {
                Some(path) => formats::frame_from_json(
                    &formats::read_file(path)?,
                    &path.display().to_string(),
                )?,
                None => Mat::identity(n),
            };
            let p0 = match &p0 {
                Some(arg) => formats::parse_vector_arg(arg)?,
                None => Vector::zeros(n),
            };
            let rec = integrate_frame(&cspec, f0, p0, h)?;
            let (ts, points): (Vec<f64>, Vec<Vector>) = rec
                .trace()
                .iter()
                .map(|state| (state.s, state.p.clone()))
                .unzip();
            emit(&out, &formats::samples_to_csv("s", &ts, &points))?;
            if let Some(path) = &trace {
                formats::write_file(path, &formats::trace_to_csv(&rec))?;
            }
            Ok(0)
        }
        Cmd::Randmap { n, seed } => {
            if n < 2 {
                return Err(Error::Parse(format!("dimension must be >= 2, got {n}")));
            }
            println!("{}", formats::map_to_json(&random_map(n, seed)));
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
