//! The `taurho` command line.
//!
//! Exit status: 0 on success, 1 when a verification fails or a target lies
//! outside the region, 2 for malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::concordance::{inv_invs, oracle_tau_rho};
use crate::format::f17;
use crate::realize::{realize, RealizeError};
use crate::region::{area_closed_form, area_quadrature, boundary_csv, boundary_samples};
use crate::shuffle::{RegionPoint, Shuffle};
use crate::verify::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "taurho", version, about = "Kendall's tau and Spearman's rho of shuffles, and the exact tau-rho region")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print tau, rho, inv and invs of a shuffle given as JSON
    Eval {
        #[arg(long)]
        shuffle: PathBuf,
    },
    /// Write the boundary table as CSV
    Boundary {
        #[arg(long)]
        k: usize,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a shuffle attaining the given (tau, rho)
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
    },
    /// Run verification checks, one JSON report per line
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        grid_steps: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Area of the region: closed form and quadrature
    Area {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Grid estimate of tau and rho straight from the shuffle map
    Oracle {
        #[arg(long)]
        shuffle: PathBuf,
        #[arg(long, default_value_t = 4000)]
        grid: usize,
    },
}

enum Failure {
    Check(String),
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read_shuffle(path: &Path) -> Result<Shuffle, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Shuffle::from_json_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn float_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| f17(x)).collect::<Vec<_>>().join(",")
}

/// Shuffle JSON with 17 significant digits per weight.
pub fn shuffle_json(h: &Shuffle) -> String {
    let j = h.to_json();
    format!(
        "{{\"perm\":[{}],\"weights\":[{}],\"signs\":[{}]}}",
        j.perm.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        float_list(&j.weights),
        j.signs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn dispatch(cfg: CliConfig, out: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error| Failure::Input(e.to_string());
    match cfg.command {
        Command::Eval { shuffle } => {
            let h = read_shuffle(&shuffle)?;
            let (inv, invs) = inv_invs(&h);
            writeln!(
                out,
                "{{\"tau\":{},\"rho\":{},\"inv\":{},\"invs\":{}}}",
                f17(1.0 - 4.0 * inv),
                f17(1.0 - 12.0 * invs),
                f17(inv),
                f17(invs)
            )
            .map_err(io)
        }
        Command::Boundary { k, out: path } => {
            let text = boundary_csv(&boundary_samples(k).map_err(input)?);
            match path {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
                None => out.write_all(text.as_bytes()).map_err(io),
            }
        }
        Command::Realize { tau, rho } => {
            if !tau.is_finite() || !rho.is_finite() {
                return Err(Failure::Input(format!("non-finite target ({tau}, {rho})")));
            }
            let target = RegionPoint::new(tau, rho)
                .map_err(|_| Failure::Check(format!("({tau}, {rho}) lies outside the region")))?;
            let (h, point) = realize(&target).map_err(|e| match e {
                RealizeError::OutsideRegion { .. } => Failure::Check(e.to_string()),
                other => Failure::Check(format!("realization failed: {other}")),
            })?;
            writeln!(
                out,
                "{{\"shuffle\":{},\"homotopy\":{{\"s\":{},\"t\":{},\"residual\":{}{}}}}}",
                shuffle_json(&h),
                f17(point.s),
                f17(point.t),
                f17(point.residual),
                if point.reflected { ",\"reflected\":true" } else { "" }
            )
            .map_err(io)
        }
        Command::Verify {
            suite,
            n_max,
            grid_steps,
            samples,
            seed,
        } => {
            let suite: Suite = suite.parse().map_err(input)?;
            let cfg = SuiteConfig {
                n_max,
                grid_steps,
                samples,
                seed,
                ..SuiteConfig::default()
            };
            let reports = run_suite(suite, &cfg).map_err(input)?;
            for r in &reports {
                writeln!(out, "{}", r.to_json_line()).map_err(io)?;
            }
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.check_name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(format!("failed: {}", failed.join(", "))))
            }
        }
        Command::Area { tol } => {
            let closed = area_closed_form();
            let quad = area_quadrature(tol).map_err(input)?;
            writeln!(
                out,
                "{{\"closed_form\":{},\"quadrature\":{},\"difference\":{},\"tolerance\":{}}}",
                f17(closed),
                f17(quad),
                f17(quad - closed),
                f17(tol)
            )
            .map_err(io)
        }
        Command::Oracle { shuffle, grid } => {
            let h = read_shuffle(&shuffle)?;
            let p = oracle_tau_rho(&h, grid).map_err(input)?;
            writeln!(
                out,
                "{{\"grid\":{grid},\"tau\":{},\"rho\":{}}}",
                f17(p.tau),
                f17(p.rho)
            )
            .map_err(io)
        }
    }
}

/// Runs the command line with explicit output streams and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cfg, out) {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
