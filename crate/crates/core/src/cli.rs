//! `unirat` command line: `fit` and `figure`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::aaa::{aaa_fit, AaaConfig, AaaError, AaaFit, Variant};
use crate::diagnostics::{
    approximant_cayley_residual, max_error, pointwise_errors, pointwise_unitarity,
    real_axis_pole_scan, unitarity_deviation,
};
use crate::io::{approximant_to_json, parse_nodes, write_atomic};
use crate::linalg::SvdConfig;
use crate::pade::PadeApproximant;

/// Usage or input error.
pub const EXIT_USAGE: i32 = 2;
/// Numerical failure.
pub const EXIT_NUMERIC: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "unirat", version, about = "Unitary rational approximation of e^{ix}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit an approximant with AAA and an optional Lawson phase.
    Fit(FitArgs),
    /// Write the data behind figure 1 (error) or 2 (unitarity deviation).
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Equispaced test nodes on [A, B].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true,
          conflicts_with = "nodes", required_unless_present = "nodes")]
    interval: Option<Vec<f64>>,
    /// File with one test node per line ('#' comments).
    #[arg(long)]
    nodes: Option<PathBuf>,
    /// Number of equispaced nodes for --interval.
    #[arg(long, default_value_t = 2000)]
    n_test: usize,
    /// Maximum number of support nodes (degree + 1).
    #[arg(long, default_value_t = 30)]
    m_max: usize,
    /// Stop once the max error on the test nodes is at most this.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long, default_value = "modified")]
    variant: Variant,
    /// Lawson steps after AAA (0 skips the phase).
    #[arg(long, default_value_t = 0)]
    lawson: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<AaaError> for Failure {
    fn from(e: AaaError) -> Self {
        match e {
            AaaError::TooFewNodes(_)
            | AaaError::BadDegree { .. }
            | AaaError::BadTolerance(_)
            | AaaError::Empty
            | AaaError::Nodes(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = SvdConfig::from_env()
        .map_err(Failure::Usage)
        .and_then(|svd| match cli.command {
            Command::Fit(a) => cmd_fit(a, svd),
            Command::Figure(a) => cmd_figure(a.which, &a.out, svd),
        });
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERIC
        }
    }
}

/// `n` equispaced points on `[a, b]` including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn test_nodes(a: &FitArgs) -> Result<Vec<f64>, Failure> {
    if let Some(path) = &a.nodes {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        return parse_nodes(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let iv = a.interval.as_deref().unwrap_or_default();
    let (lo, hi) = (iv[0], iv[1]);
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Failure::Usage(format!("degenerate interval [{lo}, {hi}]")));
    }
    if a.n_test < 2 {
        return Err(Failure::Usage("--n-test must be at least 2".into()));
    }
    Ok(linspace(lo, hi, a.n_test))
}

#[derive(Serialize)]
struct TraceRow {
    phase: &'static str,
    step: usize,
    m: usize,
    x: f64,
    max_error: f64,
    sigma_min: f64,
    degenerate: Option<bool>,
    weight_peak: Option<f64>,
}

fn trace_rows(fit: &AaaFit) -> Vec<TraceRow> {
    let mut rows: Vec<TraceRow> = fit
        .trace
        .steps
        .iter()
        .map(|s| TraceRow {
            phase: "aaa",
            step: s.m,
            m: s.m,
            x: s.x,
            max_error: s.max_error,
            sigma_min: s.sigma_min,
            degenerate: Some(s.degenerate),
            weight_peak: None,
        })
        .collect();
    if let Some(l) = &fit.lawson {
        rows.extend(l.trace.steps.iter().map(|s| TraceRow {
            phase: "lawson",
            step: s.step,
            m: fit.support.len(),
            x: s.error_location,
            max_error: s.max_error,
            sigma_min: s.sigma_min,
            degenerate: None,
            weight_peak: Some(s.weight_peak),
        }));
    }
    rows
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row serializes");
    }
    w.into_inner().expect("in-memory csv writer")
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), Failure> {
    let path = dir.join(name);
    write_atomic(&path, bytes).map_err(|e| io_failure(&path, e))
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s.into_bytes()
}

fn cmd_fit(a: FitArgs, svd: SvdConfig) -> Result<(), Failure> {
    if !(a.tol >= 0.0 && a.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be finite and nonnegative, got {}", a.tol)));
    }
    let nodes = test_nodes(&a)?;
    let cfg = AaaConfig {
        m_max: a.m_max,
        tol: a.tol,
        variant: a.variant,
        n_lawson: a.lawson,
        svd,
    };
    let fit = aaa_fit(&nodes, &cfg)?;
    let r = fit.final_approximant();

    let lo = nodes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scan_grid = linspace(lo, hi, 10_001);
    let metrics = json!({
        "kind": r.kind(),
        "variant": a.variant,
        "support_size": fit.support.len(),
        "degree": r.degree(),
        "n_test": nodes.len(),
        "tol": a.tol,
        "n_lawson": a.lawson,
        "converged": fit.trace.converged,
        "stop": fit.trace.stop,
        "max_error": max_error(r, &nodes),
        "unitarity_deviation": unitarity_deviation(r, &scan_grid),
        "cayley_residual": approximant_cayley_residual(r),
        "pole_scan": real_axis_pole_scan(r, &scan_grid),
        "lawson_exact_fit": fit.lawson.as_ref().map(|l| l.trace.exact_fit),
        "grids": {
            "max_error": "test nodes",
            "scan": { "a": lo, "b": hi, "n": scan_grid.len() },
        },
    });

    fs::create_dir_all(&a.out).map_err(|e| io_failure(&a.out, e))?;
    write_file(&a.out, "approximant.json", approximant_to_json(r).as_bytes())?;
    write_file(&a.out, "trace.csv", &csv_bytes(&trace_rows(&fit)))?;
    write_file(&a.out, "metrics.json", &json_bytes(&metrics))?;
    Ok(())
}

/// Interval, node count and evaluation grids shared by both figures.
pub const FIGURE_INTERVAL: (f64, f64) = (-13.9, 13.9);
pub const FIGURE_NODES: usize = 2000;
pub const FIGURE_POINTS: usize = 10_001;
pub const UNITARITY_INTERVAL: (f64, f64) = (-40.0, 40.0);
pub const LAWSON_STEPS: usize = 20;
pub const AAA_TOL: f64 = 1e-12;

/// Degree-(13,13) AAA-Lawson fit on the figure nodes.
pub fn figure_lawson_fit(variant: Variant, svd: &SvdConfig) -> Result<AaaFit, AaaError> {
    let x = linspace(FIGURE_INTERVAL.0, FIGURE_INTERVAL.1, FIGURE_NODES);
    let cfg = AaaConfig {
        m_max: 14,
        tol: 0.0,
        variant,
        n_lawson: LAWSON_STEPS,
        svd: svd.clone(),
    };
    aaa_fit(&x, &cfg)
}

/// AAA fit on the figure nodes stopped at the figure tolerance.
pub fn figure_aaa_fit(variant: Variant, svd: &SvdConfig) -> Result<AaaFit, AaaError> {
    let x = linspace(FIGURE_INTERVAL.0, FIGURE_INTERVAL.1, FIGURE_NODES);
    let cfg = AaaConfig {
        m_max: 30,
        tol: AAA_TOL,
        variant,
        n_lawson: 0,
        svd: svd.clone(),
    };
    aaa_fit(&x, &cfg)
}

fn degree_of(fit: &AaaFit) -> usize {
    fit.final_approximant().degree()
}

#[derive(Serialize)]
struct Figure1Row {
    x: f64,
    abserr_pade13: f64,
    abserr_aaalawson_13_13: f64,
}

#[derive(Serialize)]
struct Figure2Row {
    x: f64,
    unitdev_aaa_orig: f64,
    unitdev_aaa_mod: f64,
    unitdev_lawson_orig: f64,
    unitdev_lawson_mod: f64,
}

fn cmd_figure(which: u8, out: &Path, svd: SvdConfig) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    let (csv, meta) = if which == 1 {
        figure1(&svd)?
    } else {
        figure2(&svd)?
    };
    write_file(out, &format!("figure{which}.csv"), &csv)?;
    write_file(out, &format!("figure{which}.json"), &json_bytes(&meta))?;
    Ok(())
}

fn figure1(svd: &SvdConfig) -> Result<(Vec<u8>, serde_json::Value), Failure> {
    let fit = figure_lawson_fit(Variant::Modified, svd)?;
    let pade = PadeApproximant::new(13).expect("degree 13 is supported");
    let grid = linspace(FIGURE_INTERVAL.0, FIGURE_INTERVAL.1, FIGURE_POINTS);
    let errs = pointwise_errors(fit.final_approximant(), &grid);
    let rows: Vec<Figure1Row> = grid
        .iter()
        .zip(errs)
        .map(|(&x, e)| Figure1Row {
            x,
            abserr_pade13: (pade.eval(x) - crate::linalg::cis(x)).norm(),
            abserr_aaalawson_13_13: e,
        })
        .collect();
    let meta = json!({
        "figure": 1,
        "nodes": { "a": FIGURE_INTERVAL.0, "b": FIGURE_INTERVAL.1, "n": FIGURE_NODES },
        "grid": { "a": FIGURE_INTERVAL.0, "b": FIGURE_INTERVAL.1, "n": FIGURE_POINTS },
        "pade_degree": 13,
        "aaalawson": {
            "variant": Variant::Modified,
            "degree": degree_of(&fit),
            "lawson_steps": LAWSON_STEPS,
            "aaa_tol": 0.0,
        },
        "seeds": [],
    });
    Ok((csv_bytes(&rows), meta))
}

fn figure2(svd: &SvdConfig) -> Result<(Vec<u8>, serde_json::Value), Failure> {
    let (ao, am, lo, lm) = std::thread::scope(|s| {
        let ao = s.spawn(|| figure_aaa_fit(Variant::Original, svd));
        let am = s.spawn(|| figure_aaa_fit(Variant::Modified, svd));
        let lo = s.spawn(|| figure_lawson_fit(Variant::Original, svd));
        let lm = s.spawn(|| figure_lawson_fit(Variant::Modified, svd));
        (
            ao.join().expect("fit thread"),
            am.join().expect("fit thread"),
            lo.join().expect("fit thread"),
            lm.join().expect("fit thread"),
        )
    });
    let (ao, am, lo, lm) = (ao?, am?, lo?, lm?);
    let grid = linspace(UNITARITY_INTERVAL.0, UNITARITY_INTERVAL.1, FIGURE_POINTS);
    let dev = |f: &AaaFit| pointwise_unitarity(f.final_approximant(), &grid);
    let (d_ao, d_am, d_lo, d_lm) = (dev(&ao), dev(&am), dev(&lo), dev(&lm));
    let rows: Vec<Figure2Row> = (0..grid.len())
        .map(|k| Figure2Row {
            x: grid[k],
            unitdev_aaa_orig: d_ao[k],
            unitdev_aaa_mod: d_am[k],
            unitdev_lawson_orig: d_lo[k],
            unitdev_lawson_mod: d_lm[k],
        })
        .collect();
    let fit_meta = |f: &AaaFit, tol: f64, steps: usize| {
        json!({
            "degree": degree_of(f),
            "aaa_tol": tol,
            "lawson_steps": steps,
            "kind": f.final_approximant().kind(),
        })
    };
    let meta = json!({
        "figure": 2,
        "nodes": { "a": FIGURE_INTERVAL.0, "b": FIGURE_INTERVAL.1, "n": FIGURE_NODES },
        "grid": { "a": UNITARITY_INTERVAL.0, "b": UNITARITY_INTERVAL.1, "n": FIGURE_POINTS },
        "aaa_orig": fit_meta(&ao, AAA_TOL, 0),
        "aaa_mod": fit_meta(&am, AAA_TOL, 0),
        "lawson_orig": fit_meta(&lo, 0.0, LAWSON_STEPS),
        "lawson_mod": fit_meta(&lm, 0.0, LAWSON_STEPS),
        "seeds": [],
    });
    Ok((csv_bytes(&rows), meta))
}
