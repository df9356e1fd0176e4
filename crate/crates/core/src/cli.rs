//! Command-line front end. [`run`] does all the work so tests can drive it
//! in-process; the binary only forwards its arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::coding::{membership, GreedyExpansion};
use crate::dimension::local_dimension_scan;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, inv_m, parse_rational, solve_lambda, Bracket, Code, Rational};
use crate::lambda_set::{cover_levels, is_admissible};
use crate::report::{
    render_membership, render_thickness, CoverView, DimensionView, Format, IntersectView, PairView, ScanRowView,
    ThicknessView,
};
use crate::thickness::{
    ek_hulls, find_interleaved_pairs_with, intersection_report, tau_report, DEFAULT_THICKNESS_DEPTH,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CANTOR_TOOLKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cantor-toolkit", version, about = "Parameter sets of base-m Cantor sets containing a given point")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Number of digits m ≥ 2.
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// The point x ∈ (0, 1) as p/q (decimals are accepted and read exactly).
    #[arg(long)]
    x: String,
    /// Target bracket width: a rational, decimal, or 2^-k.
    #[arg(long, default_value = "2^-64")]
    tol: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fractional digits of rendered decimals.
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nested interval covers of the parameter set.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Thickness reports for the thick subsets E_1 … E_kmax.
    Thickness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        /// Levels below each hull scanned for gaps.
        #[arg(long, default_value_t = DEFAULT_THICKNESS_DEPTH)]
        depth: usize,
    },
    /// Interleaved thick subsets of the parameter sets of x and y.
    Intersect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        /// Search depth for interleaving witnesses.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Levels below each hull scanned for gaps.
        #[arg(long, default_value_t = DEFAULT_THICKNESS_DEPTH)]
        thickness_depth: usize,
    },
    /// Box-counting dimension near a parameter.
    Dimension {
        #[command(flatten)]
        common: Common,
        /// A code such as 11:zero, or the literal 1/m.
        #[arg(long)]
        at: String,
        /// Comma-separated window half-widths.
        #[arg(long, default_value = "1/8,1/16,1/32")]
        deltas: String,
        #[arg(long, default_value_t = 14)]
        depth: usize,
        #[arg(long, default_value_t = 16)]
        grid_depth: u32,
    },
    /// Decide whether x lies in K_lambda for a rational lambda.
    Membership {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_VALIDATION;
        }
    };
    let outcome = match &pool {
        Some(pool) => pool.install(|| execute(&cli.command)),
        None => execute(&cli.command),
    };
    match outcome.and_then(|(text, out)| emit(&text, out, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", message(&e));
            exit_code(&e)
        }
    }
}

/// Exit code for an error: 3 for precision exhaustion, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } | Error::PrecisionExhaustedAt { .. } => EXIT_PRECISION,
        _ => EXIT_VALIDATION,
    }
}

fn message(e: &Error) -> String {
    match e {
        Error::Domain(msg) | Error::Parse(msg) => msg.clone(),
        other => other.to_string(),
    }
}

fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map(Some).map_err(|e| e.to_string())
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Domain(format!("cannot write output: {e}"))),
    }
}

struct Config {
    x: Rational,
    m: u32,
    tol: Rational,
}

fn unit_point(name: &str, s: &str) -> Result<Rational> {
    let v = parse_rational(s)?;
    if v <= Rational::from_integer(0.into()) || v >= Rational::from_integer(1.into()) {
        return Err(Error::Domain(format!("{name} must lie in (0,1)")));
    }
    Ok(v)
}

fn validate(c: &Common) -> Result<Config> {
    if c.m < 2 {
        return Err(Error::Domain("m must be at least 2".into()));
    }
    if c.m > 256 {
        return Err(Error::Domain("m must be at most 256".into()));
    }
    let x = unit_point("x", &c.x)?;
    let tol = parse_rational(&c.tol)?;
    if tol <= Rational::from_integer(0.into()) {
        return Err(Error::Domain("tol must be positive".into()));
    }
    Ok(Config { x, m: c.m, tol })
}

fn execute(command: &Command) -> Result<(String, Option<&PathBuf>)> {
    match command {
        Command::Cover { common, depth } => {
            let c = validate(common)?;
            let first = GreedyExpansion::new(&c.x, c.m)?.first_defect();
            if *depth < first {
                return Err(Error::Domain(format!(
                    "depth must be at least {first}, the first level with admissible words for x = {}",
                    format_rational(&c.x)
                )));
            }
            let levels = cover_levels(&c.x, c.m, *depth, &c.tol)?;
            let view = CoverView::from_levels(&levels, common.digits);
            Ok((view.render(common.format), common.out.as_ref()))
        }
        Command::Thickness { common, kmax, depth } => {
            let c = validate(common)?;
            let systems = ek_hulls(&c.x, c.m, *kmax, &c.tol)?;
            let views = systems
                .iter()
                .map(|sys| tau_report(sys, *depth, &c.tol).map(|r| ThicknessView::new(&r, c.m, common.digits)))
                .collect::<Result<Vec<_>>>()?;
            Ok((render_thickness(&c.x, c.m, &views, common.format), common.out.as_ref()))
        }
        Command::Intersect { common, y, kmax, depth, thickness_depth } => {
            let c = validate(common)?;
            let y = unit_point("y", y)?;
            let pairs = find_interleaved_pairs_with(&c.x, &y, c.m, *kmax, *depth, *thickness_depth, &c.tol)?;
            let mut best: Option<f64> = None;
            let views = pairs
                .iter()
                .map(|p| {
                    let report = intersection_report(p);
                    if let Some(d) = report.dim_lower {
                        best = Some(best.map_or(d, |b| b.max(d)));
                    }
                    PairView::new(p, &report, c.m, common.digits)
                })
                .collect();
            let view = IntersectView {
                x: &c.x,
                y: &y,
                m: c.m,
                kmax: *kmax,
                depth: *depth,
                digits: common.digits,
                pairs: views,
                best_dim_lower: best,
            };
            Ok((view.render(common.format), common.out.as_ref()))
        }
        Command::Dimension { common, at, deltas, depth, grid_depth } => {
            let c = validate(common)?;
            let center = resolve_at(&c, at)?;
            let deltas = deltas.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            if *grid_depth == 0 || *grid_depth > 40 {
                return Err(Error::Domain("grid-depth must lie in 1..=40".into()));
            }
            let rows = local_dimension_scan(&center, &deltas, *depth, *grid_depth)?;
            let view = DimensionView {
                x: &c.x,
                m: c.m,
                at,
                center: &center,
                depth: *depth,
                grid_depth: *grid_depth,
                digits: common.digits,
                rows: rows.iter().map(|r| ScanRowView::new(r, common.digits)).collect(),
            };
            Ok((view.render(common.format), common.out.as_ref()))
        }
        Command::Membership { common, lambda, max_steps } => {
            let c = validate(common)?;
            let lam = parse_rational(lambda)?;
            let result = membership(&c.x, &lam, c.m, *max_steps)?;
            Ok((render_membership(&c.x, &lam, c.m, *max_steps, &result, common.format), common.out.as_ref()))
        }
    }
}

/// Resolves `--at`: the literal `1/m`, or a code whose explicit prefix must
/// be admissible for x.
fn resolve_at(c: &Config, at: &str) -> Result<Bracket> {
    if at.trim() == "1/m" {
        return Ok(Bracket::pinned(c.x.clone(), c.m, inv_m(c.m)));
    }
    let code = Code::parse(c.m, at)?;
    let g = GreedyExpansion::new(&c.x, c.m)?;
    if !is_admissible(&g, code.prefix()) {
        return Err(Error::NotAdmissible(at.to_string()));
    }
    solve_lambda(&c.x, &code, &c.tol)
}
