//! `gaplab`: one binary dispatching every analysis the toolkit offers.
//!
//! Exit codes: 0 success, 1 domain error (bad mathematics, guard
//! violations, unreadable inputs — message on standard error), 2 usage
//! error (unknown flags or subcommands, malformed flag values).

mod commands;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaplab_core::experiments::{Strategy, Theorem};
use gaplab_core::{InputMode, Limits};

fn parse_input_mode(s: &str) -> Result<InputMode, String> {
    match s {
        "integers" => Ok(InputMode::Integers),
        "primes" => Ok(InputMode::Primes),
        other => Err(format!("expected integers or primes, got {other:?}")),
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Output style for the detection report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Human,
    Json,
}

fn parse_report_kind(s: &str) -> Result<ReportKind, String> {
    match s {
        "human" => Ok(ReportKind::Human),
        "json" => Ok(ReportKind::Json),
        other => Err(format!("expected human or json, got {other:?}")),
    }
}

/// Which envelope `weyl` compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lemma1,
    Lemma3,
}

fn parse_bound_kind(s: &str) -> Result<BoundKind, String> {
    match s {
        "lemma1" => Ok(BoundKind::Lemma1),
        "lemma3" => Ok(BoundKind::Lemma3),
        other => Err(format!("expected lemma1 or lemma3, got {other:?}")),
    }
}

#[derive(Parser)]
#[command(
    name = "gaplab",
    version,
    about = "Symmetric progressions without polynomial values: certification, \
             exponential sums, detection, and extremal search",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON instead of human tables.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every pseudo-random choice (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Maximum worker threads (results never depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Multiplier on enumeration guards, in [0.1, 10].
    #[arg(long = "guard-scale", global = true)]
    guard_scale: Option<f64>,

    /// Config file with `key = value` lines (flags override it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify (or refute) that a polynomial has roots modulo every prime
    /// power, with coprime roots in primes mode.
    IntersectiveCheck {
        /// Polynomial, e.g. "x^2+1" or "2x^3-5x+7".
        #[arg(long)]
        poly: String,
        /// integers | primes
        #[arg(long, default_value = "integers", value_parser = parse_input_mode)]
        mode: InputMode,
        /// Certify all primes up to this bound.
        #[arg(long = "prime-bound", default_value_t = 100)]
        prime_bound: u64,
    },
    /// Check whether a symmetric progression avoids all nonzero
    /// polynomial values.
    GapAvoids {
        /// Comma-separated steps, e.g. 3,5.
        #[arg(long, value_delimiter = ',', required = true)]
        steps: Vec<i64>,
        /// Comma-separated widths, one per step.
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<i64>,
        #[arg(long)]
        poly: String,
        /// integers | primes
        #[arg(long, default_value = "integers", value_parser = parse_input_mode)]
        inputs: InputMode,
    },
    /// Run the residue-space detection functional on a progression.
    Detect {
        #[arg(long, value_delimiter = ',', required = true)]
        steps: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<i64>,
        #[arg(long)]
        poly: String,
        /// integers | primes
        #[arg(long, default_value = "integers", value_parser = parse_input_mode)]
        inputs: InputMode,
        /// human | json
        #[arg(long, default_value = "human", value_parser = parse_report_kind)]
        report: ReportKind,
    },
    /// Evaluate one exponential sum exactly, optionally against a bound.
    Weyl {
        #[arg(long)]
        poly: String,
        /// Number of summands.
        #[arg(long)]
        n: u64,
        /// Phase numerator.
        #[arg(long, default_value_t = 1)]
        t: i64,
        /// Phase modulus.
        #[arg(long)]
        d: u64,
        /// lemma1 | lemma3: compare |W| against the named envelope.
        #[arg(long, value_parser = parse_bound_kind)]
        bound: Option<BoundKind>,
    },
    /// Verify the quadratic-sum bound over a grid or an instance file.
    WeylVerify {
        /// File of instances, one `n d a1 a2 t` line each.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long = "n-max", default_value_t = 200)]
        n_max: u64,
        #[arg(long = "d-max", default_value_t = 200)]
        d_max: u64,
        /// Coefficients and phases range over [-bound, bound].
        #[arg(long = "coeff-bound", default_value_t = 5)]
        coeff_bound: i64,
    },
    /// Exact divisor-function moment sums.
    DivisorMoment {
        /// Moment order (2, 3, or 4).
        #[arg(long)]
        j: u32,
        /// Sum over m <= M.
        #[arg(long = "M")]
        range: u64,
    },
    /// Log-weighted prime count in a residue class.
    Psi {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        q: u64,
    },
    /// Worst-case least primes in residue classes for a modulus range.
    LinnikScan {
        #[arg(long, default_value_t = 2)]
        qmin: u64,
        #[arg(long)]
        qmax: u64,
    },
    /// Search for the largest progression avoiding polynomial values.
    ExtremalSearch {
        /// Comma-separated ambient bounds, e.g. 1000,10000.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        ambient: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        dims: u32,
        #[arg(long)]
        poly: String,
        /// integers | primes
        #[arg(long, default_value = "integers", value_parser = parse_input_mode)]
        inputs: InputMode,
        /// exhaustive | random_restart_hill_climb
        #[arg(long, default_value = "exhaustive", value_parser = parse_strategy)]
        strategy: Strategy,
        /// Candidate evaluations per ambient bound.
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        /// Hill-climb restarts per ambient bound.
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        /// Require the last step to be prime.
        #[arg(long = "require-prime-last-step")]
        require_prime_last_step: bool,
        /// Require candidates to be proper.
        #[arg(long = "require-proper")]
        require_proper: bool,
        /// Write the full report as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare saved search results against a density envelope.
    EnvelopeReport {
        /// Results file produced by extremal-search --out.
        #[arg(long = "in")]
        input: PathBuf,
        /// t1 | t2 | t3 | eq27
        #[arg(long, default_value = "t1", value_parser = parse_theorem)]
        theorem: Theorem,
        /// Stand-in for the unspecified constant in t3/eq27 envelopes.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Write the table as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write gnuplot-ready whitespace columns to this path.
        #[arg(long = "plot-data")]
        plot_data: Option<PathBuf>,
    },
}

/// Global settings after merging flags, config file, and environment.
pub struct Context {
    pub json: bool,
    pub seed: u64,
    pub limits: Limits,
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn parse_config(path: &PathBuf) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config line {} is not `key = value`: {line:?}",
                idx + 1
            ));
        };
        let key = key.trim().to_string();
        match key.as_str() {
            "json" | "seed" | "threads" | "guard-scale" => {
                map.insert(key, value.trim().to_string());
            }
            other => return Err(format!("unknown config key {other:?}")),
        }
    }
    Ok(map)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let config = match cli.config.as_ref().map(parse_config).transpose() {
        Ok(map) => map.unwrap_or_default(),
        Err(message) => return usage_error(&message),
    };
    let config_value = |key: &str| config.get(key).map(String::as_str);

    let json = cli.json
        || match config_value("json") {
            None => false,
            Some("true") => true,
            Some("false") => false,
            Some(other) => return usage_error(&format!("config json must be true/false, got {other:?}")),
        };
    let seed = match (cli.seed, config_value("seed")) {
        (Some(s), _) => s,
        (None, Some(text)) => match text.parse() {
            Ok(s) => s,
            Err(_) => return usage_error(&format!("config seed is not an integer: {text:?}")),
        },
        (None, None) => 0,
    };
    let threads = match (cli.threads, config_value("threads")) {
        (Some(t), _) => Some(t),
        (None, Some(text)) => match text.parse() {
            Ok(t) => Some(t),
            Err(_) => return usage_error(&format!("config threads is not an integer: {text:?}")),
        },
        (None, None) => None,
    };
    if threads == Some(0) {
        return usage_error("--threads must be at least 1");
    }
    let guard_scale = match (
        cli.guard_scale,
        std::env::var("GAPLAB_GUARD_SCALE").ok(),
        config_value("guard-scale"),
    ) {
        (Some(g), _, _) => g,
        (None, Some(text), _) => match text.parse() {
            Ok(g) => g,
            Err(_) => {
                return usage_error(&format!("GAPLAB_GUARD_SCALE is not a number: {text:?}"))
            }
        },
        (None, None, Some(text)) => match text.parse() {
            Ok(g) => g,
            Err(_) => {
                return usage_error(&format!("config guard-scale is not a number: {text:?}"))
            }
        },
        (None, None, None) => 1.0,
    };
    let limits = match Limits::with_scale(guard_scale) {
        Ok(l) => l,
        Err(_) => return usage_error(&format!("guard scale {guard_scale} outside [0.1, 10]")),
    };

    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(1);
        }
    }

    let ctx = Context { json, seed, limits };
    match commands::dispatch(cli.command, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
