use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use explab::classify::{classify, Classification};
use serde_json::{json, Value};

mod exponent;
mod input;
mod suites;

pub const SCHEMA_VERSION: u32 = 1;

/// Why a command stopped before producing a report.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid input.
    Input(String),
    /// The computation could not finish (degree cap, non-convergence).
    Aborted(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Aborted(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "explab", version, about = "Exponents of ray representations of kinematical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify polynomial 2-cocycles of an algebra up to coboundaries.
    Classify {
        /// galilean, milne:M, phase-space:N, or a JSON spec file.
        #[arg(long)]
        algebra: String,
        /// auto or a fixed degree bound.
        #[arg(long, default_value = "auto")]
        degree: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite.
    Verify {
        /// galilean, milne:M, bundle, schrodinger or h-group.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Extract infinitesimal exponents from a finite phase.
    Exponent {
        /// galilean or milne:M.
        #[arg(long)]
        group: String,
        /// galilean-mass:MASS or milne-schrodinger:MASS.
        #[arg(long)]
        theta: String,
        /// Two generator labels, e.g. b1,d1.
        #[arg(long, conflicts_with = "all_pairs", required_unless_present = "all_pairs")]
        pair: Option<String>,
        #[arg(long)]
        all_pairs: bool,
        /// Event x1,x2,x3,t at which to evaluate.
        #[arg(long, default_value = "0.3,-0.2,0.5,0.7", allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        output: Output,
    },
}

struct Report {
    command: &'static str,
    input: Value,
    result: Value,
    passed: bool,
    text: String,
}

fn envelope(r: &Report, elapsed: Option<f64>) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "explab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": r.command,
        "input": r.input,
        "passed": r.passed,
        "result": r.result,
    });
    if let Some(ms) = elapsed {
        v["timing_ms"] = json!(ms);
    }
    v
}

fn classification_text(c: &Classification) -> String {
    let mut s = format!(
        "cocycle_dim {}\ncoboundary_dim {}\nquotient_dim {}\ndegree_used {}\n",
        c.cocycle_dim, c.coboundary_dim, c.quotient_dim, c.degree_used
    );
    for (k, rep) in c.representatives.iter().enumerate() {
        s.push_str(&format!("representative {k}:\n"));
        for (i, j, p) in rep.nonzero_entries() {
            s.push_str(&format!("  ({}, {}) = {p}\n", c.alg.label(i), c.alg.label(j)));
        }
    }
    if let Some(coords) = &c.coordinates {
        s.push_str(&format!("coordinates {}\n", coords.names.join(" ")));
    }
    s
}

fn cmd_classify(algebra: &str, degree: &str) -> Result<Report, Failure> {
    let alg = input::algebra(algebra)?;
    let mode = input::degree(degree)?;
    let c = classify(alg, mode).map_err(|e| Failure::Aborted(e.to_string()))?;
    Ok(Report {
        command: "classify",
        input: json!({ "algebra": algebra, "degree": degree }),
        result: serde_json::to_value(&c).expect("classification serializes"),
        passed: true,
        text: classification_text(&c),
    })
}

fn cmd_verify(suite: &str, samples: usize, seed: u64) -> Result<Report, Failure> {
    let which = input::suite(suite)?;
    if samples == 0 {
        return Err(Failure::Input("samples must be at least 1".into()));
    }
    let out = suites::run(which, samples, seed)?;
    let passed = out.checks.iter().all(|c| c.passed);
    let mut text = format!("suite {suite} (seed {seed}, samples {samples})\n");
    for c in &out.checks {
        let tol = c.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
        text.push_str(&format!(
            "  {} {}: {}{tol}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value
        ));
    }
    Ok(Report {
        command: "verify",
        input: json!({ "suite": suite, "samples": samples, "seed": seed }),
        result: json!({ "checks": out.checks, "details": out.details }),
        passed,
        text,
    })
}

fn cmd_exponent(group: &str, theta: &str, pair: Option<&str>, at: &str) -> Result<Report, Failure> {
    let g = input::group(group)?;
    let t = input::theta(theta)?;
    let pair = pair.map(input::pair).transpose()?;
    let event = input::event(at)?;
    let out = exponent::run(g, t, pair.as_ref(), event)?;
    let passed = out.entries.iter().all(|e| e.passed) && out.checks.iter().all(|c| c.1);
    let mut text = String::new();
    for e in &out.entries {
        let expected = e.expected.map(|w| format!("  expected {w}")).unwrap_or_default();
        text.push_str(&format!(
            "Ξ({}, {}) = {} ± {:.1e}{expected}\n",
            e.a, e.b, e.value, e.error_estimate
        ));
    }
    for (name, ok, value) in &out.checks {
        text.push_str(&format!("{} {name}: {value}\n", if *ok { "PASS" } else { "FAIL" }));
    }
    let checks: Vec<Value> = out
        .checks
        .iter()
        .map(|(name, ok, value)| json!({ "name": name, "passed": ok, "value": value }))
        .collect();
    Ok(Report {
        command: "exponent",
        input: json!({ "group": group, "theta": theta, "pair": pair.map(|(a, b)| [a, b]), "at": event }),
        result: json!({ "entries": out.entries, "checks": checks }),
        passed,
        text,
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("EXPLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Input(format!("EXPLAB_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn emit(report: &Report, output: &Output, elapsed: f64) -> Result<(), Failure> {
    let rendered = match output.format {
        Format::Json => {
            let v = envelope(report, output.timing.then_some(elapsed));
            serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut s = report.text.clone();
            s.push_str(if report.passed { "passed\n" } else { "FAILED\n" });
            if output.timing {
                s.push_str(&format!("time {elapsed:.1} ms\n"));
            }
            s
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let start = Instant::now();
    let (report, output) = match &cli.command {
        Command::Classify { algebra, degree, output } => (cmd_classify(algebra, degree)?, output),
        Command::Verify {
            suite,
            samples,
            seed,
            output,
        } => (cmd_verify(suite, *samples, *seed)?, output),
        Command::Exponent {
            group,
            theta,
            pair,
            all_pairs: _,
            at,
            output,
        } => (cmd_exponent(group, theta, pair.as_deref(), at)?, output),
    };
    emit(&report, output, start.elapsed().as_secs_f64() * 1e3)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            match &f {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Aborted(msg) => eprintln!("aborted: {msg}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
