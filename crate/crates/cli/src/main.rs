use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oddsz::edgesign::Flavor;
use oddsz::interface::{catalog, catalog_lookup, compute, render_text, verify_random, ComputeOptions};
use oddsz::planar::{parse_pd, LinkDiagram, OrientationPolicy};
use oddsz::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "oddsz", version, about = "Odd Khovanov homology and the spectral sequence of its integral lift")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Odd Khovanov homology, total homology and oracle checks for one diagram.
    Compute(ComputeArgs),
    /// Pages of the spectral sequence (defaults to all pages up to E_∞).
    Pages(ComputeArgs),
    /// Structural identity checks on one diagram or on random diagrams.
    Verify(VerifyArgs),
    /// Lists the bundled catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct Input {
    /// Catalog name, e.g. 3_1 or L2a1.
    #[arg(long, conflicts_with = "pd")]
    knot: Option<String>,
    /// PD code, e.g. "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]".
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orient {
    Default,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    X,
    Y,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "y", ignore_case = true)]
    flavor: FlavorArg,
    #[arg(long, value_enum, default_value = "default")]
    orient: Orient,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Last page to report.
    #[arg(long)]
    pages: Option<usize>,
    /// Write the JSON document here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also run the structural identity checks.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    /// Number of random diagrams to check instead of a single input.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 6)]
    max_crossings: usize,
    #[arg(long, value_enum, default_value = "default")]
    orient: Orient,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Exit 1 on bad input, 2 on a violated invariant or failed check.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn read_input(input: &Input) -> Result<(Option<String>, LinkDiagram), Failure> {
    match (&input.knot, &input.pd) {
        (Some(name), _) => Ok((Some(name.clone()), catalog_lookup(name)?.diagram())),
        (None, Some(pd)) => Ok((None, parse_pd(pd)?)),
        (None, None) => Err(Failure::Input("one of --knot or --pd is required".into())),
    }
}

fn policy(orient: Orient, seed: u64) -> OrientationPolicy {
    match orient {
        Orient::Default => OrientationPolicy::Default,
        Orient::Random => OrientationPolicy::Random(seed),
    }
}

/// Writes JSON to a file or stdout; returns true if stdout was used.
fn emit_json<T: Serialize>(value: &T, path: &Option<PathBuf>) -> Result<bool, Failure> {
    let Some(path) = path else { return Ok(false) };
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    if path.as_os_str() == "-" {
        println!("{text}");
        return Ok(true);
    }
    std::fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(false)
}

fn run_compute(args: &ComputeArgs, all_pages: bool) -> Result<(), Failure> {
    let (name, d) = read_input(&args.input)?;
    let pages = match (args.pages, all_pages) {
        (Some(r), _) => Some(r),
        (None, true) => Some(d.n_crossings() + 1),
        (None, false) => None,
    };
    let opts = ComputeOptions {
        flavor: match args.flavor {
            FlavorArg::X => Flavor::X,
            FlavorArg::Y => Flavor::Y,
        },
        policy: policy(args.orient, args.seed),
        pages,
        verify: args.verify,
        seed: args.seed,
    };
    let doc = compute(name.as_deref(), &d, &opts)?;
    if !emit_json(&doc, &args.json)? {
        print!("{}", render_text(&doc));
    }
    if doc.verification.passed() {
        Ok(())
    } else {
        Err(Failure::Internal("a verification check failed".into()))
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let report = match args.random {
        Some(count) => {
            let rv = verify_random(count, args.max_crossings, args.seed)?;
            let stdout = emit_json(&rv, &args.json)?;
            if !stdout {
                println!("{count} random diagrams, at most {} crossings, seed {}", args.max_crossings, args.seed);
                print!("{}", rv.report);
            }
            rv.report
        }
        None => {
            let (name, d) = read_input(&args.input)?;
            let opts =
                ComputeOptions { policy: policy(args.orient, args.seed), pages: Some(2), verify: true, seed: args.seed, ..Default::default() };
            let doc = compute(name.as_deref(), &d, &opts)?;
            if !emit_json(&doc.verification, &args.json)? {
                print!("{}", render_text(&doc));
            }
            if !doc.verification.passed() {
                return Err(Failure::Internal("a verification check failed".into()));
            }
            return Ok(());
        }
    };
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Internal("an identity check failed".into()))
    }
}

fn run_catalog(args: &CatalogArgs) -> Result<(), Failure> {
    let entries: Vec<_> =
        catalog().iter().filter(|e| args.max_crossings.is_none_or(|m| e.crossings <= m)).cloned().collect();
    if !emit_json(&entries, &args.json)? {
        for e in &entries {
            println!("{:<8} {:>2} crossings {:>2} components  {}", e.name, e.crossings, e.components, e.pd);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("ODDSZ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = match &cli.command {
        Command::Compute(a) => run_compute(a, false),
        Command::Pages(a) => run_compute(a, true),
        Command::Verify(a) => run_verify(a),
        Command::Catalog(a) => run_catalog(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
