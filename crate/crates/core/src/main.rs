use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use logiczono::bench::{run_case, run_intersect_bench, summarize, BenchConfig, BenchReport, Case, DEFAULT_REPS};
use logiczono::netlang::parse_network;
use logiczono::oracle::enumerate_points;
use logiczono::reach::{
    check_unsafe, load_bindings, reach, InputSchedule, ReachOptions, ReachProblem, ReachReport, SafetySpec,
};
use logiczono::setreps::io::{read_text, AnySet, SetKind};
use logiczono::{EnumerationBudget, Error, IdAllocator, OpMode, Result};

const EXIT_UNSAFE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "logiczono", version, about = "Logical zonotope set computations and reachability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// N-step reachability of a boolean network, with optional safety check.
    Reach(ReachArgs),
    /// Intersection benchmark on random or given logical zonotopes.
    Intersect(IntersectArgs),
    /// Print every point of a set as a JSON array of bitstrings.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct ReachArgs {
    /// Network description file.
    #[arg(long)]
    net: PathBuf,
    /// JSON map from state name to initial set.
    #[arg(long)]
    init: PathBuf,
    /// JSON map from input name to set, or an array of such maps per step.
    #[arg(long)]
    inputs: Option<PathBuf>,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value = "cplz")]
    rep: RepArg,
    #[arg(long, default_value = "exact")]
    mode: OpMode,
    /// Count the points of the stacked state vector at every step.
    #[arg(long)]
    enumerate: bool,
    /// JSON `{"state": name, "unsafe": set}` or an array of them.
    #[arg(long = "unsafe")]
    unsafe_file: Option<PathBuf>,
    #[arg(long)]
    max_factors: Option<usize>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RepArg {
    Lz,
    Plz,
    Cplz,
}

impl From<RepArg> for SetKind {
    fn from(r: RepArg) -> SetKind {
        match r {
            RepArg::Lz => SetKind::Lz,
            RepArg::Plz => SetKind::Plz,
            RepArg::Cplz => SetKind::Cplz,
        }
    }
}

#[derive(Args)]
struct IntersectArgs {
    #[arg(long, required_unless_present = "a", conflicts_with_all = ["a", "b"])]
    dim: Option<usize>,
    /// Generators per set (default: dim - 1).
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Timed repetitions per record, after one warm-up run.
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    #[arg(long, requires = "b")]
    a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    #[arg(long)]
    max_factors: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    max_factors: Option<usize>,
}

fn budget(max_factors: Option<usize>) -> Result<EnumerationBudget> {
    let b = EnumerationBudget::from_env()?;
    match max_factors {
        Some(k) => b.with_max_factors(k),
        None => Ok(b),
    }
}

fn write_json(target: &Path, text: &str) -> Result<()> {
    if target == Path::new("-") {
        println!("{text}");
    } else {
        std::fs::write(target, format!("{text}\n"))?;
    }
    Ok(())
}

fn fmt_points(p: Option<u128>) -> String {
    p.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn print_reach_table(report: &ReachReport) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{:>4}  {:>12}  {:>10}  {:>8}  {:>10}",
        "step", "points", "generators", "factors", "time_ms"
    );
    for s in &report.steps {
        let _ = writeln!(
            out,
            "{:>4}  {:>12}  {:>10}  {:>8}  {:>10.3}",
            s.step,
            fmt_points(s.points),
            s.generators,
            s.factors,
            s.time_ms
        );
    }
    let _ = writeln!(out, "total {:.3} ms", report.total_time_ms);
    for v in &report.verdicts {
        match &v.witness {
            Some(w) => {
                let _ = writeln!(out, "step {} {}: UNSAFE (witness {w})", v.step, v.state);
            }
            None => {
                let _ = writeln!(out, "step {} {}: SAFE", v.step, v.state);
            }
        }
    }
}

fn cmd_reach(args: ReachArgs) -> Result<u8> {
    let budget = budget(args.max_factors)?;
    let net = parse_network(&read_text(&args.net)?)?;
    let init = load_bindings(&args.init)?;
    let inputs = match &args.inputs {
        Some(p) => InputSchedule::load(p)?,
        None => InputSchedule::default(),
    };
    let rep: SetKind = args.rep.into();
    if rep == SetKind::Lz {
        let bound = init.iter().chain(match &inputs {
            InputSchedule::Constant(b) => Box::new(b.iter()) as Box<dyn Iterator<Item = _>>,
            InputSchedule::PerStep(v) => Box::new(v.iter().flat_map(|b| b.iter())),
        });
        for (name, set) in bound {
            if !set.to_lz()?.1 {
                eprintln!("note: set for `{name}` is enclosed by a logical zonotope");
            }
        }
    }
    let problem = ReachProblem::new(net, init, inputs, args.steps)?;
    let alloc = IdAllocator::new();
    let opts = ReachOptions {
        rep,
        mode: args.mode,
        enumerate: args.enumerate,
        budget,
    };
    let result = reach(&problem, &opts, &alloc)?;
    let mut verdicts = Vec::new();
    if let Some(path) = &args.unsafe_file {
        for spec in SafetySpec::load(path, &alloc)? {
            verdicts.extend(check_unsafe(&result, &spec, &alloc, &budget)?);
        }
    }
    let report = result.report(verdicts);
    match &args.json {
        Some(p) if p == Path::new("-") => write_json(p, &report.to_json())?,
        Some(p) => {
            write_json(p, &report.to_json())?;
            print_reach_table(&report);
        }
        None => print_reach_table(&report),
    }
    Ok(if report.any_unsafe() { EXIT_UNSAFE } else { 0 })
}

fn print_bench(report: &BenchReport) {
    println!(
        "{:>5}  {:>5}  {:>12}  {:>10}  {:>8}  {:>10}",
        "trial", "rep", "size", "generators", "factors", "time_ms"
    );
    for r in &report.records {
        println!(
            "{:>5}  {:>5}  {:>12}  {:>10}  {:>8}  {:>10.4}",
            r.trial,
            serde_json::to_value(r.rep).expect("enum").as_str().unwrap_or("?"),
            r.size,
            r.generators,
            r.factors,
            r.time_ms
        );
    }
    for s in &report.summary {
        println!(
            "median {:<5} size {:>12}  time {:.4} ms",
            serde_json::to_value(s.rep).expect("enum").as_str().unwrap_or("?"),
            s.median_size,
            s.median_time_ms
        );
    }
}

fn cmd_intersect(args: IntersectArgs) -> Result<u8> {
    let budget = budget(args.max_factors)?;
    let report = match (&args.a, &args.b) {
        (Some(a), Some(b)) => {
            let alloc = IdAllocator::new();
            let (sa, sb) = (AnySet::load(a)?, AnySet::load(b)?);
            if sa.dim() != sb.dim() {
                return Err(Error::Dimension {
                    expected: sa.dim(),
                    found: sb.dim(),
                });
            }
            let case = Case {
                lz: (sa.to_lz()?.0, sb.to_lz()?.0),
                cplz: (sa.to_cplz(&alloc)?, sb.to_cplz(&alloc)?),
            };
            let records = run_case(&case, 0, None, args.reps, &alloc, &budget)?;
            BenchReport {
                distribution: "explicit sets",
                dim: sa.dim(),
                gens: records[0].gens,
                seed: None,
                trials: 1,
                reps: args.reps,
                summary: summarize(&records),
                records,
            }
        }
        _ => {
            let cfg = BenchConfig {
                dim: args.dim.expect("clap requires --dim without --a"),
                gens: args.gens,
                seed: args.seed,
                trials: args.trials,
                reps: args.reps,
            };
            run_intersect_bench(&cfg, &budget)?
        }
    };
    match &args.json {
        Some(p) if p == Path::new("-") => write_json(p, &report.to_json())?,
        Some(p) => {
            write_json(p, &report.to_json())?;
            print_bench(&report);
        }
        None => print_bench(&report),
    }
    Ok(0)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<u8> {
    let budget = budget(args.max_factors)?;
    let set = AnySet::load(&args.set)?.to_cplz(&IdAllocator::new())?;
    println!("{}", enumerate_points(&set, &budget)?.to_json());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Reach(a) => cmd_reach(a),
        Command::Intersect(a) => cmd_intersect(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                Error::Internal(_) => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            })
        }
    }
}
