use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctaea::algorithm::{run_with, AlgorithmKind, Budget, RunConfig};
use ctaea::decomposition::Lattice;
use ctaea::harness::{
    build_report, read_json, read_record, resolve_out_dir, run_plan, scatter_csv, write_atomic,
    write_json, ExperimentPlan, ProblemEntry,
};
use ctaea::problems::{cached_reference_front, default_resolution, make_problem, reference_front};
use ctaea::Error;

#[derive(Parser)]
#[command(name = "ctaea", version, about = "Two-archive constrained multi-objective optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimization and write its record as JSON.
    Run(RunArgs),
    /// Run a plan (from --plan or the inline flags) and write records plus a report.
    Bench(BenchArgs),
    /// Write the final CA (or DA) of a record as CSV.
    Scatter(ScatterArgs),
    /// Rebuild the comparison report from stored records.
    Report(ReportArgs),
    /// Pre-generate reference fronts.
    Fronts(FrontsArgs),
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    problem: String,
    /// Number of objectives (DC-DTLZ only).
    #[arg(long)]
    m: Option<usize>,
    /// Decision dimension.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value = "ctaea2")]
    algorithm: AlgorithmKind,
    /// Population / archive size; defaults to the weight lattice size for m.
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long, default_value_t = 500)]
    generations: u64,
    /// Stop on an evaluation budget instead of a generation count.
    #[arg(long, conflicts_with = "generations")]
    evaluations: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    ref_resolution: Option<usize>,
    /// Record file; defaults to <output dir>/record.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Problems for an inline plan (repeatable).
    #[arg(long, required_unless_present = "plan")]
    problem: Vec<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Algorithms for an inline plan (repeatable); defaults to both.
    #[arg(long)]
    algorithm: Vec<AlgorithmKind>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long, default_value_t = 500)]
    generations: u64,
    #[arg(long, default_value_t = 31)]
    runs: usize,
    /// Seed of run 0; run i uses seed + i.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    ref_resolution: Option<usize>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScatterArgs {
    #[arg(long)]
    record: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Write the diversity archive instead of the convergence archive.
    #[arg(long)]
    da: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory searched recursively for record files, or single files.
    #[arg(long = "records", required = true)]
    records: Vec<PathBuf>,
    /// Report JSON path; the text table goes next to it and to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrontsArgs {
    #[arg(long, required = true)]
    problem: Vec<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ref_resolution: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Scatter(args) => cmd_scatter(args),
        Command::Report(args) => cmd_report(args),
        Command::Fronts(args) => cmd_fronts(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::Io { .. } | Error::Format { .. } => 3,
                Error::Contract(_) | Error::EmptyFront { .. } => 1,
            })
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    let p = &args.problem;
    let problem = make_problem(&p.problem, p.m, p.n)?;
    let population = args
        .pop
        .unwrap_or_else(|| Lattice::default_for(problem.m()).size(problem.m()));
    let mut config = RunConfig::new(&p.problem, args.algorithm, population, args.generations, args.seed);
    config.m = p.m;
    config.n = p.n;
    if let Some(e) = args.evaluations {
        config.budget = Budget::Evaluations(e);
    }
    let out = args
        .out
        .unwrap_or_else(|| resolve_out_dir(None, Path::new("results")).join("record.json"));
    let resolution = args
        .ref_resolution
        .unwrap_or_else(|| default_resolution(problem.m()));
    let front = reference_front(&problem, resolution)?;
    let record = run_with(&problem, &config, Some(&front))?;
    write_json(&out, &record)?;
    match record.igd {
        Some(igd) => println!("{}: igd {igd:.6e} after {} generations", record.problem, record.generations),
        None => println!("{}: no feasible solution found", record.problem),
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let plan = match &args.plan {
        Some(path) => read_json::<ExperimentPlan>(path)?,
        None => ExperimentPlan {
            problems: args
                .problem
                .iter()
                .map(|name| ProblemEntry {
                    name: name.clone(),
                    m: args.m,
                    n: args.n,
                    population: args.pop,
                })
                .collect(),
            algorithms: if args.algorithm.is_empty() {
                vec![AlgorithmKind::Ctaea2, AlgorithmKind::CtaeaBaseline]
            } else {
                args.algorithm.clone()
            },
            runs: args.runs,
            seed_base: args.seed,
            budget: Budget::Generations(args.generations),
            out_dir: None,
            ref_resolution: args.ref_resolution,
            variation: None,
        },
    };
    let fallback = plan.out_dir.clone().unwrap_or_else(|| PathBuf::from("results"));
    let out_dir = resolve_out_dir(args.out.as_deref(), &fallback);
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let outcome = run_plan(&plan, threads, &out_dir)?;
    print!("{}", outcome.report.render_text());
    println!(
        "{} records and report written to {}",
        outcome.records.len(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_scatter(args: ScatterArgs) -> Result<(), Error> {
    let record = read_record(&args.record)?;
    let archive = if args.da { &record.final_da } else { &record.final_ca };
    write_atomic(&args.out, scatter_csv(archive, record.m).as_bytes())
}

fn collect_json(path: &Path, out: &mut Vec<PathBuf>) -> Result<(), Error> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for entry in entries {
            collect_json(&entry, out)?;
        }
    } else if path.extension().is_some_and(|e| e == "json") {
        out.push(path.to_path_buf());
    } else if !path.exists() {
        return Err(Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        });
    }
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), Error> {
    let mut files = Vec::new();
    for path in &args.records {
        collect_json(path, &mut files)?;
    }
    // report.json sits next to the records it summarizes.
    let mut records = Vec::new();
    for file in &files {
        if file.file_name().is_some_and(|n| n == "report.json") {
            continue;
        }
        records.push(read_record(file)?);
    }
    if records.is_empty() {
        return Err(Error::Config("no run records found".into()));
    }
    let report = build_report(&records)?;
    let text = report.render_text();
    if let Some(out) = &args.out {
        write_json(out, &report)?;
        write_atomic(&out.with_extension("txt"), text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_fronts(args: FrontsArgs) -> Result<(), Error> {
    let dir = resolve_out_dir(args.out.as_deref(), Path::new("results")).join("fronts");
    for name in &args.problem {
        let problem = make_problem(name, args.m, args.n)?;
        let resolution = args
            .ref_resolution
            .unwrap_or_else(|| default_resolution(problem.m()));
        let front = cached_reference_front(&problem, resolution, &dir)?;
        println!("{}: {} points", problem.name(), front.len());
    }
    Ok(())
}
