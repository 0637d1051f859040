//! `spinex`: run benchmark grids, build reports and export explanations.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 some cells failed.

mod cells;
mod commands;
mod run;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinex::analysis::{Aggregation, ProfileMetric};
use spinex::baselines::Registry;
use spinex::explain::{ExportFormat, ExportOptions};

const USAGE: u8 = 1;
const PARTIAL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "spinex", version, about = "Similarity-driven optimizer experiments")]
struct Cli {
    /// Log more (repeat for debug output).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every (problem, algorithm, seed) cell and write cells.csv.
    Run(RunArgs),
    /// Rank tables and performance profiles from a cells.csv.
    Report(ReportArgs),
    /// Plot set for a saved run record.
    Explain(ExplainArgs),
    /// Print the problem and algorithm catalogs.
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON experiment spec; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Problem ids, or all-single / all-multi.
    #[arg(long = "problem", value_delimiter = ',')]
    problems: Vec<String>,
    #[arg(long = "algo", value_delimiter = ',')]
    algorithms: Vec<String>,
    #[arg(long = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    objectives: Vec<usize>,
    #[arg(long = "population", value_delimiter = ',')]
    populations: Vec<usize>,
    /// Objective evaluations per run.
    #[arg(long)]
    budget: Option<usize>,
    /// Output directory [default: $SPINEX_OUT or ./spinex_out].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Cells run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Save each run record (with explainability snapshots) here.
    #[arg(long)]
    record_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    FitnessGap,
    Time,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AggregationArg {
    Median,
    Mean,
    Best,
}

#[derive(Args, Debug)]
struct ReportArgs {
    cells: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "profile-metric", value_enum, default_values_t = [MetricArg::FitnessGap])]
    metrics: Vec<MetricArg>,
    #[arg(long, value_enum, default_value_t = AggregationArg::Median)]
    aggregation: AggregationArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    SvgAndCsv,
    CsvOnly,
}

#[derive(Args, Debug)]
struct ExplainArgs {
    record: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::SvgAndCsv)]
    format: FormatArg,
    /// Also export the fitness landscape projection.
    #[arg(long)]
    landscape: bool,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(USAGE)
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let registry = Registry::standard();
    let file = match &args.spec {
        Some(path) => match spec::parse_file(path) {
            Ok(f) => Some((path.clone(), f)),
            Err(e) => return fail(e),
        },
        None => None,
    };
    let flags = spec::Overrides {
        problems: args.problems,
        algorithms: args.algorithms,
        seeds: args.seeds,
        dims: args.dims,
        objectives: args.objectives,
        populations: args.populations,
        budget: args.budget,
        out: args.out,
        master_seed: args.master_seed,
    };
    let file_ref = file.as_ref().map(|(p, (f, t))| (p.as_path(), f, t.as_str()));
    let spec = match spec::build(file_ref, &flags, &registry) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let options = run::Options {
        jobs: args.jobs.max(1),
        record_dir: args.record_dir,
    };
    match run::execute(&spec, &registry, &options) {
        Ok(s) if s.failed == 0 => {
            println!("{} cells written to {}", s.completed, spec.out.join("cells.csv").display());
            ExitCode::SUCCESS
        }
        Ok(s) => {
            eprintln!("{} of {} cells failed", s.failed, s.failed + s.completed);
            ExitCode::from(PARTIAL)
        }
        Err(e) => fail(e),
    }
}

fn print_files(files: &[String]) {
    for f in files {
        println!("{f}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Report(args) => {
            let metrics: Vec<ProfileMetric> = args
                .metrics
                .iter()
                .map(|m| match m {
                    MetricArg::FitnessGap => ProfileMetric::FitnessGap,
                    MetricArg::Time => ProfileMetric::Time,
                })
                .collect();
            let aggregation = match args.aggregation {
                AggregationArg::Median => Aggregation::Median,
                AggregationArg::Mean => Aggregation::Mean,
                AggregationArg::Best => Aggregation::Best,
            };
            let out = args.out.unwrap_or_else(spec::default_out);
            match commands::report(&args.cells, &out, &metrics, aggregation) {
                Ok(files) => {
                    print_files(&files);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Explain(args) => {
            let options = ExportOptions {
                format: match args.format {
                    FormatArg::SvgAndCsv => ExportFormat::SvgAndCsv,
                    FormatArg::CsvOnly => ExportFormat::CsvOnly,
                },
                include_landscape: args.landscape,
            };
            let out = args.out.unwrap_or_else(spec::default_out);
            match commands::explain(&args.record, &out, &options) {
                Ok(files) => {
                    print_files(&files);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::List { json } => {
            print!("{}", commands::list(json));
            ExitCode::SUCCESS
        }
    }
}
