//! Command-line front end: solve one instance, benchmark a batch, run
//! existence queries, or generate synthetic datasets.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chores_cli::{
    exit_code, load_dir, load_instance, parse_algs, parse_combo, parse_combos, render_csv,
    run_bench, run_gen, run_oracle, run_solve, synthetic_batch, Alg, BenchConfig, CliError,
    CliResult, GenParams, PoMode, SolveOptions, DEFAULT_PROPS,
};
use chores_core::Rational;

#[derive(Parser)]
#[command(name = "chores", about = "Allocate indivisible chores and audit fairness properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one allocation algorithm on an instance and print a JSON
    /// report with the allocation, utilities, and property verdicts.
    Solve {
        /// One of: greedy-eqx, deq1, leximin, market, egalitarian,
        /// round-robin, binary.
        #[arg(long)]
        alg: String,
        /// Instance JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Sampling seed for the egalitarian lottery.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Market accuracy parameter as a rational, e.g. 1/31944.
        #[arg(long)]
        eps: Option<String>,
        /// Write the market trace to this file, one step per line.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a batch of algorithms over a dataset and print satisfaction
    /// percentages plus runtime statistics as CSV.
    Bench {
        /// Comma-separated algorithm list.
        #[arg(long, default_value = "greedy-eqx,deq1,leximin,market")]
        algs: String,
        /// Either "synthetic" or a directory of instance JSON files.
        #[arg(long, default_value = "synthetic")]
        dataset: String,
        /// Comma-separated property columns, e.g. "EQ1,EQ1+PO".
        #[arg(long, default_value = DEFAULT_PROPS)]
        props: String,
        /// Number of synthetic instances.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Agents per synthetic instance.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Chores per synthetic instance.
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// How Pareto columns are decided: brute, certificate, or skip.
        #[arg(long, default_value = "certificate")]
        po_mode: String,
        /// Samples per instance for the egalitarian lottery.
        #[arg(long, default_value_t = 100)]
        runs: u64,
    },
    /// Decide whether an allocation with the given properties exists.
    Oracle {
        /// Property combination, e.g. "EQX+PO".
        #[arg(long)]
        exists: String,
        /// Instance JSON file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a synthetic dataset of canonical instance files.
    Gen {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total disutility per agent; rows sum to exactly -budget.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Dispersion of the per-chore split; larger is more uniform.
        #[arg(long, default_value_t = 10.0)]
        concentration: f64,
    },
}

fn parse_eps(text: &str) -> CliResult<Rational> {
    text.parse::<Rational>().map_err(|e| CliError {
        code: exit_code::PARSE,
        message: format!("invalid --eps '{text}': {e}"),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { alg, input, seed, eps, trace } => {
            let alg = Alg::parse(&alg)?;
            let instance = load_instance(&input)?;
            let eps = eps.as_deref().map(parse_eps).transpose()?;
            let options = SolveOptions { alg, seed, eps, trace_path: trace };
            let value = run_solve(&instance, &options)?;
            println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON"));
        }
        Command::Bench { algs, dataset, props, count, n, m, seed, po_mode, runs } => {
            let algs = parse_algs(&algs)?;
            let combos = parse_combos(&props)?;
            let po_mode = PoMode::parse(&po_mode)?;
            let instances = if dataset == "synthetic" {
                synthetic_batch(count, n, m, seed, 1000, 10.0)?
            } else {
                load_dir(&PathBuf::from(dataset))?
            };
            let config = BenchConfig { algs, combos, instances, po_mode, runs, seed };
            let report = run_bench(&config)?;
            print!("{}", render_csv(&report));
        }
        Command::Oracle { exists, input } => {
            let combo = parse_combo(&exists)?;
            let instance = load_instance(&input)?;
            let value = run_oracle(&instance, &combo)?;
            println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON"));
        }
        Command::Gen { out, count, n, m, seed, budget, concentration } => {
            let params = GenParams {
                out,
                count,
                num_agents: n,
                num_chores: m,
                seed,
                budget,
                concentration,
            };
            let files = run_gen(&params)?;
            println!("wrote {} files", files.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.code as u8)
        }
    }
}
