//! `diachron`: temporal community detection from the command line.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for data
//! or validation errors.

mod commands;
mod profile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diachron_core::detection::Algorithm;
use diachron_core::generator::SweepParam;
use diachron_core::Timestep;

use commands::GraphInput;

const DEFAULT_SEED: u64 = 42;

/// Bad invocation that clap itself cannot catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "diachron", version, about = "Dynamic community detection on temporal nodes")]
struct Cli {
    /// Seed for community detection.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Link file: `src_label src_time dst_label dst_time` per line.
    links: PathBuf,
    /// Accept links pointing to a later timestep.
    #[arg(long)]
    permissive: bool,
    /// Merge every `k` consecutive timesteps before processing.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    coarsen: Timestep,
}

impl GraphArgs {
    fn input(&self) -> GraphInput<'_> {
        GraphInput {
            links: &self.links,
            permissive: self.permissive,
            coarsen: self.coarsen,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-community benchmark from a JSON config.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Planted assignment sidecar (default: `<out>.assignment`).
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Detect temporal communities and write the cover CSV.
    Detect {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value = "louvain", value_parser = parse_algorithm)]
        algo: Algorithm,
    },
    /// Per-community and per-node metrics for a cover.
    Metrics {
        #[command(flatten)]
        graph: GraphArgs,
        cover: PathBuf,
        /// Community table output (default: standard output).
        #[arg(long)]
        communities: Option<PathBuf>,
        /// Node table output (default: standard output).
        #[arg(long)]
        nodes: Option<PathBuf>,
    },
    /// Plot communities by NA and SC as an SVG scatter.
    Profile {
        communities: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Generate, detect and measure over a grid of parameter values and seeds.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_param)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        seeds: Vec<u64>,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "louvain", value_parser = parse_algorithm)]
        algo: Algorithm,
    },
    /// Merge communities sharing physical nodes when node activity improves.
    Repair {
        #[command(flatten)]
        graph: GraphArgs,
        cover: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_overlap: usize,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: diachron_core::Error| e.to_string())
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    s.parse().map_err(|e: diachron_core::Error| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate {
            config,
            out,
            assignment,
        } => commands::generate_cmd(&config, &out, assignment.as_deref()),
        Command::Detect { graph, out, algo } => {
            commands::detect_cmd(&graph.input(), &out, algo, cli.seed)
        }
        Command::Metrics {
            graph,
            cover,
            communities,
            nodes,
        } => commands::metrics_cmd(
            &graph.input(),
            &cover,
            communities.as_deref(),
            nodes.as_deref(),
        ),
        Command::Profile { communities, out } => commands::profile_cmd(&communities, out.as_deref()),
        Command::Sweep {
            config,
            param,
            values,
            seeds,
            out,
            jobs,
            algo,
        } => commands::sweep_cmd(&config, param, &values, &seeds, &out, jobs, algo),
        Command::Repair {
            graph,
            cover,
            min_overlap,
            out,
            trace,
        } => commands::repair_cmd(&graph.input(), &cover, min_overlap, &out, &trace),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use diachron_core::Error;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Config(_) | Error::Argument(_) | Error::TooLarge { .. } | Error::Json(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
