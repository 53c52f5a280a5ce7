use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use focal_cli::bench::{run_bench, to_csv, BenchConfig};
use focal_cli::commands::{render_focal_points, run_ablate, run_fuse, run_transform, FuseOptions, Rule};
use focal_cli::io::{evidence_to_file, load_evidence, to_json, write_atomic};
use focal_cli::{CliError, Result};
use focal_core::{Engine, Representation, DEFAULT_ALPHA, DEFAULT_MEM_CAP_BYTES};

#[derive(Parser)]
#[command(name = "focal", version, about = "Belief function transforms on focal points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a mass function to another representation.
    Transform {
        input: PathBuf,
        /// q, b, w, v, bel, pl, mass-from-q, mass-from-b, mass-from-w or mass-from-v.
        #[arg(long)]
        to: Representation,
        #[arg(long, default_value = "focal")]
        engine: Engine,
        /// Write the result here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print the focal points and the generators each one comes from.
        #[arg(long)]
        show_focal_points: bool,
        #[arg(long, default_value_t = DEFAULT_MEM_CAP_BYTES)]
        mem_cap_bytes: u64,
    },
    /// Combine mass functions, folding from the left.
    Fuse {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum)]
        rule: Rule,
        /// Discount factor used by the cautious rule when a source lacks a
        /// suitable top element.
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Fail instead of discounting in the cautious rule.
        #[arg(long)]
        no_discount: bool,
        /// Remove the mass of the empty set and rescale.
        #[arg(long)]
        normalize: bool,
        /// Engine used by the Dempster rule.
        #[arg(long, default_value = "focal")]
        engine: Engine,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MEM_CAP_BYTES)]
        mem_cap_bytes: u64,
    },
    /// Change one conjunctive weight and report the updated mass.
    Ablate {
        input: PathBuf,
        /// Comma-separated labels of the focal point; empty for the empty set.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        point: Vec<String>,
        #[arg(long)]
        weight: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Time the engines on random masses and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "8,24")]
        supports: Vec<usize>,
        /// Number of seeds per configuration.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        naive_max_n: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = DEFAULT_MEM_CAP_BYTES)]
        mem_cap_bytes: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform {
            input,
            to,
            engine,
            output,
            show_focal_points,
            mem_cap_bytes,
        } => {
            let ev = load_evidence(&input)?;
            let out = run_transform(&ev, to, engine, mem_cap_bytes)?;
            emit(output.as_deref(), &to_json(&out.file))?;
            if show_focal_points {
                let listing = render_focal_points(ev.mass.frame(), &out);
                if output.is_some() {
                    print!("{listing}");
                } else {
                    eprint!("{listing}");
                }
            }
            Ok(())
        }
        Command::Fuse {
            inputs,
            rule,
            alpha,
            no_discount,
            normalize,
            engine,
            output,
            mem_cap_bytes,
        } => {
            let evidence = inputs
                .iter()
                .map(|p| load_evidence(p))
                .collect::<Result<Vec<_>>>()?;
            let fused = run_fuse(
                &evidence,
                FuseOptions {
                    rule,
                    alpha: (!no_discount).then_some(alpha),
                    normalize,
                    engine,
                    cap: mem_cap_bytes,
                },
            )?;
            emit(output.as_deref(), &to_json(&evidence_to_file(&fused)))
        }
        Command::Ablate {
            input,
            point,
            weight,
            output,
        } => {
            let ev = load_evidence(&input)?;
            let point: Vec<String> = point.into_iter().filter(|p| !p.is_empty()).collect();
            let report = run_ablate(&ev, &point, weight)?;
            if !report.is_valid_mass {
                log::warn!("the updated mass has negative entries");
            }
            emit(output.as_deref(), &to_json(&report))
        }
        Command::Bench {
            sizes,
            supports,
            seeds,
            seed,
            naive_max_n,
            repeats,
            mem_cap_bytes,
            output,
        } => {
            let rows = run_bench(&BenchConfig {
                sizes,
                supports,
                seeds,
                first_seed: seed,
                cap: mem_cap_bytes,
                naive_max_n,
                repeats,
            })?;
            let csv = to_csv(&rows)?;
            let text = String::from_utf8(csv).map_err(|e| CliError::Validation(e.to_string()))?;
            emit(output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
