use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arbor::acceptance::{run_criterion, AcceptanceReport, CRITERIA};
use arbor::experiment::{run_experiment, write_csv, Algorithm, ExactCache, ExperimentConfig, ExperimentError};
use arbor::io::{load_edge_list, write_edge_list};
use arbor::source::GraphSource;
use arbor::sweep::{run_scaling_sweep, write_sweep_csv, SweepConfig, SweepFamily};
use arbor_core::exact::{degeneracy, triangle_count};
use clap::{Parser, Subcommand, ValueEnum};

/// Triangle and edge counting with untrusted arboricity advice.
#[derive(Parser)]
#[command(name = "arbor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a generator spec and write it as an edge list.
    Generate {
        /// Generator spec, e.g. `forest:n=1000,alpha=4,seed=1+plant:k=20,seed=2`.
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an edge-list file. Exit 0 if valid, 2 if malformed, 3 on invariant violations.
    Validate { path: PathBuf },
    /// Print n, m, exact triangle count and degeneracy of a graph.
    CountExact { graph: String },
    /// Run replicated estimator experiments and write result rows as CSV.
    Estimate {
        /// Generator spec or edge-list path.
        graph: String,
        #[arg(long, value_enum)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        advice: u32,
        /// Triangle guess for `single-guess`.
        #[arg(long)]
        guess: Option<f64>,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        /// Base seed; replica i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-replica query budget.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time in the `ms` column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Median query cost against the theoretical curve across a graph family.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Base graph spec for the triangle family.
        #[arg(long, default_value = "forest:n=60,alpha=2,seed=1")]
        base: String,
        /// Planted clique sizes for the triangle family.
        #[arg(long, value_delimiter = ',', default_value = "15,20,25,30")]
        sizes: Vec<usize>,
        /// Vertex count for the edge family.
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Forest counts for the edge family.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        alphas: Vec<u32>,
        /// Fixed advice; defaults to each instance's degeneracy or forest count.
        #[arg(long)]
        advice: Option<u32>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 11)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite. Exit 0 iff every criterion passes.
    Accept {
        /// Run only these criteria (1-based).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Triangles,
    Edges,
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn fail(err: &ExperimentError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn run(cli: Cli) -> Result<ExitCode, ExperimentError> {
    match cli.command {
        Command::Generate { spec, out } => {
            let src: GraphSource = spec.parse()?;
            if let GraphSource::File(_) = src {
                return Err(ExperimentError::Config {
                    field: "spec",
                    reason: format!("`{spec}` is not a generator spec"),
                });
            }
            write_edge_list(&src.build()?, output(&out)?)?;
        }
        Command::Validate { path } => {
            return Ok(match load_edge_list(&path) {
                Ok(g) => {
                    println!("ok: n={} m={}", g.n(), g.m());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("invalid: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            });
        }
        Command::CountExact { graph } => {
            let g = graph.parse::<GraphSource>()?.build()?;
            println!("n={} m={} triangles={} degeneracy={}", g.n(), g.m(), triangle_count(&g), degeneracy(&g));
        }
        Command::Estimate {
            graph,
            algo,
            eps,
            delta,
            advice,
            guess,
            replicas,
            seed,
            budget,
            out,
            timing,
        } => {
            let cfg = ExperimentConfig {
                source: graph.parse()?,
                algorithm: algo,
                eps,
                delta,
                advice,
                guess,
                replicas,
                seed,
                budget,
                timing,
                out,
            };
            let rows = run_experiment(&cfg, &mut ExactCache::default())?;
            write_csv(&rows, output(&cfg.out)?)?;
        }
        Command::Sweep {
            family,
            base,
            sizes,
            n,
            alphas,
            advice,
            eps,
            delta,
            seeds,
            seed,
            out,
        } => {
            let family = match family {
                FamilyKind::Triangles => {
                    let base = match base.parse::<GraphSource>()? {
                        GraphSource::Generated { base, plants } if plants.is_empty() => base,
                        _ => {
                            return Err(ExperimentError::Config {
                                field: "base",
                                reason: format!("`{base}` must be a single generator spec"),
                            })
                        }
                    };
                    SweepFamily::PlantedCliques { base, sizes }
                }
                FamilyKind::Edges => SweepFamily::ForestEdges { n, alphas, seed },
            };
            let report = run_scaling_sweep(&SweepConfig {
                family,
                advice,
                eps,
                delta,
                seeds,
                base_seed: seed,
            })?;
            write_sweep_csv(&report, output(&out)?)?;
        }
        Command::Accept { only } => {
            let ids: Vec<usize> = if only.is_empty() { (1..=CRITERIA).collect() } else { only };
            if let Some(&bad) = ids.iter().find(|&&i| !(1..=CRITERIA).contains(&i)) {
                return Err(ExperimentError::Config {
                    field: "only",
                    reason: format!("criterion {bad} does not exist"),
                });
            }
            let mut report = AcceptanceReport::default();
            for id in ids {
                let outcome = run_criterion(id);
                println!("{outcome}");
                report.outcomes.push(outcome);
            }
            let passed = report.outcomes.iter().filter(|o| o.passed).count();
            println!("{passed}/{} criteria passed", report.outcomes.len());
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
