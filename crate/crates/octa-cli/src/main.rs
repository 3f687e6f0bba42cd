//! `octa`: command-line front end for octahedral systems — parity
//! checking, counting, span statistics, constructions, dominance
//! digraphs, exact minimum-edge search, exact rational colourful-depth
//! computations, and planar realizability.
//!
//! Results go to standard output as JSON; a human summary goes to
//! standard error unless `--json` is set. Exit codes: 0 success or a
//! true property, 1 false property or failed claim, 2 usage error,
//! 3 budget or resource exhaustion.

mod claims;
mod formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use octa_core::bounds::bound_report;
use octa_core::circle::{is_realizable_2d, CircularType};
use octa_core::constructions;
use octa_core::dominance::{build_dominance, sink_clique};
use octa_core::error::Error;
use octa_core::f2::{count_systems, dimension, weight_distribution};
use octa_core::geometry::{depth_system, mu_search};
use octa_core::search::{min_edges, MethodChoice, SearchOptions};
use octa_core::shape::ClassShape;
use octa_core::system::OctahedralSystem;

use claims::{Budgets, Profile};
use formats::{render_rational, vertex_to_json, ConfigJson, InstanceJson};

#[derive(Parser)]
#[command(
    name = "octa",
    version,
    about = "Octahedral systems: parity-constrained colourful hypergraphs, \
             their GF(2) structure, exact minimum-edge search, and exact \
             planar simplicial depth"
)]
struct Cli {
    /// Node budget for searches.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,

    /// Wall-clock budget in seconds (falls back to OCTA_BUDGET_SECS).
    #[arg(long, global = true)]
    budget_secs: Option<u64>,

    /// Worker threads for parallel phases (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for randomized experiments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Machine output only (no summary on standard error).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum MethodArg {
    #[default]
    Auto,
    Enum,
    Search,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichConstruction {
    Upper,
    Square,
    Fan,
    Complete,
    Omega9,
}

#[derive(Subcommand)]
enum Command {
    /// Check the parity condition and list isolated vertices.
    Check { instance: PathBuf },
    /// Dimension and count of the systems on a shape.
    Count {
        #[arg(required = true)]
        shape: Vec<usize>,
    },
    /// Weight histogram over the whole span of a shape.
    Weights {
        #[arg(required = true)]
        shape: Vec<usize>,
    },
    /// Emit a named construction as instance JSON.
    Construct {
        #[arg(value_enum)]
        which: WhichConstruction,
        shape: Vec<usize>,
    },
    /// Dominance digraph, isolated vertices, and a sink clique.
    Digraph { instance: PathBuf },
    /// Minimum edges over systems without isolated vertex.
    Nu {
        #[arg(required = true)]
        shape: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
    },
    /// Published lower and upper bounds for a shape.
    Bounds {
        #[arg(required = true)]
        shape: Vec<usize>,
    },
    /// Colourful simplices containing the origin of an exact config.
    Depth { config: PathBuf },
    /// Random descent on the number of origin-covering simplices.
    MuSearch {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Decide planar realizability of a (3,3,3) instance.
    Realizable2d {
        instance: PathBuf,
        #[arg(long)]
        up_to_iso: bool,
    },
    /// Re-verify the published value table.
    VerifyTable {
        #[arg(long, value_enum, default_value_t)]
        profile: Profile,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            let code = match &err {
                Error::Resource(_) | Error::SamplingBudget(_) => 3u8,
                Error::NotGeneralPosition(_) => 1,
                _ => 2,
            };
            emit(
                &cli,
                &json!({ "error": err.to_string() }),
                &format!("error: {err}"),
            );
            ExitCode::from(code)
        }
    }
}

fn read_instance(path: &Path) -> Result<OctahedralSystem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let json: InstanceJson = serde_json::from_str(&text)
        .map_err(|e| Error::Precondition(format!("bad instance JSON: {e}")))?;
    json.to_system().map_err(Error::Precondition)
}

fn read_config(path: &Path) -> Result<octa_core::geometry::ColourConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let json: ConfigJson = serde_json::from_str(&text)
        .map_err(|e| Error::Precondition(format!("bad config JSON: {e}")))?;
    json.to_config().map_err(Error::Precondition)
}

fn emit<T: Serialize>(cli: &Cli, value: &T, summary: &str) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
    if !cli.json {
        eprintln!("{summary}");
    }
}

fn shape_from(sizes: &[usize]) -> Result<ClassShape, Error> {
    ClassShape::new(sizes.to_vec())
}

fn budgets(cli: &Cli) -> Budgets {
    let time_ms = cli
        .budget_secs
        .or_else(|| {
            std::env::var("OCTA_BUDGET_SECS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .map(|s: u64| s * 1000);
    Budgets {
        nodes: cli.budget_nodes.unwrap_or(u64::MAX),
        time_ms,
        seed: cli.seed,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Check { instance } => {
            let sys = read_instance(instance)?;
            let counterexample = sys.parity_counterexample()?;
            let isolated: Vec<[usize; 2]> = sys
                .isolated_vertices()
                .into_iter()
                .map(vertex_to_json)
                .collect();
            let octahedral = counterexample.is_none();
            let out = json!({
                "octahedral": octahedral,
                "isolated": isolated,
                "counterexample": counterexample.map(|c| c.pairs),
            });
            emit(
                cli,
                &out,
                &format!(
                    "octahedral: {octahedral}, isolated vertices: {}",
                    isolated.len()
                ),
            );
            Ok(if octahedral {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Count { shape } => {
            let shape = shape_from(shape)?;
            let dim = dimension(&shape)?;
            let count = count_systems(&shape)?;
            let out = json!({
                "classes": shape.sizes(),
                "dimension": dim as u64,
                "count": count.to_decimal_or_exponent(),
            });
            emit(cli, &out, &format!("dimension {dim}, {count} systems"));
            Ok(ExitCode::SUCCESS)
        }

        Command::Weights { shape } => {
            let shape = shape_from(shape)?;
            let hist = weight_distribution(&shape, 26)?;
            let total: u64 = hist.values().sum();
            let hist_json: serde_json::Map<String, serde_json::Value> = hist
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            let out = json!({
                "classes": shape.sizes(),
                "total": total.to_string(),
                "histogram": hist_json,
            });
            emit(
                cli,
                &out,
                &format!("{total} systems over {} weights", hist.len()),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Construct { which, shape } => {
            let sys = match which {
                WhichConstruction::Omega9 => {
                    if !shape.is_empty() {
                        return Err(Error::Precondition(
                            "the nine-edge grid takes no shape arguments".into(),
                        ));
                    }
                    constructions::omega9()
                }
                WhichConstruction::Upper => constructions::inductive_upper(&shape_from(shape)?)?,
                WhichConstruction::Fan => constructions::fan_construction(&shape_from(shape)?)?,
                WhichConstruction::Complete => {
                    constructions::complete_system(&shape_from(shape)?)?
                }
                WhichConstruction::Square => {
                    let s = shape_from(shape)?;
                    if s.sizes().iter().any(|&m| m != s.size(0)) {
                        return Err(Error::Precondition(
                            "the grid construction needs equal class sizes".into(),
                        ));
                    }
                    constructions::square_construction(s.size(0), s.n())?
                }
            };
            let out = InstanceJson::from_system(&sys);
            emit(cli, &out, &format!("{} edges", sys.edge_count()));
            Ok(ExitCode::SUCCESS)
        }

        Command::Digraph { instance } => {
            let sys = read_instance(instance)?;
            let d = build_dominance(&sys);
            let arcs: Vec<[[usize; 2]; 2]> = d
                .arcs()
                .iter()
                .map(|&(u, v)| [vertex_to_json(u), vertex_to_json(v)])
                .collect();
            let isolated: Vec<[usize; 2]> =
                d.isolated().iter().map(|&v| vertex_to_json(v)).collect();
            let sink: Option<Vec<[usize; 2]>> = sink_clique(&sys)
                .ok()
                .map(|x| x.vertices().map(vertex_to_json).collect());
            let out = json!({
                "classes": sys.shape().sizes(),
                "arcs": arcs,
                "isolated": isolated,
                "sink_clique": sink,
            });
            emit(
                cli,
                &out,
                &format!("{} arcs, {} isolated", arcs.len(), isolated.len()),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Nu { shape, method } => {
            let shape = shape_from(shape)?;
            let b = budgets(cli);
            let mut opts = SearchOptions::default();
            opts.method = match method {
                MethodArg::Auto => MethodChoice::Auto,
                MethodArg::Enum => MethodChoice::Enumeration,
                MethodArg::Search => MethodChoice::SubsetSearch,
            };
            opts.node_budget = b.nodes;
            opts.time_budget_ms = b.time_ms;
            let out = min_edges(&shape, &opts)?;
            let witness = out.witness.as_ref().map(InstanceJson::from_system);
            let payload = json!({
                "shape": out.shape.sizes(),
                "canonical_shape": out.canonical_shape.sizes(),
                "nu": out.nu(),
                "lower": out.lower,
                "upper": out.upper,
                "exhaustive": out.exhaustive,
                "method": out.method.as_str(),
                "nodes_explored": out.nodes_explored,
                "witness": witness,
            });
            let summary = match out.nu() {
                Some(v) => format!("minimum edges: {v} (exhaustive)"),
                None => format!(
                    "budget exhausted: minimum in [{}, {}]",
                    out.lower,
                    out.upper.map_or("?".into(), |u| u.to_string())
                ),
            };
            emit(cli, &payload, &summary);
            Ok(if out.exhaustive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }

        Command::Bounds { shape } => {
            let shape = shape_from(shape)?;
            let report = bound_report(&shape)?;
            let out = json!({
                "shape": report.shape.sizes(),
                "lower": { "value": report.lower, "by": report.lower_by.as_str() },
                "upper": { "value": report.upper, "by": report.upper_by.as_str() },
            });
            emit(
                cli,
                &out,
                &format!("bounds: [{}, {}]", report.lower, report.upper),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Depth { config } => {
            let cfg = read_config(config)?;
            let (sys, count) = depth_system(&cfg)?;
            let out = json!({
                "count": count,
                "instance": InstanceJson::from_system(&sys),
            });
            emit(
                cli,
                &out,
                &format!("{count} colourful simplices contain the origin"),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::MuSearch { d, trials } => {
            let outcome = mu_search(*d, *trials, cli.seed)?;
            let out = json!({
                "d": outcome.d,
                "trials": outcome.trials,
                "min_count": outcome.min_count,
                "witness": ConfigJson::from_config(&outcome.witness),
            });
            emit(
                cli,
                &out,
                &format!("minimum count found: {}", outcome.min_count),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Realizable2d {
            instance,
            up_to_iso,
        } => {
            let sys = read_instance(instance)?;
            let verdict = is_realizable_2d(&sys, *up_to_iso)?;
            let witness = verdict.witness.as_ref().map(|w| {
                let word: Vec<String> = w
                    .circular_type
                    .word()
                    .iter()
                    .map(|&s| {
                        if s < 9 {
                            format!("p{s}")
                        } else {
                            format!("q{}", s - 9)
                        }
                    })
                    .collect();
                let tangents: Vec<String> = (0..9)
                    .map(|k| render_rational(&CircularType::slot_tangent(k)))
                    .collect();
                json!({
                    "word": word,
                    "slot_tangents": tangents,
                    "points": ConfigJson::from_config(&w.points),
                    "hulls_contain_origin": w.hulls_contain_origin,
                })
            });
            let out = json!({
                "realizable": verdict.realizable,
                "types_examined": verdict.types_examined,
                "witness": witness,
            });
            emit(
                cli,
                &out,
                &format!(
                    "realizable: {} ({} circular types examined)",
                    verdict.realizable, verdict.types_examined
                ),
            );
            Ok(if verdict.realizable {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::VerifyTable { profile } => {
            let table = claims::run_profile(*profile, &budgets(cli));
            if !cli.json {
                for record in &table.claims {
                    eprintln!(
                        "{:<26} {:<8} expected {} | obtained {} ({} ms)",
                        record.id,
                        format!("{:?}", record.status).to_lowercase(),
                        record.expected,
                        record.obtained,
                        record.millis
                    );
                }
            }
            emit(
                cli,
                &table,
                &format!(
                    "{} passed, {} failed, {} skipped",
                    table.passed, table.failed, table.skipped
                ),
            );
            Ok(if table.failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}
