use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::error;
use snark_core::io::{parse_edge_list, write_edge_list, write_graph6};
use snark_core::multipole::{not_gate, petersen_minus_path, split};
use snark_core::MultiGraph;
use snark_harness::corpus::{builder_input, PAPER_SUITE};
use snark_harness::{
    builder, ratio_stats, read_graph6_file, run_measures, to_csv, verify_records, BudgetSpec, Input, MeasureConfig,
    MeasureName,
};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "snarkctl",
    version,
    about = "Measures of edge-uncolorability for cubic graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    G6,
    Edgelist,
    Multipole,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Corpus {
    /// graph6 file (one graph per line) or, for other extensions, an edge-list file.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// Named graph, e.g. `petersen` or `flower_snark:5`.
    #[arg(long = "builder")]
    builders: Vec<String>,
}

#[derive(clap::Args)]
struct Limits {
    /// Per-measure budget: `1e8`, `30s`, `nodes=1e8,time=30s`, or `unlimited`.
    #[arg(long, default_value = "nodes=1e8,time=120s")]
    budget: String,
    /// Largest denominator tried for the circular flow number.
    #[arg(long, default_value_t = 10)]
    q_cap: u32,
    /// Skip Φ⁺ searches on larger graphs.
    #[arg(long, default_value_t = 16)]
    phi_max_n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named graph or multipole.
    Construct {
        /// petersen, k4, k33, flower_snark, loupekhine, k, k_star, h28, g56, not_gate, petersen_minus_path
        name: String,
        /// Odd parameter for flower_snark and loupekhine.
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "g6")]
        format: GraphFormat,
    },
    /// Cut a graph along an edge cut into two multipoles.
    Split {
        #[arg(long)]
        input: PathBuf,
        /// Line of the graph6 file to use.
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Comma-separated edge ids.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<usize>,
    },
    /// Compute measures for each input graph.
    Measures {
        #[command(flatten)]
        corpus: Corpus,
        /// Comma-separated measure names, or `all`.
        #[arg(long, default_value = "all")]
        measures: String,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        /// Include per-measure wall times.
        #[arg(long)]
        timings: bool,
    },
    /// Run the theorem suite and write a verification report.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        #[command(flatten)]
        corpus: Corpus,
        #[arg(long, default_value = "all")]
        measures: String,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Corpus lower bound for q(tau, k) = sup k / n over graphs with tau >= k.
    Stats {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        corpus: Corpus,
        #[command(flatten)]
        limits: Limits,
    },
}

/// An error that maps to an exit code.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(EXIT_INPUT, e.to_string())
    }
}

fn load(corpus: &Corpus, default_builders: &[&str]) -> Result<Vec<Input>, Fail> {
    let mut inputs = Vec::new();
    for path in &corpus.inputs {
        if path.extension().is_some_and(|e| e == "g6") {
            inputs.extend(read_graph6_file(path)?);
        } else {
            let text =
                std::fs::read_to_string(path).map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
            inputs.push(Input {
                id: path.display().to_string(),
                graph: parse_edge_list(&text).map_err(|e| e.to_string()),
            });
        }
    }
    for spec in &corpus.builders {
        inputs.push(builder_input(spec)?);
    }
    if inputs.is_empty() {
        for spec in default_builders {
            inputs.push(builder_input(spec)?);
        }
    }
    if inputs.is_empty() {
        return Err(Fail(EXIT_INPUT, "no input graphs; use --input or --builder".into()));
    }
    Ok(inputs)
}

fn config(measures: &str, limits: &Limits, timings: bool) -> Result<MeasureConfig, Fail> {
    Ok(MeasureConfig {
        measures: MeasureName::parse_list(measures)?,
        budget: limits.budget.parse::<BudgetSpec>()?,
        q_cap: limits.q_cap,
        phi_max_vertices: limits.phi_max_n,
        timings,
        ..MeasureConfig::default()
    })
}

fn emit_graph(g: &MultiGraph, format: GraphFormat) -> Result<String, Fail> {
    match format {
        GraphFormat::G6 => Ok(write_graph6(g)? + "\n"),
        GraphFormat::Edgelist => Ok(write_edge_list(g)),
        GraphFormat::Multipole => Err(Fail(EXIT_INPUT, "multipole format applies to multipoles only".into())),
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Construct { name, k, format } => {
            let out = match name.as_str() {
                "not_gate" | "petersen_minus_path" => {
                    if !matches!(format, GraphFormat::Multipole) {
                        return Err(Fail(
                            EXIT_INPUT,
                            format!("{name} is a multipole; use --format multipole"),
                        ));
                    }
                    let mp = if name == "not_gate" {
                        not_gate()
                    } else {
                        petersen_minus_path()
                    };
                    mp.to_text()
                }
                _ => {
                    let spec = match k {
                        Some(k) => format!("{name}:{k}"),
                        None => name,
                    };
                    emit_graph(builder(&spec)?.as_multigraph(), format)?
                }
            };
            print!("{out}");
        }
        Command::Split { input, index, cut } => {
            let g = if input.extension().is_some_and(|e| e == "g6") {
                let inputs = read_graph6_file(&input)?;
                let item = inputs
                    .into_iter()
                    .nth(index)
                    .ok_or_else(|| Fail(EXIT_INPUT, format!("no graph at index {index}")))?;
                item.graph.map_err(|e| Fail(EXIT_INPUT, e))?
            } else {
                parse_edge_list(&std::fs::read_to_string(&input)?)?
            };
            let s = split(&g, &cut)?;
            print!(
                "# side containing vertex {}\n{}",
                s.first_vertices[0],
                s.first.to_text()
            );
            print!("# other side\n{}", s.second.to_text());
        }
        Command::Measures {
            corpus,
            measures,
            limits,
            format,
            timings,
        } => {
            let inputs = load(&corpus, &[])?;
            let records = run_measures(&inputs, &config(&measures, &limits, timings)?);
            match format {
                ReportFormat::Json => {
                    for r in &records {
                        println!("{}", serde_json::to_string(r)?);
                    }
                }
                ReportFormat::Csv => print!("{}", to_csv(&records)?),
            }
        }
        Command::Verify {
            suite,
            corpus,
            measures,
            limits,
            report,
        } => {
            if suite != "paper" {
                return Err(Fail(
                    EXIT_INPUT,
                    format!("unknown suite `{suite}`; only `paper` exists"),
                ));
            }
            let inputs = load(&corpus, &PAPER_SUITE)?;
            let records = run_measures(&inputs, &config(&measures, &limits, false)?);
            let rep = verify_records(&inputs, &records);
            let json = serde_json::to_string_pretty(&rep)?;
            match report {
                Some(path) => std::fs::write(&path, json + "\n")
                    .map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))?,
                None => println!("{json}"),
            }
            for e in &rep.entries {
                let status = match (e.passed, e.observation) {
                    (true, _) => "pass",
                    (false, true) => "observed counterexample",
                    (false, false) => "FAIL",
                };
                eprintln!(
                    "{status:>8}  {:<28} tested {:>4}, inconclusive {:>3}",
                    e.id,
                    e.graphs_tested,
                    e.inconclusive.len()
                );
            }
            if !rep.passed {
                return Err(Fail(EXIT_CHECK_FAILED, "verification failed".into()));
            }
            if rep.inconclusive {
                return Err(Fail(EXIT_BUDGET, "budget exhausted in a required check".into()));
            }
        }
        Command::Stats { tau, k, corpus, limits } => {
            let tau: MeasureName = tau.parse()?;
            let inputs = load(&corpus, &PAPER_SUITE)?;
            let mut cfg = config(tau.as_str(), &limits, false)?;
            cfg.measures.insert(MeasureName::Class);
            let records = run_measures(&inputs, &cfg);
            let stat = ratio_stats(&records, tau, k).map_err(|e| Fail(EXIT_CHECK_FAILED, e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&stat)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            error!("{msg}");
            eprintln!("snarkctl: {msg}");
            ExitCode::from(code)
        }
    }
}
