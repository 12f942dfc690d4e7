//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 guard refusals (the
//! message names the guard and the computed size). Setting
//! `HYPERMATCH_GUARD_OVERRIDE=1` lifts all guards; the exponential-time
//! routines will then happily run forever on large inputs.

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hypermatch::chain::{ChainParams, ChainError};
use hypermatch::estimator::{count_fpras, EstimatorConfig, EstimatorError, Mode};
use hypermatch::generators;
use hypermatch::graphs::Graph;
use hypermatch::hypergraph::{Hypergraph, Matching};
use hypermatch::oracle::{count_matchings_with_limit, GuardError, DEFAULT_MAX_COUNT_EDGES};
use hypermatch::paths::{
    canonical_path, cut_bound_check, verify_injectivity, PathMode, VerifyOptions,
    DEFAULT_MAX_VERIFY_STATES,
};
use hypermatch::structure::classify;
use hypermatch::transition::{
    conductance_exact, TransitionError, TransitionGraph, DEFAULT_MAX_CONDUCTANCE_STATES,
};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Matchings in k-uniform hypergraphs: analysis, exact and approximate counting, sampling, and canonical-path verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a hypergraph: wide edges, 3-comb witness, claw centers.
    Analyze {
        file: String,
    },
    /// Count matchings, exactly or by sampling.
    Count(CountArgs),
    /// Run the chain and print the final matching.
    Sample {
        file: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one line per step: step number, kind, chosen edge.
        #[arg(long)]
        trace: bool,
    },
    /// Emit an instance from one of the built-in families.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Canonical-path construction and verification.
    Paths {
        #[command(subcommand)]
        action: PathsAction,
    },
    /// Exact conductance of the chain by subset enumeration.
    Conductance {
        file: String,
        #[arg(long, default_value_t = DEFAULT_MAX_CONDUCTANCE_STATES)]
        max_omega: usize,
    },
}

#[derive(Args)]
struct CountArgs {
    file: String,
    /// Exact count by branch-and-count with memoization.
    #[arg(long, conflicts_with = "fpras")]
    exact: bool,
    /// Approximate count via the sampling estimator.
    #[arg(long)]
    fpras: bool,
    #[arg(long, required_if_eq("fpras", "true"))]
    eps: Option<f64>,
    #[arg(long, required_if_eq("fpras", "true"))]
    delta: Option<f64>,
    #[arg(long, value_parser = parse_mode, default_value = "heuristic")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the scheduled steps per sample.
    #[arg(long)]
    steps: Option<u64>,
    /// Override the scheduled samples per stage.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_COUNT_EDGES)]
    max_edges: usize,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "heuristic" => Ok(Mode::Heuristic),
        "rigorous" => Ok(Mode::Rigorous),
        other => Err(format!("unknown mode {other:?} (heuristic|rigorous)")),
    }
}

#[derive(Subcommand)]
enum Family {
    /// Subdivide a 3-uniform hypergraph.
    Subdivided {
        #[arg(long)]
        input: String,
        /// Emit only the three triples through the new vertex per edge.
        #[arg(long)]
        triples_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Rooted blow-up over parts of the given sizes.
    Blowup {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u32>,
        #[arg(short, long)]
        k: usize,
        /// Fail when no pair of parts can host an edge.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Turn a bipartite graph into a k-graph with the same matchings.
    FromBipartite {
        #[arg(long)]
        input: String,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Dual of a d-regular graph (matchings become independent sets).
    Dual {
        #[arg(long)]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Uniformly random k-graph with m distinct edges.
    Random {
        #[arg(short, long)]
        n: u32,
        #[arg(short, long)]
        m: u64,
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum PathsAction {
    /// All-pairs canonical-path verification.
    Verify {
        file: String,
        /// Use the Euler-tour construction (required beyond claw-free).
        #[arg(long)]
        general: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VERIFY_STATES)]
        max_omega: usize,
    },
    /// Print the canonical path between two matchings.
    Show {
        file: String,
        /// JSON file holding the initial matching as an edge-index array.
        #[arg(long)]
        initial: String,
        /// JSON file holding the final matching as an edge-index array.
        #[arg(long)]
        r#final: String,
        #[arg(long)]
        general: bool,
    },
}

enum CliError {
    Usage(String),
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Guard(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<GuardError> for CliError {
    fn from(e: GuardError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<TransitionError> for CliError {
    fn from(e: TransitionError) -> Self {
        match e {
            TransitionError::Guard(g) => CliError::Guard(g.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::ScheduleOverflow { .. } => CliError::Guard(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn guards_lifted() -> bool {
    std::env::var("HYPERMATCH_GUARD_OVERRIDE").map(|v| v == "1").unwrap_or(false)
}

fn lift(limit: usize) -> usize {
    if guards_lifted() {
        usize::MAX
    } else {
        limit
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_hypergraph(path: &str) -> Result<Arc<Hypergraph>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    Ok(Arc::new(Hypergraph::parse(&text).map_err(usage)?))
}

fn read_graph(path: &str) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    Graph::parse(&text).map_err(usage)
}

/// Writes one line to stdout; a closed pipe ends the process quietly.
fn emit_line(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn print_json<T: Serialize>(value: &T) {
    emit_line(&serde_json::to_string(value).expect("serializable"));
}

fn emit_hypergraph(h: &Hypergraph, json: bool) {
    if json {
        emit_line(&h.to_json());
    } else {
        emit_line(h.serialize().trim_end_matches('\n'));
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { file } => {
            let h = read_hypergraph(&file)?;
            print_json(&classify(&h));
            Ok(())
        }
        Command::Count(args) => run_count(args),
        Command::Sample {
            file,
            steps,
            seed,
            trace,
        } => {
            let h = read_hypergraph(&file)?;
            let result = hypermatch::chain::run(
                &h,
                &ChainParams {
                    steps,
                    seed,
                    record_trace: trace,
                },
            );
            if let Some(tr) = &result.trace {
                for s in tr {
                    let edge = s
                        .chosen_edge
                        .map(|e| e.to_string())
                        .unwrap_or_else(|| "-".into());
                    emit_line(&format!("{} {} {}", s.step, s.kind.as_str(), edge));
                }
            }
            print_json(&result.final_state.members().to_vec());
            Ok(())
        }
        Command::Generate { family } => run_generate(family),
        Command::Paths { action } => run_paths(action),
        Command::Conductance { file, max_omega } => {
            let h = read_hypergraph(&file)?;
            let tg = TransitionGraph::build_with_limit(&h, lift(max_omega))?;
            let c = conductance_exact(&tg, lift(max_omega))?;
            #[derive(Serialize)]
            struct Out {
                omega: usize,
                phi: f64,
                phi_exact: String,
                min_cut: Vec<usize>,
            }
            print_json(&Out {
                omega: tg.state_count(),
                phi: c.phi_f64,
                phi_exact: c.phi.to_string(),
                min_cut: c.min_cut,
            });
            Ok(())
        }
    }
}

fn run_count(args: CountArgs) -> Result<(), CliError> {
    let h = read_hypergraph(&args.file)?;
    if args.exact {
        let count = count_matchings_with_limit(&h, lift(args.max_edges))?;
        #[derive(Serialize)]
        struct Out {
            count: String,
            method: &'static str,
        }
        print_json(&Out {
            count: count.to_string(),
            method: "exact",
        });
        return Ok(());
    }
    if !args.fpras {
        return Err(CliError::Usage(
            "choose a method: --exact or --fpras".into(),
        ));
    }
    let config = EstimatorConfig {
        mode: args.mode,
        seed: args.seed,
        steps_override: args.steps,
        samples_override: args.samples,
    };
    let result = count_fpras(
        &h,
        args.eps.expect("clap enforces --eps"),
        args.delta.expect("clap enforces --delta"),
        &config,
    )?;
    print_json(&result);
    Ok(())
}

fn run_generate(family: Family) -> Result<(), CliError> {
    match family {
        Family::Subdivided {
            input,
            triples_only,
            json,
        } => {
            let h3 = read_hypergraph(&input)?;
            let h = generators::subdivide(&h3, triples_only).map_err(usage)?;
            emit_hypergraph(&h, json);
        }
        Family::Blowup {
            sizes,
            k,
            strict,
            json,
        } => {
            let (h, skipped) = generators::rooted_blowup(&sizes, k, strict).map_err(usage)?;
            for (i, j) in skipped {
                eprintln!("note: parts {i} and {j} cannot host a {k}-edge; skipped");
            }
            emit_hypergraph(&h, json);
        }
        Family::FromBipartite { input, k, json } => {
            let g = read_graph(&input)?;
            let (h, warnings) = generators::from_bipartite(&g, k).map_err(usage)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            emit_hypergraph(&h, json);
        }
        Family::Dual { input, json } => {
            let g = read_graph(&input)?;
            let d = g.degrees().first().copied().unwrap_or(0);
            let h = generators::dual(&g, d).map_err(usage)?;
            emit_hypergraph(&h, json);
        }
        Family::Random {
            n,
            m,
            k,
            seed,
            json,
        } => {
            let mut rng = hypermatch::rng::corpus_rng(seed, 0);
            let h = generators::random_kgraph(n, m, k, &mut rng).map_err(usage)?;
            emit_hypergraph(&h, json);
        }
    }
    Ok(())
}

fn run_paths(action: PathsAction) -> Result<(), CliError> {
    match action {
        PathsAction::Verify {
            file,
            general,
            max_omega,
        } => {
            let h = read_hypergraph(&file)?;
            let opts = VerifyOptions {
                mode: if general {
                    PathMode::General
                } else {
                    PathMode::SZero
                },
                max_states: lift(max_omega),
            };
            let report = verify_injectivity(&h, &opts).map_err(|e| match e {
                hypermatch::paths::VerifyError::Transition(t) => CliError::from(t),
                other => CliError::Usage(other.to_string()),
            })?;
            print_json(&report);
            // A cut-bound report rides along when the instance is tiny.
            if report.omega <= DEFAULT_MAX_CONDUCTANCE_STATES {
                if let Ok(cuts) = cut_bound_check(&h, DEFAULT_MAX_CONDUCTANCE_STATES) {
                    print_json(&cuts);
                }
            }
            Ok(())
        }
        PathsAction::Show {
            file,
            initial,
            r#final,
            general,
        } => {
            let h = read_hypergraph(&file)?;
            let i = read_matching(&h, &initial)?;
            let f = read_matching(&h, &r#final)?;
            let mode = if general {
                PathMode::General
            } else {
                PathMode::SZero
            };
            let path = canonical_path(&i, &f, mode).map_err(usage)?;
            #[derive(Serialize)]
            struct Out {
                states: Vec<Vec<usize>>,
                moves: Vec<hypermatch::paths::PathMove>,
                venues: Vec<usize>,
            }
            print_json(&Out {
                states: path.states.iter().map(|s| s.members().to_vec()).collect(),
                moves: path.moves.clone(),
                venues: path.venues.clone(),
            });
            Ok(())
        }
    }
}

fn read_matching(h: &Arc<Hypergraph>, path: &str) -> Result<Matching, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let members: Vec<usize> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{path}: expected a JSON array of edge indices: {e}")))?;
    Matching::from_members(h.clone(), members).map_err(usage)
}
