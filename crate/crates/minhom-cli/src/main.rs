//! Command-line front end: classify targets, solve instances, run the
//! exhaustive oracle, generate hardness gadgets, emit interval
//! representations and bipartite doubles, and self-test the build.
//!
//! Results go to standard output as JSON; diagnostics go to standard error.
//! Exit codes: 0 success/optimal, 1 no homomorphism, 2 NP-complete target,
//! 3 input error, 4 internal self-check failure.

mod selftest;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minhom::graph::Graph;
use minhom::instance::{Instance, InstanceError};
use minhom::intervals::ordering_to_intervals;
use minhom::oracle::{brute_force_mch, OracleError};
use minhom::recognition::{classify, Classification};
use minhom::reductions::{gadget_build, GadgetInstance, GadgetKind, ThreePartiteGraph};
use minhom::solver::{solve, SolveResult, SolverError};

#[derive(Parser)]
#[command(
    name = "minhom",
    version,
    about = "Exact minimum-cost graph homomorphism solver and dichotomy classifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a target graph: Min-Max ordering certificates or an
    /// NP-completeness certificate.
    Classify { target: PathBuf },
    /// Solve an instance exactly via minimum cuts (refuses NP-complete
    /// targets with exit code 2).
    Solve { instance: PathBuf },
    /// Solve an instance by exhaustive search; accepts any target at desk
    /// scale.
    Oracle { instance: PathBuf },
    /// Generate a hardness-gadget instance from a 3-partite graph file:
    /// {"graph": {...}, "parts": [[...], [...], [...]]}.
    Gadget {
        #[arg(long, value_enum)]
        kind: KindArg,
        graph: PathBuf,
        /// Write <OUT>.instance.json and <OUT>.sidecar.json instead of
        /// printing the combined object.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inclusion-free interval representations of a polynomial target, one
    /// per component (exit code 2 with the certificate when the target is
    /// NP-complete).
    Intervals { target: PathBuf },
    /// Bipartite double of a reflexive target.
    Double { target: PathBuf },
    /// Run the embedded verification suite.
    Selftest {
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Claw,
    Net,
    Tent,
}

impl From<KindArg> for GadgetKind {
    fn from(k: KindArg) -> GadgetKind {
        match k {
            KindArg::Claw => GadgetKind::Claw,
            KindArg::Net => GadgetKind::Net,
            KindArg::Tent => GadgetKind::Tent,
        }
    }
}

enum Failure {
    /// Bad input: exit code 3.
    Input(String),
    /// Broken build invariant: exit code 4.
    Internal(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Input(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
            Failure::Internal(msg) => {
                eprintln!("internal self-check failure: {msg}");
                ExitCode::from(4)
            }
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Failure {
        match e {
            SolverError::SelfCheck(_)
            | SolverError::NonHomomorphismExtracted(_)
            | SolverError::InvalidCut(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    // Library self-check assertions panic; surface them as exit code 4
    // rather than a raw abort.
    let outcome = catch_unwind(AssertUnwindSafe(|| run(cli.command, pretty)));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(failure)) => failure.report(),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Failure::Internal(msg).report()
        }
    }
}

fn run(command: Command, pretty: bool) -> Result<ExitCode, Failure> {
    match command {
        Command::Classify { target } => {
            let h = read_graph(&target)?;
            let classification = classify(&h)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            emit(&classification, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { instance } => {
            let inst = Instance::from_path(&instance)?;
            let result = solve(&inst.source, &inst.costs, &inst.target)?;
            emit(&result, pretty);
            Ok(result_code(&result))
        }
        Command::Oracle { instance } => {
            let inst = Instance::from_path(&instance)?;
            let result = brute_force_mch(&inst.source, &inst.costs, &inst.target)?;
            emit(&result, pretty);
            Ok(result_code(&result))
        }
        Command::Gadget { kind, graph, out } => {
            let g3 = read_three_partite(&graph)?;
            let inst = gadget_build(&g3, kind.into())
                .map_err(|e| Failure::Input(e.to_string()))?;
            let (instance_json, sidecar) = gadget_json(&inst)?;
            match out {
                None => {
                    let combined =
                        serde_json::json!({ "instance": instance_json, "sidecar": sidecar });
                    emit(&combined, pretty);
                }
                Some(prefix) => {
                    let instance_path = with_suffix(&prefix, "instance.json");
                    let sidecar_path = with_suffix(&prefix, "sidecar.json");
                    write_json(&instance_path, &instance_json, pretty)?;
                    write_json(&sidecar_path, &sidecar, pretty)?;
                    emit(
                        &serde_json::json!({
                            "written": {
                                "instance": instance_path,
                                "sidecar": sidecar_path,
                            }
                        }),
                        pretty,
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Intervals { target } => {
            let h = read_graph(&target)?;
            let classification = classify(&h)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            match classification {
                Classification::Npc { .. } => {
                    emit(&classification, pretty);
                    Ok(ExitCode::from(2))
                }
                Classification::Poly { orderings } => {
                    let mut components = Vec::new();
                    for (comp, ord) in h.connected_components().iter().zip(&orderings) {
                        let rep = ordering_to_intervals(comp, ord)
                            .map_err(|e| Failure::Internal(e.to_string()))?;
                        components.push(rep);
                    }
                    emit(
                        &serde_json::json!({ "verdict": "poly", "components": components }),
                        pretty,
                    );
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Double { target } => {
            let h = read_graph(&target)?;
            let double = h
                .bipartite_double()
                .map_err(|e| Failure::Input(e.to_string()))?;
            emit(&double, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed } => match selftest::run(seed) {
            Ok(summary) => {
                emit(&summary, pretty);
                Ok(ExitCode::SUCCESS)
            }
            Err(detail) => Err(Failure::Internal(detail)),
        },
    }
}

fn result_code(result: &SolveResult) -> ExitCode {
    match result {
        SolveResult::Optimal { .. } => ExitCode::SUCCESS,
        SolveResult::NoHomomorphism => ExitCode::from(1),
        SolveResult::NpcTarget { .. } => ExitCode::from(2),
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_three_partite(path: &Path) -> Result<ThreePartiteGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let graph: Graph = serde_json::from_value(
        value
            .get("graph")
            .cloned()
            .ok_or_else(|| Failure::Input("missing `graph`".into()))?,
    )
    .map_err(|e| Failure::Input(format!("`graph`: {e}")))?;
    let parts: [Vec<String>; 3] = serde_json::from_value(
        value
            .get("parts")
            .cloned()
            .ok_or_else(|| Failure::Input("missing `parts` (three vertex lists)".into()))?,
    )
    .map_err(|e| Failure::Input(format!("`parts`: {e}")))?;
    ThreePartiteGraph::new(graph, parts).map_err(|e| Failure::Input(e.to_string()))
}

fn gadget_json(inst: &GadgetInstance) -> Result<(serde_json::Value, serde_json::Value), Failure> {
    let instance = Instance::new(inst.source.clone(), inst.target.clone(), inst.costs.clone())
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let sidecar = serde_json::json!({
        "offset": inst.offset,
        "kind": inst.kind,
        "alpha_formula": "offset - mch",
    });
    Ok((instance.to_json_value(), sidecar))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    prefix.with_file_name(name)
}

fn write_json(path: &Path, value: &serde_json::Value, pretty: bool) -> Result<(), Failure> {
    let text = render(value, pretty);
    std::fs::write(path, text + "\n")
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn render<T: serde::Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    }
}

fn emit<T: serde::Serialize>(value: &T, pretty: bool) {
    println!("{}", render(value, pretty));
}
