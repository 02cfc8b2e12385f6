//! Command-line front end: every pipeline behind reproducible seeds and
//! machine-readable output. Exit codes: 0 = property holds / witness found,
//! 1 = property fails / not found, 2 = usage or input error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rigidity::conjecture::{
    check_condition_all_edges, conjecture_scan, search_partition_exhaustive, SearchOutcome,
    DEFAULT_BUDGET,
};
use rigidity::graph::{double_banana, parse_graph, serialize_graph, Edge, EdgePartition, Graph};
use rigidity::partition::{partition_for_edge, verify_partition, PartitionError};
use rigidity::rigidity::{
    is_minimally_rigid, is_rigid, MinimalityVerdict, RigidityVerdict, DEFAULT_COORD_BOUND,
    DEFAULT_TRIALS,
};
use rigidity::sparsity::{check_sparsity, Sparsity, SparsityParams};

#[derive(Parser)]
#[command(name = "rigidity", version, about = "Edge tripartitions of minimally 3-rigid graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Named fixture: double-banana, k4, k5.
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// Path to a .grf edge-list file.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph, String> {
        match (&self.fixture, &self.input) {
            (Some(name), None) => match name.as_str() {
                "double-banana" => Ok(double_banana()),
                "k4" => Ok(Graph::complete(4)),
                "k5" => Ok(Graph::complete(5)),
                other => Err(format!(
                    "unknown fixture '{other}' (expected double-banana, k4 or k5)"
                )),
            },
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                parse_graph(&text).map_err(|e| e.to_string())
            }
            _ => Err("exactly one of --fixture or --input is required".into()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for all randomized steps; falls back to $RIGIDITY_SEED, then 0.
    #[arg(long, env = "RIGIDITY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (k,l)-sparsity/tightness with the pebble game.
    Sparsity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        ell: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide d-dimensional (minimal) rigidity from exact rank computations.
    Rigid {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short, long, default_value_t = 3)]
        dimension: usize,
        /// Also require the edge count to be exactly d|V| - d(d+1)/2.
        #[arg(long)]
        minimal: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Construct the edge tripartition for one edge of a minimally 3-rigid graph.
    Partition {
        #[command(flatten)]
        graph: GraphArgs,
        /// Edge as "u,v".
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a partition JSON file against the three conditions.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// JSON file as produced by `partition --format json`.
        #[arg(long)]
        partition: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exhaustively search for a tripartition without the construction.
    Search {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        edge: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce the full double-banana counter-example pipeline.
    Banana {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample (3,6)-tight graphs and check the per-edge partition condition.
    Scan {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Report wall-clock per-edge timings instead of the byte-stable 0.
        #[arg(long)]
        measure_time: bool,
        /// Directory for counter-example candidate .grf files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Add a vertex adjacent to every existing vertex; print the result.
    Cone {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

fn parse_edge(text: &str) -> Result<Edge, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let [u, v] = parts.as_slice() else {
        return Err(format!("edge must be 'u,v', got '{text}'"));
    };
    let u: usize = u.trim().parse().map_err(|_| format!("bad vertex '{u}'"))?;
    let v: usize = v.trim().parse().map_err(|_| format!("bad vertex '{v}'"))?;
    if u == v {
        return Err("edge endpoints must differ".into());
    }
    Ok(Edge::new(u, v))
}

fn edge_json(e: &Edge) -> Value {
    json!([e.u.0, e.v.0])
}

fn edges_json<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Value {
    Value::Array(edges.into_iter().map(edge_json).collect())
}

fn partition_json(e: Edge, part: &EdgePartition, seed: u64) -> Value {
    json!({
        "edge": edge_json(&e),
        "s1": edges_json(&part.s1),
        "s2": edges_json(&part.s2),
        "s3": edges_json(&part.s3),
        "seed": seed,
    })
}

fn json_edge_list(value: &Value, key: &str) -> Result<BTreeSet<Edge>, String> {
    let arr = value
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("partition file is missing the '{key}' list"))?;
    arr.iter()
        .map(|pair| {
            let nums = pair.as_array().filter(|a| a.len() == 2);
            let uv = nums.and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)));
            match uv {
                Some((u, v)) if u != v => Ok(Edge::new(u as usize, v as usize)),
                _ => Err(format!("bad edge entry {pair} in '{key}'")),
            }
        })
        .collect()
}

enum Outcome {
    Holds,
    Fails,
    InputError(String),
}

impl Outcome {
    fn code(self) -> ExitCode {
        match self {
            Outcome::Holds => ExitCode::SUCCESS,
            Outcome::Fails => ExitCode::from(1),
            Outcome::InputError(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn run_sparsity(g: &Graph, k: usize, ell: usize, format: Format) -> Outcome {
    if k == 0 || ell > 2 * k {
        return Outcome::InputError(format!("(k,l)=({k},{ell}) is outside 1 <= k, 0 <= l <= 2k"));
    }
    let verdict = check_sparsity(g, SparsityParams::new(k, ell));
    let (name, witness) = match &verdict {
        Sparsity::Tight => ("tight", None),
        Sparsity::Sparse => ("sparse", None),
        Sparsity::NotSparse(w) => ("not-sparse", Some(w.clone())),
    };
    match format {
        Format::Text => match &witness {
            None => println!("{}", name.to_uppercase()),
            Some(w) => {
                let list: Vec<String> = w.iter().map(|e| e.to_string()).collect();
                println!("NOT-SPARSE witness={}", list.join(","));
            }
        },
        Format::Json => {
            let value = json!({
                "k": k,
                "ell": ell,
                "verdict": name,
                "witness": witness.as_ref().map(|w| edges_json(w.iter())),
            });
            println!("{value}");
        }
    }
    if verdict.is_sparse() {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn run_rigid(g: &Graph, d: usize, minimal: bool, seed: u64, format: Format) -> Outcome {
    if d == 0 {
        return Outcome::InputError("dimension must be positive".into());
    }
    if minimal {
        let verdict = is_minimally_rigid(g, d, seed, DEFAULT_TRIALS, DEFAULT_COORD_BOUND);
        let ok = verdict.is_minimally_rigid();
        match format {
            Format::Text => match &verdict {
                MinimalityVerdict::MinimallyRigid(cert) => {
                    println!("MINIMALLY-RIGID rank={}/{}", cert.rank, cert.target)
                }
                MinimalityVerdict::RigidNotMinimal { edges, required } => {
                    println!("RIGID-NOT-MINIMAL edges={edges} required={required}")
                }
                MinimalityVerdict::NotRigid(report) => {
                    println!("NOT-RIGID rank={}/{}", report.best_rank, report.target)
                }
            },
            Format::Json => {
                let name = match &verdict {
                    MinimalityVerdict::MinimallyRigid(_) => "minimally-rigid",
                    MinimalityVerdict::RigidNotMinimal { .. } => "rigid-not-minimal",
                    MinimalityVerdict::NotRigid(_) => "not-rigid",
                };
                println!("{}", json!({"dimension": d, "verdict": name}));
            }
        }
        return if ok { Outcome::Holds } else { Outcome::Fails };
    }
    let verdict = is_rigid(g, d, seed, DEFAULT_TRIALS, DEFAULT_COORD_BOUND);
    match format {
        Format::Text => match &verdict {
            RigidityVerdict::Rigid(cert) => {
                println!("RIGID rank={}/{}", cert.rank, cert.target)
            }
            RigidityVerdict::ProbablyFlexible(report) => println!(
                "PROBABLY-FLEXIBLE rank={}/{}",
                report.best_rank, report.target
            ),
        },
        Format::Json => {
            let value = match &verdict {
                RigidityVerdict::Rigid(cert) => json!({
                    "dimension": d,
                    "verdict": "rigid",
                    "rank": cert.rank,
                    "target": cert.target,
                }),
                RigidityVerdict::ProbablyFlexible(report) => json!({
                    "dimension": d,
                    "verdict": "probably-flexible",
                    "rank": report.best_rank,
                    "target": report.target,
                    "failure_bound": format!("{:e}", report.failure_bound),
                }),
            };
            println!("{value}");
        }
    }
    if verdict.is_rigid() {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn partition_outcome(err: &PartitionError) -> Outcome {
    match err {
        PartitionError::EdgeNotPresent(_) | PartitionError::TooFewVertices => {
            Outcome::InputError(err.to_string())
        }
        _ => {
            eprintln!("{err}");
            Outcome::Fails
        }
    }
}

fn run_partition(g: &Graph, e: Edge, seed: u64, format: Format) -> Outcome {
    match partition_for_edge(g, e, seed) {
        Ok(part) => {
            match format {
                Format::Json => println!("{}", partition_json(e, &part, seed)),
                Format::Text => {
                    for (label, set) in [("S1", &part.s1), ("S2", &part.s2), ("S3", &part.s3)] {
                        let list: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                        println!("{label} ({}): {}", set.len(), list.join(","));
                    }
                }
            }
            Outcome::Holds
        }
        Err(err) => partition_outcome(&err),
    }
}

fn run_verify(g: &Graph, path: &PathBuf, format: Format) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::InputError(format!("cannot read {}: {e}", path.display())),
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Outcome::InputError(format!("bad JSON: {e}")),
    };
    // "edge" is a single pair; reuse the list parser on a wrapped array.
    let wrapped = json!({ "edge": [value.get("edge").cloned().unwrap_or(Value::Null)] });
    let edge = match json_edge_list(&wrapped, "edge") {
        Ok(set) if set.len() == 1 => *set.iter().next().unwrap(),
        _ => return Outcome::InputError("partition file needs \"edge\": [u,v]".into()),
    };
    let (s1, s2, s3) = match (
        json_edge_list(&value, "s1"),
        json_edge_list(&value, "s2"),
        json_edge_list(&value, "s3"),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Outcome::InputError(e),
    };
    let part = EdgePartition::new(s1, s2, s3);
    match verify_partition(g, edge, &part) {
        Ok(report) => {
            let ok = report.ok();
            match format {
                Format::Text => println!(
                    "{} sizes={} membership={} graph1={} graph2={} graph3={}",
                    if ok { "OK" } else { "FAIL" },
                    report.sizes_ok,
                    report.membership_ok,
                    report.graph1_ok,
                    report.graph2_ok,
                    report.graph3_ok
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "ok": ok,
                        "sizes_ok": report.sizes_ok,
                        "membership_ok": report.membership_ok,
                        "graph1_ok": report.graph1_ok,
                        "graph2_ok": report.graph2_ok,
                        "graph3_ok": report.graph3_ok,
                    })
                ),
            }
            if ok {
                Outcome::Holds
            } else {
                Outcome::Fails
            }
        }
        Err(err) => Outcome::InputError(err.to_string()),
    }
}

fn run_search(g: &Graph, e: Edge, budget: u64, seed: u64, format: Format) -> Outcome {
    if !g.has_edge(e) {
        return Outcome::InputError(format!("edge {e} is not in the graph"));
    }
    let result = search_partition_exhaustive(g, e, budget);
    let (status, witness) = match &result.outcome {
        SearchOutcome::Found(part) => ("found", Some(part.clone())),
        SearchOutcome::NotFound => ("not-found", None),
        SearchOutcome::BudgetExceeded(_) => ("budget-exceeded", None),
    };
    match format {
        Format::Text => match &witness {
            Some(part) => {
                println!("FOUND tried={}", result.tried);
                for (label, set) in [("S1", &part.s1), ("S2", &part.s2), ("S3", &part.s3)] {
                    let list: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                    println!("{label} ({}): {}", set.len(), list.join(","));
                }
            }
            None => println!("{} tried={}", status.to_uppercase(), result.tried),
        },
        Format::Json => {
            let value = json!({
                "edge": edge_json(&e),
                "status": status,
                "tried": result.tried,
                "witness": witness.as_ref().map(|p| partition_json(e, p, seed)),
            });
            println!("{value}");
        }
    }
    if matches!(result.outcome, SearchOutcome::Found(_)) {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn run_banana(budget: u64, seed: u64, format: Format) -> Outcome {
    let g = double_banana();
    let tight = check_sparsity(&g, SparsityParams::maxwell_3d()) == Sparsity::Tight;
    let mut ranks = Vec::new();
    for s in 0..3u64 {
        let verdict = is_rigid(&g, 3, seed + s, DEFAULT_TRIALS, DEFAULT_COORD_BOUND);
        let (rank, target) = match &verdict {
            RigidityVerdict::Rigid(c) => (c.rank, c.target),
            RigidityVerdict::ProbablyFlexible(r) => (r.best_rank, r.target),
        };
        ranks.push((seed + s, rank, target, verdict.is_rigid()));
    }
    let flexible_everywhere = ranks.iter().all(|&(_, rank, target, rigid)| {
        !rigid && rank == 3 * g.num_vertices() - 7 && target == 3 * g.num_vertices() - 6
    });
    let fixtures: Vec<(Edge, bool)> = rigidity::graph::banana_fixture_partitions()
        .into_iter()
        .map(|(e, part)| {
            let ok = verify_partition(&g, e, &part).map_or(false, |r| r.ok());
            (e, ok)
        })
        .collect();
    let fixtures_ok = fixtures.iter().all(|&(_, ok)| ok);
    let report = check_condition_all_edges(&g, budget, seed);
    let all_edges_ok = report.condition_holds_everywhere();
    let ok = tight && flexible_everywhere && fixtures_ok && all_edges_ok;
    match format {
        Format::Text => {
            println!("(3,6)-tight: {}", if tight { "TIGHT" } else { "NO" });
            for &(s, rank, target, rigid) in &ranks {
                println!(
                    "3-rigidity seed={s}: {} rank={rank}/{target}",
                    if rigid { "RIGID" } else { "PROBABLY-FLEXIBLE" }
                );
            }
            for (e, fixture_ok) in &fixtures {
                println!(
                    "fixture partition for {e}: {}",
                    if *fixture_ok { "OK" } else { "FAIL" }
                );
            }
            for c in &report.per_edge {
                println!(
                    "search {}: {} tried={}",
                    c.edge,
                    if c.exists { "FOUND" } else { "NOT-FOUND" },
                    c.partitions_tried
                );
            }
            println!("counter-example reproduced: {}", if ok { "YES" } else { "NO" });
        }
        Format::Json => {
            let value = json!({
                "tight_3_6": tight,
                "rigidity": ranks.iter().map(|&(s, rank, target, rigid)| json!({
                    "seed": s, "rank": rank, "target": target, "rigid": rigid,
                })).collect::<Vec<_>>(),
                "fixtures": fixtures.iter().map(|(e, ok)| json!({
                    "edge": edge_json(e), "ok": ok,
                })).collect::<Vec<_>>(),
                "search": report.per_edge.iter().map(|c| json!({
                    "edge": edge_json(&c.edge),
                    "exists": c.exists,
                    "tried": c.partitions_tried,
                })).collect::<Vec<_>>(),
                "reproduced": ok,
            });
            println!("{value}");
        }
    }
    if ok {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn run_scan(
    n_max: usize,
    samples: usize,
    budget: u64,
    measure_time: bool,
    out_dir: &PathBuf,
    seed: u64,
) -> Outcome {
    if n_max < 4 {
        return Outcome::InputError("n-max must be at least 4".into());
    }
    let summary = conjecture_scan(n_max, samples, seed, budget, measure_time);
    for r in &summary.records {
        let value = json!({
            "n": r.n,
            "edges": r.edges,
            "edge": edge_json(&r.edge),
            "exists": r.exists,
            "tried": r.tried,
            "elapsed_ms": r.elapsed_ms,
        });
        println!("{value}");
    }
    for (i, g) in summary.candidates.iter().enumerate() {
        let path = out_dir.join(format!("candidate-{seed}-{i}.grf"));
        if let Err(e) = std::fs::write(&path, serialize_graph(g)) {
            return Outcome::InputError(format!("cannot write {}: {e}", path.display()));
        }
        eprintln!("candidate written to {}", path.display());
    }
    if summary.candidates.is_empty() {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sparsity { graph, k, ell, common } => match graph.load() {
            Ok(g) => run_sparsity(&g, k, ell, common.format),
            Err(e) => Outcome::InputError(e),
        },
        Command::Rigid {
            graph,
            dimension,
            minimal,
            common,
        } => match graph.load() {
            Ok(g) => run_rigid(&g, dimension, minimal, common.seed, common.format),
            Err(e) => Outcome::InputError(e),
        },
        Command::Partition { graph, edge, common } => match (graph.load(), parse_edge(&edge)) {
            (Ok(g), Ok(e)) => run_partition(&g, e, common.seed, common.format),
            (Err(e), _) | (_, Err(e)) => Outcome::InputError(e),
        },
        Command::Verify {
            graph,
            partition,
            common,
        } => match graph.load() {
            Ok(g) => run_verify(&g, &partition, common.format),
            Err(e) => Outcome::InputError(e),
        },
        Command::Search {
            graph,
            edge,
            budget,
            common,
        } => match (graph.load(), parse_edge(&edge)) {
            (Ok(g), Ok(e)) => run_search(&g, e, budget, common.seed, common.format),
            (Err(e), _) | (_, Err(e)) => Outcome::InputError(e),
        },
        Command::Banana { budget, common } => run_banana(budget, common.seed, common.format),
        Command::Scan {
            n_max,
            samples,
            budget,
            measure_time,
            out_dir,
            common,
        } => run_scan(n_max, samples, budget, measure_time, &out_dir, common.seed),
        Command::Cone { graph } => match graph.load() {
            Ok(g) => {
                print!("{}", serialize_graph(&g.cone()));
                Outcome::Holds
            }
            Err(e) => Outcome::InputError(e),
        },
    };
    outcome.code()
}
