//! Command-line surface of `strongcol`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! exit code together with everything that would be printed. Exit codes: 0
//! success (with a certificate where one applies), 2 certified impossible,
//! 3 budget exhausted or shortfall, 64 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use strongcol::fractional::{solve_fractional_weighting_with, FractionalOptions, SolveMode};
use strongcol::it::DEFAULT_NODE_BUDGET;
use strongcol::nibble::{partial_strong_colouring_best_effort, sample_cover, CoverReport};
use strongcol::oracle::CptMode;
use strongcol::{
    check_all_partitions_cpt, check_haxell_condition, find_independent_transversal, find_perfect_kk_tiling, generate,
    parse_graph, parse_partition, strong_chromatic_number, strong_colouring, write_graph, write_partition, Artifact,
    Certificate, Error, Graph, InstanceSpec, NibbleParams, NodeBudget, OracleBudget, Partition, PipelineConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IMPOSSIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "strongcol", version, about = "Independent transversals and strong colourings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Graph in DIMACS edge format.
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Partition file, one `c <id> <vertices...>` line per class.
    #[arg(long, global = true, value_name = "FILE")]
    partition: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    delta: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    fallback: Switch,
    /// Search-node budget.
    #[arg(long, global = true, env = "STRONGCOL_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Haxell condition for the partition.
    CheckHaxell,
    /// Find one independent transversal.
    FindIt,
    /// Solve for a fractional weighting of the independent transversals.
    Fractional {
        /// Floating-point simplex instead of exact rationals.
        #[arg(long)]
        float: bool,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Sample a random cover and report its five properties.
    CoverStats {
        #[arg(long)]
        cover_cap: Option<usize>,
        #[arg(long, default_value_t = 20)]
        resamples: usize,
    },
    /// Find a (1 - delta) r-partial strong colouring.
    PartialColour,
    /// Partition the vertices into independent transversals.
    StrongColour,
    /// Strong chromatic number by exhaustive search (tiny graphs).
    ExactSchrom {
        #[arg(long, default_value_t = 2_000_000)]
        max_partitions: u64,
    },
    /// Cycles-plus-triangles check on C_{3m}.
    Cpt {
        #[arg(long)]
        triangles: usize,
        /// Random triple partitions to test; all partitions when omitted.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Perfect K_k-tiling of a k-partite graph.
    Tiling,
    /// Generate an instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        class_size: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        min_degree: Option<usize>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        triangles: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out_graph: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out_partition: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cycle,
    Triangles,
    Bounded,
    Kpartite,
    Matching,
    Empty,
}

/// Outcome of a subcommand: exit code, JSON body and text rendering.
struct Outcome {
    code: i32,
    body: Value,
    text: String,
}

impl Outcome {
    fn new(code: i32, body: Value, text: impl Into<String>) -> Self {
        Outcome {
            code,
            body,
            text: text.into(),
        }
    }
}

fn status(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_IMPOSSIBLE => "impossible",
        EXIT_BUDGET => "budget",
        _ => "error",
    }
}

/// Runs one command line (including the program name) and returns the exit
/// code and the output text.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return (code, e.render().to_string());
        }
    };
    let name = command_name(&cli.command);
    let json_out = cli.global.json;
    match execute(&cli) {
        Ok(out) => {
            if json_out {
                let mut body = json!({ "schema": SCHEMA, "command": name, "status": status(out.code) });
                if let (Value::Object(dst), Value::Object(src)) = (&mut body, out.body) {
                    dst.extend(src);
                }
                (out.code, pretty(&body))
            } else {
                (out.code, out.text)
            }
        }
        Err(msg) => {
            if json_out {
                let body = json!({ "schema": SCHEMA, "command": name, "status": "error", "error": msg });
                (EXIT_USAGE, pretty(&body))
            } else {
                (EXIT_USAGE, format!("error: {msg}\n"))
            }
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckHaxell => "check-haxell",
        Command::FindIt => "find-it",
        Command::Fractional { .. } => "fractional",
        Command::CoverStats { .. } => "cover-stats",
        Command::PartialColour => "partial-colour",
        Command::StrongColour => "strong-colour",
        Command::ExactSchrom { .. } => "exact-schrom",
        Command::Cpt { .. } => "cpt",
        Command::Tiling => "tiling",
        Command::Generate { .. } => "generate",
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_graph(g: &Global) -> Result<Graph, String> {
    let path = g.graph.as_ref().ok_or("--graph is required")?;
    parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(g: &Global) -> Result<(Graph, Partition), String> {
    let graph = load_graph(g)?;
    let path = g.partition.as_ref().ok_or("--partition is required")?;
    let p = parse_partition(&read(path)?, graph.n()).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((graph, p))
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn fmt_list(vs: &[usize]) -> String {
    one_based(vs).iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn artifact_json(a: &Artifact) -> Value {
    serde_json::to_value(a).expect("artifacts serialize")
}

fn execute(cli: &Cli) -> Result<Outcome, String> {
    let g = &cli.global;
    match &cli.command {
        Command::CheckHaxell => {
            let (graph, p) = load_instance(g)?;
            let report = check_haxell_condition(&graph, p.classes()).map_err(|e| e.to_string())?;
            let text = match &report.witness_violation {
                None => format!("Haxell condition holds (max degree {})\n", report.max_degree),
                Some(v) => format!(
                    "Haxell condition fails: classes {} have {} vertices, need more than {}\n",
                    fmt_list(&v.classes),
                    v.union_size,
                    v.bound
                ),
            };
            let witness = report.witness_violation.as_ref().map(|v| {
                json!({ "classes": one_based(&v.classes), "union_size": v.union_size, "bound": v.bound })
            });
            let body = json!({
                "satisfied": report.satisfied,
                "max_degree": report.max_degree,
                "witness_violation": witness,
            });
            Ok(Outcome::new(EXIT_OK, body, text))
        }
        Command::FindIt => {
            let (graph, p) = load_instance(g)?;
            match find_independent_transversal(&graph, p.classes(), &mut NodeBudget::new(g.budget)) {
                Ok(Some(t)) => {
                    let a = Artifact::new(&graph, &p, Certificate::transversal(&t));
                    let text = format!("independent transversal: {}\n", fmt_list(t.vertices()));
                    Ok(Outcome::new(EXIT_OK, json!({ "artifact": artifact_json(&a) }), text))
                }
                Ok(None) => Ok(Outcome::new(EXIT_IMPOSSIBLE, json!({}), "no independent transversal exists\n")),
                Err(Error::Timeout(n)) => Ok(budget_outcome(n)),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Fractional { float, cap } => {
            let (graph, p) = load_instance(g)?;
            let opts = FractionalOptions {
                mode: if *float { SolveMode::Float } else { SolveMode::Exact },
                cap: *cap,
            };
            match solve_fractional_weighting_with(&graph, &p, opts) {
                Ok(w) => {
                    let a = Artifact::new(&graph, &p, Certificate::weighting(&w));
                    let mut text = String::new();
                    for e in w.to_entries() {
                        text.push_str(&format!(
                            "{} : {}\n",
                            e.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                            match &e.weight {
                                Value::String(s) => s.clone(),
                                other => other.to_string(),
                            }
                        ));
                    }
                    Ok(Outcome::new(EXIT_OK, json!({ "artifact": artifact_json(&a) }), text))
                }
                Err(Error::Infeasible(why)) => Ok(Outcome::new(
                    EXIT_IMPOSSIBLE,
                    json!({ "reason": why }),
                    format!("no fractional weighting: {why}\n"),
                )),
                Err(Error::CapExceeded(n)) => Ok(budget_outcome(n)),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::CoverStats { cover_cap, resamples } => {
            let (graph, p) = load_instance(g)?;
            let params = NibbleParams {
                cover_cap: *cover_cap,
                max_resamples: *resamples,
                seed: g.seed,
                ..Default::default()
            };
            params.validate().map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let (code, sample) = match sample_cover(&graph, &p, &params, &mut rng) {
                Ok(s) => (EXIT_OK, s),
                Err(Error::CoverBudgetExhausted(best)) => (EXIT_BUDGET, *best),
                Err(e) => return Err(e.to_string()),
            };
            let body = json!({
                "seed": g.seed,
                "m": sample.cover.m,
                "sets": sample.cover.len(),
                "attempts": sample.attempts,
                "report": sample.report,
            });
            Ok(Outcome::new(code, body, cover_text(&sample.report, sample.cover.m, sample.cover.len(), sample.attempts)))
        }
        Command::PartialColour => {
            let (graph, p) = load_instance(g)?;
            let params = NibbleParams {
                seed: g.seed,
                fallback: g.fallback == Switch::On,
                node_budget: g.budget,
                ..Default::default()
            };
            let out = partial_strong_colouring_best_effort(&graph, &p, g.delta, &params).map_err(|e| e.to_string())?;
            let code = if out.transversals.len() >= out.target { EXIT_OK } else { EXIT_BUDGET };
            let a = Artifact::new(&graph, &p, Certificate::partial(&out.transversals));
            let body = json!({
                "target": out.target,
                "found": out.transversals.len(),
                "from_matching": out.from_matching,
                "from_greedy": out.from_fallback,
                "cover_report": out.cover_report,
                "hypergraph": out.hypergraph,
                "skipped_sets": out.skipped_sets,
                "artifact": artifact_json(&a),
            });
            let text = format!(
                "{} of {} required disjoint independent transversals ({} from the matching, {} greedy)\n",
                out.transversals.len(),
                out.target,
                out.from_matching,
                out.from_fallback
            );
            Ok(Outcome::new(code, body, text))
        }
        Command::StrongColour => {
            let (graph, p) = load_instance(g)?;
            let config = pipeline_config(g);
            match strong_colouring(&graph, &p, g.epsilon, &config) {
                Ok(out) => {
                    let a = Artifact::new(&graph, &p, Certificate::colouring(&out.transversals));
                    let mut text = String::new();
                    for (i, t) in out.transversals.iter().enumerate() {
                        text.push_str(&format!("colour {}: {}\n", i + 1, fmt_list(t.vertices())));
                    }
                    Ok(Outcome::new(
                        EXIT_OK,
                        json!({ "trace": out.trace, "artifact": artifact_json(&a) }),
                        text,
                    ))
                }
                Err(Error::Unsolvable) => Ok(Outcome::new(
                    EXIT_IMPOSSIBLE,
                    json!({}),
                    "no partition into independent transversals exists\n",
                )),
                Err(Error::PipelineFailure(why)) => Ok(Outcome::new(
                    EXIT_BUDGET,
                    json!({ "reason": why }),
                    format!("pipeline failed: {why}\n"),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::ExactSchrom { max_partitions } => {
            let graph = load_graph(g)?;
            let budget = OracleBudget {
                max_partitions: *max_partitions,
                node_budget: g.budget,
            };
            match strong_chromatic_number(&graph, budget) {
                Ok(s) => Ok(Outcome::new(
                    EXIT_OK,
                    json!({ "strong_chromatic_number": s }),
                    format!("strong chromatic number: {s}\n"),
                )),
                Err(Error::BudgetExceeded(n)) => Ok(budget_outcome(n)),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Cpt { triangles, samples } => {
            let mode = match samples {
                None => CptMode::Exhaustive,
                Some(count) => CptMode::Sampled {
                    count: *count,
                    seed: g.seed,
                },
            };
            let budget = OracleBudget {
                node_budget: g.budget,
                ..Default::default()
            };
            match check_all_partitions_cpt(*triangles, mode, budget) {
                Ok(report) => {
                    let code = if report.holds { EXIT_OK } else { EXIT_IMPOSSIBLE };
                    let text = match &report.counterexample {
                        None => format!(
                            "all {} triple partitions of C_{} split into 3 independent transversals\n",
                            report.partitions_checked,
                            3 * triangles
                        ),
                        Some(c) => format!(
                            "counterexample: {}\n",
                            c.iter().map(|b| fmt_list(b)).collect::<Vec<_>>().join(" | ")
                        ),
                    };
                    Ok(Outcome::new(code, json!({ "report": report }), text))
                }
                Err(Error::BudgetExceeded(n)) => Ok(budget_outcome(n)),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Tiling => {
            let (graph, p) = load_instance(g)?;
            let config = pipeline_config(g);
            match find_perfect_kk_tiling(&graph, &p, g.epsilon, &config) {
                Ok(t) => {
                    let a = Artifact::new(&graph, &p, Certificate::tiling(&t.cliques));
                    let text: String = t.cliques.iter().map(|c| format!("clique: {}\n", fmt_list(c))).collect();
                    Ok(Outcome::new(EXIT_OK, json!({ "trace": t.trace, "artifact": artifact_json(&a) }), text))
                }
                Err(Error::Unsolvable) => Ok(Outcome::new(EXIT_IMPOSSIBLE, json!({}), "no perfect tiling exists\n")),
                Err(Error::PipelineFailure(why)) => Ok(Outcome::new(
                    EXIT_BUDGET,
                    json!({ "reason": why }),
                    format!("pipeline failed: {why}\n"),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Generate {
            kind,
            n,
            k,
            class_size,
            max_degree,
            min_degree,
            length,
            triangles,
            out_graph,
            out_partition,
        } => {
            let need = |v: &Option<usize>, flag: &str| v.ok_or_else(|| format!("--{flag} is required for this kind"));
            let spec = match kind {
                Kind::Cycle => InstanceSpec::Cycle {
                    length: need(length, "length")?,
                    class_size: need(class_size, "class-size")?,
                },
                Kind::Triangles => InstanceSpec::CyclesPlusTriangles {
                    triangles: need(triangles, "triangles")?,
                },
                Kind::Bounded => InstanceSpec::RandomBoundedDegree {
                    n: need(n, "n")?,
                    max_degree: need(max_degree, "max-degree")?,
                    k: need(k, "k")?,
                },
                Kind::Kpartite => InstanceSpec::Kpartite {
                    k: need(k, "k")?,
                    class_size: need(class_size, "class-size")?,
                    min_degree: need(min_degree, "min-degree")?,
                },
                Kind::Matching => InstanceSpec::Matching {
                    k: need(k, "k")?,
                    class_size: need(class_size, "class-size")?,
                },
                Kind::Empty => InstanceSpec::Empty {
                    k: need(k, "k")?,
                    class_size: need(class_size, "class-size")?,
                },
            };
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let (graph, p) = generate(&spec, &mut rng).map_err(|e| e.to_string())?;
            let (gtext, ptext) = (write_graph(&graph), write_partition(&p));
            for (path, text) in [(out_graph, &gtext), (out_partition, &ptext)] {
                if let Some(path) = path {
                    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                }
            }
            let body = json!({
                "spec": spec,
                "seed": g.seed,
                "max_degree": graph.max_degree(),
                "min_degree": graph.min_degree(),
                "graph": gtext,
                "partition": ptext,
            });
            let text = if out_graph.is_some() || out_partition.is_some() {
                format!(
                    "generated {} vertices, {} edges, {} classes of size {}\n",
                    graph.n(),
                    graph.edge_count(),
                    p.k(),
                    p.r()
                )
            } else {
                format!("{gtext}{ptext}")
            };
            Ok(Outcome::new(EXIT_OK, body, text))
        }
    }
}

fn budget_outcome(n: u64) -> Outcome {
    Outcome::new(EXIT_BUDGET, json!({ "budget": n }), format!("budget of {n} exhausted\n"))
}

fn pipeline_config(g: &Global) -> PipelineConfig {
    PipelineConfig {
        seed: g.seed,
        fallback: g.fallback == Switch::On,
        exhaustive_budget: g.budget,
        ..Default::default()
    }
}

fn cover_text(r: &CoverReport, m: usize, sets: usize, attempts: usize) -> String {
    let flag = |ok: bool| if ok { "pass" } else { "FAIL" };
    format!(
        "cover: {sets} sets, m = {m}, {attempts} attempt(s)\n\
         balanced          {}  ({} unbalanced sets)\n\
         membership        {}  (range {}..{}, window {:.3} ± {:.3}, {} outliers)\n\
         pairs <= 2        {}  (max {})\n\
         triples <= 1      {}  (max {})\n\
         m >= 2 Δ(G[R])    {}  (max induced degree {})\n",
        flag(r.balanced_ok),
        r.unbalanced_sets,
        flag(r.membership_ok),
        r.membership_min,
        r.membership_max,
        r.membership_center,
        r.membership_tolerance,
        r.membership_outliers,
        flag(r.pairs_ok),
        r.max_pair_multiplicity,
        flag(r.triples_ok),
        r.max_triple_multiplicity,
        flag(r.induced_degree_ok),
        r.max_induced_degree,
    )
}
