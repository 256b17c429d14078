//! Command-line front end. Every subcommand is a thin adapter over the
//! library; [`run`] returns the text and exit code instead of printing so the
//! adapters can be tested directly.
//!
//! Exit codes: 0 when the query was answered (negative answers included),
//! 1 for invalid input, 2 for an unsupported computation.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dilation::katsura_dilation;
use crate::error::Error;
use crate::fock::{build_fock, check_relations, katsura_embedding_check, relative_cp_dimension, verify_kernel_covariance};
use crate::graph::{Graph, VertexSet};
use crate::ideals::{is_hilbert_bimodule, regular_vertices, sources, Pair};
use crate::lattice::{enumerate_pairs, join, meet, min_covariance_to};

#[derive(Debug, Parser)]
#[command(name = "gauge-pairs", version, about = "Kernel-covariance pair lattices of graph correspondences")]
pub struct Cli {
    /// Output format where applicable.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a graph.
    Check { graph: String },
    /// Enumerate every kernel-covariance pair with its Hasse diagram.
    Lattice { graph: String },
    /// Greatest lower bound of the given pairs.
    Meet {
        graph: String,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
    /// Least upper bound of the given pairs.
    Join {
        graph: String,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
    /// Least pair with the given kernel above a pair, if any.
    Morphism {
        graph: String,
        #[arg(long)]
        from: String,
        /// JSON array of vertex ids, or a comma-separated list.
        #[arg(long = "to-kernel")]
        to_kernel: String,
    },
    /// Katsura dilation graph of a pair.
    Dilate {
        graph: String,
        #[arg(long)]
        pair: String,
    },
    /// Exact dimensions of the relative Cuntz-Pimsner algebra (acyclic graphs).
    Realize {
        graph: String,
        #[arg(long)]
        pair: String,
    },
    /// Fock representation matrices, or their relation checks with --verify.
    Fock {
        graph: String,
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    InvalidInput,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: String,
}

impl CommandResult {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::InvalidInput => 1,
            Status::Unsupported => 2,
        }
    }

    fn json(v: Value) -> Self {
        let mut payload = serde_json::to_string_pretty(&v).expect("json value serializes");
        payload.push('\n');
        Self { status: Status::Ok, payload }
    }

    fn failure(err: &Error) -> Self {
        let (status, label) = if err.is_unsupported() {
            (Status::Unsupported, "unsupported")
        } else {
            (Status::InvalidInput, "invalid-input")
        };
        let v = json!({ "status": label, "error": err.to_string() });
        Self { status, payload: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()) }
    }
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a path.
fn load(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_owned())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Malformed(format!("{arg}: {e}")))
    }
}

fn load_graph(arg: &str) -> Result<Graph, Error> {
    Graph::parse(&load(arg)?)
}

fn load_pair(g: &Graph, arg: &str) -> Result<Pair, Error> {
    Pair::parse(g, &load(arg)?)
}

fn parse_vertex_list(g: &Graph, arg: &str) -> Result<VertexSet, Error> {
    let trimmed = arg.trim();
    if trimmed.starts_with('[') {
        let names: Vec<String> =
            serde_json::from_str(trimmed).map_err(|e| Error::Malformed(e.to_string()))?;
        g.vertex_set(names)
    } else {
        g.vertex_set(trimmed.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }
}

/// Nodes and edges sorted by name so the output is diffable.
fn graph_dot(g: &Graph) -> String {
    let mut vertices: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
    vertices.sort_unstable();
    let mut edges: Vec<_> = g.edges().iter().collect();
    edges.sort_unstable_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::from("digraph dilation {\n");
    for v in vertices {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for e in edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.vertex_name(e.src),
            g.vertex_name(e.rng),
            e.id
        );
    }
    out.push_str("}\n");
    out
}

pub fn run(cli: &Cli) -> CommandResult {
    match execute(cli) {
        Ok(r) => r,
        Err(e) => CommandResult::failure(&e),
    }
}

fn execute(cli: &Cli) -> Result<CommandResult, Error> {
    match &cli.command {
        Command::Check { graph } => {
            let g = load_graph(graph)?;
            Ok(CommandResult::json(json!({
                "status": "ok",
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "acyclic": g.is_acyclic(),
                "sources": g.set_names(&sources(&g)),
                "regular": g.set_names(&regular_vertices(&g)),
                "hilbert_bimodule": is_hilbert_bimodule(&g),
            })))
        }
        Command::Lattice { graph } => {
            let g = load_graph(graph)?;
            let lattice = enumerate_pairs(&g)?;
            Ok(match cli.format {
                Format::Json => CommandResult::json(lattice.to_json_value(&g)),
                Format::Dot => CommandResult { status: Status::Ok, payload: lattice.to_dot(&g) },
            })
        }
        Command::Meet { graph, pairs } | Command::Join { graph, pairs } => {
            let g = load_graph(graph)?;
            let ps = pairs.iter().map(|p| load_pair(&g, p)).collect::<Result<Vec<_>, _>>()?;
            let result = match cli.command {
                Command::Meet { .. } => meet(&g, &ps)?,
                _ => join(&g, &ps)?,
            };
            Ok(CommandResult::json(result.to_json_value(&g)))
        }
        Command::Morphism { graph, from, to_kernel } => {
            let g = load_graph(graph)?;
            let p = load_pair(&g, from)?;
            let l = parse_vertex_list(&g, to_kernel)?;
            Ok(CommandResult::json(match min_covariance_to(&g, &p, &l)? {
                Some(q) => json!({ "exists": true, "pair": q.to_json_value(&g) }),
                None => json!({ "exists": false }),
            }))
        }
        Command::Dilate { graph, pair } => {
            let g = load_graph(graph)?;
            let p = load_pair(&g, pair)?;
            let d = katsura_dilation(&g, &p)?;
            Ok(match cli.format {
                Format::Json => CommandResult::json(d.to_json_value(&g)),
                Format::Dot => CommandResult { status: Status::Ok, payload: graph_dot(&d.graph) },
            })
        }
        Command::Realize { graph, pair } => {
            let g = load_graph(graph)?;
            let p = load_pair(&g, pair)?;
            let dims = relative_cp_dimension(&g, &p)?;
            let kc = verify_kernel_covariance(&g, &p)?;
            let covariance_defect = kc.covariance_intersection.abs_diff(kc.prescribed_covariance)
                + usize::from(!kc.prescribed_in_ideal);
            Ok(CommandResult::json(json!({
                "relations": [
                    { "name": "kernel_intersection", "max_defect": kc.kernel_intersection },
                    { "name": "covariance_intersection", "max_defect": covariance_defect },
                ],
                "dims": dims,
            })))
        }
        Command::Fock { graph, truncate, verify } => {
            let g = load_graph(graph)?;
            let f = build_fock(&g, *truncate)?;
            if !verify {
                let ops: serde_json::Map<String, Value> = g
                    .vertices()
                    .iter()
                    .zip(&f.vertex_ops)
                    .map(|(v, m)| (format!("P_{v}"), m))
                    .chain(g.edges().iter().zip(&f.edge_ops).map(|(e, m)| (format!("S_{}", e.id), m)))
                    .map(|(name, m)| {
                        let entries: Vec<Value> = m.entries().map(|(i, j, x)| json!([i, j, x])).collect();
                        (name, Value::Array(entries))
                    })
                    .collect();
                return Ok(CommandResult::json(json!({
                    "basis": f.basis.iter().map(|p| g.path_label(p)).collect::<Vec<_>>(),
                    "truncation": truncate,
                    "operators": ops,
                })));
            }
            let relations = check_relations(&f);
            let mut passed = relations.max_defect() == 0;
            let mut embedding = Vec::new();
            if let Some(n) = truncate {
                for level in 0..*n {
                    let r = katsura_embedding_check(&g, level, *n)?;
                    passed &= r.passed();
                    embedding.push(json!({
                        "level": r.level,
                        "checked": r.checks.len(),
                        "max_gap": r.max_gap,
                        "passed": r.passed(),
                    }));
                }
            }
            Ok(CommandResult::json(json!({
                "relations": relations.relations,
                "guarded_below_length": relations.guarded_below_length,
                "embedding": embedding,
                "dims": { "basis": f.dim() },
                "passed": passed,
            })))
        }
    }
}
