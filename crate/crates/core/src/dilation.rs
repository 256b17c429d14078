//! Katsura dilation: the graph whose absolute Cuntz–Pimsner algebra is a
//! given relative one.
//!
//! For a pair `(K, I)` the graph is first cut down to the quotient by `K`.
//! With `R = I ∖ K`, every regular vertex `v ∉ R` gets a copy `v#copy`, and
//! every edge `e` leaving such a vertex gets a copy `e#copy` from
//! `src(e)#copy` to the original `rng(e)`. Copies never receive edges.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fock::{relative_cp_dimension, Realization};
use crate::graph::{Graph, VertexSet};
use crate::ideals::{ensure_valid, quotient_graph, regular_vertices, Pair};

pub const COPY_SUFFIX: &str = "#copy";

#[derive(Debug, Clone)]
pub struct DilationResult {
    pub graph: Graph,
    /// `(vertex in the source graph, vertex in the dilation)` for every vertex
    /// surviving the quotient.
    pub original_vertex_map: Vec<(usize, usize)>,
    /// `(regular vertex outside the covariance, its copy)`.
    pub copy_vertex_map: Vec<(usize, usize)>,
    pub original_edge_map: Vec<(usize, usize)>,
    pub copy_edge_map: Vec<(usize, usize)>,
}

impl DilationResult {
    pub fn copies(&self) -> VertexSet {
        self.copy_vertex_map.iter().map(|&(_, c)| c).collect()
    }

    pub fn originals(&self) -> VertexSet {
        self.original_vertex_map.iter().map(|&(_, o)| o).collect()
    }

    /// `{"graph": …, "vertex_map": …, "copy_map": …, "edge_map": …,
    /// "copy_edge_map": …}` with maps keyed by source-graph ids.
    pub fn to_json_value(&self, source: &Graph) -> Value {
        let vmap = |pairs: &[(usize, usize)]| -> Value {
            let m: Map<String, Value> = pairs
                .iter()
                .map(|&(s, d)| (source.vertex_name(s).to_owned(), json!(self.graph.vertex_name(d))))
                .collect();
            Value::Object(m)
        };
        let emap = |pairs: &[(usize, usize)]| -> Value {
            let m: Map<String, Value> = pairs
                .iter()
                .map(|&(s, d)| (source.edge(s).id.clone(), json!(self.graph.edge(d).id)))
                .collect();
            Value::Object(m)
        };
        json!({
            "graph": self.graph.to_json_value(),
            "vertex_map": vmap(&self.original_vertex_map),
            "copy_map": vmap(&self.copy_vertex_map),
            "edge_map": emap(&self.original_edge_map),
            "copy_edge_map": emap(&self.copy_edge_map),
        })
    }
}

pub fn katsura_dilation(g: &Graph, p: &Pair) -> Result<DilationResult> {
    ensure_valid(g, p)?;
    let q = quotient_graph(g, &p.kernel)?;
    let quotient = &q.quotient;
    let covariance = q.image(&p.intrinsic_covariance());
    let copied = regular_vertices(quotient).difference(&covariance);

    let copy_name = |name: &str| format!("{name}{COPY_SUFFIX}");
    let mut vertices: Vec<String> = quotient.vertices().to_vec();
    for v in copied.iter() {
        let name = copy_name(quotient.vertex_name(v));
        if g.has_vertex_name(&name) {
            return Err(Error::CopyNameCollision(name));
        }
        vertices.push(name);
    }
    let mut edges: Vec<(String, String, String)> = quotient
        .edges()
        .iter()
        .map(|e| {
            (e.id.clone(), quotient.vertex_name(e.src).to_owned(), quotient.vertex_name(e.rng).to_owned())
        })
        .collect();
    let mut copied_edges = Vec::new();
    for (i, e) in quotient.edges().iter().enumerate() {
        if copied.contains(e.src) {
            let name = copy_name(&e.id);
            if g.has_edge_name(&name) {
                return Err(Error::CopyNameCollision(name));
            }
            copied_edges.push(i);
            edges.push((
                name,
                copy_name(quotient.vertex_name(e.src)),
                quotient.vertex_name(e.rng).to_owned(),
            ));
        }
    }
    let graph = Graph::new(vertices, edges)?;

    let nq = quotient.vertex_count();
    let mq = quotient.edge_count();
    Ok(DilationResult {
        original_vertex_map: (0..nq).map(|v| (q.vertex_origin[v], v)).collect(),
        copy_vertex_map: copied.iter().enumerate().map(|(k, v)| (q.vertex_origin[v], nq + k)).collect(),
        original_edge_map: (0..mq).map(|e| (q.edge_origin[e], e)).collect(),
        copy_edge_map: copied_edges
            .iter()
            .enumerate()
            .map(|(k, &e)| (q.edge_origin[e], mq + k))
            .collect(),
        graph,
    })
}

/// Both realizations compared by [`dilation_is_absolute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DilationComparison {
    pub relative: Realization,
    pub dilated_absolute: Realization,
}

impl DilationComparison {
    pub fn agrees(&self) -> bool {
        self.relative.quotient == self.dilated_absolute.quotient
            && self.relative.center == self.dilated_absolute.center
    }
}

pub fn compare_dilation(g: &Graph, p: &Pair) -> Result<DilationComparison> {
    if !g.is_acyclic() {
        return Err(Error::CyclicGraph);
    }
    let relative = relative_cp_dimension(g, p)?;
    let d = katsura_dilation(g, p)?;
    let dilated_absolute = relative_cp_dimension(&d.graph, &Pair::absolute(&d.graph))?;
    Ok(DilationComparison { relative, dilated_absolute })
}

/// Whether `O(g; K, I)` and the absolute algebra of the dilation have the
/// same dimension and the same number of simple summands.
pub fn dilation_is_absolute(g: &Graph, p: &Pair) -> Result<bool> {
    Ok(compare_dilation(g, p)?.agrees())
}

/// Graph-level run of the enlargement loop `B' = B + Y*Y`, `Y' = B'Y + Y + YB'`
/// starting from the vertex set `seed` and all edges: inner products of edges
/// are their sources, so a round adds the sources of edges missing from `B`.
/// Returns the number of rounds that changed `B`.
pub fn enlargement_rounds(g: &Graph, seed: &VertexSet) -> usize {
    let mut b = seed.clone();
    let mut rounds = 0;
    loop {
        let inner: VertexSet = g.edges().iter().map(|e| e.src).collect();
        let next = b.union(&inner);
        if next == b {
            return rounds;
        }
        b = next;
        rounds += 1;
    }
}
