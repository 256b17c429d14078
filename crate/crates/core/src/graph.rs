//! Finite directed graphs read as correspondences.
//!
//! A graph `(V, E)` houses the module `ℓ²(E)` over `c₀(V)`. Conventions used
//! throughout the crate:
//!
//! | structure                 | acts through |
//! |---------------------------|--------------|
//! | left action of a vertex   | edge range   |
//! | inner product / right act | edge source  |
//!
//! Much of the graph-algebra literature uses the opposite orientation; here a
//! vertex `v` keeps exactly the edges with `rng(e) = v`, and `⟨e, e⟩ = src(e)`.
//! A path `e₁ e₂ … eₙ` is composable when `src(eᵢ) = rng(eᵢ₊₁)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub rng: usize,
}

/// A validated finite directed graph. Vertices and edges are addressed by
/// their position in document order.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDocument {
    id: String,
    src: String,
    rng: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<String>,
    edges: Vec<EdgeDocument>,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, src, rng)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut out = Vec::new();
        let mut edge_index = HashMap::new();
        for (id, src, rng) in edges {
            let lookup = |name: &str| {
                vertex_index.get(name).copied().ok_or_else(|| Error::DanglingEndpoint {
                    edge: id.clone(),
                    vertex: name.to_owned(),
                })
            };
            let src = lookup(&src)?;
            let rng = lookup(&rng)?;
            if edge_index.insert(id.clone(), out.len()).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
            out.push(Edge { id, src, rng });
        }
        Ok(Self { vertices, edges: out, vertex_index, edge_index })
    }

    /// Convenience constructor for string literals.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().copied(),
            edges
                .iter()
                .map(|(id, s, r)| ((*id).to_owned(), (*s).to_owned(), (*r).to_owned())),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_index.get(name).copied()
    }

    pub fn has_vertex_name(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn has_edge_name(&self, name: &str) -> bool {
        self.edge_index.contains_key(name)
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.vertices.len()).collect()
    }

    /// Resolves vertex names into a set.
    pub fn vertex_set<I, S>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.vertex_id(n.as_ref())).collect()
    }

    /// Edges with range `v`: the edges the left action of `v` keeps.
    pub fn incoming(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.rng == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.src == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Edge ids with range equal to the named vertex.
    pub fn incoming_by_name(&self, v: &str) -> Result<BTreeSet<String>> {
        let v = self.vertex_id(v)?;
        Ok(self.incoming(v).into_iter().map(|e| self.edges[e].id.clone()).collect())
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.rng] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.src] += 1;
        }
        deg
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on the src -> rng orientation.
        let mut indeg = self.in_degrees();
        let mut stack: Vec<usize> = (0..self.vertices.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for e in &self.edges {
                if e.src == v {
                    indeg[e.rng] -= 1;
                    if indeg[e.rng] == 0 {
                        stack.push(e.rng);
                    }
                }
            }
        }
        seen == self.vertices.len()
    }

    /// Subgraph on `keep` with the edges whose endpoints both survive.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Graph {
        let vertices = keep.iter().map(|v| self.vertices[v].clone());
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(e.src) && keep.contains(e.rng))
            .map(|e| {
                (e.id.clone(), self.vertices[e.src].clone(), self.vertices[e.rng].clone())
            });
        Graph::new(vertices, edges).expect("induced subgraph of a valid graph is valid")
    }

    pub fn parse(document: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(doc.vertices, doc.edges.into_iter().map(|e| (e.id, e.src, e.rng)))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.document()).expect("graph document serializes")
    }

    /// Compact JSON with fields in the order `vertices`, `edges`, and per
    /// edge `id`, `src`, `rng`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.document()).expect("graph document serializes")
    }

    fn document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    id: e.id.clone(),
                    src: self.vertices[e.src].clone(),
                    rng: self.vertices[e.rng].clone(),
                })
                .collect(),
        }
    }

    /// Every composable path of length at most `max_len`, ordered by length
    /// and then by the edge-id sequence. Length-0 paths are the vertices in
    /// document order.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices.len()).map(Path::vertex).collect();
        let mut level: Vec<Path> = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &level {
                for (i, e) in self.edges.iter().enumerate() {
                    if e.src == p.range {
                        next.push(p.prepend(i, e.rng));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_by(|a, b| self.cmp_paths(a, b));
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// Every path of an acyclic graph.
    pub fn all_paths(&self) -> Result<Vec<Path>> {
        if !self.is_acyclic() {
            return Err(Error::CyclicGraph);
        }
        Ok(self.paths_up_to(self.vertices.len().saturating_sub(1)))
    }

    fn cmp_paths(&self, a: &Path, b: &Path) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            if a.is_empty() {
                a.range.cmp(&b.range)
            } else {
                let ia = a.edges.iter().map(|&e| self.edges[e].id.as_str());
                let ib = b.edges.iter().map(|&e| self.edges[e].id.as_str());
                ia.cmp(ib)
            }
        })
    }

    /// Re-checks the composability invariant of a path against this graph.
    pub fn is_valid_path(&self, p: &Path) -> bool {
        if p.edges.is_empty() {
            return p.range == p.source && p.range < self.vertices.len();
        }
        let Some(first) = p.edges.first().and_then(|&e| self.edges.get(e)) else {
            return false;
        };
        let Some(last) = p.edges.last().and_then(|&e| self.edges.get(e)) else {
            return false;
        };
        let composable = p.edges.windows(2).all(|w| match (self.edges.get(w[0]), self.edges.get(w[1])) {
            (Some(x), Some(y)) => x.src == y.rng,
            _ => false,
        });
        composable && first.rng == p.range && last.src == p.source
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertices[p.range].clone()
        } else {
            p.edges.iter().map(|&e| self.edges[e].id.as_str()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn set_names(&self, s: &VertexSet) -> Vec<String> {
        let mut names: Vec<String> = s.iter().map(|v| self.vertices[v].clone()).collect();
        names.sort();
        names
    }

    /// `{a,b}`-style rendering with names sorted.
    pub fn format_set(&self, s: &VertexSet) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }
}

/// A path `e₁ … eₙ` with `src(eᵢ) = rng(eᵢ₊₁)`; for length 0 a single vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub range: usize,
    pub source: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Self { range: v, source: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `e · self`, where `e` has source `self.range` and range `rng`.
    pub fn prepend(&self, e: usize, rng: usize) -> Self {
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push(e);
        edges.extend_from_slice(&self.edges);
        Self { range: rng, source: self.source, edges }
    }
}

/// A set of vertices, stored as positions into a graph's vertex list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Cardinality first, then lexicographic on the sorted position sequence.
    pub fn canonical_cmp(&self, other: &VertexSet) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
