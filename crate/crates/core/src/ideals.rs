//! Hereditary sets, quotient graphs and kernel–covariance pairs.
//!
//! Ideals of `c₀(V)` are vertex sets. A kernel is a hereditary set `K`
//! (`rng(e) ∈ K ⇒ src(e) ∈ K`); the covariance is kept in pullback form, so a
//! pair `(K, I)` satisfies `K ⊆ I ⊆ K ∪ regular(quotient by K)`.
//!
//! Naming note: a *source* here is a vertex with no incoming edge (no edge has
//! it as range), since the left action sees edges through their range.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest vertex count accepted by subset-scan enumerations.
pub const ENUMERATION_LIMIT: usize = 24;

pub fn is_hereditary(g: &Graph, s: &VertexSet) -> bool {
    g.edges().iter().all(|e| !s.contains(e.rng) || s.contains(e.src))
}

/// `KX`: edges kept by the left action of `s`, i.e. with range in `s`.
pub fn left_submodule(g: &Graph, s: &VertexSet) -> BTreeSet<usize> {
    (0..g.edge_count()).filter(|&e| s.contains(g.edge(e).rng)).collect()
}

/// `XK`: edges kept by the right action of `s`, i.e. with source in `s`.
pub fn right_submodule(g: &Graph, s: &VertexSet) -> BTreeSet<usize> {
    (0..g.edge_count()).filter(|&e| s.contains(g.edge(e).src)).collect()
}

/// Invariant form `X*KX ⊆ K`: the inner products `⟨e, e⟩ = src(e)` of the
/// edges in `KX` stay inside `s`.
pub fn is_invariant(g: &Graph, s: &VertexSet) -> bool {
    left_submodule(g, s).into_iter().all(|e| s.contains(g.edge(e).src))
}

/// Module form `KX ⊆ XK`.
pub fn is_hereditary_module(g: &Graph, s: &VertexSet) -> bool {
    left_submodule(g, s).is_subset(&right_submodule(g, s))
}

/// Least hereditary superset of `s`.
pub fn hereditary_closure(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for e in g.edges() {
            if out.contains(e.rng) && out.insert(e.src) {
                changed = true;
            }
        }
    }
    out
}

fn check_enumerable(g: &Graph) -> Result<()> {
    if g.vertex_count() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { vertices: g.vertex_count(), limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Bit mask of the sources of edges entering each vertex.
pub(crate) fn predecessor_masks(g: &Graph) -> Vec<u64> {
    let mut masks = vec![0u64; g.vertex_count()];
    for e in g.edges() {
        masks[e.rng] |= 1 << e.src;
    }
    masks
}

/// All hereditary subsets, ordered by cardinality and then lexicographically.
pub fn hereditary_sets(g: &Graph) -> Result<Vec<VertexSet>> {
    check_enumerable(g)?;
    let n = g.vertex_count();
    let preds = predecessor_masks(g);
    let mut out: Vec<VertexSet> = (0u64..1 << n)
        .filter(|&mask| {
            (0..n).all(|v| mask >> v & 1 == 0 || preds[v] & !mask == 0)
        })
        .map(VertexSet::from_mask)
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// Vertices with no incoming edge.
pub fn sources(g: &Graph) -> VertexSet {
    let deg = g.in_degrees();
    (0..g.vertex_count()).filter(|&v| deg[v] == 0).collect()
}

/// Vertices with at least one incoming edge.
pub fn receivers(g: &Graph) -> VertexSet {
    let deg = g.in_degrees();
    (0..g.vertex_count()).filter(|&v| deg[v] > 0).collect()
}

/// Support of the maximal covariance. Graphs are finite, so every receiver
/// is regular.
pub fn regular_vertices(g: &Graph) -> VertexSet {
    receivers(g)
}

/// Vertices outside `k` that receive an edge whose source is outside `k`:
/// the regular vertices of the quotient by `k`, in the original numbering.
pub(crate) fn regular_outside(g: &Graph, k: &VertexSet) -> VertexSet {
    g.edges()
        .iter()
        .filter(|e| !k.contains(e.src) && !k.contains(e.rng))
        .map(|e| e.rng)
        .collect()
}

/// The quotient by a hereditary set together with the maps back to the
/// original graph.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub quotient: Graph,
    /// Original vertex position to quotient position.
    pub vertex_map: Vec<Option<usize>>,
    /// Original edge position to quotient position.
    pub edge_map: Vec<Option<usize>>,
    /// Quotient vertex position to original position.
    pub vertex_origin: Vec<usize>,
    pub edge_origin: Vec<usize>,
}

impl QuotientData {
    /// Image of an original vertex set inside the quotient.
    pub fn image(&self, s: &VertexSet) -> VertexSet {
        s.iter().filter_map(|v| self.vertex_map[v]).collect()
    }

    /// Original vertices of a quotient vertex set.
    pub fn lift(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.vertex_origin[v]).collect()
    }
}

/// Induced subgraph on `V ∖ k`, keeping the edges with source outside `k`.
pub fn quotient_graph(g: &Graph, k: &VertexSet) -> Result<QuotientData> {
    if !is_hereditary(g, k) {
        return Err(Error::NotHereditary(g.format_set(k)));
    }
    let mut vertex_map = vec![None; g.vertex_count()];
    let mut vertex_origin = Vec::new();
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        if !k.contains(v) {
            *slot = Some(vertex_origin.len());
            vertex_origin.push(v);
        }
    }
    let mut edge_map = vec![None; g.edge_count()];
    let mut edge_origin = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if !k.contains(e.src) {
            edge_map[i] = Some(edge_origin.len());
            edge_origin.push(i);
        }
    }
    let quotient = Graph::new(
        vertex_origin.iter().map(|&v| g.vertex_name(v).to_owned()),
        edge_origin.iter().map(|&i| {
            let e = g.edge(i);
            (e.id.clone(), g.vertex_name(e.src).to_owned(), g.vertex_name(e.rng).to_owned())
        }),
    )?;
    Ok(QuotientData { quotient, vertex_map, edge_map, vertex_origin, edge_origin })
}

/// `J(K) = K ∪ regular(quotient by K)`, the largest covariance allowed over `k`.
pub fn katsura_ideal_of_kernel(g: &Graph, k: &VertexSet) -> Result<VertexSet> {
    if !is_hereditary(g, k) {
        return Err(Error::NotHereditary(g.format_set(k)));
    }
    Ok(k.union(&regular_outside(g, k)))
}

/// A kernel–covariance pair in pullback form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub kernel: VertexSet,
    pub covariance: VertexSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDocument {
    kernel: Vec<String>,
    covariance: Vec<String>,
}

impl Pair {
    pub fn new(kernel: VertexSet, covariance: VertexSet) -> Self {
        Self { kernel, covariance }
    }

    /// `(∅, ∅)`: the Toeplitz pair.
    pub fn bottom() -> Self {
        Self::new(VertexSet::new(), VertexSet::new())
    }

    /// `(V, V)`: the zero representation.
    pub fn top(g: &Graph) -> Self {
        Self::new(g.all_vertices(), g.all_vertices())
    }

    /// `(∅, regular)`: the absolute Cuntz–Pimsner pair.
    pub fn absolute(g: &Graph) -> Self {
        Self::new(VertexSet::new(), regular_vertices(g))
    }

    pub fn from_names(g: &Graph, kernel: &[&str], covariance: &[&str]) -> Result<Self> {
        Ok(Self::new(g.vertex_set(kernel)?, g.vertex_set(covariance)?))
    }

    /// The covariance seen inside the quotient, `I ∖ K`, in original numbering.
    pub fn intrinsic_covariance(&self) -> VertexSet {
        self.covariance.difference(&self.kernel)
    }

    /// Order of enumeration: kernel, then covariance, each by cardinality and
    /// lexicographically.
    pub fn canonical_cmp(&self, other: &Pair) -> std::cmp::Ordering {
        self.kernel
            .canonical_cmp(&other.kernel)
            .then_with(|| self.covariance.canonical_cmp(&other.covariance))
    }

    pub fn parse(g: &Graph, document: &str) -> Result<Self> {
        let doc: PairDocument =
            serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(Self::new(g.vertex_set(&doc.kernel)?, g.vertex_set(&doc.covariance)?))
    }

    pub fn to_json_value(&self, g: &Graph) -> serde_json::Value {
        serde_json::to_value(PairDocument {
            kernel: g.set_names(&self.kernel),
            covariance: g.set_names(&self.covariance),
        })
        .expect("pair document serializes")
    }

    pub fn to_json(&self, g: &Graph) -> String {
        self.to_json_value(g).to_string()
    }

    pub fn label(&self, g: &Graph) -> String {
        format!("K={} I={}", g.format_set(&self.kernel), g.format_set(&self.covariance))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairValidation {
    pub violations: Vec<String>,
}

impl PairValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_pair(g: &Graph, p: &Pair) -> PairValidation {
    let mut violations = Vec::new();
    let n = g.vertex_count();
    let in_range = |s: &VertexSet| s.max_vertex().is_none_or(|v| v < n);
    if !in_range(&p.kernel) || !in_range(&p.covariance) {
        violations.push("pair mentions vertices outside the graph".to_owned());
        return PairValidation { violations };
    }
    let hereditary = is_hereditary(g, &p.kernel);
    if !hereditary {
        let closure = hereditary_closure(g, &p.kernel);
        violations.push(format!(
            "kernel {} is not hereditary (closure adds {})",
            g.format_set(&p.kernel),
            g.format_set(&closure.difference(&p.kernel))
        ));
    }
    if !p.kernel.is_subset(&p.covariance) {
        violations.push(format!(
            "kernel not contained in covariance: missing {}",
            g.format_set(&p.kernel.difference(&p.covariance))
        ));
    }
    if hereditary {
        let bound = p.kernel.union(&regular_outside(g, &p.kernel));
        let excess = p.covariance.difference(&bound);
        if !excess.is_empty() {
            violations.push(format!(
                "covariance exceeds J(kernel) = {}: {} not regular in the quotient",
                g.format_set(&bound),
                g.format_set(&excess)
            ));
        }
    }
    PairValidation { violations }
}

pub(crate) fn ensure_valid(g: &Graph, p: &Pair) -> Result<()> {
    let report = validate_pair(g, p);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidPair(report.violations))
    }
}

/// Katsura's T-pair `(K, I)` with the certificate `K ⊆ I ⊆ J(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPair {
    pub kernel: VertexSet,
    pub t_ideal: VertexSet,
    /// `J(K)` against which the certificate was checked.
    pub katsura_ideal: VertexSet,
}

pub fn to_tpair(g: &Graph, p: &Pair) -> Result<TPair> {
    ensure_valid(g, p)?;
    let katsura_ideal = katsura_ideal_of_kernel(g, &p.kernel)?;
    if !(p.kernel.is_subset(&p.covariance) && p.covariance.is_subset(&katsura_ideal)) {
        return Err(Error::InvalidPair(vec!["T-pair certificate failed".to_owned()]));
    }
    Ok(TPair { kernel: p.kernel.clone(), t_ideal: p.covariance.clone(), katsura_ideal })
}

/// The graph module is a Hilbert bimodule exactly when no vertex receives or
/// emits more than one edge.
pub fn is_hilbert_bimodule(g: &Graph) -> bool {
    g.in_degrees().iter().all(|&d| d <= 1) && g.out_degrees().iter().all(|&d| d <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cycle2, edgeless, g1, g2, g3};

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn hereditary_examples() {
        let g = g1();
        assert!(is_hereditary(&g, &set(&g, &["a"])));
        assert!(!is_hereditary(&g, &set(&g, &["b"])));
        assert!(is_hereditary(&g, &VertexSet::new()));
    }

    #[test]
    fn closure_examples() {
        let g = g2();
        assert_eq!(hereditary_closure(&g, &set(&g, &["b"])), set(&g, &["a", "b"]));
        assert_eq!(hereditary_closure(&g, &set(&g, &["a"])), set(&g, &["a"]));
        let g = g1();
        assert_eq!(hereditary_closure(&g, &set(&g, &["b"])), set(&g, &["a", "b"]));
    }

    #[test]
    fn hereditary_set_lists() {
        for g in [g1(), g2()] {
            let expected = vec![VertexSet::new(), set(&g, &["a"]), set(&g, &["a", "b"])];
            assert_eq!(hereditary_sets(&g).unwrap(), expected);
        }
        let g = edgeless(&["a", "b"]);
        assert_eq!(hereditary_sets(&g).unwrap().len(), 4);
    }

    #[test]
    fn regular_and_sources() {
        let g = g2();
        assert_eq!(sources(&g), set(&g, &["a"]));
        assert_eq!(regular_vertices(&g), set(&g, &["b"]));
        let g = g1();
        assert_eq!(regular_vertices(&g), set(&g, &["a", "b"]));
        assert!(regular_vertices(&edgeless(&["a", "b"])).is_empty());
    }

    #[test]
    fn quotient_examples() {
        let g = g2();
        let q = quotient_graph(&g, &set(&g, &["a"])).unwrap();
        assert_eq!(q.quotient, Graph::from_edges(&["b"], &[]).unwrap());
        assert!(regular_vertices(&q.quotient).is_empty());

        let g = g1();
        let q = quotient_graph(&g, &set(&g, &["a"])).unwrap();
        assert_eq!(q.quotient, Graph::from_edges(&["b"], &[("lb", "b", "b")]).unwrap());
        assert_eq!(q.edge_origin, vec![1]);

        let q = quotient_graph(&g, &VertexSet::new()).unwrap();
        assert_eq!(q.quotient, g);
        assert!(matches!(quotient_graph(&g, &set(&g, &["b"])), Err(Error::NotHereditary(_))));
    }

    #[test]
    fn katsura_ideal_examples() {
        let g = g2();
        assert_eq!(katsura_ideal_of_kernel(&g, &VertexSet::new()).unwrap(), set(&g, &["b"]));
        assert_eq!(katsura_ideal_of_kernel(&g, &set(&g, &["a"])).unwrap(), set(&g, &["a"]));
        let g = g1();
        assert_eq!(katsura_ideal_of_kernel(&g, &set(&g, &["a"])).unwrap(), set(&g, &["a", "b"]));
        assert!(katsura_ideal_of_kernel(&g, &set(&g, &["b"])).is_err());
    }

    #[test]
    fn katsura_ideal_agrees_with_quotient_route() {
        for g in crate::corpus::lattice_corpus() {
            for k in hereditary_sets(&g).unwrap() {
                let q = quotient_graph(&g, &k).unwrap();
                let via_quotient = k.union(&q.lift(&regular_vertices(&q.quotient)));
                assert_eq!(katsura_ideal_of_kernel(&g, &k).unwrap(), via_quotient);
            }
        }
    }

    #[test]
    fn pair_validation_examples() {
        let g = g2();
        assert!(validate_pair(&g, &Pair::from_names(&g, &[], &["b"]).unwrap()).is_valid());
        let bad = validate_pair(&g, &Pair::from_names(&g, &["a"], &["a", "b"]).unwrap());
        assert!(!bad.is_valid());
        assert!(bad.violations[0].contains("{b}"), "{:?}", bad.violations);
        let g = g1();
        assert!(validate_pair(&g, &Pair::from_names(&g, &["a"], &["a", "b"]).unwrap()).is_valid());
    }

    #[test]
    fn pair_validation_names_each_clause() {
        let g = g1();
        let p = Pair::from_names(&g, &["b"], &[]).unwrap();
        let report = validate_pair(&g, &p);
        assert_eq!(report.violations.len(), 2);
        assert!(report.violations[0].contains("not hereditary"));
        assert!(report.violations[1].contains("kernel not contained"));
    }

    #[test]
    fn tpair_examples() {
        let g = g2();
        let t = to_tpair(&g, &Pair::from_names(&g, &[], &["b"]).unwrap()).unwrap();
        assert_eq!(t.t_ideal, set(&g, &["b"]));
        assert_eq!(t.katsura_ideal, set(&g, &["b"]));
        let g = g1();
        let t = to_tpair(&g, &Pair::from_names(&g, &["a"], &["a", "b"]).unwrap()).unwrap();
        assert_eq!(t.katsura_ideal, set(&g, &["a", "b"]));
        let g = g3();
        let t = to_tpair(&g, &Pair::bottom()).unwrap();
        assert!(t.kernel.is_empty() && t.t_ideal.is_empty());
        assert!(to_tpair(&g2(), &Pair::from_names(&g2(), &["a"], &["a", "b"]).unwrap()).is_err());
    }

    #[test]
    fn hilbert_bimodule_examples() {
        assert!(is_hilbert_bimodule(&cycle2()));
        assert!(is_hilbert_bimodule(&g2()));
        assert!(!is_hilbert_bimodule(&g1()));
    }

    #[test]
    fn pair_json_round_trip() {
        let g = g1();
        let p = Pair::from_names(&g, &["a"], &["b", "a"]).unwrap();
        let json = p.to_json(&g);
        assert_eq!(json, r#"{"kernel":["a"],"covariance":["a","b"]}"#);
        assert_eq!(Pair::parse(&g, &json).unwrap(), p);
        assert!(matches!(Pair::parse(&g, r#"{"kernel":["q"],"covariance":[]}"#), Err(Error::UnknownVertex(_))));
    }
}
