//! Independent oracles shared by the integration suites. None of these call
//! the lattice formulas or the span-closure code they are used to check.

#![allow(dead_code)]

use gauge_pairs::graph::{Graph, VertexSet};
use gauge_pairs::ideals::{hereditary_sets, quotient_graph, Pair};
use gauge_pairs::linalg::{SparseMatrix, Subspace};

/// Componentwise inclusion, checked directly on the sets.
pub fn below(p: &Pair, q: &Pair) -> bool {
    p.kernel.is_subset(&q.kernel) && p.covariance.is_subset(&q.covariance)
}

/// Greatest lower bound of `pairs[i]` and `pairs[j]` by scanning every pair.
pub fn brute_glb(pairs: &[Pair], i: usize, j: usize) -> Option<usize> {
    let lower: Vec<usize> =
        (0..pairs.len()).filter(|&k| below(&pairs[k], &pairs[i]) && below(&pairs[k], &pairs[j])).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&k| below(&pairs[k], &pairs[m])))
}

/// Least upper bound of `pairs[i]` and `pairs[j]` by scanning every pair.
pub fn brute_lub(pairs: &[Pair], i: usize, j: usize) -> Option<usize> {
    let upper: Vec<usize> =
        (0..pairs.len()).filter(|&k| below(&pairs[i], &pairs[k]) && below(&pairs[j], &pairs[k])).collect();
    upper.iter().copied().find(|&m| upper.iter().all(|&k| below(&pairs[m], &pairs[k])))
}

/// Every `(K, I)` over all subset pairs that satisfies the defining
/// conditions checked edge by edge.
pub fn brute_valid_pairs(g: &Graph) -> Vec<Pair> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for km in 0u64..1 << n {
        let k = VertexSet::from_mask(km);
        let hereditary = g.edges().iter().all(|e| !k.contains(e.rng) || k.contains(e.src));
        if !hereditary {
            continue;
        }
        for im in 0u64..1 << n {
            if km & !im != 0 {
                continue;
            }
            let i = VertexSet::from_mask(im);
            let ok = i.iter().all(|v| {
                k.contains(v)
                    || g.edges().iter().any(|e| e.rng == v && !k.contains(e.src))
            });
            if ok {
                out.push(Pair::new(k.clone(), i));
            }
        }
    }
    out
}

/// Number of paths with each source vertex, counted by dynamic programming
/// over an acyclic graph.
pub fn paths_by_source(g: &Graph) -> Vec<usize> {
    // by_range[v][w]: paths with source v and range w. Prepending an edge `e`
    // to a path with range src(e) gives one with range rng(e); n rounds reach
    // the fixed point on an acyclic graph.
    let n = g.vertex_count();
    let delta = |v: usize| (0..n).map(|w| usize::from(w == v)).collect::<Vec<_>>();
    let mut by_range: Vec<Vec<usize>> = (0..n).map(delta).collect();
    for _ in 0..n {
        by_range = (0..n)
            .map(|v| {
                let mut row = delta(v);
                for e in g.edges() {
                    row[e.rng] += by_range[v][e.src];
                }
                row
            })
            .collect();
    }
    by_range.iter().map(|row| row.iter().sum()).collect()
}

/// `dim T(E) = Σ_v (paths with source v)²`: the Toeplitz algebra of an
/// acyclic graph is spanned by the units `|μ⟩⟨ν|` with `src μ = src ν`.
pub fn toeplitz_dim_closed_form(g: &Graph) -> usize {
    paths_by_source(g).iter().map(|c| c * c).sum()
}

/// `(dim, center)` of `O(K, I)` for an acyclic graph: one full matrix block
/// per quotient vertex outside the covariance, of size the number of paths
/// with that source.
pub fn relative_dims_closed_form(g: &Graph, p: &Pair) -> (usize, usize) {
    let q = quotient_graph(g, &p.kernel).unwrap();
    let cov = q.image(&p.covariance.difference(&p.kernel));
    let counts = paths_by_source(&q.quotient);
    let blocks: Vec<usize> =
        (0..q.quotient.vertex_count()).filter(|v| !cov.contains(*v)).map(|v| counts[v]).collect();
    (blocks.iter().map(|c| c * c).sum(), blocks.len())
}

/// Operator oracle for the Hilbert-bimodule property on `ℓ²(E)`: every
/// same-source unit `|e⟩⟨f|` lies in the span of the range projections.
pub fn hilbert_bimodule_oracle(g: &Graph) -> bool {
    let m = g.edge_count();
    if m == 0 {
        return true;
    }
    let projections = Subspace::spanned_by(
        m * m,
        (0..g.vertex_count()).map(|v| {
            SparseMatrix::from_entries(
                m,
                (0..m).filter(|&e| g.edge(e).rng == v).map(|e| (e, e, 1)),
            )
            .to_vector()
        }),
    );
    (0..m).all(|e| {
        (0..m).all(|f| {
            g.edge(e).src != g.edge(f).src
                || projections.contains(&SparseMatrix::unit(m, e, f).to_vector())
        })
    })
}

/// Every subset of the vertices.
pub fn all_subsets(g: &Graph) -> impl Iterator<Item = VertexSet> {
    (0u64..1 << g.vertex_count()).map(VertexSet::from_mask)
}

pub fn hereditary(g: &Graph) -> Vec<VertexSet> {
    hereditary_sets(g).unwrap()
}
