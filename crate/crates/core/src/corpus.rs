//! Worked examples and deterministic graph families used by the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Loops `la` at `a` and `lb` at `b`, plus `z: a → b`.
pub fn g1() -> Graph {
    Graph::from_edges(&["a", "b"], &[("la", "a", "a"), ("lb", "b", "b"), ("z", "a", "b")])
        .expect("valid example")
}

/// The single edge `z: a → b`.
pub fn g2() -> Graph {
    Graph::from_edges(&["a", "b"], &[("z", "a", "b")]).expect("valid example")
}

/// The Toeplitz graph: a single loop `x` at `a`.
pub fn g3() -> Graph {
    Graph::from_edges(&["a"], &[("x", "a", "a")]).expect("valid example")
}

/// `a → b → a`, one edge each way.
pub fn cycle2() -> Graph {
    Graph::from_edges(&["a", "b"], &[("u", "a", "b"), ("w", "b", "a")]).expect("valid example")
}

pub fn edgeless(names: &[&str]) -> Graph {
    Graph::from_edges(names, &[]).expect("valid example")
}

pub fn named_examples() -> Vec<(&'static str, Graph)> {
    vec![
        ("g1", g1()),
        ("g2", g2()),
        ("g3", g3()),
        ("cycle2", cycle2()),
        ("point", edgeless(&["a"])),
        ("two-points", edgeless(&["a", "b"])),
        ("empty", edgeless(&[])),
    ]
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    Graph::new(
        names.clone(),
        edges
            .iter()
            .enumerate()
            .map(|(i, &(s, r))| (format!("e{i}"), names[s].clone(), names[r].clone())),
    )
    .expect("generated graph is valid")
}

/// Every graph on `1..=max_vertices` labelled vertices without parallel
/// edges (loops allowed) and with at most `max_edges` edges.
pub fn exhaustive_simple(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|s| (0..n).map(move |r| (s, r))).collect();
        assert!(slots.len() < 32, "exhaustive scan limited to small graphs");
        for mask in 0u32..(1 << slots.len()) {
            if mask.count_ones() as usize > max_edges {
                continue;
            }
            let edges: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            out.push(build(n, &edges));
        }
    }
    out
}

/// Every acyclic multigraph on `1..=max_vertices` vertices whose edges run
/// from higher to lower position, with multiplicity at most `max_mult` and at
/// most `max_edges` edges. Up to relabelling this covers every acyclic graph
/// of that size.
pub fn exhaustive_acyclic(max_vertices: usize, max_edges: usize, max_mult: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|s| (0..s).map(move |r| (s, r))).collect();
        let mut mult = vec![0usize; slots.len()];
        loop {
            if mult.iter().sum::<usize>() <= max_edges {
                let edges: Vec<(usize, usize)> = slots
                    .iter()
                    .zip(&mult)
                    .flat_map(|(&s, &m)| std::iter::repeat_n(s, m))
                    .collect();
                out.push(build(n, &edges));
            }
            // odometer increment
            let mut i = 0;
            while i < mult.len() && mult[i] == max_mult {
                mult[i] = 0;
                i += 1;
            }
            if i == mult.len() {
                break;
            }
            mult[i] += 1;
        }
    }
    out
}

/// A seeded random graph with parallel edges allowed.
pub fn random_graph(rng: &mut impl Rng, vertices: usize, edges: usize, acyclic: bool) -> Graph {
    let mut list = Vec::with_capacity(edges);
    while list.len() < edges && vertices > 0 {
        let s = rng.gen_range(0..vertices);
        let r = rng.gen_range(0..vertices);
        if acyclic {
            if s == r {
                continue;
            }
            list.push((s.max(r), s.min(r)));
        } else {
            list.push((s, r));
        }
    }
    build(vertices, &list)
}

/// Graphs with at most 5 vertices and 8 edges: the named examples, every
/// simple graph on at most 3 vertices, and 80 seeded random multigraphs on
/// 4 or 5 vertices.
pub fn lattice_corpus() -> Vec<Graph> {
    let mut out: Vec<Graph> = named_examples().into_iter().map(|(_, g)| g).collect();
    out.extend(exhaustive_simple(3, 8));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for i in 0..80 {
        let n = 4 + i % 2;
        let m = rng.gen_range(0..=8);
        out.push(random_graph(&mut rng, n, m, false));
    }
    out
}

/// Acyclic graphs with at most 5 vertices and 6 edges: the acyclic named
/// examples, every acyclic multigraph on at most 3 vertices with edge
/// multiplicity at most 2, every simple acyclic graph on 4 vertices (up to
/// the fixed vertex order), and 120 seeded random acyclic multigraphs on 4 or
/// 5 vertices.
pub fn acyclic_corpus() -> Vec<Graph> {
    let mut out: Vec<Graph> = named_examples()
        .into_iter()
        .map(|(_, g)| g)
        .filter(Graph::is_acyclic)
        .collect();
    out.extend(exhaustive_acyclic(3, 6, 2));
    out.extend(exhaustive_acyclic(4, 6, 1).into_iter().filter(|g| g.vertex_count() == 4));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..120 {
        let n = 4 + i % 2;
        let m = rng.gen_range(0..=6);
        out.push(random_graph(&mut rng, n, m, true));
    }
    out
}

/// 100 seeded random graphs on 1 to 7 vertices with up to 10 edges.
pub fn random_corpus() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(0..=10);
            random_graph(&mut rng, n, m, false)
        })
        .collect()
}
