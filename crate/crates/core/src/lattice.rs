//! The lattice of kernel–covariance pairs.
//!
//! In pullback form the order is plain inclusion in both coordinates:
//! `(K, I) ≤ (L, J)` iff `K ⊆ L` and `I ⊆ J`. Meets and joins are not simply
//! intersections and unions; see [`meet`] and [`join`].

use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ideals::{
    ensure_valid, hereditary_closure, hereditary_sets, is_hereditary, katsura_ideal_of_kernel,
    regular_outside, Pair,
};

/// Every valid pair of a graph with its order relation and Hasse diagram.
#[derive(Debug, Clone)]
pub struct PairLattice {
    pub pairs: Vec<Pair>,
    leq: Vec<Vec<bool>>,
    /// Cover edges `(i, j)`: `pairs[i] < pairs[j]` with nothing in between.
    pub covers: Vec<(usize, usize)>,
}

impl PairLattice {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn index_of(&self, p: &Pair) -> Option<usize> {
        self.pairs
            .binary_search_by(|q| q.canonical_cmp(p))
            .ok()
    }

    /// Reflexive, antisymmetric and transitive on the stored matrix.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..n).all(|i| {
                (0..n).all(|j| !self.leq[i][j] || (0..n).all(|k| !self.leq[j][k] || self.leq[i][k]))
            })
    }

    pub fn to_json_value(&self, g: &Graph) -> serde_json::Value {
        json!({
            "pairs": self.pairs.iter().map(|p| p.to_json_value(g)).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self, g: &Graph) -> String {
        let mut out = String::from("digraph lattice {\n");
        for (i, p) in self.pairs.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", p.label(g));
        }
        for &(i, j) in &self.covers {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn pair_leq(g: &Graph, p: &Pair, q: &Pair) -> Result<bool> {
    ensure_valid(g, p)?;
    ensure_valid(g, q)?;
    Ok(leq_unchecked(p, q))
}

fn leq_unchecked(p: &Pair, q: &Pair) -> bool {
    p.kernel.is_subset(&q.kernel) && p.covariance.is_subset(&q.covariance)
}

/// Every valid pair in canonical order, without the order matrix.
pub fn valid_pairs(g: &Graph) -> Result<Vec<Pair>> {
    let mut out = Vec::new();
    for k in hereditary_sets(g)? {
        let free: Vec<usize> = regular_outside(g, &k).iter().collect();
        for mask in 0u64..1 << free.len() {
            let extra: VertexSet = (0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]).collect();
            out.push(Pair::new(k.clone(), k.union(&extra)));
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

pub fn enumerate_pairs(g: &Graph) -> Result<PairLattice> {
    let pairs = valid_pairs(g)?;
    let n = pairs.len();
    let leq: Vec<Vec<bool>> = pairs
        .iter()
        .map(|p| pairs.iter().map(|q| leq_unchecked(p, q)).collect())
        .collect();
    let covers = transitive_reduction(&leq);
    debug_assert!(covers.iter().all(|&(i, j)| i < n && j < n));
    Ok(PairLattice { pairs, leq, covers })
}

/// Cover relation of a partial order given as a reflexive relation matrix.
fn transitive_reduction(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let words = n.div_ceil(64);
    let strict: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = vec![0u64; words];
            for j in 0..n {
                if i != j && leq[i][j] {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    let mut covers = Vec::new();
    for i in 0..n {
        let mut above_above = vec![0u64; words];
        for k in 0..n {
            if strict[i][k / 64] >> (k % 64) & 1 == 1 {
                for (w, x) in above_above.iter_mut().zip(&strict[k]) {
                    *w |= x;
                }
            }
        }
        for j in 0..n {
            let bit = 1u64 << (j % 64);
            if strict[i][j / 64] & bit != 0 && above_above[j / 64] & bit == 0 {
                covers.push((i, j));
            }
        }
    }
    covers
}

fn ensure_all_valid(g: &Graph, ps: &[Pair]) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::EmptyPairList);
    }
    ps.iter().try_for_each(|p| ensure_valid(g, p))
}

/// Greatest lower bound: intersect both coordinates, then cut the covariance
/// back to `J(⋂ K)`.
pub fn meet(g: &Graph, ps: &[Pair]) -> Result<Pair> {
    ensure_all_valid(g, ps)?;
    let mut kernel = ps[0].kernel.clone();
    let mut covariance = ps[0].covariance.clone();
    for p in &ps[1..] {
        kernel = kernel.intersection(&p.kernel);
        covariance = covariance.intersection(&p.covariance);
    }
    let bound = katsura_ideal_of_kernel(g, &kernel)?;
    Ok(Pair::new(kernel, covariance.intersection(&bound)))
}

/// Least upper bound by forcing: a covariance vertex that receives no edge in
/// the current quotient cannot be covariant there and is pushed into the
/// kernel, until nothing is forced.
pub fn join(g: &Graph, ps: &[Pair]) -> Result<Pair> {
    ensure_all_valid(g, ps)?;
    let mut kernel = VertexSet::new();
    let mut covariance = VertexSet::new();
    for p in ps {
        kernel = kernel.union(&p.kernel);
        covariance = covariance.union(&p.covariance);
    }
    kernel = hereditary_closure(g, &kernel);
    covariance = covariance.union(&kernel);
    loop {
        let reg = regular_outside(g, &kernel);
        let forced = covariance.difference(&kernel).difference(&reg);
        if forced.is_empty() {
            return Ok(Pair::new(kernel, covariance));
        }
        kernel = hereditary_closure(g, &kernel.union(&forced));
        covariance = covariance.union(&kernel);
    }
}

/// Largest pair with kernel `k` lying below `target`.
pub fn max_covariance_from(g: &Graph, k: &VertexSet, target: &Pair) -> Result<Pair> {
    ensure_valid(g, target)?;
    if !is_hereditary(g, k) {
        return Err(Error::NotHereditary(g.format_set(k)));
    }
    if !k.is_subset(&target.kernel) {
        return Err(Error::KernelNotBelow {
            kernel: g.format_set(k),
            target: g.format_set(&target.kernel),
        });
    }
    let reg = regular_outside(g, k);
    Ok(Pair::new(k.clone(), k.union(&reg.intersection(&target.covariance))))
}

/// Least pair with kernel `l` above `p`, or `None` when no pair with kernel
/// `l` lies above `p` (there is no connecting morphism).
pub fn min_covariance_to(g: &Graph, p: &Pair, l: &VertexSet) -> Result<Option<Pair>> {
    ensure_valid(g, p)?;
    if !is_hereditary(g, l) {
        return Err(Error::NotHereditary(g.format_set(l)));
    }
    if !p.kernel.is_subset(l) {
        return Err(Error::KernelNotBelow {
            kernel: g.format_set(&p.kernel),
            target: g.format_set(l),
        });
    }
    let covariance = p.covariance.union(l);
    let pushed = covariance.difference(l);
    if pushed.is_subset(&regular_outside(g, l)) {
        Ok(Some(Pair::new(l.clone(), covariance)))
    } else {
        Ok(None)
    }
}

/// All valid pairs above `p`, in canonical order.
pub fn gauge_invariant_ideals(g: &Graph, p: &Pair) -> Result<Vec<Pair>> {
    ensure_valid(g, p)?;
    Ok(valid_pairs(g)?.into_iter().filter(|q| leq_unchecked(p, q)).collect())
}
