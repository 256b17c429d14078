//! Fock representation on the path basis and finite-dimensional realizations
//! of Toeplitz and relative Cuntz–Pimsner algebras.
//!
//! The Fock space has one basis vector `δ_p` per path `p`. A vertex acts by
//! the diagonal projection `P_v δ_p = [range(p) = v] δ_p` and an edge by the
//! shift `S_e δ_p = δ_{e·p}` when `src(e) = range(p)`. For acyclic graphs all
//! paths are finite in number and everything here is exact; for graphs with
//! cycles the basis is cut at a path length `N` and the shift is zero on the
//! top level, so relations only hold on paths shorter than `N`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexSet};
use crate::ideals::{ensure_valid, quotient_graph, regular_vertices, Pair};
use crate::linalg::{check_square, SparseMatrix, SparseVec, Subspace};

/// Norm agreement tolerance for the truncated embedding check.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FockRep {
    graph: Graph,
    pub basis: Vec<Path>,
    index: HashMap<Path, usize>,
    pub vertex_ops: Vec<SparseMatrix>,
    pub edge_ops: Vec<SparseMatrix>,
    pub truncation: Option<usize>,
}

impl FockRep {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vertex_op(&self, name: &str) -> Result<&SparseMatrix> {
        Ok(&self.vertex_ops[self.graph.vertex_id(name)?])
    }

    pub fn edge_op(&self, name: &str) -> Option<&SparseMatrix> {
        self.graph.edge_id(name).map(|e| &self.edge_ops[e])
    }

    /// Whether the relations are expected to hold on `δ_p` for basis index `j`.
    pub fn is_guarded(&self, j: usize) -> bool {
        self.truncation.is_none_or(|n| self.basis[j].len() < n)
    }

    /// Basis indices of the paths of length `n`.
    pub fn level(&self, n: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].len() == n).collect()
    }

    /// `P_v` for every vertex, then `S_e` and `S_e*` for every edge, in
    /// document order.
    pub fn generators(&self) -> Vec<SparseMatrix> {
        let mut out = self.vertex_ops.clone();
        out.extend(self.edge_ops.iter().cloned());
        out.extend(self.edge_ops.iter().map(SparseMatrix::adjoint));
        out
    }

    /// `S_μ = S_{e₁} ⋯ S_{eₙ}`; for a vertex path this is `P_v`.
    pub fn path_op(&self, p: &Path) -> SparseMatrix {
        if p.is_empty() {
            return self.vertex_ops[p.range].clone();
        }
        let mut acc = self.edge_ops[*p.edges.last().unwrap()].clone();
        for &e in p.edges.iter().rev().skip(1) {
            acc = self.edge_ops[e].mul(&acc);
        }
        acc
    }

    /// `D_v = P_v − Σ_{rng(e)=v} S_e S_e*`.
    pub fn covariance_generator(&self, v: usize) -> SparseMatrix {
        let mut d = self.vertex_ops[v].clone();
        for e in self.graph.incoming(v) {
            let s = &self.edge_ops[e];
            d = d.sub(&s.mul(&s.adjoint()));
        }
        d
    }
}

/// Builds the Fock representation. Without a truncation the graph must be
/// acyclic and the basis is every path.
pub fn build_fock(g: &Graph, truncation: Option<usize>) -> Result<FockRep> {
    let basis = match truncation {
        None => g.all_paths()?,
        Some(n) => g.paths_up_to(n),
    };
    let index: HashMap<Path, usize> =
        basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let dim = basis.len();
    let vertex_ops = (0..g.vertex_count())
        .map(|v| {
            SparseMatrix::from_entries(
                dim,
                basis.iter().enumerate().filter(|(_, p)| p.range == v).map(|(i, _)| (i, i, 1)),
            )
        })
        .collect();
    let edge_ops = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let entries = basis.iter().enumerate().filter_map(|(j, p)| {
                if p.range != edge.src || truncation.is_some_and(|n| p.len() >= n) {
                    return None;
                }
                let target = p.prepend(e, edge.rng);
                Some((index[&target], j, 1))
            });
            SparseMatrix::from_entries(dim, entries.collect::<Vec<_>>())
        })
        .collect();
    Ok(FockRep { graph: g.clone(), basis, index, vertex_ops, edge_ops, truncation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationDefect {
    pub name: String,
    pub max_defect: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub relations: Vec<RelationDefect>,
    /// Relations were checked on paths shorter than this; `None` means every
    /// basis vector.
    pub guarded_below_length: Option<usize>,
}

impl RelationReport {
    pub fn max_defect(&self) -> i64 {
        self.relations.iter().map(|r| r.max_defect).max().unwrap_or(0)
    }
}

/// Maximum entry-wise defect of each representation relation on the guarded
/// sub-basis.
pub fn check_relations(f: &FockRep) -> RelationReport {
    let g = &f.graph;
    let n = f.dim();
    let guarded = |j: usize| f.is_guarded(j);
    let defect = |m: &SparseMatrix| m.max_abs_in_columns(guarded);
    let mut out = Vec::new();

    let mut worst = 0;
    for (e, se) in f.edge_ops.iter().enumerate() {
        for (h, sh) in f.edge_ops.iter().enumerate() {
            let lhs = se.adjoint().mul(sh);
            let rhs = if e == h { f.vertex_ops[g.edge(e).src].clone() } else { SparseMatrix::zeros(n) };
            worst = worst.max(defect(&lhs.sub(&rhs)));
        }
    }
    out.push(("inner_product", worst));

    let mut left = 0;
    let mut right = 0;
    for (e, se) in f.edge_ops.iter().enumerate() {
        let edge = g.edge(e);
        for (v, pv) in f.vertex_ops.iter().enumerate() {
            let keep = |b: bool| if b { se.clone() } else { SparseMatrix::zeros(n) };
            left = left.max(defect(&pv.mul(se).sub(&keep(edge.rng == v))));
            right = right.max(defect(&se.mul(pv).sub(&keep(edge.src == v))));
        }
    }
    out.push(("left_action", left));
    out.push(("right_action", right));

    let mut orth = 0;
    for (v, pv) in f.vertex_ops.iter().enumerate() {
        for (w, pw) in f.vertex_ops.iter().enumerate() {
            let rhs = if v == w { pv.clone() } else { SparseMatrix::zeros(n) };
            orth = orth.max(defect(&pv.mul(pw).sub(&rhs)));
        }
    }
    out.push(("vertex_orthogonality", orth));

    let sum = f.vertex_ops.iter().fold(SparseMatrix::zeros(n), |acc, p| acc.add(p));
    out.push(("vertex_partition", defect(&sum.sub(&SparseMatrix::identity(n)))));

    RelationReport {
        relations: out
            .into_iter()
            .map(|(name, max_defect)| RelationDefect { name: name.to_owned(), max_defect })
            .collect(),
        guarded_below_length: f.truncation,
    }
}

/// A finite-dimensional space of matrices closed under the operations it was
/// built with, together with a linear basis.
#[derive(Debug, Clone)]
pub struct SpannedAlgebra {
    ambient: usize,
    /// Self-adjoint generating set; products of these stay inside the span.
    pub generators: Vec<SparseMatrix>,
    pub basis: Vec<SparseMatrix>,
    span: Subspace,
}

impl SpannedAlgebra {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn contains(&self, m: &SparseMatrix) -> bool {
        self.span.contains(&m.to_vector())
    }
}

fn with_adjoints(ms: &[SparseMatrix]) -> Vec<SparseMatrix> {
    let mut out: Vec<SparseMatrix> = Vec::with_capacity(ms.len() * 2);
    for m in ms.iter().cloned().chain(ms.iter().map(SparseMatrix::adjoint)) {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Smallest adjoint-closed algebra (no unit adjoined) containing the
/// generators. Every element is a combination of words in the generators and
/// their adjoints, so closing the span under left multiplication by those
/// suffices.
pub fn span_closure(n: usize, generators: &[SparseMatrix]) -> Result<SpannedAlgebra> {
    check_square(n, generators)?;
    let gens = with_adjoints(generators);
    let mut span = Subspace::new(n * n);
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    for g in &gens {
        if span.insert(g.to_vector()) {
            basis.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let x = g.mul(&w);
            if !x.is_zero() && span.insert(x.to_vector()) {
                basis.push(x.clone());
                queue.push_back(x);
            }
        }
    }
    Ok(SpannedAlgebra { ambient: n, generators: gens, basis, span })
}

/// Smallest subspace containing the seeds that is closed under adjoints and
/// under multiplication on either side by the algebra.
pub fn ideal_closure(alg: &SpannedAlgebra, seeds: &[SparseMatrix]) -> Result<SpannedAlgebra> {
    let n = alg.ambient;
    check_square(n, seeds)?;
    let mut span = Subspace::new(n * n);
    let mut basis = Vec::new();
    let mut queue = VecDeque::new();
    for s in with_adjoints(seeds) {
        if !s.is_zero() && span.insert(s.to_vector()) {
            basis.push(s.clone());
            queue.push_back(s);
        }
    }
    while let Some(w) = queue.pop_front() {
        for g in &alg.generators {
            for x in [g.mul(&w), w.mul(g)] {
                if !x.is_zero() && span.insert(x.to_vector()) {
                    basis.push(x.clone());
                    queue.push_back(x);
                }
            }
        }
    }
    Ok(SpannedAlgebra { ambient: n, generators: basis.clone(), basis, span })
}

/// The generators `D_v` for `v ∈ iset`; each vertex must be regular.
pub fn covariance_ideal_matrices(f: &FockRep, iset: &VertexSet) -> Result<Vec<SparseMatrix>> {
    let reg = regular_vertices(&f.graph);
    iset.iter()
        .map(|v| {
            if v >= f.graph.vertex_count() || !reg.contains(v) {
                let name = f.graph.vertices().get(v).cloned().unwrap_or_else(|| v.to_string());
                return Err(Error::NotRegular(name));
            }
            Ok(f.covariance_generator(v))
        })
        .collect()
}

/// Dimension of the center of `alg / ideal`.
///
/// `x` is central modulo the ideal iff `[x, g]` lies in the ideal for every
/// generator `g`. Stacking the commutators over all generators gives a linear
/// map into `⊕_g M_n / ideal`, and the center is its kernel modulo the ideal.
pub fn quotient_center_dim(alg: &SpannedAlgebra, ideal: &SpannedAlgebra) -> usize {
    let n2 = alg.ambient * alg.ambient;
    let gens = &alg.generators;
    let total = n2 * gens.len();
    let mut stacked_ideal = Subspace::new(total);
    for (gi, _) in gens.iter().enumerate() {
        for b in &ideal.basis {
            stacked_ideal.insert(b.to_vector_at(gi * n2));
        }
    }
    let stacked_dim = stacked_ideal.dim();
    let mut sum = stacked_ideal;
    for b in &alg.basis {
        let w = SparseVec::concat(
            gens.iter()
                .enumerate()
                .map(|(gi, g)| b.commutator(g).to_vector_at(gi * n2)),
        );
        sum.insert(w);
    }
    let rank = sum.dim() - stacked_dim;
    alg.dimension() - rank - ideal.dimension()
}

/// Dimensions of the Toeplitz algebra, the covariance ideal and their
/// quotient, plus the center of the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub toeplitz: usize,
    pub ideal: usize,
    pub quotient: usize,
    pub center: usize,
}

/// Pieces of the exact realization of `O(K, I)` for an acyclic graph.
pub struct RealizationParts {
    pub fock: FockRep,
    pub toeplitz: SpannedAlgebra,
    pub ideal: SpannedAlgebra,
    /// `I ∖ K` inside the quotient graph.
    pub covariance: VertexSet,
}

pub fn realization_parts(g: &Graph, p: &Pair) -> Result<RealizationParts> {
    if !g.is_acyclic() {
        return Err(Error::CyclicGraph);
    }
    ensure_valid(g, p)?;
    let q = quotient_graph(g, &p.kernel)?;
    let covariance = q.image(&p.intrinsic_covariance());
    let fock = build_fock(&q.quotient, None)?;
    let toeplitz = span_closure(fock.dim(), &fock.generators())?;
    let seeds = covariance_ideal_matrices(&fock, &covariance)?;
    let ideal = ideal_closure(&toeplitz, &seeds)?;
    Ok(RealizationParts { fock, toeplitz, ideal, covariance })
}

/// Exact dimension and center dimension of the relative Cuntz–Pimsner
/// algebra `O(K, I)`, realized as Toeplitz algebra of the quotient graph
/// modulo the ideal generated by the covariance generators.
pub fn relative_cp_dimension(g: &Graph, p: &Pair) -> Result<Realization> {
    let parts = realization_parts(g, p)?;
    let toeplitz = parts.toeplitz.dimension();
    let ideal = parts.ideal.dimension();
    Ok(Realization {
        toeplitz,
        ideal,
        quotient: toeplitz - ideal,
        center: quotient_center_dim(&parts.toeplitz, &parts.ideal),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCovarianceReport {
    /// `dim(span{P_v} ∩ ideal)`; zero means no extra kernel.
    pub kernel_intersection: usize,
    /// `dim(span{D_v : v regular} ∩ ideal)`.
    pub covariance_intersection: usize,
    /// `dim span{D_v : v ∈ I ∖ K}`.
    pub prescribed_covariance: usize,
    pub prescribed_in_ideal: bool,
}

impl KernelCovarianceReport {
    pub fn passed(&self) -> bool {
        self.kernel_intersection == 0
            && self.prescribed_in_ideal
            && self.covariance_intersection == self.prescribed_covariance
    }
}

/// Checks that the realization of `O(K, I)` has exactly kernel `K` and
/// covariance `I`: no vertex projection meets the ideal, and the covariance
/// generators inside the ideal are exactly those of `I ∖ K`.
pub fn verify_kernel_covariance(g: &Graph, p: &Pair) -> Result<KernelCovarianceReport> {
    let parts = realization_parts(g, p)?;
    let f = &parts.fock;
    let ideal = parts.ideal.span();
    let len = ideal.ambient();

    let vertices = Subspace::spanned_by(len, f.vertex_ops.iter().map(SparseMatrix::to_vector));
    let regular = regular_vertices(f.graph());
    let all_cov = Subspace::spanned_by(
        len,
        regular.iter().map(|v| f.covariance_generator(v).to_vector()),
    );
    let prescribed = Subspace::spanned_by(
        len,
        parts.covariance.iter().map(|v| f.covariance_generator(v).to_vector()),
    );
    Ok(KernelCovarianceReport {
        kernel_intersection: vertices.intersection_dim(ideal),
        covariance_intersection: all_cov.intersection_dim(ideal),
        prescribed_covariance: prescribed.dim(),
        prescribed_in_ideal: ideal.contains_all(&prescribed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormPair {
    pub label: String,
    pub level_norm: f64,
    pub next_level_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub level: usize,
    pub truncation: usize,
    pub checks: Vec<NormPair>,
    pub max_gap: f64,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.max_gap <= NORM_TOLERANCE
    }
}

fn spectral_norm(m: nalgebra::DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Compares the norm of level-`n` compacts `|μ⟩⟨ν|` with `src μ = src ν`
/// regular against the norm of the same operator on level `n + 1`, inside the
/// Fock representation truncated at `truncation`. A weighted sum of all the
/// units is checked as well.
pub fn katsura_embedding_check(g: &Graph, n: usize, truncation: usize) -> Result<EmbeddingReport> {
    if n + 1 > truncation {
        return Err(Error::TruncationTooSmall { level: n, truncation });
    }
    let f = build_fock(g, Some(truncation))?;
    let here = f.level(n);
    let next = f.level(n + 1);
    let regular = regular_vertices(g);

    let mut ops: Vec<(String, SparseMatrix)> = Vec::new();
    for &i in &here {
        let mu = &f.basis[i];
        if !regular.contains(mu.source) {
            continue;
        }
        let s_mu = f.path_op(mu);
        for &j in &here {
            let nu = &f.basis[j];
            if nu.source != mu.source {
                continue;
            }
            let k = s_mu.mul(&f.path_op(nu).adjoint());
            ops.push((format!("|{}><{}|", g.path_label(mu), g.path_label(nu)), k));
        }
    }
    if ops.len() > 1 {
        let combo = ops.iter().enumerate().fold(SparseMatrix::zeros(f.dim()), |acc, (i, (_, k))| {
            let c = (i as i64 % 3 + 1) * if i % 2 == 0 { 1 } else { -1 };
            acc.add(&k.scale(c))
        });
        ops.push(("weighted sum".to_owned(), combo));
    }

    let mut checks = Vec::with_capacity(ops.len());
    let mut max_gap: f64 = 0.0;
    for (label, k) in ops {
        let level_norm = spectral_norm(k.block_f64(&here, &here));
        let next_level_norm = spectral_norm(k.block_f64(&next, &next));
        max_gap = max_gap.max((level_norm - next_level_norm).abs());
        checks.push(NormPair { label, level_norm, next_level_norm });
    }
    Ok(EmbeddingReport { level: n, truncation, checks, max_gap })
}
