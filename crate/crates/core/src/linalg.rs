//! Exact sparse linear algebra over the integers.
//!
//! Spans are tracked by fraction-free elimination: every stored vector is a
//! primitive integer vector with a positive leading entry, and reduction
//! cross-multiplies instead of dividing. Ranks and memberships are therefore
//! exact with no threshold.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::error::{Error, Result};

/// Square matrix with integer entries, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, (0..n).map(|i| (i, i, 1)))
    }

    /// `|i⟩⟨j|`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_entries(n, [(i, j, 1)])
    }

    /// Builds from `(row, col, value)` triples; repeated positions add up.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in entries {
            assert!(i < n && j < n, "entry ({i}, {j}) outside a {n}x{n} matrix");
            *acc[i].entry(j).or_insert(0) += v;
        }
        let rows = acc
            .into_iter()
            .map(|r| r.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        Self { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0, |k| self.rows[i][k].1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        let slot = acc.entry(j).or_insert(0);
                        *slot = a
                            .checked_mul(b)
                            .and_then(|p| slot.checked_add(p))
                            .expect("matrix entry overflow");
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    /// Conjugate transpose; entries are real, so the transpose.
    pub fn adjoint(&self) -> SparseMatrix {
        Self::from_entries(self.n, self.entries().map(|(i, j, v)| (j, i, v)))
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.combine(other, -1)
    }

    fn combine(&self, other: &SparseMatrix, sign: i64) -> SparseMatrix {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        Self::from_entries(
            self.n,
            self.entries().chain(other.entries().map(|(i, j, v)| (i, j, sign * v))),
        )
    }

    pub fn scale(&self, c: i64) -> SparseMatrix {
        Self::from_entries(self.n, self.entries().map(|(i, j, v)| (i, j, c * v)))
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Largest absolute entry among the columns selected by `keep`.
    pub fn max_abs_in_columns(&self, keep: impl Fn(usize) -> bool) -> i64 {
        self.entries()
            .filter(|&(_, j, _)| keep(j))
            .map(|(_, _, v)| v.abs())
            .max()
            .unwrap_or(0)
    }

    /// Restriction to the given rows and columns, as a dense `f64` matrix.
    pub fn block_f64(&self, rows: &[usize], cols: &[usize]) -> nalgebra::DMatrix<f64> {
        let col_pos: HashMap<usize, usize> =
            cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut m = nalgebra::DMatrix::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for &(c, v) in &self.rows[r] {
                if let Some(&ci) = col_pos.get(&c) {
                    m[(ri, ci)] = v as f64;
                }
            }
        }
        m
    }

    /// Row-major flattening into a vector of length `n²`.
    pub fn to_vector(&self) -> SparseVec {
        SparseVec::from_sorted(
            self.entries().map(|(i, j, v)| (i * self.n + j, i128::from(v))).collect(),
        )
    }

    /// Flattening placed at `offset` inside a longer vector.
    pub fn to_vector_at(&self, offset: usize) -> SparseVec {
        SparseVec::from_sorted(
            self.entries()
                .map(|(i, j, v)| (offset + i * self.n + j, i128::from(v)))
                .collect(),
        )
    }
}

/// Sparse integer vector with strictly increasing indices and no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec(Vec<(usize, i128)>);

impl SparseVec {
    pub fn from_sorted(entries: Vec<(usize, i128)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec(entries.into_iter().filter(|&(_, v)| v != 0).collect())
    }

    pub fn concat(parts: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut out: Vec<(usize, i128)> = parts.into_iter().flat_map(|p| p.0).collect();
        out.sort_by_key(|&(i, _)| i);
        SparseVec::from_sorted(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, i128)> {
        self.0.first().copied()
    }

    pub fn entries(&self) -> &[(usize, i128)] {
        &self.0
    }

    /// Divides out the content and makes the leading entry positive.
    fn normalize(&mut self) {
        let Some(&(_, lead)) = self.0.first() else { return };
        let content = self.0.iter().fold(0i128, |g, &(_, v)| g.gcd(&v));
        let sign = if lead < 0 { -1 } else { 1 };
        let d = content * sign;
        if d != 1 {
            for (_, v) in &mut self.0 {
                *v /= d;
            }
        }
    }

    /// `a·self − b·other`.
    fn cross(&self, a: i128, other: &SparseVec, b: i128) -> SparseVec {
        let mul = |x: i128, y: i128| x.checked_mul(y).expect("elimination coefficient overflow");
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let left = self.0.get(i);
            let right = other.0.get(j);
            match (left, right) {
                (Some(&(ki, vi)), Some(&(kj, vj))) if ki == kj => {
                    let v = mul(a, vi).checked_sub(mul(b, vj)).expect("elimination overflow");
                    if v != 0 {
                        out.push((ki, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ki, vi)), Some(&(kj, _))) if ki < kj => {
                    out.push((ki, mul(a, vi)));
                    i += 1;
                }
                (Some(&(ki, vi)), None) => {
                    out.push((ki, mul(a, vi)));
                    i += 1;
                }
                (_, Some(&(kj, vj))) => {
                    out.push((kj, -mul(b, vj)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec(out)
    }
}

/// A linear subspace of `Q^len` held in row-echelon form keyed by pivot.
#[derive(Debug, Clone, Default)]
pub struct Subspace {
    len: usize,
    rows: HashMap<usize, SparseVec>,
}

impl Subspace {
    pub fn new(len: usize) -> Self {
        Self { len, rows: HashMap::new() }
    }

    pub fn spanned_by(len: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut s = Self::new(len);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot it meets; zero iff `v`
    /// lies in the span. The remainder is a non-zero multiple of a
    /// representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        v.normalize();
        while let Some((lead, a)) = v.leading() {
            let Some(row) = self.rows.get(&lead) else { break };
            let c = row.0[0].1;
            let g = a.gcd(&c);
            v = v.cross(c / g, row, a / g);
            v.normalize();
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        if let Some(&(i, _)) = v.0.last() {
            assert!(i < self.len, "vector index {i} outside ambient length {}", self.len);
        }
        let r = self.reduce(&v);
        match r.leading() {
            Some((lead, _)) => {
                self.rows.insert(lead, r);
                true
            }
            None => false,
        }
    }

    pub fn contains_all(&self, other: &Subspace) -> bool {
        other.rows.values().all(|v| self.contains(v))
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// `dim(self ∩ other)` from `dim U + dim W − dim(U + W)`.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let mut sum = self.clone();
        for v in other.vectors() {
            sum.insert(v.clone());
        }
        self.dim() + other.dim() - sum.dim()
    }
}

/// Checks that every matrix is `n × n`.
pub fn check_square(n: usize, ms: &[SparseMatrix]) -> Result<()> {
    match ms.iter().find(|m| m.dim() != n) {
        Some(m) => Err(Error::DimensionMismatch { expected: n, found: m.dim() }),
        None => Ok(()),
    }
}
