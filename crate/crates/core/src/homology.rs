//! Reduced homology of independence complexes.
//!
//! Faces are the independent sets of a small graph, enumerated by dimension
//! as bitmasks. Boundary ranks are computed exactly: fraction-free
//! elimination for rational coefficients (i128 with a big-integer fallback),
//! bitset elimination over the binary field, and Smith normal form over the
//! integers, which also yields torsion.
//!
//! The chain complex is augmented: dimension -1 holds the empty face, so
//! reduced Betti numbers come straight out of the rank arithmetic.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};

/// A plain undirected graph on vertices `0..n`, n <= 32, as adjacency masks.
/// This is the ground data of an independence complex; line-graph subgraphs
/// convert into it before any topology runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdjGraph {
    n: usize,
    adj: Vec<u32>,
}

impl AdjGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 32 {
            return Err(Error::resource(alloc::format!(
                "graph on {n} vertices exceeds the 32-vertex complex limit"
            )));
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::input(alloc::format!("bad edge ({u},{v}) on {n} vertices")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(AdjGraph { n, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn neighbours(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.contains(&0)
    }

    /// Same vertices, one edge removed.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<AdjGraph> {
        if !self.has_edge(u, v) {
            return Err(Error::input(alloc::format!("edge ({u},{v}) not present")));
        }
        let mut adj = self.adj.clone();
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
        Ok(AdjGraph { n: self.n, adj })
    }

    /// Explosion: remove both endpoints and all their neighbours; the result
    /// is the induced graph on the survivors, relabelled compactly.
    pub fn explode_edge(&self, u: usize, v: usize) -> Result<AdjGraph> {
        if !self.has_edge(u, v) {
            return Err(Error::input(alloc::format!("edge ({u},{v}) not present")));
        }
        let doomed: u32 = (1 << u) | (1 << v) | self.adj[u] | self.adj[v];
        let kept: Vec<usize> = (0..self.n).filter(|&w| doomed & (1 << w) == 0).collect();
        let mut relabel = BTreeMap::new();
        for (new, &old) in kept.iter().enumerate() {
            relabel.insert(old, new);
        }
        let mut adj = vec![0u32; kept.len()];
        for (new, &old) in kept.iter().enumerate() {
            let mut mask = 0u32;
            for &other in &kept {
                if self.adj[old] & (1 << other) != 0 {
                    mask |= 1 << relabel[&other];
                }
            }
            adj[new] = mask;
        }
        Ok(AdjGraph { n: kept.len(), adj })
    }

    /// Disjoint union, `other` relabelled after `self`.
    pub fn disjoint_union(&self, other: &AdjGraph) -> Result<AdjGraph> {
        let n = self.n + other.n;
        if n > 32 {
            return Err(Error::resource("disjoint union exceeds 32 vertices"));
        }
        let mut adj = self.adj.clone();
        for &m in &other.adj {
            // other nonempty implies self.n <= 31, so the shift is in range
            adj.push(m << self.n);
        }
        Ok(AdjGraph { n, adj })
    }

    /// Maximum independent set size (the complex dimension is this minus 1).
    pub fn independence_number(&self) -> usize {
        fn go(g: &AdjGraph, candidates: u32, current: usize, best: &mut usize) {
            if current + candidates.count_ones() as usize <= *best {
                return;
            }
            if candidates == 0 {
                *best = (*best).max(current);
                return;
            }
            let v = candidates.trailing_zeros() as usize;
            // Branch: take v, or skip it.
            go(g, candidates & !(1 << v) & !g.adj[v], current + 1, best);
            go(g, candidates & !(1 << v), current, best);
        }
        let mut best = 0;
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        go(self, all, 0, &mut best);
        best
    }
}

/// Independent sets grouped by cardinality. `by_card[k]` holds the masks of
/// the independent sets of size `k + 1`, ascending; the empty face is
/// implicit.
#[derive(Debug, Clone)]
pub struct FaceTable {
    by_card: Vec<Vec<u32>>,
}

impl FaceTable {
    /// Enumerates independent sets of cardinality `1..=max_card`.
    pub fn enumerate(g: &AdjGraph, max_card: usize, budget: &Budget) -> Result<FaceTable> {
        let mut by_card: Vec<Vec<u32>> = vec![Vec::new(); max_card];
        let mut total = 0usize;
        fn extend(
            g: &AdjGraph,
            mask: u32,
            size: usize,
            first_free: usize,
            by_card: &mut [Vec<u32>],
            total: &mut usize,
            max_faces: usize,
        ) -> Result<()> {
            if size == by_card.len() {
                return Ok(());
            }
            for v in first_free..g.vertex_count() {
                if mask & g.neighbours(v) == 0 && mask & (1 << v) == 0 {
                    let next = mask | (1 << v);
                    *total += 1;
                    if *total > max_faces {
                        return Err(Error::resource(alloc::format!(
                            "complex exceeds the {max_faces}-face budget"
                        )));
                    }
                    by_card[size].push(next);
                    extend(g, next, size + 1, v + 1, by_card, total, max_faces)?;
                }
            }
            Ok(())
        }
        if max_card > 0 {
            extend(g, 0, 0, 0, &mut by_card, &mut total, budget.max_faces)?;
            for level in &mut by_card {
                level.sort_unstable();
            }
        }
        Ok(FaceTable { by_card })
    }

    /// Faces of cardinality `k` (dimension `k - 1`), ascending masks.
    pub fn of_card(&self, k: usize) -> &[u32] {
        static EMPTY: [u32; 0] = [];
        if k == 0 || k > self.by_card.len() {
            &EMPTY
        } else {
            &self.by_card[k - 1]
        }
    }

    pub fn max_card(&self) -> usize {
        self.by_card.iter().rposition(|lvl| !lvl.is_empty()).map_or(0, |i| i + 1)
    }
}

/// Sparse description of the boundary map from cardinality-`k` faces to
/// cardinality-`k-1` faces. For k = 1 this is the augmentation map onto the
/// empty face (a single all-ones row).
pub fn boundary(faces: &FaceTable, k: usize) -> SparseBoundary {
    let cols = faces.of_card(k);
    if k == 1 {
        return SparseBoundary {
            rows: 1,
            cols: cols.len(),
            entries: (0..cols.len()).map(|j| (0, j, 1)).collect(),
        };
    }
    let rows = faces.of_card(k - 1);
    let row_index: BTreeMap<u32, usize> =
        rows.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut entries = Vec::new();
    for (j, &mask) in cols.iter().enumerate() {
        let mut sign = 1i8;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let face = mask & !(1 << v);
            let i = row_index[&face];
            entries.push((i, j, sign));
            sign = -sign;
        }
    }
    SparseBoundary { rows: rows.len(), cols: cols.len(), entries }
}

#[derive(Debug, Clone)]
pub struct SparseBoundary {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i8)>,
}

impl SparseBoundary {
    fn dense_i128(&self) -> Vec<Vec<i128>> {
        let mut m = vec![vec![0i128; self.cols]; self.rows];
        for &(i, j, s) in &self.entries {
            m[i][j] = s as i128;
        }
        m
    }

    fn dense_bigint(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for &(i, j, s) in &self.entries {
            m[i][j] = BigInt::from(s);
        }
        m
    }

    /// Rank over the rationals, exactly.
    pub fn rank_rational(&self) -> usize {
        match bareiss_rank_i128(self.dense_i128()) {
            Some(r) => r,
            None => bareiss_rank_bigint(self.dense_bigint()),
        }
    }

    /// Rank over the two-element field.
    pub fn rank_f2(&self) -> usize {
        let words = self.cols.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.rows];
        for &(i, j, _) in &self.entries {
            rows[i][j / 64] ^= 1u64 << (j % 64);
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / 64, col % 64);
            if let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) {
                rows.swap(rank, pivot);
                for i in 0..rows.len() {
                    if i != rank && rows[i][w] >> b & 1 == 1 {
                        let (head, tail) = rows.split_at_mut(rank.max(i));
                        let (a, b_row) = if i < rank {
                            (&mut head[i], &tail[0])
                        } else {
                            (&mut tail[0], &head[rank])
                        };
                        for (x, y) in a.iter_mut().zip(b_row.iter()) {
                            *x ^= *y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// Invariant factors of the Smith normal form (nonzero diagonal,
    /// positive, each dividing the next). The count is the rank; the
    /// factors greater than one are the torsion coefficients of the
    /// cokernel.
    pub fn smith_invariant_factors(&self) -> Vec<BigInt> {
        smith(self.dense_bigint())
    }
}

fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, pivot);
        for i in (rank + 1)..rows {
            for j in (col + 1)..cols {
                let a = m[rank][col].checked_mul(m[i][j])?;
                let b = m[i][col].checked_mul(m[rank][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        for i in (rank + 1)..rows {
            for j in (col + 1)..cols {
                let val = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = val;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn smith(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Smallest nonzero entry of the trailing submatrix becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }

        'reduce: loop {
            // Clear column k.
            for i in (k + 1)..rows {
                if !m[i][k].is_zero() {
                    let q = div_nearest(&m[i][k], &m[k][k]);
                    for j in k..cols {
                        let sub = &q * &m[k][j];
                        m[i][j] -= sub;
                    }
                    if !m[i][k].is_zero() {
                        // Remainder is strictly smaller; promote it.
                        m.swap(k, i);
                        continue 'reduce;
                    }
                }
            }
            // Clear row k.
            for j in (k + 1)..cols {
                if !m[k][j].is_zero() {
                    let q = div_nearest(&m[k][j], &m[k][k]);
                    for i in k..rows {
                        let sub = &q * &m[i][k];
                        m[i][j] -= sub;
                    }
                    if !m[k][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        continue 'reduce;
                    }
                }
            }
            // Divisibility fix-up: fold any non-divisible entry into row k.
            let mut fixed = true;
            'scan: for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    if !(&m[i][j] % &m[k][k]).is_zero() {
                        for col in k..cols {
                            let add = m[i][col].clone();
                            m[k][col] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        factors.push(m[k][k].abs());
        k += 1;
    }
    factors
}

/// Rounded-to-nearest integer division, which keeps Euclidean descent fast.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    let double_r: BigInt = &r * BigInt::from(2);
    if double_r.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Coeff {
    Rational,
    BinaryField,
    Integer,
}

/// Reduced homology of the independence complex, evaluated in dimensions
/// `-1 ..= dim_limit`.
#[derive(Debug, Clone)]
pub struct HomologySummary {
    /// `betti[i]` is the free rank of reduced homology in dimension `i - 1`.
    pub betti: Vec<usize>,
    /// `torsion[i]` lists the invariant factors (> 1) of the torsion part in
    /// dimension `i - 1`; empty unless integer coefficients were requested.
    pub torsion: Vec<Vec<BigInt>>,
    /// Dimension of the complex itself (independence number minus one).
    pub top_dim: isize,
    /// Highest dimension evaluated.
    pub dim_limit: isize,
}

impl HomologySummary {
    /// Whether reduced homology vanishes in every evaluated dimension.
    pub fn all_vanish(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(|t| t.is_empty())
    }

    /// First dimension (offset by one, so index 0 is dimension -1) with
    /// nonvanishing homology.
    pub fn first_nonvanishing(&self) -> Option<isize> {
        (0..self.betti.len())
            .find(|&i| self.betti[i] > 0 || !self.torsion[i].is_empty())
            .map(|i| i as isize - 1)
    }
}

/// Computes reduced homology of `Ind(g)` in dimensions `-1 ..= dim_limit`.
/// The caller is responsible for the vertexless and isolated-vertex
/// shortcuts; this function assumes `g` has at least one vertex.
pub fn reduced_homology(
    g: &AdjGraph,
    coeff: Coeff,
    dim_limit: isize,
    budget: &Budget,
) -> Result<HomologySummary> {
    let alpha = g.independence_number();
    let top_dim = alpha as isize - 1;
    let limit = dim_limit.min(top_dim);
    // Faces up to cardinality limit + 2 feed the boundary out of the last
    // evaluated dimension.
    let max_card = ((limit + 2).max(0) as usize).min(alpha);
    let faces = FaceTable::enumerate(g, max_card, budget)?;

    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    // rank of the boundary leaving dimension d, i.e. of card d+1 -> card d.
    let mut rank_out_prev: usize = 0; // boundary out of dimension -1 is zero
    let mut n_prev: usize = 1; // one empty face
    for d in -1..=limit {
        let card_above = (d + 2) as usize;
        let bnd = boundary(&faces, card_above);
        let (rank_above, tors) = match coeff {
            Coeff::Rational => (bnd.rank_rational(), Vec::new()),
            Coeff::BinaryField => (bnd.rank_f2(), Vec::new()),
            Coeff::Integer => {
                let factors = bnd.smith_invariant_factors();
                let tors: Vec<BigInt> =
                    factors.iter().filter(|f| !f.is_one()).cloned().collect();
                (factors.len(), tors)
            }
        };
        betti.push(n_prev - rank_out_prev - rank_above);
        torsion.push(tors);
        n_prev = faces.of_card(card_above).len();
        rank_out_prev = rank_above;
    }
    Ok(HomologySummary { betti, torsion, top_dim, dim_limit: limit })
}
