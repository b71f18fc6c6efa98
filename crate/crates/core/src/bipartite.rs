//! Bipartite multigraphs with explicit parallel edges.
//!
//! Edge instances carry dense ids `0..edge_count`; parallel edges are
//! distinct instances with equal endpoints. Matching and cover are computed
//! on the parallel-deduplicated graph (parallels never co-occur in a
//! matching) and the Konig identity `tau = nu` is asserted, not assumed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Identifier of one bipartite edge instance.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct BEdgeId(pub u32);

impl BEdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum Side {
    Left,
    Right,
}

/// A vertex of a bipartite multigraph.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct BiVertex {
    pub side: Side,
    pub index: u32,
}

impl BiVertex {
    pub fn left(index: u32) -> Self {
        BiVertex { side: Side::Left, index }
    }

    pub fn right(index: u32) -> Self {
        BiVertex { side: Side::Right, index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BipartiteMultigraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(u32, u32)>,
}

/// A connected component: vertex indices per side plus the edge instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiComponent {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub edges: Vec<BEdgeId>,
}

impl BipartiteMultigraph {
    pub fn new(n_left: usize, n_right: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if (u as usize) >= n_left || (v as usize) >= n_right {
                return Err(Error::input(format!(
                    "edge {i} = ({u},{v}) out of bounds for classes ({n_left},{n_right})"
                )));
            }
        }
        Ok(BipartiteMultigraph { n_left, n_right, edges })
    }

    pub fn empty(n_left: usize, n_right: usize) -> Self {
        BipartiteMultigraph { n_left, n_right, edges: Vec::new() }
    }

    pub fn class_sizes(&self) -> (usize, usize) {
        (self.n_left, self.n_right)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn endpoints(&self, id: BEdgeId) -> Result<(u32, u32)> {
        self.edges
            .get(id.index())
            .copied()
            .ok_or_else(|| Error::input(format!("no edge with id {}", id.0)))
    }

    pub fn degree(&self, v: BiVertex) -> Result<usize> {
        let bound = match v.side {
            Side::Left => self.n_left,
            Side::Right => self.n_right,
        };
        if (v.index as usize) >= bound {
            return Err(Error::input(format!("vertex index {} out of range", v.index)));
        }
        let count = match v.side {
            Side::Left => self.edges.iter().filter(|e| e.0 == v.index).count(),
            Side::Right => self.edges.iter().filter(|e| e.1 == v.index).count(),
        };
        Ok(count)
    }

    pub fn max_degree(&self) -> usize {
        let mut dl = vec![0usize; self.n_left];
        let mut dr = vec![0usize; self.n_right];
        for &(u, v) in &self.edges {
            dl[u as usize] += 1;
            dr[v as usize] += 1;
        }
        dl.into_iter().chain(dr).max().unwrap_or(0)
    }

    pub fn is_regular(&self, r: usize) -> bool {
        let mut dl = vec![0usize; self.n_left];
        let mut dr = vec![0usize; self.n_right];
        for &(u, v) in &self.edges {
            dl[u as usize] += 1;
            dr[v as usize] += 1;
        }
        dl.into_iter().chain(dr).all(|d| d == r)
    }

    /// Parallel classes: endpoints -> ids of all instances, ids ascending.
    pub fn parallel_classes(&self) -> BTreeMap<(u32, u32), Vec<BEdgeId>> {
        let mut map: BTreeMap<(u32, u32), Vec<BEdgeId>> = BTreeMap::new();
        for (i, &e) in self.edges.iter().enumerate() {
            map.entry(e).or_default().push(BEdgeId(i as u32));
        }
        map
    }

    /// Connected components; isolated vertices form singleton components.
    pub fn components(&self) -> Vec<BiComponent> {
        let n = self.n_left + self.n_right;
        let mut dsu = Dsu::new(n);
        for &(u, v) in &self.edges {
            dsu.union(u as usize, self.n_left + v as usize);
        }
        let mut groups: BTreeMap<usize, BiComponent> = BTreeMap::new();
        for i in 0..self.n_left {
            let root = dsu.find(i);
            groups
                .entry(root)
                .or_insert_with(|| BiComponent { left: vec![], right: vec![], edges: vec![] })
                .left
                .push(i as u32);
        }
        for j in 0..self.n_right {
            let root = dsu.find(self.n_left + j);
            groups
                .entry(root)
                .or_insert_with(|| BiComponent { left: vec![], right: vec![], edges: vec![] })
                .right
                .push(j as u32);
        }
        for (i, &(u, _)) in self.edges.iter().enumerate() {
            let root = dsu.find(u as usize);
            groups.get_mut(&root).expect("edge endpoint grouped").edges.push(BEdgeId(i as u32));
        }
        groups.into_values().collect()
    }

    /// Restriction to a set of edge instances, keeping all vertices.
    pub fn restrict_to_edges(&self, keep: &BTreeSet<BEdgeId>) -> BipartiteMultigraph {
        let edges = keep.iter().map(|id| self.edges[id.index()]).collect();
        BipartiteMultigraph { n_left: self.n_left, n_right: self.n_right, edges }
    }

    /// Maximum matching and minimum vertex cover, with the Konig identity
    /// `|cover| = |matching|` asserted. The matching witness uses the least
    /// id in each parallel class; ties in the search resolve by vertex order.
    pub fn matching_and_cover(&self) -> (usize, BTreeSet<BEdgeId>, BTreeSet<BiVertex>) {
        // Deduplicated adjacency, neighbours ascending.
        let classes = self.parallel_classes();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.n_left];
        let mut rep: BTreeMap<(u32, u32), BEdgeId> = BTreeMap::new();
        for (&(u, v), ids) in &classes {
            adj[u as usize].push(v);
            rep.insert((u, v), ids[0]);
        }

        let mut match_right: Vec<Option<u32>> = vec![None; self.n_right];
        let mut match_left: Vec<Option<u32>> = vec![None; self.n_left];
        for u in 0..self.n_left {
            let mut seen = vec![false; self.n_right];
            try_augment(u, &adj, &mut seen, &mut match_right, &mut match_left);
        }

        let mut matching = BTreeSet::new();
        for (v, m) in match_right.iter().enumerate() {
            if let Some(u) = m {
                matching.insert(rep[&(*u, v as u32)]);
            }
        }

        // Alternating reachability from unmatched left vertices.
        let mut seen_left = vec![false; self.n_left];
        let mut seen_right = vec![false; self.n_right];
        let mut stack: Vec<u32> =
            (0..self.n_left as u32).filter(|&u| match_left[u as usize].is_none()).collect();
        for &u in &stack {
            seen_left[u as usize] = true;
        }
        while let Some(u) = stack.pop() {
            for &v in &adj[u as usize] {
                if !seen_right[v as usize] {
                    seen_right[v as usize] = true;
                    if let Some(w) = match_right[v as usize] {
                        if !seen_left[w as usize] {
                            seen_left[w as usize] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }

        let mut cover = BTreeSet::new();
        for u in 0..self.n_left {
            if !seen_left[u] && match_left[u].is_some() {
                cover.insert(BiVertex::left(u as u32));
            }
        }
        for v in 0..self.n_right {
            if seen_right[v] {
                cover.insert(BiVertex::right(v as u32));
            }
        }

        assert_eq!(cover.len(), matching.len(), "Konig identity violated");
        debug_assert!(self.edges.iter().all(|&(u, v)| {
            cover.contains(&BiVertex::left(u)) || cover.contains(&BiVertex::right(v))
        }));
        (matching.len(), matching, cover)
    }

    /// Maximum matching size with a witness set of edge ids.
    pub fn nu_with_witness(&self) -> (usize, BTreeSet<BEdgeId>) {
        let (nu, matching, _) = self.matching_and_cover();
        (nu, matching)
    }

    /// Minimum cover size with a witness vertex set.
    pub fn tau_with_witness(&self) -> (usize, BTreeSet<BiVertex>) {
        let (tau, _, cover) = self.matching_and_cover();
        (tau, cover)
    }
}

fn try_augment(
    u: usize,
    adj: &[Vec<u32>],
    seen: &mut [bool],
    match_right: &mut [Option<u32>],
    match_left: &mut [Option<u32>],
) -> bool {
    for &v in &adj[u] {
        if !seen[v as usize] {
            seen[v as usize] = true;
            let free = match match_right[v as usize] {
                None => true,
                Some(w) => try_augment(w as usize, adj, seen, match_right, match_left),
            };
            if free {
                match_right[v as usize] = Some(u as u32);
                match_left[u] = Some(v);
                return true;
            }
        }
    }
    false
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so grouping is order-independent.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular_c4(r: usize) -> BipartiteMultigraph {
        // Underlying 4-cycle on {l0,l1} x {r0,r1}, multiplicities balanced.
        let mut edges = Vec::new();
        let half = r / 2;
        for _ in 0..half {
            edges.push((0, 0));
            edges.push((1, 1));
        }
        for _ in 0..(r - half) {
            edges.push((0, 1));
            edges.push((1, 0));
        }
        BipartiteMultigraph::new(2, 2, edges).unwrap()
    }

    #[test]
    fn two_regular_c4_matching_and_cover() {
        let g = regular_c4(2);
        let (nu, matching, cover) = g.matching_and_cover();
        assert_eq!(nu, 2);
        assert_eq!(cover.len(), 2);
        for id in &matching {
            assert!(id.index() < g.edge_count());
        }
    }

    #[test]
    fn edgeless_graph() {
        let g = BipartiteMultigraph::empty(3, 2);
        let (nu, m, c) = g.matching_and_cover();
        assert_eq!((nu, m.len(), c.len()), (0, 0, 0));
        assert_eq!(g.components().len(), 5);
    }

    #[test]
    fn parallel_edges_share_one_matching_slot() {
        let g = BipartiteMultigraph::new(1, 1, vec![(0, 0), (0, 0), (0, 0)]).unwrap();
        let (nu, m, _) = g.matching_and_cover();
        assert_eq!(nu, 1);
        assert_eq!(m.iter().next().unwrap().0, 0, "witness picks least id");
    }

    #[test]
    fn degree_and_regularity() {
        let g = regular_c4(3);
        assert!(g.is_regular(3));
        assert_eq!(g.degree(BiVertex::left(0)).unwrap(), 3);
        assert!(g.degree(BiVertex::right(7)).is_err());
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn components_track_isolated_vertices() {
        let g = BipartiteMultigraph::new(3, 2, vec![(0, 0), (1, 0)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        let sizes: Vec<usize> =
            comps.iter().map(|c| c.left.len() + c.right.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 5);
    }

    #[test]
    fn out_of_bounds_edge_rejected() {
        assert!(BipartiteMultigraph::new(2, 2, vec![(2, 0)]).is_err());
    }
}
