//! Tripartite 3-multihypergraphs: the core data model plus exact matching
//! and cover computations.
//!
//! Edge instances are triples with one vertex index per class and dense ids
//! `0..edge_count`. Parallel edges are distinct instances so that the line
//! graph of a link has one vertex per instance; the matching searches
//! deduplicate them since no two parallels ever share a matching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bipartite::{BipartiteMultigraph, Dsu};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Identifier of one hypergraph edge instance.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct HEdgeId(pub u32);

impl HEdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum TriClass {
    A,
    B,
    C,
}

impl TriClass {
    pub const ALL: [TriClass; 3] = [TriClass::A, TriClass::B, TriClass::C];

    pub fn index(self) -> usize {
        match self {
            TriClass::A => 0,
            TriClass::B => 1,
            TriClass::C => 2,
        }
    }

    pub fn from_index(i: usize) -> TriClass {
        TriClass::ALL[i]
    }

    /// The two remaining classes, in class order. These become the (left,
    /// right) sides of a link taken over `self`.
    pub fn others(self) -> (TriClass, TriClass) {
        match self {
            TriClass::A => (TriClass::B, TriClass::C),
            TriClass::B => (TriClass::A, TriClass::C),
            TriClass::C => (TriClass::A, TriClass::B),
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct TriVertex {
    pub class: TriClass,
    pub index: u32,
}

impl TriVertex {
    pub fn new(class: TriClass, index: u32) -> Self {
        TriVertex { class, index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Tripartite3Graph {
    sizes: [usize; 3],
    edges: Vec<[u32; 3]>,
}

/// A matching: pairwise vertex-disjoint edge instances.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Matching3 {
    pub edge_ids: BTreeSet<HEdgeId>,
}

impl Matching3 {
    pub fn validate(&self, h: &Tripartite3Graph) -> Result<()> {
        let mut used: [BTreeSet<u32>; 3] = Default::default();
        for id in &self.edge_ids {
            let e = h
                .edges
                .get(id.index())
                .ok_or_else(|| Error::input(format!("matching references edge {}", id.0)))?;
            for c in 0..3 {
                if !used[c].insert(e[c]) {
                    return Err(Error::input(format!(
                        "matching edges collide on class-{c} vertex {}",
                        e[c]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A vertex cover: meets every edge instance.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Cover {
    pub vertices: BTreeSet<TriVertex>,
}

impl Cover {
    pub fn validate(&self, h: &Tripartite3Graph) -> Result<()> {
        for (i, e) in h.edges.iter().enumerate() {
            let hit = (0..3).any(|c| {
                self.vertices.contains(&TriVertex::new(TriClass::from_index(c), e[c]))
            });
            if !hit {
                return Err(Error::input(format!("edge {i} uncovered")));
            }
        }
        Ok(())
    }
}

/// A connected component: vertex indices per class plus the edge instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriComponent {
    pub vertices: [Vec<u32>; 3],
    pub edges: Vec<HEdgeId>,
}

/// The link of a vertex subset: a bipartite multigraph on the two remaining
/// classes, with `hosts[i]` tracing link edge `i` back to the hypergraph
/// edge instance it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub graph: BipartiteMultigraph,
    pub hosts: Vec<HEdgeId>,
    pub over: TriClass,
    pub classes: (TriClass, TriClass),
}

impl Tripartite3Graph {
    pub fn new(sizes: [usize; 3], edges: Vec<[u32; 3]>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            for c in 0..3 {
                if (e[c] as usize) >= sizes[c] {
                    return Err(Error::input(format!(
                        "edge {i} index {} out of bounds for class {c} of size {}",
                        e[c], sizes[c]
                    )));
                }
            }
        }
        Ok(Tripartite3Graph { sizes, edges })
    }

    pub fn empty(sizes: [usize; 3]) -> Self {
        Tripartite3Graph { sizes, edges: Vec::new() }
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[u32; 3]] {
        &self.edges
    }

    pub fn edge(&self, id: HEdgeId) -> Result<[u32; 3]> {
        self.edges
            .get(id.index())
            .copied()
            .ok_or_else(|| Error::input(format!("no edge with id {}", id.0)))
    }

    pub fn degree(&self, v: TriVertex) -> Result<usize> {
        let c = v.class.index();
        if (v.index as usize) >= self.sizes[c] {
            return Err(Error::input(format!(
                "vertex index {} out of range for class of size {}",
                v.index, self.sizes[c]
            )));
        }
        Ok(self.edges.iter().filter(|e| e[c] == v.index).count())
    }

    pub fn degrees(&self) -> [Vec<usize>; 3] {
        let mut out = [vec![0; self.sizes[0]], vec![0; self.sizes[1]], vec![0; self.sizes[2]]];
        for e in &self.edges {
            for c in 0..3 {
                out[c][e[c] as usize] += 1;
            }
        }
        out
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.degrees().iter().all(|d| d.iter().all(|&x| x == r))
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().iter().flat_map(|d| d.iter().copied()).max().unwrap_or(0)
    }

    /// Distinct edge shapes with their instance ids, shapes ascending and
    /// ids ascending within each shape.
    pub fn shapes(&self) -> BTreeMap<[u32; 3], Vec<HEdgeId>> {
        let mut map: BTreeMap<[u32; 3], Vec<HEdgeId>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            map.entry(*e).or_default().push(HEdgeId(i as u32));
        }
        map
    }

    /// Connected components; isolated vertices form singleton components.
    pub fn components(&self) -> Vec<TriComponent> {
        let offset = [0, self.sizes[0], self.sizes[0] + self.sizes[1]];
        let n = self.sizes.iter().sum();
        let mut dsu = Dsu::new(n);
        for e in &self.edges {
            dsu.union(e[0] as usize, offset[1] + e[1] as usize);
            dsu.union(e[0] as usize, offset[2] + e[2] as usize);
        }
        let mut groups: BTreeMap<usize, TriComponent> = BTreeMap::new();
        for c in 0..3 {
            for i in 0..self.sizes[c] {
                let root = dsu.find(offset[c] + i);
                groups
                    .entry(root)
                    .or_insert_with(|| TriComponent {
                        vertices: Default::default(),
                        edges: vec![],
                    })
                    .vertices[c]
                    .push(i as u32);
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let root = dsu.find(e[0] as usize);
            groups.get_mut(&root).expect("edge endpoint grouped").edges.push(HEdgeId(i as u32));
        }
        groups.into_values().collect()
    }

    /// The sub-hypergraph induced by a component, with classes compacted.
    /// Returns the graph together with the original indices per class.
    pub fn component_subgraph(&self, comp: &TriComponent) -> (Tripartite3Graph, [Vec<u32>; 3]) {
        let mut lookup: [BTreeMap<u32, u32>; 3] = Default::default();
        for c in 0..3 {
            for (new, &old) in comp.vertices[c].iter().enumerate() {
                lookup[c].insert(old, new as u32);
            }
        }
        let edges = comp
            .edges
            .iter()
            .map(|id| {
                let e = self.edges[id.index()];
                [lookup[0][&e[0]], lookup[1][&e[1]], lookup[2][&e[2]]]
            })
            .collect();
        let sizes =
            [comp.vertices[0].len(), comp.vertices[1].len(), comp.vertices[2].len()];
        (Tripartite3Graph { sizes, edges }, comp.vertices.clone())
    }

    /// Link of `s` over the given class. One link edge per edge instance
    /// meeting `s`; an empty `s` yields an edgeless link.
    pub fn link(&self, over: TriClass, s: &BTreeSet<u32>) -> Result<Link> {
        let c = over.index();
        if let Some(&i) = s.iter().find(|&&i| (i as usize) >= self.sizes[c]) {
            return Err(Error::input(format!("link set contains out-of-range index {i}")));
        }
        let (lc, rc) = over.others();
        let mut edges = Vec::new();
        let mut hosts = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if s.contains(&e[c]) {
                edges.push((e[lc.index()], e[rc.index()]));
                hosts.push(HEdgeId(i as u32));
            }
        }
        let graph =
            BipartiteMultigraph::new(self.sizes[lc.index()], self.sizes[rc.index()], edges)?;
        Ok(Link { graph, hosts, over, classes: (lc, rc) })
    }

    /// Link of an entire class; contains every edge instance exactly once.
    pub fn link_of_class(&self, over: TriClass) -> Link {
        let all: BTreeSet<u32> = (0..self.sizes[over.index()] as u32).collect();
        self.link(over, &all).expect("full class is in range")
    }

    /// Exact maximum matching by branch and bound over deduplicated shapes,
    /// ordered by descending degree sum with ids as tie-breaker.
    pub fn nu_exact(&self, budget: &Budget) -> Result<(usize, Matching3)> {
        let shapes = self.shapes();
        if shapes.len() > budget.max_matching_edges {
            return Err(Error::resource(format!(
                "{} deduplicated edges exceed the matching cap {}",
                shapes.len(),
                budget.max_matching_edges
            )));
        }
        let degrees = self.degrees();
        let mut order: Vec<([u32; 3], HEdgeId)> =
            shapes.iter().map(|(shape, ids)| (*shape, ids[0])).collect();
        let degsum = |e: &[u32; 3]| -> usize {
            (0..3).map(|c| degrees[c][e[c] as usize]).sum()
        };
        order.sort_by(|(ea, ia), (eb, ib)| {
            degsum(eb).cmp(&degsum(ea)).then(ia.0.cmp(&ib.0))
        });

        let mut search = MatchingSearch {
            shapes: order,
            used: [
                vec![false; self.sizes[0]],
                vec![false; self.sizes[1]],
                vec![false; self.sizes[2]],
            ],
            free: [self.sizes[0], self.sizes[1], self.sizes[2]],
            chosen: Vec::new(),
            best: Vec::new(),
        };
        // Greedy incumbent to seed pruning.
        search.greedy_seed();
        search.run(0);

        let matching = Matching3 { edge_ids: search.best.iter().copied().collect() };
        debug_assert!(matching.validate(self).is_ok());
        Ok((matching.edge_ids.len(), matching))
    }

    /// Exact minimum vertex cover. Branches on an uncovered shape (one of
    /// its three vertices must join the cover), pruned by a greedy disjoint
    /// packing lower bound; the search space is the set of edge-incident
    /// vertices, capped by the budget.
    pub fn tau_exact(&self, budget: &Budget) -> Result<(usize, Cover)> {
        let degrees = self.degrees();
        let incident: usize =
            degrees.iter().map(|d| d.iter().filter(|&&x| x > 0).count()).sum();
        if incident > budget.max_cover_vertices {
            return Err(Error::resource(format!(
                "{incident} edge-incident vertices exceed the cover cap {}",
                budget.max_cover_vertices
            )));
        }
        let shapes: Vec<[u32; 3]> = self.shapes().into_keys().collect();

        // Vertices of a greedy maximal matching cover every edge.
        let mut incumbent: Vec<TriVertex> = Vec::new();
        {
            let mut used: [BTreeSet<u32>; 3] = Default::default();
            for e in &shapes {
                if (0..3).all(|c| !used[c].contains(&e[c])) {
                    for c in 0..3 {
                        used[c].insert(e[c]);
                        incumbent.push(TriVertex::new(TriClass::from_index(c), e[c]));
                    }
                }
            }
        }

        let mut search = CoverSearch { shapes, chosen: Vec::new(), best: incumbent };
        search.run();

        let cover = Cover { vertices: search.best.iter().copied().collect() };
        debug_assert!(cover.validate(self).is_ok());
        Ok((cover.vertices.len(), cover))
    }
}

struct MatchingSearch {
    shapes: Vec<([u32; 3], HEdgeId)>,
    used: [Vec<bool>; 3],
    free: [usize; 3],
    chosen: Vec<HEdgeId>,
    best: Vec<HEdgeId>,
}

impl MatchingSearch {
    fn greedy_seed(&mut self) {
        let mut used: [BTreeSet<u32>; 3] = Default::default();
        for (e, id) in &self.shapes {
            if (0..3).all(|c| !used[c].contains(&e[c])) {
                for c in 0..3 {
                    used[c].insert(e[c]);
                }
                self.best.push(*id);
            }
        }
    }

    fn run(&mut self, idx: usize) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if idx == self.shapes.len() {
            return;
        }
        let remaining = self.shapes.len() - idx;
        let headroom = remaining.min(*self.free.iter().min().unwrap());
        if self.chosen.len() + headroom <= self.best.len() {
            return;
        }
        let (e, id) = self.shapes[idx];
        let available = (0..3).all(|c| !self.used[c][e[c] as usize]);
        if available {
            for c in 0..3 {
                self.used[c][e[c] as usize] = true;
                self.free[c] -= 1;
            }
            self.chosen.push(id);
            self.run(idx + 1);
            self.chosen.pop();
            for c in 0..3 {
                self.used[c][e[c] as usize] = false;
                self.free[c] += 1;
            }
        }
        self.run(idx + 1);
    }
}

struct CoverSearch {
    shapes: Vec<[u32; 3]>,
    chosen: Vec<TriVertex>,
    best: Vec<TriVertex>,
}

impl CoverSearch {
    fn covered(&self, e: &[u32; 3]) -> bool {
        self.chosen
            .iter()
            .any(|v| e[v.class.index()] == v.index)
    }

    /// Greedy disjoint packing of uncovered shapes; each needs its own
    /// cover vertex, so the packing size lower-bounds the remaining cost.
    fn packing_bound(&self) -> usize {
        let mut used: [BTreeSet<u32>; 3] = Default::default();
        let mut count = 0;
        for e in &self.shapes {
            if !self.covered(e) && (0..3).all(|c| !used[c].contains(&e[c])) {
                for c in 0..3 {
                    used[c].insert(e[c]);
                }
                count += 1;
            }
        }
        count
    }

    fn run(&mut self) {
        if self.chosen.len() + self.packing_bound() >= self.best.len() {
            return;
        }
        let uncovered = self.shapes.iter().find(|e| !self.covered(e)).copied();
        match uncovered {
            None => {
                self.best = self.chosen.clone();
            }
            Some(e) => {
                for c in 0..3 {
                    self.chosen.push(TriVertex::new(TriClass::from_index(c), e[c]));
                    self.run();
                    self.chosen.pop();
                }
            }
        }
    }
}
