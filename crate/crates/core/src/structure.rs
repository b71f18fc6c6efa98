//! Detectors for the special structures that drive the stability analysis:
//! r-regular C4 components of links, components and sub-copies built from
//! the truncated Fano plane, the host-two-disjoint-edges dichotomy, and the
//! good/bad vertex bookkeeping.
//!
//! All patterns have at most six vertices and a fixed shape, so matching is
//! by direct structural checks rather than general isomorphism search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bipartite::{BEdgeId, BipartiteMultigraph};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hypergraph::{HEdgeId, TriClass, TriComponent, TriVertex, Tripartite3Graph};

/// An r-regular C4 component: four vertices, underlying simple graph a
/// 4-cycle, every vertex of degree r. Side `s` of `side_edges` holds the
/// instances on the pair `(left[s / 2], right[s % 2])`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct C4Report {
    pub left: [u32; 2],
    pub right: [u32; 2],
    pub r: usize,
    pub side_edges: [Vec<BEdgeId>; 4],
}

impl C4Report {
    pub fn all_edge_ids(&self) -> Vec<BEdgeId> {
        let mut ids: Vec<BEdgeId> =
            self.side_edges.iter().flat_map(|s| s.iter().copied()).collect();
        ids.sort_unstable();
        ids
    }

    /// The component's vertices as vertices of the hypergraph classes the
    /// link was taken over.
    pub fn tri_vertices(&self, classes: (TriClass, TriClass)) -> Vec<TriVertex> {
        let mut out: Vec<TriVertex> = self
            .left
            .iter()
            .map(|&i| TriVertex::new(classes.0, i))
            .chain(self.right.iter().map(|&i| TriVertex::new(classes.1, i)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// A component (or hosted sub-multigraph) equal to `(r/2) . F`: six
/// vertices, four pairwise-one-intersecting shapes of equal multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FanoReport {
    /// Two vertex indices per class, ascending.
    pub vertices: [[u32; 2]; 3],
    /// The four shapes with the instance ids realizing them.
    pub shapes: Vec<([u32; 3], Vec<HEdgeId>)>,
    /// Common multiplicity of the shapes, r / 2.
    pub multiplicity: usize,
}

fn c4_of_component(
    g: &BipartiteMultigraph,
    left: &[u32],
    right: &[u32],
    edges: &[BEdgeId],
    r: usize,
) -> Option<C4Report> {
    if left.len() != 2 || right.len() != 2 {
        return None;
    }
    let mut side_edges: [Vec<BEdgeId>; 4] = Default::default();
    let mut degree: BTreeMap<(bool, u32), usize> = BTreeMap::new();
    for &id in edges {
        let (u, v) = g.edges()[id.index()];
        let li = left.iter().position(|&x| x == u)?;
        let ri = right.iter().position(|&x| x == v)?;
        side_edges[li * 2 + ri].push(id);
        *degree.entry((false, u)).or_default() += 1;
        *degree.entry((true, v)).or_default() += 1;
    }
    if side_edges.iter().any(|s| s.is_empty()) {
        return None;
    }
    if degree.len() != 4 || degree.values().any(|&d| d != r) {
        return None;
    }
    Some(C4Report { left: [left[0], left[1]], right: [right[0], right[1]], r, side_edges })
}

/// All components of `g` that are r-regular C4s.
pub fn find_c4_components(g: &BipartiteMultigraph, r: usize) -> Vec<C4Report> {
    g.components()
        .into_iter()
        .filter_map(|comp| c4_of_component(g, &comp.left, &comp.right, &comp.edges, r))
        .collect()
}

/// Hypergraph edges hosted by a C4 of the link over `class`: the preimage
/// of its link edges under the id trace. The report is revalidated against
/// a fresh link; a stale one is an input error.
pub fn hosted_edges(
    h: &Tripartite3Graph,
    class: TriClass,
    c4: &C4Report,
) -> Result<Vec<HEdgeId>> {
    let link = h.link_of_class(class);
    let fresh = find_c4_components(&link.graph, c4.r);
    let matching = fresh
        .iter()
        .find(|cand| cand.left == c4.left && cand.right == c4.right)
        .ok_or_else(|| {
            Error::input(format!(
                "stale C4 report: no {}-regular C4 component on ({:?},{:?})",
                c4.r, c4.left, c4.right
            ))
        })?;
    if matching != c4 {
        return Err(Error::input("stale C4 report: side structure changed"));
    }
    let mut hosted: Vec<HEdgeId> =
        c4.all_edge_ids().iter().map(|id| link.hosts[id.index()]).collect();
    hosted.sort_unstable();
    Ok(hosted)
}

/// Checks whether the given edge instances form a copy of `(r/2) . F`:
/// exactly four shapes of multiplicity r/2 on six vertices, two per class,
/// every vertex in two shapes, every two shapes sharing exactly one vertex.
pub fn match_half_fano(
    h: &Tripartite3Graph,
    edge_ids: &[HEdgeId],
    r: usize,
) -> Option<FanoReport> {
    if !r.is_multiple_of(2) || edge_ids.len() != 2 * r {
        return None;
    }
    let mut shapes: BTreeMap<[u32; 3], Vec<HEdgeId>> = BTreeMap::new();
    for &id in edge_ids {
        shapes.entry(h.edges()[id.index()]).or_default().push(id);
    }
    if shapes.len() != 4 || shapes.values().any(|ids| ids.len() != r / 2) {
        return None;
    }
    let keys: Vec<[u32; 3]> = shapes.keys().copied().collect();
    let mut classes: [BTreeSet<u32>; 3] = Default::default();
    let mut appearances: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for shape in &keys {
        for c in 0..3 {
            classes[c].insert(shape[c]);
            *appearances.entry((c, shape[c])).or_default() += 1;
        }
    }
    if classes.iter().any(|s| s.len() != 2) {
        return None;
    }
    if appearances.values().any(|&k| k != 2) {
        return None;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let common = (0..3).filter(|&c| keys[i][c] == keys[j][c]).count();
            if common != 1 {
                return None;
            }
        }
    }
    let vertices = [
        to_pair(&classes[0]),
        to_pair(&classes[1]),
        to_pair(&classes[2]),
    ];
    Some(FanoReport {
        vertices,
        shapes: shapes.into_iter().collect(),
        multiplicity: r / 2,
    })
}

fn to_pair(s: &BTreeSet<u32>) -> [u32; 2] {
    let mut it = s.iter();
    [*it.next().unwrap(), *it.next().unwrap()]
}

/// All components of `h` that are copies of `(r/2) . F`. Empty for odd r,
/// for which the pattern does not exist.
pub fn find_fano_components(h: &Tripartite3Graph, r: usize) -> Vec<FanoReport> {
    if !r.is_multiple_of(2) {
        return Vec::new();
    }
    h.components()
        .into_iter()
        .filter_map(|comp| {
            if comp.vertices.iter().any(|v| v.len() != 2) {
                return None;
            }
            match_half_fano(h, &comp.edges, r)
        })
        .collect()
}

/// Searches for a copy of `(r/2) . F` as a sub-multigraph (not necessarily
/// a component): an exhaustive scan over class-respecting vertex sextuples,
/// looking for four shapes in the Fano pattern with multiplicity at least
/// r/2 each. Feasible because the pattern has only six vertices.
pub fn find_half_fano_subcopy(h: &Tripartite3Graph, r: usize) -> Option<FanoReport> {
    if !r.is_multiple_of(2) || r < 2 {
        return None;
    }
    let need = r / 2;
    let shape_table = h.shapes();
    let sizes = h.class_sizes();
    let pairs = |n: usize| -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                out.push((i, j));
            }
        }
        out
    };
    for &(a0, a1) in &pairs(sizes[0]) {
        for &(b0, b1) in &pairs(sizes[1]) {
            for &(c0, c1) in &pairs(sizes[2]) {
                // Shapes inside the sextuple with multiplicity >= r/2.
                let mut candidates: Vec<([u32; 3], &Vec<HEdgeId>)> = Vec::new();
                for sa in [a0, a1] {
                    for sb in [b0, b1] {
                        for sc in [c0, c1] {
                            if let Some(ids) = shape_table.get(&[sa, sb, sc]) {
                                if ids.len() >= need {
                                    candidates.push(([sa, sb, sc], ids));
                                }
                            }
                        }
                    }
                }
                if candidates.len() < 4 {
                    continue;
                }
                for q in subsets_of_four(candidates.len()) {
                    let chosen: Vec<&([u32; 3], &Vec<HEdgeId>)> =
                        q.iter().map(|&i| &candidates[i]).collect();
                    let ids: Vec<HEdgeId> = chosen
                        .iter()
                        .flat_map(|(_, ids)| ids.iter().take(need).copied())
                        .collect();
                    if let Some(report) = match_half_fano(h, &ids, r) {
                        return Some(report);
                    }
                }
            }
        }
    }
    None
}

fn subsets_of_four(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Outcome of the hosting dichotomy for one C4 of a link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum C4Dichotomy {
    TwoDisjoint { pair: (HEdgeId, HEdgeId) },
    FormsHalfFano(FanoReport),
}

/// Either the C4 hosts two disjoint hypergraph edges, or its hosted edges
/// form a copy of `(r/2) . F`. Requires every touched vertex outside the
/// link class to have degree at most r; failure of both branches is a
/// theory discrepancy surfaced as an error.
pub fn c4_dichotomy(
    h: &Tripartite3Graph,
    class: TriClass,
    c4: &C4Report,
) -> Result<C4Dichotomy> {
    let (lc, rc) = class.others();
    for (cls, indices) in [(lc, c4.left), (rc, c4.right)] {
        for &i in &indices {
            let d = h.degree(TriVertex::new(cls, i))?;
            if d > c4.r {
                return Err(Error::input(format!(
                    "vertex {i} of class {cls:?} has degree {d} > r = {}",
                    c4.r
                )));
            }
        }
    }
    let hosted = hosted_edges(h, class, c4)?;
    for (a_pos, &a) in hosted.iter().enumerate() {
        for &b in &hosted[a_pos + 1..] {
            let ea = h.edges()[a.index()];
            let eb = h.edges()[b.index()];
            if (0..3).all(|c| ea[c] != eb[c]) {
                return Ok(C4Dichotomy::TwoDisjoint { pair: (a, b) });
            }
        }
    }
    if !c4.r.is_multiple_of(2) {
        return Err(Error::Dichotomy(format!(
            "C4 with r = {} hosts no two disjoint edges, and (r/2).F needs even r",
            c4.r
        )));
    }
    match match_half_fano(h, &hosted, c4.r) {
        Some(report) => Ok(C4Dichotomy::FormsHalfFano(report)),
        None => Err(Error::Dichotomy(
            "C4 hosts no two disjoint edges yet its edges do not form (r/2).F".into(),
        )),
    }
}

/// Classification of a component against the two perfect-matching shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PmClass {
    /// Two vertices per class and a matching of size two.
    Type1,
    /// Four vertices per class and a matching of size four.
    Type2,
    Other,
}

pub fn classify_pm_component(
    h: &Tripartite3Graph,
    comp: &TriComponent,
    budget: &Budget,
) -> Result<PmClass> {
    let sizes: Vec<usize> = comp.vertices.iter().map(|v| v.len()).collect();
    let target = match sizes.as_slice() {
        [2, 2, 2] => 2,
        [4, 4, 4] => 4,
        _ => return Ok(PmClass::Other),
    };
    let (sub, _) = h.component_subgraph(comp);
    let (nu, _) = sub.nu_exact(budget)?;
    Ok(match (target, nu) {
        (2, 2) => PmClass::Type1,
        (4, 4) => PmClass::Type2,
        _ => PmClass::Other,
    })
}

/// Per-vertex badness flags: a vertex is `V_i`-bad when some link over
/// class i places it in a component that is not an r-regular C4.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BadnessTable {
    bad: BTreeSet<(TriVertex, TriClass)>,
}

impl BadnessTable {
    pub fn is_class_bad(&self, v: TriVertex, over: TriClass) -> bool {
        self.bad.contains(&(v, over))
    }

    pub fn is_bad(&self, v: TriVertex) -> bool {
        TriClass::ALL.iter().any(|&c| self.bad.contains(&(v, c)))
    }

    pub fn is_good(&self, v: TriVertex) -> bool {
        !self.is_bad(v)
    }

    pub fn bad_vertices(&self) -> BTreeSet<TriVertex> {
        self.bad.iter().map(|&(v, _)| v).collect()
    }

    pub fn entries(&self) -> &BTreeSet<(TriVertex, TriClass)> {
        &self.bad
    }
}

/// Badness flags from the three whole-class links.
pub fn badness(h: &Tripartite3Graph, r: usize) -> BadnessTable {
    let mut bad = BTreeSet::new();
    for over in TriClass::ALL {
        let link = h.link_of_class(over);
        let (lc, rc) = link.classes;
        for comp in link.graph.components() {
            if c4_of_component(&link.graph, &comp.left, &comp.right, &comp.edges, r).is_some()
            {
                continue;
            }
            for &i in &comp.left {
                bad.insert((TriVertex::new(lc, i), over));
            }
            for &i in &comp.right {
                bad.insert((TriVertex::new(rc, i), over));
            }
        }
    }
    BadnessTable { bad }
}

/// Splits the C4 components of `lk class` into good ones (no bad vertices)
/// and ruined ones.
pub fn good_c4s(
    h: &Tripartite3Graph,
    class: TriClass,
    r: usize,
) -> (Vec<C4Report>, Vec<C4Report>) {
    let table = badness(h, r);
    let link = h.link_of_class(class);
    let (mut good, mut ruined) = (Vec::new(), Vec::new());
    for c4 in find_c4_components(&link.graph, r) {
        let any_bad =
            c4.tri_vertices(link.classes).iter().any(|&v| table.is_bad(v));
        if any_bad {
            ruined.push(c4);
        } else {
            good.push(c4);
        }
    }
    (good, ruined)
}

/// Result of checking the four-unit structure around a C4 component with
/// exactly one bad vertex.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OneBadVertexCheck {
    pub pass: bool,
    pub details: Vec<String>,
    /// The four unit components as (link class, vertex list) pairs, when
    /// all of them were found.
    pub units: Vec<(TriClass, Vec<TriVertex>)>,
}

/// Verifies the companion structure forced around an r-regular C4
/// component of `lk over` whose only bad vertex is `V_k`-bad and sits in
/// `V_j`: two C4 components of `lk V_j` with two bad vertices each meet it
/// in its `V_k` vertices, one C4 component of `lk V_k` with exactly one
/// bad vertex meets it in its good `V_j` vertex, and no C4 component
/// outside these four touches any of them.
pub fn check_one_bad_vertex_structure(
    h: &Tripartite3Graph,
    r: usize,
    over: TriClass,
    c4: &C4Report,
) -> Result<OneBadVertexCheck> {
    let table = badness(h, r);
    let link = h.link_of_class(over);
    let verts = c4.tri_vertices(link.classes);
    let bad_in_c4: Vec<TriVertex> =
        verts.iter().copied().filter(|&v| table.is_bad(v)).collect();
    let [bad_vertex] = bad_in_c4.as_slice() else {
        return Err(Error::input(format!(
            "hypothesis violated: C4 has {} bad vertices, need exactly 1",
            bad_in_c4.len()
        )));
    };
    let j = bad_vertex.class;
    let k = *TriClass::ALL
        .iter()
        .find(|&&c| c != over && c != j)
        .expect("three classes");
    if !table.is_class_bad(*bad_vertex, k) {
        return Err(Error::input(format!(
            "hypothesis violated: the bad vertex is not {k:?}-bad"
        )));
    }

    let mut details = Vec::new();
    let mut units: Vec<(TriClass, Vec<TriVertex>)> = vec![(over, verts.clone())];
    let mut pass = true;

    // C4 components per link, with badness profile.
    let link_c4s = |cls: TriClass| -> Vec<(Vec<TriVertex>, Vec<TriVertex>)> {
        let link = h.link_of_class(cls);
        find_c4_components(&link.graph, r)
            .into_iter()
            .map(|rep| {
                let vs = rep.tri_vertices(link.classes);
                let bad = vs.iter().copied().filter(|&v| table.is_bad(v)).collect();
                (vs, bad)
            })
            .collect()
    };

    // Two C4 components of lk V_j through the c4's V_k vertices.
    let in_vk: Vec<TriVertex> = verts.iter().copied().filter(|v| v.class == k).collect();
    let j_c4s = link_c4s(j);
    let mut found_j: Vec<Vec<TriVertex>> = Vec::new();
    for u in &in_vk {
        match j_c4s.iter().find(|(vs, _)| vs.contains(u)) {
            None => {
                pass = false;
                details.push(format!("no C4 component of lk {j:?} contains {u:?}"));
            }
            Some((vs, bad)) => {
                let i_bad = bad.iter().filter(|&&v| table.is_class_bad(v, over)).count();
                let k_bad = bad.iter().filter(|&&v| table.is_class_bad(v, k)).count();
                if bad.len() != 2 || i_bad != 1 || k_bad != 1 {
                    pass = false;
                    details.push(format!(
                        "companion C4 of lk {j:?} at {u:?} has badness profile {:?}",
                        bad
                    ));
                } else {
                    found_j.push(vs.clone());
                    units.push((j, vs.clone()));
                }
            }
        }
    }
    if found_j.len() == 2 && found_j[0] == found_j[1] {
        pass = false;
        details.push(format!("the two lk {j:?} companions coincide"));
    }

    // One C4 component of lk V_k through the good V_j vertex of the c4.
    let good_j: Vec<TriVertex> = verts
        .iter()
        .copied()
        .filter(|v| v.class == j && *v != *bad_vertex)
        .collect();
    let k_c4s = link_c4s(k);
    let mut third_found = false;
    for u in &good_j {
        if let Some((vs, bad)) = k_c4s.iter().find(|(vs, _)| vs.contains(u)) {
            let i_bad_in_j: Vec<TriVertex> = bad
                .iter()
                .copied()
                .filter(|&v| v.class == j && table.is_class_bad(v, over))
                .collect();
            if bad.len() == 1 && i_bad_in_j.len() == 1 {
                units.push((k, vs.clone()));
                third_found = true;
            } else {
                pass = false;
                details.push(format!(
                    "companion C4 of lk {k:?} at {u:?} has badness profile {:?}",
                    bad
                ));
            }
        }
    }
    if !third_found && pass {
        pass = false;
        details.push(format!("no C4 component of lk {k:?} meets the good {j:?} vertex"));
    }

    // Isolation: no C4 component outside the four shares a vertex.
    if pass {
        let unit_vertices: BTreeSet<TriVertex> =
            units.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
        for cls in TriClass::ALL {
            for (vs, _) in link_c4s(cls) {
                let is_unit = units.iter().any(|(uc, uv)| *uc == cls && *uv == vs);
                if !is_unit && vs.iter().any(|v| unit_vertices.contains(v)) {
                    pass = false;
                    details.push(format!(
                        "outside C4 component of lk {cls:?} on {vs:?} touches the unit"
                    ));
                }
            }
        }
    }

    if pass {
        details.push("four-unit structure verified".into());
    }
    Ok(OneBadVertexCheck { pass, details, units })
}
