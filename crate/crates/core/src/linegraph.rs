//! Subgraphs of the line graph of a bipartite multigraph.
//!
//! Vertices of a [`LineSubgraph`] are edge instances of the host graph;
//! its adjacencies are a subset of the intersecting pairs (J-adjacency
//! implies intersection, never the converse). Deletion removes one
//! adjacency; explosion removes both endpoints of an adjacency together
//! with all their J-neighbours.
//!
//! The explosion sequence drives a line subgraph down to the empty graph by
//! alternating reductions (deleting decouplable adjacencies) with typed
//! explosions, emitting a replayable certificate whose explosion count
//! lower-bounds eta.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipartite::{BEdgeId, BipartiteMultigraph};
use crate::error::{Error, Result};
use crate::homology::AdjGraph;
use crate::structure::find_c4_components;
use crate::topology::{EtaEval, EtaValue};

/// An adjacency of the line graph: an unordered pair of edge ids,
/// normalized so the smaller id comes first.
pub type Adjacency = (BEdgeId, BEdgeId);

fn normalize(a: BEdgeId, b: BEdgeId) -> Adjacency {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSubgraph<'g> {
    host: &'g BipartiteMultigraph,
    vertices: BTreeSet<BEdgeId>,
    adjacencies: BTreeSet<Adjacency>,
}

fn edges_intersect(host: &BipartiteMultigraph, a: BEdgeId, b: BEdgeId) -> bool {
    let ea = host.edges()[a.index()];
    let eb = host.edges()[b.index()];
    ea.0 == eb.0 || ea.1 == eb.1
}

impl<'g> LineSubgraph<'g> {
    /// The full line graph: all edge instances, all intersecting pairs.
    /// Parallel edges intersect (in both endpoints) and are adjacent.
    pub fn full_line(host: &'g BipartiteMultigraph) -> LineSubgraph<'g> {
        let m = host.edge_count();
        let vertices: BTreeSet<BEdgeId> = (0..m as u32).map(BEdgeId).collect();
        let mut adjacencies = BTreeSet::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if edges_intersect(host, BEdgeId(i as u32), BEdgeId(j as u32)) {
                    adjacencies.insert((BEdgeId(i as u32), BEdgeId(j as u32)));
                }
            }
        }
        LineSubgraph { host, vertices, adjacencies }
    }

    pub fn new(
        host: &'g BipartiteMultigraph,
        vertices: BTreeSet<BEdgeId>,
        adjacencies: BTreeSet<Adjacency>,
    ) -> Result<LineSubgraph<'g>> {
        if let Some(id) = vertices.iter().find(|id| id.index() >= host.edge_count()) {
            return Err(Error::input(format!("vertex id {} is not a host edge", id.0)));
        }
        let mut normalized = BTreeSet::new();
        for &(a, b) in &adjacencies {
            if a == b {
                return Err(Error::input(format!("adjacency loops on id {}", a.0)));
            }
            if !vertices.contains(&a) || !vertices.contains(&b) {
                return Err(Error::input(format!(
                    "adjacency ({},{}) leaves the vertex set",
                    a.0, b.0
                )));
            }
            if !edges_intersect(host, a, b) {
                return Err(Error::input(format!(
                    "edges {} and {} do not intersect in the host",
                    a.0, b.0
                )));
            }
            normalized.insert(normalize(a, b));
        }
        Ok(LineSubgraph { host, vertices, adjacencies: normalized })
    }

    pub fn host(&self) -> &'g BipartiteMultigraph {
        self.host
    }

    pub fn vertices(&self) -> &BTreeSet<BEdgeId> {
        &self.vertices
    }

    pub fn adjacencies(&self) -> &BTreeSet<Adjacency> {
        &self.adjacencies
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// The host graph restricted to this subgraph's vertex ids, keeping all
    /// host vertices.
    pub fn g_of(&self) -> BipartiteMultigraph {
        self.host.restrict_to_edges(&self.vertices)
    }

    /// Matching number of `G_J`.
    pub fn nu_of_g(&self) -> usize {
        self.g_of().nu_with_witness().0
    }

    pub fn delete(&self, adjacency: Adjacency) -> Result<LineSubgraph<'g>> {
        let adjacency = normalize(adjacency.0, adjacency.1);
        if !self.adjacencies.contains(&adjacency) {
            return Err(Error::input(format!(
                "adjacency ({},{}) not present",
                adjacency.0 .0, adjacency.1 .0
            )));
        }
        let mut adjacencies = self.adjacencies.clone();
        adjacencies.remove(&adjacency);
        Ok(LineSubgraph { host: self.host, vertices: self.vertices.clone(), adjacencies })
    }

    /// Removes both endpoints of the adjacency and every id J-adjacent to
    /// either, along with all incident adjacencies.
    pub fn explode(&self, adjacency: Adjacency) -> Result<LineSubgraph<'g>> {
        let (a, b) = normalize(adjacency.0, adjacency.1);
        if !self.adjacencies.contains(&(a, b)) {
            return Err(Error::input(format!("adjacency ({},{}) not present", a.0, b.0)));
        }
        let mut doomed: BTreeSet<BEdgeId> = [a, b].into_iter().collect();
        for &(x, y) in &self.adjacencies {
            if x == a || x == b {
                doomed.insert(y);
            }
            if y == a || y == b {
                doomed.insert(x);
            }
        }
        let vertices: BTreeSet<BEdgeId> =
            self.vertices.difference(&doomed).copied().collect();
        let adjacencies: BTreeSet<Adjacency> = self
            .adjacencies
            .iter()
            .filter(|(x, y)| vertices.contains(x) && vertices.contains(y))
            .copied()
            .collect();
        Ok(LineSubgraph { host: self.host, vertices, adjacencies })
    }

    /// View as a plain graph for topology, with the label table mapping
    /// positions back to edge ids.
    pub fn as_adj_graph(&self) -> (AdjGraph, Vec<BEdgeId>) {
        let labels: Vec<BEdgeId> = self.vertices.iter().copied().collect();
        let pos = |id: &BEdgeId| labels.binary_search(id).expect("vertex present");
        let edges: Vec<(usize, usize)> =
            self.adjacencies.iter().map(|(a, b)| (pos(a), pos(b))).collect();
        let g = AdjGraph::new(labels.len(), &edges).expect("line subgraph fits complex limits");
        (g, labels)
    }

    pub fn eta_value(&self, eval: &dyn EtaEval) -> Result<EtaValue> {
        eval.eta(&self.as_adj_graph().0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ExplosionType {
    Type1,
    Type2,
    Type3,
    Untyped,
}

/// Classification evidence for one explodable pair.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PairClassification {
    pub kind: ExplosionType,
    /// Matching-number and vertex drops of the single explosion.
    pub nu_drop: usize,
    pub vertex_drop: usize,
    /// Type-3 evidence: the witnessed second pair in the canonical
    /// reduction of `J * me`, with the joint drops relative to `J`.
    pub follow_up: Option<FollowUp>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FollowUp {
    pub pair: Adjacency,
    pub total_nu_drop: usize,
    pub total_vertex_drop: usize,
}

/// Classifies an adjacency by the drops its explosion causes. Types are
/// tried cheapest matching-number cost first; the type-3 test reduces the
/// exploded graph canonically (deleting decouplable adjacencies in
/// ascending id order) and searches it for a qualifying second pair.
pub fn classify_pair(
    j: &LineSubgraph,
    adjacency: Adjacency,
    r: usize,
    eval: &dyn EtaEval,
) -> Result<PairClassification> {
    if r < 2 {
        return Err(Error::input("pair classification needs r >= 2"));
    }
    let nu_before = j.nu_of_g();
    let v_before = j.vertex_count();
    let exploded = j.explode(adjacency)?;
    let nu_drop = nu_before - exploded.nu_of_g();
    let vertex_drop = v_before - exploded.vertex_count();

    let type1_vertex_budget = 3 * r - 2;
    let type2_vertex_budget = 2 * r - 1;
    if nu_drop <= 1 && vertex_drop <= type1_vertex_budget {
        return Ok(PairClassification {
            kind: ExplosionType::Type1,
            nu_drop,
            vertex_drop,
            follow_up: None,
        });
    }
    if nu_drop <= 2 && vertex_drop <= type2_vertex_budget {
        return Ok(PairClassification {
            kind: ExplosionType::Type2,
            nu_drop,
            vertex_drop,
            follow_up: None,
        });
    }
    let (reduced, _) = reduce(&exploded, eval)?;
    if let Some(follow_up) = find_follow_up(&reduced, nu_before, v_before, r)? {
        return Ok(PairClassification {
            kind: ExplosionType::Type3,
            nu_drop,
            vertex_drop,
            follow_up: Some(follow_up),
        });
    }
    Ok(PairClassification { kind: ExplosionType::Untyped, nu_drop, vertex_drop, follow_up: None })
}

/// First adjacency of the reduced graph whose explosion keeps the joint
/// drops within the type-3 budget. Every adjacency of a reduced graph is
/// explodable, so only the drop bounds need checking.
fn find_follow_up(
    reduced: &LineSubgraph,
    nu_start: usize,
    v_start: usize,
    r: usize,
) -> Result<Option<FollowUp>> {
    for &pair in reduced.adjacencies() {
        let after = reduced.explode(pair)?;
        let total_nu_drop = nu_start - after.nu_of_g();
        let total_vertex_drop = v_start - after.vertex_count();
        if total_nu_drop <= 3 && total_vertex_drop <= 6 * r - 5 {
            return Ok(Some(FollowUp { pair, total_nu_drop, total_vertex_drop }));
        }
    }
    Ok(None)
}

/// Re-runs a type-3 classification under `k` randomized reduction orders.
/// The guarantee is order-independent, so any order failing to produce a
/// qualifying pair indicates a bug and comes back as a dichotomy error.
pub fn classify_pair_checked(
    j: &LineSubgraph,
    adjacency: Adjacency,
    r: usize,
    eval: &dyn EtaEval,
    k: usize,
    seed: u64,
) -> Result<PairClassification> {
    let classification = classify_pair(j, adjacency, r, eval)?;
    if classification.kind == ExplosionType::Type3 {
        let exploded = j.explode(adjacency)?;
        let nu_before = j.nu_of_g();
        let v_before = j.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for round in 0..k {
            let reduced = reduce_with_rng(&exploded, eval, &mut rng)?;
            if find_follow_up(&reduced, nu_before, v_before, r)?.is_none() {
                return Err(Error::Dichotomy(format!(
                    "type-3 pair lost its follow-up under random reduction order {round}"
                )));
            }
        }
    }
    Ok(classification)
}

/// Deletes decouplable adjacencies, lowest pair first, until none remain.
/// Returns the reduced subgraph and the deletion chain; the vertex set is
/// untouched and eta never increases along the chain.
pub fn reduce<'g>(
    j: &LineSubgraph<'g>,
    eval: &dyn EtaEval,
) -> Result<(LineSubgraph<'g>, Vec<Adjacency>)> {
    reduce_ordered(j, eval, &mut None)
}

fn reduce_with_rng<'g>(
    j: &LineSubgraph<'g>,
    eval: &dyn EtaEval,
    rng: &mut ChaCha8Rng,
) -> Result<LineSubgraph<'g>> {
    let mut rng = Some(rng);
    let (reduced, _) = reduce_ordered(j, eval, &mut rng)?;
    Ok(reduced)
}

fn reduce_ordered<'g>(
    j: &LineSubgraph<'g>,
    eval: &dyn EtaEval,
    rng: &mut Option<&mut ChaCha8Rng>,
) -> Result<(LineSubgraph<'g>, Vec<Adjacency>)> {
    let mut cur = j.clone();
    let mut deleted = Vec::new();
    let mut eta_cur = cur.eta_value(eval)?;
    loop {
        let mut candidates: Vec<Adjacency> = cur.adjacencies().iter().copied().collect();
        if let Some(rng) = rng.as_deref_mut() {
            shuffle(&mut candidates, rng);
        }
        let mut progressed = false;
        for pair in candidates {
            let next = cur.delete(pair)?;
            // Against an infinite current value every deletion decouples;
            // either way the tracked eta must follow the surviving graph.
            let accepted = if eta_cur.is_infinite() {
                Some(next.eta_value(eval)?)
            } else {
                let eta_next = next.eta_value(eval)?;
                match eta_next.le(&eta_cur) {
                    Some(true) => Some(eta_next),
                    Some(false) => None,
                    None => return Err(Error::EtaUnresolved { cap: eval.cap() }),
                }
            };
            if let Some(eta_next) = accepted {
                deleted.push(pair);
                cur = next;
                eta_cur = eta_next;
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    Ok((cur, deleted))
}

fn shuffle(v: &mut [Adjacency], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StepKind {
    Type1,
    Type2,
    /// The opening explosion of a type-3 pair.
    Type3First,
    /// The mandatory second explosion after reducing a type-3 explosion.
    Type3Second,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Step {
    Delete { pair: (u32, u32) },
    Explode { pair: (u32, u32), kind: StepKind, nu_drop: usize, vertex_drop: usize },
}

/// Replayable log of one explosion sequence, together with the bound it
/// certifies: eta of the starting subgraph is at least `t`, or infinite
/// when the sequence strands isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExplosionCertificate {
    pub r: usize,
    pub initial_vertices: usize,
    pub initial_nu: usize,
    pub steps: Vec<Step>,
    pub x1: usize,
    pub x2: usize,
    pub x3: usize,
    pub t: usize,
    pub final_vertices: usize,
    pub certified: EtaValue,
}

/// Runs the certified explosion sequence on the full line graph of `g`.
///
/// Preconditions: `r >= 2`, max degree of `g` at most `r`, and no r-regular
/// C4 component (violations are input errors). A reduced nonempty subgraph
/// without a typed pair is reported as [`Error::NoTypedPair`], never
/// swallowed.
pub fn explosion_sequence(
    g: &BipartiteMultigraph,
    r: usize,
    eval: &dyn EtaEval,
) -> Result<ExplosionCertificate> {
    if r < 2 {
        return Err(Error::input("explosion sequences need r >= 2"));
    }
    if g.max_degree() > r {
        return Err(Error::input(format!(
            "max degree {} exceeds r = {r}",
            g.max_degree()
        )));
    }
    if !find_c4_components(g, r).is_empty() {
        return Err(Error::input(format!("host contains an {r}-regular C4 component")));
    }

    let initial_nu = g.nu_with_witness().0;
    let mut steps = Vec::new();
    let (mut x1, mut x2, mut x3) = (0usize, 0usize, 0usize);
    let mut cur = LineSubgraph::full_line(g);
    let initial_vertices = cur.vertex_count();

    loop {
        let (reduced, deleted) = reduce(&cur, eval)?;
        steps.extend(deleted.iter().map(|&(a, b)| Step::Delete { pair: (a.0, b.0) }));
        cur = reduced;
        if cur.adjacencies().is_empty() {
            break;
        }

        let pick = select_typed_pair(&cur, r, eval)?;
        let Some((pair, classification)) = pick else {
            return Err(Error::NoTypedPair {
                r,
                vertices: cur.vertex_count(),
                adjacencies: cur.adjacencies().len(),
            });
        };

        match classification.kind {
            ExplosionType::Type1 | ExplosionType::Type2 => {
                let kind = if classification.kind == ExplosionType::Type1 {
                    x1 += 1;
                    StepKind::Type1
                } else {
                    x2 += 1;
                    StepKind::Type2
                };
                steps.push(Step::Explode {
                    pair: (pair.0 .0, pair.1 .0),
                    kind,
                    nu_drop: classification.nu_drop,
                    vertex_drop: classification.vertex_drop,
                });
                cur = cur.explode(pair)?;
            }
            ExplosionType::Type3 => {
                x3 += 1;
                steps.push(Step::Explode {
                    pair: (pair.0 .0, pair.1 .0),
                    kind: StepKind::Type3First,
                    nu_drop: classification.nu_drop,
                    vertex_drop: classification.vertex_drop,
                });
                let exploded = cur.explode(pair)?;
                let (reduced, deleted) = reduce(&exploded, eval)?;
                steps.extend(
                    deleted.iter().map(|&(a, b)| Step::Delete { pair: (a.0, b.0) }),
                );
                let follow = classification.follow_up.expect("type 3 carries a follow-up");
                // The canonical reduction here replays the one classify
                // simulated, so the witnessed pair is present.
                let after = reduced.explode(follow.pair)?;
                steps.push(Step::Explode {
                    pair: (follow.pair.0 .0, follow.pair.1 .0),
                    kind: StepKind::Type3Second,
                    nu_drop: follow.total_nu_drop - classification.nu_drop,
                    vertex_drop: follow.total_vertex_drop - classification.vertex_drop,
                });
                cur = after;
            }
            ExplosionType::Untyped => unreachable!("selection never yields untyped"),
        }
    }

    let final_vertices = cur.vertex_count();
    let t = x1 + x2 + 2 * x3;
    let certified =
        if final_vertices > 0 { EtaValue::Infinite } else { EtaValue::Finite(t) };
    Ok(ExplosionCertificate {
        r,
        initial_vertices,
        initial_nu,
        steps,
        x1,
        x2,
        x3,
        t,
        final_vertices,
        certified,
    })
}

/// Best typed pair under the preference type 1 > type 2 > type 3, ties by
/// lexicographic adjacency order. Type-3 classification is deferred until
/// no cheaper pair exists.
fn select_typed_pair<'g>(
    j: &LineSubgraph<'g>,
    r: usize,
    eval: &dyn EtaEval,
) -> Result<Option<(Adjacency, PairClassification)>> {
    let nu_before = j.nu_of_g();
    let v_before = j.vertex_count();
    let type1_vertex_budget = 3 * r - 2;
    let type2_vertex_budget = 2 * r - 1;
    let mut measured: Vec<(Adjacency, usize, usize)> = Vec::new();
    for &pair in j.adjacencies() {
        let exploded = j.explode(pair)?;
        let nu_drop = nu_before - exploded.nu_of_g();
        let vertex_drop = v_before - exploded.vertex_count();
        if nu_drop <= 1 && vertex_drop <= type1_vertex_budget {
            return Ok(Some((
                pair,
                PairClassification {
                    kind: ExplosionType::Type1,
                    nu_drop,
                    vertex_drop,
                    follow_up: None,
                },
            )));
        }
        measured.push((pair, nu_drop, vertex_drop));
    }
    for &(pair, nu_drop, vertex_drop) in &measured {
        if nu_drop <= 2 && vertex_drop <= type2_vertex_budget {
            return Ok(Some((
                pair,
                PairClassification {
                    kind: ExplosionType::Type2,
                    nu_drop,
                    vertex_drop,
                    follow_up: None,
                },
            )));
        }
    }
    for &(pair, nu_drop, vertex_drop) in &measured {
        let exploded = j.explode(pair)?;
        let (reduced, _) = reduce(&exploded, eval)?;
        if let Some(follow_up) = find_follow_up(&reduced, nu_before, v_before, r)? {
            return Ok(Some((
                pair,
                PairClassification {
                    kind: ExplosionType::Type3,
                    nu_drop,
                    vertex_drop,
                    follow_up: Some(follow_up),
                },
            )));
        }
    }
    Ok(None)
}

/// Like [`verify_certificate`], additionally re-deriving the eta facts:
/// every deletion must be decouplable and every explosion explodable at
/// its point in the replay, so the certified drop in eta is sound.
pub fn verify_certificate_eta(
    g: &BipartiteMultigraph,
    cert: &ExplosionCertificate,
    eval: &dyn EtaEval,
) -> Result<()> {
    verify_certificate(g, cert)?;
    let mut cur = LineSubgraph::full_line(g);
    let mut eta_cur = cur.eta_value(eval)?;
    for step in &cert.steps {
        let pair = match *step {
            Step::Delete { pair } | Step::Explode { pair, .. } => {
                (BEdgeId(pair.0), BEdgeId(pair.1))
            }
        };
        match step {
            Step::Delete { .. } => {
                let next = cur.delete(pair)?;
                let eta_next = next.eta_value(eval)?;
                if !eta_cur.is_infinite() {
                    let decouplable = eta_next
                        .le(&eta_cur)
                        .ok_or(Error::EtaUnresolved { cap: eval.cap() })?;
                    if !decouplable {
                        return Err(Error::input("replayed deletion is not decouplable"));
                    }
                }
                cur = next;
                eta_cur = eta_next;
            }
            Step::Explode { .. } => {
                let next = cur.explode(pair)?;
                let eta_next = next.eta_value(eval)?;
                let explodable = eta_next
                    .plus_one()
                    .le(&eta_cur)
                    .ok_or(Error::EtaUnresolved { cap: eval.cap() })?;
                if !explodable {
                    return Err(Error::input("replayed explosion is not explodable"));
                }
                cur = next;
                eta_cur = eta_next;
            }
        }
    }
    Ok(())
}

/// Structurally replays a certificate against its host: every step must
/// apply, per-step drops must respect the type budgets, and when the final
/// graph is vertexless the aggregate constraints must cover the initial
/// matching number and vertex count.
pub fn verify_certificate(g: &BipartiteMultigraph, cert: &ExplosionCertificate) -> Result<()> {
    let r = cert.r;
    let mut cur = LineSubgraph::full_line(g);
    if cur.vertex_count() != cert.initial_vertices {
        return Err(Error::input("certificate initial vertex count mismatch"));
    }
    let mut pending_type3: Option<(usize, usize)> = None;
    let (mut x1, mut x2, mut x3first, mut x3second) = (0usize, 0usize, 0usize, 0usize);
    for step in &cert.steps {
        match *step {
            Step::Delete { pair } => {
                cur = cur.delete((BEdgeId(pair.0), BEdgeId(pair.1)))?;
            }
            Step::Explode { pair, kind, .. } => {
                let nu_before = cur.nu_of_g();
                let v_before = cur.vertex_count();
                let next = cur.explode((BEdgeId(pair.0), BEdgeId(pair.1)))?;
                let nu_drop = nu_before - next.nu_of_g();
                let vertex_drop = v_before - next.vertex_count();
                match kind {
                    StepKind::Type1 => {
                        if pending_type3.is_some() {
                            return Err(Error::input("type-3 follow-up missing"));
                        }
                        if nu_drop > 1 || vertex_drop > 3 * r - 2 {
                            return Err(Error::input("type-1 drop budget exceeded"));
                        }
                        x1 += 1;
                    }
                    StepKind::Type2 => {
                        if pending_type3.is_some() {
                            return Err(Error::input("type-3 follow-up missing"));
                        }
                        if nu_drop > 2 || vertex_drop > 2 * r - 1 {
                            return Err(Error::input("type-2 drop budget exceeded"));
                        }
                        x2 += 1;
                    }
                    StepKind::Type3First => {
                        if pending_type3.is_some() {
                            return Err(Error::input("nested type-3 explosions"));
                        }
                        pending_type3 = Some((nu_before, v_before));
                        x3first += 1;
                    }
                    StepKind::Type3Second => {
                        let Some((nu_start, v_start)) = pending_type3.take() else {
                            return Err(Error::input("dangling type-3 follow-up"));
                        };
                        let total_nu = nu_start - next.nu_of_g();
                        let total_v = v_start - next.vertex_count();
                        if total_nu > 3 || total_v > 6 * r - 5 {
                            return Err(Error::input("type-3 joint budget exceeded"));
                        }
                        x3second += 1;
                    }
                }
                cur = next;
            }
        }
    }
    if pending_type3.is_some() {
        return Err(Error::input("certificate ends inside a type-3 pair"));
    }
    if !cur.adjacencies().is_empty() {
        return Err(Error::input("replay did not reach an edgeless graph"));
    }
    if cur.vertex_count() != cert.final_vertices {
        return Err(Error::input("final vertex count mismatch"));
    }
    if (x1, x2, x3first, x3second) != (cert.x1, cert.x2, cert.x3, cert.x3) {
        return Err(Error::input("explosion counts mismatch"));
    }
    if cert.t != cert.x1 + cert.x2 + 2 * cert.x3 {
        return Err(Error::input("t is not x1 + x2 + 2*x3"));
    }
    let expected = if cert.final_vertices > 0 {
        EtaValue::Infinite
    } else {
        EtaValue::Finite(cert.t)
    };
    if cert.certified != expected {
        return Err(Error::input("certified bound inconsistent with the final state"));
    }
    if cert.final_vertices == 0 {
        if cert.x1 + 2 * cert.x2 + 3 * cert.x3 < cert.initial_nu {
            return Err(Error::input("matching constraint violated"));
        }
        let capacity =
            (3 * r - 2) * cert.x1 + (2 * r - 1) * cert.x2 + (6 * r - 5) * cert.x3;
        if capacity < cert.initial_vertices {
            return Err(Error::input("vertex constraint violated"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::lp_min;
    use crate::topology::HomologyEta;

    fn path4() -> BipartiteMultigraph {
        // Path with 4 vertices and 3 edges; classes alternate.
        BipartiteMultigraph::new(2, 2, alloc::vec![(0, 0), (1, 0), (1, 1)]).unwrap()
    }

    fn cycle10() -> BipartiteMultigraph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, i));
            edges.push(((i + 1) % 5, i));
        }
        BipartiteMultigraph::new(5, 5, edges).unwrap()
    }

    #[test]
    fn full_line_counts() {
        let p4 = path4();
        let l = LineSubgraph::full_line(&p4);
        assert_eq!((l.vertex_count(), l.adjacencies().len()), (3, 2));

        let c10 = cycle10();
        let l = LineSubgraph::full_line(&c10);
        assert_eq!((l.vertex_count(), l.adjacencies().len()), (10, 10));

        let parallel = BipartiteMultigraph::new(1, 1, alloc::vec![(0, 0), (0, 0)]).unwrap();
        let l = LineSubgraph::full_line(&parallel);
        assert_eq!((l.vertex_count(), l.adjacencies().len()), (2, 1));
    }

    #[test]
    fn g_of_round_trips() {
        let c10 = cycle10();
        let l = LineSubgraph::full_line(&c10);
        assert_eq!(l.g_of().edges(), c10.edges());

        let empty = LineSubgraph::new(&c10, BTreeSet::new(), BTreeSet::new()).unwrap();
        assert_eq!(empty.g_of().edge_count(), 0);
        assert_eq!(empty.g_of().class_sizes(), (5, 5));

        let single: BTreeSet<BEdgeId> = [BEdgeId(3)].into_iter().collect();
        let one = LineSubgraph::new(&c10, single, BTreeSet::new()).unwrap();
        assert_eq!(one.g_of().nu_with_witness().0, 1);
    }

    #[test]
    fn delete_is_checked_and_shrinks() {
        let p4 = path4();
        let l = LineSubgraph::full_line(&p4);
        let pair = (BEdgeId(0), BEdgeId(1));
        let smaller = l.delete(pair).unwrap();
        assert_eq!(smaller.adjacencies().len(), 1);
        assert_eq!(smaller.vertex_count(), 3);
        assert!(smaller.delete(pair).is_err(), "double deletion must fail");
    }

    #[test]
    fn explode_removes_closed_neighbourhood() {
        let p4 = path4();
        let l = LineSubgraph::full_line(&p4);
        let all_gone = l.explode((BEdgeId(0), BEdgeId(1))).unwrap();
        assert_eq!(all_gone.vertex_count(), 0);

        // Without the (e1, e2) adjacency, e2 survives the explosion.
        let without = l.delete((BEdgeId(1), BEdgeId(2))).unwrap();
        let rest = without.explode((BEdgeId(0), BEdgeId(1))).unwrap();
        assert_eq!(rest.vertices().iter().copied().collect::<Vec<_>>(), [BEdgeId(2)]);
    }

    #[test]
    fn parallel_pair_vertex_drop_is_bounded() {
        // Parallel pair in a max-degree-3 graph: drop <= 2r - 2.
        let g = BipartiteMultigraph::new(2, 2, alloc::vec![(0, 0), (0, 0), (0, 1), (1, 0)])
            .unwrap();
        let l = LineSubgraph::full_line(&g);
        let after = l.explode((BEdgeId(0), BEdgeId(1))).unwrap();
        let drop = l.vertex_count() - after.vertex_count();
        assert!(drop <= 2 * 3 - 2, "drop {drop} exceeds 2r-2");
    }

    #[test]
    fn classify_single_matched_edge_is_type1() {
        // Exploding (e0, e1) destroys one edge of the maximum matching
        // {e0, e2}: a type-1 pair.
        let g = BipartiteMultigraph::new(2, 3, alloc::vec![(0, 0), (0, 1), (1, 2)]).unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let c = classify_pair(&l, (BEdgeId(0), BEdgeId(1)), 2, &eval).unwrap();
        assert_eq!(c.kind, ExplosionType::Type1);
        assert_eq!(c.nu_drop, 1);
    }

    #[test]
    fn classify_parallel_pair_is_type2() {
        // Exploding the parallel pair kills both matched edges but only
        // 2r - 2 vertices.
        let g = BipartiteMultigraph::new(2, 2, alloc::vec![(0, 0), (0, 0), (0, 1), (1, 0)])
            .unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let c = classify_pair(&l, (BEdgeId(0), BEdgeId(1)), 3, &eval).unwrap();
        assert_eq!(c.kind, ExplosionType::Type2);
        assert_eq!(c.nu_drop, 2);
        assert_eq!(c.vertex_drop, 4);
        let checked =
            classify_pair_checked(&l, (BEdgeId(0), BEdgeId(1)), 3, &eval, 3, 7).unwrap();
        assert_eq!(checked, c);
    }

    #[test]
    fn reduce_edgeless_is_identity() {
        let g = BipartiteMultigraph::new(2, 2, alloc::vec![(0, 0), (1, 1)]).unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let (reduced, deleted) = reduce(&l, &eval).unwrap();
        assert!(deleted.is_empty());
        assert_eq!(reduced, l);
    }

    #[test]
    fn reduce_strips_everything_next_to_an_isolated_vertex() {
        // P3 plus a disjoint edge: the disjoint edge is an isolated line
        // vertex, eta is infinite, every adjacency decouples.
        let g = BipartiteMultigraph::new(3, 2, alloc::vec![(0, 0), (1, 0), (2, 1)]).unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let (reduced, deleted) = reduce(&l, &eval).unwrap();
        assert_eq!(deleted.len(), 1);
        assert!(reduced.adjacencies().is_empty());
        assert_eq!(reduced.vertex_count(), 3);
    }

    #[test]
    fn reduced_graphs_have_no_decouplable_adjacency() {
        let c10 = cycle10();
        let l = LineSubgraph::full_line(&c10);
        let eval = HomologyEta::rational();
        let (reduced, deleted) = reduce(&l, &eval).unwrap();
        assert!(deleted.is_empty(), "the line graph of the 10-cycle is reduced");
        let (g, _) = reduced.as_adj_graph();
        let eta = eval.eta(&g).unwrap();
        for (u, v) in g.edges() {
            let after = eval.eta(&g.delete_edge(u, v).unwrap()).unwrap();
            assert_eq!(after.le(&eta), Some(false), "({u},{v}) is decouplable");
        }
    }

    #[test]
    fn sequence_on_path_is_tight() {
        let p4 = path4();
        let eval = HomologyEta::rational();
        let cert = explosion_sequence(&p4, 2, &eval).unwrap();
        assert_eq!(cert.certified, EtaValue::Finite(1));
        assert_eq!((cert.x1, cert.x2, cert.x3), (0, 1, 0));
        verify_certificate(&p4, &cert).unwrap();
        let lp = lp_min(cert.initial_nu, cert.initial_vertices, 2).unwrap();
        assert!(crate::bounds::Value::from_usize(cert.t).ge(lp.t_rat()).unwrap());
    }

    #[test]
    fn sequence_on_ten_cycle_is_tight() {
        let c10 = cycle10();
        let eval = HomologyEta::rational();
        let cert = explosion_sequence(&c10, 2, &eval).unwrap();
        assert_eq!(cert.certified, EtaValue::Finite(3));
        assert_eq!(cert.t, 3);
        verify_certificate(&c10, &cert).unwrap();
    }

    #[test]
    fn sequence_on_single_edge_reports_infinity() {
        let g = BipartiteMultigraph::new(1, 1, alloc::vec![(0, 0)]).unwrap();
        let eval = HomologyEta::rational();
        let cert = explosion_sequence(&g, 2, &eval).unwrap();
        assert_eq!(cert.certified, EtaValue::Infinite);
        assert_eq!(cert.t, 0);
        assert_eq!(cert.final_vertices, 1);
        verify_certificate(&g, &cert).unwrap();
    }

    #[test]
    fn sequence_preconditions() {
        let p4 = path4();
        let eval = HomologyEta::rational();
        assert!(explosion_sequence(&p4, 1, &eval).is_err());

        // A 2-regular C4 component blocks the sequence.
        let c4 = BipartiteMultigraph::new(2, 2, alloc::vec![(0, 0), (0, 1), (1, 0), (1, 1)])
            .unwrap();
        assert!(matches!(explosion_sequence(&c4, 2, &eval), Err(Error::Input(_))));
    }
}

#[cfg(test)]
mod type3_tests {
    use super::*;
    use crate::topology::HomologyEta;

    #[test]
    fn ten_cycle_adjacencies_classify_as_type3() {
        // Exploding an adjacency of the 10-cycle's line graph drops nu by 2
        // but 4 vertices, too many for type 2 at r = 2; the canonical
        // reduction of the remains yields a second pair within the joint
        // type-3 budget.
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, i));
            edges.push(((i + 1) % 5, i));
        }
        let g = BipartiteMultigraph::new(5, 5, edges).unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let pair = *l.adjacencies().iter().next().unwrap();
        let c = classify_pair(&l, pair, 2, &eval).unwrap();
        assert_eq!(c.kind, ExplosionType::Type3);
        assert_eq!((c.nu_drop, c.vertex_drop), (2, 4));
        let follow = c.follow_up.expect("type 3 carries its witness");
        assert!(follow.total_nu_drop <= 3);
        assert!(follow.total_vertex_drop <= 6 * 2 - 5);

        // The randomized reduction re-check agrees.
        let checked = classify_pair_checked(&l, pair, 2, &eval, 3, 99).unwrap();
        assert_eq!(checked.kind, ExplosionType::Type3);
    }

    #[test]
    fn classification_rejects_small_r() {
        let g = BipartiteMultigraph::new(1, 1, alloc::vec![(0, 0), (0, 0)]).unwrap();
        let l = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let pair = (BEdgeId(0), BEdgeId(1));
        assert!(classify_pair(&l, pair, 1, &eval).is_err());
    }
}
