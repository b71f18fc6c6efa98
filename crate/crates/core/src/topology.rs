//! The connectivity parameter eta of independence complexes.
//!
//! `eta(J)` is the least `d` such that the independence complex of `J` has
//! nonvanishing reduced homology in dimension `d - 1`; a vertexless graph
//! scores 0 and a graph whose complex is acyclic through its top dimension
//! scores infinity. An isolated vertex makes the complex a cone, so that
//! case short-circuits to infinity before any matrix work.
//!
//! Values carry their uncertainty: `AtLeast(cap)` records that homology
//! vanishes in every dimension up to `cap - 2` but the complex is too tall
//! to have been checked completely. Comparisons against such values that
//! cannot be decided surface as hard errors instead of guesses.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, AdjGraph, Coeff, HomologySummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EtaValue {
    Finite(usize),
    Infinite,
    /// At least this much; the exact value was not resolved under the cap.
    AtLeast(usize),
}

impl EtaValue {
    /// Decides `self <= other` where `AtLeast(c)` stands for the interval
    /// `[c, oo]`. `None` means the recorded information cannot decide.
    pub fn le(&self, other: &EtaValue) -> Option<bool> {
        use EtaValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(a <= b),
            (Finite(_), Infinite) => Some(true),
            (Infinite, Finite(_)) => Some(false),
            (Infinite, Infinite) => Some(true),
            (AtLeast(_), Infinite) => Some(true),
            (Finite(a), AtLeast(c)) => {
                if a <= c {
                    Some(true)
                } else {
                    None
                }
            }
            (AtLeast(c), Finite(b)) => {
                if c > b {
                    Some(false)
                } else {
                    None
                }
            }
            (Infinite, AtLeast(_)) | (AtLeast(_), AtLeast(_)) => None,
        }
    }

    pub fn plus_one(&self) -> EtaValue {
        match self {
            EtaValue::Finite(k) => EtaValue::Finite(k + 1),
            EtaValue::Infinite => EtaValue::Infinite,
            EtaValue::AtLeast(c) => EtaValue::AtLeast(c + 1),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, EtaValue::Infinite)
    }

    /// Total-order minimum; callers must only use it on resolved values.
    pub fn min_resolved(self, other: EtaValue) -> EtaValue {
        use EtaValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), Infinite) | (Infinite, Finite(a)) => Finite(a),
            (Infinite, Infinite) => Infinite,
            _ => panic!("min_resolved on an unresolved eta value"),
        }
    }

    /// Total-order maximum for resolved values.
    pub fn max_resolved(self, other: EtaValue) -> EtaValue {
        use EtaValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.max(b)),
            (Finite(_), Infinite) | (Infinite, Finite(_)) | (Infinite, Infinite) => Infinite,
            _ => panic!("max_resolved on an unresolved eta value"),
        }
    }
}

/// Full diagnostic output of one eta evaluation.
#[derive(Debug, Clone)]
pub struct EtaReport {
    pub value: EtaValue,
    /// Reduced Betti numbers from dimension -1 upward.
    pub reduced_betti: Vec<usize>,
    /// Dimensions with torsion (integer coefficients only), with the
    /// nontrivial invariant factors rendered as decimal strings.
    pub torsion: Vec<(isize, Vec<alloc::string::String>)>,
    pub top_dim: isize,
}

/// eta of the independence complex of `g` under the given coefficients.
pub fn eta(g: &AdjGraph, coeff: Coeff, cap: usize, budget: &Budget) -> Result<EtaValue> {
    if g.vertex_count() > budget.max_eta_vertices {
        return Err(Error::resource(alloc::format!(
            "{} vertices exceed the eta cap {}",
            g.vertex_count(),
            budget.max_eta_vertices
        )));
    }
    if g.vertex_count() == 0 {
        return Ok(EtaValue::Finite(0));
    }
    if g.has_isolated_vertex() {
        return Ok(EtaValue::Infinite);
    }
    let summary = reduced_homology(g, coeff, cap as isize - 2, budget)?;
    Ok(value_from_summary(&summary, cap))
}

fn value_from_summary(summary: &HomologySummary, cap: usize) -> EtaValue {
    match summary.first_nonvanishing() {
        Some(d) => EtaValue::Finite((d + 1) as usize),
        None => {
            if summary.dim_limit >= summary.top_dim {
                // Every dimension the complex has was checked and vanishes,
                // which is exactly what infinite homological eta means.
                EtaValue::Infinite
            } else {
                EtaValue::AtLeast(cap)
            }
        }
    }
}

/// Like [`eta`] but keeps the Betti vector and torsion for diagnostics.
pub fn eta_report(g: &AdjGraph, coeff: Coeff, cap: usize, budget: &Budget) -> Result<EtaReport> {
    if g.vertex_count() > budget.max_eta_vertices {
        return Err(Error::resource(alloc::format!(
            "{} vertices exceed the eta cap {}",
            g.vertex_count(),
            budget.max_eta_vertices
        )));
    }
    if g.vertex_count() == 0 {
        return Ok(EtaReport {
            value: EtaValue::Finite(0),
            reduced_betti: alloc::vec![1],
            torsion: Vec::new(),
            top_dim: -1,
        });
    }
    let summary = reduced_homology(g, coeff, cap as isize - 2, budget)?;
    let value = if g.has_isolated_vertex() {
        EtaValue::Infinite
    } else {
        value_from_summary(&summary, cap)
    };
    let torsion = summary
        .torsion
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_empty())
        .map(|(i, t)| {
            (i as isize - 1, t.iter().map(|f| alloc::format!("{f}")).collect())
        })
        .collect();
    Ok(EtaReport { value, reduced_betti: summary.betti.clone(), torsion, top_dim: summary.top_dim })
}

/// An injectable eta evaluator, so the homology fast path and the
/// brute-force oracle are interchangeable wherever eta drives a decision.
pub trait EtaEval {
    fn eta(&self, g: &AdjGraph) -> Result<EtaValue>;
    fn cap(&self) -> usize;
}

/// The standard evaluator: homological eta under chosen coefficients.
#[derive(Debug, Clone)]
pub struct HomologyEta {
    pub coeff: Coeff,
    pub budget: Budget,
}

impl HomologyEta {
    pub fn rational() -> Self {
        HomologyEta { coeff: Coeff::Rational, budget: Budget::default() }
    }
}

impl EtaEval for HomologyEta {
    fn eta(&self, g: &AdjGraph) -> Result<EtaValue> {
        eta(g, self.coeff, self.budget.eta_cap, &self.budget)
    }

    fn cap(&self) -> usize {
        self.budget.eta_cap
    }
}

/// Whether deleting the edge does not raise eta.
pub fn is_decouplable(g: &AdjGraph, u: usize, v: usize, eval: &dyn EtaEval) -> Result<bool> {
    let whole = eval.eta(g)?;
    is_decouplable_given(g, u, v, &whole, eval)
}

pub(crate) fn is_decouplable_given(
    g: &AdjGraph,
    u: usize,
    v: usize,
    eta_g: &EtaValue,
    eval: &dyn EtaEval,
) -> Result<bool> {
    if matches!(eta_g, EtaValue::Infinite) {
        return Ok(true);
    }
    let deleted = eval.eta(&g.delete_edge(u, v)?)?;
    deleted.le(eta_g).ok_or(Error::EtaUnresolved { cap: eval.cap() })
}

/// Whether exploding the edge drops eta by at least one.
pub fn is_explodable(g: &AdjGraph, u: usize, v: usize, eval: &dyn EtaEval) -> Result<bool> {
    let whole = eval.eta(g)?;
    let exploded = eval.eta(&g.explode_edge(u, v)?)?;
    exploded.plus_one().le(&whole).ok_or(Error::EtaUnresolved { cap: eval.cap() })
}

/// Certified lower bound on eta by exhaustively playing the
/// delete-or-explode recursion: the score of a position is the best over
/// edges of `min(score(J - e), score(J * e) + 1)`, grounded at 0 for the
/// empty graph and infinity once an isolated vertex appears.
pub fn meshulam_game_lb(g: &AdjGraph, budget: &Budget) -> Result<EtaValue> {
    if g.vertex_count() > budget.max_game_vertices {
        return Err(Error::resource(alloc::format!(
            "{} vertices exceed the game cap {}",
            g.vertex_count(),
            budget.max_game_vertices
        )));
    }
    let edges = g.edges();
    if edges.len() > 64 {
        return Err(Error::resource("more than 64 edges in the game"));
    }
    let mut ctx = GameCtx { edges, memo: BTreeMap::new() };
    let full_v: u32 =
        if g.vertex_count() == 32 { u32::MAX } else { (1u32 << g.vertex_count()) - 1 };
    let full_e: u64 =
        if ctx.edges.len() == 64 { u64::MAX } else { (1u64 << ctx.edges.len()) - 1 };
    ctx.solve(full_v, full_e)
}

struct GameCtx {
    edges: Vec<(usize, usize)>,
    memo: BTreeMap<(u32, u64), EtaValue>,
}

impl GameCtx {
    fn normalize(&self, vmask: u32, emask: u64) -> u64 {
        let mut out = 0u64;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if emask >> i & 1 == 1 && vmask >> u & 1 == 1 && vmask >> v & 1 == 1 {
                out |= 1 << i;
            }
        }
        out
    }

    fn solve(&mut self, vmask: u32, emask: u64) -> Result<EtaValue> {
        let emask = self.normalize(vmask, emask);
        if vmask == 0 {
            return Ok(EtaValue::Finite(0));
        }
        if let Some(hit) = self.memo.get(&(vmask, emask)) {
            return Ok(*hit);
        }
        if self.memo.len() > 1_000_000 {
            return Err(Error::resource("game memo table exceeded 1e6 states"));
        }
        // Covered vertices under the present edges.
        let edges = self.edges.clone();
        let mut covered = 0u32;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if emask >> i & 1 == 1 {
                covered |= (1 << u) | (1 << v);
            }
        }
        let result = if covered != vmask {
            EtaValue::Infinite
        } else {
            let mut best = EtaValue::Finite(0);
            for (i, &(u, v)) in edges.iter().enumerate() {
                if emask >> i & 1 == 0 {
                    continue;
                }
                let deleted = self.solve(vmask, emask & !(1 << i))?;
                let mut doomed = (1u32 << u) | (1 << v);
                for (j, &(a, b)) in edges.iter().enumerate() {
                    if emask >> j & 1 == 1 {
                        if a == u || a == v {
                            doomed |= 1 << b;
                        }
                        if b == u || b == v {
                            doomed |= 1 << a;
                        }
                    }
                }
                let exploded = self.solve(vmask & !doomed, emask)?;
                best = best.max_resolved(deleted.min_resolved(exploded.plus_one()));
            }
            best
        };
        self.memo.insert((vmask, emask), result);
        Ok(result)
    }
}
