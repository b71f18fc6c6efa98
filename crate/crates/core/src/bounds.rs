//! Machine-checkable verifiers for the matching bounds, the exact linear
//! program behind the explosion-sequence analysis, and the Hall-defect
//! subset scan.
//!
//! All arithmetic on verification paths is exact rational. A report passes
//! iff `lhs >= rhs`; sides are oriented per bound so that this holds
//! whenever the underlying statement does. A failing report on an instance
//! that satisfies the preconditions contradicts a theorem and is treated as
//! release-blocking by the test suite.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bipartite::BipartiteMultigraph;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hypergraph::{TriClass, TriVertex, Tripartite3Graph};
use crate::linegraph::LineSubgraph;
use crate::structure::{
    badness, c4_dichotomy, check_one_bad_vertex_structure, classify_pm_component,
    find_c4_components, find_fano_components, C4Dichotomy, PmClass,
};
use crate::topology::{EtaEval, EtaValue};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// An exact extended value: a rational, infinity, or a certified lower
/// bound left unresolved by the eta cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rat(Rat),
    Infinite,
    AtLeast(usize),
}

impl Value {
    pub fn from_eta(e: &EtaValue) -> Value {
        match e {
            EtaValue::Finite(k) => Value::Rat(rat(*k as i64)),
            EtaValue::Infinite => Value::Infinite,
            EtaValue::AtLeast(c) => Value::AtLeast(*c),
        }
    }

    pub fn from_usize(u: usize) -> Value {
        Value::Rat(rat(u as i64))
    }

    /// Decides `self >= rhs`; an `AtLeast` below the bound is unresolvable
    /// and demands a larger cap.
    pub fn ge(&self, rhs: &Rat) -> Result<bool> {
        match self {
            Value::Rat(a) => Ok(a >= rhs),
            Value::Infinite => Ok(true),
            Value::AtLeast(c) => {
                if &rat(*c as i64) >= rhs {
                    Ok(true)
                } else {
                    Err(Error::EtaUnresolved { cap: *c })
                }
            }
        }
    }
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Value::Rat(r) => s.serialize_str(&format!("{r}")),
            Value::Infinite => s.serialize_str("inf"),
            Value::AtLeast(c) => s.serialize_str(&format!(">={c}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(untagged)]
pub enum Witness {
    Int(i64),
    Text(String),
    Ids(Vec<u32>),
    List(Vec<Witness>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct Context {
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub epsilon: Option<Value>,
}

/// One machine-checked inequality: `pass` iff `lhs >= rhs` exactly.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
    pub witnesses: BTreeMap<String, Witness>,
    pub context: Context,
}

impl BoundReport {
    fn new(name: &str, lhs: Value, rhs: Rat, context: Context) -> Result<BoundReport> {
        let pass = lhs.ge(&rhs)?;
        Ok(BoundReport {
            name: name.to_string(),
            lhs,
            rhs: Value::Rat(rhs),
            pass,
            witnesses: BTreeMap::new(),
            context,
        })
    }

    fn with(mut self, key: &str, w: Witness) -> BoundReport {
        self.witnesses.insert(key.to_string(), w);
        self
    }
}

/// The instance-derived slack: eps = max(0, 2 nu / n - 1), zero for empty
/// classes. Theorems hold for any eps at least this, so the derived value
/// is the sharpest checkable claim.
pub fn epsilon_of(nu: usize, n: usize) -> Rat {
    if n == 0 {
        return Rat::zero();
    }
    let e = rat_frac(2 * nu as i64, n as i64) - Rat::one();
    if e.is_negative() {
        Rat::zero()
    } else {
        e
    }
}

/// Exact optimum of: minimize `x1 + x2 + 2 x3` subject to
/// `x1 + 2 x2 + 3 x3 >= nu`, `(3r-2) x1 + (2r-1) x2 + (6r-5) x3 >= v`,
/// `x >= 0`, by enumerating basic feasible points; the dual optimum comes
/// from the same enumeration on the two-variable dual and the gap is
/// asserted to vanish.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LpSolution {
    pub x1: Value,
    pub x2: Value,
    pub x3: Value,
    pub t: Value,
    pub y1: Value,
    pub y2: Value,
    pub duality_gap: Value,
    /// Whether `(2r-1) nu / 2 <= v <= (6r-5) nu / 3`, the regime where the
    /// optimum sits at the closed-form point with `x1 = 0`.
    pub closed_form_applies: bool,
}

impl LpSolution {
    pub fn t_rat(&self) -> &Rat {
        match &self.t {
            Value::Rat(r) => r,
            _ => unreachable!("LP objective is always rational"),
        }
    }

    pub fn x_rats(&self) -> [&Rat; 3] {
        match (&self.x1, &self.x2, &self.x3) {
            (Value::Rat(a), Value::Rat(b), Value::Rat(c)) => [a, b, c],
            _ => unreachable!("LP point is always rational"),
        }
    }
}

pub fn lp_min(nu: usize, v: usize, r: usize) -> Result<LpSolution> {
    if r < 2 {
        return Err(Error::input("the explosion LP needs r >= 2"));
    }
    let nu_r = rat(nu as i64);
    let v_r = rat(v as i64);
    let c1 = [rat(1), rat(2), rat(3)];
    let c2 = [rat(3 * r as i64 - 2), rat(2 * r as i64 - 1), rat(6 * r as i64 - 5)];
    let objective = [rat(1), rat(1), rat(2)];

    // Primal: rows are the two coverage constraints and three sign
    // constraints; vertices are triples of active rows.
    let rows: [([Rat; 3], Rat); 5] = [
        (c1.clone(), nu_r.clone()),
        (c2.clone(), v_r.clone()),
        ([rat(1), rat(0), rat(0)], rat(0)),
        ([rat(0), rat(1), rat(0)], rat(0)),
        ([rat(0), rat(0), rat(1)], rat(0)),
    ];
    let mut best: Option<([Rat; 3], Rat)> = None;
    for a in 0..5 {
        for b in (a + 1)..5 {
            for c in (b + 1)..5 {
                let m = [rows[a].0.clone(), rows[b].0.clone(), rows[c].0.clone()];
                let rhs = [rows[a].1.clone(), rows[b].1.clone(), rows[c].1.clone()];
                let Some(x) = solve3(&m, &rhs) else { continue };
                let feasible = rows.iter().all(|(coef, bound)| {
                    dot3(coef, &x) >= *bound
                }) && x.iter().all(|xi| !xi.is_negative());
                if !feasible {
                    continue;
                }
                let t = dot3(&objective, &x);
                let better = match &best {
                    None => true,
                    Some((bx, bt)) => {
                        t < *bt || (t == *bt && lex_less(&x, bx))
                    }
                };
                if better {
                    best = Some((x, t));
                }
            }
        }
    }
    let (x, t) = best.expect("the primal is always feasible");

    // Dual: maximize nu y1 + v y2 under three coverage columns and signs.
    let drows: [([Rat; 2], Rat); 5] = [
        ([rat(1), c2[0].clone()], rat(1)),
        ([rat(2), c2[1].clone()], rat(1)),
        ([rat(3), c2[2].clone()], rat(2)),
        ([rat(1), rat(0)], rat(0)),
        ([rat(0), rat(1)], rat(0)),
    ];
    let mut dual_best: Option<([Rat; 2], Rat)> = None;
    for a in 0..5 {
        for b in (a + 1)..5 {
            let m = [drows[a].0.clone(), drows[b].0.clone()];
            let rhs = [drows[a].1.clone(), drows[b].1.clone()];
            let Some(y) = solve2(&m, &rhs) else { continue };
            if y.iter().any(|yi| yi.is_negative()) {
                continue;
            }
            let feasible = drows[..3]
                .iter()
                .all(|(coef, bound)| &(coef[0].clone() * &y[0]) + coef[1].clone() * &y[1] <= *bound);
            if !feasible {
                continue;
            }
            let val = nu_r.clone() * &y[0] + v_r.clone() * &y[1];
            let better = match &dual_best {
                None => true,
                Some((_, bv)) => val > *bv,
            };
            if better {
                dual_best = Some((y, val));
            }
        }
    }
    let (y, dual_val) = dual_best.expect("the dual is always feasible (origin)");
    let gap = t.clone() - dual_val;
    assert!(gap.is_zero(), "LP duality gap must vanish");

    // The analysis' dual point is feasible for every r >= 2.
    let denom = rat(6 * r as i64 - 7);
    let paper_y = [rat(2 * r as i64 - 3) / denom.clone(), Rat::one() / denom.clone()];
    for (coef, bound) in &drows[..3] {
        let lhs = coef[0].clone() * &paper_y[0] + coef[1].clone() * &paper_y[1];
        assert!(lhs <= *bound, "closed-form dual point must stay feasible");
    }

    let lo = rat_frac(2 * r as i64 - 1, 2) * &nu_r;
    let hi = rat_frac(6 * r as i64 - 5, 3) * &nu_r;
    let closed_form_applies = v_r >= lo && v_r <= hi;
    if closed_form_applies {
        let closed = (rat(2 * r as i64 - 3) * &nu_r + v_r.clone()) / denom;
        assert!(t == closed, "optimum must match the closed form in its regime");
        assert!(x[0].is_zero(), "closed-form optimum has x1 = 0");
    }

    Ok(LpSolution {
        x1: Value::Rat(x[0].clone()),
        x2: Value::Rat(x[1].clone()),
        x3: Value::Rat(x[2].clone()),
        t: Value::Rat(t),
        y1: Value::Rat(y[0].clone()),
        y2: Value::Rat(y[1].clone()),
        duality_gap: Value::Rat(Rat::zero()),
        closed_form_applies,
    })
}

fn dot3(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    a[0].clone() * &b[0] + a[1].clone() * &b[1] + a[2].clone() * &b[2]
}

fn lex_less(a: &[Rat; 3], b: &[Rat; 3]) -> bool {
    for i in 0..3 {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

fn det3(m: &[[Rat; 3]; 3]) -> Rat {
    let mut acc = Rat::zero();
    acc += m[0][0].clone() * (m[1][1].clone() * &m[2][2] - m[1][2].clone() * &m[2][1]);
    acc -= m[0][1].clone() * (m[1][0].clone() * &m[2][2] - m[1][2].clone() * &m[2][0]);
    acc += m[0][2].clone() * (m[1][0].clone() * &m[2][1] - m[1][1].clone() * &m[2][0]);
    acc
}

fn solve3(m: &[[Rat; 3]; 3], rhs: &[Rat; 3]) -> Option<[Rat; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let mut out: [Rat; 3] = [Rat::zero(), Rat::zero(), Rat::zero()];
    for col in 0..3 {
        let mut mc = m.clone();
        for row in 0..3 {
            mc[row][col] = rhs[row].clone();
        }
        out[col] = det3(&mc) / d.clone();
    }
    Some(out)
}

fn solve2(m: &[[Rat; 2]; 2], rhs: &[Rat; 2]) -> Option<[Rat; 2]> {
    let d = m[0][0].clone() * &m[1][1] - m[0][1].clone() * &m[1][0];
    if d.is_zero() {
        return None;
    }
    let x = (rhs[0].clone() * &m[1][1] - m[0][1].clone() * &rhs[1]) / d.clone();
    let y = (m[0][0].clone() * &rhs[1] - rhs[0].clone() * &m[1][0]) / d;
    Some([x, y])
}

/// nu >= n/2 for regular instances of positive degree with equal classes.
pub fn check_regular_matching_bound(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<BoundReport> {
    let sizes = h.class_sizes();
    if r < 1 {
        return Err(Error::input("regularity bound needs r >= 1"));
    }
    if sizes[0] != sizes[1] || sizes[1] != sizes[2] {
        return Err(Error::input(format!("classes must be equal, got {sizes:?}")));
    }
    if !h.is_regular(r) {
        return Err(Error::input(format!("instance is not {r}-regular")));
    }
    let n = sizes[0];
    let (nu, matching) = h.nu_exact(budget)?;
    let report = BoundReport::new(
        "thm-1.2",
        Value::from_usize(nu),
        rat_frac(n as i64, 2),
        Context { r: Some(r), n: Some(n), epsilon: None },
    )?;
    Ok(report.with(
        "matching",
        Witness::Ids(matching.edge_ids.iter().map(|id| id.0).collect()),
    ))
}

/// tau <= 2 nu, reported as `2 nu >= tau`.
pub fn check_cover_vs_matching(h: &Tripartite3Graph, budget: &Budget) -> Result<BoundReport> {
    let (nu, matching) = h.nu_exact(budget)?;
    let (tau, cover) = h.tau_exact(budget)?;
    let report = BoundReport::new(
        "thm-1.3",
        Value::from_usize(2 * nu),
        rat(tau as i64),
        Context::default(),
    )?;
    Ok(report
        .with("nu", Witness::Int(nu as i64))
        .with("tau", Witness::Int(tau as i64))
        .with("matching", Witness::Ids(matching.edge_ids.iter().map(|id| id.0).collect()))
        .with(
            "cover",
            Witness::List(
                cover
                    .vertices
                    .iter()
                    .map(|v| Witness::Text(format!("{:?}{}", v.class, v.index)))
                    .collect(),
            ),
        ))
}

/// The subset of a class with the largest Hall defect
/// `|S| - eta(L(lk S))`, scanned exhaustively.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HallWitness {
    pub class: TriClass,
    pub subset: BTreeSet<u32>,
    pub defect: usize,
}

pub fn hall_witness(
    h: &Tripartite3Graph,
    class: TriClass,
    eval: &dyn EtaEval,
    budget: &Budget,
) -> Result<HallWitness> {
    let n = h.class_sizes()[class.index()];
    if n > budget.max_hall_class {
        return Err(Error::resource(format!(
            "class size {n} exceeds the Hall scan cap {}",
            budget.max_hall_class
        )));
    }
    let mut best: Option<(usize, BTreeSet<u32>)> = None;
    let mut unresolved: Vec<(usize, usize)> = Vec::new(); // (|S| - cap lower bound estimate, cap)
    for mask in 0u64..(1u64 << n) {
        let s: BTreeSet<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
        let link = h.link(class, &s)?;
        let full = LineSubgraph::full_line(&link.graph);
        let eta = full.eta_value(eval)?;
        match eta {
            EtaValue::Finite(k) => {
                if s.len() > k {
                    let defect = s.len() - k;
                    if best.as_ref().is_none_or(|(d, _)| defect > *d) {
                        best = Some((defect, s));
                    }
                }
            }
            EtaValue::Infinite => {}
            EtaValue::AtLeast(c) => {
                if s.len() > c {
                    unresolved.push((s.len() - c, c));
                }
            }
        }
    }
    let (defect, subset) = best.unwrap_or((0, BTreeSet::new()));
    // An unresolved subset could only matter if its ceiling beats the best
    // resolved defect.
    if let Some(&(_, cap)) = unresolved.iter().find(|(bound, _)| *bound > defect) {
        return Err(Error::EtaUnresolved { cap });
    }

    let (nu, _) = h.nu_exact(budget)?;
    if nu + defect < n {
        return Err(Error::Dichotomy(format!(
            "Hall defect {defect} on class {class:?} contradicts nu = {nu}"
        )));
    }
    Ok(HallWitness { class, subset, defect })
}

/// nu >= |class| - defect, the assertable orientation of the hypergraph
/// Hall theorem.
pub fn check_hall_defect(
    h: &Tripartite3Graph,
    class: TriClass,
    eval: &dyn EtaEval,
    budget: &Budget,
) -> Result<BoundReport> {
    let witness = hall_witness(h, class, eval, budget)?;
    let n = h.class_sizes()[class.index()];
    let (nu, _) = h.nu_exact(budget)?;
    let report = BoundReport::new(
        "thm-2.2",
        Value::from_usize(nu),
        rat(n as i64 - witness.defect as i64),
        Context { r: None, n: Some(n), epsilon: None },
    )?;
    Ok(report
        .with("defect", Witness::Int(witness.defect as i64))
        .with("subset", Witness::Ids(witness.subset.iter().copied().collect())))
}

/// eta(J) >= ((2r-3) nu(G_J) + |V(J)|) / (6r-7) over C4-component-free
/// hosts of max degree at most r.
pub fn check_line_connectivity_bound(
    g: &BipartiteMultigraph,
    j: &LineSubgraph,
    r: usize,
    eval: &dyn EtaEval,
) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::input("connectivity bound needs r >= 2"));
    }
    if g.max_degree() > r {
        return Err(Error::input(format!("max degree {} exceeds r = {r}", g.max_degree())));
    }
    if !find_c4_components(g, r).is_empty() {
        return Err(Error::input(format!("host contains an {r}-regular C4 component")));
    }
    let nu = j.nu_of_g();
    let vj = j.vertex_count();
    let rhs = (rat(2 * r as i64 - 3) * rat(nu as i64) + rat(vj as i64))
        / rat(6 * r as i64 - 7);
    let eta = j.eta_value(eval)?;
    let report = BoundReport::new(
        "thm-3.1",
        Value::from_eta(&eta),
        rhs,
        Context { r: Some(r), n: None, epsilon: None },
    )?;
    Ok(report
        .with("nu_gj", Witness::Int(nu as i64))
        .with("vertices", Witness::Int(vj as i64)))
}

/// eta(L(G)) >= ((2r-3) nu + |E| - k) / (6r-7) when G has at most k
/// r-regular C4 components; k is recomputed, never trusted.
pub fn check_line_connectivity_with_c4s(
    g: &BipartiteMultigraph,
    r: usize,
    k: usize,
    eval: &dyn EtaEval,
) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::input("connectivity bound needs r >= 2"));
    }
    if g.max_degree() > r {
        return Err(Error::input(format!("max degree {} exceeds r = {r}", g.max_degree())));
    }
    let actual = find_c4_components(g, r).len();
    if actual > k {
        return Err(Error::input(format!(
            "claimed at most {k} C4 components but found {actual}"
        )));
    }
    let nu = g.nu_with_witness().0;
    let m = g.edge_count();
    let rhs = (rat(2 * r as i64 - 3) * rat(nu as i64) + rat(m as i64) - rat(k as i64))
        / rat(6 * r as i64 - 7);
    let full = LineSubgraph::full_line(g);
    let eta = full.eta_value(eval)?;
    let report = BoundReport::new(
        "cor-3.8",
        Value::from_eta(&eta),
        rhs,
        Context { r: Some(r), n: None, epsilon: None },
    )?;
    Ok(report.with("c4_components", Witness::Int(actual as i64)))
}

/// Fano-component count >= (1 - (22r - 77/3) eps) n/2 for r-regular
/// equal-class instances.
pub fn check_fano_component_stability(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::input("stability bound needs r >= 2"));
    }
    let sizes = h.class_sizes();
    if sizes[0] != sizes[1] || sizes[1] != sizes[2] {
        return Err(Error::input(format!("classes must be equal, got {sizes:?}")));
    }
    if !h.is_regular(r) {
        return Err(Error::input(format!("instance is not {r}-regular")));
    }
    let n = sizes[0];
    let (nu, _) = h.nu_exact(budget)?;
    let eps = epsilon_of(nu, n);
    let count = find_fano_components(h, r).len();
    let coeff = rat_frac(66 * r as i64 - 77, 3);
    let rhs = (Rat::one() - coeff * eps.clone()) * rat_frac(n as i64, 2);
    let report = BoundReport::new(
        "thm-4.1",
        Value::from_usize(count),
        rhs,
        Context { r: Some(r), n: Some(n), epsilon: Some(Value::Rat(eps)) },
    )?;
    Ok(report.with("nu", Witness::Int(nu as i64)))
}

/// Removes highest-id edges at class-A vertices of degree above r until
/// every A-vertex has degree exactly r.
pub fn trim_class_a(h: &Tripartite3Graph, r: usize) -> Tripartite3Graph {
    let degrees = h.degrees();
    let mut over: Vec<usize> = degrees[0].iter().map(|&d| d.saturating_sub(r)).collect();
    let mut keep = vec![true; h.edge_count()];
    for (i, e) in h.edges().iter().enumerate().rev() {
        let a = e[0] as usize;
        if over[a] > 0 {
            keep[i] = false;
            over[a] -= 1;
        }
    }
    let edges: Vec<[u32; 3]> = h
        .edges()
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(e, _)| *e)
        .collect();
    Tripartite3Graph::new(h.class_sizes(), edges).expect("trim keeps indices valid")
}

/// Replaces every component that has a perfect matching by r parallel
/// copies of one of its perfect matchings.
pub fn replace_pm_components(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<Tripartite3Graph> {
    let mut replaced_edges: BTreeSet<usize> = BTreeSet::new();
    let mut new_blocks: Vec<[u32; 3]> = Vec::new();
    for comp in h.components() {
        let s = comp.vertices[0].len();
        if s == 0
            || comp.vertices[1].len() != s
            || comp.vertices[2].len() != s
            || comp.edges.len() < s
        {
            continue;
        }
        let (sub, originals) = h.component_subgraph(&comp);
        let (nu, matching) = sub.nu_exact(budget)?;
        if nu != s {
            continue;
        }
        for id in &comp.edges {
            replaced_edges.insert(id.index());
        }
        for id in &matching.edge_ids {
            let e = sub.edges()[id.index()];
            let original = [
                originals[0][e[0] as usize],
                originals[1][e[1] as usize],
                originals[2][e[2] as usize],
            ];
            for _ in 0..r {
                new_blocks.push(original);
            }
        }
    }
    let mut edges: Vec<[u32; 3]> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !replaced_edges.contains(i))
        .map(|(_, e)| *e)
        .collect();
    edges.extend(new_blocks);
    Tripartite3Graph::new(h.class_sizes(), edges)
}

/// Disjoint-copy stability under the one-sided degree conditions: count
/// after the degree-trim and perfect-matching replacement, against
/// (1 - (72r^2 - 150r + 77) eps) n/2. Reports both counts.
pub fn check_fano_copy_stability(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<(BoundReport, Tripartite3Graph)> {
    check_degree_conditions(h, r)?;
    let n = h.class_sizes()[0];
    let (nu, _) = h.nu_exact(budget)?;
    let eps = epsilon_of(nu, n);
    let trimmed = trim_class_a(h, r);
    let transformed = replace_pm_components(&trimmed, r, budget)?;
    let count = find_fano_components(&transformed, r).len();
    let untransformed_count = find_fano_components(h, r).len();
    let coeff = rat(72 * (r * r) as i64 - 150 * r as i64 + 77);
    let rhs = (Rat::one() - coeff * eps.clone()) * rat_frac(n as i64, 2);
    let report = BoundReport::new(
        "thm-4.2",
        Value::from_usize(count),
        rhs,
        Context { r: Some(r), n: Some(n), epsilon: Some(Value::Rat(eps)) },
    )?
    .with("nu", Witness::Int(nu as i64))
    .with("transformed_count", Witness::Int(count as i64))
    .with("untransformed_count", Witness::Int(untransformed_count as i64))
    .with("transformed_edges", Witness::Int(transformed.edge_count() as i64));
    Ok((report, transformed))
}

fn check_degree_conditions(h: &Tripartite3Graph, r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::input("stability bound needs r >= 2"));
    }
    let degrees = h.degrees();
    if let Some(i) = degrees[0].iter().position(|&d| d < r) {
        return Err(Error::input(format!(
            "class-A vertex {i} has degree {} < r = {r}",
            degrees[0][i]
        )));
    }
    for c in [1, 2] {
        if let Some(i) = degrees[c].iter().position(|&d| d > r) {
            return Err(Error::input(format!(
                "class-{c} vertex {i} has degree {} > r = {r}",
                degrees[c][i]
            )));
        }
    }
    Ok(())
}

/// C4-component count of lk A >= (1 - (6r-7) eps) n/2 under the same
/// degree conditions.
pub fn check_link_c4_stability(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<BoundReport> {
    check_degree_conditions(h, r)?;
    let n = h.class_sizes()[0];
    let (nu, _) = h.nu_exact(budget)?;
    let eps = epsilon_of(nu, n);
    let link = h.link_of_class(TriClass::A);
    let count = find_c4_components(&link.graph, r).len();
    let rhs =
        (Rat::one() - rat(6 * r as i64 - 7) * eps.clone()) * rat_frac(n as i64, 2);
    let report = BoundReport::new(
        "lem-4.2",
        Value::from_usize(count),
        rhs,
        Context { r: Some(r), n: Some(n), epsilon: Some(Value::Rat(eps)) },
    )?;
    Ok(report.with("nu", Witness::Int(nu as i64)))
}

/// Runs the hosting dichotomy over every C4 component of every link whose
/// touched vertices satisfy the degree precondition; the error branch must
/// never fire.
pub fn check_hosting_dichotomy(h: &Tripartite3Graph, r: usize) -> Result<BoundReport> {
    let mut checked = 0usize;
    let mut passed = 0usize;
    let mut two_disjoint = 0i64;
    let mut half_fano = 0i64;
    for class in TriClass::ALL {
        let link = h.link_of_class(class);
        for c4 in find_c4_components(&link.graph, r) {
            // The dichotomy needs the link-class vertices its hosted edges
            // reach to have degree at most r; the C4's own vertices have
            // degree exactly r by definition.
            let hosted = crate::structure::hosted_edges(h, class, &c4)?;
            let applicable = hosted.iter().all(|id| {
                let e = h.edges()[id.index()];
                let v = TriVertex::new(class, e[class.index()]);
                h.degree(v).map(|d| d <= r).unwrap_or(false)
            });
            if !applicable {
                continue;
            }
            checked += 1;
            match c4_dichotomy(h, class, &c4) {
                Ok(C4Dichotomy::TwoDisjoint { .. }) => {
                    passed += 1;
                    two_disjoint += 1;
                }
                Ok(C4Dichotomy::FormsHalfFano(_)) => {
                    passed += 1;
                    half_fano += 1;
                }
                Err(Error::Dichotomy(_)) => {}
                Err(other) => return Err(other),
            }
        }
    }
    let report = BoundReport::new(
        "lem-4.3",
        Value::from_usize(passed),
        rat(checked as i64),
        Context { r: Some(r), n: None, epsilon: None },
    )?;
    Ok(report
        .with("two_disjoint", Witness::Int(two_disjoint))
        .with("half_fano", Witness::Int(half_fano)))
}

/// Every link C4 hosting two disjoint edges with all four vertices good
/// must sit in a component of perfect-matching shape (type 1 or type 2).
pub fn check_pm_component_shapes(
    h: &Tripartite3Graph,
    r: usize,
    budget: &Budget,
) -> Result<BoundReport> {
    let table = badness(h, r);
    let mut eligible = 0usize;
    let mut conforming = 0usize;
    let components = h.components();
    for class in TriClass::ALL {
        let link = h.link_of_class(class);
        for c4 in find_c4_components(&link.graph, r) {
            let verts = c4.tri_vertices(link.classes);
            if !verts.iter().all(|&v| table.is_good(v)) {
                continue;
            }
            let hosted = crate::structure::hosted_edges(h, class, &c4)?;
            let hosts_disjoint = hosted.iter().enumerate().any(|(i, &a)| {
                hosted[i + 1..].iter().any(|&b| {
                    let ea = h.edges()[a.index()];
                    let eb = h.edges()[b.index()];
                    (0..3).all(|c| ea[c] != eb[c])
                })
            });
            if !hosts_disjoint {
                continue;
            }
            eligible += 1;
            let comp = components
                .iter()
                .find(|comp| comp.edges.contains(&hosted[0]))
                .expect("hosted edge lives in some component");
            match classify_pm_component(h, comp, budget)? {
                PmClass::Type1 | PmClass::Type2 => conforming += 1,
                PmClass::Other => {}
            }
        }
    }
    BoundReport::new(
        "lem-4.5",
        Value::from_usize(conforming),
        rat(eligible as i64),
        Context { r: Some(r), n: None, epsilon: None },
    )
}

/// Every link C4 with exactly one bad vertex must exhibit the four-unit
/// companion structure; vacuously true when no such C4 exists.
pub fn check_one_bad_vertex(h: &Tripartite3Graph, r: usize) -> Result<BoundReport> {
    let table = badness(h, r);
    let mut eligible = 0usize;
    let mut passed = 0usize;
    let mut notes: Vec<Witness> = Vec::new();
    for class in TriClass::ALL {
        let link = h.link_of_class(class);
        for c4 in find_c4_components(&link.graph, r) {
            let bad: Vec<TriVertex> = c4
                .tri_vertices(link.classes)
                .into_iter()
                .filter(|&v| table.is_bad(v))
                .collect();
            if bad.len() != 1 {
                continue;
            }
            eligible += 1;
            let outcome = check_one_bad_vertex_structure(h, r, class, &c4)?;
            if outcome.pass {
                passed += 1;
            } else {
                for d in outcome.details {
                    notes.push(Witness::Text(d));
                }
            }
        }
    }
    let mut report = BoundReport::new(
        "lem-4.6",
        Value::from_usize(passed),
        rat(eligible as i64),
        Context { r: Some(r), n: None, epsilon: None },
    )?;
    if eligible == 0 {
        report = report.with("vacuous", Witness::Text("no single-bad-vertex C4".to_string()));
    }
    if !notes.is_empty() {
        report = report.with("failures", Witness::List(notes));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::fano;

    #[test]
    fn lp_reproduces_worked_point() {
        let sol = lp_min(5, 10, 2).unwrap();
        assert_eq!(sol.t, Value::Rat(rat(3)));
        assert_eq!(sol.x1, Value::Rat(rat(0)));
        assert_eq!(sol.x2, Value::Rat(rat(1)));
        assert_eq!(sol.x3, Value::Rat(rat(1)));
        assert!(sol.closed_form_applies);
        assert_eq!(sol.duality_gap, Value::Rat(rat(0)));
    }

    #[test]
    fn lp_trivial_origin() {
        let sol = lp_min(0, 0, 3).unwrap();
        assert_eq!(sol.t, Value::Rat(rat(0)));
    }

    #[test]
    fn lp_beyond_closed_form_regime() {
        // v too large for the zero-x1 vertex: optimum moves but stays exact.
        let sol = lp_min(2, 9, 2).unwrap();
        assert!(!sol.closed_form_applies);
        assert_eq!(sol.t, Value::Rat(rat_frac(9, 4)));
        assert_eq!(sol.duality_gap, Value::Rat(rat(0)));
    }

    #[test]
    fn fano_cover_vs_matching() {
        let report = check_cover_vs_matching(&fano(), &Budget::default()).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Rat(rat(2)));
        assert_eq!(report.rhs, Value::Rat(rat(2)));
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_of(2, 4), Rat::zero());
        assert_eq!(epsilon_of(2, 3), rat_frac(1, 3));
        assert_eq!(epsilon_of(0, 0), Rat::zero());
    }

    #[test]
    fn lp_closed_form_holds_on_its_regime() {
        // Between (2r-1) nu / 2 and (6r-5) nu / 3 the optimum is the
        // closed-form point with x1 = 0.
        for r in 2usize..=6 {
            for nu in 0usize..=6 {
                let lo = ((2 * r - 1) * nu).div_ceil(2);
                let hi = (6 * r - 5) * nu / 3;
                for v in lo..=hi {
                    let sol = lp_min(nu, v, r).unwrap();
                    assert!(sol.closed_form_applies, "(r={r}, nu={nu}, v={v})");
                    let closed = (rat(2 * r as i64 - 3) * rat(nu as i64) + rat(v as i64))
                        / rat(6 * r as i64 - 7);
                    assert_eq!(sol.t_rat(), &closed);
                    assert!(num_traits::Zero::is_zero(sol.x_rats()[0]));
                }
            }
        }
    }

    #[test]
    fn regular_matching_bound_examples() {
        use crate::constructions::{build, GadgetSpec};
        let budget = Budget::default();

        let extremal = build(&GadgetSpec::Extremal { r: 2, n: 4 }).unwrap();
        let report = check_regular_matching_bound(&extremal, 2, &budget).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Rat(rat(2)));
        assert_eq!(report.rhs, Value::Rat(rat(2)), "extremal instance is tight");

        let triple = build(&GadgetSpec::ParallelTriple { r: 3 }).unwrap();
        let report = check_regular_matching_bound(&triple, 3, &budget).unwrap();
        assert!(report.pass);
        assert_eq!(report.rhs, Value::Rat(rat_frac(1, 2)));

        // Preconditions: regularity and equal classes.
        assert!(check_regular_matching_bound(&extremal, 3, &budget).is_err());
        let lopsided = Tripartite3Graph::new([1, 2, 1], vec![]).unwrap();
        assert!(check_regular_matching_bound(&lopsided, 1, &budget).is_err());
    }

    #[test]
    fn line_connectivity_bound_on_single_edge() {
        use crate::bipartite::BipartiteMultigraph;
        use crate::linegraph::LineSubgraph;
        use crate::topology::HomologyEta;

        let g = BipartiteMultigraph::new(1, 1, vec![(0, 0)]).unwrap();
        let full = LineSubgraph::full_line(&g);
        let eval = HomologyEta::rational();
        let report = check_line_connectivity_bound(&g, &full, 2, &eval).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Infinite, "lone line vertex is isolated");
        assert_eq!(report.rhs, Value::Rat(rat_frac(2, 5)));
    }

    #[test]
    fn c4_plus_path_splits_componentwise() {
        use crate::bipartite::BipartiteMultigraph;
        use crate::topology::HomologyEta;

        // One 2-regular C4 next to a path of length 3: k = 1, and the line
        // graph's eta is the sum of the per-component values 1 + 1.
        let g = BipartiteMultigraph::new(
            4,
            4,
            vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (3, 2), (3, 3)],
        )
        .unwrap();
        let eval = HomologyEta::rational();
        let report = check_line_connectivity_with_c4s(&g, 2, 1, &eval).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Rat(rat(2)));
        assert_eq!(report.rhs, Value::Rat(rat(2)), "(4 + 7 - 1)/5 is tight here");

        // Claiming fewer C4 components than exist is an input error.
        assert!(check_line_connectivity_with_c4s(&g, 2, 0, &eval).is_err());
    }

    #[test]
    fn stability_bound_vacuous_on_hub_gadget() {
        use crate::constructions::{build, GadgetSpec};
        let budget = Budget::default();
        let h = build(&GadgetSpec::HubEven { r: 2 }).unwrap();

        // eps = 1/3 pushes the component bound below zero.
        let report = check_fano_component_stability(&h, 2, &budget).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Rat(rat(0)));
        assert_eq!(report.rhs, Value::Rat(rat_frac(-23, 3)));

        let report = check_link_c4_stability(&h, 2, &budget).unwrap();
        assert!(report.pass);
        assert_eq!(report.rhs, Value::Rat(rat(-1)));
    }

    #[test]
    fn copy_stability_replays_transformations() {
        use crate::constructions::{build, GadgetSpec};
        let budget = Budget::default();
        let h = build(&GadgetSpec::Mixture {
            parts: vec![
                GadgetSpec::Fano,
                GadgetSpec::Fano,
                GadgetSpec::ParallelTriple { r: 2 },
            ],
        })
        .unwrap();
        let (report, transformed) = check_fano_copy_stability(&h, 2, &budget).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, Value::Rat(rat(2)));
        // The parallel triple is a perfect-matching component and is
        // replaced by r parallel copies of its matching, which here is the
        // same two edges.
        assert_eq!(transformed.edge_count(), h.edge_count());
        assert_eq!(
            report.witnesses.get("transformed_count"),
            report.witnesses.get("untransformed_count")
        );
    }

    #[test]
    fn hall_defect_on_fano_is_tight() {
        use crate::hypergraph::fixtures::fano;
        use crate::topology::HomologyEta;
        let eval = HomologyEta::rational();
        let w = hall_witness(&fano(), TriClass::A, &eval, &Budget::default()).unwrap();
        assert_eq!(w.defect, 1, "whole class has |S| - eta = 2 - 1");
        assert_eq!(w.subset, (0..2).collect());
    }

    #[test]
    fn trim_removes_highest_ids_first() {
        let h = Tripartite3Graph::new(
            [1, 2, 2],
            vec![[0, 0, 0], [0, 1, 1], [0, 1, 0]],
        )
        .unwrap();
        let trimmed = trim_class_a(&h, 2);
        assert_eq!(trimmed.edges(), &[[0, 0, 0], [0, 1, 1]]);
    }
}
