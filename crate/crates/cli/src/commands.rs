//! Command implementations. Machine-readable JSON goes to stdout, human
//! summaries to stderr; exit codes are 0 pass, 1 bound failure, 2 input or
//! precondition error, 3 resource error.

use std::collections::BTreeMap;

use serde::Serialize;

use t3lab_core::bounds::{
    check_cover_vs_matching, check_fano_component_stability, check_hall_defect,
    check_hosting_dichotomy, check_line_connectivity_bound, check_line_connectivity_with_c4s,
    check_link_c4_stability, check_one_bad_vertex, check_pm_component_shapes,
    check_regular_matching_bound, epsilon_of, BoundReport, Value,
};
use t3lab_core::budget::Budget;
use t3lab_core::constructions::{build, validate, GadgetSpec};
use t3lab_core::homology::Coeff;
use t3lab_core::hypergraph::{TriClass, Tripartite3Graph};
use t3lab_core::linegraph::LineSubgraph;
use t3lab_core::structure::{find_c4_components, find_fano_components};
use t3lab_core::topology::{eta_report, EtaValue, HomologyEta};
use t3lab_core::{Error, Result};

use crate::formats;

pub struct Ctx {
    pub budget: Budget,
}

impl Ctx {
    pub fn eta_eval(&self, coeff: Coeff) -> HomologyEta {
        HomologyEta { coeff, budget: self.budget.clone() }
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

#[derive(Serialize)]
struct AnalyzeOutput {
    nu: usize,
    tau: usize,
    epsilon: Value,
    r: usize,
    c4_components: BTreeMap<&'static str, usize>,
    fano_components: usize,
    reports: Vec<BoundReport>,
    pass: bool,
}

/// Whether the one-sided degree conditions (class A at least r, classes B
/// and C at most r) hold.
fn degree_conditions_hold(h: &Tripartite3Graph, r: usize) -> bool {
    let d = h.degrees();
    d[0].iter().all(|&x| x >= r) && d[1].iter().all(|&x| x <= r) && d[2].iter().all(|&x| x <= r)
}

pub fn analyze(ctx: &Ctx, text: &str, r_flag: Option<usize>) -> Result<i32> {
    let h = formats::load_t3g(text)?;
    let r = r_flag.unwrap_or_else(|| h.max_degree());
    let (nu, _) = h.nu_exact(&ctx.budget)?;
    let (tau, _) = h.tau_exact(&ctx.budget)?;
    let sizes = h.class_sizes();
    let equal_classes = sizes[0] == sizes[1] && sizes[1] == sizes[2];
    let epsilon = epsilon_of(nu, sizes[0]);

    let mut c4_components = BTreeMap::new();
    for (key, class) in [("A", TriClass::A), ("B", TriClass::B), ("C", TriClass::C)] {
        let link = h.link_of_class(class);
        c4_components.insert(key, find_c4_components(&link.graph, r).len());
    }
    let fano_components = find_fano_components(&h, r).len();

    let mut reports = Vec::new();
    reports.push(check_cover_vs_matching(&h, &ctx.budget)?);
    if equal_classes && r >= 1 && h.is_regular(r) {
        reports.push(check_regular_matching_bound(&h, r, &ctx.budget)?);
        if r >= 2 {
            reports.push(check_fano_component_stability(&h, r, &ctx.budget)?);
        }
    }
    if r >= 2 && degree_conditions_hold(&h, r) {
        reports.push(check_link_c4_stability(&h, r, &ctx.budget)?);
        let (report, _) = t3lab_core::bounds::check_fano_copy_stability(&h, r, &ctx.budget)?;
        reports.push(report);
    }
    if r >= 1 {
        reports.push(check_hosting_dichotomy(&h, r)?);
        reports.push(check_pm_component_shapes(&h, r, &ctx.budget)?);
        reports.push(check_one_bad_vertex(&h, r)?);
    }
    let hall_in_budget = sizes.iter().all(|&s| s <= ctx.budget.max_hall_class)
        && h.edge_count() <= ctx.budget.max_eta_vertices;
    if hall_in_budget {
        let eval = ctx.eta_eval(Coeff::Rational);
        for class in TriClass::ALL {
            reports.push(check_hall_defect(&h, class, &eval, &ctx.budget)?);
        }
    }

    let pass = reports.iter().all(|r| r.pass);
    let out = AnalyzeOutput {
        nu,
        tau,
        epsilon: Value::Rat(epsilon),
        r,
        c4_components,
        fano_components,
        reports,
        pass,
    };
    emit(&out);
    eprintln!(
        "analyze: nu={nu} tau={tau} r={r} fano={fano} checks={checks} {verdict}",
        fano = out.fano_components,
        checks = out.reports.len(),
        verdict = if pass { "all pass" } else { "FAILURES" },
    );
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct EtaOutput {
    eta: String,
    reduced_betti: Vec<usize>,
    torsion: Vec<(isize, Vec<String>)>,
    top_dim: isize,
    coeff: String,
    cap: usize,
}

fn eta_string(v: &EtaValue) -> String {
    match v {
        EtaValue::Finite(k) => k.to_string(),
        EtaValue::Infinite => "inf".to_string(),
        EtaValue::AtLeast(c) => format!(">={c}"),
    }
}

pub fn eta_cmd(ctx: &Ctx, text: &str, coeff: &str, cap: Option<usize>) -> Result<i32> {
    let g = formats::load_bmg(text)?;
    let coeff_parsed = match coeff {
        "q" => Coeff::Rational,
        "f2" => Coeff::BinaryField,
        "z" => Coeff::Integer,
        other => {
            return Err(Error::Input(format!("unknown coefficient system {other:?}")));
        }
    };
    let cap = cap.unwrap_or(ctx.budget.eta_cap);
    let full = LineSubgraph::full_line(&g);
    let (adj, _) = full.as_adj_graph();
    let report = eta_report(&adj, coeff_parsed, cap, &ctx.budget)?;
    let out = EtaOutput {
        eta: eta_string(&report.value),
        reduced_betti: report.reduced_betti,
        torsion: report.torsion,
        top_dim: report.top_dim,
        coeff: coeff.to_string(),
        cap,
    };
    emit(&out);
    eprintln!("eta: {} (coeff {}, cap {})", out.eta, out.coeff, out.cap);
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    name: String,
    reports: Vec<BoundReport>,
    pass: bool,
}

pub fn verify(
    ctx: &Ctx,
    name: &str,
    text: &str,
    r_flag: Option<usize>,
    k_flag: Option<usize>,
) -> Result<i32> {
    let reports: Vec<BoundReport> = match name {
        "thm1.2" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree());
            vec![check_regular_matching_bound(&h, r, &ctx.budget)?]
        }
        "thm1.3" => {
            let h = formats::load_t3g(text)?;
            vec![check_cover_vs_matching(&h, &ctx.budget)?]
        }
        "thm2.2" => {
            let h = formats::load_t3g(text)?;
            let eval = ctx.eta_eval(Coeff::Rational);
            TriClass::ALL
                .iter()
                .map(|&class| check_hall_defect(&h, class, &eval, &ctx.budget))
                .collect::<Result<_>>()?
        }
        "thm3.1" => {
            let g = formats::load_bmg(text)?;
            let r = r_flag.unwrap_or_else(|| g.max_degree().max(2));
            let eval = ctx.eta_eval(Coeff::Rational);
            let full = LineSubgraph::full_line(&g);
            vec![check_line_connectivity_bound(&g, &full, r, &eval)?]
        }
        "cor3.8" => {
            let g = formats::load_bmg(text)?;
            let r = r_flag.unwrap_or_else(|| g.max_degree().max(2));
            let k = k_flag.unwrap_or_else(|| find_c4_components(&g, r).len());
            let eval = ctx.eta_eval(Coeff::Rational);
            vec![check_line_connectivity_with_c4s(&g, r, k, &eval)?]
        }
        "thm4.1" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree());
            vec![check_fano_component_stability(&h, r, &ctx.budget)?]
        }
        "thm4.2" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree());
            let (report, _) = t3lab_core::bounds::check_fano_copy_stability(&h, r, &ctx.budget)?;
            vec![report]
        }
        "lem4.2" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree());
            vec![check_link_c4_stability(&h, r, &ctx.budget)?]
        }
        "lem4.3" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree().max(2));
            vec![check_hosting_dichotomy(&h, r)?]
        }
        "lem4.5" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree().max(2));
            vec![check_pm_component_shapes(&h, r, &ctx.budget)?]
        }
        "lem4.6" => {
            let h = formats::load_t3g(text)?;
            let r = r_flag.unwrap_or_else(|| h.max_degree().max(2));
            vec![check_one_bad_vertex(&h, r)?]
        }
        other => {
            return Err(Error::Input(format!("unknown bound name {other:?}")));
        }
    };
    let pass = reports.iter().all(|r| r.pass);
    let out = VerifyOutput { name: name.to_string(), reports, pass };
    emit(&out);
    eprintln!("verify {name}: {}", if pass { "pass" } else { "FAIL" });
    Ok(if pass { 0 } else { 1 })
}

pub struct ConstructArgs {
    pub family: String,
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub seed: Option<u64>,
    pub spec_json: Option<String>,
    pub check: bool,
}

fn missing(flag: &str, family: &str) -> Error {
    Error::Input(format!("construct {family} needs --{flag}"))
}

pub fn construct(ctx: &Ctx, args: &ConstructArgs) -> Result<(String, i32)> {
    let spec: GadgetSpec = if let Some(json) = &args.spec_json {
        serde_json::from_str(json)
            .map_err(|e| Error::Input(format!("invalid gadget spec JSON: {e}")))?
    } else {
        match args.family.as_str() {
            "fano" => GadgetSpec::Fano,
            "scaled-fano" => {
                GadgetSpec::ScaledFano { s: args.s.ok_or_else(|| missing("s", "scaled-fano"))? }
            }
            "extremal" => GadgetSpec::Extremal {
                r: args.r.ok_or_else(|| missing("r", "extremal"))?,
                n: args.n.ok_or_else(|| missing("n", "extremal"))?,
            },
            "thm53-even" => {
                GadgetSpec::HubEven { r: args.r.ok_or_else(|| missing("r", "thm53-even"))? }
            }
            "thm53-odd" => {
                GadgetSpec::HubOdd { r: args.r.ok_or_else(|| missing("r", "thm53-odd"))? }
            }
            "parallel-triple" => GadgetSpec::ParallelTriple {
                r: args.r.ok_or_else(|| missing("r", "parallel-triple"))?,
            },
            "random-regular" => GadgetSpec::RandomRegular {
                r: args.r.ok_or_else(|| missing("r", "random-regular"))?,
                n: args.n.ok_or_else(|| missing("n", "random-regular"))?,
                seed: args.seed.unwrap_or(0),
            },
            other => {
                return Err(Error::Input(format!("unknown construction family {other:?}")));
            }
        }
    };
    let h = build(&spec)?;
    let mut code = 0;
    if args.check {
        let reports = validate(&spec, &h, &ctx.budget)?;
        let pass = reports.iter().all(|r| r.pass);
        if !pass {
            code = 1;
        }
        eprintln!(
            "construct: validation {} ({} checks)",
            if pass { "pass" } else { "FAIL" },
            reports.len()
        );
    }
    eprintln!(
        "construct: {} ({} vertices per class, {} edges)",
        serde_json::to_string(&spec).expect("spec serializes"),
        h.class_sizes()[0],
        h.edge_count()
    );
    Ok((formats::save_t3g(&h), code))
}

#[derive(Serialize)]
struct SearchCandidate {
    seed: u64,
    nu: usize,
    threshold: usize,
    matching: Vec<u32>,
    instance: String,
}

#[derive(Serialize)]
struct SearchOutput {
    target: String,
    r: usize,
    n: usize,
    seed_start: u64,
    iters: u64,
    evaluated: u64,
    best: Option<SearchBest>,
    candidates: Vec<SearchCandidate>,
}

#[derive(Serialize)]
struct SearchBest {
    seed: u64,
    nu: usize,
}

pub struct SearchResult {
    pub json: String,
    pub best_instance: Option<String>,
}

pub fn search(
    ctx: &Ctx,
    r: usize,
    n: usize,
    seed_start: u64,
    iters: u64,
    target: &str,
) -> Result<SearchResult> {
    if target != "min-nu" && target != "akz-counterexample" {
        return Err(Error::Input(format!("unknown search target {target:?}")));
    }
    let simple_only = target == "akz-counterexample";
    // Matching threshold from the simple-instance conjecture: (r-1) n / r,
    // rounded up.
    let threshold = ((r - 1) * n).div_ceil(r);

    let mut evaluated = 0u64;
    let mut best: Option<(usize, u64, Tripartite3Graph)> = None;
    let mut candidates = Vec::new();
    for seed in seed_start..seed_start.saturating_add(iters) {
        let h = build(&GadgetSpec::RandomRegular { r, n, seed })?;
        if simple_only {
            let simple = h.shapes().values().all(|ids| ids.len() == 1);
            if !simple {
                continue;
            }
        }
        evaluated += 1;
        let (nu, matching) = h.nu_exact(&ctx.budget)?;
        if best.as_ref().is_none_or(|(b, _, _)| nu < *b) {
            best = Some((nu, seed, h.clone()));
        }
        if simple_only && nu < threshold {
            candidates.push(SearchCandidate {
                seed,
                nu,
                threshold,
                matching: matching.edge_ids.iter().map(|id| id.0).collect(),
                instance: formats::save_t3g(&h).trim_end().to_string(),
            });
        }
    }

    let out = SearchOutput {
        target: target.to_string(),
        r,
        n,
        seed_start,
        iters,
        evaluated,
        best: best.as_ref().map(|(nu, seed, _)| SearchBest { seed: *seed, nu: *nu }),
        candidates,
    };
    eprintln!(
        "search: evaluated {} of {} seeds, best nu {}",
        evaluated,
        iters,
        out.best.as_ref().map_or("-".to_string(), |b| b.nu.to_string())
    );
    Ok(SearchResult {
        json: serde_json::to_string(&out).expect("serializable output"),
        best_instance: best.map(|(_, _, h)| formats::save_t3g(&h)),
    })
}
