//! Randomized invariants spanning the whole stack: matching/cover
//! relations, the eta toolbox, and the explosion machinery.

use std::collections::BTreeSet;

use proptest::prelude::*;

use t3lab_core::bipartite::{BEdgeId, BipartiteMultigraph};
use t3lab_core::bounds::{lp_min, rat, Value};
use t3lab_core::budget::Budget;
use t3lab_core::constructions::{build, GadgetSpec};
use t3lab_core::homology::{AdjGraph, Coeff};
use t3lab_core::hypergraph::Tripartite3Graph;
use t3lab_core::linegraph::LineSubgraph;
use t3lab_core::oracle::{self, OracleBudget};
use t3lab_core::topology::{eta, meshulam_game_lb, EtaValue};

fn adj_graph(max_n: usize) -> impl Strategy<Value = AdjGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(&p, _)| p)
                .collect();
            AdjGraph::new(n, &edges).unwrap()
        })
    })
}

fn bipartite_graph(max_side: usize, max_edges: usize) -> impl Strategy<Value = BipartiteMultigraph> {
    (1..=max_side, 1..=max_side).prop_flat_map(move |(nl, nr)| {
        proptest::collection::vec((0..nl as u32, 0..nr as u32), 0..=max_edges)
            .prop_map(move |edges| BipartiteMultigraph::new(nl, nr, edges).unwrap())
    })
}

fn tripartite_graph(max_side: usize, max_edges: usize) -> impl Strategy<Value = Tripartite3Graph> {
    (1..=max_side, 1..=max_side, 1..=max_side).prop_flat_map(move |(na, nb, nc)| {
        proptest::collection::vec((0..na as u32, 0..nb as u32, 0..nc as u32), 0..=max_edges)
            .prop_map(move |triples| {
                let edges: Vec<[u32; 3]> = triples.iter().map(|&(a, b, c)| [a, b, c]).collect();
                Tripartite3Graph::new([na, nb, nc], edges).unwrap()
            })
    })
}

fn eta_q(g: &AdjGraph) -> EtaValue {
    eta(g, Coeff::Rational, 8, &Budget::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meshulam_inequality_holds(g in adj_graph(7)) {
        let whole = eta_q(&g);
        for (u, v) in g.edges() {
            let deleted = eta_q(&g.delete_edge(u, v).unwrap());
            let exploded = eta_q(&g.explode_edge(u, v).unwrap());
            let bound = deleted.min_resolved(exploded.plus_one());
            prop_assert_eq!(
                bound.le(&whole),
                Some(true),
                "edge ({},{}): eta {:?} < min({:?}, {:?}+1)",
                u, v, whole, deleted, exploded
            );
        }
    }

    #[test]
    fn disjoint_union_is_superadditive(a in adj_graph(5), b in adj_graph(5)) {
        let union = a.disjoint_union(&b).unwrap();
        let (ea, eb, eu) = (eta_q(&a), eta_q(&b), eta_q(&union));
        let sum = match (ea, eb) {
            (EtaValue::Finite(x), EtaValue::Finite(y)) => EtaValue::Finite(x + y),
            _ => EtaValue::Infinite,
        };
        prop_assert_eq!(sum.le(&eu), Some(true), "union {:?} vs sum of {:?}, {:?}", eu, ea, eb);
    }

    #[test]
    fn line_graph_eta_at_least_half_matching(g in bipartite_graph(4, 8)) {
        let full = LineSubgraph::full_line(&g);
        let (adj, _) = full.as_adj_graph();
        let value = eta_q(&adj);
        let nu = g.nu_with_witness().0;
        match value {
            EtaValue::Infinite => {}
            EtaValue::Finite(k) => prop_assert!(2 * k >= nu),
            EtaValue::AtLeast(c) => prop_assert!(2 * c >= nu),
        }
    }

    #[test]
    fn game_bound_is_a_lower_bound(g in adj_graph(5)) {
        let lb = meshulam_game_lb(&g, &Budget::default()).unwrap();
        prop_assert_eq!(lb.le(&eta_q(&g)), Some(true));
    }

    #[test]
    fn coefficients_agree_without_torsion(g in adj_graph(7)) {
        // At this scale integral homology of independence complexes is
        // torsion-free, so all three coefficient systems agree.
        let q = eta_q(&g);
        let z = eta(&g, Coeff::Integer, 8, &Budget::default()).unwrap();
        prop_assert_eq!(q, z);
    }

    #[test]
    fn konig_and_cover_bounds(g in bipartite_graph(5, 12)) {
        let (nu, matching, cover) = g.matching_and_cover();
        prop_assert_eq!(nu, cover.len());
        prop_assert_eq!(nu, matching.len());
        let dedup = g.parallel_classes().len();
        prop_assert!(nu <= dedup);
    }

    #[test]
    fn cover_at_most_twice_matching(h in tripartite_graph(4, 10)) {
        let budget = Budget::default();
        let (nu, m) = h.nu_exact(&budget).unwrap();
        let (tau, c) = h.tau_exact(&budget).unwrap();
        m.validate(&h).unwrap();
        c.validate(&h).unwrap();
        prop_assert!(tau >= nu, "tau {} < nu {}", tau, nu);
        prop_assert!(tau <= 2 * nu, "tau {} > 2 nu {}", tau, nu);
    }

    #[test]
    fn exact_matching_agrees_with_oracle(h in tripartite_graph(4, 9)) {
        let (nu, _) = h.nu_exact(&Budget::default()).unwrap();
        let brute = oracle::nu_bruteforce(&h, &OracleBudget::default()).unwrap();
        prop_assert_eq!(nu, brute);
    }

    #[test]
    fn exact_cover_agrees_with_oracle(h in tripartite_graph(3, 8)) {
        let (tau, _) = h.tau_exact(&Budget::default()).unwrap();
        let brute = oracle::tau_bruteforce(&h, &OracleBudget::default()).unwrap();
        prop_assert_eq!(tau, brute);
    }

    #[test]
    fn explosion_drop_bounds(g in bipartite_graph(4, 8)) {
        let r = g.max_degree().max(2);
        let full = LineSubgraph::full_line(&g);
        let classes = g.parallel_classes();
        for &(a, b) in full.adjacencies() {
            let after = full.explode((a, b)).unwrap();
            prop_assert!(after.vertices().is_subset(full.vertices()));
            prop_assert!(after.adjacencies().is_subset(full.adjacencies()));
            let drop = full.vertex_count() - after.vertex_count();
            prop_assert!(drop <= 3 * r - 2, "drop {} > 3r-2 at r={}", drop, r);
            let parallel = g.edges()[a.index()] == g.edges()[b.index()];
            if parallel {
                prop_assert!(drop <= 2 * r - 2, "parallel drop {} > 2r-2", drop);
            }
        }
        drop(classes);
    }

    #[test]
    fn lp_duality_and_monotonicity(nu in 0usize..8, v in 0usize..24, r in 2usize..6) {
        let sol = lp_min(nu, v, r).unwrap();
        prop_assert_eq!(sol.duality_gap.clone(), Value::Rat(rat(0)));
        let [x1, x2, x3] = sol.x_rats();
        prop_assert!(x1 >= &rat(0) && x2 >= &rat(0) && x3 >= &rat(0));
    }

    #[test]
    fn random_regular_gadgets_obey_matching_bound(
        r in 1usize..4,
        n in 1usize..5,
        seed in 0u64..500,
    ) {
        let h = build(&GadgetSpec::RandomRegular { r, n, seed }).unwrap();
        prop_assert!(h.is_regular(r));
        let budget = Budget::default();
        let (nu, _) = h.nu_exact(&budget).unwrap();
        prop_assert!(2 * nu >= n, "nu {} below n/2 for n={}", nu, n);
        // Regular instances need at least n cover vertices.
        let (tau, _) = h.tau_exact(&budget).unwrap();
        prop_assert!(tau >= n, "tau {} below n {}", tau, n);
    }

    #[test]
    fn bipartite_matching_agrees_with_oracle(g in bipartite_graph(4, 8)) {
        let nu = g.nu_with_witness().0;
        let brute = oracle::nu_bruteforce_bip(&g, &OracleBudget::default()).unwrap();
        prop_assert_eq!(nu, brute);
    }
}

#[test]
fn line_subgraph_delete_explode_monotone() {
    // A deterministic spot-check of the subset relations on a fixed host.
    let g = BipartiteMultigraph::new(3, 3, vec![(0, 0), (0, 1), (1, 1), (2, 2), (1, 2)])
        .unwrap();
    let full = LineSubgraph::full_line(&g);
    for &pair in full.adjacencies() {
        let deleted = full.delete(pair).unwrap();
        assert_eq!(deleted.vertices(), full.vertices());
        assert!(deleted.adjacencies().is_subset(full.adjacencies()));
        assert_eq!(deleted.adjacencies().len() + 1, full.adjacencies().len());
    }
}

#[test]
fn hall_defect_never_contradicts_matching() {
    use t3lab_core::bounds::hall_witness;
    use t3lab_core::hypergraph::TriClass;
    use t3lab_core::topology::HomologyEta;

    let eval = HomologyEta::rational();
    let budget = Budget::default();
    for spec in [
        GadgetSpec::Fano,
        GadgetSpec::Extremal { r: 2, n: 2 },
        GadgetSpec::ParallelTriple { r: 2 },
        GadgetSpec::HubEven { r: 2 },
    ] {
        let h = build(&spec).unwrap();
        for class in TriClass::ALL {
            let w = hall_witness(&h, class, &eval, &budget).unwrap();
            let n = h.class_sizes()[class.index()];
            let (nu, _) = h.nu_exact(&budget).unwrap();
            assert!(nu + w.defect >= n, "{spec:?} {class:?}");
        }
    }
}

#[test]
fn perfect_matching_instance_has_no_defect() {
    // r parallel triples on n=3 singleton-joined classes: nu = n, so the
    // defect must be zero on every class.
    use t3lab_core::bounds::hall_witness;
    use t3lab_core::hypergraph::TriClass;
    use t3lab_core::topology::HomologyEta;

    let h = build(&GadgetSpec::Mixture {
        parts: vec![
            GadgetSpec::ParallelTriple { r: 2 },
            GadgetSpec::ParallelTriple { r: 2 },
            GadgetSpec::ParallelTriple { r: 2 },
        ],
    })
    .unwrap();
    let eval = HomologyEta::rational();
    for class in TriClass::ALL {
        let w = hall_witness(&h, class, &eval, &Budget::default()).unwrap();
        assert_eq!(w.defect, 0, "class {class:?}");
    }
}

#[test]
fn extremal_whole_class_is_a_hall_witness() {
    use t3lab_core::bounds::hall_witness;
    use t3lab_core::hypergraph::TriClass;
    use t3lab_core::topology::HomologyEta;

    let h = build(&GadgetSpec::Extremal { r: 2, n: 4 }).unwrap();
    let eval = HomologyEta::rational();
    let w = hall_witness(&h, TriClass::A, &eval, &Budget::default()).unwrap();
    // nu = n/2, so the defect reaches n - nu = 2, witnessed by a subset
    // covering both blocks.
    assert_eq!(w.defect, 2);
    let whole: BTreeSet<u32> = (0..4).collect();
    let link = h.link(TriClass::A, &whole).unwrap();
    let full = LineSubgraph::full_line(&link.graph);
    let (adj, _) = full.as_adj_graph();
    assert_eq!(eta_q(&adj), EtaValue::Finite(2));
    let _ = BEdgeId(0);
}

#[test]
fn exhaustive_small_graphs_meshulam_and_game() {
    // Every graph on 4 vertices, and the game bound on every graph on 5.
    let budget = Budget::default();
    let pairs4: Vec<(usize, usize)> =
        (0..4).flat_map(|u| ((u + 1)..4).map(move |v| (u, v))).collect();
    for mask in 0u32..(1 << pairs4.len()) {
        let edges: Vec<(usize, usize)> = pairs4
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = AdjGraph::new(4, &edges).unwrap();
        let whole = eta_q(&g);
        for (u, v) in g.edges() {
            let deleted = eta_q(&g.delete_edge(u, v).unwrap());
            let exploded = eta_q(&g.explode_edge(u, v).unwrap());
            let bound = deleted.min_resolved(exploded.plus_one());
            assert_eq!(bound.le(&whole), Some(true), "mask {mask} edge ({u},{v})");
        }
        let lb = meshulam_game_lb(&g, &budget).unwrap();
        assert_eq!(lb.le(&whole), Some(true), "game bound on mask {mask}");
    }

    let pairs5: Vec<(usize, usize)> =
        (0..5).flat_map(|u| ((u + 1)..5).map(move |v| (u, v))).collect();
    for mask in 0u32..(1 << pairs5.len()) {
        let edges: Vec<(usize, usize)> = pairs5
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = AdjGraph::new(5, &edges).unwrap();
        let lb = meshulam_game_lb(&g, &budget).unwrap();
        assert_eq!(lb.le(&eta_q(&g)), Some(true), "game bound on 5-vertex mask {mask}");
    }
}

#[test]
fn exhaustive_konig_on_three_by_three() {
    // Every simple bipartite graph on 3 + 3 vertices.
    let cells: Vec<(u32, u32)> =
        (0..3u32).flat_map(|u| (0..3u32).map(move |v| (u, v))).collect();
    for mask in 0u32..(1 << 9) {
        let edges: Vec<(u32, u32)> = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = BipartiteMultigraph::new(3, 3, edges).unwrap();
        let (nu, matching, cover) = g.matching_and_cover();
        assert_eq!(nu, cover.len(), "mask {mask}");
        assert_eq!(
            nu,
            oracle::nu_bruteforce_bip(&g, &OracleBudget::default()).unwrap(),
            "mask {mask}"
        );
        assert!(matching.len() == nu);
    }
}

#[test]
fn eta_matches_known_path_and_cycle_families() {
    // Independence complexes of path graphs are contractible for
    // n = 3k + 1 and spheres otherwise; those of cycle graphs are spheres
    // or wedges of two spheres. That pins eta exactly for every n.
    let path_expect = |n: usize| -> EtaValue {
        match n % 3 {
            0 => EtaValue::Finite(n / 3),
            1 => EtaValue::Infinite,
            _ => EtaValue::Finite(n / 3 + 1),
        }
    };
    for n in 1..=12usize {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = AdjGraph::new(n, &edges).unwrap();
        assert_eq!(eta_q(&g), path_expect(n), "path graph on {n} vertices");
    }

    let cycle_expect = |n: usize| {
        if n % 3 == 2 {
            EtaValue::Finite(n / 3 + 1)
        } else {
            EtaValue::Finite(n / 3)
        }
    };
    for n in 3..=12usize {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = AdjGraph::new(n, &edges).unwrap();
        assert_eq!(eta_q(&g), cycle_expect(n), "cycle graph on {n} vertices");
    }

    // Wedge of two circles for the 6-cycle: both Betti ranks visible.
    use t3lab_core::topology::eta_report;
    let c6 = AdjGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
    let report = eta_report(&c6, Coeff::Integer, 8, &Budget::default()).unwrap();
    assert_eq!(report.reduced_betti, vec![0, 0, 2, 0]);
    assert!(report.torsion.is_empty());
}

#[test]
fn disjoint_union_eta_is_exactly_additive_over_q() {
    // Over a field the independence complex of a disjoint union is a join,
    // so the first nonvanishing dimensions add exactly (plus one).
    let cases = [
        AdjGraph::new(2, &[(0, 1)]).unwrap(),
        AdjGraph::new(3, &[(0, 1), (1, 2)]).unwrap(),
        AdjGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        AdjGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap(),
        AdjGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(), // acyclic
    ];
    for a in &cases {
        for b in &cases {
            if a.vertex_count() + b.vertex_count() > 10 {
                continue;
            }
            let union = a.disjoint_union(b).unwrap();
            let expected = match (eta_q(a), eta_q(b)) {
                (EtaValue::Finite(x), EtaValue::Finite(y)) => EtaValue::Finite(x + y),
                _ => EtaValue::Infinite,
            };
            assert_eq!(eta_q(&union), expected, "{a:?} + {b:?}");
        }
    }
}
