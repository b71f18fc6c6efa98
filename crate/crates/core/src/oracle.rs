//! Independent brute-force references.
//!
//! These certify the main implementations on tiny instances and stay
//! deliberately naive: subset enumeration for matchings and covers, full
//! integral homology plus greedy collapsing for eta. They refuse anything
//! over budget rather than approximating.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::bipartite::BipartiteMultigraph;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, AdjGraph, Coeff, FaceTable};
use crate::hypergraph::Tripartite3Graph;
use crate::topology::EtaValue;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_dim: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_vertices: 18, max_edges: 12, max_dim: 8 }
    }
}

/// Maximum matching by enumerating all subsets of deduplicated shapes.
pub fn nu_bruteforce(h: &Tripartite3Graph, budget: &OracleBudget) -> Result<usize> {
    let shapes: Vec<[u32; 3]> = h.shapes().into_keys().collect();
    if shapes.len() > budget.max_edges {
        return Err(Error::resource(format!(
            "{} deduplicated edges exceed the oracle edge cap {}",
            shapes.len(),
            budget.max_edges
        )));
    }
    let mut best = 0;
    for mask in 0u32..(1u32 << shapes.len()) {
        let chosen: Vec<&[u32; 3]> = shapes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let disjoint = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..].iter().all(|b| (0..3).all(|c| a[c] != b[c]))
        });
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    Ok(best)
}

/// Bipartite variant on deduplicated endpoint pairs.
pub fn nu_bruteforce_bip(g: &BipartiteMultigraph, budget: &OracleBudget) -> Result<usize> {
    let pairs: Vec<(u32, u32)> = g.parallel_classes().into_keys().collect();
    if pairs.len() > budget.max_edges {
        return Err(Error::resource(format!(
            "{} deduplicated edges exceed the oracle edge cap {}",
            pairs.len(),
            budget.max_edges
        )));
    }
    let mut best = 0;
    for mask in 0u32..(1u32 << pairs.len()) {
        let chosen: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let disjoint = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..].iter().all(|b| a.0 != b.0 && a.1 != b.1)
        });
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    Ok(best)
}

/// Minimum cover by enumerating all vertex subsets.
pub fn tau_bruteforce(h: &Tripartite3Graph, budget: &OracleBudget) -> Result<usize> {
    let sizes = h.class_sizes();
    let total = sizes.iter().sum::<usize>();
    if total > budget.max_vertices {
        return Err(Error::resource(format!(
            "{total} vertices exceed the oracle vertex cap {}",
            budget.max_vertices
        )));
    }
    let shapes: Vec<[u32; 3]> = h.shapes().into_keys().collect();
    let offset = [0usize, sizes[0], sizes[0] + sizes[1]];
    let mut best = total;
    for mask in 0u64..(1u64 << total) {
        let covers = shapes.iter().all(|e| {
            (0..3).any(|c| mask >> (offset[c] + e[c] as usize) & 1 == 1)
        });
        if covers {
            best = best.min(mask.count_ones() as usize);
        }
    }
    Ok(best)
}

/// eta from full integral reduced homology. Full vanishing through the top
/// dimension is resolved by a greedy free-face collapse: collapsing to a
/// point certifies infinity, anything else is flagged `AtLeast(top + 2)`
/// for manual review rather than guessed.
pub fn eta_bruteforce(g: &AdjGraph, budget: &OracleBudget) -> Result<EtaValue> {
    let cap = budget.max_vertices.min(14);
    if g.vertex_count() > cap {
        return Err(Error::resource(format!(
            "{} vertices exceed the oracle eta cap {cap}",
            g.vertex_count()
        )));
    }
    if g.vertex_count() == 0 {
        return Ok(EtaValue::Finite(0));
    }
    if g.has_isolated_vertex() {
        return Ok(EtaValue::Infinite);
    }
    let alpha = g.independence_number();
    let top = alpha as isize - 1;
    if top > budget.max_dim as isize {
        return Err(Error::resource(format!(
            "complex dimension {top} exceeds the oracle cap {}",
            budget.max_dim
        )));
    }
    let summary = reduced_homology(g, Coeff::Integer, top, &Budget::default())?;
    if let Some(d) = summary.first_nonvanishing() {
        return Ok(EtaValue::Finite((d + 1) as usize));
    }
    if greedy_collapses_to_point(g, alpha)? {
        Ok(EtaValue::Infinite)
    } else {
        Ok(EtaValue::AtLeast((top + 2) as usize))
    }
}

/// Greedy elementary collapses on the full face list. A face is free when
/// exactly one other face properly contains it; removing the pair
/// preserves the homotopy type.
fn greedy_collapses_to_point(g: &AdjGraph, alpha: usize) -> Result<bool> {
    let table = FaceTable::enumerate(g, alpha, &Budget::default())?;
    let mut faces: BTreeSet<u32> = (1..=alpha)
        .flat_map(|k| table.of_card(k).iter().copied())
        .collect();
    loop {
        let mut collapse: Option<(u32, u32)> = None;
        'scan: for &sigma in &faces {
            let mut container = None;
            for &tau in &faces {
                if tau != sigma && tau & sigma == sigma {
                    if container.is_some() {
                        continue 'scan;
                    }
                    container = Some(tau);
                }
            }
            if let Some(tau) = container {
                collapse = Some((sigma, tau));
                break;
            }
        }
        match collapse {
            Some((sigma, tau)) => {
                faces.remove(&sigma);
                faces.remove(&tau);
            }
            None => break,
        }
    }
    Ok(faces.len() == 1 && faces.iter().next().unwrap().count_ones() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build, GadgetSpec};

    #[test]
    fn fano_values() {
        let f = build(&GadgetSpec::Fano).unwrap();
        let budget = OracleBudget::default();
        assert_eq!(nu_bruteforce(&f, &budget).unwrap(), 1);
        assert_eq!(tau_bruteforce(&f, &budget).unwrap(), 2);
    }

    #[test]
    fn empty_and_single_edge() {
        let budget = OracleBudget::default();
        let empty = Tripartite3Graph::empty([1, 1, 1]);
        assert_eq!(nu_bruteforce(&empty, &budget).unwrap(), 0);
        let single = build(&GadgetSpec::ParallelTriple { r: 1 }).unwrap();
        assert_eq!(tau_bruteforce(&single, &budget).unwrap(), 1);
    }

    #[test]
    fn hub_odd_matching_exhaustive() {
        let h = build(&GadgetSpec::HubOdd { r: 3 }).unwrap();
        assert_eq!(nu_bruteforce(&h, &OracleBudget::default()).unwrap(), 2);
    }

    #[test]
    fn two_disjoint_fanos_cover_additively() {
        let h = build(&GadgetSpec::Mixture {
            parts: alloc::vec![GadgetSpec::Fano, GadgetSpec::Fano],
        })
        .unwrap();
        assert_eq!(tau_bruteforce(&h, &OracleBudget::default()).unwrap(), 4);
    }

    #[test]
    fn eta_oracle_goldens() {
        let budget = OracleBudget::default();
        let p4 = AdjGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(eta_bruteforce(&p4, &budget).unwrap(), EtaValue::Finite(1));
        let c10_edges: Vec<(usize, usize)> = (0..10).map(|i| (i, (i + 1) % 10)).collect();
        let c10 = AdjGraph::new(10, &c10_edges).unwrap();
        assert_eq!(eta_bruteforce(&c10, &budget).unwrap(), EtaValue::Finite(3));
        let isolated = AdjGraph::new(2, &[]).unwrap();
        assert_eq!(eta_bruteforce(&isolated, &budget).unwrap(), EtaValue::Infinite);
    }

    #[test]
    fn collapse_resolves_contractible_complex() {
        // Path graph on 4 vertices: acyclic, no isolated vertex; the
        // oracle must resolve it to infinity by collapsing.
        let g = AdjGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            eta_bruteforce(&g, &OracleBudget::default()).unwrap(),
            EtaValue::Infinite
        );
    }
}
