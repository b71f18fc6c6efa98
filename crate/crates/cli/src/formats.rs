//! The `t3g-v1` and `bmg-v1` JSON instance formats.
//!
//! Multiplicities keep files compact; loading expands them to edge
//! instances in file order with parallel copies consecutive and ids
//! sequential from zero. Saving canonicalizes: edges sorted
//! lexicographically with multiplicities merged, so load -> save is
//! byte-identical on canonical files.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use t3lab_core::bipartite::BipartiteMultigraph;
use t3lab_core::hypergraph::Tripartite3Graph;
use t3lab_core::{Error, Result};

pub const T3G_FORMAT: &str = "t3g-v1";
pub const BMG_FORMAT: &str = "bmg-v1";

#[derive(Debug, Serialize, Deserialize)]
struct T3gFile {
    format: String,
    classes: [usize; 3],
    edges: Vec<[u64; 4]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BmgFile {
    format: String,
    classes: [usize; 2],
    edges: Vec<[u64; 3]>,
}

fn parse_error(what: &str, err: impl std::fmt::Display) -> Error {
    Error::Input(format!("{what}: {err}"))
}

pub fn load_t3g(text: &str) -> Result<Tripartite3Graph> {
    let file: T3gFile =
        serde_json::from_str(text).map_err(|e| parse_error("invalid t3g JSON", e))?;
    if file.format != T3G_FORMAT {
        return Err(Error::Input(format!(
            "expected format {T3G_FORMAT:?}, found {:?}",
            file.format
        )));
    }
    let mut edges = Vec::new();
    for (i, row) in file.edges.iter().enumerate() {
        let [a, b, c, m] = *row;
        if m < 1 {
            return Err(Error::Input(format!("edge row {i} has multiplicity {m} < 1")));
        }
        for _ in 0..m {
            edges.push([a as u32, b as u32, c as u32]);
        }
    }
    Tripartite3Graph::new(file.classes, edges)
}

pub fn save_t3g(h: &Tripartite3Graph) -> String {
    let mut merged: BTreeMap<[u32; 3], u64> = BTreeMap::new();
    for e in h.edges() {
        *merged.entry(*e).or_default() += 1;
    }
    let file = T3gFile {
        format: T3G_FORMAT.to_string(),
        classes: h.class_sizes(),
        edges: merged
            .into_iter()
            .map(|(e, m)| [e[0] as u64, e[1] as u64, e[2] as u64, m])
            .collect(),
    };
    let mut out = serde_json::to_string(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn load_bmg(text: &str) -> Result<BipartiteMultigraph> {
    let file: BmgFile =
        serde_json::from_str(text).map_err(|e| parse_error("invalid bmg JSON", e))?;
    if file.format != BMG_FORMAT {
        return Err(Error::Input(format!(
            "expected format {BMG_FORMAT:?}, found {:?}",
            file.format
        )));
    }
    let mut edges = Vec::new();
    for (i, row) in file.edges.iter().enumerate() {
        let [u, v, m] = *row;
        if m < 1 {
            return Err(Error::Input(format!("edge row {i} has multiplicity {m} < 1")));
        }
        for _ in 0..m {
            edges.push((u as u32, v as u32));
        }
    }
    BipartiteMultigraph::new(file.classes[0], file.classes[1], edges)
}

#[allow(dead_code)] // canonical writer counterpart, exercised by the format tests
pub fn save_bmg(g: &BipartiteMultigraph) -> String {
    let mut merged: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &e in g.edges() {
        *merged.entry(e).or_default() += 1;
    }
    let (nl, nr) = g.class_sizes();
    let file = BmgFile {
        format: BMG_FORMAT.to_string(),
        classes: [nl, nr],
        edges: merged.into_iter().map(|((u, v), m)| [u as u64, v as u64, m]).collect(),
    };
    let mut out = serde_json::to_string(&file).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3g_round_trip_is_canonical() {
        let text = r#"{"format":"t3g-v1","classes":[2,2,2],"edges":[[1,1,0,1],[0,0,0,2],[0,1,1,1]]}"#;
        let h = load_t3g(text).unwrap();
        assert_eq!(h.edge_count(), 4);
        let saved = save_t3g(&h);
        assert_eq!(
            saved,
            "{\"format\":\"t3g-v1\",\"classes\":[2,2,2],\"edges\":[[0,0,0,2],[0,1,1,1],[1,1,0,1]]}\n"
        );
        // Canonical files survive the round trip byte for byte.
        assert_eq!(save_t3g(&load_t3g(&saved).unwrap()), saved);
    }

    #[test]
    fn bmg_round_trip_is_canonical() {
        let text = r#"{"format":"bmg-v1","classes":[2,2],"edges":[[1,0,1],[0,0,3]]}"#;
        let g = load_bmg(text).unwrap();
        assert_eq!(g.edge_count(), 4);
        let saved = save_bmg(&g);
        assert_eq!(save_bmg(&load_bmg(&saved).unwrap()), saved);
    }

    #[test]
    fn bad_inputs_are_input_errors() {
        assert!(load_t3g("{}").is_err());
        assert!(load_t3g(r#"{"format":"t3g-v2","classes":[1,1,1],"edges":[]}"#).is_err());
        assert!(
            load_t3g(r#"{"format":"t3g-v1","classes":[1,1,1],"edges":[[0,0,0,0]]}"#).is_err()
        );
        assert!(
            load_t3g(r#"{"format":"t3g-v1","classes":[1,1,1],"edges":[[5,0,0,1]]}"#).is_err()
        );
        assert!(load_bmg(r#"{"format":"bmg-v1","classes":[1,1],"edges":[[0,9,1]]}"#).is_err());
    }
}
