//! Resource caps for the exact searches.
//!
//! Every potentially exponential routine takes a [`Budget`] and fails with a
//! hard [`Error::Resource`](crate::Error::Resource) instead of degrading to
//! an approximation. The CLI overrides the defaults from the `T3LAB_BUDGET`
//! environment variable.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Budget {
    /// Deduplicated-edge cap for exact tripartite matching search.
    pub max_matching_edges: usize,
    /// Total-vertex cap for exact tripartite cover search.
    pub max_cover_vertices: usize,
    /// Vertex cap for homology-based eta evaluation.
    pub max_eta_vertices: usize,
    /// Homology is computed in dimensions up to `eta_cap - 2`; values at or
    /// above the cap come back as `AtLeast(eta_cap)`.
    pub eta_cap: usize,
    /// Face-count cap per complex, guarding degenerate dense cases.
    pub max_faces: usize,
    /// Vertex cap for the recursive connectivity game.
    pub max_game_vertices: usize,
    /// Class-size cap for the exhaustive subset scan of the Hall defect.
    pub max_hall_class: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_matching_edges: 60,
            max_cover_vertices: 24,
            max_eta_vertices: 20,
            eta_cap: 8,
            max_faces: 200_000,
            max_game_vertices: 14,
            max_hall_class: 16,
        }
    }
}

impl Budget {
    /// Parses `key=value` pairs separated by commas, e.g.
    /// `"eta_vertices=24,cap=10"`. Unknown keys are rejected.
    pub fn parse_overrides(&self, spec: &str) -> Result<Budget, String> {
        let mut out = self.clone();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let kv: Vec<&str> = part.splitn(2, '=').collect();
            if kv.len() != 2 {
                return Err("expected key=value".to_string());
            }
            let value: usize = kv[1]
                .trim()
                .parse()
                .map_err(|_| "value is not a non-negative integer".to_string())?;
            match kv[0].trim() {
                "matching_edges" => out.max_matching_edges = value,
                "cover_vertices" => out.max_cover_vertices = value,
                "eta_vertices" => out.max_eta_vertices = value,
                "cap" => out.eta_cap = value,
                "faces" => out.max_faces = value,
                "game_vertices" => out.max_game_vertices = value,
                "hall_class" => out.max_hall_class = value,
                other => return Err(alloc::format!("unknown budget key `{other}`")),
            }
        }
        Ok(out)
    }
}
