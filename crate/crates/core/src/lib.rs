//! Exact combinatorics for matchings in 3-partite 3-multihypergraphs.
//!
//! The crate models tripartite multihypergraphs and their bipartite links,
//! computes matching and cover numbers exactly, evaluates the connectivity
//! parameter eta of independence complexes through reduced homology, runs
//! certified explosion sequences on line-graph subgraphs, and machine-checks
//! a family of matching bounds with exact rational arithmetic.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats, and the CLI live
//! in the companion `t3lab-cli` crate.

#![cfg_attr(not(test), no_std)]
// Class and matrix indices drive loops over several parallel arrays at
// once; iterator rewrites obscure that.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bipartite;
pub mod bounds;
pub mod budget;
pub mod constructions;
pub mod error;
pub mod homology;
pub mod hypergraph;
pub mod linegraph;
pub mod oracle;
pub mod structure;
pub mod topology;

pub use budget::Budget;
pub use error::{Error, Result};
