//! Error taxonomy shared by all modules.
//!
//! The three-way split (input, resource, discrepancy) is what the CLI maps
//! onto exit codes, so verifiers must not blur the categories: a violated
//! precondition is an input error, an exceeded cap is a resource error, and
//! a structural claim that fails where theory says it cannot is a
//! discrepancy that callers are expected to surface, never swallow.

use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed data or violated precondition.
    #[error("input error: {0}")]
    Input(String),

    /// A configured cap was exceeded; retry with a larger budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An eta comparison that the configured homology cap cannot decide.
    #[error("eta comparison unresolved at cap {cap}; raise the cap")]
    EtaUnresolved { cap: usize },

    /// No typed explodable pair in a reduced nonempty line subgraph over a
    /// host without r-regular C4 components. Signals either a missed C4
    /// component or a bug; either way it is a first-class diagnostic.
    #[error("no typed explodable pair found (r = {r}, {vertices} vertices, {adjacencies} adjacencies)")]
    NoTypedPair {
        r: usize,
        vertices: usize,
        adjacencies: usize,
    },

    /// Both branches of a structural dichotomy failed.
    #[error("dichotomy violation: {0}")]
    Dichotomy(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
