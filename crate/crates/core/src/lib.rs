//! Causal discovery under latent confounding and selection bias.
//!
//! The crate provides graph types and separation predicates, exact
//! independence oracles, a closure engine for ancestral causal statements,
//! the LoCI discovery algorithm built on it, and a reference FCI
//! implementation used to cross-check LoCI's output.

pub mod campaign;
pub mod error;
pub mod fci;
pub mod fixtures;
pub mod graph;
pub mod loci;
pub mod nodeset;
pub mod oracle;
pub mod statements;

pub use error::{Error, Result};
pub use fci::{run_fci, FciOutput};
pub use graph::{CausalDag, EndMark, MixedGraph, NodeRole};
pub use loci::{LociConfig, LociResult};
pub use nodeset::NodeSet;
pub use oracle::{dag_oracle, CachedOracle, CiFact, CiQuery, DagOracle, IndependenceOracle};
