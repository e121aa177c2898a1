//! Graph types and predicates: causal DAGs, mixed graphs (MAGs and PAGs),
//! separation, DAG-to-MAG projection and brute-force equivalence classes.

mod dag;
mod equivalence;
pub mod format;
mod mag;
mod mixed;
mod path;
mod separation;

pub use dag::{CausalDag, DagBuilder, NodeRole};
pub use equivalence::{
    enumerate_equivalent_mags, enumerate_equivalent_mags_with_limit, invariant_marks, invariant_marks_with_limit,
    markov_equivalent, DEFAULT_ENUMERATION_LIMIT,
};
pub use format::GraphDocument;
pub use mag::{is_ancestral, is_maximal, project_to_mag};
pub use mixed::{EndMark, MixedGraph};
pub use path::Path;
pub use separation::{d_separated, m_separated};

pub(crate) use separation::SeparationView;
