//! Inputs shared by the benchmarks in `benches/`.

use loci_core::campaign::{random_dag, DagShape};
use loci_core::CausalDag;

/// Random DAGs with `n_observed` observed nodes, two latents and one
/// selection node.
pub fn sample_dags(n_observed: usize, count: u64) -> Vec<CausalDag> {
    let shape = DagShape {
        n_observed,
        n_latent: 2,
        n_selection: 1,
        edge_probability: 0.35,
        selection_sinks: true,
    };
    (0..count)
        .map(|seed| random_dag(&shape, seed).expect("valid shape"))
        .collect()
}
