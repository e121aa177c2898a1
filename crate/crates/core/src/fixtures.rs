//! Built-in example graphs. Each one exercises a particular orientation
//! rule or worked statement derivation.

use crate::error::{Error, Result};
use crate::graph::format::parse_dag;
use crate::graph::CausalDag;

pub const FIXTURES: [(&str, &str); 8] = [
    ("y_structure", include_str!("../fixtures/y_structure.graph")),
    ("example2", include_str!("../fixtures/example2.graph")),
    ("discriminating", include_str!("../fixtures/discriminating.graph")),
    ("selection_cycle", include_str!("../fixtures/selection_cycle.graph")),
    ("r4b", include_str!("../fixtures/r4b.graph")),
    ("r7", include_str!("../fixtures/r7.graph")),
    ("r8", include_str!("../fixtures/r8.graph")),
    ("r10", include_str!("../fixtures/r10.graph")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

pub fn fixture_text(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            Error::NotFound(format!(
                "fixture {name:?}; known: {}",
                names().collect::<Vec<_>>().join(", ")
            ))
        })
}

pub fn fixture(name: &str) -> Result<CausalDag> {
    parse_dag(fixture_text(name)?)
}
