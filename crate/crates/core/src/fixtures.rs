//! The in-repo fixture corpus (`fixtures/*.lg`).

use crate::graph::{parse_graph, LabeledGraph};

pub const NAMES: [&str; 10] = ["G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10"];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "G1" => include_str!("../fixtures/G1.lg"),
        "G2" => include_str!("../fixtures/G2.lg"),
        "G3" => include_str!("../fixtures/G3.lg"),
        "G4" => include_str!("../fixtures/G4.lg"),
        "G5" => include_str!("../fixtures/G5.lg"),
        "G6" => include_str!("../fixtures/G6.lg"),
        "G7" => include_str!("../fixtures/G7.lg"),
        "G8" => include_str!("../fixtures/G8.lg"),
        "G9" => include_str!("../fixtures/G9.lg"),
        "G10" => include_str!("../fixtures/G10.lg"),
        _ => return None,
    })
}

/// Parses a named fixture. Panics on an unknown name.
pub fn load(name: &str) -> LabeledGraph {
    let src = text(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    parse_graph(src).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
