//! Decides simplicity of the C*-algebra of a finite labeled graph through
//! its combinatorial characterization (strongly cofinal and disagreeable),
//! and cross-checks the answer against the cycle / hereditary-saturated
//! condition set and, for trivial labelings, classical graph criteria.

pub mod automaton;
pub mod bitset;
pub mod conditions;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod lattice;
pub mod oracle;
pub mod verdict;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{parse_graph, validate, Label, LabeledGraph, ValidationReport, VertexSet, Word};
pub use lattice::{stable_partition, AtomTable, LatticeElement};
pub use verdict::{Verdict, Witness};
