//! Threshold-model cascades on hypergraphs and seed selection by the
//! hypergraph collective influence (HCI) score.

pub mod cascade;
pub mod gen;
pub mod harness;
pub mod hci;
pub mod hypergraph;
pub mod msgpass;
pub mod seedsel;

pub use cascade::{run_cascade, CascadeResult, CascadeState, SeedVector};
pub use hypergraph::{build_hypergraph, Element, Hypergraph, HypergraphBuilder, Thresholds};
pub use seedsel::{select, Algorithm, SelectionConfig, SelectionResult};
