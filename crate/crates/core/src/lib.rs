//! Stallings graphs of finitely generated subgroups of PSL₂(ℤ) = ⟨a, b | a², b³⟩.

pub mod codec;
pub mod count;
pub mod analyze;
pub mod enumerate;
pub mod experiment;
pub mod graph;
pub mod moves;
pub mod sample;
pub mod stallings;
pub mod words;

pub use graph::{CombType, GraphBuilder, GraphError, IsoType, Label, LabeledGraph};
pub use words::{GeodesicWord, Letter, Word};
