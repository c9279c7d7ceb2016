pub mod constructions;
pub mod document;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod maps;
pub mod suite;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{DigitalImage, VertexId, VertexSet};
pub use lattice::{CuSpec, LatticePoint};
pub use maps::Mapping;
pub use verifier::{Pruning, SearchBudget, Verdict, VerificationReport, Verifier};
