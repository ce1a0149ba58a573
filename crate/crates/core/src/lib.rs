//! Multiplied incidence configurations.
//!
//! Builds structures by correlative multiplying, dualisation multiplying and
//! gluing along correlations; recovers the covering by layers from incidence
//! alone; checks the synthetic conditions on coverings; and constructs and
//! verifies the explicit isomorphisms between these descriptions.

pub mod axioms;
pub mod covering;
pub mod error;
pub mod generators;
pub mod io;
pub mod morphism;
pub mod multiply;
pub mod representation;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use morphism::{MapKind, StructureMap};
pub use structure::IncidenceStructure;
