//! Exact tropical geometry with phases.
//!
//! Tropicalizations, tropical reductions, coamoebae, non-archimedean
//! coamoebae and phase tropical varieties of hypersurfaces and simple
//! varieties over a field of generalized power series with complex residue
//! field and rational value group.

pub mod coamoeba;
pub mod error;
pub mod exact;
pub mod laurent;
pub mod lp;
pub mod nca;
pub mod oracle;
pub mod polyhedral;
pub mod series;

pub use error::{Error, Result};
