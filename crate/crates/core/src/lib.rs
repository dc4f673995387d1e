//! Relative presentations and the computational side of relative hyperbolicity:
//! relative Cayley geometry, relative areas and Dehn profiles, finite windows of
//! the bounded relative cochain complex, and corridor/flare checks for free-group
//! actions by relative automorphisms.

pub mod cayley;
pub mod cli;
pub mod cochain;
pub mod corridor;
pub mod error;
pub mod filling;
pub mod oracle;
pub mod presentation;

pub use error::{Error, Result};
pub use oracle::{Group, OracleSpec, WordProblemVerdict};
pub use presentation::{Letter, PeripheralModel, RelativePresentation, Word};

/// Tool version embedded in every CLI artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
