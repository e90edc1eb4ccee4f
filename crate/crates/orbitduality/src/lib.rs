//! Exact combinatorics of nilpotent orbit duality for classical Lie algebras.
//!
//! Every classical computation has a brute-force oracle next to it, and the exceptional types
//! are covered by checked tables.

pub mod error;
pub mod partition;
pub mod orbit;
pub mod group;
pub mod sommers;
pub mod infchar;
pub mod cover;
pub mod oracle;
pub mod exceptional;
pub mod suite;

pub use error::{Error, Result};
pub use orbit::{Decoration, LeviShape, Orbit};
pub use partition::{Kind, Partition};
