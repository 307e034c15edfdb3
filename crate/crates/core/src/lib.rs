//! Polaritonic band structure of three-dimensional subwavelength atomic
//! arrays: lattice sums, Bloch bands, Weyl nodes and surface arcs.

pub mod bloch;
pub mod contour;
pub mod eigen;
pub mod error;
pub mod ewald;
pub mod export;
pub mod lattice;
pub mod model;
pub mod phase;
pub mod slab;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
