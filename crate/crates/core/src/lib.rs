pub mod clifford;
pub mod constructions;
pub mod distributions;
pub mod error;
pub mod linalg;
pub mod orbits;
pub mod scalars;
pub mod weyl;

pub use error::{Error, Result};
