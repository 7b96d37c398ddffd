pub mod admissible;
pub mod cli;
pub mod conformal;
pub mod courant;
pub mod dirac;
pub mod error;
pub mod exterior;
pub mod sample;
pub mod scalar;
pub mod structures;

pub use courant::E1Section;
pub use error::{Error, Result};
pub use exterior::{Form, MultiVector};
pub use scalar::Scalar;
