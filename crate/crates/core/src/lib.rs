pub mod automorphism;
pub mod basis;
pub mod covering;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod linalg;
pub mod minvec;

pub use error::{Error, Result};
