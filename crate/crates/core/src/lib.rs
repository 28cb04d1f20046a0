//! Numerical Dunkl analysis on the real line.
pub mod error;
pub mod func;
pub mod grid;
pub mod interp;
pub mod kernel;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod sonine;
pub mod special;
pub mod transform;
pub mod verify;
pub use error::{DunklError, Result};
