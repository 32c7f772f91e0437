//! Exact computation of top Segre integrals of tautological sheaves on
//! Hilbert schemes of points of the projective plane, for the structure sheaf
//! of a plane curve of degree `d`.

pub mod cli;
pub mod coeff;
pub mod error;
pub mod integrals;
pub mod operators;
pub mod series;
pub mod symalg;

pub use error::{Error, Result};
