//! Exact max-plus (tropical) linear algebra over arbitrary-precision
//! rationals, with the machinery needed to study the eventual periodicity
//! of matrix powers: CSR decompositions, weak CSR expansions under the
//! Nachtigall, Hartmann-Arguelles and Cycle Threshold schemes, certified
//! transient measurement, walk-threshold dynamic programs, and a catalog of
//! closed-form transient bounds.

pub mod bounds;
pub mod bruteforce;
pub mod csr;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod rank;
pub mod scalar;
pub mod schemes;
pub mod thresholds;
pub mod transient;

pub use error::{Result, TropError};
pub use matrix::TropMatrix;
pub use scalar::TropScalar;
