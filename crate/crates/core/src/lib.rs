//! Exact computations for Boolean easy quantum semigroups: interval
//! partition categories, Möbius functions, Weingarten matrices, Haar
//! states, Boolean cumulants and de Finetti type checks.

pub mod cumulants;
pub mod definetti;
pub mod error;
pub mod haar;
pub mod matrix;
pub mod partitions;
pub mod posets;
pub mod representations;
pub mod scalar;
pub mod verify;
pub mod weingarten;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use partitions::{CategoryId, MultiIndex, SetPartition};
pub use scalar::ExactScalar;
