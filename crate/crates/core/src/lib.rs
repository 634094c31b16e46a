//! Matrix semantics for spiking neural P systems.
//!
//! The crate builds the spiking transition matrix and its relatives from a
//! system description, steps configurations with and without rule delays,
//! and decides bounded reachability of configurations by solving the
//! integer system `C - C0 = s · M` and splitting `s` into valid spiking
//! vectors.

pub mod engine;
pub mod error;
pub mod forms;
pub mod generate;
pub mod linalg;
pub mod matrix;
pub mod reachability;
pub mod regex;
pub mod scalar;
pub mod system;

pub use error::{EngineError, MatrixError, MatrixFormError, ParseError, ReachabilityError, RegexError};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use system::{parse_system, serialize_system, validate, SnpSystem};

/// Matrices used by the simulator and the reachability search.
pub type IntMatrix = Matrix<i64>;
/// Arbitrary-precision matrices for the linear-algebra routines.
pub type BigIntMatrix = Matrix<num_bigint::BigInt>;
