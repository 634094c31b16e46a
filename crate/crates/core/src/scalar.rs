//! Exact scalar types accepted by the matrix and lattice routines.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer ring element: `i32`, `i64`, `i128` or `BigInt`.
///
/// Every matrix in the toolkit lives over one of these. Floating point types
/// do not implement `Integer` and are rejected at compile time.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
