//! Scalar traits shared by the lattice and polynomial layers.
//!
//! Lattice data (ranks, Chern classes, Euler characteristics, intersection
//! numbers) lives in a fixed-width signed machine integer chosen by the caller
//! through [`LatticeInt`]. Polynomial coefficients live in any exact signed
//! ring implementing [`Coeff`]; the crate-root aliases pick `i64` and
//! [`num_bigint::BigInt`] respectively.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Num, PrimInt, Signed, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Signed machine integer used for lattice coordinates.
pub trait LatticeInt:
    PrimInt
    + Integer
    + Signed
    + Hash
    + Debug
    + Display
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts a small literal into the lattice type.
    ///
    /// Panics if the value does not fit, which only happens for literals
    /// beyond the range of the chosen width.
    fn lit(v: i64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("integer literal out of range")
    }

    /// Lossy-free conversion to `i64` for indices and counts.
    fn as_i64(self) -> i64 {
        self.to_i64().expect("lattice value exceeds i64")
    }
}

impl<T> LatticeInt for T where
    T: PrimInt
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + FromStr
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// Exact signed coefficient ring for polynomials in `t`.
pub trait Coeff:
    Clone + PartialEq + Debug + Display + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("coefficient literal out of range")
    }
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
