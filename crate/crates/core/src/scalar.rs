//! The integer scalar abstraction shared by every module.
//!
//! Sets, windows and constructions are generic over [`Int`], which is
//! satisfied by the signed primitive integers and by [`num_bigint::BigInt`].
//! Fixed-width scalars report [`Error::Overflow`] instead of wrapping; the
//! constructions grow exponentially, so the CLI instantiates them at `BigInt`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// An exact signed integer type.
pub trait Int:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Integer
    + Signed
    + Roots
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Integer
        + Signed
        + Roots
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn add<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sub<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul<T: Int>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `k * a` for a machine-sized multiplier.
pub(crate) fn scale<T: Int>(k: usize, a: &T) -> Result<T> {
    mul(&from_usize::<T>(k)?, a)
}

pub(crate) fn from_usize<T: Int>(k: usize) -> Result<T> {
    T::from_usize(k).ok_or(Error::Overflow)
}

pub(crate) fn from_i64<T: Int>(k: i64) -> Result<T> {
    T::from_i64(k).ok_or(Error::Overflow)
}

/// Converts a nonnegative scalar to an index, e.g. a window offset.
pub(crate) fn to_index<T: Int>(v: &T) -> Result<usize> {
    v.to_usize().ok_or(Error::WindowTooLarge)
}
