//! The commutative-ring interface shared by exact scalars and truncated
//! power series, so that one formula serves both point and series mode.

use alloc::string::String;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arith::Rat;
use crate::error::{Error, Result};

pub trait Ring:
    Clone
    + PartialEq
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Embed a scalar into the same ring (same variable count, same precision).
    fn constant_like(&self, c: &Rat) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    /// Multiplicative inverse when it exists (nonzero scalar, unit series).
    fn try_inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    /// `c - self`
    fn rsub(&self, c: &Rat) -> Self {
        self.constant_like(c) - self
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }
}

/// `num / den`, reporting `what` as the vanishing denominator.
pub fn div<R: Ring>(num: &R, den: &R, what: impl FnOnce() -> String) -> Result<R> {
    match den.try_inv() {
        Some(inv) => Ok(num.clone() * &inv),
        None => Err(Error::Pole(what())),
    }
}

pub fn inv<R: Ring>(den: &R, what: impl FnOnce() -> String) -> Result<R> {
    den.try_inv().ok_or_else(|| Error::Pole(what()))
}

/// Product over an iterator, starting from `one`.
pub fn product<R: Ring>(one: R, items: impl IntoIterator<Item = R>) -> R {
    items.into_iter().fold(one, |acc, x| acc * &x)
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::from_integer(0.into())
    }
    fn one_like(&self) -> Self {
        Rat::from_integer(1.into())
    }
    fn constant_like(&self, c: &Rat) -> Self {
        c.clone()
    }
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn try_inv(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self.clone()))
        }
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}
