//! Exact evaluation of fully inhomogeneous spin Hall-Littlewood functions,
//! modified and ordinary Robbins polynomials, and the Pfaffian right-hand
//! sides of two Littlewood-type identities, together with a verification
//! harness that cross-checks every identity against an independent route.
//!
//! All arithmetic is over exact rationals. The square root of `q` is carried
//! as an independent parameter `t` with `q = t^2`.
//!
//! The crate is `no_std` and only needs `alloc`. IO, the command line and
//! parallel orchestration live in the companion `spinhl` crate.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod bijection;
pub mod error;
pub mod identities;
pub mod pfaffian;
pub mod ring;
pub mod robbins;
pub mod series;
pub mod symfun;
pub mod vertex;

pub use arith::{qpoch, rat, sample_point, ParamPoint, Rat, Sampler, SpinParams, Spins};
pub use error::{Error, Result};
pub use ring::Ring;
pub use symfun::Partition;
