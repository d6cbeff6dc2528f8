//! Command-line front end for `spinhl-core`: evaluation, enumeration,
//! bijection inspection and the identity verification suite, all with JSON
//! output. Rationals are encoded as `"p/q"` strings.
//!
//! Checks run on a rayon pool sized by `--jobs`; results are gathered in a
//! fixed order, so the output depends only on the flags and the seed.

pub mod cli;
pub mod config;
pub mod exec;
pub mod json;
pub mod verify;

pub use cli::{run, Outcome};
