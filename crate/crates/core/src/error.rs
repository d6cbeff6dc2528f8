use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A denominator vanished at the evaluation point.
    Pole(String),
    /// Input violates an operation's precondition.
    Domain(String),
    /// Pfaffian of an odd-dimensional matrix.
    OddDimension(usize),
    /// The sampler could not find a pole-free point within its budget.
    SamplerExhausted { seed: u64, attempts: u32 },
    /// An exact series division left a nonzero remainder.
    NotDivisible(String),
}

impl Error {
    /// Prefix the message of a pole error with extra context.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            Error::Pole(what) => Error::Pole(alloc::format!("{ctx}: {what}")),
            other => other,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Error::Pole(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole(what) => write!(f, "pole: {what} vanishes"),
            Error::Domain(msg) => write!(f, "invalid input: {msg}"),
            Error::OddDimension(d) => write!(f, "pfaffian of odd dimension {d}"),
            Error::SamplerExhausted { seed, attempts } => {
                write!(f, "no pole-free point after {attempts} attempts (seed {seed})")
            }
            Error::NotDivisible(msg) => write!(f, "inexact division: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
