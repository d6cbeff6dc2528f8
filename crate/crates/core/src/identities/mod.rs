//! Executable checks of the identities: the Littlewood-type theorems and
//! their Hall-Littlewood specializations as truncated series, the
//! recurrences for their left-hand sides, the key polynomial lemmas, the
//! intermediate equations of the reductions, and the Robbins relations.
//!
//! Series-valued statements are checked coefficientwise; polynomial and
//! rational identities are checked exactly at seeded generic points.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rat;
use crate::series::TruncSeries;

pub mod chains;
pub mod lemmas;
pub mod recurrences;
pub mod remarks;
pub mod theorems;

pub use chains::{chain_at, check_reduction_chain, Chain};
pub use lemmas::{
    check_key_lemma1, check_key_lemma2, check_key_lemma2_a, interpolate, key_lemma1_sides, key_lemma2_a_sides,
    key_lemma2_sides, key_lemma_degrees,
};
pub use recurrences::{check_f_recurrence, check_rec2_termwise, check_recurrence, Recurrence};
pub use remarks::{check_hl_robbins, check_lemma_connection, check_ordinary_robbins, ordinary_robbins_sides};
pub use theorems::{
    check_bounded_smoke, check_cor_main2, check_hl_corollary, check_kawanaka, check_main1, check_main2, Family,
    SeriesSetup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Enlarging the partition range changed a coefficient within the cap.
    Unstable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unstable => "unstable",
        })
    }
}

/// Outcome of one check, with its parameters and the first discrepancy found.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub check: String,
    pub params: Vec<(String, String)>,
    pub status: Status,
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report { check: check.to_string(), params: Vec::new(), status: Status::Pass, witness: None, notes: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Record a failure unless one is already recorded.
    pub fn fail(&mut self, status: Status, witness: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = status;
            self.witness = Some(witness.into());
        }
    }

    /// Compare two exact values under `label`.
    pub fn expect_eq(&mut self, label: &str, lhs: &Rat, rhs: &Rat) {
        if lhs != rhs {
            self.fail(Status::Fail, format!("{label}: {lhs} != {rhs}"));
        }
    }

    /// Compare two series coefficientwise under `label`.
    pub fn expect_series_eq(&mut self, label: &str, lhs: &TruncSeries, rhs: &TruncSeries) {
        if let Some(w) = first_difference(lhs, rhs) {
            self.fail(Status::Fail, format!("{label}: {w}"));
        }
    }

    /// Fold a sub-report into this one.
    pub fn absorb(&mut self, other: Report) {
        if let Some(w) = other.witness {
            self.fail(other.status, format!("{}: {w}", other.check));
        }
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.check, self.status)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

/// The first monomial, in graded lexicographic order, where two series differ.
pub fn first_difference(lhs: &TruncSeries, rhs: &TruncSeries) -> Option<String> {
    let diff = lhs.clone() - rhs;
    let (m, _) = diff.terms().next()?;
    Some(format!("coefficient of x^{m:?}: {} != {}", lhs.coeff(m), rhs.coeff(m)))
}
