//! Relations between `F_λ`, ordinary Robbins polynomials and Hall-Littlewood
//! polynomials, and the connection to modified Robbins polynomials.

use alloc::vec::Vec;

use crate::arith::{binomial, qpoch, Rat, SpinParams};
use crate::bijection::verify_lemma_connection;
use crate::error::{Error, Result};
use crate::robbins::robbins_bialternant;
use crate::symfun::{f_lambda_at, format_rats, hall_littlewood_p, Partition};

use super::Report;

fn one() -> Rat {
    Rat::from_integer(1.into())
}

/// The ordinary Robbins polynomial at
/// `(1 - s²q, s(1 - q), s(1 - q), s² - q)` for `(λ_n + 1, ..., λ_1 + 1)`, against
/// `F_λ(u | s, s, ...)` with `u_i = (x_i + s)/(1 + s x_i)`.
pub fn ordinary_robbins_sides(lambda: &Partition, q: &Rat, s: &Rat, x: &[Rat]) -> Result<(Rat, Rat)> {
    let n = lambda.len();
    if x.len() != n {
        return Err(Error::Domain("one x per part expected".into()));
    }
    let k: Vec<i64> = lambda.parts().iter().rev().map(|&p| p as i64 + 1).collect();
    let s2 = s * s;
    let a = one() - &s2 * q;
    let b = s * (one() - q);
    let d = &s2 - q;
    let robbins = robbins_bialternant(&k, x, &a, &b, &b, &d)?;
    let mut u = Vec::with_capacity(n);
    let mut rhs = num_traits::pow(one() - &s2, binomial(n + 1, 2));
    let den = one() - q;
    if den == Rat::from_integer(0.into()) {
        return Err(Error::Pole("1 - q".into()));
    }
    rhs /= num_traits::pow(den, n);
    for xi in x {
        let unit = one() + s * xi;
        if unit == Rat::from_integer(0.into()) {
            return Err(Error::Pole("1 + s x_i".into()));
        }
        rhs *= (&a * xi + &b * (xi * xi + one()) + &d * xi) / &unit;
        u.push((xi + s) / unit);
    }
    let spins = SpinParams::constant(s.clone());
    rhs *= f_lambda_at(lambda, &u, q, spins.view())?;
    Ok((robbins, rhs))
}

pub fn check_ordinary_robbins(lambda: &Partition, q: &Rat, s: &Rat, x: &[Rat]) -> Result<Report> {
    let mut report = Report::new("ordinary Robbins and F")
        .param("lambda", lambda)
        .param("q", q)
        .param("s", s)
        .param("x", format_rats(x));
    let (l, r) = ordinary_robbins_sides(lambda, q, s, x)?;
    report.expect_eq("value", &l, &r);
    Ok(report)
}

/// `P_λ(x; t)` against both ordinary Robbins specializations.
pub fn check_hl_robbins(lambda: &Partition, t: &Rat, x: &[Rat]) -> Result<Report> {
    let n = lambda.len();
    let mut report =
        Report::new("Hall-Littlewood and Robbins").param("lambda", lambda).param("t", t).param("x", format_rats(x));
    let p = hall_littlewood_p(lambda, x, t)?;
    let mut norm = one();
    for (_, m) in lambda.multiplicities() {
        let c = qpoch(t, t, m);
        if c == Rat::from_integer(0.into()) {
            return Err(Error::Pole("(t;t)_m".into()));
        }
        norm /= c;
    }
    let zero = Rat::from_integer(0.into());
    let k: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
    let sign = if binomial(n, 2).is_multiple_of(2) { one() } else { -one() };
    let first = sign * &norm * robbins_bialternant(&k, x, &-t.clone(), &zero, &zero, &one())?;
    report.expect_eq("decreasing exponents", &p, &first);
    let rev: Vec<i64> = k.iter().rev().copied().collect();
    let second = norm * robbins_bialternant(&rev, x, &one(), &zero, &zero, &-t.clone())?;
    report.expect_eq("increasing exponents", &p, &second);
    Ok(report)
}

/// `F_λ` at `s_j = -q^{-1/2}` against the modified Robbins polynomial, with the
/// enumerative and per-object comparisons for strict `λ`.
pub fn check_lemma_connection(lambda: &Partition, t: &Rat, x: &[Rat]) -> Result<Report> {
    let mut report = Report::new("spin Hall-Littlewood and modified Robbins")
        .param("lambda", lambda)
        .param("t", t)
        .param("x", format_rats(x));
    let c = verify_lemma_connection(lambda, t, x)?;
    report.expect_eq("alternant", &c.robbins, &c.spin_hl);
    if let Some(e) = &c.robbins_enum {
        report.expect_eq("DAMT enumeration", e, &c.robbins);
    }
    if let Some(e) = &c.ensemble_sum {
        report.expect_eq("path ensembles", e, &c.robbins);
    }
    if c.per_object == Some(false) {
        report.fail(super::Status::Fail, "an ensemble and its triangle differ in weight");
    }
    Ok(report)
}
