//! Recurrences for the left-hand sides `H` of the identities, obtained by
//! splitting off the smallest part `l` of `λ` and its multiplicity.
//!
//! Checked as series after multiplying through by `Π_{i<j}(u_i - u_j)`.
//! With `i ∈ T, j ∉ T`, `Π_{i<j}(u_i - u_j) / Π (u_i - u_j)` is
//! `sgn(T) Π_{T}(u_i - u_j) Π_{T^c}(u_i - u_j)`, so every term is a product of
//! series and a sub-numerator over the variables in `T`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::arith::{binomial, crossing_sign, members, qpoch, ParamPoint, Rat, Spins};
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::{Executor, SeriesContext, TruncSeries};
use crate::symfun::{f_lambda, f_lambda_recurrence_rhs, Partition};

use super::theorems::{lhs_numerator, Family, SeriesSetup};
use super::Report;

#[derive(Debug, Clone, PartialEq)]
pub enum Recurrence {
    /// For the `(-s_r; q)` weighted sum.
    One,
    /// For the `γ`-weighted sum; the sub-sums carry the `γ = 1` weights.
    Two { gamma: Rat },
    /// The `γ = 1` case of `Two`.
    TwoV,
}

impl Recurrence {
    pub fn name(&self) -> &'static str {
        match self {
            Recurrence::One => "rec1",
            Recurrence::Two { .. } => "rec2",
            Recurrence::TwoV => "rec2v",
        }
    }

    fn lhs_family(&self) -> Family {
        match self {
            Recurrence::One => Family::Main1,
            Recurrence::Two { gamma } => Family::Main2 { gamma: gamma.clone() },
            Recurrence::TwoV => Family::Cor,
        }
    }

    fn sub_family(&self) -> Family {
        match self {
            Recurrence::One => Family::Main1,
            _ => Family::Cor,
        }
    }

    /// Coefficient of the `(l, T)` term, with `m = n - |T|`.
    pub fn coefficient(&self, l: usize, m: usize, spins: Spins<'_>, t: &Rat) -> Result<Rat> {
        let s = spins.get(l);
        Ok(match self {
            Recurrence::One => qpoch(&-s.clone(), &(t * t), m),
            Recurrence::Two { gamma } if l == 0 => {
                let sg = if s.is_zero() {
                    s.clone()
                } else if gamma.is_zero() {
                    return Err(Error::Pole("γ (in s_0/γ)".into()));
                } else {
                    s / gamma
                };
                qpoch(&-(gamma * t), t, m) * qpoch(&-sg, t, m)
            }
            _ => qpoch(&-t.clone(), t, m) * qpoch(&-s.clone(), t, m),
        })
    }
}

/// The terms of a recurrence in numerator form, with cached sub-numerators.
pub struct RecurrenceTerms<'a, E: Executor> {
    ctx: SeriesContext,
    setup: &'a SeriesSetup,
    rec: Recurrence,
    exec: &'a E,
    sub: BTreeMap<(u32, usize), TruncSeries>,
    pi: BTreeMap<usize, TruncSeries>,
}

impl<'a, E: Executor> RecurrenceTerms<'a, E> {
    pub fn new(rec: Recurrence, setup: &'a SeriesSetup, n: usize, exec: &'a E) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("the recurrences need n >= 1".into()));
        }
        let ctx = SeriesContext::new(n, setup.d, setup.t.clone(), setup.s().clone())?;
        Ok(RecurrenceTerms { ctx, setup, rec, exec, sub: BTreeMap::new(), pi: BTreeMap::new() })
    }

    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    fn n(&self) -> usize {
        self.ctx.n()
    }

    fn cap(&self) -> usize {
        self.ctx.work_basis().cap()
    }

    /// `Π_i 1/(1 - s_l u_i) Π_{j<l} (u_i - s_j)/(1 - s_j u_i)`.
    fn pi(&mut self, l: usize) -> Result<TruncSeries> {
        if let Some(p) = self.pi.get(&l) {
            return Ok(p.clone());
        }
        let one = Rat::from_integer(1.into());
        let scale = &one - self.ctx.q();
        if scale.is_zero() {
            return Err(Error::Pole("1 - q".into()));
        }
        let coeffs = self.ctx.part_series(l, self.setup.spin.view())?;
        let factors: Vec<(usize, &[Rat])> = (0..self.n()).map(|i| (i, coeffs.as_slice())).collect();
        let norm = num_traits::pow(scale.recip(), self.n());
        let p = TruncSeries::tensor(self.ctx.work_basis(), &factors).scale(&norm);
        self.pi.insert(l, p.clone());
        Ok(p)
    }

    /// `Π_{a<b}(u_{T_a} - u_{T_b}) H(u_T | s_{l+1}, ...)`, to the precision the term needs.
    fn sub_numerator(&mut self, mask: u32, l: usize) -> Result<TruncSeries> {
        let shift = (l + 1).min(self.setup.p());
        if let Some(s) = self.sub.get(&(mask, shift)) {
            return Ok(s.clone());
        }
        let n = self.n();
        let vars = members(mask, n);
        let k = vars.len();
        let spins = self.setup.spin.view().shift(shift);
        let max_order = self.cap() - binomial(k, 2) - binomial(n - k, 2);
        let lambdas: Vec<Partition> = self.ctx.lambda_set(k, spins, max_order)?.into_iter().map(|(l, _)| l).collect();
        let kernel = self.ctx.kernel(&vars);
        let num = lhs_numerator(&self.ctx, &self.rec.sub_family(), &kernel, &lambdas, spins, self.exec)?;
        self.sub.insert((mask, shift), num.clone());
        Ok(num)
    }

    /// The `(l, T)` term for `T ⊊ [n]` given as a bitmask.
    pub fn term(&mut self, l: usize, mask: u32) -> Result<TruncSeries> {
        let n = self.n();
        let ctx = &self.ctx;
        let q = ctx.q().clone();
        let u = ctx.u_work().to_vec();
        let spins = self.setup.spin.view();
        let s_l = spins.get(l).clone();
        let inside = members(mask, n);
        let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
        let c = self.rec.coefficient(l, outside.len(), spins, &self.setup.t)?;
        let mut acc = TruncSeries::constant(ctx.work_basis(), c * Rat::from_integer(crossing_sign(mask, n).into()));
        for &i in &inside {
            acc = acc * &(u[i].clone() - &TruncSeries::constant(ctx.work_basis(), s_l.clone()));
            for &j in &outside {
                acc = acc * &(u[i].clone() - &u[j].scale(&q));
            }
        }
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                acc = acc * &(u[i].clone() - &u[j]);
            }
        }
        Ok(acc * &self.pi(l)? * &self.sub_numerator(mask, l)?)
    }

    /// `Σ_{T ⊊ [n]}` of the `l` terms.
    pub fn level(&mut self, l: usize) -> Result<TruncSeries> {
        let mut acc = TruncSeries::zero(self.ctx.work_basis());
        for mask in 0..(1u32 << self.n()) - 1 {
            acc = acc + &self.term(l, mask)?;
        }
        Ok(acc)
    }

    /// The `l`-sum up to the last level that reaches the working precision.
    pub fn direct(&mut self) -> Result<TruncSeries> {
        let last = self.setup.p() + self.cap() / self.n();
        let mut acc = TruncSeries::zero(self.ctx.work_basis());
        for l in 0..=last {
            acc = acc + &self.level(l)?;
        }
        Ok(acc)
    }

    /// Levels below `max(p, 1)`, then the rest as a geometric series in
    /// `x_1 ⋯ x_n`: from there on each level is the previous one times `x_1 ⋯ x_n`.
    pub fn geometric(&mut self) -> Result<TruncSeries> {
        let start = self.setup.p().max(1);
        let mut acc = TruncSeries::zero(self.ctx.work_basis());
        for l in 0..start {
            acc = acc + &self.level(l)?;
        }
        let basis = self.ctx.work_basis();
        let ratio = TruncSeries::monomial(basis, &alloc::vec![1; self.n()], Rat::from_integer(1.into()));
        let tail = crate::ring::inv(&ratio.rsub(&Rat::from_integer(1.into())), || "1 - x_1⋯x_n".into())?;
        Ok(acc + &(self.level(start)? * &tail))
    }

    /// `Π_{i<j}(u_i - u_j) H(u)`.
    pub fn lhs(&self) -> Result<TruncSeries> {
        let n = self.n();
        let spins = self.setup.spin.view();
        let vars: Vec<usize> = (0..n).collect();
        let lambdas: Vec<Partition> =
            self.ctx.lambda_set(n, spins, self.setup.d)?.into_iter().map(|(l, _)| l).collect();
        lhs_numerator(&self.ctx, &self.rec.lhs_family(), &self.ctx.kernel(&vars), &lambdas, spins, self.exec)
    }
}

/// One recurrence as a series identity, with the `l`-sum taken both directly
/// and through the geometric tail.
pub fn check_recurrence<E: Executor>(rec: &Recurrence, setup: &SeriesSetup, n: usize, exec: &E) -> Result<Report> {
    let mut report = Report::new(rec.name())
        .param("n", n)
        .param("p", setup.p())
        .param("D", setup.d)
        .param("t", &setup.t)
        .param("s", setup.s())
        .param("spins", crate::symfun::format_rats(&setup.spin.prefix));
    if let Recurrence::Two { gamma } = rec {
        report = report.param("gamma", gamma);
    }
    let mut terms = RecurrenceTerms::new(rec.clone(), setup, n, exec)?;
    let lhs = terms.lhs()?;
    let direct = terms.direct()?;
    let geometric = terms.geometric()?;
    report.expect_series_eq("direct l-sum", &lhs, &direct);
    report.expect_series_eq("geometric tail", &direct, &geometric);
    let vars: Vec<usize> = (0..n).collect();
    let ctx = terms.context();
    let h = ctx.divide_by_vandermonde(&lhs, &vars)?;
    let r = ctx.divide_by_vandermonde(&geometric, &vars)?;
    report.expect_series_eq("series", &h, &r);
    Ok(report)
}

/// The `γ = 1` case of the second recurrence against the third, term by term.
pub fn check_rec2_termwise<E: Executor>(setup: &SeriesSetup, n: usize, exec: &E) -> Result<Report> {
    let one = Rat::from_integer(1.into());
    let mut report = Report::new("rec2 at γ = 1 vs rec2v").param("n", n).param("D", setup.d);
    let mut two = RecurrenceTerms::new(Recurrence::Two { gamma: one }, setup, n, exec)?;
    let mut twov = RecurrenceTerms::new(Recurrence::TwoV, setup, n, exec)?;
    for l in 0..=setup.p().max(1) {
        for mask in 0..(1u32 << n) - 1 {
            report.expect_series_eq(
                &format!("l = {l}, T = {:?}", members(mask, n)),
                &two.term(l, mask)?,
                &twov.term(l, mask)?,
            );
        }
    }
    Ok(report)
}

/// The recurrence for a single `F_λ` at a point.
pub fn check_f_recurrence(lambda: &Partition, point: &ParamPoint) -> Result<Report> {
    let mut report = Report::new("F recurrence").param("lambda", lambda);
    report.expect_eq("value", &f_lambda(lambda, point)?, &f_lambda_recurrence_rhs(lambda, point)?);
    Ok(report)
}
