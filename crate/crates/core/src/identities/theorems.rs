//! The Littlewood-type identities as truncated power series in `x`.
//!
//! Both sides are compared twice: after multiplying by `Π_{i<j}(u_i - u_j)`,
//! where the left-hand side is a plain sum of antisymmetrized numerators, and
//! after exact division, as series to the requested degree.

use alloc::format;
use alloc::vec::Vec;

use crate::arith::{qpoch, Rat, SpinParams, Spins};
use crate::error::{Error, Result};
use crate::pfaffian::{pfaffian_side_numerator, rhs_main1, MGammaSpec};
use crate::ring::Ring;
use crate::series::{AntisymKernel, Executor, SeriesContext, TruncSeries};
use crate::symfun::Partition;

use super::{Report, Status};

/// Spin parameters (their constant tail is the substitution parameter `s`),
/// `t = q^{1/2}` and the degree cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSetup {
    pub spin: SpinParams,
    pub t: Rat,
    pub d: usize,
}

impl SeriesSetup {
    pub fn new(prefix: Vec<Rat>, s: Rat, t: Rat, d: usize) -> Self {
        SeriesSetup { spin: SpinParams::new(prefix, s), t, d }
    }

    pub fn s(&self) -> &Rat {
        &self.spin.tail
    }

    pub fn p(&self) -> usize {
        self.spin.p()
    }

    fn context(&self, n: usize) -> Result<SeriesContext> {
        SeriesContext::new(n, self.d, self.t.clone(), self.s().clone())
    }

    fn report(&self, check: &str, n: usize) -> Report {
        Report::new(check)
            .param("n", n)
            .param("p", self.p())
            .param("D", self.d)
            .param("t", &self.t)
            .param("s", self.s())
            .param("spins", crate::symfun::format_rats(&self.spin.prefix))
    }
}

/// The weighting of the partition sum on the left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `Π_r (-s_r; q)_{m_r} / (q; q)_{m_r}`
    Main1,
    /// `Π_r (-s_r; t)_{m_r} / (t; t)_{m_r}`
    Cor,
    /// as `Cor` for `r >= 1`, and `(-γt; t)_{m_0} (-s_0/γ; t)_{m_0} / (q; q)_{m_0}` for `r = 0`
    Main2 { gamma: Rat },
}

fn s_over_gamma(s: &Rat, gamma: &Rat) -> Result<Rat> {
    if s.is_zero() {
        Ok(s.clone())
    } else if gamma.is_zero() {
        Err(Error::Pole("γ (in s_0/γ)".into()))
    } else {
        Ok(s / gamma)
    }
}

fn divide(num: Rat, den: Rat, what: &str) -> Result<Rat> {
    if den.is_zero() {
        return Err(Error::Pole(what.into()));
    }
    Ok(num / den)
}

/// The weight of `F_λ` on the left-hand side of `family`.
pub fn lhs_weight(family: &Family, lambda: &Partition, spins: Spins<'_>, t: &Rat) -> Result<Rat> {
    let q = t * t;
    let mut w = Rat::from_integer(1.into());
    for (r, m) in lambda.multiplicities() {
        let s = spins.get(r);
        w *= match family {
            Family::Main1 => divide(qpoch(&-s.clone(), &q, m), qpoch(&q, &q, m), "(q;q)_m")?,
            Family::Main2 { gamma } if r == 0 => {
                let sg = s_over_gamma(s, gamma)?;
                let num = qpoch(&-(gamma * t), t, m) * qpoch(&-sg, t, m);
                divide(num, qpoch(&q, &q, m), "(q;q)_m")?
            }
            _ => divide(qpoch(&-s.clone(), t, m), qpoch(t, t, m), "(t;t)_m")?,
        };
    }
    Ok(w)
}

/// `Σ_λ weight(λ) Π_{a<b}(u_{v_a} - u_{v_b}) F_λ(u_v)` over `lambdas`.
pub fn lhs_numerator<E: Executor>(
    ctx: &SeriesContext,
    family: &Family,
    kernel: &AntisymKernel,
    lambdas: &[Partition],
    spins: Spins<'_>,
    exec: &E,
) -> Result<TruncSeries> {
    let t = ctx.t();
    let terms = exec.map(lambdas.to_vec(), |lambda| -> Result<TruncSeries> {
        let w = lhs_weight(family, &lambda, spins, t)?;
        if w.is_zero() {
            return Ok(TruncSeries::zero(ctx.work_basis()));
        }
        Ok(ctx.numerator(kernel, &lambda, spins)?.scale(&w))
    });
    let mut acc = TruncSeries::zero(ctx.work_basis());
    for term in terms {
        acc = acc + &term?;
    }
    Ok(acc)
}

/// `Π_{i<j} (u_i - u_j)` over the working basis.
pub fn u_vandermonde(ctx: &SeriesContext, vars: &[usize]) -> TruncSeries {
    let u = ctx.u_work();
    let mut acc = TruncSeries::one(ctx.work_basis());
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            acc = acc * &(u[i].clone() - &u[j]);
        }
    }
    acc
}

/// The partitions needed for the cap, and those added when the cap grows by one.
fn partition_ranges(
    ctx: &SeriesContext,
    k: usize,
    spins: Spins<'_>,
    max_order: usize,
) -> Result<(Vec<Partition>, Vec<Partition>)> {
    let inner: Vec<Partition> = ctx.lambda_set(k, spins, max_order)?.into_iter().map(|(l, _)| l).collect();
    let outer: Vec<Partition> =
        ctx.lambda_set(k, spins, max_order + 1)?.into_iter().map(|(l, _)| l).filter(|l| !inner.contains(l)).collect();
    Ok((inner, outer))
}

/// Both sides of one of the identities as series, with the stabilization check.
pub struct TheoremSides {
    pub lhs: TruncSeries,
    pub rhs: TruncSeries,
    pub lhs_numerator: TruncSeries,
    pub rhs_numerator: TruncSeries,
    /// Contribution of the partitions added by raising the cap by one; zero when stable.
    pub extension: TruncSeries,
    pub partitions: usize,
}

pub fn theorem_sides<E: Executor>(family: &Family, setup: &SeriesSetup, n: usize, exec: &E) -> Result<TheoremSides> {
    let ctx = setup.context(n)?;
    let spins = setup.spin.view();
    let vars: Vec<usize> = (0..n).collect();
    let kernel = ctx.kernel(&vars);
    let (inner, outer) = partition_ranges(&ctx, n, spins, setup.d)?;
    let lhs_num = lhs_numerator(&ctx, family, &kernel, &inner, spins, exec)?;
    let extension = lhs_numerator(&ctx, family, &kernel, &outer, spins, exec)?;
    let (rhs_num, rhs) = if n == 0 {
        (TruncSeries::one(ctx.work_basis()), TruncSeries::one(ctx.out_basis()))
    } else {
        match family {
            Family::Main1 => {
                let num = rhs_main1(ctx.u_work(), ctx.q())? * &u_vandermonde(&ctx, &vars);
                (num, rhs_main1(ctx.u_out(), ctx.q())?)
            }
            Family::Cor | Family::Main2 { .. } => {
                let gamma = match family {
                    Family::Main2 { gamma } => gamma.clone(),
                    _ => Rat::from_integer(1.into()),
                };
                let spec = MGammaSpec::new(ctx.u_work().to_vec(), ctx.t().clone(), gamma, spins.get(0).clone());
                let num = pfaffian_side_numerator(&spec)?;
                let rhs = ctx.divide_by_vandermonde(&num, &vars)?;
                (num, rhs)
            }
        }
    };
    let lhs = ctx.divide_by_vandermonde(&lhs_num, &vars)?;
    Ok(TheoremSides { lhs, rhs, lhs_numerator: lhs_num, rhs_numerator: rhs_num, extension, partitions: inner.len() })
}

fn judge(mut report: Report, sides: &TheoremSides) -> Report {
    report = report.param("partitions", sides.partitions);
    if !sides.extension.is_zero() {
        let w = super::first_difference(&sides.extension, &sides.extension.zero_like()).unwrap_or_default();
        report.fail(Status::Unstable, format!("raising the cap changes {w}"));
    }
    report.expect_series_eq("numerators", &sides.lhs_numerator, &sides.rhs_numerator);
    report.expect_series_eq("series", &sides.lhs, &sides.rhs);
    report
}

/// The identity with `(-s_r; q)` weights and the product `Π 1/(1-u_i) Π (1-q u_i u_j)/(1-u_i u_j)`.
pub fn check_main1<E: Executor>(setup: &SeriesSetup, n: usize, exec: &E) -> Result<Report> {
    let sides = theorem_sides(&Family::Main1, setup, n, exec)?;
    Ok(judge(setup.report("main1", n), &sides))
}

/// The Pfaffian identity at `γ = 1`.
pub fn check_cor_main2<E: Executor>(setup: &SeriesSetup, n: usize, exec: &E) -> Result<Report> {
    let sides = theorem_sides(&Family::Cor, setup, n, exec)?;
    Ok(judge(setup.report("cor", n), &sides))
}

/// The Pfaffian identity with parameter `γ`.
pub fn check_main2<E: Executor>(setup: &SeriesSetup, n: usize, gamma: &Rat, exec: &E) -> Result<Report> {
    let sides = theorem_sides(&Family::Main2 { gamma: gamma.clone() }, setup, n, exec)?;
    Ok(judge(setup.report("main2", n).param("gamma", gamma), &sides))
}

/// `main1` at `s_j = -1/q` for all `j`.
pub fn check_bounded_smoke<E: Executor>(t: &Rat, n: usize, d: usize, exec: &E) -> Result<Report> {
    let s = -(t * t).recip();
    let setup = SeriesSetup::new(Vec::new(), s, t.clone(), d);
    let mut report = check_main1(&setup, n, exec)?;
    report.check = "main1-bounded".into();
    Ok(report)
}

/// `Π_i x_i^{λ_i}`-antisymmetrization giving `Π_{i<j}(x_i - x_j) P_λ(x; q)`.
fn hl_numerator(ctx: &SeriesContext, lambda: &Partition) -> Result<TruncSeries> {
    use itertools::Itertools;
    let basis = ctx.work_basis();
    let n = lambda.len();
    let q = ctx.q();
    let one = Rat::from_integer(1.into());
    let mut norm = num_traits::pow(&one - q, n);
    for (_, m) in lambda.multiplicities() {
        norm = divide(norm, qpoch(q, q, m), "(q;q)_m")?;
    }
    let mut acc = TruncSeries::zero(basis);
    for perm in (0..n).permutations(n) {
        let mut e = alloc::vec![0u32; n];
        for a in 0..n {
            e[perm[a]] = lambda.parts()[a] as u32;
        }
        let mut term = TruncSeries::monomial(basis, &e, one.clone());
        for a in 0..n {
            for b in a + 1..n {
                let f = TruncSeries::var(basis, perm[a]) - &TruncSeries::var(basis, perm[b]).scale(q);
                term = term * &f;
            }
        }
        acc = if crate::pfaffian::permutation_sign(&perm) > 0 { acc + &term } else { acc - &term };
    }
    Ok(acc.scale(&norm))
}

/// `Σ_λ Π_{r >= r0} (-t; t)_{m_r} P_λ(x; q)` over `|λ| <= D`.
fn hl_sum(ctx: &SeriesContext, n: usize, d: usize, r0: usize) -> Result<TruncSeries> {
    let t = ctx.t();
    let mut acc = TruncSeries::zero(ctx.work_basis());
    for lambda in Partition::all(n, d).into_iter().filter(|l| l.size() <= d) {
        let mut w = Rat::from_integer(1.into());
        for (r, m) in lambda.multiplicities() {
            if r >= r0 {
                w *= qpoch(&-t.clone(), t, m);
            }
        }
        acc = acc + &hl_numerator(ctx, &lambda)?.scale(&w);
    }
    let vars: Vec<usize> = (0..n).collect();
    ctx.divide_by_vandermonde(&acc, &vars)
}

/// The Hall-Littlewood Littlewood identity, against both its Pfaffian side and
/// the `γ = 1` identity at vanishing spins.
pub fn check_hl_corollary<E: Executor>(n: usize, t: &Rat, d: usize, exec: &E) -> Result<Report> {
    let zero = Rat::from_integer(0.into());
    let setup = SeriesSetup::new(Vec::new(), zero, t.clone(), d);
    let mut report = Report::new("hl").param("n", n).param("D", d).param("t", t);
    let ctx = setup.context(n)?;
    let lhs = hl_sum(&ctx, n, d, 0)?;
    let cor = theorem_sides(&Family::Cor, &setup, n, exec)?;
    report.expect_series_eq("Hall-Littlewood sum vs Pfaffian side", &lhs, &cor.rhs);
    report.expect_series_eq("Hall-Littlewood sum vs spin sum at s = 0", &lhs, &cor.lhs);
    report.absorb(judge(Report::new("cor at s = 0"), &cor));
    Ok(report)
}

/// The specialization `s_0 = 0`, then `γ = 0`, then `s_j = 0`: the weighted
/// spin sum, the Hall-Littlewood sum `Σ Π_{r>=1} (-t;t)_{m_r} P_λ`, and the Pfaffian side.
pub fn check_kawanaka<E: Executor>(n: usize, t: &Rat, d: usize, exec: &E) -> Result<Report> {
    let zero = Rat::from_integer(0.into());
    let setup = SeriesSetup::new(Vec::new(), zero.clone(), t.clone(), d);
    let mut report = Report::new("kawanaka").param("n", n).param("D", d).param("t", t);
    let ctx = setup.context(n)?;
    let lhs = hl_sum(&ctx, n, d, 1)?;
    let sides = theorem_sides(&Family::Main2 { gamma: zero }, &setup, n, exec)?;
    report.expect_series_eq("Hall-Littlewood sum vs Pfaffian side", &lhs, &sides.rhs);
    report.expect_series_eq("Hall-Littlewood sum vs spin sum", &lhs, &sides.lhs);
    report.absorb(judge(Report::new("main2 at γ = 0"), &sides));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::series::Sequential;
    use crate::symfun::hall_littlewood_p;
    use alloc::vec;

    #[test]
    fn no_variables() {
        let setup = SeriesSetup::new(vec![], rat(1, 3), rat(1, 2), 3);
        assert!(check_main1(&setup, 0, &Sequential).unwrap().passed());
        assert!(check_cor_main2(&setup, 0, &Sequential).unwrap().passed());
    }

    #[test]
    fn one_variable() {
        let setup = SeriesSetup::new(vec![], rat(1, 3), rat(2, 5), 6);
        let r = check_main1(&setup, 1, &Sequential).unwrap();
        assert!(r.passed(), "{r}");
        let r = check_cor_main2(&setup, 1, &Sequential).unwrap();
        assert!(r.passed(), "{r}");
        // the Pfaffian side is (1 + t)/(1 - u_1)
        let sides = theorem_sides(&Family::Cor, &setup, 1, &Sequential).unwrap();
        let ctx = setup.context(1).unwrap();
        let u = &ctx.u_out()[0];
        let expect = u.rsub(&int(1)).try_inv().unwrap().scale(&(int(1) + &setup.t));
        assert_eq!(sides.rhs, expect);
    }

    #[test]
    fn two_variables_with_free_spin() {
        let setup = SeriesSetup::new(vec![rat(-2, 7)], rat(1, 3), rat(2, 5), 3);
        for r in [
            check_main1(&setup, 2, &Sequential).unwrap(),
            check_cor_main2(&setup, 2, &Sequential).unwrap(),
            check_main2(&setup, 2, &rat(3, 2), &Sequential).unwrap(),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn wrong_weights_are_caught() {
        let setup = SeriesSetup::new(vec![rat(-2, 7)], rat(1, 3), rat(2, 5), 2);
        let mut sides = theorem_sides(&Family::Main2 { gamma: rat(3, 2) }, &setup, 2, &Sequential).unwrap();
        let other = theorem_sides(&Family::Main2 { gamma: rat(5, 3) }, &setup, 2, &Sequential).unwrap();
        sides.rhs = other.rhs;
        let r = judge(Report::new("mismatch"), &sides);
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn hall_littlewood_numerators() {
        let t = rat(2, 3);
        let ctx = SeriesContext::new(2, 4, t.clone(), int(0)).unwrap();
        let x = [rat(1, 5), rat(-2, 7)];
        for lambda in Partition::all(2, 3).into_iter().filter(|l| l.size() <= 4) {
            let p = ctx.divide_by_vandermonde(&hl_numerator(&ctx, &lambda).unwrap(), &[0, 1]).unwrap();
            assert_eq!(p.eval(&x), hall_littlewood_p(&lambda, &x, &(&t * &t)).unwrap(), "{lambda}");
        }
    }

    #[test]
    fn hall_littlewood_identities() {
        for n in 1..=2 {
            let r = check_hl_corollary(n, &rat(1, 3), 3, &Sequential).unwrap();
            assert!(r.passed(), "{r}");
            let r = check_kawanaka(n, &rat(1, 3), 3, &Sequential).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn weights() {
        let t = rat(1, 2);
        let spin = SpinParams::new(vec![int(0)], rat(1, 3));
        let lambda = Partition::new(vec![1, 0, 0]).unwrap();
        // γ = 0 with s_0 = 0 keeps only 1/(q;q)_{m_0} at r = 0
        let w = lhs_weight(&Family::Main2 { gamma: int(0) }, &lambda, spin.view(), &t).unwrap();
        let q = &t * &t;
        let expect = qpoch(&q, &q, 2).recip() * qpoch(&rat(-1, 3), &t, 1) / qpoch(&t, &t, 1);
        assert_eq!(w, expect);
        let spin = SpinParams::new(vec![rat(1, 5)], rat(1, 3));
        assert!(lhs_weight(&Family::Main2 { gamma: int(0) }, &lambda, spin.view(), &t).unwrap_err().is_pole());
    }
}
