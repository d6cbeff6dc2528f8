//! The intermediate equations by which the product sides are shown to satisfy
//! the recurrences, each checked exactly at a sampled point.
//!
//! Notation used below, for a point `u` and spins `s_j`:
//! `P_l = Π_i Π_{j<l} (u_i - s_j)/(1 - s_j u_i)`, `ρ_l = Π_i (u_i - s_l)/(1 - s_l u_i)`,
//! `Π_l = P_l Π_i 1/(1 - s_l u_i)`, and for `T ⊆ [n]`
//! `a_l(T) = c_l(n - |T|) Π_{i∈T} (u_i - s_l) Π_l`,
//! `cross(T) = Π_{i∈T, j∉T} (u_i - q u_j)/(u_i - u_j)`, with `c_l` the coefficient
//! of the matching recurrence.

use alloc::format;
use alloc::vec::Vec;

use crate::arith::{members, with_generic_point, ParamPoint, Rat, Spins};
use crate::error::{Error, Result};
use crate::pfaffian::{mask_labels, pfaffian, rhs_cor, rhs_main1_or_one, rhs_main2, MGammaSpec};

use super::lemmas::{key_lemma1_sides, key_lemma2_sides};
use super::recurrences::Recurrence;
use super::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    Main1,
    Cor,
    Main2,
}

impl Chain {
    pub fn name(&self) -> &'static str {
        match self {
            Chain::Main1 => "chain main1",
            Chain::Cor => "chain cor",
            Chain::Main2 => "chain main2",
        }
    }
}

fn one() -> Rat {
    Rat::from_integer(1.into())
}

fn zero() -> Rat {
    Rat::from_integer(0.into())
}

fn nonzero(x: Rat, what: &str) -> Result<Rat> {
    if x == zero() {
        Err(Error::Pole(what.into()))
    } else {
        Ok(x)
    }
}

struct Point<'a> {
    u: &'a [Rat],
    t: &'a Rat,
    q: Rat,
    spins: Spins<'a>,
}

impl Point<'_> {
    fn n(&self) -> usize {
        self.u.len()
    }

    fn p_factor(&self, l: usize) -> Result<Rat> {
        let mut acc = one();
        for j in 0..l {
            acc *= self.rho(j)?;
        }
        Ok(acc)
    }

    fn rho(&self, l: usize) -> Result<Rat> {
        let s = self.spins.get(l);
        let mut acc = one();
        for ui in self.u {
            acc *= (ui - s) / nonzero(one() - s * ui, "1 - s_l u_i")?;
        }
        Ok(acc)
    }

    fn pi(&self, l: usize) -> Result<Rat> {
        let s = self.spins.get(l);
        let mut acc = self.p_factor(l)?;
        for ui in self.u {
            acc /= nonzero(one() - s * ui, "1 - s_l u_i")?;
        }
        Ok(acc)
    }

    fn subset(&self, mask: u32) -> Vec<Rat> {
        members(mask, self.n()).into_iter().map(|i| self.u[i].clone()).collect()
    }

    fn cross(&self, mask: u32) -> Result<Rat> {
        let n = self.n();
        let mut acc = one();
        for i in members(mask, n) {
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                acc *= (&self.u[i] - &self.q * &self.u[j]) / nonzero(&self.u[i] - &self.u[j], "u_i - u_j")?;
            }
        }
        Ok(acc)
    }

    fn a(&self, rec: &Recurrence, l: usize, mask: u32) -> Result<Rat> {
        let s = self.spins.get(l);
        let inside = members(mask, self.n());
        let mut acc = rec.coefficient(l, self.n() - inside.len(), self.spins, self.t)? * self.pi(l)?;
        for i in inside {
            acc *= &self.u[i] - s;
        }
        Ok(acc)
    }

    /// `Π(1 - u_i) Π_{i<j} (1 - u_i u_j)(u_i - u_j)`
    fn clearing(&self) -> Rat {
        let u = self.u;
        let mut acc = one();
        for i in 0..u.len() {
            acc *= one() - &u[i];
            for j in i + 1..u.len() {
                acc *= (one() - &u[i] * &u[j]) * (&u[i] - &u[j]);
            }
        }
        acc
    }

    fn vandermonde(&self) -> Rat {
        let u = self.u;
        let mut acc = one();
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                acc *= &u[i] - &u[j];
            }
        }
        acc
    }
}

fn full(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// `Σ_{T ⊊ [n]} cross(T) R(u_T) f(T)`.
fn subset_sum(pt: &Point<'_>, sub: &[Rat], mut f: impl FnMut(u32) -> Result<Rat>) -> Result<Rat> {
    let mut acc = zero();
    for mask in 0..full(pt.n()) {
        acc += pt.cross(mask)? * &sub[mask as usize] * f(mask)?;
    }
    Ok(acc)
}

/// The first chain: the product side, its recurrence with the geometric tail,
/// the version multiplied through by `1 - ρ_p`, the single-level equations and
/// their telescoping, and each level as the polynomial identity at `s = s_l`.
fn main1_chain(report: &mut Report, pt: &Point<'_>, p: usize) -> Result<()> {
    let rec = Recurrence::One;
    let n = pt.n();
    let lhs = rhs_main1_or_one(pt.u, &pt.q)?;
    let sub: Vec<Rat> = (0..=full(n)).map(|m| rhs_main1_or_one(&pt.subset(m), &pt.q)).collect::<Result<_>>()?;
    level_equations(report, pt, p, &rec, &lhs, &sub)?;
    for l in 0..=p {
        let k = pt.clearing() / pt.pi(l)?;
        let (kl, kr) = key_lemma1_sides(pt.u, &pt.q, pt.spins.get(l));
        let (el, er) = extended_level(pt, &rec, l, &lhs, &sub)?;
        report.expect_eq(&format!("l = {l}: left side against the polynomial identity"), &(el * &k), &kl);
        report.expect_eq(&format!("l = {l}: right side against the polynomial identity"), &(er * &k), &kr);
    }
    Ok(())
}

/// Shared by the first two chains.
fn level_equations(
    report: &mut Report,
    pt: &Point<'_>,
    p: usize,
    rec: &Recurrence,
    lhs: &Rat,
    sub: &[Rat],
) -> Result<()> {
    // the recurrence with the levels from p on summed as a geometric series
    let mut rhs = zero();
    for l in 0..p {
        rhs += subset_sum(pt, sub, |m| pt.a(rec, l, m))?;
    }
    let rho_p = pt.rho(p)?;
    rhs += subset_sum(pt, sub, |m| pt.a(rec, p, m))? / nonzero(one() - &rho_p, "1 - ρ_p")?;
    report.expect_eq("recurrence with geometric tail", lhs, &rhs);

    // times 1 - ρ_p
    let rhs = subset_sum(pt, sub, |m| {
        let mut upto = zero();
        let mut below = zero();
        for l in 0..=p {
            let a = pt.a(rec, l, m)?;
            if l < p {
                below += &a;
            }
            upto += a;
        }
        Ok(upto - &rho_p * below)
    })?;
    report.expect_eq("times 1 - ρ_p", &((one() - &rho_p) * lhs), &rhs);

    // single levels, and their telescoping back to the previous equation
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for l in 0..=p {
        let left = pt.p_factor(l)? * (one() - pt.rho(l)?) * lhs;
        let right = subset_sum(pt, sub, |m| pt.a(rec, l, m))?;
        report.expect_eq(&format!("level l = {l}"), &left, &right);
        lefts.push(left);
        rights.push(right);
    }
    let tele = |v: &[Rat]| -> Rat {
        let all: Rat = v.iter().cloned().sum();
        let below: Rat = v[..p].iter().cloned().sum();
        all - &rho_p * below
    };
    report.expect_eq("levels telescope (left)", &tele(&lefts), &((one() - &rho_p) * lhs));
    report.expect_eq("levels telescope (right)", &tele(&rights), &((one() - &rho_p) * lhs));
    Ok(())
}

/// Level `l` with the `T = [n]` term moved to the right: `P_l R(u)` against
/// `Σ_{T ⊆ [n]} a_l(T) cross(T) R(u_T)`.
fn extended_level(pt: &Point<'_>, rec: &Recurrence, l: usize, lhs: &Rat, sub: &[Rat]) -> Result<(Rat, Rat)> {
    let left = pt.p_factor(l)? * lhs;
    let right = subset_sum(pt, sub, |m| pt.a(rec, l, m))? + pt.a(rec, l, full(pt.n()))? * lhs;
    Ok((left, right))
}

fn pf_bar_subset(u: &[Rat], t: &Rat, mask: u32) -> Result<Rat> {
    if mask == 0 {
        return Ok(one());
    }
    let spec = MGammaSpec::new(u.to_vec(), t.clone(), one(), zero());
    pfaffian(&spec.conjugated(&mask_labels(mask, u.len()))?)
}

/// The second chain: as the first, then the `B`-conjugated form of each
/// extended level and the polynomial identity at `γ = 1`, `s = s_l`.
fn cor_chain(report: &mut Report, pt: &Point<'_>, p: usize) -> Result<()> {
    let rec = Recurrence::TwoV;
    let n = pt.n();
    let u = pt.u;
    let t = pt.t;
    let lhs = rhs_cor(u, t)?;
    let sub: Vec<Rat> = (0..=full(n)).map(|m| rhs_cor(&pt.subset(m), t)).collect::<Result<_>>()?;
    level_equations(report, pt, p, &rec, &lhs, &sub)?;
    let pf_full = pf_bar_subset(u, t, full(n))?;
    let vand = nonzero(pt.vandermonde(), "Π (u_i - u_j)")?;
    let mut pairs = one();
    for i in 0..n {
        for j in i + 1..n {
            pairs *= one() - &u[i] * &u[j];
        }
    }
    for l in 0..=p {
        let s = pt.spins.get(l);
        let (el, er) = extended_level(pt, &rec, l, &lhs, &sub)?;
        // conjugated form
        let mut left = pf_full.clone() / &vand;
        for ui in u {
            left *= (one() + t) * (one() - s * ui) / nonzero(one() - ui, "1 - u_i")?;
        }
        let mut right = zero();
        for mask in 0..=full(n) {
            let inside = members(mask, n);
            let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
            let mut term = rec.coefficient(l, outside.len(), pt.spins, t)?;
            for &i in &inside {
                term *= (one() + t) * (&u[i] - s) / (one() - &u[i]);
                for &j in &outside {
                    term *= (&u[i] - &pt.q * &u[j]) * (one() - &u[i] * &u[j]) / (&u[i] - &u[j]);
                }
            }
            for (a, &i) in outside.iter().enumerate() {
                for &j in &outside[a + 1..] {
                    term *= one() - &u[i] * &u[j];
                }
            }
            for (a, &i) in inside.iter().enumerate() {
                for &j in &inside[a + 1..] {
                    term /= &u[i] - &u[j];
                }
            }
            right += term * pf_bar_subset(u, t, mask)?;
        }
        let scale = &pairs / pt.pi(l)?;
        report.expect_eq(&format!("l = {l}: conjugated form (left)"), &(el * &scale), &left);
        report.expect_eq(&format!("l = {l}: conjugated form (right)"), &(er * &scale), &right);
        report.expect_eq(&format!("l = {l}: conjugated form"), &left, &right);
        let (kl, kr) = key_lemma2_sides(u, t, &one(), s)?;
        let k = pt.clearing() / &pairs;
        report.expect_eq(&format!("l = {l}: left side against the polynomial identity"), &(left * &k), &kl);
        report.expect_eq(&format!("l = {l}: right side against the polynomial identity"), &(right * &k), &kr);
    }
    Ok(())
}

/// The third chain: the recurrence for the `γ`-weighted sum with the `γ = 1`
/// product side inserted, its rearrangement into the `γ = 1` recurrence plus a
/// correction at `l = 0`, the resulting single equation over all `T ⊆ [n]`, and
/// the polynomial identity at `s = s_0`.
fn main2_chain(report: &mut Report, pt: &Point<'_>, p: usize, gamma: &Rat) -> Result<()> {
    let rec = Recurrence::Two { gamma: gamma.clone() };
    let plain = Recurrence::TwoV;
    let n = pt.n();
    let (u, t) = (pt.u, pt.t);
    let s0 = pt.spins.get(0);
    let lhs = rhs_main2(&MGammaSpec::new(u.to_vec(), t.clone(), gamma.clone(), s0.clone()))?;
    let sub: Vec<Rat> = (0..=full(n)).map(|m| rhs_cor(&pt.subset(m), t)).collect::<Result<_>>()?;
    let start = p.max(1);
    let ratio = nonzero(one() - pt.rho(start)?, "1 - ρ")?;
    let series = |r: &Recurrence| -> Result<Rat> {
        let mut acc = zero();
        for l in 0..start {
            acc += subset_sum(pt, &sub, |m| pt.a(r, l, m))?;
        }
        Ok(acc + subset_sum(pt, &sub, |m| pt.a(r, start, m))? / &ratio)
    };
    let to_show = series(&rec)?;
    report.expect_eq("recurrence with the γ = 1 product side inserted", &lhs, &to_show);

    let correction = subset_sum(pt, &sub, |m| Ok(pt.a(&rec, 0, m)? - pt.a(&plain, 0, m)?))?;
    let rearranged = series(&plain)? + &correction;
    report.expect_eq("rearranged at l = 0", &to_show, &rearranged);
    let (el, er) = extended_level(pt, &plain, 0, &rhs_cor(u, t)?, &sub)?;
    report.expect_eq("γ = 1 recurrence against the γ = 1 product side", &series(&plain)?, &sub[full(n) as usize]);
    report.expect_eq("extended l = 0 level at γ = 1", &el, &er);

    let full_term = pt.a(&rec, 0, full(n))? * &sub[full(n) as usize];
    let proper = subset_sum(pt, &sub, |m| pt.a(&rec, 0, m))?;
    let whole = proper.clone() + &full_term;
    report.expect_eq("single equation over all T ⊆ [n]", &lhs, &whole);
    if proper != lhs {
        report.note("the sum over proper subsets alone misses the T = [n] term");
    }

    let mut k = pt.clearing();
    for ui in u {
        k *= one() - s0 * ui;
    }
    let (kl, kr) = key_lemma2_sides(u, t, gamma, s0)?;
    report.expect_eq("left side against the polynomial identity", &(lhs * &k), &kl);
    report.expect_eq("right side against the polynomial identity", &(whole * &k), &kr);
    Ok(())
}

/// All equations of one chain at `point`.
pub fn chain_at(chain: Chain, point: &ParamPoint) -> Result<Report> {
    let n = point.n();
    if n == 0 {
        return Err(Error::Domain("the chains need n >= 1".into()));
    }
    let p = point.spin.p();
    let pt = Point { u: &point.u, t: &point.t, q: point.q.clone(), spins: point.spin.view() };
    let mut report = Report::new(chain.name())
        .param("n", n)
        .param("p", p)
        .param("t", &point.t)
        .param("spins", crate::symfun::format_rats(&point.spin.prefix))
        .param("s", &point.spin.tail)
        .param("u", crate::symfun::format_rats(&point.u));
    match chain {
        Chain::Main1 => main1_chain(&mut report, &pt, p)?,
        Chain::Cor => cor_chain(&mut report, &pt, p)?,
        Chain::Main2 => {
            report = report.param("gamma", &point.gamma);
            main2_chain(&mut report, &pt, p, &point.gamma)?
        }
    }
    Ok(report)
}

/// One chain at `points` seeded generic points, with `p` free spins.
pub fn check_reduction_chain(chain: Chain, n: usize, p: usize, seed: u64, points: usize) -> Result<Report> {
    let mut report = Report::new(chain.name()).param("n", n).param("p", p).param("seed", seed).param("points", points);
    for k in 0..points as u64 {
        let sub = with_generic_point(seed.wrapping_add(k), n, p, |pt| chain_at(chain, pt))?;
        report.absorb(sub);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, SpinParams};
    use alloc::vec;

    #[test]
    fn all_chains_small() {
        for chain in [Chain::Main1, Chain::Cor, Chain::Main2] {
            for n in 1..=3 {
                for p in 0..=2 {
                    let r = check_reduction_chain(chain, n, p, 17, 2).unwrap();
                    assert!(r.passed(), "{r}");
                }
            }
        }
    }

    #[test]
    fn proper_subsets_miss_a_term() {
        let point = ParamPoint::new(
            rat(2, 5),
            rat(3, 2),
            SpinParams::new(vec![rat(1, 4)], rat(-1, 3)),
            vec![rat(1, 7), rat(-2, 9)],
        );
        let r = chain_at(Chain::Main2, &point).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.notes.iter().any(|n| n.contains("proper subsets")));
    }

    #[test]
    fn one_variable() {
        let point = ParamPoint::new(rat(1, 3), rat(5, 4), SpinParams::new(vec![], rat(2, 7)), vec![rat(-3, 8)]);
        for chain in [Chain::Main1, Chain::Cor, Chain::Main2] {
            assert!(chain_at(chain, &point).unwrap().passed());
        }
    }
}
