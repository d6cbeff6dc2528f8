//! The two polynomial identities behind the recurrences for the product
//! sides, checked exactly at sampled points and, for small `n`, as
//! polynomials in one spectral variable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{crossing_sign, members, qpoch, with_generic_point, Rat, Sampler};
use crate::error::{Error, Result};
use crate::pfaffian::{mask_labels, pfaffian, MGammaSpec};

use super::{Report, Status};

fn one() -> Rat {
    Rat::from_integer(1.into())
}

fn signed(x: Rat, sign: i64) -> Rat {
    if sign > 0 {
        x
    } else {
        -x
    }
}

/// Both sides of the identity for the `(-s; q)` weights:
/// `Π(1 - s u_i) Π_{i<j}(1 - q u_i u_j)(u_i - u_j)` and its expansion over `T ⊆ [n]`.
pub fn key_lemma1_sides(u: &[Rat], q: &Rat, s: &Rat) -> (Rat, Rat) {
    let n = u.len();
    let mut lhs = one();
    for i in 0..n {
        lhs *= one() - s * &u[i];
        for j in i + 1..n {
            lhs *= (one() - q * &u[i] * &u[j]) * (&u[i] - &u[j]);
        }
    }
    let mut rhs = Rat::from_integer(0.into());
    for mask in 0..1u32 << n {
        let inside = members(mask, n);
        let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
        let mut term = qpoch(&-s.clone(), q, outside.len());
        for &i in &outside {
            term *= one() - &u[i];
        }
        for &i in &inside {
            term *= &u[i] - s;
            for &j in &outside {
                term *= (&u[i] - q * &u[j]) * (one() - &u[i] * &u[j]);
            }
        }
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                term *= (one() - &u[i] * &u[j]) * (&u[i] - &u[j]);
            }
        }
        for (a, &i) in inside.iter().enumerate() {
            for &j in &inside[a + 1..] {
                term *= (one() - q * &u[i] * &u[j]) * (&u[i] - &u[j]);
            }
        }
        rhs += signed(term, crossing_sign(mask, n));
    }
    (lhs, rhs)
}

fn s_over_gamma(s: &Rat, gamma: &Rat) -> Result<Rat> {
    if s == &Rat::from_integer(0.into()) {
        Ok(s.clone())
    } else if gamma == &Rat::from_integer(0.into()) {
        Err(Error::Pole("γ (in s/γ)".into()))
    } else {
        Ok(s / gamma)
    }
}

/// `pf` of `M^γ` conjugated by `B([n], [n])`.
fn pf_bar(spec: &MGammaSpec<Rat>) -> Result<Rat> {
    if spec.n() == 0 {
        return Ok(one());
    }
    pfaffian(&spec.conjugated(&spec.all_labels())?)
}

/// Both sides of the expansion of `Π(1 + t)(1 - s u_i) pf(M̄^γ)` over `T ⊆ [n]`.
pub fn key_lemma2_sides(u: &[Rat], t: &Rat, gamma: &Rat, s: &Rat) -> Result<(Rat, Rat)> {
    let n = u.len();
    let q = t * t;
    let sg = s_over_gamma(s, gamma)?;
    let spec = MGammaSpec::new(u.to_vec(), t.clone(), gamma.clone(), s.clone());
    let mut lhs = pf_bar(&spec)?;
    for ui in u {
        lhs *= (one() + t) * (one() - s * ui);
    }
    let plain = MGammaSpec::new(u.to_vec(), t.clone(), one(), s.clone());
    let mut rhs = Rat::from_integer(0.into());
    for mask in 0..1u32 << n {
        let inside = members(mask, n);
        let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
        let m = outside.len();
        let mut term = qpoch(&-sg.clone(), t, m) * qpoch(&-(gamma * t), t, m);
        for &i in &inside {
            term *= (one() + t) * (&u[i] - s);
            for &j in &outside {
                term *= (&u[i] - &q * &u[j]) * (one() - &u[i] * &u[j]);
            }
        }
        for &i in &outside {
            term *= one() - &u[i];
        }
        for (a, &i) in outside.iter().enumerate() {
            for &j in &outside[a + 1..] {
                term *= (one() - &u[i] * &u[j]) * (&u[i] - &u[j]);
            }
        }
        if !inside.is_empty() {
            term *= pfaffian(&plain.conjugated(&mask_labels(mask, n))?)?;
        }
        rhs += signed(term, crossing_sign(mask, n));
    }
    Ok((lhs, rhs))
}

/// Both sides of the specialization `u_1 = s` of `pf(M̄^γ)`, in terms of the
/// matrix on the remaining variables with `γ → tγ` and `s → q s`.
/// `rest` holds `u_2, ..., u_n`.
pub fn key_lemma2_a_sides(rest: &[Rat], t: &Rat, gamma: &Rat, s: &Rat) -> Result<(Rat, Rat)> {
    let q = t * t;
    let sg = s_over_gamma(s, gamma)?;
    let mut u = vec![s.clone()];
    u.extend_from_slice(rest);
    let mut lhs = (one() + t) * (one() - s * s) * pf_bar(&MGammaSpec::new(u, t.clone(), gamma.clone(), s.clone()))?;
    let mut rhs = (one() + gamma * t) * (one() + sg) * (one() - s);
    rhs *= pf_bar(&MGammaSpec::new(rest.to_vec(), t.clone(), t * gamma, &q * s))?;
    for ui in rest {
        lhs *= one() - s * ui;
        rhs *= (s - ui) * (one() - s * ui) * (one() - s * &q * ui);
    }
    Ok((lhs, rhs))
}

fn sampled<F>(name: &str, n: usize, seed: u64, points: usize, mut sides: F) -> Result<Report>
where
    F: FnMut(&crate::arith::ParamPoint) -> Result<(Rat, Rat)>,
{
    let mut report = Report::new(name).param("n", n).param("seed", seed).param("points", points);
    for k in 0..points as u64 {
        let (lhs, rhs) = with_generic_point(seed.wrapping_add(k), n, 0, &mut sides)?;
        report.expect_eq(&format!("point {k}"), &lhs, &rhs);
    }
    Ok(report)
}

/// The identity for the `(-s; q)` weights at `points` seeded points.
pub fn check_key_lemma1(n: usize, seed: u64, points: usize) -> Result<Report> {
    sampled("key lemma 1", n, seed, points, |pt| Ok(key_lemma1_sides(&pt.u, &pt.q, pt.spin.get(0))))
}

/// The expansion of `pf(M̄^γ)` at `points` seeded points; `gamma` fixes `γ`
/// instead of sampling it.
pub fn check_key_lemma2(n: usize, gamma: Option<&Rat>, seed: u64, points: usize) -> Result<Report> {
    sampled("key lemma 2", n, seed, points, |pt| {
        key_lemma2_sides(&pt.u, &pt.t, gamma.unwrap_or(&pt.gamma), pt.spin.get(0))
    })
}

/// The `u_1 = s` specialization at `points` seeded points.
pub fn check_key_lemma2_a(n: usize, seed: u64, points: usize) -> Result<Report> {
    if n == 0 {
        return Err(Error::Domain("the specialization needs n >= 1".into()));
    }
    sampled("key lemma 2, u_1 = s", n, seed, points, |pt| {
        key_lemma2_a_sides(&pt.u[1..], &pt.t, &pt.gamma, pt.spin.get(0))
    })
}

/// Coefficients (constant term first) of the polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Result<Vec<Rat>> {
    let k = xs.len();
    if ys.len() != k {
        return Err(Error::Domain("as many values as nodes expected".into()));
    }
    // Newton divided differences
    let mut dd = ys.to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            let den = &xs[i] - &xs[i - level];
            if den == Rat::from_integer(0.into()) {
                return Err(Error::Domain("repeated interpolation node".into()));
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    let mut poly = vec![Rat::from_integer(0.into()); k.max(1)];
    for i in (0..k).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![Rat::from_integer(0.into()); poly.len()];
        for (e, c) in poly.iter().enumerate() {
            if e + 1 < next.len() {
                next[e + 1] += c;
            }
            next[e] -= c * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    Ok(poly)
}

fn eval_poly(poly: &[Rat], x: &Rat) -> Rat {
    poly.iter().rev().fold(Rat::from_integer(0.into()), |acc, c| acc * x + c)
}

fn degree(poly: &[Rat]) -> Option<usize> {
    poly.iter().rposition(|c| c != &Rat::from_integer(0.into()))
}

/// Both sides as polynomials in one variable through `nodes + 1` points,
/// validated at one more point. Poles among the candidates are skipped.
fn univariate_sides<F>(sampler: &mut Sampler, nodes: usize, avoid: &[Rat], mut sides: F) -> Result<(Vec<Rat>, Vec<Rat>)>
where
    F: FnMut(&Rat) -> Result<(Rat, Rat)>,
{
    let mut xs = Vec::new();
    let mut ls = Vec::new();
    let mut rs = Vec::new();
    let mut attempts = 0;
    while xs.len() < nodes + 2 {
        attempts += 1;
        if attempts > 1000 {
            return Err(Error::Domain("no generic interpolation nodes found".into()));
        }
        let x = sampler.rat();
        if xs.contains(&x) || avoid.contains(&x) {
            continue;
        }
        match sides(&x) {
            Ok((l, r)) => {
                xs.push(x);
                ls.push(l);
                rs.push(r);
            }
            Err(e) if e.is_pole() => continue,
            Err(e) => return Err(e),
        }
    }
    let (lp, rp) = (interpolate(&xs[..=nodes], &ls[..=nodes])?, interpolate(&xs[..=nodes], &rs[..=nodes])?);
    let extra = &xs[nodes + 1];
    if eval_poly(&lp, extra) != ls[nodes + 1] || eval_poly(&rp, extra) != rs[nodes + 1] {
        return Err(Error::Domain(format!("not a polynomial of degree <= {nodes}")));
    }
    Ok((lp, rp))
}

fn compare_polys(report: &mut Report, label: &str, lp: &[Rat], rp: &[Rat], bound: Option<usize>) {
    let (dl, dr) = (degree(lp), degree(rp));
    report.note(format!("{label}: degrees {dl:?} and {dr:?}"));
    if let Some(b) = bound {
        if dl.max(dr).is_some_and(|d| d > b) {
            report.fail(Status::Fail, format!("{label}: degree above {b}"));
        }
    }
    if let Some(e) = (0..lp.len()).find(|&e| lp[e] != rp[e]) {
        report.fail(Status::Fail, format!("{label}: coefficient of degree {e}: {} != {}", lp[e], rp[e]));
    }
}

/// Both identities as polynomials in a single spectral variable, with the
/// other parameters fixed at a seeded point: the degree in that variable is
/// confirmed to be at most `2n - 1` and the coefficients compared.
pub fn key_lemma_degrees(n: usize, seed: u64) -> Result<Report> {
    if n == 0 {
        return Err(Error::Domain("n >= 1 expected".into()));
    }
    let mut report = Report::new("key lemma polynomials").param("n", n).param("seed", seed);
    let bound = 2 * n - 1;
    let nodes = 2 * n + 1;
    let mut sampler = Sampler::new(seed);
    let point = sampler.point(n, 0);
    let (t, q, gamma, s) = (&point.t, &point.q, &point.gamma, point.spin.get(0));
    let mut u = point.u.clone();
    let (lp, rp) = univariate_sides(&mut sampler, nodes, &point.u[..n - 1], |x| {
        u[n - 1] = x.clone();
        Ok(key_lemma1_sides(&u, q, s))
    })?;
    compare_polys(&mut report, "lemma 1 in u_n", &lp, &rp, Some(bound));
    let mut u = point.u.clone();
    let (lp, rp) = univariate_sides(&mut sampler, nodes, &point.u[1..], |x| {
        u[0] = x.clone();
        key_lemma2_sides(&u, t, gamma, s)
    })?;
    compare_polys(&mut report, "lemma 2 in u_1", &lp, &rp, Some(bound));
    if n >= 2 {
        let mut rest = point.u[1..].to_vec();
        // the u_1 = s specialization carries the extra factors (s - u_i)(1 - s q u_i)
        let (lp, rp) = univariate_sides(&mut sampler, nodes + 2, &point.u[1..n - 1], |x| {
            rest[n - 2] = x.clone();
            key_lemma2_a_sides(&rest, t, gamma, s)
        })?;
        compare_polys(&mut report, "u_1 = s in u_n", &lp, &rp, Some(bound + 2));
    }
    Ok(report)
}
