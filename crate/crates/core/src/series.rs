//! Truncated power series in `x_1, ..., x_n` over the rationals, the
//! substitution `u_i = (s + x_i)/(1 + s x_i)`, and `F_λ` as a series.
//!
//! `F_λ` is obtained from its antisymmetrized numerator `Π_{i<j}(u_i - u_j) F_λ`,
//! which involves no division. Since `u_i - u_j = (x_i - x_j)(1 - s^2)/((1 + s x_i)(1 + s x_j))`,
//! the numerator is then divided exactly by `Π_{i<j}(x_i - x_j)` after
//! clearing the unit factor. Each such division costs one degree of precision,
//! so numerators are computed `C(n, 2)` degrees beyond the requested cap.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;

use crate::arith::{binomial, Rat, SpinParams, Spins};
use crate::error::{Error, Result};
use crate::pfaffian::permutation_sign;
use crate::ring::Ring;
use crate::symfun::Partition;
use crate::vertex::min_order_tops;

fn rz() -> Rat {
    Rat::from_integer(0.into())
}

fn ro() -> Rat {
    Rat::from_integer(1.into())
}

/// Monomials of total degree at most `cap` in `n` variables, graded
/// lexicographically, with a multiplication table.
#[derive(Debug)]
pub struct Basis {
    n: usize,
    cap: usize,
    monomials: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    table: Vec<Vec<(u32, u32)>>,
}

impl Basis {
    pub fn new(n: usize, cap: usize) -> Arc<Basis> {
        let mut monomials = Vec::new();
        for d in 0..=cap {
            let mut layer = Vec::new();
            compositions(n, d as u32, &mut Vec::new(), &mut layer);
            // graded lex: higher power of x_1 first
            layer.sort_by(|a, b| b.cmp(a));
            monomials.extend(layer);
        }
        let index: BTreeMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degree = |m: &[u32]| m.iter().sum::<u32>() as usize;
        let table = monomials
            .iter()
            .map(|a| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| degree(a) + degree(b) <= cap)
                    .map(|(j, b)| {
                        let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        (j as u32, index[&prod] as u32)
                    })
                    .collect()
            })
            .collect();
        Arc::new(Basis { n, cap, monomials, index, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

fn compositions(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for a in 0..=d {
        prefix.push(a);
        compositions(n, d - a, prefix, out);
        prefix.pop();
    }
}

/// A power series truncated at the cap of its basis.
#[derive(Clone)]
pub struct TruncSeries {
    basis: Arc<Basis>,
    coeffs: Vec<Rat>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.basis.n == other.basis.n && self.basis.cap == other.basis.cap && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries(n={}, cap={}) {{ ", self.basis.n, self.basis.cap)?;
        for (m, c) in self.terms() {
            write!(f, "{m:?}: {c}, ")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in self.terms() {
            writeln!(f, "{}: {c}", m.iter().join(","))?;
        }
        Ok(())
    }
}

impl TruncSeries {
    pub fn zero(basis: &Arc<Basis>) -> Self {
        TruncSeries { basis: basis.clone(), coeffs: vec![rz(); basis.len()] }
    }

    pub fn constant(basis: &Arc<Basis>, c: Rat) -> Self {
        let mut s = Self::zero(basis);
        s.coeffs[0] = c;
        s
    }

    pub fn one(basis: &Arc<Basis>) -> Self {
        Self::constant(basis, ro())
    }

    /// The variable `x_i` (0-based).
    pub fn var(basis: &Arc<Basis>, i: usize) -> Self {
        let mut e = vec![0; basis.n];
        e[i] = 1;
        Self::monomial(basis, &e, ro())
    }

    /// `c·x^e`, or zero when `e` is beyond the cap.
    pub fn monomial(basis: &Arc<Basis>, e: &[u32], c: Rat) -> Self {
        let mut s = Self::zero(basis);
        if let Some(i) = basis.index_of(e) {
            s.coeffs[i] = c;
        }
        s
    }

    /// A series in the single variable `x_i` from its coefficient list.
    pub fn univariate(basis: &Arc<Basis>, i: usize, coeffs: &[Rat]) -> Self {
        Self::tensor(basis, &[(i, coeffs)])
    }

    /// `Π_k f_k(x_{v_k})` for univariate `f_k` in distinct variables `v_k`.
    pub fn tensor(basis: &Arc<Basis>, factors: &[(usize, &[Rat])]) -> Self {
        let mut s = Self::zero(basis);
        'mono: for (idx, m) in basis.monomials.iter().enumerate() {
            let mut c = ro();
            for (v, &e) in m.iter().enumerate() {
                match factors.iter().find(|(w, _)| *w == v) {
                    Some((_, f)) => match f.get(e as usize) {
                        Some(a) if !a.is_zero() => c *= a,
                        _ => continue 'mono,
                    },
                    None if e > 0 => continue 'mono,
                    None => {}
                }
            }
            s.coeffs[idx] = c;
        }
        s
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.basis.index_of(e).map(|i| self.coeffs[i].clone()).unwrap_or_else(rz)
    }

    pub fn constant_term(&self) -> &Rat {
        &self.coeffs[0]
    }

    /// Nonzero terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.basis.monomial(i), c))
    }

    /// Least total degree of a nonzero term.
    pub fn order(&self) -> Option<usize> {
        self.terms().map(|(m, _)| m.iter().sum::<u32>() as usize).next()
    }

    /// The same series read in another basis on the same variables, dropping
    /// terms above its cap.
    pub fn recast(&self, basis: &Arc<Basis>) -> Self {
        assert_eq!(basis.n, self.basis.n, "variable count mismatch");
        let mut s = Self::zero(basis);
        for (i, m) in basis.monomials.iter().enumerate() {
            s.coeffs[i] = self.coeff(m);
        }
        s
    }

    /// The truncated polynomial evaluated at `x`.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = rz();
        for (m, c) in self.terms() {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                term *= num_traits::pow(xi.clone(), e as usize);
            }
            acc += term;
        }
        acc
    }

    fn check_basis(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.basis, &other.basis)
                || (self.basis.n == other.basis.n && self.basis.cap == other.basis.cap),
            "series over different bases"
        );
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_basis(other);
        let mut out = vec![rz(); self.basis.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, k) in &self.basis.table[i] {
                let b = &other.coeffs[j as usize];
                if !b.is_zero() {
                    out[k as usize] += a * b;
                }
            }
        }
        TruncSeries { basis: self.basis.clone(), coeffs: out }
    }

    /// Exact quotient by `x_a - x_b`. Every homogeneous component must be
    /// divisible; the quotient is exact below the cap and zero at the cap.
    pub fn div_by_difference(&self, a: usize, b: usize) -> Result<Self> {
        let basis = &self.basis;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![rz(); basis.len()];
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by(|&i, &j| basis.monomials[j][a].cmp(&basis.monomials[i][a]));
        for idx in order {
            let m = &basis.monomials[idx];
            if m[a] == 0 {
                break;
            }
            let c = core::mem::replace(&mut rem[idx], rz());
            if c.is_zero() {
                continue;
            }
            let mut lower = m.clone();
            lower[a] -= 1;
            quot[basis.index[&lower]] += &c;
            lower[b] += 1;
            rem[basis.index[&lower]] += c;
        }
        if let Some(i) = rem.iter().position(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(format!(
                "remainder term {:?} after dividing by x_{} - x_{}",
                basis.monomials[i],
                a + 1,
                b + 1
            )));
        }
        Ok(TruncSeries { basis: basis.clone(), coeffs: quot })
    }
}

impl Add<&TruncSeries> for TruncSeries {
    type Output = TruncSeries;
    fn add(mut self, rhs: &TruncSeries) -> TruncSeries {
        self.check_basis(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        self
    }
}

impl Sub<&TruncSeries> for TruncSeries {
    type Output = TruncSeries;
    fn sub(mut self, rhs: &TruncSeries) -> TruncSeries {
        self.check_basis(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
        self
    }
}

impl Mul<&TruncSeries> for TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.mul_ref(rhs)
    }
}

impl Add for TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: TruncSeries) -> TruncSeries {
        self + &rhs
    }
}

impl Sub for TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: TruncSeries) -> TruncSeries {
        self - &rhs
    }
}

impl Mul for TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: TruncSeries) -> TruncSeries {
        self.mul_ref(&rhs)
    }
}

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(mut self) -> TruncSeries {
        for c in &mut self.coeffs {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Ring for TruncSeries {
    fn zero_like(&self) -> Self {
        Self::zero(&self.basis)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.basis)
    }

    fn constant_like(&self, c: &Rat) -> Self {
        Self::constant(&self.basis, c.clone())
    }

    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        TruncSeries { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn try_inv(&self) -> Option<Self> {
        let c = self.coeffs[0].clone();
        if c.is_zero() {
            return None;
        }
        let c_inv = c.recip();
        let mut g = self.clone();
        g.coeffs[0] = rz();
        let g = g.scale(&c_inv);
        // 1/(1 + g) by Horner, one degree per step
        let one = self.one_like();
        let mut h = one.clone();
        for _ in 0..self.basis.cap {
            h = one.clone() - &(g.clone() * &h);
        }
        Some(h.scale(&c_inv))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Univariate series arithmetic on coefficient lists of a fixed length.
mod uni {
    use super::*;

    pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let len = a.len();
        let mut out = vec![rz(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().take(len - i).enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }

    pub fn inv(a: &[Rat], what: impl FnOnce() -> String) -> Result<Vec<Rat>> {
        if a[0].is_zero() {
            return Err(Error::Pole(what()));
        }
        let c = a[0].recip();
        let mut out = vec![rz(); a.len()];
        out[0] = c.clone();
        for d in 1..a.len() {
            let mut acc = rz();
            for e in 1..=d {
                if !a[e].is_zero() {
                    acc += &a[e] * &out[d - e];
                }
            }
            out[d] = -acc * &c;
        }
        Ok(out)
    }

    /// `c + k·f`
    pub fn affine(c: &Rat, k: &Rat, f: &[Rat]) -> Vec<Rat> {
        let mut out: Vec<Rat> = f.iter().map(|a| a * k).collect();
        out[0] += c;
        out
    }

    /// `(s + x)/(1 + s x)`
    pub fn u_of_x(s: &Rat, len: usize) -> Result<Vec<Rat>> {
        let mut num = vec![rz(); len];
        let mut den = vec![rz(); len];
        num[0] = s.clone();
        den[0] = ro();
        if len > 1 {
            num[1] = ro();
            den[1] = s.clone();
        }
        Ok(mul(&num, &inv(&den, || "1 + s·x".into())?))
    }
}

/// The series of `u_i = (s + x_i)/(1 + s x_i)` in the variable `x_i` (0-based).
pub fn u_substitution(basis: &Arc<Basis>, i: usize, s: &Rat) -> TruncSeries {
    let coeffs = uni::u_of_x(s, basis.cap + 1).expect("1 + s x is a unit");
    TruncSeries::univariate(basis, i, &coeffs)
}

/// Per-permutation products `Π_{a<b} (u_{σ(a)} - q u_{σ(b)})` over a set of variables.
#[derive(Debug, Clone)]
pub struct AntisymKernel {
    vars: Vec<usize>,
    terms: Vec<(i64, Vec<usize>, TruncSeries)>,
}

impl AntisymKernel {
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }
}

/// Shared state for series evaluation with `n` variables and `u_i = (s + x_i)/(1 + s x_i)`.
#[derive(Debug, Clone)]
pub struct SeriesContext {
    n: usize,
    d: usize,
    t: Rat,
    q: Rat,
    s: Rat,
    work: Arc<Basis>,
    out: Arc<Basis>,
    u_uni: Vec<Rat>,
    u_work: Vec<TruncSeries>,
    u_out: Vec<TruncSeries>,
}

impl SeriesContext {
    /// Series to total degree `d`; numerators are carried to `d + C(n, 2)`.
    pub fn new(n: usize, d: usize, t: Rat, s: Rat) -> Result<Self> {
        if &s * &s == ro() {
            return Err(Error::Pole("1 - s^2 (the substitution degenerates)".into()));
        }
        let q = &t * &t;
        let work = Basis::new(n, d + binomial(n, 2));
        let out = Basis::new(n, d);
        let u_uni = uni::u_of_x(&s, work.cap + 1)?;
        let u_work = (0..n).map(|i| TruncSeries::univariate(&work, i, &u_uni)).collect();
        let u_out = (0..n).map(|i| u_substitution(&out, i, &s)).collect();
        Ok(SeriesContext { n, d, t, q, s, work, out, u_uni, u_work, u_out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn s(&self) -> &Rat {
        &self.s
    }

    pub fn work_basis(&self) -> &Arc<Basis> {
        &self.work
    }

    pub fn out_basis(&self) -> &Arc<Basis> {
        &self.out
    }

    /// `u_i` to the working precision.
    pub fn u_work(&self) -> &[TruncSeries] {
        &self.u_work
    }

    /// `u_i` to the output precision.
    pub fn u_out(&self) -> &[TruncSeries] {
        &self.u_out
    }

    /// Univariate series of `(1 - q)/(1 - s_k u) Π_{j<k} (u - s_j)/(1 - s_j u)`.
    pub fn part_series(&self, k: usize, spins: Spins<'_>) -> Result<Vec<Rat>> {
        let one = ro();
        let mut acc = vec![rz(); self.u_uni.len()];
        acc[0] = &one - &self.q;
        for j in 0..=k {
            let sj = spins.get(j);
            let den = uni::affine(&one, &-sj.clone(), &self.u_uni);
            let den_inv = uni::inv(&den, || format!("1 - s_{j}·u"))?;
            acc = uni::mul(&acc, &den_inv);
            if j < k {
                acc = uni::mul(&acc, &uni::affine(&-sj.clone(), &one, &self.u_uni));
            }
        }
        Ok(acc)
    }

    pub fn kernel(&self, vars: &[usize]) -> AntisymKernel {
        let k = vars.len();
        let terms = (0..k)
            .permutations(k)
            .map(|perm| {
                let mut p = TruncSeries::one(&self.work);
                for a in 0..k {
                    for b in a + 1..k {
                        let f = self.u_work[vars[perm[a]]].clone() - &self.u_work[vars[perm[b]]].scale(&self.q);
                        p = p * &f;
                    }
                }
                (permutation_sign(&perm), perm, p)
            })
            .collect();
        AntisymKernel { vars: vars.to_vec(), terms }
    }

    /// `Π_{a<b} (u_{v_a} - u_{v_b}) · F_λ(u_v)` to the working precision.
    pub fn numerator(&self, kernel: &AntisymKernel, lambda: &Partition, spins: Spins<'_>) -> Result<TruncSeries> {
        let vars = &kernel.vars;
        if lambda.len() != vars.len() {
            return Err(Error::Domain(format!("{} variables for {lambda}", vars.len())));
        }
        let mut cache: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for &part in lambda.parts() {
            if let alloc::collections::btree_map::Entry::Vacant(e) = cache.entry(part) {
                e.insert(self.part_series(part, spins)?);
            }
        }
        let mut acc = TruncSeries::zero(&self.work);
        for (sign, perm, p) in &kernel.terms {
            let factors: Vec<(usize, &[Rat])> =
                (0..vars.len()).map(|a| (vars[perm[a]], cache[&lambda.parts()[a]].as_slice())).collect();
            let term = p.clone() * &TruncSeries::tensor(&self.work, &factors);
            acc = if *sign > 0 { acc + &term } else { acc - &term };
        }
        Ok(acc)
    }

    /// `num / Π_{a<b} (u_{v_a} - u_{v_b})`, exact to the output precision.
    pub fn divide_by_vandermonde(&self, num: &TruncSeries, vars: &[usize]) -> Result<TruncSeries> {
        let k = vars.len();
        if k < 2 {
            return Ok(num.recast(&self.out));
        }
        let one = ro();
        let c = (&one - &self.s * &self.s).recip();
        let mut unit = TruncSeries::one(&self.work);
        for &v in vars {
            let lin = TruncSeries::univariate(&self.work, v, &[one.clone(), self.s.clone()]);
            for _ in 0..k - 1 {
                unit = unit * &lin;
            }
        }
        let mut acc = (num.clone() * &unit).scale(&num_traits::pow(c, binomial(k, 2)));
        for a in 0..k {
            for b in a + 1..k {
                acc = acc.div_by_difference(vars[a], vars[b])?;
            }
        }
        Ok(acc.recast(&self.out))
    }

    /// `F_λ(u_1, ..., u_n)` to the output precision.
    pub fn f_lambda(&self, lambda: &Partition, spins: Spins<'_>) -> Result<TruncSeries> {
        let vars: Vec<usize> = (0..lambda.len()).collect();
        let num = self.numerator(&self.kernel(&vars), lambda, spins)?;
        self.divide_by_vandermonde(&num, &vars)
    }

    /// Partitions of length `k` whose `F_λ(u_1, ..., u_k)` may have a term of
    /// degree at most `max_order`, with the vertex-model lower bound on their order.
    ///
    /// In each row at most `k - 1` horizontal steps pass over an occupied
    /// column, and every column in `[p, λ_1)` is passed over at least once, so
    /// the bound exceeds `λ_1 - p - C(k, 2)`. That limits the search to
    /// `λ_1 <= p + max_order + C(k, 2)`.
    pub fn lambda_set(&self, k: usize, spins: Spins<'_>, max_order: usize) -> Result<Vec<(Partition, usize)>> {
        if k == 0 {
            return Ok(vec![(Partition::empty(), 0)]);
        }
        if spins.tail() != &self.s {
            return Err(Error::Domain("spin tail differs from the substitution parameter".into()));
        }
        let max_col = spins.p() + max_order + binomial(k, 2);
        let tops = min_order_tops(k, max_col, spins, &self.s, &self.q)?;
        let mut out = Vec::new();
        for (state, order) in tops {
            if order > max_order {
                continue;
            }
            let mut parts = Vec::with_capacity(k);
            for (c, &m) in state.iter().enumerate().rev() {
                parts.extend(core::iter::repeat_n(c, m));
            }
            out.push((Partition::new(parts)?, order));
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.parts().cmp(a.0.parts())));
        Ok(out)
    }
}

/// `F_λ` with spin parameters `spin` and `u_i = (s + x_i)/(1 + s x_i)`,
/// `s` the constant tail of `spin`, truncated at total degree `d`.
pub fn f_lambda_series(lambda: &Partition, spin: &SpinParams, t: &Rat, d: usize) -> Result<TruncSeries> {
    let ctx = SeriesContext::new(lambda.len(), d, t.clone(), spin.tail.clone())?;
    ctx.f_lambda(lambda, spin.view())
}

/// Runs independent jobs; implementations may run them in parallel but must
/// return results in input order.
pub trait Executor: Sync {
    fn map<T, U, F>(&self, items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> U + Sync + Send;
}

/// Runs jobs one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, U, F>(&self, items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> U + Sync + Send,
    {
        items.into_iter().map(f).collect()
    }
}
