//! Partitions, (anti)symmetrizers and the spin Hall-Littlewood functions
//! `F_λ(u_1,…,u_n | s_0,s_1,…)`, with Schur and Hall-Littlewood oracles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::arith::{members, powi, qpoch, ParamPoint, Rat, Spins};
use crate::error::{Error, Result};

/// Largest `n` accepted by the `n!`-term symmetrizers.
pub const SYMMETRIZE_CAP: usize = 8;

/// A weakly decreasing tuple of non-negative integers; zero parts are kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn smallest(&self) -> usize {
        self.parts.last().copied().unwrap_or(0)
    }

    /// `m_r(λ)`, the number of parts equal to `r`.
    pub fn multiplicity(&self, r: usize) -> usize {
        self.parts.iter().filter(|&&p| p == r).count()
    }

    /// `(r, m_r(λ))` for every part value `r` that occurs, in increasing `r`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((r, m)) if *r == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// `(λ_n, …, λ_1)` as signed integers.
    pub fn reversed(&self) -> Vec<i64> {
        self.parts.iter().rev().map(|&p| p as i64).collect()
    }

    /// All partitions with exactly `n` parts (zeros allowed) and `λ_1 <= max_part`,
    /// ordered by size and then reverse-lexicographically.
    pub fn all(n: usize, max_part: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        fn rec(n: usize, cap: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if current.len() == n {
                out.push(Partition { parts: current.clone() });
                return;
            }
            for p in (0..=cap).rev() {
                current.push(p);
                rec(n, p, current, out);
                current.pop();
            }
        }
        rec(n, max_part, &mut current, &mut out);
        out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.parts.cmp(&a.parts)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Domain(format!("part {p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

fn permutation_sum(n: usize, signed: bool, mut g: impl FnMut(&[usize]) -> Result<Rat>) -> Result<Rat> {
    if n > SYMMETRIZE_CAP {
        return Err(Error::Domain(format!("symmetrizer over {n} variables exceeds cap {SYMMETRIZE_CAP}")));
    }
    let mut acc = Rat::zero();
    for perm in (0..n).permutations(n) {
        let term = g(&perm).map_err(|e| e.context(&format!("permutation {perm:?}")))?;
        if signed && inversions(&perm) % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

fn permuted(u: &[Rat], perm: &[usize]) -> Vec<Rat> {
    perm.iter().map(|&i| u[i].clone()).collect()
}

/// `Σ_σ g(u_{σ(1)}, …, u_{σ(n)})`, permutations in lexicographic order.
pub fn symmetrize(u: &[Rat], mut g: impl FnMut(&[Rat]) -> Result<Rat>) -> Result<Rat> {
    permutation_sum(u.len(), false, |perm| g(&permuted(u, perm)))
}

/// `Σ_σ sgn(σ) g(u_{σ(1)}, …, u_{σ(n)})`.
pub fn antisymmetrize(u: &[Rat], mut g: impl FnMut(&[Rat]) -> Result<Rat>) -> Result<Rat> {
    permutation_sum(u.len(), true, |perm| g(&permuted(u, perm)))
}

/// `(1-q)/(1 - s_v u) · Π_{j<v} (u - s_j)/(1 - s_j u)`, the one-variable factor of `F_λ`.
pub fn part_factor(v: usize, u: &Rat, q: &Rat, spins: Spins<'_>) -> Result<Rat> {
    let one = Rat::one();
    let mut num = &one - q;
    let mut den = &one - spins.get(v) * u;
    if den.is_zero() {
        return Err(Error::Pole(format!("1 - s_{v}·u")));
    }
    for j in 0..v {
        let s = spins.get(j);
        let d = &one - s * u;
        if d.is_zero() {
            return Err(Error::Pole(format!("1 - s_{j}·u")));
        }
        num *= u - s;
        den *= d;
    }
    Ok(num / den)
}

/// `(u_a - q u_b)/(u_a - u_b)` for all ordered pairs `a != b`.
fn pair_table(u: &[Rat], q: &Rat) -> Result<Vec<Vec<Rat>>> {
    let n = u.len();
    let mut table = vec![vec![Rat::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let den = &u[a] - &u[b];
            if den.is_zero() {
                return Err(Error::Pole(format!("u_{} - u_{}", a + 1, b + 1)));
            }
            table[a][b] = (&u[a] - q * &u[b]) / den;
        }
    }
    Ok(table)
}

/// `F_λ(u | spins)` by the symmetrizer formula.
pub fn f_lambda_at(lambda: &Partition, u: &[Rat], q: &Rat, spins: Spins<'_>) -> Result<Rat> {
    let n = lambda.len();
    if u.len() != n {
        return Err(Error::Domain(format!("{} spectral parameters for a partition of length {n}", u.len())));
    }
    if n == 0 {
        return Ok(Rat::one());
    }
    let pair = pair_table(u, q)?;
    // rest[b][a]: factor of part b evaluated at variable a
    let mut rest = Vec::with_capacity(n);
    for &v in lambda.parts() {
        let row = u
            .iter()
            .enumerate()
            .map(|(a, ua)| part_factor(v, ua, q, spins).map_err(|e| e.context(&format!("u_{}", a + 1))))
            .collect::<Result<Vec<_>>>()?;
        rest.push(row);
    }
    permutation_sum(n, false, |perm| {
        let mut term = Rat::one();
        for i in 0..n {
            term *= &rest[i][perm[i]];
            for j in i + 1..n {
                term *= &pair[perm[i]][perm[j]];
            }
        }
        Ok(term)
    })
}

pub fn f_lambda(lambda: &Partition, point: &ParamPoint) -> Result<Rat> {
    f_lambda_at(lambda, &point.u, &point.q, point.spin.view())
}

/// Right-hand side of the recurrence expressing `F_λ` through `F` of the parts
/// exceeding the smallest part `l`, shifted down by `l + 1`, in the variables `u_T`.
pub fn f_lambda_recurrence_rhs_at(lambda: &Partition, u: &[Rat], q: &Rat, spins: Spins<'_>) -> Result<Rat> {
    let n = lambda.len();
    if n == 0 {
        return Err(Error::Domain("the recurrence needs at least one part".into()));
    }
    let one = Rat::one();
    let l = lambda.smallest();
    let k = lambda.parts().iter().filter(|&&p| p > l).count();
    let inner = Partition::new(lambda.parts()[..k].iter().map(|p| p - l - 1).collect())?;
    let s_l = spins.get(l);

    let mut prefactor = qpoch(q, q, n - k);
    for (i, ui) in u.iter().enumerate() {
        let den = &one - s_l * ui;
        if den.is_zero() {
            return Err(Error::Pole(format!("1 - s_{l}·u_{}", i + 1)));
        }
        prefactor /= den;
        for j in 0..l {
            let sj = spins.get(j);
            let den = &one - sj * ui;
            if den.is_zero() {
                return Err(Error::Pole(format!("1 - s_{j}·u_{}", i + 1)));
            }
            prefactor *= (ui - sj) / den;
        }
    }

    let mut sum = Rat::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let t = members(mask, n);
        let mut term = Rat::one();
        for &i in &t {
            term *= &u[i] - s_l;
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                let den = &u[i] - &u[j];
                if den.is_zero() {
                    return Err(Error::Pole(format!("u_{} - u_{}", i + 1, j + 1)));
                }
                term *= (&u[i] - q * &u[j]) / den;
            }
        }
        let ut: Vec<Rat> = t.iter().map(|&i| u[i].clone()).collect();
        term *= f_lambda_at(&inner, &ut, q, spins.shift(l + 1))?;
        sum += term;
    }
    Ok(prefactor * sum)
}

pub fn f_lambda_recurrence_rhs(lambda: &Partition, point: &ParamPoint) -> Result<Rat> {
    f_lambda_recurrence_rhs_at(lambda, &point.u, &point.q, point.spin.view())
}

/// Rows of length `below.len() - 1` interlacing `below`: `below[j] <= a_j <= below[j+1]`,
/// strictly increasing when `strict`.
pub fn interlacing_rows(below: &[i64], strict: bool) -> Vec<Vec<i64>> {
    let m = below.len().saturating_sub(1);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(below: &[i64], strict: bool, m: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let j = current.len();
        if j == m {
            out.push(current.clone());
            return;
        }
        let mut lo = below[j];
        if let Some(&prev) = current.last() {
            lo = lo.max(if strict { prev + 1 } else { prev });
        }
        for a in lo..=below[j + 1] {
            current.push(a);
            rec(below, strict, m, current, out);
            current.pop();
        }
    }
    rec(below, strict, m, &mut current, &mut out);
    out
}

/// All Gelfand-Tsetlin patterns with the given bottom row, as rows from the top
/// (length 1) down to the bottom row itself.
pub fn gelfand_tsetlin_patterns(bottom: &[i64], strict: bool) -> Vec<Vec<Vec<i64>>> {
    if bottom.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for above in interlacing_rows(bottom, strict) {
        for mut pattern in gelfand_tsetlin_patterns(&above, strict) {
            pattern.push(bottom.to_vec());
            out.push(pattern);
        }
    }
    out
}

/// Weight of one row given the row above it: `(index, above, row)`.
pub type RowStep<'a> = dyn FnMut(usize, &[i64], &[i64]) -> Result<Rat> + 'a;

/// Weighted sum over Gelfand-Tsetlin patterns with bottom row `bottom`. The
/// weight factorizes over consecutive rows: `step(i, row_{i-1}, row_i)` for
/// `i = 1..=n`, with `row_0` empty. Memoized on `(row index, row content)`.
pub fn pattern_sum(bottom: &[i64], strict: bool, step: &mut RowStep<'_>) -> Result<Rat> {
    let mut memo: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    pattern_sum_rec(bottom, strict, step, &mut memo)
}

fn pattern_sum_rec(
    row: &[i64],
    strict: bool,
    step: &mut RowStep<'_>,
    memo: &mut BTreeMap<Vec<i64>, Rat>,
) -> Result<Rat> {
    let i = row.len();
    if i == 0 {
        return Ok(Rat::one());
    }
    if let Some(v) = memo.get(row) {
        return Ok(v.clone());
    }
    let mut acc = Rat::zero();
    for above in interlacing_rows(row, strict) {
        let w = step(i, &above, row)?;
        if w.is_zero() {
            continue;
        }
        acc += w * pattern_sum_rec(&above, strict, step, memo)?;
    }
    memo.insert(row.to_vec(), acc.clone());
    Ok(acc)
}

fn check_length(lambda: &Partition, x: &[Rat]) -> Result<()> {
    if lambda.len() != x.len() {
        return Err(Error::Domain(format!("{} variables for a partition of length {}", x.len(), lambda.len())));
    }
    Ok(())
}

/// Schur polynomial by Gelfand-Tsetlin enumeration.
pub fn schur_gt(lambda: &Partition, x: &[Rat]) -> Result<Rat> {
    check_length(lambda, x)?;
    pattern_sum(&lambda.reversed(), false, &mut |i, above, row| {
        let d = row.iter().sum::<i64>() - above.iter().sum::<i64>();
        powi(&x[i - 1], d)
    })
}

/// Schur polynomial as a ratio of alternants `det(x_i^{λ_j+n-j}) / det(x_i^{n-j})`.
pub fn schur_bialternant(lambda: &Partition, x: &[Rat]) -> Result<Rat> {
    check_length(lambda, x)?;
    let n = x.len();
    let shifted: Vec<usize> = (0..n).map(|j| lambda.parts()[j] + n - 1 - j).collect();
    let staircase: Vec<usize> = (0..n).map(|j| n - 1 - j).collect();
    let alt = |exps: &[usize]| {
        antisymmetrize(x, |y| Ok(y.iter().zip(exps).map(|(v, &e)| num_traits::pow(v.clone(), e)).product()))
    };
    let den = alt(&staircase)?;
    if den.is_zero() {
        return Err(Error::Pole("Vandermonde determinant".into()));
    }
    Ok(alt(&shifted)? / den)
}

/// Schur polynomial; the bialternant when the `x_i` are distinct, otherwise
/// Gelfand-Tsetlin enumeration.
pub fn schur(lambda: &Partition, x: &[Rat]) -> Result<Rat> {
    match schur_bialternant(lambda, x) {
        Err(e) if e.is_pole() => schur_gt(lambda, x),
        other => other,
    }
}

/// Hall-Littlewood polynomial `P_λ(x; q)` by its symmetrizer formula.
pub fn hall_littlewood_p(lambda: &Partition, x: &[Rat], q: &Rat) -> Result<Rat> {
    check_length(lambda, x)?;
    let n = x.len();
    let one = Rat::one();
    let mut norm = num_traits::pow(&one - q, n);
    for (_, m) in lambda.multiplicities() {
        let d = qpoch(q, q, m);
        if d.is_zero() {
            return Err(Error::Pole(format!("(q;q)_{m}")));
        }
        norm /= d;
    }
    let pair = pair_table(x, q)?;
    let sym = permutation_sum(n, false, |perm| {
        let mut term = Rat::one();
        for i in 0..n {
            term *= num_traits::pow(x[perm[i]].clone(), lambda.parts()[i]);
            for j in i + 1..n {
                term *= &pair[perm[i]][perm[j]];
            }
        }
        Ok(term)
    })?;
    Ok(norm * sym)
}

/// Render a list of rationals as `a/b` strings joined by commas.
pub fn format_rats(values: &[Rat]) -> String {
    values.iter().join(",")
}
