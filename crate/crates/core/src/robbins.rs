//! Monotone triangles, down-arrowed monotone triangles (DAMTs) and the
//! modified and ordinary Robbins polynomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{powi, Rat};
use crate::error::{Error, Result};
use crate::symfun::{antisymmetrize, gelfand_tsetlin_patterns, interlacing_rows, pattern_sum};

/// A Gelfand-Tsetlin pattern with strictly increasing rows, stored top row first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneTriangle {
    rows: Vec<Vec<i64>>,
}

/// How an entry relates to its two lower neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lean {
    Left,
    Right,
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrow {
    SouthWest,
    Down,
    SouthEast,
}

impl MonotoneTriangle {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::Domain(format!("row {} has {} entries", i + 1, row.len())));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!("row {} is not strictly increasing", i + 1)));
            }
            if let Some(below) = rows.get(i + 1) {
                if row.iter().enumerate().any(|(j, &a)| a < below[j] || a > below[j + 1]) {
                    return Err(Error::Domain(format!("rows {} and {} do not interlace", i + 1, i + 2)));
                }
            }
        }
        Ok(MonotoneTriangle { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn bottom(&self) -> &[i64] {
        self.rows.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Leaning of entry `j` in row `r` (both 0-based); `r` must not be the bottom row.
    pub fn lean(&self, r: usize, j: usize) -> Lean {
        lean(&self.rows[r], &self.rows[r + 1], j)
    }

    /// `(l_r, r_r, s_r)`: left-leaning, right-leaning and special entries of row `r` (1-based).
    pub fn statistics(&self, r: usize) -> (usize, usize, usize) {
        if r == 0 {
            return (0, 0, 0);
        }
        let mut counts = (0, 0, 0);
        for j in 0..r {
            match self.lean(r - 1, j) {
                Lean::Left => counts.0 += 1,
                Lean::Right => counts.1 += 1,
                Lean::Special => counts.2 += 1,
            }
        }
        counts
    }

    fn row_sum(&self, r: usize) -> i64 {
        if r == 0 {
            0
        } else {
            self.rows[r - 1].iter().sum()
        }
    }
}

fn lean(row: &[i64], below: &[i64], j: usize) -> Lean {
    if row[j] == below[j] {
        Lean::Left
    } else if row[j] == below[j + 1] {
        Lean::Right
    } else {
        Lean::Special
    }
}

/// A monotone triangle with an arrow on every entry outside the bottom row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Damt {
    pub triangle: MonotoneTriangle,
    pub arrows: Vec<Vec<Arrow>>,
}

impl Damt {
    pub fn new(triangle: MonotoneTriangle, arrows: Vec<Vec<Arrow>>) -> Result<Self> {
        let n = triangle.n();
        if arrows.len() != n.saturating_sub(1) {
            return Err(Error::Domain("one arrow row per non-bottom row expected".into()));
        }
        for (r, row) in arrows.iter().enumerate() {
            if row.len() != r + 1 {
                return Err(Error::Domain(format!("arrow row {} has {} entries", r + 1, row.len())));
            }
            for (j, &a) in row.iter().enumerate() {
                let ok = match triangle.lean(r, j) {
                    Lean::Left => a == Arrow::SouthWest,
                    Lean::Right => a == Arrow::SouthEast,
                    Lean::Special => true,
                };
                if !ok {
                    return Err(Error::Domain(format!("arrow {a:?} at row {}, entry {}", r + 1, j + 1)));
                }
            }
        }
        Ok(Damt { triangle, arrows })
    }
}

fn check_x(x: &[Rat], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::Domain(format!("{} variables for {n} rows", x.len())));
    }
    Ok(())
}

/// `Π_i u^{r_{i-1}} v^{l_{i-1}} (w + u x_i + v/x_i)^{s_{i-1}} x_i^{d_i}`.
pub fn mt_weight(m: &MonotoneTriangle, x: &[Rat], u: &Rat, v: &Rat, w: &Rat) -> Result<Rat> {
    let n = m.n();
    check_x(x, n)?;
    let mut acc = Rat::one();
    for i in 1..=n {
        let (l, r, s) = m.statistics(i - 1);
        let d = m.row_sum(i) - m.row_sum(i - 1) + r as i64 - l as i64;
        acc *= num_traits::pow(u.clone(), r) * num_traits::pow(v.clone(), l) * powi(&x[i - 1], d)?;
        if s > 0 {
            let special = w + u * &x[i - 1] + v * powi(&x[i - 1], -1)?;
            acc *= num_traits::pow(special, s);
        }
    }
    Ok(acc)
}

/// `u^{#SE} v^{#SW} w^{#Down} Π_i x_i^{(row sum_i - row sum_{i-1}) + #SE_{i-1} - #SW_{i-1}}`.
pub fn damt_weight(d: &Damt, x: &[Rat], u: &Rat, v: &Rat, w: &Rat) -> Result<Rat> {
    let m = &d.triangle;
    let n = m.n();
    check_x(x, n)?;
    let mut acc = Rat::one();
    for i in 1..=n {
        let (mut se, mut sw, mut down) = (0usize, 0usize, 0usize);
        if i >= 2 {
            for a in &d.arrows[i - 2] {
                match a {
                    Arrow::SouthEast => se += 1,
                    Arrow::SouthWest => sw += 1,
                    Arrow::Down => down += 1,
                }
            }
        }
        let e = m.row_sum(i) - m.row_sum(i - 1) + se as i64 - sw as i64;
        acc *= num_traits::pow(u.clone(), se)
            * num_traits::pow(v.clone(), sw)
            * num_traits::pow(w.clone(), down)
            * powi(&x[i - 1], e)?;
    }
    Ok(acc)
}

fn check_strict(k: &[i64]) -> Result<()> {
    if k.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("bottom row {k:?} is not strictly increasing")));
    }
    Ok(())
}

/// All monotone triangles with bottom row `k`.
pub fn monotone_triangles(k: &[i64]) -> Result<Vec<MonotoneTriangle>> {
    check_strict(k)?;
    Ok(gelfand_tsetlin_patterns(k, true).into_iter().map(|rows| MonotoneTriangle { rows }).collect())
}

/// All DAMTs with bottom row `k`.
pub fn damts(k: &[i64]) -> Result<Vec<Damt>> {
    let mut out = Vec::new();
    for m in monotone_triangles(k)? {
        let choices: Vec<Vec<Arrow>> = (0..m.n().saturating_sub(1))
            .flat_map(|r| (0..=r).map(move |j| (r, j)))
            .map(|(r, j)| match m.lean(r, j) {
                Lean::Left => alloc::vec![Arrow::SouthWest],
                Lean::Right => alloc::vec![Arrow::SouthEast],
                Lean::Special => alloc::vec![Arrow::SouthWest, Arrow::Down, Arrow::SouthEast],
            })
            .collect();
        let mut pick = alloc::vec![0usize; choices.len()];
        loop {
            let mut flat = pick.iter().zip(&choices).map(|(&p, c)| c[p]);
            let arrows = (0..m.n().saturating_sub(1)).map(|r| flat.by_ref().take(r + 1).collect()).collect();
            out.push(Damt { triangle: m.clone(), arrows });
            // odometer over the decoration choices
            let mut idx = 0;
            loop {
                if idx == pick.len() {
                    break;
                }
                pick[idx] += 1;
                if pick[idx] < choices[idx].len() {
                    break;
                }
                pick[idx] = 0;
                idx += 1;
            }
            if idx == pick.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Number of monotone triangles with bottom row `k`, by a memoized row recursion.
pub fn count_monotone_triangles(k: &[i64]) -> Result<u128> {
    check_strict(k)?;
    fn rec(row: &[i64], memo: &mut BTreeMap<Vec<i64>, u128>) -> u128 {
        if row.len() <= 1 {
            return 1;
        }
        if let Some(&c) = memo.get(row) {
            return c;
        }
        let c = interlacing_rows(row, true).iter().map(|above| rec(above, memo)).sum();
        memo.insert(row.to_vec(), c);
        c
    }
    Ok(rec(k, &mut BTreeMap::new()))
}

/// `R*_k(x; u, v, w)` as the generating function of DAMTs with bottom row `k`.
/// Decorations are summed entry by entry inside a row-to-row transfer.
pub fn robbins_star_enum(k: &[i64], x: &[Rat], u: &Rat, v: &Rat, w: &Rat) -> Result<Rat> {
    check_strict(k)?;
    check_x(x, k.len())?;
    pattern_sum(k, true, &mut |i, above, row| {
        let xi = &x[i - 1];
        let d = row.iter().sum::<i64>() - above.iter().sum::<i64>();
        let mut acc = powi(xi, d)?;
        for j in 0..above.len() {
            acc *= match lean(above, row, j) {
                Lean::Left => v * powi(xi, -1)?,
                Lean::Right => u * xi,
                Lean::Special => w + u * xi + v * powi(xi, -1)?,
            };
        }
        Ok(acc)
    })
}

fn vandermonde(x: &[Rat]) -> Result<Rat> {
    let mut den = Rat::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            den *= &x[j] - &x[i];
        }
    }
    if den.is_zero() {
        return Err(Error::Pole("Π (x_j - x_i)".into()));
    }
    Ok(den)
}

/// `asym[Π_{i<j} (u x_i x_j + v + w x_i) Π x_i^{k_i}] / Π_{i<j} (x_j - x_i)`.
pub fn robbins_star_bialternant(k: &[i64], x: &[Rat], u: &Rat, v: &Rat, w: &Rat) -> Result<Rat> {
    check_x(x, k.len())?;
    let den = vandermonde(x)?;
    let n = x.len();
    let num = antisymmetrize(x, |y| {
        let mut term = Rat::one();
        for i in 0..n {
            term *= powi(&y[i], k[i])?;
            for j in i + 1..n {
                term *= u * &y[i] * &y[j] + v + w * &y[i];
            }
        }
        Ok(term)
    })?;
    Ok(num / den)
}

/// Ordinary Robbins polynomial
/// `asym[Π_{i<=j} (t x_j + u x_i x_j + v + w x_i) Π x_i^{k_i - 1}] / Π_{i<j} (x_j - x_i)`.
pub fn robbins_bialternant(k: &[i64], x: &[Rat], t: &Rat, u: &Rat, v: &Rat, w: &Rat) -> Result<Rat> {
    check_x(x, k.len())?;
    let den = vandermonde(x)?;
    let n = x.len();
    let num = antisymmetrize(x, |y| {
        let mut term = Rat::one();
        for i in 0..n {
            term *= powi(&y[i], k[i] - 1)?;
            for j in i..n {
                term *= t * &y[j] + u * &y[i] * &y[j] + v + w * &y[i];
            }
        }
        Ok(term)
    })?;
    Ok(num / den)
}

/// Bottom rows `k_1 < … < k_n` with entries in `lo..=hi`.
pub fn strict_rows(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, next: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in next..=hi {
            cur.push(a);
            rec(n, a + 1, hi, cur, out);
            cur.pop();
        }
    }
    rec(n, lo, hi, &mut cur, &mut out);
    out
}
