//! Skew-symmetric matrices over a ring, Pfaffians, the matrices `M^γ` and
//! the diagonal conjugations `B(U, V)`, and the product sides of the
//! Littlewood-type identities.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::arith::{members, Rat};
use crate::error::{Error, Result};
use crate::ring::{div, inv, Ring};

/// A skew-symmetric matrix indexed by an ordered list of distinct labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix<R> {
    labels: Vec<usize>,
    entries: Vec<Vec<R>>,
    one: R,
}

impl<R: Ring> SkewMatrix<R> {
    /// Build from the entries `f(a, b)` above the diagonal, `a` before `b` in `labels`.
    pub fn from_upper(labels: Vec<usize>, one: R, mut f: impl FnMut(usize, usize) -> Result<R>) -> Result<Self> {
        if labels.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(Error::Domain(format!("repeated labels in {labels:?}")));
        }
        let d = labels.len();
        let zero = one.zero_like();
        let mut entries = alloc::vec![alloc::vec![zero; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let v = f(labels[i], labels[j])?;
                entries[j][i] = -v.clone();
                entries[i][j] = v;
            }
        }
        Ok(SkewMatrix { labels, entries, one })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn one(&self) -> &R {
        &self.one
    }

    /// Entry at positions `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.entries[i][j]
    }

    fn position(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Domain(format!("label {label} not in {:?}", self.labels)))
    }

    pub fn entry(&self, a: usize, b: usize) -> Result<&R> {
        Ok(&self.entries[self.position(a)?][self.position(b)?])
    }

    /// The principal submatrix on `labels`, in the order given.
    pub fn restrict(&self, labels: &[usize]) -> Result<Self> {
        let pos = labels.iter().map(|&l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let entries = pos.iter().map(|&i| pos.iter().map(|&j| self.entries[i][j].clone()).collect()).collect();
        Ok(SkewMatrix { labels: labels.to_vec(), entries, one: self.one.clone() })
    }

    /// Rows and columns reordered so that new position `k` holds old position `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let entries = perm.iter().map(|&i| perm.iter().map(|&j| self.entries[i][j].clone()).collect()).collect();
        SkewMatrix { labels: perm.iter().map(|&i| self.labels[i]).collect(), entries, one: self.one.clone() }
    }

    /// `D A D` for the diagonal matrix with entries `diag` (by position).
    pub fn conjugate_diagonal(&self, diag: &[R]) -> Self {
        let d = self.dim();
        let entries =
            (0..d).map(|i| (0..d).map(|j| diag[i].clone() * &self.entries[i][j] * &diag[j]).collect()).collect();
        SkewMatrix { labels: self.labels.clone(), entries, one: self.one.clone() }
    }

    /// `B A B^T` for a square matrix `B` (rows by position).
    pub fn congruence(&self, b: &[Vec<R>]) -> Self {
        let d = self.dim();
        let zero = self.one.zero_like();
        let ab: Vec<Vec<R>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(zero.clone(), |acc, k| acc + &(self.entries[i][k].clone() * &b[j][k])))
                    .collect()
            })
            .collect();
        let entries = (0..d)
            .map(|i| (0..d).map(|j| (0..d).fold(zero.clone(), |acc, k| acc + &(b[i][k].clone() * &ab[k][j]))).collect())
            .collect();
        SkewMatrix { labels: self.labels.clone(), entries, one: self.one.clone() }
    }
}

fn check_even<R>(a: &SkewMatrix<R>) -> Result<()> {
    if a.labels.len() % 2 == 1 {
        return Err(Error::OddDimension(a.labels.len()));
    }
    Ok(())
}

/// Pfaffian by Laplace expansion along the first remaining index, memoized on
/// the set of remaining positions.
pub fn pfaffian<R: Ring>(a: &SkewMatrix<R>) -> Result<R> {
    check_even(a)?;
    if a.dim() > 64 {
        return Err(Error::Domain("pfaffian dimension above 64".into()));
    }
    let full = if a.dim() == 64 { u64::MAX } else { (1u64 << a.dim()) - 1 };
    let mut memo = BTreeMap::new();
    Ok(pf_rec(a, full, &mut memo))
}

fn pf_rec<R: Ring>(a: &SkewMatrix<R>, set: u64, memo: &mut BTreeMap<u64, R>) -> R {
    if set == 0 {
        return a.one.clone();
    }
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1 << i);
    let mut acc = a.one.zero_like();
    let mut sign_plus = true;
    for j in 0..a.dim() {
        if rest >> j & 1 == 0 {
            continue;
        }
        if !a.entries[i][j].is_zero() {
            let term = a.entries[i][j].clone() * &pf_rec(a, rest & !(1 << j), memo);
            acc = if sign_plus { acc + &term } else { acc - &term };
        }
        sign_plus = !sign_plus;
    }
    memo.insert(set, acc.clone());
    acc
}

/// Pfaffian as the signed sum over perfect matchings.
pub fn pfaffian_matchings<R: Ring>(a: &SkewMatrix<R>) -> Result<R> {
    check_even(a)?;
    let mut acc = a.one.zero_like();
    let mut pairs = Vec::new();
    let mut used = alloc::vec![false; a.dim()];
    matchings(a, &mut used, &mut pairs, &mut acc);
    Ok(acc)
}

fn matchings<R: Ring>(a: &SkewMatrix<R>, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, acc: &mut R) {
    let Some(i) = used.iter().position(|&u| !u) else {
        let word: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        let term = pairs.iter().fold(a.one.clone(), |t, &(i, j)| t * &a.entries[i][j]);
        *acc = if permutation_sign(&word) > 0 { acc.clone() + &term } else { acc.clone() - &term };
        return;
    };
    used[i] = true;
    for j in i + 1..used.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        matchings(a, used, pairs, acc);
        pairs.pop();
        used[j] = false;
    }
    used[i] = false;
}

/// Sign of a permutation given as a word.
pub fn permutation_sign(word: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// One step of Laplace expansion along position `p`, with the minors evaluated by [`pfaffian`].
pub fn pfaffian_laplace_at<R: Ring>(a: &SkewMatrix<R>, p: usize) -> Result<R> {
    check_even(a)?;
    let d = a.dim();
    let mut acc = a.one.zero_like();
    for q in 0..d {
        if q == p {
            continue;
        }
        let keep: Vec<usize> = (0..d).filter(|&k| k != p && k != q).map(|k| a.labels[k]).collect();
        let minor = pfaffian(&a.restrict(&keep)?)?;
        // (-1)^{p+q+1}, with an extra sign when q precedes p
        let odd = (p + q + 1 + usize::from(q < p)) % 2 == 1;
        let term = a.entries[p][q].clone() * &minor;
        acc = if odd { acc - &term } else { acc + &term };
    }
    Ok(acc)
}

/// Leibniz determinant of a small square matrix.
pub fn determinant<R: Ring>(m: &[Vec<R>], one: &R) -> R {
    let d = m.len();
    let mut acc = one.zero_like();
    for perm in (0..d).permutations(d) {
        let term = (0..d).fold(one.clone(), |t, i| t * &m[i][perm[i]]);
        acc = if permutation_sign(&perm) > 0 { acc + &term } else { acc - &term };
    }
    acc
}

/// The label set of a matrix indexed by `T`: `T` itself, preceded by `0` when `|T|` is odd.
pub fn labels_for(t: &[usize]) -> Vec<usize> {
    let mut labels = Vec::with_capacity(t.len() + 1);
    if t.len() % 2 == 1 {
        labels.push(0);
    }
    labels.extend_from_slice(t);
    labels
}

/// Labels `1..=n` of the members of a bitmask over `0..n`.
pub fn mask_labels(mask: u32, n: usize) -> Vec<usize> {
    members(mask, n).into_iter().map(|i| i + 1).collect()
}

/// Diagonal of `B(U, V)` on the labels of `V`: `1` at label `0`, and
/// `Π_{k in U, k > i} (1 - u_i u_k)(1 - q u_i u_k)` at label `i`.
pub fn b_matrix<R: Ring>(u_set: &[usize], v_set: &[usize], u: &[R], q: &Rat) -> Vec<(usize, R)> {
    let one = u[0].one_like();
    labels_for(v_set)
        .into_iter()
        .map(|i| {
            let d = if i == 0 { one.clone() } else { b_entry(i, u_set, u, q) };
            (i, d)
        })
        .collect()
}

fn b_entry<R: Ring>(i: usize, u_set: &[usize], u: &[R], q: &Rat) -> R {
    let one = u[0].one_like();
    u_set.iter().filter(|&&k| k > i).fold(one.clone(), |acc, &k| {
        let p = u[i - 1].clone() * &u[k - 1];
        acc * &p.rsub(&Rat::from_integer(1.into())) * &p.scale(q).rsub(&Rat::from_integer(1.into()))
    })
}

/// `D A D` where `D` has the entries of `B(U, ·)` at every label of `a`.
pub fn conjugate_by<R: Ring>(a: &SkewMatrix<R>, u_set: &[usize], u: &[R], q: &Rat) -> SkewMatrix<R> {
    let diag: Vec<R> =
        a.labels().iter().map(|&i| if i == 0 { a.one().clone() } else { b_entry(i, u_set, u, q) }).collect();
    a.conjugate_diagonal(&diag)
}

/// Parameters of the matrix `M^γ`; `s` stands in for `s_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MGammaSpec<R> {
    pub u: Vec<R>,
    pub t: Rat,
    pub gamma: Rat,
    pub s: Rat,
}

impl<R: Ring> MGammaSpec<R> {
    pub fn new(u: Vec<R>, t: Rat, gamma: Rat, s: Rat) -> Self {
        MGammaSpec { u, t, gamma, s }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    fn one(&self) -> R {
        self.u[0].one_like()
    }

    /// `s / γ`, taken as `0` when `s = 0`.
    pub fn s_over_gamma(&self) -> Result<Rat> {
        if num_traits::Zero::is_zero(&self.s) {
            Ok(self.s.clone())
        } else if num_traits::Zero::is_zero(&self.gamma) {
            Err(Error::Pole("γ (in s/γ)".into()))
        } else {
            Ok(&self.s / &self.gamma)
        }
    }

    /// `f(u, v)` of the γ-deformation.
    pub fn f(&self, a: &R, b: &R) -> Result<R> {
        let one = Rat::from_integer(1.into());
        let (t, g, s) = (&self.t, &self.gamma, &self.s);
        let q = t * t;
        let sg = self.s_over_gamma()?;
        let ab = a.clone() * b;
        let den = (a.scale(s).rsub(&one) * &b.scale(s).rsub(&one)).scale(&(&one + t));
        let pre = div(&ab.rsub(&one).scale(&(t - &sg)), &den, || "(1 - s u)(1 - s v)".into())?;
        let k1 = ab.scale(&-(&q * g)).rsub(&one).scale(&((&one + t) * (&one + &sg)));
        let k2 = ab.scale(t).rsub(&one).scale(&((&one + g) * (&q - &sg)));
        let k3 = (a.clone() + b).scale(&((&one + g) * t * (t + &sg)));
        Ok(pre * &(k1 + &k2 - k3))
    }

    /// Entry at labels `(0, j)`.
    pub fn entry0(&self, j: usize) -> Result<R> {
        let one = Rat::from_integer(1.into());
        let (t, g, s) = (&self.t, &self.gamma, &self.s);
        let uj = &self.u[j - 1];
        if g == &one {
            return Ok(self.one());
        }
        let sg = self.s_over_gamma()?;
        let num = uj.rsub(&one).scale(&((g - &one) * (t - &sg)));
        let den = uj.scale(s).rsub(&one).scale(&(&one + t));
        Ok(self.one() + &div(&num, &den, || format!("1 - s·u_{j}"))?)
    }

    /// Entry at labels `(i, j)`, `1 <= i`.
    pub fn entry(&self, i: usize, j: usize) -> Result<R> {
        let one = Rat::from_integer(1.into());
        let t = &self.t;
        let q = t * t;
        let (ui, uj) = (&self.u[i - 1], &self.u[j - 1]);
        let p = ui.clone() * uj;
        let mut bracket = p.scale(t).rsub(&one).scale(&(&one + &q)) + &(ui.clone() + uj).scale(&(t - &q));
        if self.gamma != one {
            bracket = bracket + &self.f(ui, uj)?.scale(&(&self.gamma - &one));
        }
        let num = (ui.clone() - uj) * &bracket;
        let den = (p.rsub(&one) * &p.scale(&q).rsub(&one)).scale(&(&one + t));
        div(&num, &den, || format!("(1 - u_{i}u_{j})(1 - q u_{i}u_{j})"))
    }

    /// The matrix on all labels `0..=n`.
    pub fn full(&self) -> Result<SkewMatrix<R>> {
        SkewMatrix::from_upper((0..=self.n()).collect(), self.one(), |a, b| {
            if a == 0 {
                self.entry0(b)
            } else {
                self.entry(a, b)
            }
        })
    }

    /// `M^γ_T` on the labels of `T` (1-based labels).
    pub fn matrix(&self, t: &[usize]) -> Result<SkewMatrix<R>> {
        SkewMatrix::from_upper(labels_for(t), self.one(), |a, b| if a == 0 { self.entry0(b) } else { self.entry(a, b) })
    }

    /// `B(T,T) M^γ_T B(T,T)`.
    pub fn conjugated(&self, t: &[usize]) -> Result<SkewMatrix<R>> {
        Ok(conjugate_by(&self.matrix(t)?, t, &self.u, &(&self.t * &self.t)))
    }

    pub fn all_labels(&self) -> Vec<usize> {
        (1..=self.n()).collect()
    }
}

fn one_minus<R: Ring>(x: &R) -> R {
    x.rsub(&Rat::from_integer(1.into()))
}

/// `Π_i 1/(1-u_i) Π_{i<j} (1 - q u_i u_j)/(1 - u_i u_j)`.
///
/// Needs at least one variable to know the ring; use [`rhs_main1_or_one`] for scalars.
pub fn rhs_main1<R: Ring>(u: &[R], q: &Rat) -> Result<R> {
    let Some(first) = u.first() else {
        return Err(Error::Domain("at least one variable expected".into()));
    };
    let mut num = first.one_like();
    let mut den = first.one_like();
    for i in 0..u.len() {
        den = den * &one_minus(&u[i]);
        for j in i + 1..u.len() {
            let p = u[i].clone() * &u[j];
            num = num * &one_minus(&p.scale(q));
            den = den * &one_minus(&p);
        }
    }
    div(&num, &den, || "Π(1-u_i) Π(1-u_i u_j)".into())
}

/// [`rhs_main1`] over the rationals, `1` for no variables.
pub fn rhs_main1_or_one(u: &[Rat], q: &Rat) -> Result<Rat> {
    if u.is_empty() {
        Ok(Rat::from_integer(1.into()))
    } else {
        rhs_main1(u, q)
    }
}

/// `Π_i (1+t)/(1-u_i) Π_{i<j} (1 - q u_i u_j) · pf(M^γ)`: the Pfaffian product side
/// before division by `Π_{i<j} (u_i - u_j)`.
pub fn pfaffian_side_numerator<R: Ring>(spec: &MGammaSpec<R>) -> Result<R> {
    let u = &spec.u;
    let one = Rat::from_integer(1.into());
    let q = &spec.t * &spec.t;
    let mut acc = u[0].one_like();
    for i in 0..u.len() {
        acc = acc.scale(&(&one + &spec.t)) * &inv(&one_minus(&u[i]), || format!("1 - u_{}", i + 1))?;
        for j in i + 1..u.len() {
            acc = acc * &one_minus(&(u[i].clone() * &u[j]).scale(&q));
        }
    }
    Ok(acc * &pfaffian(&spec.matrix(&spec.all_labels())?)?)
}

fn vandermonde<R: Ring>(u: &[R]) -> R {
    let mut acc = u[0].one_like();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            acc = acc * &(u[i].clone() - &u[j]);
        }
    }
    acc
}

/// Right-hand side of the Pfaffian identity with parameter `γ` (scalar evaluation).
pub fn rhs_main2(spec: &MGammaSpec<Rat>) -> Result<Rat> {
    if spec.n() == 0 {
        return Ok(Rat::from_integer(1.into()));
    }
    div(&pfaffian_side_numerator(spec)?, &vandermonde(&spec.u), || "Π (u_i - u_j)".into())
}

/// The `γ = 1` right-hand side, built from its own matrix: `1` in row `0` and
/// `(u_i - u_j)((1+q)(1 - t u_i u_j) + (u_i + u_j)(t - q)) / ((1+t)(1 - u_i u_j)(1 - q u_i u_j))`.
pub fn rhs_cor(u: &[Rat], t: &Rat) -> Result<Rat> {
    let n = u.len();
    let one = Rat::from_integer(1.into());
    if n == 0 {
        return Ok(one);
    }
    let q = t * t;
    let labels = labels_for(&(1..=n).collect::<Vec<_>>());
    let m = SkewMatrix::from_upper(labels, one.clone(), |i, j| {
        if i == 0 {
            return Ok(one.clone());
        }
        let (a, b) = (&u[i - 1], &u[j - 1]);
        let ab = a * b;
        let num = (a - b) * ((&one + &q) * (&one - t * &ab) + (a + b) * (t - &q));
        let den = (&one + t) * (&one - &ab) * (&one - &q * &ab);
        div(&num, &den, || format!("(1 - u_{i} u_{j})(1 - q u_{i} u_{j})"))
    })?;
    let mut acc = pfaffian(&m)?;
    for i in 0..n {
        acc = div(&(acc * (&one + t)), &(&one - &u[i]), || format!("1 - u_{}", i + 1))?;
        for j in i + 1..n {
            acc = div(&(acc * (&one - &q * &u[i] * &u[j])), &(&u[i] - &u[j]), || format!("u_{} - u_{}", i + 1, j + 1))?;
        }
    }
    Ok(acc)
}
