//! Exact rational scalars, q-Pochhammer symbols, spin parameter sequences and
//! deterministic sampling of generic evaluation points.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `(a; q)_n = prod_{i<n} (1 - a q^i)`.
pub fn qpoch(a: &Rat, q: &Rat, n: usize) -> Rat {
    let mut acc = Rat::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= Rat::one() - &term;
        term *= q;
    }
    acc
}

/// `x^e` for a possibly negative exponent.
pub fn powi(x: &Rat, e: i64) -> Result<Rat> {
    if e >= 0 {
        Ok(num_traits::pow(x.clone(), e as usize))
    } else if x.is_zero() {
        Err(Error::Pole(format!("x (raised to {e})")))
    } else {
        Ok(num_traits::pow(x.clone().recip(), (-e) as usize))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Members of the subset of `0..n` encoded by the bitmask `mask`.
pub fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `(-1)^{#{i in T, j in S \ T : i > j}}` for `T ⊆ S = 0..n`.
pub fn crossing_sign(mask: u32, n: usize) -> i64 {
    let mut inversions = 0;
    for i in 0..n {
        if mask >> i & 1 == 1 {
            inversions += (0..i).filter(|&j| mask >> j & 1 == 0).count();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Spin parameters `s_0, ..., s_{p-1}` followed by `s_j = s` for all `j >= p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinParams {
    pub prefix: Vec<Rat>,
    pub tail: Rat,
}

impl SpinParams {
    pub fn new(prefix: Vec<Rat>, tail: Rat) -> Self {
        SpinParams { prefix, tail }
    }

    pub fn constant(s: Rat) -> Self {
        SpinParams { prefix: Vec::new(), tail: s }
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    pub fn p(&self) -> usize {
        self.prefix.len()
    }

    pub fn get(&self, j: usize) -> &Rat {
        self.prefix.get(j).unwrap_or(&self.tail)
    }

    pub fn view(&self) -> Spins<'_> {
        Spins { params: self, offset: 0 }
    }
}

/// Index-shifted view `j -> s_{offset + j}` of a spin sequence.
#[derive(Debug, Clone, Copy)]
pub struct Spins<'a> {
    params: &'a SpinParams,
    offset: usize,
}

impl<'a> Spins<'a> {
    pub fn get(&self, j: usize) -> &'a Rat {
        self.params.get(self.offset + j)
    }

    pub fn shift(self, by: usize) -> Spins<'a> {
        Spins { params: self.params, offset: self.offset + by }
    }

    /// Number of leading entries that may differ from the tail.
    pub fn p(&self) -> usize {
        self.params.p().saturating_sub(self.offset)
    }

    pub fn tail(&self) -> &'a Rat {
        &self.params.tail
    }
}

/// A parameter point: `t = q^{1/2}`, `q = t^2`, `gamma`, spins and spectral `u_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoint {
    pub t: Rat,
    pub q: Rat,
    pub gamma: Rat,
    pub spin: SpinParams,
    pub u: Vec<Rat>,
}

impl ParamPoint {
    pub fn new(t: Rat, gamma: Rat, spin: SpinParams, u: Vec<Rat>) -> Self {
        let q = &t * &t;
        ParamPoint { t, q, gamma, spin, u }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn with_u(&self, u: Vec<Rat>) -> Self {
        ParamPoint { u, ..self.clone() }
    }

    pub fn with_spin(&self, spin: SpinParams) -> Self {
        ParamPoint { spin, ..self.clone() }
    }
}

/// A denominator that must not vanish at a sampled point.
pub type Pole<'a> = &'a dyn Fn(&ParamPoint) -> Rat;

const MAX_ATTEMPTS: u32 = 256;

/// Deterministic source of small generic rationals `±a/b`, `a, b ∈ [2, 50]`,
/// never equal to `0` or `±1`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.rng.next_u64() % (hi - lo + 1)
    }

    pub fn rat(&mut self) -> Rat {
        loop {
            let num = self.uniform(2, 50) as i64;
            let den = self.uniform(2, 50) as i64;
            let sign = if self.rng.next_u32() & 1 == 0 { 1 } else { -1 };
            let r = rat(sign * num, den);
            if !r.abs().is_one() {
                return r;
            }
        }
    }

    /// `count` pairwise distinct rationals that also avoid `avoid`.
    pub fn distinct(&mut self, count: usize, avoid: &[Rat]) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::with_capacity(count);
        while out.len() < count {
            let r = self.rat();
            if !out.contains(&r) && !avoid.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn point(&mut self, n: usize, p: usize) -> ParamPoint {
        let t = self.rat();
        let gamma = self.rat();
        let prefix = (0..p).map(|_| self.rat()).collect();
        let tail = self.rat();
        let u = self.distinct(n, &[]);
        ParamPoint::new(t, gamma, SpinParams::new(prefix, tail), u)
    }
}

/// Sample a generic point with `n` spectral parameters and `p` free spins at
/// which none of `poles` vanishes. Deterministic in `seed`.
pub fn sample_point(seed: u64, n: usize, p: usize, poles: &[Pole<'_>]) -> Result<ParamPoint> {
    let mut sampler = Sampler::new(seed);
    for _ in 0..MAX_ATTEMPTS {
        let point = sampler.point(n, p);
        if poles.iter().all(|pole| !pole(&point).is_zero()) {
            return Ok(point);
        }
    }
    Err(Error::SamplerExhausted { seed, attempts: MAX_ATTEMPTS })
}

/// Run `f` on fresh points derived from `seed` until it stops hitting poles.
pub fn with_generic_point<T>(seed: u64, n: usize, p: usize, mut f: impl FnMut(&ParamPoint) -> Result<T>) -> Result<T> {
    let mut sampler = Sampler::new(seed);
    for _ in 0..MAX_ATTEMPTS {
        let point = sampler.point(n, p);
        match f(&point) {
            Err(e) if e.is_pole() => continue,
            other => return other,
        }
    }
    Err(Error::SamplerExhausted { seed, attempts: MAX_ATTEMPTS })
}
