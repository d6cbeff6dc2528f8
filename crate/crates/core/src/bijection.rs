//! The degenerate vertex model at `s_j = -q^{-1/2}` and its weight-preserving
//! correspondence with monotone triangles for strict `λ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{ParamPoint, Rat, SpinParams};
use crate::error::{Error, Result};
use crate::robbins::{mt_weight, robbins_star_bialternant, robbins_star_enum, Arrow, Damt, MonotoneTriangle};
use crate::symfun::{f_lambda, Partition};
use crate::vertex::{ensembles, PathEnsemble, VertexConfig};

/// The DAMT parameters `(u, v, w) = (t - 1/t, t - 1/t, 1/q - q)` matching `s_j = -1/t`.
pub fn damt_parameters(t: &Rat) -> (Rat, Rat, Rat) {
    let v = t - t.recip();
    let q = t * t;
    let w = q.recip() - &q;
    (v.clone(), v, w)
}

/// `u = (x - 1/t) / (1 - x/t)`.
pub fn x_to_u(x: &Rat, t: &Rat) -> Result<Rat> {
    let den = Rat::one() - x / t;
    if den.is_zero() {
        return Err(Error::Pole("1 - x/t".into()));
    }
    Ok((x - t.recip()) / den)
}

/// `x = (u + 1/t) / (1 + u/t)`.
pub fn u_to_x(u: &Rat, t: &Rat) -> Result<Rat> {
    let den = Rat::one() + u / t;
    if den.is_zero() {
        return Err(Error::Pole("1 + u/t".into()));
    }
    Ok((u + t.recip()) / den)
}

fn admissible(cfg: VertexConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.i1 > 1 || cfg.i2 > 1 {
        return Err(Error::Domain(format!("{cfg:?} has a doubled vertical edge")));
    }
    Ok(())
}

/// Weight of an admissible configuration at `s = -1/t`, in the variable `x`.
pub fn degenerate_weight(cfg: VertexConfig, x: &Rat, t: &Rat) -> Result<Rat> {
    admissible(cfg)?;
    let one = Rat::one();
    let q = t * t;
    let (_, v, _) = damt_parameters(t);
    let c = &one - q.recip();
    Ok(match (cfg.i1, cfg.i2, cfg.j1, cfg.j2) {
        (0, 0, 0, 0) => one,
        (1, 1, 0, 0) => &v * x / c,
        (0, 0, 1, 1) => x.clone(),
        (1, 1, 1, 1) => v / c,
        (1, 0, 0, 1) => (-q.recip() * &v + x * &c) / c,
        _ => (&one - &q + v * x) / c,
    })
}

/// Weight after absorbing the normalization: configurations with a path entering
/// from below lose their `1 - 1/q` denominator, and the leftmost `(0,1;1,0)` of a
/// row counts `1`.
pub fn normalized_weight(cfg: VertexConfig, x: &Rat, t: &Rat, leftmost_0110: bool) -> Result<Rat> {
    admissible(cfg)?;
    if cfg.i1 == 0 && cfg.i2 == 1 && leftmost_0110 {
        return Ok(Rat::one());
    }
    let w = degenerate_weight(cfg, x, t)?;
    if cfg.i1 == 1 {
        Ok(w * (Rat::one() - (t * t).recip()))
    } else {
        Ok(w)
    }
}

fn is_0110(cfg: &VertexConfig) -> bool {
    cfg.i1 == 0 && cfg.i2 == 1
}

fn is_1001(cfg: &VertexConfig) -> bool {
    cfg.i1 == 1 && cfg.i2 == 0
}

/// Product of normalized weights over all vertices.
pub fn normalized_ensemble_weight(e: &PathEnsemble, x: &[Rat], t: &Rat) -> Result<Rat> {
    let mut acc = Rat::one();
    for i in 1..=e.rows() {
        let mut seen_0110 = false;
        for cfg in e.row_configs(i)? {
            let leftmost = is_0110(&cfg) && !seen_0110;
            seen_0110 |= is_0110(&cfg);
            acc *= normalized_weight(cfg, &x[i - 1], t, leftmost)?;
        }
    }
    Ok(acc)
}

/// Row `i` of the triangle lists the columns whose vertical edge between rows
/// `i` and `i + 1` carries a path.
pub fn ensemble_to_triangle(e: &PathEnsemble) -> Result<MonotoneTriangle> {
    if e.max_multiplicity() > 1 {
        return Err(Error::Domain("ensemble shares a vertical edge between two paths".into()));
    }
    let rows = e.states[1..]
        .iter()
        .map(|state| (0..state.len()).filter(|&c| state[c] == 1).map(|c| c as i64).collect())
        .collect();
    MonotoneTriangle::new(rows)
}

pub fn triangle_to_ensemble(m: &MonotoneTriangle, max_col: usize) -> Result<PathEnsemble> {
    let mut states = vec![vec![0; max_col + 1]];
    for row in m.rows() {
        let mut state = vec![0; max_col + 1];
        for &a in row {
            if a < 0 || a as usize > max_col {
                return Err(Error::Domain(format!("entry {a} outside columns 0..={max_col}")));
            }
            state[a as usize] = 1;
        }
        states.push(state);
    }
    let e = PathEnsemble { states };
    for i in 1..=e.rows() {
        e.row_configs(i)?;
    }
    Ok(e)
}

/// Degenerate ensembles with top boundary `λ` whose weight does not vanish
/// identically, i.e. those without doubled vertical edges.
pub fn admissible_ensembles(lambda: &Partition) -> Result<Vec<PathEnsemble>> {
    Ok(ensembles(lambda, lambda.largest())?.into_iter().filter(|e| e.max_multiplicity() <= 1).collect())
}

/// `#(1,0;0,1)` and `#(0,1;1,0)` per row.
pub fn pairing_counts(e: &PathEnsemble) -> Result<Vec<(usize, usize)>> {
    (1..=e.rows())
        .map(|i| {
            let cfgs = e.row_configs(i)?;
            Ok((cfgs.iter().filter(|c| is_1001(c)).count(), cfgs.iter().filter(|c| is_0110(c)).count()))
        })
        .collect()
}

/// Colours on `(1,0;0,1)` vertices, keyed by `(row, column)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredEnsemble {
    pub ensemble: PathEnsemble,
    pub colors: BTreeMap<(usize, usize), Arrow>,
}

/// A decorated triangle as a coloured ensemble: the arrow on a special entry with
/// value `c` in row `i - 1` colours the `(1,0;0,1)` vertex at `(c, i)`.
pub fn damt_to_colored(d: &Damt, max_col: usize) -> Result<ColoredEnsemble> {
    let ensemble = triangle_to_ensemble(&d.triangle, max_col)?;
    let mut colors = BTreeMap::new();
    for (r, arrows) in d.arrows.iter().enumerate() {
        let row = &d.triangle.rows()[r];
        let cfgs = ensemble.row_configs(r + 2)?;
        for (j, &a) in arrows.iter().enumerate() {
            let c = row[j] as usize;
            if is_1001(&cfgs[c]) {
                colors.insert((r + 2, c), a);
            }
        }
    }
    Ok(ColoredEnsemble { ensemble, colors })
}

/// Coloured weights: `(0,1;1,0)` counts `1`, a `(1,0;0,1)` vertex counts `v`,
/// `w x` or `v x^2` by colour, all other vertices keep their normalized weight.
pub fn colored_weight(ce: &ColoredEnsemble, x: &[Rat], t: &Rat) -> Result<Rat> {
    let (_, v, w) = damt_parameters(t);
    let e = &ce.ensemble;
    let mut acc = Rat::one();
    for i in 1..=e.rows() {
        let xi = &x[i - 1];
        for (c, cfg) in e.row_configs(i)?.into_iter().enumerate() {
            acc *= if is_0110(&cfg) {
                Rat::one()
            } else if is_1001(&cfg) {
                match ce.colors.get(&(i, c)) {
                    Some(Arrow::SouthWest) => v.clone(),
                    Some(Arrow::Down) => &w * xi,
                    Some(Arrow::SouthEast) => &v * xi * xi,
                    None => return Err(Error::Domain(format!("uncoloured (1,0;0,1) at ({c},{i})"))),
                }
            } else {
                normalized_weight(cfg, xi, t, false)?
            };
        }
    }
    Ok(acc)
}

/// Both sides of the relation between `F_λ` at `s_j = -1/t` and the modified
/// Robbins polynomial, plus the bijective evaluation for strict `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    /// `R*_{(λ_n,…,λ_1)}(x; v, v, w)` by the alternant formula.
    pub robbins: Rat,
    /// The normalized `F_λ` side.
    pub spin_hl: Rat,
    /// `R*` by DAMT enumeration (strict `λ` only).
    pub robbins_enum: Option<Rat>,
    /// Sum of normalized ensemble weights (strict `λ` only).
    pub ensemble_sum: Option<Rat>,
    /// Every admissible ensemble has the weight of its triangle (strict `λ` only).
    pub per_object: Option<bool>,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.robbins == self.spin_hl
            && self.robbins_enum.as_ref().is_none_or(|r| *r == self.robbins)
            && self.ensemble_sum.as_ref().is_none_or(|r| *r == self.robbins)
            && self.per_object.unwrap_or(true)
    }
}

pub fn verify_lemma_connection(lambda: &Partition, t: &Rat, x: &[Rat]) -> Result<LemmaCheck> {
    let n = lambda.len();
    if x.len() != n {
        return Err(Error::Domain(format!("{} variables for a partition of length {n}", x.len())));
    }
    let one = Rat::one();
    let q = t * t;
    let (uu, v, w) = damt_parameters(t);
    let k = lambda.reversed();
    let robbins = robbins_star_bialternant(&k, x, &uu, &v, &w)?;

    let u = x.iter().map(|xi| x_to_u(xi, t)).collect::<Result<Vec<_>>>()?;
    let point = ParamPoint::new(t.clone(), one.clone(), SpinParams::constant(-t.recip()), u);
    let c = &one - q.recip();
    let mut spin_hl = num_traits::pow(c.clone(), n * n.saturating_sub(1) / 2) * f_lambda(lambda, &point)?;
    for xi in x {
        let den = &one - &q + &v * xi;
        if den.is_zero() {
            return Err(Error::Pole("1 - q + v·x".into()));
        }
        spin_hl *= &c / den;
    }

    let (mut robbins_enum, mut ensemble_sum, mut per_object) = (None, None, None);
    if lambda.is_strict() {
        robbins_enum = Some(robbins_star_enum(&k, x, &uu, &v, &w)?);
        let mut sum = Rat::zero();
        let mut ok = true;
        for e in admissible_ensembles(lambda)? {
            let we = normalized_ensemble_weight(&e, x, t)?;
            let m = ensemble_to_triangle(&e)?;
            ok &= we == mt_weight(&m, x, &uu, &v, &w)?;
            sum += we;
        }
        ensemble_sum = Some(sum);
        per_object = Some(ok);
    }
    Ok(LemmaCheck { robbins, spin_hl, robbins_enum, ensemble_sum, per_object })
}

/// An admissible ensemble together with its triangle and both weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionPair {
    pub ensemble: PathEnsemble,
    pub triangle: MonotoneTriangle,
    pub ensemble_weight: Rat,
    pub triangle_weight: Rat,
}

pub fn bijection_pairs(lambda: &Partition, t: &Rat, x: &[Rat]) -> Result<Vec<BijectionPair>> {
    if !lambda.is_strict() {
        return Err(Error::Domain(format!("{lambda} is not strict")));
    }
    let (uu, v, w) = damt_parameters(t);
    admissible_ensembles(lambda)?
        .into_iter()
        .map(|ensemble| {
            let triangle = ensemble_to_triangle(&ensemble)?;
            Ok(BijectionPair {
                ensemble_weight: normalized_ensemble_weight(&ensemble, x, t)?,
                triangle_weight: mt_weight(&triangle, x, &uu, &v, &w)?,
                ensemble,
                triangle,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Sampler};
    use crate::robbins::{damt_weight, damts, monotone_triangles, strict_rows};
    use crate::vertex::vertex_weight;
    use alloc::collections::BTreeSet;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn cfg(i1: usize, i2: usize, j1: u8, j2: u8) -> VertexConfig {
        VertexConfig::new(i1, i2, j1, j2).unwrap()
    }

    const FIVE: [(usize, usize, u8, u8); 5] = [(1, 1, 0, 0), (0, 0, 1, 1), (1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)];

    #[test]
    fn degenerate_table() {
        let (x, t) = (rat(3, 7), rat(2, 5));
        assert_eq!(degenerate_weight(cfg(0, 0, 1, 1), &x, &t).unwrap(), x);
        assert!(degenerate_weight(cfg(2, 2, 0, 0), &x, &t).is_err());
        let (_, v, _) = damt_parameters(&t);
        let q = &t * &t;
        assert_eq!(normalized_weight(cfg(1, 1, 0, 0), &x, &t, false).unwrap(), &v * &x);
        assert_eq!(
            normalized_weight(cfg(1, 0, 0, 1), &x, &t, false).unwrap(),
            -q.recip() * &v + &x * (int(1) - q.recip())
        );
        assert_eq!(normalized_weight(cfg(0, 1, 1, 0), &x, &t, true).unwrap(), int(1));
        // v vanishes at t = 1 only, which is excluded; at other t the weight is generic
        assert!(!degenerate_weight(cfg(1, 1, 1, 1), &x, &rat(-1, 3)).unwrap().is_zero());
    }

    #[test]
    fn degenerate_matches_vertex_weights() {
        let mut s = Sampler::new(17);
        for _ in 0..10 {
            let (t, u) = (s.rat(), s.rat());
            let x = u_to_x(&u, &t).unwrap();
            assert_eq!(x_to_u(&x, &t).unwrap(), u);
            let spin = -t.recip();
            for (i1, i2, j1, j2) in FIVE {
                let c = cfg(i1, i2, j1, j2);
                assert_eq!(
                    degenerate_weight(c, &x, &t).unwrap(),
                    vertex_weight(c, &u, &spin, &(&t * &t)).unwrap(),
                    "{c:?}"
                );
            }
        }
    }

    #[test]
    fn pair_product_is_special_weight() {
        let (x, t) = (rat(5, 3), rat(-3, 4));
        let (_, v, w) = damt_parameters(&t);
        let pair = normalized_weight(cfg(1, 0, 0, 1), &x, &t, false).unwrap()
            * normalized_weight(cfg(0, 1, 1, 0), &x, &t, false).unwrap();
        assert_eq!(pair, &v + &w * &x + &v * &x * &x);
    }

    #[test]
    fn figure_example() {
        let lambda = part(&[8, 7, 4, 3, 1, 0]);
        let m = MonotoneTriangle::new(vec![
            vec![2],
            vec![2, 6],
            vec![2, 4, 7],
            vec![2, 4, 6, 8],
            vec![1, 3, 4, 7, 8],
            vec![0, 1, 3, 4, 7, 8],
        ])
        .unwrap();
        let e = triangle_to_ensemble(&m, 8).unwrap();
        assert_eq!(e.states.last().unwrap(), &crate::vertex::top_state(&lambda, 8));
        assert_eq!(ensemble_to_triangle(&e).unwrap(), m);
        let single = triangle_to_ensemble(&MonotoneTriangle::new(vec![vec![3]]).unwrap(), 3).unwrap();
        assert_eq!(ensemble_to_triangle(&single).unwrap().rows(), &[vec![3]]);
    }

    #[test]
    fn bijection_is_bijective() {
        for n in 1..=4 {
            for k in strict_rows(n, 0, 5) {
                let lambda = Partition::new(k.iter().rev().map(|&a| a as usize).collect()).unwrap();
                let images: BTreeSet<MonotoneTriangle> =
                    admissible_ensembles(&lambda).unwrap().iter().map(|e| ensemble_to_triangle(e).unwrap()).collect();
                let triangles: BTreeSet<MonotoneTriangle> = monotone_triangles(&k).unwrap().into_iter().collect();
                assert_eq!(images.len(), admissible_ensembles(&lambda).unwrap().len());
                assert_eq!(images, triangles, "{lambda}");
                for m in &triangles {
                    let e = triangle_to_ensemble(m, lambda.largest()).unwrap();
                    assert_eq!(&ensemble_to_triangle(&e).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn pairing_in_every_row() {
        for lambda in [part(&[3, 1, 0]), part(&[4, 2, 1, 0]), part(&[5, 3, 2, 0])] {
            for e in admissible_ensembles(&lambda).unwrap() {
                for (ones, zeros) in pairing_counts(&e).unwrap() {
                    assert_eq!(ones + 1, zeros);
                }
            }
        }
    }

    #[test]
    fn weights_are_preserved() {
        let mut s = Sampler::new(23);
        for lambda in [part(&[2, 1, 0]), part(&[4, 2, 1]), part(&[5, 3, 1, 0])] {
            let t = s.rat();
            let x = s.distinct(lambda.len(), &[]);
            for pair in bijection_pairs(&lambda, &t, &x).unwrap() {
                assert_eq!(pair.ensemble_weight, pair.triangle_weight);
            }
        }
    }

    #[test]
    fn colored_ensembles_carry_damt_weights() {
        let mut s = Sampler::new(29);
        for k in [vec![0, 1, 3], vec![0, 2, 3, 5], vec![1, 2, 4]] {
            let t = s.rat();
            let x = s.distinct(k.len(), &[]);
            let (u, v, w) = damt_parameters(&t);
            let max_col = *k.last().unwrap() as usize;
            let mut seen = BTreeSet::new();
            for d in damts(&k).unwrap() {
                let ce = damt_to_colored(&d, max_col).unwrap();
                assert_eq!(colored_weight(&ce, &x, &t).unwrap(), damt_weight(&d, &x, &u, &v, &w).unwrap());
                assert!(seen.insert((ce.ensemble.states.clone(), ce.colors.clone())));
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let mut s = Sampler::new(31);
        for lambda in [part(&[1, 0]), part(&[2, 1, 0]), part(&[2, 2, 0])] {
            for _ in 0..3 {
                let t = s.rat();
                let x = s.distinct(lambda.len(), &[]);
                let check = verify_lemma_connection(&lambda, &t, &x).unwrap();
                assert!(check.holds(), "{lambda}: {check:?}");
                assert_eq!(check.per_object.is_some(), lambda.is_strict());
            }
        }
    }
}
