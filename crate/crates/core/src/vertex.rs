//! The higher spin six vertex model: local weights, path ensembles and a
//! row-transfer evaluation of `F_λ` independent of the symmetrizer formula.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{ParamPoint, Rat, Spins};
use crate::error::{Error, Result};
use crate::symfun::Partition;

/// Local configuration `(i1, i2; j1, j2)`: paths entering from below, exiting
/// above, entering from the left, exiting to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexConfig {
    pub i1: usize,
    pub i2: usize,
    pub j1: u8,
    pub j2: u8,
}

impl VertexConfig {
    pub fn new(i1: usize, i2: usize, j1: u8, j2: u8) -> Result<Self> {
        let cfg = VertexConfig { i1, i2, j1, j2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.j1 > 1 || self.j2 > 1 || self.i1 + self.j1 as usize != self.i2 + self.j2 as usize {
            return Err(Error::Domain(format!("{self:?} violates arrow preservation")));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.i1 == 0 && self.i2 == 0 && self.j1 == 0 && self.j2 == 0
    }
}

/// Numerator `(a, b)` of a vertex weight, which reads `(a + b·u) / (1 - s·u)`.
pub fn weight_numerator(cfg: VertexConfig, s: &Rat, q: &Rat) -> Result<(Rat, Rat)> {
    cfg.validate()?;
    let one = Rat::one();
    let g = cfg.i1;
    let qg = num_traits::pow(q.clone(), g);
    Ok(match (cfg.j1, cfg.j2) {
        (0, 0) => (one, -(s * &qg)),
        (0, 1) => (Rat::zero(), &one - s * s * num_traits::pow(q.clone(), g - 1)),
        (1, 0) => (&one - qg * q, Rat::zero()),
        _ => (-(s * &qg), one),
    })
}

/// Weight `w_{u,s}(i1, i2; j1, j2)` of a single vertex.
pub fn vertex_weight(cfg: VertexConfig, u: &Rat, s: &Rat, q: &Rat) -> Result<Rat> {
    let (a, b) = weight_numerator(cfg, s, q)?;
    let den = Rat::one() - s * u;
    if den.is_zero() {
        return Err(Error::Pole("1 - s·u".into()));
    }
    Ok((a + b * u) / den)
}

/// Order of vanishing at `u = s_u` of a vertex weight with column spin `s`:
/// `Some(0)` or `Some(1)`, or `None` when the weight is identically zero.
pub fn vertex_order(cfg: VertexConfig, s: &Rat, s_u: &Rat, q: &Rat) -> Result<Option<usize>> {
    let (a, b) = weight_numerator(cfg, s, q)?;
    if a.is_zero() && b.is_zero() {
        return Ok(None);
    }
    Ok(Some(usize::from((a + b * s_u).is_zero())))
}

/// For every top state of `n` paths on columns `0..=max_col`, the least number
/// of vertices, over all ensembles, whose weight vanishes at `u = s_u`.
///
/// After `u = (s_u + x)/(1 + s_u x)` each such vertex carries a factor of `x`,
/// so this bounds the order of `F_λ` in `x` from below.
pub fn min_order_tops(
    n: usize,
    max_col: usize,
    spins: Spins<'_>,
    s_u: &Rat,
    q: &Rat,
) -> Result<BTreeMap<RowState, usize>> {
    let limit = vec![n; max_col + 1];
    let mut orders: BTreeMap<(usize, VertexConfig), Option<usize>> = BTreeMap::new();
    let mut layer: BTreeMap<RowState, usize> = BTreeMap::new();
    layer.insert(vec![0; max_col + 1], 0);
    for _ in 0..n {
        let mut next: BTreeMap<RowState, usize> = BTreeMap::new();
        for (state, &acc) in &layer {
            'cfg: for (above, cfgs) in row_transitions(state, &limit) {
                let mut cost = acc;
                for (c, cfg) in cfgs.into_iter().enumerate() {
                    if cfg.is_empty() {
                        continue;
                    }
                    let order = match orders.get(&(c, cfg)) {
                        Some(o) => *o,
                        None => {
                            let o = vertex_order(cfg, spins.get(c), s_u, q)?;
                            orders.insert((c, cfg), o);
                            o
                        }
                    };
                    match order {
                        Some(o) => cost += o,
                        None => continue 'cfg,
                    }
                }
                let slot = next.entry(above).or_insert(usize::MAX);
                *slot = (*slot).min(cost);
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// Occupancies of the vertical edges above each column after a given row.
pub type RowState = Vec<usize>;

/// Occupancy of the top boundary: column `c` carries `m_c(λ)` paths.
pub fn top_state(lambda: &Partition, max_col: usize) -> RowState {
    (0..=max_col).map(|c| lambda.multiplicity(c)).collect()
}

/// A path ensemble, stored as the row states `states[0]` (empty, below row 1)
/// through `states[n]` (the top boundary).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEnsemble {
    pub states: Vec<RowState>,
}

impl PathEnsemble {
    pub fn rows(&self) -> usize {
        self.states.len() - 1
    }

    pub fn columns(&self) -> usize {
        self.states[0].len()
    }

    /// Vertex configurations of row `i` (1-based), left to right. The horizontal
    /// flux is recovered from the two adjacent states.
    pub fn row_configs(&self, i: usize) -> Result<Vec<VertexConfig>> {
        row_configs(&self.states[i - 1], &self.states[i])
    }

    pub fn max_multiplicity(&self) -> usize {
        self.states.iter().flat_map(|s| s.iter().copied()).max().unwrap_or(0)
    }

    pub fn weight(&self, point: &ParamPoint) -> Result<Rat> {
        let mut w = Rat::one();
        for i in 1..=self.rows() {
            for (c, cfg) in self.row_configs(i)?.into_iter().enumerate() {
                if !cfg.is_empty() {
                    w *= vertex_weight(cfg, &point.u[i - 1], point.spin.get(c), &point.q)
                        .map_err(|e| e.context(&format!("vertex ({c},{i})")))?;
                }
            }
        }
        Ok(w)
    }
}

/// The configurations of a row where one new path enters from the left.
pub fn row_configs(below: &[usize], above: &[usize]) -> Result<Vec<VertexConfig>> {
    let mut flux = 1u8;
    let mut out = Vec::with_capacity(below.len());
    for (&i1, &i2) in below.iter().zip(above) {
        let through = i1 + flux as usize;
        if i2 > through || through - i2 > 1 {
            return Err(Error::Domain(format!("row {below:?} -> {above:?} is not a valid transition")));
        }
        let j2 = (through - i2) as u8;
        out.push(VertexConfig { i1, i2, j1: flux, j2 });
        flux = j2;
    }
    if flux != 0 {
        return Err(Error::Domain("a path leaves through the right boundary".into()));
    }
    Ok(out)
}

/// All states reachable from `below` through one row, with their vertex lists.
/// `limit[c]` bounds the number of paths at columns `>= c`.
fn row_transitions(below: &[usize], limit: &[usize]) -> Vec<(RowState, Vec<VertexConfig>)> {
    let width = below.len();
    let mut out = Vec::new();
    let mut state = Vec::with_capacity(width);
    let mut cfgs = Vec::with_capacity(width);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        below: &[usize],
        limit: &[usize],
        flux: u8,
        state: &mut RowState,
        cfgs: &mut Vec<VertexConfig>,
        out: &mut Vec<(RowState, Vec<VertexConfig>)>,
    ) {
        let c = state.len();
        if c == below.len() {
            if flux == 0 && suffix_ok(state, limit) {
                out.push((state.clone(), cfgs.clone()));
            }
            return;
        }
        let i1 = below[c];
        for j2 in 0..=1u8 {
            let through = i1 + flux as usize;
            if (j2 as usize) > through {
                continue;
            }
            let i2 = through - j2 as usize;
            state.push(i2);
            cfgs.push(VertexConfig { i1, i2, j1: flux, j2 });
            rec(below, limit, j2, state, cfgs, out);
            state.pop();
            cfgs.pop();
        }
    }
    rec(below, limit, 1, &mut state, &mut cfgs, &mut out);
    out
}

fn suffix_ok(state: &[usize], limit: &[usize]) -> bool {
    let mut acc = 0;
    for c in (0..state.len()).rev() {
        acc += state[c];
        if acc > limit[c] {
            return false;
        }
    }
    true
}

fn suffix_limits(top: &[usize]) -> Vec<usize> {
    let mut out = vec![0; top.len()];
    let mut acc = 0;
    for c in (0..top.len()).rev() {
        acc += top[c];
        out[c] = acc;
    }
    out
}

fn check_cols(lambda: &Partition, max_col: usize) -> Result<()> {
    if max_col < lambda.largest() {
        return Err(Error::Domain(format!("max_col {max_col} < λ_1 = {}", lambda.largest())));
    }
    Ok(())
}

/// All path ensembles with top boundary `λ` on columns `0..=max_col`.
pub fn ensembles(lambda: &Partition, max_col: usize) -> Result<Vec<PathEnsemble>> {
    check_cols(lambda, max_col)?;
    let top = top_state(lambda, max_col);
    let limit = suffix_limits(&top);
    let n = lambda.len();
    let mut partial = vec![vec![vec![0; max_col + 1]]];
    for _ in 0..n {
        let mut next = Vec::new();
        for states in partial {
            for (state, _) in row_transitions(states.last().unwrap(), &limit) {
                let mut extended = states.clone();
                extended.push(state);
                next.push(extended);
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().filter(|states| states.last() == Some(&top)).map(|states| PathEnsemble { states }).collect())
}

/// `F_λ` as the partition function of the vertex model, by a forward transfer
/// over row states.
pub fn f_lambda_vertex(lambda: &Partition, point: &ParamPoint, max_col: usize) -> Result<Rat> {
    check_cols(lambda, max_col)?;
    let n = lambda.len();
    if point.u.len() != n {
        return Err(Error::Domain(format!("{} spectral parameters for a partition of length {n}", point.u.len())));
    }
    let top = top_state(lambda, max_col);
    let limit = suffix_limits(&top);
    // weights[c][cfg] cached per row
    let mut layer: BTreeMap<RowState, Rat> = BTreeMap::new();
    layer.insert(vec![0; max_col + 1], Rat::one());
    for i in 0..n {
        let u = &point.u[i];
        let mut cache: BTreeMap<(usize, VertexConfig), Rat> = BTreeMap::new();
        let mut next: BTreeMap<RowState, Rat> = BTreeMap::new();
        for (state, acc) in &layer {
            for (above, cfgs) in row_transitions(state, &limit) {
                let mut w = acc.clone();
                for (c, cfg) in cfgs.into_iter().enumerate() {
                    if cfg.is_empty() {
                        continue;
                    }
                    let vw = match cache.get(&(c, cfg)) {
                        Some(v) => v.clone(),
                        None => {
                            let v = vertex_weight(cfg, u, point.spin.get(c), &point.q)
                                .map_err(|e| e.context(&format!("vertex ({c},{})", i + 1)))?;
                            cache.insert((c, cfg), v.clone());
                            v
                        }
                    };
                    w *= vw;
                }
                let slot = next.entry(above).or_insert_with(Rat::zero);
                *slot += w;
            }
        }
        layer = next;
    }
    Ok(layer.remove(&top).unwrap_or_else(Rat::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, sample_point, with_generic_point, SpinParams};
    use crate::symfun::f_lambda;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn weight_table() {
        let (u, s, q) = (rat(2, 5), rat(-3, 7), rat(4, 9));
        let one = int(1);
        let den = &one - &s * &u;
        let w = |i1, i2, j1, j2| vertex_weight(VertexConfig::new(i1, i2, j1, j2).unwrap(), &u, &s, &q).unwrap();
        assert_eq!(w(0, 0, 0, 0), one);
        assert_eq!(w(0, 1, 1, 0), (&one - &q) / &den);
        assert_eq!(w(1, 1, 1, 1), (&u - &s * &q) / &den);
        assert_eq!(w(2, 1, 0, 1), &u * (&one - &s * &s * &q) / &den);
        assert!(VertexConfig::new(1, 1, 1, 0).is_err());
        assert!(vertex_weight(VertexConfig { i1: 0, i2: 0, j1: 0, j2: 0 }, &int(2), &rat(1, 2), &q).is_err());
    }

    #[test]
    fn single_path() {
        let pt = sample_point(3, 1, 1, &[]).unwrap();
        let one = int(1);
        let expect = (&one - &pt.q) / (&one - pt.spin.get(0) * &pt.u[0]);
        assert_eq!(f_lambda_vertex(&part(&[0]), &pt, 0).unwrap(), expect);
        assert_eq!(f_lambda_vertex(&part(&[0]), &pt, 3).unwrap(), expect);
    }

    #[test]
    fn ensemble_sum_matches_transfer() {
        for lambda in [part(&[2, 1]), part(&[2, 2, 0]), part(&[3, 1, 1])] {
            let pt = sample_point(5, lambda.len(), 2, &[]).unwrap();
            let total: Rat = ensembles(&lambda, lambda.largest()).unwrap().iter().map(|e| e.weight(&pt).unwrap()).sum();
            assert_eq!(total, f_lambda_vertex(&lambda, &pt, lambda.largest()).unwrap());
        }
    }

    #[test]
    fn figure_partition() {
        let lambda = part(&[5, 5, 2, 0]);
        for seed in 0..3 {
            let (a, b) =
                with_generic_point(seed, 4, 2, |pt| Ok((f_lambda_vertex(&lambda, pt, 5)?, f_lambda(&lambda, pt)?)))
                    .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn oracle_agreement_small() {
        for n in 1..=3 {
            for lambda in Partition::all(n, 3) {
                let (a, b) = with_generic_point(40 + n as u64, n, 2, |pt| {
                    Ok((f_lambda_vertex(&lambda, pt, lambda.largest())?, f_lambda(&lambda, pt)?))
                })
                .unwrap();
                assert_eq!(a, b, "{lambda}");
            }
        }
    }

    #[test]
    fn degenerate_spin_keeps_multiplicities_small() {
        let t = rat(3, 5);
        let s = -t.recip();
        for lambda in [part(&[2, 1, 0]), part(&[3, 1, 0]), part(&[3, 2, 1])] {
            let pt = ParamPoint::new(
                t.clone(),
                int(1),
                SpinParams::constant(s.clone()),
                vec![rat(1, 7), rat(-2, 9), rat(5, 11)],
            );
            let mut saw_double = false;
            for e in ensembles(&lambda, lambda.largest()).unwrap() {
                if e.max_multiplicity() >= 2 {
                    saw_double = true;
                    assert!(e.weight(&pt).unwrap().is_zero());
                }
            }
            assert!(saw_double, "{lambda}: no ensemble with a doubled edge to test");
        }
    }

    #[test]
    fn min_order_bounds_ensemble_orders() {
        let (t, s) = (rat(2, 3), rat(1, 4));
        let q = &t * &t;
        let spin = SpinParams::new(vec![rat(-1, 3)], s.clone());
        let tops = min_order_tops(2, 4, spin.view(), &s, &q).unwrap();
        for lambda in Partition::all(2, 4) {
            let brute = ensembles(&lambda, 4)
                .unwrap()
                .iter()
                .filter_map(|e| {
                    let mut total = 0;
                    for i in 1..=e.rows() {
                        for (c, cfg) in e.row_configs(i).unwrap().into_iter().enumerate() {
                            if !cfg.is_empty() {
                                total += vertex_order(cfg, spin.get(c), &s, &q).unwrap()?;
                            }
                        }
                    }
                    Some(total)
                })
                .min();
            assert_eq!(tops.get(&top_state(&lambda, 4)).copied(), brute, "{lambda}");
        }
        // all-zero spins: exactly the vertices with a path leaving to the right vanish
        let zero = SpinParams::zero();
        let tops = min_order_tops(2, 3, zero.view(), &int(0), &q).unwrap();
        for lambda in Partition::all(2, 3) {
            assert_eq!(tops[&top_state(&lambda, 3)], lambda.size(), "{lambda}");
        }
    }

    #[test]
    fn row_configs_roundtrip() {
        let e = &ensembles(&part(&[2, 1]), 2).unwrap()[0];
        for i in 1..=e.rows() {
            let cfgs = e.row_configs(i).unwrap();
            assert_eq!(cfgs[0].j1, 1);
            assert_eq!(cfgs.last().unwrap().j2, 0);
        }
    }
}
