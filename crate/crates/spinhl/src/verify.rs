//! The verification suite behind `spinhl verify`.

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use spinhl_core::arith::with_generic_point;
use spinhl_core::identities::{
    check_bounded_smoke, check_cor_main2, check_f_recurrence, check_hl_corollary, check_hl_robbins, check_kawanaka,
    check_key_lemma1, check_key_lemma2, check_key_lemma2_a, check_lemma_connection, check_main1, check_main2,
    check_ordinary_robbins, check_rec2_termwise, check_recurrence, check_reduction_chain, key_lemma_degrees, Chain,
    Recurrence, Report, SeriesSetup,
};
use spinhl_core::series::Executor;
use spinhl_core::{Partition, Rat, Sampler};

use crate::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Target {
    Main1,
    Main2,
    Cor,
    Hl,
    Rec1,
    Rec2,
    Rec2v,
    Lemma1,
    Lemma2,
    Chain,
    /// The `s_j = -1/t` specialization and its modified Robbins connection.
    Bounded,
    /// Ordinary Robbins polynomials against `F_λ`.
    Robbins,
    All,
}

const SUITE: [Target; 12] = [
    Target::Main1,
    Target::Main2,
    Target::Cor,
    Target::Hl,
    Target::Rec1,
    Target::Rec2,
    Target::Rec2v,
    Target::Lemma1,
    Target::Lemma2,
    Target::Chain,
    Target::Bounded,
    Target::Robbins,
];

/// Largest part of the partitions enumerated by the point checks.
const TOP: usize = 3;
/// Points per sampled identity.
const POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub n: usize,
    pub p: usize,
    pub d: usize,
    pub seed: u64,
}

/// The scalars shared by every check of one run, drawn from the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub t: Rat,
    pub s: Rat,
    pub prefix: Vec<Rat>,
    pub gamma: Rat,
    pub x: Vec<Rat>,
}

impl Draw {
    pub fn new(settings: &Settings) -> Self {
        let mut sampler = Sampler::new(settings.seed);
        let t = sampler.rat();
        let s = sampler.rat();
        let gamma = sampler.rat();
        let prefix = (0..settings.p).map(|_| sampler.rat()).collect();
        let x = sampler.distinct(settings.n, &[]);
        Draw { t, s, prefix, gamma, x }
    }

    fn setup(&self, d: usize) -> SeriesSetup {
        SeriesSetup::new(self.prefix.clone(), self.s.clone(), self.t.clone(), d)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "t": json::rat(&self.t),
            "s": json::rat(&self.s),
            "spins": json::rats(&self.prefix),
            "gamma": json::rat(&self.gamma),
            "x": json::rats(&self.x),
        })
    }
}

fn core<T>(r: spinhl_core::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("{e}"))
}

fn each_partition(n: usize, mut f: impl FnMut(&Partition) -> spinhl_core::Result<Report>) -> Result<Vec<Report>> {
    Partition::all(n, TOP).iter().map(|l| core(f(l))).collect()
}

fn run_one<E: Executor>(target: Target, st: &Settings, draw: &Draw, exec: &E) -> Result<Vec<Report>> {
    let Settings { n, p, d, seed } = *st;
    let setup = draw.setup(d);
    let t = &draw.t;
    let reports = match target {
        Target::Main1 => vec![core(check_main1(&setup, n, exec))?],
        Target::Main2 => vec![core(check_main2(&setup, n, &draw.gamma, exec))?],
        Target::Cor => vec![core(check_cor_main2(&setup, n, exec))?],
        Target::Hl => {
            let mut out = vec![core(check_hl_corollary(n, t, d, exec))?, core(check_kawanaka(n, t, d, exec))?];
            out.extend(each_partition(n, |l| check_hl_robbins(l, t, &draw.x))?);
            out
        }
        Target::Rec1 => {
            let mut out = vec![core(check_recurrence(&Recurrence::One, &setup, n, exec))?];
            out.extend(each_partition(n, |l| with_generic_point(seed, n, p, |pt| check_f_recurrence(l, pt)))?);
            out
        }
        Target::Rec2 => vec![
            core(check_recurrence(&Recurrence::Two { gamma: draw.gamma.clone() }, &setup, n, exec))?,
            core(check_rec2_termwise(&setup, n, exec))?,
        ],
        Target::Rec2v => vec![core(check_recurrence(&Recurrence::TwoV, &setup, n, exec))?],
        Target::Lemma1 => vec![core(check_key_lemma1(n, seed, POINTS))?],
        Target::Lemma2 => {
            let one = Rat::from_integer(1.into());
            let mut out = vec![
                core(check_key_lemma2(n, None, seed, POINTS))?,
                core(check_key_lemma2(n, Some(&one), seed, POINTS))?,
                core(check_key_lemma2_a(n, seed, POINTS))?,
            ];
            if n <= 2 {
                out.push(core(key_lemma_degrees(n, seed))?);
            }
            out
        }
        Target::Chain => [Chain::Main1, Chain::Cor, Chain::Main2]
            .into_iter()
            .map(|c| core(check_reduction_chain(c, n, p, seed, 2)))
            .collect::<Result<_>>()?,
        Target::Bounded => {
            let mut out = vec![core(check_bounded_smoke(t, n, d, exec))?];
            out.extend(each_partition(n, |l| check_lemma_connection(l, t, &draw.x))?);
            out
        }
        Target::Robbins => {
            let q = t * t;
            each_partition(n, |l| check_ordinary_robbins(l, &q, &draw.s, &draw.x))?
        }
        Target::All => {
            let per = exec.map(SUITE.to_vec(), |tg| run_one(tg, st, draw, exec));
            let mut out = Vec::new();
            for r in per {
                out.extend(r?);
            }
            out
        }
    };
    Ok(reports)
}

/// Run `target` and collect its reports in a fixed order.
pub fn run<E: Executor>(target: Target, settings: &Settings, exec: &E) -> Result<(Draw, Vec<Report>)> {
    let draw = Draw::new(settings);
    let reports = run_one(target, settings, &draw, exec)?;
    Ok((draw, reports))
}

pub fn target_name(target: Target) -> String {
    target.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinhl_core::series::Sequential;

    #[test]
    fn names() {
        assert_eq!(target_name(Target::Rec2v), "rec2v");
        assert_eq!(target_name(Target::Main1), "main1");
    }

    #[test]
    fn draw_is_seeded() {
        let st = Settings { n: 2, p: 1, d: 3, seed: 5 };
        assert_eq!(Draw::new(&st), Draw::new(&st));
        assert_ne!(Draw::new(&st), Draw::new(&Settings { seed: 6, ..st }));
    }

    #[test]
    fn small_targets_pass() {
        let st = Settings { n: 2, p: 1, d: 2, seed: 3 };
        for target in [Target::Lemma1, Target::Rec2v, Target::Robbins] {
            let (_, reports) = run(target, &st, &Sequential).unwrap();
            assert!(reports.iter().all(Report::passed), "{target:?}");
        }
    }
}
