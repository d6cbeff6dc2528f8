//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails. Every comparison is between exact rationals, so the
//! tolerance is zero throughout.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use spinhl::exec::Pool;
use spinhl_core::arith::{members, with_generic_point};
use spinhl_core::identities::{
    check_cor_main2, check_f_recurrence, check_hl_corollary, check_hl_robbins, check_kawanaka, check_key_lemma1,
    check_key_lemma2, check_key_lemma2_a, check_lemma_connection, check_main1, check_main2, check_ordinary_robbins,
    check_recurrence, key_lemma_degrees, Recurrence, Report, SeriesSetup,
};
use spinhl_core::pfaffian::{
    conjugate_by, determinant, labels_for, mask_labels, permutation_sign, pfaffian, pfaffian_laplace_at,
    pfaffian_matchings, rhs_cor, rhs_main2, MGammaSpec, SkewMatrix,
};
use spinhl_core::robbins::{count_monotone_triangles, robbins_star_enum};
use spinhl_core::symfun::f_lambda;
use spinhl_core::vertex::f_lambda_vertex;
use spinhl_core::{Partition, Rat, Sampler};

/// Zero: all values are exact rationals.
const TOLERANCE: &str = "exact (tolerance 0)";

type Verdict = Result<String, String>;

fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn lift<T>(r: spinhl_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Fold reports into a count, stopping at the first failure.
#[derive(Default)]
struct Tally {
    checks: usize,
}

impl Tally {
    fn report(&mut self, r: spinhl_core::Result<Report>) -> Result<(), String> {
        let r = lift(r)?;
        self.checks += 1;
        if r.passed() {
            Ok(())
        } else {
            Err(r.to_string())
        }
    }

    fn equal(&mut self, what: impl FnOnce() -> String, a: &Rat, b: &Rat) -> Result<(), String> {
        self.checks += 1;
        if a == b {
            Ok(())
        } else {
            Err(format!("{}: {a} != {b}", what()))
        }
    }
}

fn all_partitions(max_len: usize, top: usize) -> Vec<Partition> {
    (1..=max_len).flat_map(|n| Partition::all(n, top)).collect()
}

/// `(t, s, s_0..s_{p-1})` drawn from `seed`.
fn series_setup(seed: u64, p: usize, d: usize) -> SeriesSetup {
    let mut s = Sampler::new(seed);
    let t = s.rat();
    let tail = s.rat();
    let prefix = (0..p).map(|_| s.rat()).collect();
    SeriesSetup::new(prefix, tail, t, d)
}

const GRID: [(usize, usize, usize); 3] = [(1, 0, 6), (2, 1, 5), (3, 1, 4)];
const SERIES_SEEDS: [u64; 2] = [101, 202];

fn oracle_equivalence() -> Verdict {
    let mut tally = Tally::default();
    for lambda in all_partitions(4, 4) {
        let n = lambda.len();
        for seed in 0..3u64 {
            let (a, b) = lift(with_generic_point(1000 * seed + n as u64, n, 5, |pt| {
                Ok((f_lambda(&lambda, pt)?, f_lambda_vertex(&lambda, pt, lambda.largest())?))
            }))?;
            tally.equal(|| format!("F_{lambda} seed {seed}"), &a, &b)?;
        }
    }
    Ok(format!("{} symmetrizer/vertex comparisons", tally.checks))
}

fn asm_counts() -> Verdict {
    let expected = [1i64, 2, 7, 42, 429];
    for (n, &want) in (1..=5).zip(&expected) {
        let k: Vec<i64> = (1..=n as i64).collect();
        let x = vec![int(1); n];
        let value = lift(robbins_star_enum(&k, &x, &int(1), &int(1), &int(-1)))?;
        let count = lift(count_monotone_triangles(&k))?;
        if value != int(want) || count != want as u128 {
            return Err(format!("n = {n}: enumeration {value}, counter {count}, expected {want}"));
        }
    }
    Ok("1, 2, 7, 42, 429 from both the weighted enumeration and the counter".into())
}

fn main1_grid(pool: &Pool) -> Verdict {
    let mut tally = Tally::default();
    for (n, p, d) in GRID {
        for seed in SERIES_SEEDS {
            tally.report(check_main1(&series_setup(seed, p, d), n, pool))?;
        }
    }
    Ok(format!("{} coefficientwise checks with stabilization", tally.checks))
}

fn pfaffian_grid(pool: &Pool) -> Verdict {
    let mut tally = Tally::default();
    let mut points = 0;
    for (n, p, d) in GRID {
        for seed in SERIES_SEEDS {
            let setup = series_setup(seed, p, d);
            tally.report(check_cor_main2(&setup, n, pool))?;
            let mut g = Sampler::new(seed + 7);
            for gamma in g.distinct(2, &[int(0)]) {
                tally.report(check_main2(&setup, n, &gamma, pool))?;
            }
            let s0 = setup.spin.get(0).clone();
            for k in 0..3 {
                let (a, b) = lift(with_generic_point(seed * 10 + k, n, 0, |pt| {
                    let spec = MGammaSpec::new(pt.u.clone(), setup.t.clone(), int(1), s0.clone());
                    Ok((rhs_main2(&spec)?, rhs_cor(&pt.u, &setup.t)?))
                }))?;
                tally.equal(|| format!("γ = 1 builders, n = {n}, seed {seed}"), &a, &b)?;
                points += 1;
            }
        }
    }
    Ok(format!("{} series checks, γ = 1 builders agree at {points} points", tally.checks - points))
}

fn hall_littlewood(pool: &Pool) -> Verdict {
    let mut tally = Tally::default();
    let t = Rat::new(3.into(), 7.into());
    for n in 1..=2 {
        tally.report(check_hl_corollary(n, &t, 5, pool))?;
        tally.report(check_kawanaka(n, &t, 5, pool))?;
    }
    Ok(format!("{} checks at D = 5, Kawanaka path pole-free", tally.checks))
}

fn recurrences(pool: &Pool) -> Verdict {
    let mut tally = Tally::default();
    for lambda in all_partitions(4, 4) {
        let n = lambda.len();
        tally.report(with_generic_point(77 + n as u64, n, 5, |pt| check_f_recurrence(&lambda, pt)))?;
    }
    let point_checks = tally.checks;
    for seed in SERIES_SEEDS {
        let setup = series_setup(seed, 1, 4);
        let gamma = Sampler::new(seed + 3).rat();
        for rec in [Recurrence::One, Recurrence::Two { gamma }, Recurrence::TwoV] {
            for n in 1..=3 {
                tally.report(check_recurrence(&rec, &setup, n, pool))?;
            }
        }
    }
    Ok(format!("{point_checks} exact F recurrences, {} series recurrences", tally.checks - point_checks))
}

fn key_lemmas() -> Verdict {
    let mut tally = Tally::default();
    let points = 10;
    for n in 1..=4 {
        let seed = 500 + n as u64;
        tally.report(check_key_lemma1(n, seed, points))?;
        tally.report(check_key_lemma2(n, None, seed, points))?;
        tally.report(check_key_lemma2_a(n, seed, points))?;
    }
    for n in 1..=2 {
        tally.report(key_lemma_degrees(n, 600 + n as u64))?;
    }
    Ok(format!("{} reports, {points} points each, degree bound confirmed for n <= 2", tally.checks))
}

fn lemma_connection() -> Verdict {
    let mut tally = Tally::default();
    let mut strict = 0;
    for seed in 0..3u64 {
        let mut s = Sampler::new(900 + seed);
        let t = s.rat();
        for lambda in all_partitions(3, 3) {
            let x = s.distinct(lambda.len(), &[]);
            tally.report(check_lemma_connection(&lambda, &t, &x))?;
            strict += usize::from(lambda.is_strict());
        }
    }
    Ok(format!("{} partition/point pairs, {strict} strict with per-object weights", tally.checks))
}

fn random_skew(s: &mut Sampler, labels: Vec<usize>) -> SkewMatrix<Rat> {
    SkewMatrix::from_upper(labels, int(1), |_, _| Ok(s.rat())).unwrap()
}

fn pfaffian_laws() -> Verdict {
    let mut tally = Tally::default();
    let mut s = Sampler::new(4242);
    for d in [0usize, 2, 4, 6] {
        let a = random_skew(&mut s, (1..=d).collect());
        let pf = lift(pfaffian(&a))?;
        tally.equal(|| format!("matchings, dim {d}"), &pf, &lift(pfaffian_matchings(&a))?)?;
        for p in 0..d {
            tally.equal(|| format!("Laplace row {p}, dim {d}"), &pf, &lift(pfaffian_laplace_at(&a, p))?)?;
        }
        let det = determinant(&(0..d).map(|i| (0..d).map(|j| a.at(i, j).clone()).collect()).collect_vec(), &int(1));
        tally.equal(|| format!("pf² = det, dim {d}"), &(&pf * &pf), &det)?;
    }

    let a = random_skew(&mut s, (1..=6).collect());
    let pf = lift(pfaffian(&a))?;
    // 20 permutations spread over all 720 orderings of six labels
    for (k, perm) in (0..6).permutations(6).skip(17).step_by(36).take(20).enumerate() {
        let signed = if permutation_sign(&perm) > 0 { pf.clone() } else { -pf.clone() };
        tally.equal(|| format!("permutation {k}"), &lift(pfaffian(&a.permute(&perm)))?, &signed)?;
    }

    // pf(B A Bᵀ) = det(B) pf(A)
    let a = random_skew(&mut s, (1..=4).collect());
    let b: Vec<Vec<Rat>> = (0..4).map(|_| (0..4).map(|_| s.rat()).collect()).collect();
    tally.equal(
        || "multiplicativity".into(),
        &lift(pfaffian(&a.congruence(&b)))?,
        &(determinant(&b, &int(1)) * lift(pfaffian(&a))?),
    )?;

    let n = 4;
    let u = s.distinct(n, &[]);
    let q = s.rat();
    let full = random_skew(&mut s, (0..=n).collect());
    let pair = |i: usize, j: usize| {
        let p = &u[i - 1] * &u[j - 1];
        (int(1) - &p) * (int(1) - &q * &p)
    };
    for tmask in 0u32..(1 << n) {
        let t = mask_labels(tmask, n);
        let a_t = lift(full.restrict(&labels_for(&t)))?;
        let det: Rat = t.iter().tuple_combinations().map(|(&i, &j)| pair(i, j)).product();
        tally.equal(
            || format!("conjugation by B(T), T = {t:?}"),
            &lift(pfaffian(&conjugate_by(&a_t, &t, &u, &q)))?,
            &(det * lift(pfaffian(&a_t))?),
        )?;
        let bar_t = conjugate_by(&full, &t, &u, &q);
        for smask in (0u32..(1 << n)).filter(|m| m & !tmask == 0) {
            let sl = mask_labels(smask, n);
            let lhs = lift(pfaffian(&lift(bar_t.restrict(&labels_for(&sl)))?))?;
            let bar_s = conjugate_by(&lift(full.restrict(&labels_for(&sl)))?, &sl, &u, &q);
            let factor: Rat = members(smask, n)
                .into_iter()
                .cartesian_product(members(tmask & !smask, n))
                .filter(|(i, k)| k > i)
                .map(|(i, k)| pair(i + 1, k + 1))
                .product();
            tally.equal(|| format!("commutation, S = {sl:?}, T = {t:?}"), &lhs, &(factor * lift(pfaffian(&bar_s))?))?;
        }
    }
    Ok(format!("{} exact comparisons", tally.checks))
}

fn remark_relations() -> Verdict {
    let mut tally = Tally::default();
    let mut s = Sampler::new(31);
    let (t, spin) = (s.rat(), s.rat());
    let q = &t * &t;
    for lambda in all_partitions(3, 3) {
        let x = s.distinct(lambda.len(), &[]);
        tally.report(check_hl_robbins(&lambda, &t, &x))?;
        tally.report(check_ordinary_robbins(&lambda, &q, &spin, &x))?;
    }
    Ok(format!("{} reports covering both Hall-Littlewood displays and the F display", tally.checks))
}

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    run: Box<dyn Fn(&Pool) -> Verdict>,
}

fn criteria() -> Vec<Criterion> {
    let min = |m: u64| Duration::from_secs(60 * m);
    vec![
        Criterion { id: 1, title: "F oracle equivalence", budget: min(2), run: Box::new(|_| oracle_equivalence()) },
        Criterion { id: 2, title: "ASM counts", budget: min(1), run: Box::new(|_| asm_counts()) },
        Criterion { id: 3, title: "first Littlewood identity", budget: min(10), run: Box::new(main1_grid) },
        Criterion { id: 4, title: "Pfaffian Littlewood identities", budget: min(15), run: Box::new(pfaffian_grid) },
        Criterion { id: 5, title: "Hall-Littlewood corollary", budget: min(5), run: Box::new(hall_littlewood) },
        Criterion { id: 6, title: "recurrences", budget: min(10), run: Box::new(recurrences) },
        Criterion { id: 7, title: "key lemmas", budget: min(5), run: Box::new(|_| key_lemmas()) },
        Criterion {
            id: 8,
            title: "modified Robbins connection",
            budget: min(5),
            run: Box::new(|_| lemma_connection()),
        },
        Criterion { id: 9, title: "Pfaffian laws", budget: min(1), run: Box::new(|_| pfaffian_laws()) },
        Criterion { id: 10, title: "remark relations", budget: min(2), run: Box::new(|_| remark_relations()) },
    ]
}

fn main() -> ExitCode {
    let pool = Pool::new(None).expect("thread pool");
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let verdict = (c.run)(&pool);
        let elapsed = start.elapsed();
        let (status, detail) = match verdict {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {}: {detail}; {TOLERANCE}; {:.1}s of {}s",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
