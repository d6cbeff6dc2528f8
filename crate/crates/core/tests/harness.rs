use spinhl_core::identities::{
    check_bounded_smoke, check_cor_main2, check_hl_corollary, check_kawanaka, check_key_lemma1, check_key_lemma2,
    check_key_lemma2_a, check_lemma_connection, check_main1, check_main2, check_rec2_termwise, check_recurrence,
    check_reduction_chain, theorems::theorem_sides, Chain, Family, Recurrence, Report, SeriesSetup, Status,
};
use spinhl_core::series::{f_lambda_series, Sequential, SeriesContext};
use spinhl_core::symfun::f_lambda_at;
use spinhl_core::{rat, Partition, Rat, SpinParams};

fn assert_pass(r: Report) {
    assert!(r.passed(), "{r}");
}

#[test]
fn theorems_small_grid() {
    for (n, p, d) in [(1, 0, 5), (2, 1, 3), (3, 0, 2)] {
        let prefix = (0..p).map(|j| rat(-2 - j as i64, 7)).collect();
        let setup = SeriesSetup::new(prefix, rat(1, 3), rat(2, 5), d);
        assert_pass(check_main1(&setup, n, &Sequential).unwrap());
        assert_pass(check_cor_main2(&setup, n, &Sequential).unwrap());
        assert_pass(check_main2(&setup, n, &rat(-3, 4), &Sequential).unwrap());
    }
}

#[test]
fn hall_littlewood_paths() {
    assert_pass(check_hl_corollary(2, &rat(3, 7), 3, &Sequential).unwrap());
    assert_pass(check_kawanaka(2, &rat(3, 7), 3, &Sequential).unwrap());
}

#[test]
fn bounded_specialization_runs() {
    assert_pass(check_bounded_smoke(&rat(2, 3), 2, 3, &Sequential).unwrap());
}

#[test]
fn recurrences_small_grid() {
    let setup = SeriesSetup::new(vec![rat(3, 8)], rat(-1, 5), rat(1, 3), 2);
    for rec in [Recurrence::One, Recurrence::Two { gamma: rat(2, 3) }, Recurrence::TwoV] {
        for n in 1..=3 {
            assert_pass(check_recurrence(&rec, &setup, n, &Sequential).unwrap());
        }
    }
    assert_pass(check_rec2_termwise(&setup, 2, &Sequential).unwrap());
}

#[test]
fn lemmas_and_chains() {
    for n in 1..=3 {
        assert_pass(check_key_lemma1(n, 101, 4).unwrap());
        assert_pass(check_key_lemma2(n, None, 101, 4).unwrap());
        assert_pass(check_key_lemma2_a(n, 101, 4).unwrap());
        for chain in [Chain::Main1, Chain::Cor, Chain::Main2] {
            assert_pass(check_reduction_chain(chain, n, 1, 101, 1).unwrap());
        }
    }
}

#[test]
fn perturbed_series_fail_with_a_witness() {
    let setup = SeriesSetup::new(vec![], rat(1, 3), rat(2, 5), 3);
    let sides = theorem_sides(&Family::Main1, &setup, 2, &Sequential).unwrap();
    let mut r = Report::new("perturbed");
    let bumped =
        sides.rhs.clone() + &spinhl_core::series::TruncSeries::monomial(sides.rhs.basis(), &[1, 2], rat(1, 1000));
    r.expect_series_eq("series", &sides.lhs, &bumped);
    assert_eq!(r.status, Status::Fail);
    assert!(r.witness.unwrap().contains("[1, 2]"));
}

/// The spin values `s_j = -1/t` of the modified-Robbins connection, fed to
/// both the point evaluation and the series; the series at a small `x`
/// approaches the point value as the cap grows.
#[test]
fn degenerate_spin_feeds_both_routes() {
    let t = rat(2, 3);
    let s = -t.recip();
    let lambda: Partition = "2,1,0".parse().unwrap();
    let x = [rat(1, 5), rat(-1, 7), rat(1, 9)];
    assert_pass(check_lemma_connection(&lambda, &t, &x).unwrap());
    let spin = SpinParams::constant(s.clone());
    let q = &t * &t;
    let xs = [rat(1, 40), rat(-1, 50), rat(1, 60)];
    let u: Vec<Rat> = xs.iter().map(|xi| (&s + xi) / (Rat::from_integer(1.into()) + &s * xi)).collect();
    let exact = f_lambda_at(&lambda, &u, &q, spin.view()).unwrap();
    let errors: Vec<Rat> = (2..=4)
        .map(|d| {
            let series = f_lambda_series(&lambda, &spin, &t, d).unwrap();
            let e = series.eval(&xs) - &exact;
            if e < Rat::from_integer(0.into()) {
                -e
            } else {
                e
            }
        })
        .collect();
    assert!(errors[1] < errors[0] && errors[2] < errors[1], "{errors:?}");
}

#[test]
fn lambda_set_keeps_every_contributing_partition() {
    let (t, s, d) = (rat(2, 5), rat(1, 3), 2);
    let spin = SpinParams::new(vec![rat(-1, 4)], s.clone());
    for k in 1..=2 {
        let ctx = SeriesContext::new(k, d, t.clone(), s.clone()).unwrap();
        let kept = ctx.lambda_set(k, spin.view(), d).unwrap();
        for lambda in Partition::all(k, 7) {
            let order = ctx.f_lambda(&lambda, spin.view()).unwrap().order();
            let entry = kept.iter().find(|(mu, _)| *mu == lambda);
            if let Some(o) = order {
                let (_, bound) = entry.unwrap_or_else(|| panic!("{lambda} dropped with order {o}"));
                assert!(*bound <= o, "{lambda}: bound {bound} above order {o}");
            }
        }
    }
}
