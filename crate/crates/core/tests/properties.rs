use proptest::prelude::*;

use spinhl_core::arith::{members, Sampler};
use spinhl_core::identities::{key_lemma1_sides, key_lemma2_a_sides, key_lemma2_sides};
use spinhl_core::pfaffian::{mask_labels, pfaffian, pfaffian_matchings, MGammaSpec};
use spinhl_core::robbins::{robbins_star_bialternant, robbins_star_enum, strict_rows};
use spinhl_core::symfun::f_lambda;
use spinhl_core::vertex::f_lambda_vertex;
use spinhl_core::{rat, Partition, Rat};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetric_in_u(seed in 0u64..1_000_000, n in 1usize..=3, top in 0usize..=3) {
        let mut s = Sampler::new(seed);
        let point = s.point(n, 1);
        let all = Partition::all(n, top);
        let lambda = &all[seed as usize % all.len()];
        let base = match f_lambda(lambda, &point) {
            Ok(v) => v,
            Err(e) if e.is_pole() => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for perm in permutations(n) {
            let u: Vec<Rat> = perm.iter().map(|&i| point.u[i].clone()).collect();
            prop_assert_eq!(f_lambda(lambda, &point.with_u(u)).unwrap(), base.clone());
        }
    }

    #[test]
    fn vertex_model_matches_symmetrizer(seed in 0u64..1_000_000, n in 1usize..=3, top in 0usize..=3) {
        let mut s = Sampler::new(seed);
        let point = s.point(n, 2);
        let all = Partition::all(n, top);
        let lambda = &all[(seed / 7) as usize % all.len()];
        match (f_lambda(lambda, &point), f_lambda_vertex(lambda, &point, lambda.largest())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(e), _) | (_, Err(e)) => prop_assert!(e.is_pole(), "{e}"),
        }
    }

    #[test]
    fn first_key_identity(seed in 0u64..1_000_000, n in 0usize..=4) {
        let mut s = Sampler::new(seed);
        let point = s.point(n, 0);
        let (l, r) = key_lemma1_sides(&point.u, &point.q, point.spin.get(0));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn second_key_identities(seed in 0u64..1_000_000, n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let point = s.point(n, 0);
        let sp = point.spin.get(0);
        if let Ok((l, r)) = key_lemma2_sides(&point.u, &point.t, &point.gamma, sp) {
            prop_assert_eq!(l, r);
        }
        if let Ok((l, r)) = key_lemma2_a_sides(&point.u[1..], &point.t, &point.gamma, sp) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn conjugated_minors(seed in 0u64..1_000_000, t_mask in 0u32..16, s_bits in 0u32..16) {
        let n = 4;
        let s_mask = t_mask & s_bits;
        prop_assume!((t_mask.count_ones() - s_mask.count_ones()) % 2 == 0);
        let mut s = Sampler::new(seed);
        let point = s.point(n, 0);
        let q = &point.q;
        let spec = MGammaSpec::new(point.u.clone(), point.t.clone(), point.gamma.clone(), point.spin.get(0).clone());
        let (t_labels, s_labels) = (mask_labels(t_mask, n), mask_labels(s_mask, n));
        let (Ok(big), Ok(small)) = (spec.conjugated(&t_labels), spec.conjugated(&s_labels)) else {
            return Ok(());
        };
        // restrict the T-conjugated matrix to the labels of S
        let restricted = big.restrict(small.labels()).unwrap();
        let mut factor = Rat::from_integer(1.into());
        let one = Rat::from_integer(1.into());
        for i in members(s_mask, n) {
            for j in members(t_mask & !s_mask, n) {
                if i < j {
                    let p = &point.u[i] * &point.u[j];
                    factor *= (&one - &p) * (&one - q * &p);
                }
            }
        }
        let lhs = pfaffian(&restricted).unwrap();
        prop_assert_eq!(lhs.clone(), factor * pfaffian(&small).unwrap());
        prop_assert_eq!(lhs, pfaffian_matchings(&restricted).unwrap());
    }

    #[test]
    fn robbins_routes_agree(seed in 0u64..1_000_000, n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let rows = strict_rows(n, 0, 4);
        let k = &rows[seed as usize % rows.len()];
        let x = s.distinct(n, &[]);
        let (u, v, w) = (s.rat(), s.rat(), s.rat());
        prop_assert_eq!(
            robbins_star_enum(k, &x, &u, &v, &w).unwrap(),
            robbins_star_bialternant(k, &x, &u, &v, &w).unwrap()
        );
    }
}

#[test]
fn repeated_variable_kills_both_sides() {
    let u = [rat(1, 3), rat(-2, 5), rat(1, 3)];
    let (l, r) = key_lemma1_sides(&u, &rat(4, 9), &rat(2, 7));
    assert_eq!(l, Rat::from_integer(0.into()));
    assert_eq!(r, Rat::from_integer(0.into()));
}
