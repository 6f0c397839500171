use num_bigint::BigInt;
use proptest::prelude::*;

use okounkov::semigroup::{curve_semigroup_up_to, khovanskii_translate, verify_translate, GradedSemigroup};
use okounkov::rational::Rational;

fn graded_generators() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0i64..=3, 0i64..=3, 1i64..=2).prop_map(|(a, b, m)| vec![a, b, m]), 1..=4)
        .prop_map(|mut g| {
            g.push(vec![0, 0, 1]);
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slices_add(gens in graded_generators(), k in 0u64..=3, l in 0u64..=3) {
        let s = GradedSemigroup::from_generators(2, 1, gens).unwrap();
        let (a, b, c) = (s.degree_slice(k).unwrap(), s.degree_slice(l).unwrap(), s.degree_slice(k + l).unwrap());
        for x in a.iter() {
            for y in b.iter() {
                let z: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                prop_assert!(c.contains(&z));
            }
        }
    }

    #[test]
    fn slices_inside_body(gens in graded_generators(), m in 1u64..=4) {
        let s = GradedSemigroup::from_generators(2, 1, gens).unwrap();
        prop_assume!(s.check_admissibility().admissible());
        let body = s.okounkov_body(1).unwrap().body;
        let inv = Rational::new(BigInt::from(1), BigInt::from(m));
        for p in s.degree_slice(m).unwrap().iter() {
            prop_assert!(body.contains(&okounkov::RationalVector::from_ints(p).scale(&inv)));
        }
    }

    #[test]
    fn curve_slice_sizes(g in 0i64..=3, extra in 0i64..=3, m in 1u64..=12) {
        let c = 2 * g + 1 + extra;
        let s = curve_semigroup_up_to(c, g, 12).unwrap();
        prop_assert_eq!(s.degree_slice(m).unwrap().len() as i64, m as i64 * c - g + 1);
    }

    #[test]
    fn translate_moves_along_generators(a in 2i64..=6, b in 2i64..=6) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        let gens = vec![vec![a], vec![b]];
        let r = khovanskii_translate(&gens, 80).unwrap();
        prop_assert_eq!(r.z[0], a * b - a - b + 1);
        for g in &gens {
            prop_assert!(verify_translate(&gens, &[r.z[0] + g[0]], 80).unwrap());
        }
    }

    #[test]
    fn fujita_gap_shrinks_like_genus(g in 0i64..=2, p in 1u64..=8, k in 1u64..=4) {
        let c = 2 * g + 1;
        let s = curve_semigroup_up_to(c, g, 8).unwrap();
        let r = s.fujita_gap(p, k).unwrap();
        prop_assert_eq!(r.gap, Rational::new(BigInt::from(g), BigInt::from(p)));
        prop_assert!(r.ratio >= r.limit);
    }
}

fn fibre_instance() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=2).prop_flat_map(|d| {
        let value_units = prop::collection::vec(prop::collection::vec(0i64..=1, 2), d);
        let extra = prop::collection::vec(prop::collection::vec(0i64..=2, d + 2), 0..=2);
        let a = prop::collection::vec(1i64..=3, 2);
        (Just(d), value_units, extra, a).prop_map(|(d, units, extra, a)| {
            let mut gens = Vec::new();
            for i in 0..2 {
                let mut g = vec![0; d + 2];
                g[d + i] = 1;
                gens.push(g);
            }
            for (j, deg) in units.into_iter().enumerate() {
                let mut g = vec![0; d + 2];
                g[j] = 1;
                g[d] = deg[0].max(1 - deg[1]);
                g[d + 1] = deg[1];
                gens.push(g);
            }
            for mut g in extra {
                if g[d..].iter().all(|&x| x == 0) {
                    g[d] = 1;
                }
                gens.push(g);
            }
            (d, gens, a)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fibre_cone_equals_cut_cone((d, gens, a) in fibre_instance()) {
        let s = GradedSemigroup::from_generators(d, 2, gens).unwrap();
        prop_assert!(s.ray_fiber_check(&a, 24).unwrap().is_equal());
    }
}
