use std::cmp::Ordering;

use cantor_toolkit::coding::{membership, GreedyExpansion, Verdict};
use cantor_toolkit::dimension::{box_dimension, sft_counts};
use cantor_toolkit::exact_arith::{
    compare_brackets, eval_pi, format_rational, hull_of, parse_rational, pow2, ratio, solve_lambda, Code, Rational,
    Tail,
};
use cantor_toolkit::lambda_set::{admissible_words, cover_levels};
use num_bigint::BigInt;
use proptest::prelude::*;

fn unit_rational() -> impl Strategy<Value = Rational> {
    (2i64..200).prop_flat_map(|q| (1..q).prop_map(move |p| ratio(p, q)))
}

fn digits(m: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..m as u8, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pi_is_increasing_in_lambda(
        m in 2u32..5,
        word in digits(4, 1..8),
        tail in prop_oneof![Just(Tail::Zero), Just(Tail::Max)],
        a in 1i64..100,
        b in 1i64..100,
    ) {
        let word: Vec<u8> = word.into_iter().map(|d| d % m as u8).collect();
        prop_assume!(word.iter().any(|&d| d > 0) || tail == Tail::Max);
        prop_assume!(a != b);
        let code = Code::new(m, word, tail).unwrap();
        let scale = i64::from(m) * 100;
        let (lo, hi) = (ratio(a.min(b), scale), ratio(a.max(b), scale));
        prop_assert!(eval_pi(&code, &lo).unwrap() < eval_pi(&code, &hi).unwrap());
    }

    #[test]
    fn solved_brackets_enclose_the_root(x in unit_rational(), m in 2u32..4, pick in any::<prop::sample::Index>()) {
        let first = GreedyExpansion::new(&x, m).unwrap().first_defect();
        prop_assume!(first <= 6);
        let words = admissible_words(&x, m, first + 1).unwrap();
        let word = words[pick.index(words.len())].clone();
        let tol = pow2(-40);
        for tail in [Tail::Zero, Tail::Max] {
            let code = Code::new(m, word.clone(), tail).unwrap();
            let Ok(b) = solve_lambda(&x, &code, &tol) else { continue };
            prop_assert!(b.lo() <= b.hi());
            prop_assert!(b.width() <= tol);
            prop_assert!(eval_pi(&code, b.lo()).unwrap() <= x);
            prop_assert!(eval_pi(&code, b.hi()).unwrap() >= x);
        }
    }

    #[test]
    fn hull_is_exact(x in unit_rational(), m in prop::sample::select(vec![2u32, 3, 5, 10])) {
        let first = GreedyExpansion::new(&x, m).unwrap().first_defect();
        prop_assume!(first <= 8);
        let level = &cover_levels(&x, m, first, &pow2(-32)).unwrap()[0];
        let expected = hull_of(&x, m);
        prop_assert_eq!(&level.hull, &expected);
        prop_assert_eq!(&expected.0, &(&x / (Rational::from_integer(BigInt::from(m - 1)) + &x)));
    }

    #[test]
    fn member_codings_sum_to_x(x in unit_rational(), p in 1i64..20, q in 2i64..40, m in 2u32..4) {
        let lambda = ratio(p, q);
        prop_assume!(&lambda * Rational::from_integer(m.into()) <= ratio(1, 1));
        let Ok(result) = membership(&x, &lambda, m, 64) else { return Ok(()) };
        if let Verdict::Member { .. } = result.verdict {
            prop_assert_eq!(result.reconstruct(&lambda), Some(x));
        }
    }

    #[test]
    fn word_counts_match_enumeration(m in 2u32..4, k in 1usize..4, n in 0usize..9) {
        let counts = sft_counts(m, k, n).unwrap();
        let brute = (0..(m as u64).pow(n as u32))
            .filter(|&c| {
                let digits: Vec<u64> = (0..n).map(|i| c / (m as u64).pow(i as u32) % m as u64).collect();
                !digits.windows(k).any(|w| w.iter().all(|&d| d == 0))
            })
            .count();
        prop_assert_eq!(counts[n].clone(), brute.into());
    }

    #[test]
    fn rationals_survive_text(x in unit_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn deeper_intervals_nest_in_their_parents(x in unit_rational(), m in 2u32..4) {
        let first = GreedyExpansion::new(&x, m).unwrap().first_defect();
        prop_assume!(first <= 5);
        let levels = cover_levels(&x, m, first + 2, &pow2(-48)).unwrap();
        for pair in levels.windows(2) {
            for child in &pair[1].intervals {
                let parent = pair[0]
                    .intervals
                    .iter()
                    .find(|p| child.word().starts_with(p.word()))
                    .expect("parent word is admissible");
                prop_assert_ne!(compare_brackets(child.left(), parent.left()).unwrap(), Ordering::Less);
                prop_assert_ne!(compare_brackets(child.right(), parent.right()).unwrap(), Ordering::Greater);
            }
        }
    }

    #[test]
    fn box_counts_grow_with_the_window(a in 0u32..16, b in 0u32..16, c in 0u32..16, d in 0u32..16) {
        let mut ends = [a, b, c, d];
        ends.sort_unstable();
        prop_assume!(ends[0] < ends[3]);
        let x = ratio(1, 2);
        let levels = cover_levels(&x, 2, 8, &pow2(-24)).unwrap();
        let at = |i: u32| ratio(1, 3) + ratio(i64::from(i), 16) * ratio(1, 6);
        let outer = box_dimension(&levels, (&at(ends[0]), &at(ends[3])), 8);
        let inner = box_dimension(&levels, (&at(ends[1]), &at(ends[2])), 8);
        if let (Ok(outer), Ok(inner)) = (outer, inner) {
            for ((t_in, n_in), (t_out, n_out)) in inner.grid_levels.iter().zip(&outer.grid_levels) {
                prop_assert_eq!(t_in, t_out);
                prop_assert!(n_in <= n_out);
            }
        }
    }
}
