use num_bigint::BigInt;
use proptest::prelude::*;

use dynnikov::action::{linearize, signature_at, DEFAULT_TIE_TOLERANCE};
use dynnikov::{
    apply_generator, apply_word, component_counts, dynnikov_from_triangle, triangle_from_dynnikov,
    validate_triangle, BraidWord, IntCoords, RealCoords,
};

fn int_coords(n: usize, range: i64) -> impl Strategy<Value = IntCoords> {
    prop::collection::vec(-range..=range, 2 * n - 4)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(move |v| {
            IntCoords::from_stacked(n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
}

fn any_int_coords(ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = IntCoords> {
    ns.prop_flat_map(|n| int_coords(n, 60))
}

fn real_coords(n: usize) -> impl Strategy<Value = RealCoords> {
    prop::collection::vec(-50.0f64..50.0, 2 * n - 4)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0.0))
        .prop_map(move |v| RealCoords::from_stacked(n, v).unwrap())
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let top = n as i32 - 1;
    prop::collection::vec((1..=top, any::<bool>()), 1..=max_len).prop_map(move |ls| {
        BraidWord::new(
            n,
            ls.into_iter()
                .map(|(k, inv)| if inv { -k } else { k })
                .collect(),
        )
        .unwrap()
    })
}

fn coords_and_word(
    ns: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (IntCoords, BraidWord)> {
    ns.prop_flat_map(|n| (int_coords(n, 60), word(n, 8)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inversion_round_trip_is_exact(x in any_int_coords(3..=10)) {
        let tc = triangle_from_dynnikov(&x).unwrap();
        prop_assert!(validate_triangle(&tc).is_ok(), "{}", validate_triangle(&tc));
        prop_assert_eq!(dynnikov_from_triangle(&tc).unwrap(), x);
    }

    #[test]
    fn some_region_has_no_parallel_strands(x in any_int_coords(3..=10)) {
        let counts = component_counts(&x).unwrap();
        prop_assert!(counts.regions.iter().all(|r| r.above >= BigInt::from(0) && r.below >= BigInt::from(0)));
        prop_assert_eq!(counts.min_parallel(), BigInt::from(0));
    }

    #[test]
    fn real_inversion_is_homogeneous(n in 3usize..=8, seed in any::<u64>(), k in 0.01f64..100.0) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let v: Vec<f64> = (0..2 * n - 4).map(|_| rand::Rng::gen_range(&mut rng, -10.0..10.0)).collect();
        prop_assume!(v.iter().any(|&c| c != 0.0));
        let x = RealCoords::from_stacked(n, v).unwrap();
        let t = triangle_from_dynnikov(&x).unwrap();
        let tk = triangle_from_dynnikov(&x.scaled(k)).unwrap();
        for (p, q) in t.alpha().iter().chain(t.beta()).zip(tk.alpha().iter().chain(tk.beta())) {
            prop_assert!((p * k - q).abs() <= 1e-9 * (1.0 + q.abs()));
        }
        prop_assert!(validate_triangle(&t).is_ok());
    }

    #[test]
    fn generator_inverse_round_trip((x, w) in coords_and_word(3..=10)) {
        for &k in w.letters() {
            let y = apply_generator(&x, k).unwrap();
            prop_assert_eq!(apply_generator(&y, -k).unwrap(), x.clone());
        }
        let back = apply_word(&apply_word(&x, &w).unwrap(), &w.inverse()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn real_action_is_homogeneous(
        (x, w) in (3usize..=8).prop_flat_map(|n| (real_coords(n), word(n, 8))),
        k in 0.01f64..100.0,
    ) {
        let y = apply_word(&x, &w).unwrap().scaled(k);
        let yk = apply_word(&x.scaled(k), &w).unwrap();
        for (p, q) in y.stacked().iter().zip(yk.stacked()) {
            prop_assert!((p - q).abs() <= 1e-9 * (1.0 + q.abs()));
        }
    }

    #[test]
    fn linearization_is_exact_and_unimodular((x, w) in coords_and_word(3..=8)) {
        let probe = signature_at(&x.to_real(), &w, DEFAULT_TIE_TOLERANCE).unwrap();
        let lin = linearize(&w, &probe.signature).unwrap();
        let d = lin.det();
        prop_assert!(d == BigInt::from(1) || d == BigInt::from(-1), "det {}", d);
        let xr = x.to_real().stacked();
        prop_assert!(lin.contains(&xr, 0.0));
        if probe.ties.is_empty() {
            let exact = apply_word(&x, &w).unwrap().to_real().stacked();
            prop_assert_eq!(lin.apply(&xr), exact);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn braid_relations_hold(x in any_int_coords(3..=8), i in 1i32..8, j in 1i32..8) {
        let n = x.n();
        let top = n as i32 - 1;
        let (i, j) = (1 + (i - 1) % top, 1 + (j - 1) % top);
        let act = |ls: &[i32]| apply_word(&x, &BraidWord::new(n, ls.to_vec()).unwrap()).unwrap();
        if i < top {
            prop_assert_eq!(act(&[i, i + 1, i]), act(&[i + 1, i, i + 1]));
            prop_assert_eq!(act(&[-i, -(i + 1), -i]), act(&[-(i + 1), -i, -(i + 1)]));
        }
        if (i - j).abs() >= 2 {
            prop_assert_eq!(act(&[i, j]), act(&[j, i]));
            prop_assert_eq!(act(&[i, -j]), act(&[-j, i]));
        }
    }
}

#[test]
fn braid_relations_every_pair() {
    // Exhaustive over generator pairs, 100 vectors each, for every n.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for n in 3..=8 {
        let top = n as i32 - 1;
        for _ in 0..100 {
            let v: Vec<BigInt> = (0..2 * n - 4)
                .map(|_| BigInt::from(rng.gen_range(-99..=99)))
                .collect();
            let Ok(x) = IntCoords::from_stacked(n, v) else {
                continue;
            };
            let act =
                |ls: &[i32]| apply_word(&x, &BraidWord::new(n, ls.to_vec()).unwrap()).unwrap();
            for i in 1..=top {
                if i < top {
                    assert_eq!(
                        act(&[i, i + 1, i]),
                        act(&[i + 1, i, i + 1]),
                        "n={n} i={i} x={x}"
                    );
                }
                for j in i + 2..=top {
                    assert_eq!(act(&[i, j]), act(&[j, i]), "n={n} i={i} j={j} x={x}");
                }
            }
        }
    }
}

#[test]
fn inversion_round_trip_per_n() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for n in 3..=10 {
        let mut done = 0;
        while done < 1000 {
            let v: Vec<BigInt> = (0..2 * n - 4)
                .map(|_| BigInt::from(rng.gen_range(-1000i64..=1000)))
                .collect();
            let Ok(x) = IntCoords::from_stacked(n, v) else {
                continue;
            };
            let tc = triangle_from_dynnikov(&x).unwrap();
            assert!(validate_triangle(&tc).is_ok(), "n={n} x={x}");
            assert_eq!(dynnikov_from_triangle(&tc).unwrap(), x);
            done += 1;
        }
    }
}
