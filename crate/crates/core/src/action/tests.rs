use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::coords::IntCoords;

fn ic(a: &[i64], b: &[i64]) -> IntCoords {
    IntCoords::new(
        a.iter().map(|&v| BigInt::from(v)).collect(),
        b.iter().map(|&v| BigInt::from(v)).collect(),
    )
    .unwrap()
}

fn word(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

#[test]
fn sigma1_example() {
    let x = ic(&[1], &[0]);
    assert_eq!(apply_generator(&x, 1).unwrap(), ic(&[0], &[-1]));
}

#[test]
fn example_word_on_three_strands() {
    let x = ic(&[-1], &[-1]);
    assert_eq!(
        apply_word(&x, &word(3, &[1, -2])).unwrap(),
        ic(&[-3], &[-2])
    );
}

#[test]
fn example_matrices() {
    let w = word(3, &[1, -2]);
    let x = RealCoords::new(vec![-1.0], vec![-1.0]).unwrap();
    let probe = signature_at(&x, &w, DEFAULT_TIE_TOLERANCE).unwrap();
    assert!(probe.ties.is_empty());
    let lin = linearize(&w, &probe.signature).unwrap();
    assert_eq!(lin.matrix, vec![vec![2, 1], vec![1, 1]]);
    assert_eq!(lin.det(), BigInt::from(1));

    let y = RealCoords::new(vec![1.0], vec![-1.0]).unwrap();
    let probe = signature_at(&y, &w, DEFAULT_TIE_TOLERANCE).unwrap();
    let lin2 = linearize(&w, &probe.signature).unwrap();
    assert!(lin2.contains(&y.stacked(), 0.0));
    let mut all = [lin.matrix.clone(), lin2.matrix.clone()];
    all.sort();
    assert!(all.contains(&vec![vec![2, 1], vec![1, 1]]));
}

#[test]
fn errors() {
    let x = ic(&[1], &[0]);
    assert_eq!(apply_generator(&x, 0), Err(Error::ZeroLetter));
    assert!(matches!(
        apply_generator(&x, 3),
        Err(Error::LetterOutOfRange { letter: 3, n: 3 })
    ));
    assert!(matches!(
        apply_word(&x, &word(4, &[1])),
        Err(Error::DimensionMismatch { coords: 3, word: 4 })
    ));
    let sig = signature_at(&x.to_real(), &word(3, &[1]), 1e-9)
        .unwrap()
        .signature;
    assert!(matches!(
        linearize(&word(3, &[1, 2]), &sig),
        Err(Error::SignatureMismatch(_))
    ));
}

#[test]
fn projective_iteration_converges() {
    let w = word(3, &[1, -2]);
    let x = RealCoords::new(vec![1.0], vec![1.0]).unwrap();
    let run = apply_word_projective(&x, &w, 60).unwrap();
    let last = run.trajectory.last().unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    // eigendirection of [[2,1],[1,1]] up to sign
    assert!((last.a()[0] / last.b()[0] - phi).abs() < 1e-9);
}

fn coords_strategy() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (3usize..9).prop_flat_map(|n| {
        prop::collection::vec(-50i64..=50, 2 * n - 4)
            .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
            .prop_map(move |v| (n, v))
    })
}

fn to_ic(n: usize, v: &[i64]) -> IntCoords {
    IntCoords::from_stacked(n, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

proptest! {
    #[test]
    fn generator_then_inverse_is_identity((n, v) in coords_strategy(), k in 1i32..8) {
        let k = 1 + (k - 1) % (n as i32 - 1);
        let x = to_ic(n, &v);
        let y = apply_generator(&apply_generator(&x, k).unwrap(), -k).unwrap();
        prop_assert_eq!(&y, &x);
        let z = apply_generator(&apply_generator(&x, -k).unwrap(), k).unwrap();
        prop_assert_eq!(z, x);
    }

    #[test]
    fn braid_relations((n, v) in coords_strategy(), i in 1i32..8, j in 1i32..8) {
        let x = to_ic(n, &v);
        let top = n as i32 - 1;
        let i = 1 + (i - 1) % top;
        let j = 1 + (j - 1) % top;
        if (i - j).abs() >= 2 {
            let l = apply_word(&x, &word(n, &[i, j])).unwrap();
            let r = apply_word(&x, &word(n, &[j, i])).unwrap();
            prop_assert_eq!(l, r);
        }
        if i < top {
            let l = apply_word(&x, &word(n, &[i, i + 1, i])).unwrap();
            let r = apply_word(&x, &word(n, &[i + 1, i, i + 1])).unwrap();
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn action_is_homogeneous((n, v) in coords_strategy(), letters in prop::collection::vec(-7i32..=7, 1..6), k in 1i64..5) {
        let letters: Vec<i32> = letters.into_iter().filter(|&l| l != 0)
            .map(|l| l.signum() * (1 + (l.abs() - 1) % (n as i32 - 1))).collect();
        prop_assume!(!letters.is_empty());
        let w = word(n, &letters);
        let x = to_ic(n, &v);
        let kx = to_ic(n, &v.iter().map(|c| c * k).collect::<Vec<_>>());
        let fx = apply_word(&x, &w).unwrap();
        let fkx = apply_word(&kx, &w).unwrap();
        let scaled: Vec<BigInt> = fx.stacked().into_iter().map(|c| c * k).collect();
        prop_assert_eq!(fkx.stacked(), scaled);
    }

    #[test]
    fn linearization_is_exact_on_its_region((n, v) in coords_strategy(), letters in prop::collection::vec(-7i32..=7, 1..6)) {
        let letters: Vec<i32> = letters.into_iter().filter(|&l| l != 0)
            .map(|l| l.signum() * (1 + (l.abs() - 1) % (n as i32 - 1))).collect();
        prop_assume!(!letters.is_empty());
        let w = word(n, &letters);
        let x = to_ic(n, &v);
        let probe = signature_at(&x.to_real(), &w, 1e-9).unwrap();
        let lin = linearize(&w, &probe.signature).unwrap();
        prop_assert!(lin.contains(&x.to_real().stacked(), 0.0));
        let exact = apply_word(&x, &w).unwrap().to_real().stacked();
        prop_assert_eq!(lin.apply(&x.to_real().stacked()), exact);
        let d = lin.det();
        prop_assert!(d == BigInt::from(1) || d == BigInt::from(-1));
    }
}
