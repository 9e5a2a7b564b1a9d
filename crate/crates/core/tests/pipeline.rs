use approx::assert_abs_diff_eq;
use num_bigint::BigInt;

use dynnikov::action::{linearize, signature_at, DEFAULT_TIE_TOLERANCE};
use dynnikov::analysis::{
    analyze_pa, entropy_estimate, family_eigenvector, family_polynomial, family_word,
    tau_characteristic_polynomial, verify_family, Family, PaOptions, PaStatus,
};
use dynnikov::spectral::{dominant_eigenpair, int_to_f64, largest_root};
use dynnikov::{apply_word_projective, triangle_from_dynnikov, BraidWord, IntCoords, RealCoords};

const GOLDEN: f64 = 2.618_033_988_749_895;
const SIX_BRAID: [f64; 8] = [
    -1.0, -3.081, -7.411, -18.27, -2.081, -4.330, -9.012, -16.904,
];

fn word(text: &str, n: usize) -> BraidWord {
    BraidWord::parse(text, n).unwrap()
}

fn a1_normalized(v: &RealCoords) -> Vec<f64> {
    let s = v.a()[0].abs();
    v.stacked().iter().map(|c| c / s).collect()
}

#[test]
fn three_braid_report() {
    let r = analyze_pa(&word("1 -2", 3), &PaOptions::default()).unwrap();
    assert_eq!(r.status, PaStatus::PseudoAnosovDetected);
    assert_abs_diff_eq!(r.lambda.unwrap(), GOLDEN, epsilon = 1e-9);
    assert_abs_diff_eq!(r.entropy.unwrap(), GOLDEN.ln(), epsilon = 1e-9);
    assert_eq!(r.matrices.len(), 1);
    assert_eq!(r.matrices[0].matrix, vec![vec![2, 1], vec![1, 1]]);
    let v = r.eigenvector.unwrap().l2_normalized();
    assert_abs_diff_eq!(v.a()[0], -0.850, epsilon = 1e-2);
    assert_abs_diff_eq!(v.b()[0], -0.525, epsilon = 1e-2);
    let tc = triangle_from_dynnikov(&v).unwrap();
    for (got, want) in tc
        .alpha()
        .iter()
        .chain(tc.beta())
        .zip([2.226, 0.525, 1.70, 2.751])
    {
        assert_abs_diff_eq!(*got, want, epsilon = 5e-3);
    }
}

#[test]
fn six_braid_report() {
    let r = analyze_pa(&word("1 2 3 4 -5", 6), &PaOptions::default()).unwrap();
    assert_eq!(r.status, PaStatus::PseudoAnosovDetected);
    assert_abs_diff_eq!(r.lambda.unwrap(), 2.081, epsilon = 1e-3);
    assert_eq!(r.matrices.len(), 4);
    for (got, want) in a1_normalized(r.eigenvector.as_ref().unwrap())
        .iter()
        .zip(SIX_BRAID)
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-2);
    }
    for m in &r.matrices {
        let e = dominant_eigenpair(&int_to_f64(&m.matrix), 1e-11, 100_000).unwrap();
        assert_abs_diff_eq!(e.lambda, r.lambda.unwrap(), epsilon = 1e-9);
        assert!(m.det() == BigInt::from(1) || m.det() == BigInt::from(-1));
    }
    assert!(r.diagnostics.max_relative_residual <= 1e-8);
}

#[test]
fn six_braid_ties_are_the_two_equalities() {
    let f = Family::Tau { n: 6 };
    let r = largest_root(&family_polynomial(&f).unwrap(), 1.0).unwrap();
    let v = family_eigenvector(&f, r).unwrap();
    let w = family_word(&f).unwrap();
    let probe = signature_at(&v, &w, DEFAULT_TIE_TOLERANCE).unwrap();
    assert!(!probe.ties.is_empty());
    let lin = linearize(&w, &probe.signature).unwrap();
    // stacked order a1..a4, b1..b4: a2 − a1 − b1 and a3 − a2 − b2
    let first = [-1, 1, 0, 0, -1, 0, 0, 0];
    let second = [0, -1, 1, 0, 0, -1, 0, 0];
    // Every tie hyperplane is a combination of the two equalities and together they span both.
    let mut pairs = Vec::new();
    for &t in &probe.ties {
        let h = &lin.halfspaces[t];
        let (p, q) = (-h[0], h[2]);
        let combo: Vec<i64> = first
            .iter()
            .zip(&second)
            .map(|(f, g)| p * f + q * g)
            .collect();
        assert_eq!(h, &combo, "tie node {t} leaves the span");
        pairs.push((p, q));
    }
    assert!(
        pairs.iter().any(|&(p, q)| p != 0 && q == 0),
        "a1 + b1 = a2 never ties alone"
    );
    let rank_two = pairs
        .iter()
        .any(|&(p, q)| pairs.iter().any(|&(r, s)| p * s - q * r != 0));
    assert!(rank_two);

    // A generic point has no ties at all.
    let x = RealCoords::new(vec![-1.0, -2.5, -7.0, -20.0], vec![-2.0, -4.1, -9.3, -16.0]).unwrap();
    assert!(signature_at(&x, &w, DEFAULT_TIE_TOLERANCE)
        .unwrap()
        .ties
        .is_empty());
}

#[test]
fn projective_iteration_reaches_the_six_braid_direction() {
    let x = RealCoords::new(vec![3.0, -1.0, 4.0, -1.0], vec![5.0, -9.0, 2.0, 6.0]).unwrap();
    let run = apply_word_projective(&x, &word("1 2 3 4 -5", 6), 200).unwrap();
    for (got, want) in a1_normalized(run.trajectory.last().unwrap())
        .iter()
        .zip(SIX_BRAID)
    {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-2);
    }
    let start = RealCoords::new(vec![-1.0], vec![-1.0]).unwrap();
    let run = apply_word_projective(&start, &word("1 -2", 3), 50).unwrap();
    let v = run.trajectory.last().unwrap().l2_normalized();
    assert_abs_diff_eq!(v.a()[0], -0.850, epsilon = 1e-3);
    assert_abs_diff_eq!(v.b()[0], -0.525, epsilon = 1e-3);
}

#[test]
fn fixed_direction_is_fixed() {
    let w = word("1 -2", 3);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let v = RealCoords::new(vec![-phi], vec![-1.0]).unwrap();
    let run = apply_word_projective(&v, &w, 1).unwrap();
    let u = &run.trajectory[0];
    assert_abs_diff_eq!(u.a()[0] / u.b()[0], phi, epsilon = 1e-12);
}

#[test]
fn tau_regions() {
    for n in 5..=7 {
        let w = family_word(&Family::Tau { n }).unwrap();
        let r = analyze_pa(&w, &PaOptions::default()).unwrap();
        assert_eq!(r.matrices.len(), 1 << (n - 4), "tau_{n}");
        let root = largest_root(&tau_characteristic_polynomial(n).unwrap(), 1.0).unwrap();
        assert_abs_diff_eq!(r.lambda.unwrap(), root, epsilon = 1e-9);
    }
}

#[test]
fn families_agree_with_closed_forms() {
    let cases = [
        Family::Beta { m: 1, n: 1 },
        Family::Beta { m: 2, n: 3 },
        Family::Sigma { m: 1, n: 3 },
    ];
    for f in cases {
        let rep = verify_family(&f, &PaOptions::default()).unwrap();
        assert!(rep.lambda_error.unwrap() < 1e-9, "{f}");
        assert!(rep.eigenvector_angle.unwrap() < 1e-6, "{f}");
        assert!(rep.max_relative_residual.unwrap() < 1e-8, "{f}");
    }
}

#[test]
fn sigma_outside_closed_form_range_still_runs() {
    let rep = verify_family(&Family::Sigma { m: 2, n: 3 }, &PaOptions::default()).unwrap();
    assert!(!rep.closed_form_available);
    assert!(rep.lambda_root.is_none());
}

#[test]
fn results_do_not_depend_on_the_seed() {
    let w = word("1 2 3 4 -5", 6);
    let runs: Vec<_> = (0..3)
        .map(|seed| {
            analyze_pa(
                &w,
                &PaOptions {
                    seed,
                    ..PaOptions::default()
                },
            )
            .unwrap()
        })
        .collect();
    for r in &runs[1..] {
        assert!((r.lambda.unwrap() - runs[0].lambda.unwrap()).abs() <= 1e-12);
        let mats = |r: &dynnikov::analysis::PaReport| {
            r.matrices
                .iter()
                .map(|m| m.matrix.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(mats(r), mats(&runs[0]));
    }
    let again = analyze_pa(
        &w,
        &PaOptions {
            seed: 2,
            ..PaOptions::default()
        },
    )
    .unwrap();
    assert_eq!(again.to_json(), runs[2].to_json());
}

#[test]
fn reducible_and_periodic_words() {
    let r = analyze_pa(&word("1", 3), &PaOptions::default()).unwrap();
    assert_eq!(r.status, PaStatus::NoExpansionDetected);
    assert!(r.lambda.is_none());
    let r = analyze_pa(&word("1 3", 4), &PaOptions::default()).unwrap();
    assert_eq!(r.status, PaStatus::NoExpansionDetected);
    // σ1σ2 has order three on coordinates: the projective orbit cycles.
    let r = analyze_pa(
        &word("1 2", 3),
        &PaOptions {
            max_iter: 200,
            ..PaOptions::default()
        },
    )
    .unwrap();
    assert_eq!(r.status, PaStatus::Inconclusive);
}

#[test]
fn entropy_of_the_six_braid() {
    let start = IntCoords::parse("1,0,0,0;0,0,0,0", 6).unwrap();
    let e = entropy_estimate(&word("1 2 3 4 -5", 6), &start, 200).unwrap();
    assert_abs_diff_eq!(e.final_value(), 2.081f64.ln(), epsilon = 1e-2);
    let r = analyze_pa(&word("1 2 3 4 -5", 6), &PaOptions::default()).unwrap();
    assert_abs_diff_eq!(e.final_value(), r.entropy.unwrap(), epsilon = 1e-2);
}

#[test]
fn golden_entropy_from_ones_follows_fibonacci() {
    // From (1,1) the m-th iterate is −(F_{2m−3}, F_{2m−4}), so S_m = F_{2m−2}.
    let start = IntCoords::parse("1;1", 3).unwrap();
    let e = entropy_estimate(&word("1 -2", 3), &start, 200).unwrap();
    let mut fib = vec![BigInt::from(0), BigInt::from(1)];
    while fib.len() < 400 {
        let next = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(next);
    }
    for m in [2usize, 10, 50, 200] {
        let want = num_traits::ToPrimitive::to_f64(&fib[2 * m - 2])
            .unwrap()
            .ln()
            / m as f64;
        assert_abs_diff_eq!(e.samples[m - 1], want, epsilon = 1e-12);
    }
    let l = GOLDEN.ln();
    assert_abs_diff_eq!(
        e.final_value(),
        l - (l + 5f64.sqrt().ln()) / 200.0,
        epsilon = 1e-12
    );
}
