use std::fmt;

use serde_json::{json, Value};

use super::pa::{analyze_pa, PaOptions, PaReport, PaStatus};
use crate::braid::BraidWord;
use crate::coords::RealCoords;
use crate::error::{Error, Result};
use crate::spectral::{largest_root, Polynomial};

/// The pseudo-Anosov braid families with known dilatations.
///
/// * `Beta { m, n }`: `σ_1⋯σ_m σ_{m+1}^{-1}⋯σ_{m+n}^{-1}` in `B_{m+n+1}`
/// * `Sigma { m, n }`: `σ_1⋯σ_m σ_m⋯σ_1 σ_1⋯σ_{m+n}` in `B_{m+n+1}`
/// * `Tau { n }`: `β_{n-2,1}` in `B_n`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Beta { m: usize, n: usize },
    Sigma { m: usize, n: usize },
    Tau { n: usize },
}

impl Family {
    fn check(&self) -> Result<()> {
        match *self {
            Family::Beta { m, n } | Family::Sigma { m, n } if m == 0 || n == 0 => {
                Err(Error::Parameters(format!("{self} needs m ≥ 1 and n ≥ 1")))
            }
            Family::Tau { n } if n < 3 => Err(Error::Parameters(format!("{self} needs n ≥ 3"))),
            _ => Ok(()),
        }
    }

    /// Number of punctures of the disk the braid acts on.
    pub fn strands(&self) -> usize {
        match *self {
            Family::Beta { m, n } | Family::Sigma { m, n } => m + n + 1,
            Family::Tau { n } => n,
        }
    }

    /// Whether closed forms for the dilatation and eigenvector are known.
    /// For `σ_{m,n}` they are stated only for `1 ≤ m ≤ n − 2`.
    pub fn closed_form_available(&self) -> bool {
        match *self {
            Family::Sigma { m, n } => m >= 1 && m + 2 <= n,
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Beta { m, n } => write!(f, "beta_{{{m},{n}}}"),
            Family::Sigma { m, n } => write!(f, "sigma_{{{m},{n}}}"),
            Family::Tau { n } => write!(f, "tau_{n}"),
        }
    }
}

pub fn family_word(family: &Family) -> Result<BraidWord> {
    family.check()?;
    let letters: Vec<i32> = match *family {
        Family::Beta { m, n } => {
            let (m, n) = (m as i32, n as i32);
            (1..=m).chain((m + 1..=m + n).map(|k| -k)).collect()
        }
        Family::Sigma { m, n } => {
            let (m, n) = (m as i32, n as i32);
            (1..=m).chain((1..=m).rev()).chain(1..=m + n).collect()
        }
        Family::Tau { n } => {
            let n = n as i32;
            (1..=n - 2).chain(std::iter::once(-(n - 1))).collect()
        }
    };
    BraidWord::new(family.strands(), letters)
}

fn x_pow(k: usize) -> Polynomial {
    Polynomial::monomial(1, k)
}

fn one() -> Polynomial {
    Polynomial::constant(1)
}

/// `f_{m,n} = (r−1)(r^{m+n+1}−1) − 2r(r^m+r^n)` for beta (and tau, as
/// `β_{n−2,1}`); `g_{m,n} = (r−1)(r^{m+n+1}+1) + 2r(r^m−r^n)` for sigma.
pub fn family_polynomial(family: &Family) -> Result<Polynomial> {
    family.check()?;
    let r_minus_1 = x_pow(1).sub(&one());
    match *family {
        Family::Beta { m, n } => Ok(r_minus_1
            .mul(&x_pow(m + n + 1).sub(&one()))
            .sub(&x_pow(m + 1).add(&x_pow(n + 1)).scale(2))),
        Family::Tau { n } => family_polynomial(&Family::Beta { m: n - 2, n: 1 }),
        Family::Sigma { m, n } => {
            if !family.closed_form_available() {
                return Err(Error::Parameters(format!(
                    "{family}: closed form needs 1 ≤ m ≤ n − 2"
                )));
            }
            Ok(r_minus_1
                .mul(&x_pow(m + n + 1).add(&one()))
                .add(&x_pow(m + 1).sub(&x_pow(n + 1)).scale(2)))
        }
    }
}

/// Characteristic polynomial of the `τ_n` Dynnikov matrices,
/// `(x+1)^{n−4}(x^n − 2x^{n−1} − 2x + 1)`. For `n = 3` the negative power is
/// divided out, leaving `x² − 3x + 1`.
pub fn tau_characteristic_polynomial(n: usize) -> Result<Polynomial> {
    if n < 3 {
        return Err(Error::Parameters(format!("tau_{n} needs n ≥ 3")));
    }
    let core = x_pow(n)
        .sub(&x_pow(n - 1).scale(2))
        .sub(&x_pow(1).scale(2))
        .add(&one());
    let x_plus_1 = x_pow(1).add(&one());
    if n >= 4 {
        Ok(x_plus_1.pow(n - 4).mul(&core))
    } else {
        let (q, rem) = core.div_rem_monic(&x_plus_1).expect("x + 1 is monic");
        debug_assert_eq!(rem, Polynomial::constant(0));
        Ok(q)
    }
}

/// Closed-form Dynnikov coordinates of the unstable foliation at dilatation `r`.
pub fn family_eigenvector(family: &Family, r: f64) -> Result<RealCoords> {
    family.check()?;
    if !family.closed_form_available() {
        return Err(Error::Parameters(format!(
            "{family}: closed form needs 1 ≤ m ≤ n − 2"
        )));
    }
    let p = |k: usize| r.powi(k as i32);
    let (a, b): (Vec<f64>, Vec<f64>) = match *family {
        Family::Beta { m, n } => (1..m + n)
            .map(|i| {
                if i < m {
                    (
                        -r * (p(n) + 1.0) * (p(i) - 1.0),
                        -(r - 1.0) * (p(n) + 1.0) * p(i + 1),
                    )
                } else if i == m {
                    (
                        -(p(m + 1) - 1.0) * (p(n + 1) - 1.0),
                        -(r + 1.0) * (p(m + 1) - 1.0),
                    )
                } else {
                    (
                        -(p(m + 1) - 1.0) * (p(m + n + 1 - i) - 1.0) * p(i - m),
                        -(r - 1.0) * (p(m + 1) - 1.0) * p(i - m),
                    )
                }
            })
            .unzip(),
        Family::Sigma { m, n } => (1..m + n)
            .map(|i| {
                if i < m {
                    (
                        (p(n) - 1.0) * (p(i + 1) - 1.0) * r,
                        (r - 1.0) * (p(n) - 1.0) * p(i + 1),
                    )
                } else {
                    (
                        (p(m + 1) - 1.0) * (p(m + n - i) - 1.0) * p(i + 1 - m),
                        (r - 1.0) * (p(m + 1) - 1.0) * p(i - m),
                    )
                }
            })
            .unzip(),
        Family::Tau { n } => (1..=n - 2)
            .map(|j| {
                if j < n - 2 {
                    (-r * (p(j) - 1.0), -p(j + 1) * (r - 1.0))
                } else {
                    (-(p(n - 1) - 1.0) * (r - 1.0), -(p(n - 1) - 1.0))
                }
            })
            .unzip(),
    };
    RealCoords::new(a, b)
}

/// Angle between two directions, robust for nearly parallel vectors.
fn angle(u: &[f64], v: &[f64]) -> f64 {
    let unit = |x: &[f64]| {
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        x.iter().map(|c| c / norm).collect::<Vec<_>>()
    };
    let (u, v) = (unit(u), unit(v));
    let chord = u
        .iter()
        .zip(&v)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub word: BraidWord,
    pub closed_form_available: bool,
    /// Root of the family polynomial above 1.
    pub lambda_root: Option<f64>,
    pub lambda_error: Option<f64>,
    /// Angle in radians between the pipeline and closed-form eigenvectors.
    pub eigenvector_angle: Option<f64>,
    /// `max ‖D·v − λ·v‖_∞ / (λ·‖v‖_∞)` over the reported matrices, with `v`
    /// the closed-form eigenvector and `λ` the polynomial root.
    pub max_relative_residual: Option<f64>,
    pub closed_form_eigenvector: Option<RealCoords>,
    pub pa: PaReport,
}

impl FamilyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.to_string(),
            "word": self.word.letters(),
            "n": self.word.n(),
            "closed_form_available": self.closed_form_available,
            "lambda_pipeline": self.pa.lambda,
            "lambda_root": self.lambda_root,
            "lambda_error": self.lambda_error,
            "eigenvector_angle": self.eigenvector_angle,
            "max_relative_residual": self.max_relative_residual,
            "closed_form_eigenvector": self.closed_form_eigenvector.as_ref().map(|v| v.to_json()),
            "pa": self.pa.to_json(),
        })
    }
}

/// Runs the pipeline on a family member and compares it with the closed forms.
pub fn verify_family(family: &Family, opts: &PaOptions) -> Result<FamilyReport> {
    let word = family_word(family)?;
    let pa = analyze_pa(&word, opts).map_err(|e| e.context(format!("analyzing {family}")))?;
    let mut report = FamilyReport {
        family: *family,
        word,
        closed_form_available: family.closed_form_available(),
        lambda_root: None,
        lambda_error: None,
        eigenvector_angle: None,
        max_relative_residual: None,
        closed_form_eigenvector: None,
        pa,
    };
    if !report.closed_form_available {
        return Ok(report);
    }
    let poly = family_polynomial(family)?;
    let r = largest_root(&poly, 1.0).map_err(|e| e.context(format!("root of {poly}")))?;
    let cf = family_eigenvector(family, r)?;
    report.lambda_root = Some(r);
    if report.pa.status == PaStatus::PseudoAnosovDetected {
        let lambda = report.pa.lambda.expect("detected pA has a dilatation");
        report.lambda_error = Some((lambda - r).abs());
        if let Some(v) = &report.pa.eigenvector {
            report.eigenvector_angle = Some(angle(&v.stacked(), &cf.stacked()));
        }
        let x = cf.stacked();
        let sup = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        report.max_relative_residual = Some(
            report
                .pa
                .matrices
                .iter()
                .map(|d| {
                    d.apply(&x)
                        .iter()
                        .zip(&x)
                        .map(|(dv, c)| (dv - r * c).abs())
                        .fold(0.0, f64::max)
                        / (r * sup)
                })
                .fold(0.0, f64::max),
        );
    }
    report.closed_form_eigenvector = Some(cf);
    Ok(report)
}
