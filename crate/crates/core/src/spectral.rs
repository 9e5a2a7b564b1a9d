//! Small dense spectral routines and univariate polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Threshold above which a dominant eigenvalue counts as expansion.
pub const EXPANSION_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub lambda: f64,
    /// Sup-norm 1; sign as produced by the iteration.
    pub vector: Vec<f64>,
    /// `‖M·v − λ·v‖_∞`
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralResult {
    pub fn is_expanding(&self) -> bool {
        self.lambda > 1.0 + EXPANSION_MARGIN
    }
}

pub fn int_to_f64(m: &[Vec<i64>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect()
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let d = m.len();
    if d == 0 || m.iter().any(|r| r.len() != d) {
        return Err(Error::NotSquare);
    }
    Ok(d)
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Power iteration from a fixed generic start vector.
pub fn dominant_eigenpair(m: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<SpectralResult> {
    let d = check_square(m)?;
    // Generic, non-symmetric start so no eigendirection is missed by symmetry.
    let start: Vec<f64> = (0..d).map(|k| 1.0 + 0.37 * k as f64 / d as f64).collect();
    dominant_eigenpair_from(m, &start, tol, max_iter)
}

/// Power iteration with sup-norm normalization, starting from `start`. The
/// eigenvalue estimate is the Rayleigh quotient of the current iterate;
/// iteration stops once `‖M·v − λ·v‖_∞ ≤ tol`.
pub fn dominant_eigenpair_from(
    m: &[Vec<f64>],
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SpectralResult> {
    let d = check_square(m)?;
    if start.len() != d {
        return Err(Error::Length {
            what: "start vector",
            expected: d,
            found: start.len(),
        });
    }
    let s = sup(start);
    if s == 0.0 || !s.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut v: Vec<f64> = start.iter().map(|x| x / s).collect();
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let w = mat_vec(m, &v);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / vv;
        residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(SpectralResult {
                lambda,
                vector: v,
                residual,
                iterations: it,
            });
        }
        let norm = sup(&w);
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> Result<BigInt> {
    let d = check_square(m)?;
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..d {
        let Some(p) = (k..d).find(|&i| !a[i][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[d - 1][d - 1])
}

/// Characteristic polynomial `det(xI − M)`, coefficients from the constant
/// term upward, by Faddeev–LeVerrier (every division is exact over Z).
pub fn characteristic_polynomial(m: &[Vec<i64>]) -> Result<Vec<BigInt>> {
    let d = check_square(m)?;
    let a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut c = vec![BigInt::zero(); d + 1];
    c[d] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); d]; d];
    for k in 1..=d {
        // M_k = A·M_{k−1} + c_{d−k+1}·I
        let mut next = vec![vec![BigInt::zero(); d]; d];
        for (i, row) in next.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = BigInt::zero();
                for l in 0..d {
                    acc += &a[i][l] * &mk[l][j];
                }
                if i == j {
                    acc += &c[d - k + 1];
                }
                *cell = acc;
            }
        }
        mk = next;
        let mut trace = BigInt::zero();
        for i in 0..d {
            for l in 0..d {
                trace += &a[i][l] * &mk[l][i];
            }
        }
        c[d - k] = -trace / BigInt::from(k);
    }
    Ok(c)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// Whether every root of the monic integer polynomial `p` (constant term
/// first) has modulus 1, so by Kronecker's theorem is a root of unity.
///
/// Graeffe's transform squares every root. If all roots lie on the unit
/// circle the coefficients stay within the binomial bounds and the sequence
/// of transforms is eventually periodic; a root off the circle makes the
/// coefficients leave the bounds.
pub fn roots_on_unit_circle(p: &[BigInt]) -> bool {
    let d = p.len().saturating_sub(1);
    if d == 0 || !p[d].is_one() || p[0].abs() != BigInt::one() {
        return d == 0;
    }
    let bounds: Vec<BigInt> = (0..=d).map(|k| binomial(d, k)).collect();
    let mut seen: Vec<Vec<BigInt>> = Vec::new();
    let mut q = p.to_vec();
    loop {
        if q.iter().zip(&bounds).any(|(c, b)| c.abs() > *b) {
            return false;
        }
        if seen.contains(&q) {
            return true;
        }
        seen.push(q.clone());
        q = graeffe(&q);
    }
}

/// `q(x²) = (−1)^d · p(x)·p(−x)`, so the roots of `q` are the squares of
/// those of `p` and `q` stays monic.
fn graeffe(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    let neg: Vec<BigInt> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    let mut prod = vec![BigInt::zero(); 2 * d + 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in neg.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let sign = if d % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    (0..=d).map(|k| &prod[2 * k] * &sign).collect()
}

/// Integer polynomial, coefficients from the constant term upward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Polynomial { coeffs }
    }

    /// From coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn monomial(coeff: i64, degree: usize) -> Self {
        let mut c = vec![0; degree + 1];
        c[degree] = coeff;
        Self::new(c)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// `Σ |c_i|·|x|^i`, the natural scale of `p(x)` for rounding purposes.
    pub fn magnitude(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x.abs() + (c as f64).abs())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Polynomial {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::constant(1), |acc, _| acc.mul(self))
    }

    /// Exact division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        if divisor.leading() != 1 {
            return None;
        }
        let dd = divisor.degree();
        if self.degree() < dd {
            return Some((Polynomial::constant(0), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            quot[k] = c;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        Some((Self::new(quot), Self::new(rem)))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && !(first && deg == 0) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            match (deg, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{mag}x")?,
                (_, 1) => write!(f, "x^{deg}")?,
                _ => write!(f, "{mag}x^{deg}")?,
            }
        }
        Ok(())
    }
}

/// Offset above `low` at which the bracket starts.
const BRACKET_OFFSET: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-12;

/// The root of `p` above `low`, assumed unique, found by bisection between
/// `low + δ` and the Cauchy bound `1 + max|c_i|/|c_lead|`.
pub fn largest_root(p: &Polynomial, low: f64) -> Result<f64> {
    if p.degree() == 0 {
        return Err(Error::Parameters("polynomial is constant".into()));
    }
    let lead = p.leading().abs() as f64;
    let bound = 1.0
        + p.coeffs[..p.degree()]
            .iter()
            .map(|c| c.abs() as f64 / lead)
            .fold(0.0, f64::max);
    let mut lo = low + BRACKET_OFFSET * low.abs().max(1.0);
    let mut hi = bound.max(lo);
    let (flo, fhi) = (p.eval(lo), p.eval(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot { low });
    }
    let lo_sign = flo.signum();
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `|det|` of an integer matrix, for unimodularity checks.
pub fn is_unimodular(m: &[Vec<i64>]) -> bool {
    determinant(m).map(|d| d.abs().is_one()).unwrap_or(false)
}
