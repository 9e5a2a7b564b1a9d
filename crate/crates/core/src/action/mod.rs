//! The braid group action on Dynnikov coordinates.
//!
//! Exact evaluation works over big integers (coordinates grow like `λ^m`
//! under iteration, so fixed-width integers overflow quickly) and over
//! doubles. Traced evaluation records the branch taken at every max node,
//! and [`linearize`] turns such a signature back into an integer matrix and
//! the halfspaces cutting out its region.

mod linear;
mod rules;
mod signature;

pub use linear::LinearizedAction;
pub use rules::NodeId;
pub use signature::{BranchChoice, BranchSignature, SignatureProbe};

use crate::braid::BraidWord;
use crate::coords::{DynnikovCoords, RealCoords};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use linear::{to_i64_rows, Linearizer};
use rules::{apply_letter, Exact};
use signature::Tracer;

/// Default tie tolerance, relative to the sup-norm of the coordinates.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

fn check_letter(n: usize, letter: i32) -> Result<()> {
    if letter == 0 {
        return Err(Error::ZeroLetter);
    }
    if letter.unsigned_abs() as usize > n - 1 {
        return Err(Error::LetterOutOfRange {
            letter: letter as i64,
            n,
        });
    }
    Ok(())
}

fn check_input<S: Scalar>(dc: &DynnikovCoords<S>, w: &BraidWord) -> Result<()> {
    if dc.n() != w.n() {
        return Err(Error::DimensionMismatch {
            coords: dc.n(),
            word: w.n(),
        });
    }
    if dc.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Action of a single generator (`letter > 0` is `σ_letter`, `< 0` its inverse).
pub fn apply_generator<S: Scalar>(
    dc: &DynnikovCoords<S>,
    letter: i32,
) -> Result<DynnikovCoords<S>> {
    check_letter(dc.n(), letter)?;
    if dc.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (mut a, mut b) = dc.clone().into_parts();
    apply_letter(&mut Exact::<S>::new(), 0, letter, &mut a, &mut b);
    Ok(DynnikovCoords::from_parts_unchecked(a, b))
}

/// Applies `w` letter by letter, leftmost first.
pub fn apply_word<S: Scalar>(dc: &DynnikovCoords<S>, w: &BraidWord) -> Result<DynnikovCoords<S>> {
    check_input(dc, w)?;
    let (mut a, mut b) = dc.clone().into_parts();
    let mut e = Exact::<S>::new();
    for (pos, &k) in w.letters().iter().enumerate() {
        apply_letter(&mut e, pos, k, &mut a, &mut b);
    }
    Ok(DynnikovCoords::from_parts_unchecked(a, b))
}

/// Applies `w` once to a real point, recording every branch.
pub(crate) fn trace_word(dc: &RealCoords, w: &BraidWord) -> (RealCoords, Tracer) {
    let (mut a, mut b) = dc.clone().into_parts();
    let mut t = Tracer::new();
    for (pos, &k) in w.letters().iter().enumerate() {
        t.scale = a.iter().chain(&b).fold(0.0f64, |m, v| m.max(v.abs()));
        apply_letter(&mut t, pos, k, &mut a, &mut b);
    }
    (DynnikovCoords::from_parts_unchecked(a, b), t)
}

fn signature_of(w: &BraidWord, t: &Tracer) -> BranchSignature {
    BranchSignature {
        n: w.n(),
        word_len: w.len(),
        choices: t.choices.clone(),
    }
}

/// One projective step: apply the word and rescale to sup-norm 1.
#[derive(Debug, Clone)]
pub struct ProjectiveStep {
    pub coords: RealCoords,
    /// Sup-norm of the image before rescaling.
    pub growth: f64,
    pub signature: BranchSignature,
    /// Gap between the two arguments at each node, relative to the local scale.
    pub gaps: Vec<f64>,
}

pub(crate) fn projective_step(
    x: &RealCoords,
    w: &BraidWord,
    step: usize,
) -> Result<ProjectiveStep> {
    let (y, t) = trace_word(x, w);
    let growth = y.sup_norm_f64();
    if !(growth.is_finite() && growth > f64::MIN_POSITIVE) {
        return Err(Error::Collapse { step });
    }
    Ok(ProjectiveStep {
        coords: y.scaled(1.0 / growth),
        growth,
        signature: signature_of(w, &t),
        gaps: t.rel_gaps,
    })
}

#[derive(Debug, Clone)]
pub struct ProjectiveRun {
    /// Normalized coordinates after each application.
    pub trajectory: Vec<RealCoords>,
    /// Signature of the last application.
    pub signature: BranchSignature,
}

/// Iterates `w` on projective coordinates, rescaling to sup-norm 1 after each
/// full application.
pub fn apply_word_projective(
    dc: &RealCoords,
    w: &BraidWord,
    steps: usize,
) -> Result<ProjectiveRun> {
    check_input(dc, w)?;
    if steps == 0 {
        return Err(Error::Parameters("at least one step is required".into()));
    }
    let mut x = dc.normalized();
    let mut trajectory = Vec::with_capacity(steps);
    let mut signature = None;
    for step in 1..=steps {
        let s = projective_step(&x, w, step)?;
        x = s.coords.clone();
        trajectory.push(s.coords);
        signature = Some(s.signature);
    }
    Ok(ProjectiveRun {
        trajectory,
        signature: signature.unwrap(),
    })
}

/// Evaluates `w` once at `dc` and flags every node whose two arguments
/// differ by at most `tie_tolerance` times the sup-norm of the coordinates
/// at that letter.
pub fn signature_at(dc: &RealCoords, w: &BraidWord, tie_tolerance: f64) -> Result<SignatureProbe> {
    check_input(dc, w)?;
    let (_, t) = trace_word(dc, w);
    let ties = t
        .rel_gaps
        .iter()
        .enumerate()
        .filter(|(_, &g)| g <= tie_tolerance)
        .map(|(i, _)| i)
        .collect();
    Ok(SignatureProbe {
        signature: signature_of(w, &t),
        ties,
    })
}

/// Re-runs `w` symbolically along `sig`, returning the integer matrix of the
/// action and the halfspaces (in initial coordinates) of its region.
pub fn linearize(w: &BraidWord, sig: &BranchSignature) -> Result<LinearizedAction> {
    if sig.n != w.n() || sig.word_len != w.len() {
        return Err(Error::SignatureMismatch(format!(
            "signature is for a word of length {} in B_{}, word has length {} in B_{}",
            sig.word_len,
            sig.n,
            w.len(),
            w.n()
        )));
    }
    let m = w.n() - 2;
    let dim = 2 * m;
    let mut lin = Linearizer::new(dim, &sig.choices);
    let mut a: Vec<_> = (0..m).map(|k| lin.basis(k)).collect();
    let mut b: Vec<_> = (0..m).map(|k| lin.basis(m + k)).collect();
    for (pos, &k) in w.letters().iter().enumerate() {
        apply_letter(&mut lin, pos, k, &mut a, &mut b);
    }
    if let Some(e) = lin.error.take() {
        return Err(Error::SignatureMismatch(e));
    }
    if lin.consumed() != sig.choices.len() {
        return Err(Error::SignatureMismatch(format!(
            "signature has {} choices, word evaluates {} max nodes",
            sig.choices.len(),
            lin.consumed()
        )));
    }
    let rows: Vec<_> = a.into_iter().chain(b).collect();
    Ok(LinearizedAction {
        n: w.n(),
        matrix: to_i64_rows(&rows)?,
        halfspaces: to_i64_rows(&lin.halfspaces)?,
        signature: sig.clone(),
    })
}

#[cfg(test)]
mod tests;
