use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{
    linearize, projective_step, signature_at, BranchSignature, LinearizedAction, NodeId,
    DEFAULT_TIE_TOLERANCE,
};
use crate::braid::BraidWord;
use crate::coords::RealCoords;
use crate::error::{Error, Result};
use crate::spectral::{
    characteristic_polynomial, dominant_eigenpair, dominant_eigenpair_from, int_to_f64,
    roots_on_unit_circle, EXPANSION_MARGIN,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PaOptions {
    pub restarts: usize,
    /// Maximum number of word applications per restart.
    pub max_iter: usize,
    /// Consecutive identical signatures required before linearizing.
    pub stable_window: usize,
    pub tie_tolerance: f64,
    pub seed: u64,
    /// Maximum number of signature variants tried at the tie nodes.
    pub tie_cap: usize,
}

impl Default for PaOptions {
    fn default() -> Self {
        PaOptions {
            restarts: 8,
            max_iter: 10_000,
            stable_window: 5,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
            seed: 0,
            tie_cap: 1 << 12,
        }
    }
}

/// Relative tolerance for `D·v = λ·v`.
const EIGEN_REL_TOL: f64 = 1e-8;
const POWER_MAX_ITER: usize = 100_000;
/// Start coordinates are drawn from `[-START_RANGE, START_RANGE]`.
const START_RANGE: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaStatus {
    PseudoAnosovDetected,
    NoExpansionDetected,
    Inconclusive,
}

impl fmt::Display for PaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PaStatus::PseudoAnosovDetected => "pseudo-anosov-detected",
            PaStatus::NoExpansionDetected => "no-expansion-detected",
            PaStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartDiagnostics {
    pub start: Vec<i64>,
    pub iterations: usize,
    pub stabilized: bool,
    /// Dominant eigenvalue of the matrix at the stabilized signature.
    pub lambda: Option<f64>,
    pub residual: Option<f64>,
    pub tie_nodes: Vec<NodeId>,
    pub variants_examined: usize,
    pub matrices_found: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub restarts: Vec<RestartDiagnostics>,
    /// Tie nodes at the reported eigenvector.
    pub tie_nodes: Vec<NodeId>,
    /// `max ‖D·v − λ·v‖_∞ / (λ·‖v‖_∞)` over the reported matrices.
    pub max_relative_residual: f64,
    pub tie_cap_exceeded: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaReport {
    pub word: BraidWord,
    pub status: PaStatus,
    pub lambda: Option<f64>,
    pub entropy: Option<f64>,
    /// Sup-norm 1, signed to lie in the closure of every listed region.
    pub eigenvector: Option<RealCoords>,
    /// Sorted by matrix entries.
    pub matrices: Vec<LinearizedAction>,
    pub diagnostics: Diagnostics,
}

impl PaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.letters(),
            "n": self.word.n(),
            "status": self.status,
            "lambda": self.lambda,
            "entropy": self.entropy,
            "eigenvector": self.eigenvector.as_ref().map(|v| v.to_json()),
            "matrices": self.matrices.iter().map(LinearizedAction::to_json).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
        })
    }
}

fn relative_residual(d: &LinearizedAction, v: &[f64], lambda: f64) -> f64 {
    let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    d.apply(v)
        .iter()
        .zip(v)
        .map(|(dv, x)| (dv - lambda * x).abs())
        .fold(0.0, f64::max)
        / (lambda.abs() * sup)
}

/// Every matrix obtained by flipping tie nodes of the signature at `v` that
/// fixes `v` with eigenvalue `lambda` and whose region closure contains `v`.
fn adjacent_matrices(
    w: &BraidWord,
    v: &RealCoords,
    lambda: f64,
    opts: &PaOptions,
) -> Result<(Vec<LinearizedAction>, Vec<NodeId>, usize, bool)> {
    let probe = signature_at(v, w, opts.tie_tolerance)?;
    let k = probe.ties.len();
    let total = if k >= usize::BITS as usize {
        usize::MAX
    } else {
        1usize << k
    };
    let count = total.min(opts.tie_cap.max(1));
    let x = v.stacked();
    let mut found: Vec<LinearizedAction> = Vec::new();
    for mask in 0..count {
        let mut sig: BranchSignature = probe.signature.clone();
        for (bit, &node) in probe.ties.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                sig = sig.flipped(node);
            }
        }
        let lin = linearize(w, &sig)?;
        if lin.contains(&x, opts.tie_tolerance)
            && lin.has_interior()
            && relative_residual(&lin, &x, lambda) <= EIGEN_REL_TOL
            && !found.iter().any(|f| f.matrix == lin.matrix)
        {
            found.push(lin);
        }
    }
    Ok((found, probe.tie_nodes(), count, count < total))
}

struct Expansion {
    lambda: f64,
    vector: RealCoords,
    matrices: Vec<LinearizedAction>,
    tie_nodes: Vec<NodeId>,
    cap_exceeded: bool,
}

fn random_start(n: usize, seed: u64, restart: usize) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    loop {
        let v: Vec<i64> = (0..2 * n - 4)
            .map(|_| rng.gen_range(-START_RANGE..=START_RANGE))
            .collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// Signatures agree at every node that is not a tie in either evaluation.
/// Near a fixed point on a region boundary the iterate sits within rounding
/// of some hyperplanes, and the branch there flips at random.
fn same_up_to_ties(
    p: &BranchSignature,
    p_gaps: &[f64],
    q: &BranchSignature,
    q_gaps: &[f64],
    tol: f64,
) -> bool {
    p.choices.len() == q.choices.len()
        && p.choices
            .iter()
            .zip(&q.choices)
            .zip(p_gaps.iter().zip(q_gaps))
            .all(|((c, d), (g, h))| c == d || *g <= tol || *h <= tol)
}

fn run_restart(
    w: &BraidWord,
    opts: &PaOptions,
    restart: usize,
) -> (RestartDiagnostics, Option<Expansion>) {
    let n = w.n();
    let start = random_start(n, opts.seed, restart);
    let mut diag = RestartDiagnostics {
        start: start.clone(),
        iterations: 0,
        stabilized: false,
        lambda: None,
        residual: None,
        tie_nodes: Vec::new(),
        variants_examined: 0,
        matrices_found: 0,
        note: None,
    };
    let x0 = RealCoords::from_stacked(n, start.iter().map(|&c| c as f64).collect())
        .expect("start is nonzero");
    let mut x = x0.normalized();
    let mut last: Option<(BranchSignature, Vec<f64>)> = None;
    let mut repeats = 0;
    for step in 1..=opts.max_iter {
        let s = match projective_step(&x, w, step) {
            Ok(s) => s,
            Err(e) => {
                diag.iterations = step;
                diag.note = Some(e.to_string());
                return (diag, None);
            }
        };
        x = s.coords;
        diag.iterations = step;
        let same = last.as_ref().is_some_and(|(sig, gaps)| {
            same_up_to_ties(sig, gaps, &s.signature, &s.gaps, opts.tie_tolerance)
        });
        repeats = if same { repeats + 1 } else { 1 };
        last = Some((s.signature, s.gaps));
        if repeats >= opts.stable_window {
            diag.stabilized = true;
            break;
        }
    }
    if !diag.stabilized {
        diag.note = Some("signature did not stabilize".into());
        return (diag, None);
    }
    match expand_at(w, &x, &last.unwrap().0, opts, &mut diag) {
        Ok(e) => (diag, e),
        Err(e) => {
            diag.note = Some(e.to_string());
            (diag, None)
        }
    }
}

fn expand_at(
    w: &BraidWord,
    x: &RealCoords,
    sig: &BranchSignature,
    opts: &PaOptions,
    diag: &mut RestartDiagnostics,
) -> Result<Option<Expansion>> {
    let lin = linearize(w, sig)?;
    let m = int_to_f64(&lin.matrix);
    let norm = m
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let tol = 1e-13 * norm.max(1.0);
    let eig = match dominant_eigenpair_from(&m, &x.stacked(), tol, POWER_MAX_ITER) {
        Ok(eig) => eig,
        Err(e @ Error::NoConvergence { .. }) => {
            // Power iteration stalls on Jordan blocks of modulus-one
            // eigenvalues; settle those exactly.
            if roots_on_unit_circle(&characteristic_polynomial(&lin.matrix)?) {
                diag.lambda = Some(1.0);
                diag.note = Some("all eigenvalues are roots of unity".into());
                return Ok(None);
            }
            return Err(e);
        }
        Err(e) => return Err(e),
    };
    diag.lambda = Some(eig.lambda);
    diag.residual = Some(eig.residual);
    if !eig.is_expanding() {
        return Ok(None);
    }
    let mut v = RealCoords::from_stacked(w.n(), eig.vector)?;
    if !lin.contains(&v.stacked(), opts.tie_tolerance) {
        let flipped = v.scaled(-1.0);
        if !lin.contains(&flipped.stacked(), opts.tie_tolerance) {
            diag.note = Some("eigenvector lies outside the region for either sign".into());
            return Ok(None);
        }
        v = flipped;
    }
    let (matrices, tie_nodes, examined, cap_exceeded) = adjacent_matrices(w, &v, eig.lambda, opts)?;
    diag.tie_nodes = tie_nodes.clone();
    diag.variants_examined = examined;
    diag.matrices_found = matrices.len();
    Ok(Some(Expansion {
        lambda: eig.lambda,
        vector: v,
        matrices,
        tie_nodes,
        cap_exceeded,
    }))
}

/// Recomputes the eigenpair from the first matrix with a fixed start, so the
/// reported values do not depend on which restart got there first.
fn canonical_eigenpair(
    matrices: &[LinearizedAction],
    lambda: f64,
    tie_tolerance: f64,
) -> Option<(f64, RealCoords)> {
    let d = matrices.first()?;
    let m = int_to_f64(&d.matrix);
    let norm = m
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let eig = dominant_eigenpair(&m, 1e-13 * norm.max(1.0), POWER_MAX_ITER).ok()?;
    if (eig.lambda - lambda).abs() > EIGEN_REL_TOL * lambda {
        return None;
    }
    let u = RealCoords::from_stacked(d.n, eig.vector).ok()?;
    let fits = |u: &RealCoords| {
        let x = u.stacked();
        matrices.iter().all(|m| {
            m.contains(&x, tie_tolerance) && relative_residual(m, &x, eig.lambda) <= EIGEN_REL_TOL
        })
    };
    if fits(&u) {
        return Some((eig.lambda, u));
    }
    let u = u.scaled(-1.0);
    fits(&u).then_some((eig.lambda, u))
}

/// Searches for the unstable foliation of `w` by projective iteration from
/// random starts, then linearizes around it.
pub fn analyze_pa(w: &BraidWord, opts: &PaOptions) -> Result<PaReport> {
    if opts.restarts == 0 || opts.stable_window == 0 || opts.max_iter == 0 {
        return Err(Error::Parameters(
            "restarts, stable_window and max_iter must be positive".into(),
        ));
    }
    let outcomes: Vec<_> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_restart(w, opts, r))
        .collect();

    let mut notes = Vec::new();
    let mut restarts = Vec::with_capacity(outcomes.len());
    let mut expansions = Vec::new();
    for (d, e) in outcomes {
        restarts.push(d);
        if let Some(e) = e {
            expansions.push(e);
        }
    }

    let Some(first) = expansions.first() else {
        let all_flat = restarts
            .iter()
            .all(|d| d.stabilized && d.lambda.is_some_and(|l| l <= 1.0 + EXPANSION_MARGIN));
        return Ok(PaReport {
            word: w.clone(),
            status: if all_flat {
                PaStatus::NoExpansionDetected
            } else {
                PaStatus::Inconclusive
            },
            lambda: None,
            entropy: None,
            eigenvector: None,
            matrices: Vec::new(),
            diagnostics: Diagnostics {
                restarts,
                tie_nodes: Vec::new(),
                max_relative_residual: 0.0,
                tie_cap_exceeded: false,
                notes,
            },
        });
    };

    let mut lambda = first.lambda;
    let mut v = first.vector.clone();
    let x = v.stacked();
    let mut matrices: Vec<LinearizedAction> = Vec::new();
    let mut cap_exceeded = false;
    for e in &expansions {
        if (e.lambda - lambda).abs() > 1e-8 * lambda {
            notes.push(format!(
                "restarts disagree on the dilatation: {} vs {}",
                lambda, e.lambda
            ));
            continue;
        }
        cap_exceeded |= e.cap_exceeded;
        for m in &e.matrices {
            // Keep only matrices valid at the reported eigenvector.
            if matrices.iter().any(|f| f.matrix == m.matrix) {
                continue;
            }
            if m.contains(&x, opts.tie_tolerance)
                && relative_residual(m, &x, lambda) <= EIGEN_REL_TOL
            {
                matrices.push(m.clone());
            } else {
                notes.push(
                    "a restart found a region not adjacent to the reported eigenvector".into(),
                );
            }
        }
    }
    if cap_exceeded {
        notes.push(format!(
            "tie enumeration capped at {} variants; matrix list may be partial",
            opts.tie_cap
        ));
    }
    matrices.sort_by(|p, q| p.matrix.cmp(&q.matrix));
    if let Some((l, u)) = canonical_eigenpair(&matrices, lambda, opts.tie_tolerance) {
        lambda = l;
        v = u;
    } else if matrices.is_empty() {
        notes.push("no region adjacent to the eigenvector passed the checks".into());
    }
    let x = v.stacked();
    let max_relative_residual = matrices
        .iter()
        .map(|m| relative_residual(m, &x, lambda))
        .fold(0.0, f64::max);

    Ok(PaReport {
        word: w.clone(),
        status: PaStatus::PseudoAnosovDetected,
        lambda: Some(lambda),
        entropy: Some(lambda.ln()),
        eigenvector: Some(v),
        matrices,
        diagnostics: Diagnostics {
            restarts,
            tie_nodes: first.tie_nodes.clone(),
            max_relative_residual,
            tie_cap_exceeded: cap_exceeded,
            notes,
        },
    })
}
