use std::fmt;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::rules::{MaxPlus, NodeId};
use super::signature::{BranchChoice, BranchSignature};
use crate::coords::RealCoords;
use crate::error::{Error, Result};
use crate::spectral::determinant;

/// The braid action on one linearity region: `x ↦ matrix·x` for every `x`
/// with `h·x ≥ 0` for all `h` in `halfspaces`. Coordinates are stacked as
/// `(a_1..a_{n-2}, b_1..b_{n-2})` and the halfspaces refer to the initial
/// coordinates. Halfspace `k` comes from max node `k` of the signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedAction {
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
    pub halfspaces: Vec<Vec<i64>>,
    pub signature: BranchSignature,
}

impl LinearizedAction {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn det(&self) -> BigInt {
        determinant(&self.matrix).expect("linearized matrices are square")
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(&m, v)| m as f64 * v).sum())
            .collect()
    }

    pub fn apply_coords(&self, x: &RealCoords) -> Vec<f64> {
        self.apply(&x.stacked())
    }

    /// Smallest `h·x / (‖h‖₁·‖x‖_∞)` over the halfspaces; nonnegative when
    /// `x` lies in the closed region.
    pub fn min_slack(&self, x: &[f64]) -> f64 {
        let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.halfspaces
            .iter()
            .filter(|h| h.iter().any(|&c| c != 0))
            .map(|h| {
                let dot: f64 = h.iter().zip(x).map(|(&c, v)| c as f64 * v).sum();
                let l1: f64 = h.iter().map(|&c| (c as f64).abs()).sum();
                dot / (l1 * sup)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.min_slack(x) >= -tol
    }

    /// Whether the region has nonempty interior, i.e. some `d` satisfies every
    /// nonzero halfspace strictly. Solved as the LP `max t` subject to
    /// `h·d ≥ t·‖h‖₁`, `|d_i| ≤ 1`, `t ≤ 1`.
    pub fn has_interior(&self) -> bool {
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let d: Vec<_> = (0..self.dim())
            .map(|_| p.add_var(0.0, (-1.0, 1.0)))
            .collect();
        let t = p.add_var(1.0, (f64::NEG_INFINITY, 1.0));
        for h in self.halfspaces.iter().filter(|h| h.iter().any(|&c| c != 0)) {
            let l1: f64 = h.iter().map(|&c| (c as f64).abs()).sum();
            let mut row: Vec<_> = d
                .iter()
                .zip(h)
                .filter(|(_, &c)| c != 0)
                .map(|(&v, &c)| (v, c as f64))
                .collect();
            row.push((t, -l1));
            p.add_constraint(row, ComparisonOp::Ge, 0.0);
        }
        match p.solve() {
            Ok(sol) => sol.objective() > INTERIOR_MARGIN,
            Err(_) => false,
        }
    }

    /// Halfspaces with exact duplicates removed, first occurrence kept.
    pub fn reduced_halfspaces(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for h in &self.halfspaces {
            if !out.contains(h) {
                out.push(h.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix,
            "halfspaces": self.halfspaces,
            "det": self.det().to_i64().unwrap_or(0),
        })
    }
}

impl fmt::Display for LinearizedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .matrix
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Optimal margins below this count as an empty interior.
const INTERIOR_MARGIN: f64 = 1e-9;

type Form = Vec<BigInt>;

/// Symbolic evaluation: values are integer linear forms in the initial
/// coordinates and every max follows a prescribed signature.
pub(crate) struct Linearizer<'s> {
    dim: usize,
    choices: &'s [BranchChoice],
    next: usize,
    pub halfspaces: Vec<Form>,
    pub error: Option<String>,
}

impl<'s> Linearizer<'s> {
    pub fn new(dim: usize, choices: &'s [BranchChoice]) -> Self {
        Linearizer {
            dim,
            choices,
            next: 0,
            halfspaces: Vec::with_capacity(choices.len()),
            error: None,
        }
    }

    pub fn consumed(&self) -> usize {
        self.next
    }

    pub fn basis(&self, k: usize) -> Form {
        let mut v = vec![BigInt::zero(); self.dim];
        v[k] = BigInt::from(1);
        v
    }
}

impl MaxPlus for Linearizer<'_> {
    type Value = Form;

    fn zero(&self) -> Form {
        vec![BigInt::zero(); self.dim]
    }

    fn add(&self, x: &Form, y: &Form) -> Form {
        x.iter().zip(y).map(|(p, q)| p + q).collect()
    }

    fn sub(&self, x: &Form, y: &Form) -> Form {
        x.iter().zip(y).map(|(p, q)| p - q).collect()
    }

    fn max(&mut self, node: NodeId, x: Form, y: Form) -> Form {
        let Some(choice) = self.choices.get(self.next) else {
            self.error
                .get_or_insert_with(|| format!("signature too short at {node:?}"));
            return x;
        };
        self.next += 1;
        if choice.id() != node {
            self.error.get_or_insert_with(|| {
                format!("expected node {:?}, signature has {:?}", node, choice.id())
            });
        }
        let (win, lose) = if choice.argmax == 0 { (x, y) } else { (y, x) };
        self.halfspaces.push(self.sub(&win, &lose));
        win
    }
}

pub(crate) fn to_i64_rows(rows: &[Form]) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|v| v.to_i64().ok_or(Error::Overflow))
                .collect()
        })
        .collect()
}
