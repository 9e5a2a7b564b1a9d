use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::action::apply_word;
use crate::braid::BraidWord;
use crate::coords::IntCoords;
use crate::error::{Error, Result};
use crate::scalar::ln_abs;

/// Growth-rate estimates `c_m = ln(‖β^m(x)‖₁) / m` for `m = 1..=iters`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub word: BraidWord,
    /// `samples[m - 1]` is `c_m`.
    pub samples: Vec<f64>,
}

impl EntropyEstimate {
    pub fn final_value(&self) -> f64 {
        *self.samples.last().expect("at least one iteration")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,c_m\n");
        for (i, c) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{},{}", i + 1, c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.letters(),
            "n": self.word.n(),
            "samples": self.samples,
            "final": self.final_value(),
        })
    }
}

/// Iterates `w` exactly on `start` and records the logarithmic growth rate of
/// the L1 norm of the coordinates.
pub fn entropy_estimate(w: &BraidWord, start: &IntCoords, iters: usize) -> Result<EntropyEstimate> {
    if iters == 0 {
        return Err(Error::Parameters("iters must be at least 1".into()));
    }
    let mut x = start.clone();
    let mut samples = Vec::with_capacity(iters);
    for m in 1..=iters {
        x = apply_word(&x, w)?;
        let norm: BigInt = x.l1_norm();
        samples.push(ln_abs(&norm) / m as f64);
    }
    Ok(EntropyEstimate {
        word: w.clone(),
        samples,
    })
}
