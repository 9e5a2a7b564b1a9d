use serde::{Deserialize, Serialize};

use super::rules::{MaxPlus, NodeId};

/// Which argument won at one max node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchChoice {
    pub letter: usize,
    pub node: usize,
    /// 0 for the first argument, 1 for the second.
    pub argmax: u8,
}

impl BranchChoice {
    pub fn id(&self) -> NodeId {
        NodeId {
            letter: self.letter,
            node: self.node,
        }
    }
}

/// The branch taken at every max node while applying a word once. Node count
/// and order depend only on `(n, word)`, so signatures over the same word
/// compare entrywise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchSignature {
    pub n: usize,
    pub word_len: usize,
    pub choices: Vec<BranchChoice>,
}

impl BranchSignature {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Same signature with the branch at `index` switched.
    pub fn flipped(&self, index: usize) -> Self {
        let mut s = self.clone();
        s.choices[index].argmax ^= 1;
        s
    }
}

/// A signature evaluated at a point, with the nodes whose two arguments were
/// too close to call.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignatureProbe {
    pub signature: BranchSignature,
    /// Indices into `signature.choices` flagged as ties.
    pub ties: Vec<usize>,
}

impl SignatureProbe {
    pub fn tie_nodes(&self) -> Vec<NodeId> {
        self.ties
            .iter()
            .map(|&i| self.signature.choices[i].id())
            .collect()
    }
}

/// Floating-point evaluation recording every branch and its margin.
pub(crate) struct Tracer {
    pub choices: Vec<BranchChoice>,
    /// `|x - y|` at each node, relative to the sup-norm of the coordinates
    /// when the letter began.
    pub rel_gaps: Vec<f64>,
    pub scale: f64,
}

impl Tracer {
    pub fn new() -> Self {
        Tracer {
            choices: Vec::new(),
            rel_gaps: Vec::new(),
            scale: 1.0,
        }
    }
}

impl MaxPlus for Tracer {
    type Value = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn add(&self, x: &f64, y: &f64) -> f64 {
        x + y
    }

    fn sub(&self, x: &f64, y: &f64) -> f64 {
        x - y
    }

    fn max(&mut self, node: NodeId, x: f64, y: f64) -> f64 {
        let argmax = u8::from(y > x);
        self.choices.push(BranchChoice {
            letter: node.letter,
            node: node.node,
            argmax,
        });
        let scale = if self.scale > 0.0 { self.scale } else { 1.0 };
        self.rel_gaps.push((x - y).abs() / scale);
        if argmax == 0 {
            x
        } else {
            y
        }
    }
}
