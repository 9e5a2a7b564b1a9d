//! The generator update rules, translated from max-plus notation into
//! explicit max/plus expressions.
//!
//! Each rule is written once against [`MaxPlus`], so the same code drives
//! exact evaluation, branch tracing and symbolic linearization. Every binary
//! maximum is a node; within one letter nodes are numbered in evaluation
//! order, and three-argument maxima are split left to right.

use serde::{Deserialize, Serialize};

/// Identifies one binary max node while applying a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    /// Position of the letter in the word (0-based).
    pub letter: usize,
    /// Index of the max node within that letter's rule.
    pub node: usize,
}

pub(crate) trait MaxPlus {
    type Value: Clone;

    fn zero(&self) -> Self::Value;
    fn add(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn sub(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    /// Binary maximum at `node`. The first argument wins ties.
    fn max(&mut self, node: NodeId, x: Self::Value, y: Self::Value) -> Self::Value;
}

struct Letter<'e, E> {
    e: &'e mut E,
    pos: usize,
    next: usize,
}

impl<E: MaxPlus> Letter<'_, E> {
    fn max(&mut self, x: E::Value, y: E::Value) -> E::Value {
        let id = NodeId {
            letter: self.pos,
            node: self.next,
        };
        self.next += 1;
        self.e.max(id, x, y)
    }

    fn max3(&mut self, x: E::Value, y: E::Value, z: E::Value) -> E::Value {
        let xy = self.max(x, y);
        self.max(xy, z)
    }

    /// `max(0, x)`
    fn pos(&mut self, x: &E::Value) -> E::Value {
        let zero = self.e.zero();
        self.max(zero, x.clone())
    }

    fn add(&self, x: &E::Value, y: &E::Value) -> E::Value {
        self.e.add(x, y)
    }

    fn add3(&self, x: &E::Value, y: &E::Value, z: &E::Value) -> E::Value {
        self.e.add(&self.e.add(x, y), z)
    }

    fn sub(&self, x: &E::Value, y: &E::Value) -> E::Value {
        self.e.sub(x, y)
    }
}

/// Applies generator `letter` (signed index) in place. `a` and `b` hold
/// `n - 2` entries each; `pos` is the letter's position in its word.
pub(crate) fn apply_letter<E: MaxPlus>(
    e: &mut E,
    pos: usize,
    letter: i32,
    a: &mut [E::Value],
    b: &mut [E::Value],
) {
    let m = a.len();
    let i = letter.unsigned_abs() as usize;
    debug_assert!(i >= 1 && i <= m + 1);
    let mut l = Letter { e, pos, next: 0 };

    if i == 1 {
        let (x, y) = (a[0].clone(), b[0].clone());
        if letter > 0 {
            // a' = a + b − max(a, 0, b),  b' = max(0, b) − a
            let zero = l.e.zero();
            let t = l.max3(x.clone(), zero, y.clone());
            let a1 = l.sub(&l.add(&x, &y), &t);
            let py = l.pos(&y);
            let b1 = l.sub(&py, &x);
            a[0] = a1;
            b[0] = b1;
        } else {
            // a'' = max(0, a + max(0, b)) − b,  b'' = a + max(0, b)
            let py = l.pos(&y);
            let s = l.add(&x, &py);
            let t = l.pos(&s);
            a[0] = l.sub(&t, &y);
            b[0] = s;
        }
    } else if i == m + 1 {
        let r = m - 1;
        let (x, y) = (a[r].clone(), b[r].clone());
        if letter > 0 {
            // a' = max(a + max(0, b), b),  b' = b − a − max(0, b)
            let py = l.pos(&y);
            let a1 = l.max(l.add(&x, &py), y.clone());
            let b1 = l.sub(&l.sub(&y, &x), &py);
            a[r] = a1;
            b[r] = b1;
        } else {
            // a'' = a − max(a + b, 0, b),  b'' = a + b − max(0, b)
            let zero = l.e.zero();
            let t = l.max3(l.add(&x, &y), zero, y.clone());
            let a1 = l.sub(&x, &t);
            let py = l.pos(&y);
            let b1 = l.sub(&l.add(&x, &y), &py);
            a[r] = a1;
            b[r] = b1;
        }
    } else {
        // a, b are the (i−1)-th coordinates; c, d the i-th.
        let (p, q) = (i - 2, i - 1);
        let (x, y, z, w) = (a[p].clone(), b[p].clone(), a[q].clone(), b[q].clone());
        if letter > 0 {
            // a_{i-1}' = max(a + b⁺, c + b)
            // b_{i-1}' = c + b + d − max(a + b⁺ + d⁺, c + b)
            // a_i'     = a + c + d − max(a + d⁺, c)
            // b_i'     = max(a + b⁺ + d⁺, c + b) − c
            let py = l.pos(&y);
            let zy = l.add(&z, &y);
            let a_prev = l.max(l.add(&x, &py), zy.clone());
            let pw = l.pos(&w);
            let big = l.max(l.add3(&x, &py, &pw), zy);
            let b_prev = l.sub(&l.add3(&z, &y, &w), &big);
            let u = l.max(l.add(&x, &pw), z.clone());
            let a_cur = l.sub(&l.add3(&x, &z, &w), &u);
            let b_cur = l.sub(&big, &z);
            a[p] = a_prev;
            b[p] = b_prev;
            a[q] = a_cur;
            b[q] = b_cur;
        } else {
            // a_{i-1}'' = a + c − max(a + b, c + b⁺)
            // b_{i-1}'' = a + b + d − max(a + b, c + b⁺ + d⁺)
            // a_i''     = max(a, c + d⁺) − d
            // b_i''     = max(a + b, c + b⁺ + d⁺) − a
            let py = l.pos(&y);
            let xy = l.add(&x, &y);
            let v = l.max(xy.clone(), l.add(&z, &py));
            let a_prev = l.sub(&l.add(&x, &z), &v);
            let pw = l.pos(&w);
            let big = l.max(xy, l.add3(&z, &py, &pw));
            let b_prev = l.sub(&l.add3(&x, &y, &w), &big);
            let u = l.max(x.clone(), l.add(&z, &pw));
            let a_cur = l.sub(&u, &w);
            let b_cur = l.sub(&big, &x);
            a[p] = a_prev;
            b[p] = b_prev;
            a[q] = a_cur;
            b[q] = b_cur;
        }
    }
}

/// Plain evaluation over any ordered additive scalar.
pub(crate) struct Exact<S>(std::marker::PhantomData<S>);

impl<S> Exact<S> {
    pub(crate) fn new() -> Self {
        Exact(std::marker::PhantomData)
    }
}

impl<S: crate::scalar::Scalar> MaxPlus for Exact<S> {
    type Value = S;

    fn zero(&self) -> S {
        S::zero()
    }

    fn add(&self, x: &S, y: &S) -> S {
        x.clone() + y.clone()
    }

    fn sub(&self, x: &S, y: &S) -> S {
        x.clone() - y.clone()
    }

    fn max(&mut self, _node: NodeId, x: S, y: S) -> S {
        S::max_of(x, y)
    }
}
