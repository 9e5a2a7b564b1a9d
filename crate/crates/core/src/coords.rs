//! Dynnikov coordinates `(a; b)` and triangle coordinates `(α; β)` of
//! laminations and measured foliations on the punctured disk `D_n`.
//!
//! Arc layout: `β_i` (`1 ≤ i ≤ n-1`) runs from the top of the boundary to the
//! bottom between punctures `i` and `i+1`. `α_{2i-1}` and `α_{2i}` join
//! puncture `i+1` to the boundary above and below it. The region `S_i`
//! between `β_i` and `β_{i+1}` is split by these two arcs into a left and a
//! right triangle; the two end regions are not triangles.

use std::fmt;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative slack used when validating floating-point triangle coordinates.
const REAL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DynnikovCoords<S> {
    n: usize,
    a: Vec<S>,
    b: Vec<S>,
}

pub type IntCoords = DynnikovCoords<BigInt>;
pub type RealCoords = DynnikovCoords<f64>;
pub type IntTriangle = TriangleCoords<BigInt>;
pub type RealTriangle = TriangleCoords<f64>;

impl<S: Scalar> DynnikovCoords<S> {
    pub fn new(a: Vec<S>, b: Vec<S>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Length {
                what: "b-block",
                expected: a.len(),
                found: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::TooFewPunctures(2));
        }
        let c = DynnikovCoords {
            n: a.len() + 2,
            a,
            b,
        };
        if c.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(c)
    }

    /// Builds coordinates from the stacked vector `(a_1..a_{n-2}, b_1..b_{n-2})`.
    pub fn from_stacked(n: usize, v: Vec<S>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures(n));
        }
        if v.len() != 2 * n - 4 {
            return Err(Error::Length {
                what: "coordinate vector",
                expected: 2 * n - 4,
                found: v.len(),
            });
        }
        let mut a = v;
        let b = a.split_off(n - 2);
        Self::new(a, b)
    }

    pub(crate) fn from_parts_unchecked(a: Vec<S>, b: Vec<S>) -> Self {
        DynnikovCoords {
            n: a.len() + 2,
            a,
            b,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[S] {
        &self.a
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    pub fn stacked(&self) -> Vec<S> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    pub(crate) fn into_parts(self) -> (Vec<S>, Vec<S>) {
        (self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|x| x.is_zero())
    }

    pub fn l1_norm(&self) -> S {
        self.a
            .iter()
            .chain(&self.b)
            .fold(S::zero(), |acc, x| acc + x.abs())
    }

    pub fn sup_norm_f64(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn to_real(&self) -> RealCoords {
        DynnikovCoords {
            n: self.n,
            a: self.a.iter().map(Scalar::to_f64).collect(),
            b: self.b.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Parses `"a_1,..,a_{n-2};b_1,..,b_{n-2}"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures(n));
        }
        let (a, b) = parse_blocks::<S>(text, "Dynnikov coordinates", n - 2)?;
        for (what, block) in [("a-block", &a), ("b-block", &b)] {
            if block.len() != n - 2 {
                return Err(Error::Length {
                    what,
                    expected: n - 2,
                    found: block.len(),
                });
            }
        }
        Self::new(a, b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "a": self.a.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "b": self.b.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, a, b) = json_blocks::<S>(v, "a", "b")?;
        let c = Self::new(a, b)?;
        if c.n != n {
            return Err(Error::Length {
                what: "a-block",
                expected: n.saturating_sub(2),
                found: c.n - 2,
            });
        }
        Ok(c)
    }
}

impl RealCoords {
    pub fn scaled(&self, k: f64) -> RealCoords {
        DynnikovCoords {
            n: self.n,
            a: self.a.iter().map(|x| x * k).collect(),
            b: self.b.iter().map(|x| x * k).collect(),
        }
    }

    /// Rescaled to sup-norm 1.
    pub fn normalized(&self) -> RealCoords {
        self.scaled(1.0 / self.sup_norm_f64())
    }

    pub fn l2_normalized(&self) -> RealCoords {
        let norm = self
            .a
            .iter()
            .chain(&self.b)
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        self.scaled(1.0 / norm)
    }
}

impl<S: Scalar> fmt::Display for DynnikovCoords<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.a, &self.b)
    }
}

impl<S: Scalar> Serialize for DynnikovCoords<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for DynnikovCoords<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(D::Error::custom)
    }
}

/// Intersection numbers (or measures) with the arcs `α_1..α_{2n-4}` and
/// `β_1..β_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleCoords<S> {
    n: usize,
    alpha: Vec<S>,
    beta: Vec<S>,
}

impl<S: Scalar> TriangleCoords<S> {
    /// Checks lengths only; use [`validate_triangle`] for the geometric
    /// constraints.
    pub fn new(n: usize, alpha: Vec<S>, beta: Vec<S>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures(n));
        }
        if alpha.len() != 2 * n - 4 {
            return Err(Error::Length {
                what: "alpha-block",
                expected: 2 * n - 4,
                found: alpha.len(),
            });
        }
        if beta.len() != n - 1 {
            return Err(Error::Length {
                what: "beta-block",
                expected: n - 1,
                found: beta.len(),
            });
        }
        Ok(TriangleCoords { n, alpha, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }

    pub fn beta(&self) -> &[S] {
        &self.beta
    }

    /// Parses `"α_1,..,α_{2n-4};β_1,..,β_{n-1}"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (alpha, beta) =
            parse_blocks::<S>(text, "triangle coordinates", (2 * n).saturating_sub(4))?;
        Self::new(n, alpha, beta)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alpha": self.alpha.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "beta": self.beta.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, alpha, beta) = json_blocks::<S>(v, "alpha", "beta")?;
        Self::new(n, alpha, beta)
    }

    fn scale(&self) -> f64 {
        self.alpha
            .iter()
            .chain(&self.beta)
            .map(|x| x.to_f64().abs())
            .fold(1.0, f64::max)
    }
}

impl<S: Scalar> fmt::Display for TriangleCoords<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.alpha, &self.beta)
    }
}

/// One of the Dynnikov arcs, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arc {
    Alpha(usize),
    Beta(usize),
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arc::Alpha(i) => write!(f, "α{i}"),
            Arc::Beta(i) => write!(f, "β{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// All entries zero.
    EmptyLamination,
    Negative {
        arc: Arc,
    },
    /// A quantity that must be even is odd (integer case only).
    Parity {
        quantity: String,
    },
    /// `long` exceeds the sum of the other two sides of a triangle in `S_region`.
    TriangleInequality {
        region: usize,
        side: Side,
        long: Arc,
        others: [Arc; 2],
    },
    /// Every region carries both above and below components, so the curve
    /// system contains a boundary-parallel component.
    BoundaryParallel,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLamination => f.write_str("empty lamination (all entries zero)"),
            Violation::Negative { arc } => write!(f, "{arc} is negative"),
            Violation::Parity { quantity } => write!(f, "{quantity} is odd"),
            Violation::TriangleInequality {
                region,
                side,
                long,
                others: [x, y],
            } => write!(
                f,
                "{long} > {x}+{y} ({} triangle of S{region})",
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                }
            ),
            Violation::BoundaryParallel => {
                f.write_str("every region has above and below components (boundary-parallel curve)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn exceeds<S: Scalar>(lhs: &S, rhs: &S, scale: f64) -> bool {
    if S::EXACT {
        lhs > rhs
    } else {
        lhs.to_f64() - rhs.to_f64() > REAL_SLACK * scale
    }
}

fn positive<S: Scalar>(x: &S, scale: f64) -> bool {
    exceeds(x, &S::zero(), scale)
}

pub fn validate_triangle<S: Scalar>(tc: &TriangleCoords<S>) -> ValidityReport {
    let mut violations = Vec::new();
    let n = tc.n;
    let (alpha, beta) = (&tc.alpha, &tc.beta);
    let scale = tc.scale();

    if alpha.iter().chain(beta).all(|x| x.is_zero()) {
        violations.push(Violation::EmptyLamination);
        return ValidityReport { violations };
    }

    for (i, x) in alpha.iter().enumerate() {
        if exceeds(&S::zero(), x, scale) {
            violations.push(Violation::Negative {
                arc: Arc::Alpha(i + 1),
            });
        }
    }
    for (i, x) in beta.iter().enumerate() {
        if exceeds(&S::zero(), x, scale) {
            violations.push(Violation::Negative {
                arc: Arc::Beta(i + 1),
            });
        }
    }

    if S::EXACT {
        let mut odd = |x: S, quantity: String| {
            if x.half().is_err() {
                violations.push(Violation::Parity { quantity });
            }
        };
        odd(beta[0].clone(), "β1".into());
        odd(beta[n - 2].clone(), format!("β{}", n - 1));
        for i in 1..n - 1 {
            odd(
                beta[i - 1].clone() - beta[i].clone(),
                format!("β{}-β{}", i, i + 1),
            );
            odd(
                alpha[2 * i - 1].clone() - alpha[2 * i - 2].clone(),
                format!("α{}-α{}", 2 * i, 2 * i - 1),
            );
        }
    }

    for i in 1..n - 1 {
        let up = (Arc::Alpha(2 * i - 1), &alpha[2 * i - 2]);
        let down = (Arc::Alpha(2 * i), &alpha[2 * i - 1]);
        for (side, bj) in [(Side::Left, i), (Side::Right, i + 1)] {
            let cross = (Arc::Beta(bj), &beta[bj - 1]);
            let sides = [up, down, cross];
            for k in 0..3 {
                let (long, lv) = sides[k];
                let (x, xv) = sides[(k + 1) % 3];
                let (y, yv) = sides[(k + 2) % 3];
                if exceeds(lv, &(xv.clone() + yv.clone()), scale) {
                    let mut others = [x, y];
                    others.sort_by_key(arc_order);
                    violations.push(Violation::TriangleInequality {
                        region: i,
                        side,
                        long,
                        others,
                    });
                }
            }
        }
    }

    // Some region must lack above or below components.
    let all_parallel = (1..n - 1).all(|i| {
        let loops = (beta[i - 1].clone() - beta[i].clone()).abs();
        let twice_above = alpha[2 * i - 2].clone() + alpha[2 * i - 2].clone() - loops.clone();
        let twice_below = alpha[2 * i - 1].clone() + alpha[2 * i - 1].clone() - loops;
        positive(&twice_above, scale) && positive(&twice_below, scale)
    });
    if all_parallel {
        violations.push(Violation::BoundaryParallel);
    }

    ValidityReport { violations }
}

fn arc_order(a: &Arc) -> (u8, usize) {
    match *a {
        Arc::Alpha(i) => (0, i),
        Arc::Beta(i) => (1, i),
    }
}

/// `a_i = (α_{2i} − α_{2i−1})/2`, `b_i = (β_i − β_{i+1})/2`.
pub fn dynnikov_from_triangle<S: Scalar>(tc: &TriangleCoords<S>) -> Result<DynnikovCoords<S>> {
    let report = validate_triangle(tc);
    if !report.is_ok() {
        return Err(Error::InvalidTriangle(report.to_string()));
    }
    let m = tc.n - 2;
    let a = (0..m)
        .map(|i| (tc.alpha[2 * i + 1].clone() - tc.alpha[2 * i].clone()).half())
        .collect::<Result<Vec<_>>>()?;
    let b = (0..m)
        .map(|i| (tc.beta[i].clone() - tc.beta[i + 1].clone()).half())
        .collect::<Result<Vec<_>>>()?;
    DynnikovCoords::new(a, b)
}

/// Inverts the Dynnikov coordinate map.
///
/// `β_i = 2·max_k[|a_k| + b_k⁺ + Σ_{j<k} b_j] − 2·Σ_{j<i} b_j`, and
/// `α_i = (−1)^i a_c + β_c/2` if `b_c ≥ 0`, else `(−1)^i a_c + β_{c+1}/2`,
/// with `c = ⌈i/2⌉`. When `b_c = 0` both branches agree.
pub fn triangle_from_dynnikov<S: Scalar>(dc: &DynnikovCoords<S>) -> Result<TriangleCoords<S>> {
    if dc.is_zero() {
        return Err(Error::ZeroVector);
    }
    let m = dc.n - 2;
    // prefix[k] = Σ_{j<k} b_j (0-based k, so prefix[0] = 0)
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(S::zero());
    for bj in &dc.b {
        let last = prefix.last().unwrap().clone();
        prefix.push(last + bj.clone());
    }
    let top = (0..m)
        .map(|k| dc.a[k].abs() + S::max_of(dc.b[k].clone(), S::zero()) + prefix[k].clone())
        .reduce(S::max_of)
        .unwrap();
    let half_beta: Vec<S> = (0..=m).map(|i| top.clone() - prefix[i].clone()).collect();
    let beta = half_beta.iter().map(|h| h.clone() + h.clone()).collect();
    let alpha = (1..=2 * m)
        .map(|i| {
            let c = i.div_ceil(2) - 1;
            let signed_a = if i % 2 == 0 {
                dc.a[c].clone()
            } else {
                -dc.a[c].clone()
            };
            let hb = if dc.b[c] >= S::zero() {
                &half_beta[c]
            } else {
                &half_beta[c + 1]
            };
            signed_a + hb.clone()
        })
        .collect();
    TriangleCoords::new(dc.n, alpha, beta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCounts<S> {
    /// 1-based index of `S_i`.
    pub region: usize,
    /// `b_i`: positive counts right loops, negative counts left loops.
    pub loops: S,
    pub above: S,
    pub below: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionComponentCounts<S> {
    pub left_end_loops: S,
    pub right_end_loops: S,
    pub regions: Vec<RegionCounts<S>>,
}

impl<S: Scalar> RegionComponentCounts<S> {
    /// Smallest `min(above, below)` over the regions; zero for every
    /// lamination (no boundary-parallel curves).
    pub fn min_parallel(&self) -> S {
        self.regions
            .iter()
            .map(|r| {
                if r.above <= r.below {
                    r.above.clone()
                } else {
                    r.below.clone()
                }
            })
            .reduce(|x, y| if x <= y { x } else { y })
            .unwrap()
    }

    pub fn to_json(&self) -> Value {
        let mut records = vec![json!({
            "region": "left_end",
            "loops": self.left_end_loops.to_json(),
            "loop_side": "left",
        })];
        for r in &self.regions {
            let side = if r.loops.is_positive() {
                Value::from("right")
            } else if r.loops.is_negative() {
                Value::from("left")
            } else {
                Value::Null
            };
            records.push(json!({
                "region": r.region,
                "loops": r.loops.abs().to_json(),
                "loop_side": side,
                "above": r.above.to_json(),
                "below": r.below.to_json(),
            }));
        }
        records.push(json!({
            "region": "right_end",
            "loops": self.right_end_loops.to_json(),
            "loop_side": "right",
        }));
        Value::Array(records)
    }
}

impl<S: Scalar> fmt::Display for RegionComponentCounts<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>8}",
            "region", "loops", "above", "below"
        )?;
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>8}",
            "left end",
            format!("{}L", self.left_end_loops),
            "-",
            "-"
        )?;
        for r in &self.regions {
            let loops = if r.loops.is_positive() {
                format!("{}R", r.loops)
            } else if r.loops.is_negative() {
                format!("{}L", r.loops.abs())
            } else {
                "0".to_string()
            };
            writeln!(
                f,
                "{:<10} {:>8} {:>8} {:>8}",
                format!("S{}", r.region),
                loops,
                r.above,
                r.below
            )?;
        }
        write!(
            f,
            "{:<10} {:>8} {:>8} {:>8}",
            "right end",
            format!("{}R", self.right_end_loops),
            "-",
            "-"
        )
    }
}

/// Path-component counts of the lamination in each region, read off from
/// its triangle coordinates.
pub fn component_counts<S: Scalar>(dc: &DynnikovCoords<S>) -> Result<RegionComponentCounts<S>> {
    let tc = triangle_from_dynnikov(dc)?;
    let n = dc.n;
    let regions = (1..n - 1)
        .map(|i| {
            let loops = dc.b[i - 1].clone();
            let mag = loops.abs();
            RegionCounts {
                region: i,
                above: tc.alpha[2 * i - 2].clone() - mag.clone(),
                below: tc.alpha[2 * i - 1].clone() - mag,
                loops,
            }
        })
        .collect();
    Ok(RegionComponentCounts {
        left_end_loops: tc.beta[0].half()?,
        right_end_loops: tc.beta[n - 2].half()?,
        regions,
    })
}

/// Two blocks separated by `;`, or a flat list split after `split` entries.
fn parse_blocks<S: Scalar>(
    text: &str,
    what: &'static str,
    split: usize,
) -> Result<(Vec<S>, Vec<S>)> {
    let block = |s: &str| -> Result<Vec<S>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(S::parse)
            .collect()
    };
    let parts: Vec<&str> = text.split(';').collect();
    match parts[..] {
        [flat] => {
            let mut a = block(flat)?;
            let b = a.split_off(split.min(a.len()));
            Ok((a, b))
        }
        [first, second] => Ok((block(first)?, block(second)?)),
        _ => Err(Error::Malformed(format!(
            "{what}: expected at most one ';' in {text:?}"
        ))),
    }
}

fn json_blocks<S: Scalar>(v: &Value, first: &str, second: &str) -> Result<(usize, Vec<S>, Vec<S>)> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("JSON: missing integer field \"n\"".into()))?
        as usize;
    let block = |key: &str| -> Result<Vec<S>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed(format!("JSON: missing array field {key:?}")))?
            .iter()
            .map(S::from_json)
            .collect()
    };
    Ok((n, block(first)?, block(second)?))
}

fn write_blocks<S: fmt::Display>(f: &mut fmt::Formatter<'_>, x: &[S], y: &[S]) -> fmt::Result {
    let join = |v: &[S]| {
        v.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    write!(f, "{};{}", join(x), join(y))
}
