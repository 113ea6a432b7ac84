//! Exact lower-convex polygon arithmetic.
//!
//! Both polygons of interest are chains of exact rational vertices starting
//! at (0,0) with strictly increasing segment slopes: the Hodge polygon is
//! assembled from the sorted multiset of basis weights, the Newton polygon is
//! the lower convex hull of the valuation points (m, ord_q A_m).  Comparison
//! is pointwise at every integer abscissa, so "NP ≥ HP" and "NP = HP" are
//! exact statements, never float tolerances.

use crate::lattice::BasisSet;
use crate::{rat, Error, Rat, Result};
use num::traits::Zero;
use serde_json::{json, Value};
use std::fmt;

/// A lower-convex chain of exact rational vertices, starting at (0,0),
/// strictly increasing in x, with strictly increasing segment slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<(Rat, Rat)>,
}

/// Ascending slopes with multiplicities; Σ multiplicities = degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSequence {
    pub entries: Vec<(Rat, u64)>,
}

/// A valuation ord_q A_m; zero coefficients carry an explicit infinity
/// marker, never a sentinel number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rat),
    Infinite,
}

/// Outcome of [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    NpStrictlyAbove,
    IncomparableViolation,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Comparison::Equal => "equal",
            Comparison::NpStrictlyAbove => "np_strictly_above",
            Comparison::IncomparableViolation => "incomparable_violation",
        };
        f.write_str(s)
    }
}

impl Polygon {
    /// Wrap a vertex chain, checking the polygon invariants.
    fn from_vertices(vertices: Vec<(Rat, Rat)>) -> Result<Polygon> {
        if vertices.first() != Some(&(Rat::zero(), Rat::zero())) {
            return Err(Error::Internal("polygon must start at (0,0)".into()));
        }
        for w in vertices.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Internal("polygon abscissas must strictly increase".into()));
            }
        }
        for w in vertices.windows(3) {
            if cross(&w[0], &w[1], &w[2]) <= Rat::zero() {
                return Err(Error::Internal("polygon slopes must strictly increase".into()));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[(Rat, Rat)] {
        &self.vertices
    }

    /// Horizontal extent (the degree for both polygons used here).
    pub fn x_extent(&self) -> Rat {
        self.vertices.last().expect("polygon has vertices").0
    }

    /// Slopes with multiplicities; each segment of horizontal length L
    /// contributes its slope with multiplicity L (L is integral in every
    /// polygon built by this crate, which is asserted).
    pub fn slope_sequence(&self) -> SlopeSequence {
        let mut entries = Vec::new();
        for w in self.vertices.windows(2) {
            let dx = w[1].0 - w[0].0;
            let dy = w[1].1 - w[0].1;
            assert!(dx.is_integer(), "segment length {dx} is not integral");
            entries.push((dy / dx, dx.to_integer() as u64));
        }
        SlopeSequence { entries }
    }

    /// Height of the chain at abscissa x ∈ [0, x_extent].
    pub fn eval(&self, x: &Rat) -> Rat {
        assert!(*x >= Rat::zero() && *x <= self.x_extent(), "abscissa {x} out of range");
        for w in self.vertices.windows(2) {
            if *x <= w[1].0 {
                let t = (*x - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + t * (w[1].1 - w[0].1);
            }
        }
        self.vertices.last().unwrap().1
    }

    /// Serialize as `{"vertices": [[[xn,xd],[yn,yd]], …], "slopes":
    /// [[num,den,multiplicity], …]}` with exact integer fractions.
    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(x, y)| json!([rat_pair(x), rat_pair(y)]))
            .collect();
        let slopes: Vec<Value> = self
            .slope_sequence()
            .entries
            .iter()
            .map(|(s, mult)| json!([*s.numer(), *s.denom(), *mult]))
            .collect();
        json!({ "vertices": vertices, "slopes": slopes })
    }
}

fn rat_pair(r: &Rat) -> Value {
    json!([*r.numer(), *r.denom()])
}

impl SlopeSequence {
    /// Total number of slopes (the degree).
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Slopes repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for (s, m) in &self.entries {
            for _ in 0..*m {
                out.push(*s);
            }
        }
        out
    }
}

impl fmt::Display for SlopeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in self.expanded() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// (a − o) × (b − o); positive iff o→a→b turns counterclockwise.
fn cross(o: &(Rat, Rat), a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Hodge polygon of a basis: sort the weights ascending and chain them as
/// unit segments, so the m-th unit segment has slope equal to the m-th
/// smallest weight.  Vertices are the cumulative (count, weight-sum) pairs
/// at each distinct weight.
pub fn hodge_polygon(basis: &BasisSet) -> Polygon {
    assert!(!basis.is_empty(), "basis is never empty for a valid family");
    let mut weights = basis.weights.clone();
    weights.sort();
    let mut vertices = vec![(Rat::zero(), Rat::zero())];
    let (mut x, mut y) = (Rat::zero(), Rat::zero());
    let mut i = 0;
    while i < weights.len() {
        let w = weights[i];
        let mut count = 0i64;
        while i < weights.len() && weights[i] == w {
            count += 1;
            i += 1;
        }
        x += rat(count, 1);
        y += rat(count, 1) * w;
        vertices.push((x, y));
    }
    Polygon::from_vertices(vertices).expect("weight groups form a convex chain")
}

/// Lower convex hull of the points (m, ord_q A_m) by monotone chain with
/// exact rational cross products.  Points with infinite valuation (A_m = 0)
/// are skipped; the m = 0 entry must be present with valuation 0 and the
/// highest-m entry must be finite.
pub fn newton_polygon(points: &[(u64, Valuation)]) -> Result<Polygon> {
    let mut finite: Vec<(Rat, Rat)> = Vec::new();
    let mut seen_zero = false;
    for (m, val) in points {
        if *m == 0 {
            seen_zero = true;
            if *val != Valuation::Finite(Rat::zero()) {
                return Err(Error::Internal("valuation at m = 0 must be 0 (A₀ = 1)".into()));
            }
        }
        if let Valuation::Finite(v) = val {
            finite.push((rat(*m as i64, 1), *v));
        }
    }
    if !seen_zero {
        return Err(Error::Internal("missing m = 0 valuation entry".into()));
    }
    finite.sort_by(|p, q| p.0.cmp(&q.0));
    for w in finite.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Internal("duplicate abscissa in valuation data".into()));
        }
    }
    let max_m = points.iter().map(|(m, _)| *m).max().unwrap_or(0);
    if finite.last().map(|p| p.0) != Some(rat(max_m as i64, 1)) {
        return Err(Error::Internal("degree coefficient has infinite valuation".into()));
    }

    let mut hull: Vec<(Rat, Rat)> = Vec::new();
    for p in finite {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rat::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    Polygon::from_vertices(hull)
}

/// Pointwise comparison of the two chains at every integer abscissa
/// 0..=degree.  `Equal` iff the heights agree everywhere;
/// `NpStrictlyAbove` iff np ≥ hp everywhere with some strict point;
/// `IncomparableViolation` iff np dips below hp somewhere (forbidden by the
/// lower-bound theorem — it signals a bug or a false input).
pub fn compare(np: &Polygon, hp: &Polygon) -> Result<Comparison> {
    let extent = np.x_extent();
    if extent != hp.x_extent() {
        return Err(Error::InvalidInput(format!(
            "polygon extents differ: {} vs {}",
            extent,
            hp.x_extent()
        )));
    }
    assert!(extent.is_integer(), "polygon extent {extent} is not integral");
    let degree = extent.to_integer();
    let mut any_strict = false;
    for m in 0..=degree {
        let x = rat(m, 1);
        let ynp = np.eval(&x);
        let yhp = hp.eval(&x);
        if ynp < yhp {
            return Ok(Comparison::IncomparableViolation);
        }
        if ynp > yhp {
            any_strict = true;
        }
    }
    Ok(if any_strict { Comparison::NpStrictlyAbove } else { Comparison::Equal })
}
