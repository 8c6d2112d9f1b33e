//! Continuous piecewise-linear self-maps of the unit interval.
//!
//! A map is a finite node list `(x_0, y_0), ..., (x_k, y_k)` with strictly
//! increasing abscissas, `x_0 = 0`, `x_k = 1`, all ordinates in `[0,1]`, and
//! linear interpolation between consecutive nodes. Continuity is structural.
//! Node lists are kept canonical (no interior node collinear with its
//! neighbors), so pointwise equality of maps is equality of node lists.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Closed rational subinterval of `[0,1]`. Open sets are probed through
/// closed intervals with nonempty interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalQ {
    lo: Rational,
    hi: Rational,
}

impl IntervalQ {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadParams(format!(
                "interval lower bound {lo} exceeds upper bound {hi}"
            )));
        }
        Ok(IntervalQ { lo, hi })
    }

    pub fn unit() -> Self {
        IntervalQ {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn has_interior(&self) -> bool {
        self.lo < self.hi
    }

    /// True when the two intervals overlap in a set with nonempty interior
    /// (strict overlap, not mere touching).
    pub fn interior_overlaps(&self, other: &IntervalQ) -> bool {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        lo < hi
    }
}

impl fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Exact solution set of `f(x) = x`: isolated points plus maximal segments
/// lying on the diagonal. Points never lie inside a reported segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSet {
    pub points: Vec<Rational>,
    pub segments: Vec<IntervalQ>,
}

/// A continuous piecewise-linear self-map of `[0,1]` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    nodes: Vec<(Rational, Rational)>,
}

impl PLMap {
    /// Interpolant through the anchors. Abscissas must be strictly
    /// increasing from 0 to 1 and ordinates must stay in `[0,1]`.
    pub fn from_anchors(anchors: Vec<(Rational, Rational)>) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::BadAnchors("need at least two anchors".into()));
        }
        if anchors[0].0 != Rational::zero() {
            return Err(Error::BadAnchors("first abscissa must be 0".into()));
        }
        if anchors[anchors.len() - 1].0 != Rational::one() {
            return Err(Error::BadAnchors("last abscissa must be 1".into()));
        }
        for w in anchors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::BadAnchors(format!(
                    "abscissas must be strictly increasing, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for (x, y) in &anchors {
            if !y.in_unit_interval() {
                return Err(Error::BadAnchors(format!(
                    "ordinate {y} at abscissa {x} lies outside [0,1]"
                )));
            }
        }
        Ok(PLMap {
            nodes: canonicalize(anchors),
        })
    }

    /// The identity map.
    pub fn identity() -> Self {
        PLMap {
            nodes: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    /// The tent map `x -> 1 - |1 - 2x|`.
    pub fn tent() -> Self {
        PLMap {
            nodes: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::new(1, 2).unwrap(), Rational::one()),
                (Rational::one(), Rational::zero()),
            ],
        }
    }

    /// The reflection `x -> 1 - x`.
    pub fn one_minus_x() -> Self {
        PLMap {
            nodes: vec![
                (Rational::zero(), Rational::one()),
                (Rational::one(), Rational::zero()),
            ],
        }
    }

    /// Constant map with value `c`.
    pub fn constant(c: Rational) -> Result<Self> {
        if !c.in_unit_interval() {
            return Err(Error::OutOfUnitInterval {
                value: c.to_string(),
            });
        }
        Ok(PLMap {
            nodes: vec![(Rational::zero(), c.clone()), (Rational::one(), c)],
        })
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    /// Exact value of the interpolant at `x in [0,1]`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfUnitInterval {
                value: x.to_string(),
            });
        }
        let last = self.nodes.len() - 1;
        if *x == self.nodes[last].0 {
            return Ok(self.nodes[last].1.clone());
        }
        // Largest node index with abscissa <= x.
        let i = self.nodes.partition_point(|(nx, _)| nx <= x) - 1;
        let (x0, y0) = &self.nodes[i];
        let (x1, y1) = &self.nodes[i + 1];
        if x == x0 {
            return Ok(y0.clone());
        }
        Ok(y0 + &((y1 - y0) * (x - x0) / (x1 - x0)))
    }

    /// Exact composition `self ∘ inner` (apply `inner` first).
    ///
    /// The node set of the result is `inner`'s nodes merged with every
    /// preimage under `inner` of `self`'s node abscissas; flat segments of
    /// `inner` contribute no interior refinements.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        let mut xs: Vec<Rational> = Vec::new();
        for w in inner.nodes.windows(2) {
            let (ax, ay) = &w[0];
            let (bx, by) = &w[1];
            xs.push(ax.clone());
            if ay != by {
                let (lo, hi) = if ay < by { (ay, by) } else { (by, ay) };
                for (cx, _) in &self.nodes {
                    if cx > lo && cx < hi {
                        // inner is linear and non-flat here, one preimage.
                        xs.push(ax + &((cx - ay) * (bx - ax) / (by - ay)));
                    }
                }
            }
        }
        xs.push(Rational::one());
        xs.sort();
        xs.dedup();
        let nodes = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x).expect("abscissa in domain")).expect("value in domain");
                (x, y)
            })
            .collect();
        PLMap {
            nodes: canonicalize(nodes),
        }
    }

    /// Exact sup-norm distance `max |self - other|` over `[0,1]`.
    ///
    /// The difference is piecewise linear, so the maximum is attained at a
    /// node abscissa of one of the two maps.
    pub fn sup_distance(&self, other: &PLMap) -> Rational {
        let mut best = Rational::zero();
        for (x, _) in self.nodes.iter().chain(other.nodes.iter()) {
            let d = (self.eval(x).expect("node in domain")
                - other.eval(x).expect("node in domain"))
            .abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Exact image `[min f(j), max f(j)]` of a subinterval of the domain.
    pub fn image_interval(&self, j: &IntervalQ) -> Result<IntervalQ> {
        let mut lo = self.eval(&j.lo)?;
        let mut hi = self.eval(&j.hi)?;
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        for (x, y) in &self.nodes {
            if x > &j.lo && x < &j.hi {
                if y < &lo {
                    lo = y.clone();
                } else if y > &hi {
                    hi = y.clone();
                }
            }
        }
        IntervalQ::new(lo, hi)
    }

    /// Complete exact solution set of `f(x) = x`.
    pub fn fixed_points(&self) -> FixedPointSet {
        let mut points: Vec<Rational> = Vec::new();
        let mut segments: Vec<IntervalQ> = Vec::new();
        for w in self.nodes.windows(2) {
            let (ax, ay) = &w[0];
            let (bx, by) = &w[1];
            let dx = bx - ax;
            let dy = by - ay;
            if dy == dx {
                // Slope one: either the whole segment lies on the diagonal
                // or it misses it entirely.
                if ay == ax {
                    segments.push(IntervalQ::new(ax.clone(), bx.clone()).unwrap());
                }
            } else {
                let t = (ax - ay) / (&dy - &dx);
                if t >= Rational::zero() && t <= Rational::one() {
                    points.push(ax + &(&t * &dx));
                }
            }
        }
        // Merge diagonal segments sharing an endpoint.
        let mut merged: Vec<IntervalQ> = Vec::new();
        for seg in segments {
            match merged.last_mut() {
                Some(last) if *last.hi() == *seg.lo() => {
                    *last = IntervalQ::new(last.lo().clone(), seg.hi().clone()).unwrap();
                }
                _ => merged.push(seg),
            }
        }
        points.sort();
        points.dedup();
        points.retain(|p| !merged.iter().any(|s| s.contains(p)));
        FixedPointSet {
            points,
            segments: merged,
        }
    }

    /// True iff the image of `[0,1]` is all of `[0,1]`.
    pub fn is_surjective(&self) -> bool {
        self.image_interval(&IntervalQ::unit()).expect("unit interval") == IntervalQ::unit()
    }
}

/// Remove every interior node collinear with its neighbors. Single
/// monotone pass; abscissas are strictly increasing, so popping the middle
/// node of a collinear triple is always safe.
fn canonicalize(nodes: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len());
    for node in nodes {
        while out.len() >= 2 {
            let (ax, ay) = &out[out.len() - 2];
            let (bx, by) = &out[out.len() - 1];
            let (cx, cy) = &node;
            if (by - ay) * (cx - bx) == (cy - by) * (bx - ax) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(node);
    }
    out
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[")?;
        for (i, (x, y)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

// Wire format: array of [[x_num, x_den], [y_num, y_den]] string pairs.
impl Serialize for PLMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let encoded: Vec<[[String; 2]; 2]> = self
            .nodes
            .iter()
            .map(|(x, y)| {
                [
                    [x.numer().to_string(), x.denom().to_string()],
                    [y.numer().to_string(), y.denom().to_string()],
                ]
            })
            .collect();
        encoded.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let encoded: Vec<[[String; 2]; 2]> = Vec::deserialize(deserializer)?;
        let mut anchors = Vec::with_capacity(encoded.len());
        for [[xn, xd], [yn, yd]] in encoded {
            let x = Rational::parse(&format!("{xn}/{xd}")).map_err(D::Error::custom)?;
            let y = Rational::parse(&format!("{yn}/{yd}")).map_err(D::Error::custom)?;
            anchors.push((x, y));
        }
        PLMap::from_anchors(anchors).map_err(D::Error::custom)
    }
}
