//! Exact 2-D convex polytopes over rationals.
//!
//! A [`RateRegion`] is the intersection of a finite halfplane system with the
//! non-negative quadrant. Vertices are enumerated by pairwise line
//! intersection followed by a feasibility filter, which is plenty for the
//! dozen or so constraints a capacity region carries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `a1·R1 + a2·R2 ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a1: Rational,
    pub a2: Rational,
    pub b: Rational,
}

impl HalfPlane {
    pub fn new(a1: Rational, a2: Rational, b: Rational) -> Result<Self> {
        if a1.is_zero() && a2.is_zero() {
            return Err(Error::DegenerateHalfPlane);
        }
        Ok(HalfPlane { a1, a2, b })
    }

    /// Integer-coefficient convenience constructor.
    pub fn int(a1: i64, a2: i64, b: i64) -> Result<Self> {
        HalfPlane::new(a1.into(), a2.into(), b.into())
    }

    pub fn eval(&self, p: &Point) -> Rational {
        &self.a1 * &p.r1 + &self.a2 * &p.r2
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p) <= self.b
    }

    pub fn is_tight(&self, p: &Point) -> bool {
        self.eval(p) == self.b
    }

    /// Positive rescaling so that the first nonzero normal entry is ±1.
    fn normalized(&self) -> HalfPlane {
        let s = if !self.a1.is_zero() { self.a1.abs() } else { self.a2.abs() };
        HalfPlane { a1: &self.a1 / &s, a2: &self.a2 / &s, b: &self.b / &s }
    }

    fn intersect(&self, other: &HalfPlane) -> Option<Point> {
        let det = &self.a1 * &other.a2 - &self.a2 * &other.a1;
        if det.is_zero() {
            return None;
        }
        let r1 = (&self.b * &other.a2 - &self.a2 * &other.b) / det.clone();
        let r2 = (&self.a1 * &other.b - &self.b * &other.a1) / det;
        Some(Point { r1, r2 })
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·R1 + {}·R2 <= {}", self.a1, self.a2, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub r1: Rational,
    pub r2: Rational,
}

impl Point {
    pub fn new(r1: impl Into<Rational>, r2: impl Into<Rational>) -> Self {
        Point { r1: r1.into(), r2: r2.into() }
    }

    pub fn coord(&self, axis: Axis) -> &Rational {
        match axis {
            Axis::R1 => &self.r1,
            Axis::R2 => &self.r2,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    R1,
    R2,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::R1 => Axis::R2,
            Axis::R2 => Axis::R1,
        }
    }
}

/// A slice of a region along one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceMax {
    Value(Rational),
    Infeasible,
}

impl SliceMax {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            SliceMax::Value(v) => Some(v),
            SliceMax::Infeasible => None,
        }
    }
}

/// Bounded convex region of rate pairs in the non-negative quadrant.
///
/// Vertices run counter-clockwise from the lexicographically smallest one;
/// equality compares vertex lists only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateRegion {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<Point>,
}

impl PartialEq for RateRegion {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for RateRegion {}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.r1 - &o.r1) * (&b.r2 - &o.r2) - (&a.r2 - &o.r2) * (&b.r1 - &o.r1)
}

/// Strict convex hull (no collinear points), CCW from the lexicographic minimum.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl RateRegion {
    /// Intersects `hs` with `R1 ≥ 0, R2 ≥ 0` and canonicalizes.
    pub fn from_halfplanes(hs: &[HalfPlane]) -> Result<RateRegion> {
        let mut all: Vec<HalfPlane> = Vec::with_capacity(hs.len() + 2);
        for h in hs {
            if h.a1.is_zero() && h.a2.is_zero() {
                return Err(Error::DegenerateHalfPlane);
            }
            all.push(h.normalized());
        }
        all.push(HalfPlane::int(-1, 0, 0)?);
        all.push(HalfPlane::int(0, -1, 0)?);
        all.sort();
        all.dedup();

        if all.iter().any(|h| h.b.is_negative()) {
            return Err(Error::Infeasible);
        }
        if is_unbounded(&all) {
            return Err(Error::Unbounded);
        }

        let mut candidates = Vec::new();
        for (k, h) in all.iter().enumerate() {
            for g in &all[k + 1..] {
                if let Some(p) = h.intersect(g) {
                    if all.iter().all(|c| c.contains(&p)) {
                        candidates.push(p);
                    }
                }
            }
        }
        let vertices = convex_hull(candidates);

        let halfplanes = if vertices.len() >= 3 {
            // facets in edge order
            let n = vertices.len();
            (0..n)
                .filter_map(|k| {
                    let (u, v) = (&vertices[k], &vertices[(k + 1) % n]);
                    all.iter().find(|h| h.is_tight(u) && h.is_tight(v)).cloned()
                })
                .collect()
        } else {
            all.into_iter()
                .filter(|h| vertices.iter().any(|v| h.is_tight(v)))
                .collect()
        };
        Ok(RateRegion { halfplanes, vertices })
    }

    /// The point region `{(0, 0)}`.
    pub fn origin() -> RateRegion {
        RateRegion::from_halfplanes(&[HalfPlane::int(1, 0, 0).unwrap(), HalfPlane::int(0, 1, 0).unwrap()])
            .expect("origin region")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.halfplanes.iter().all(|h| h.contains(p))
    }

    /// `max c1·R1 + c2·R2` over the region.
    pub fn sup_linear(&self, c1: &Rational, c2: &Rational) -> Rational {
        self.vertices
            .iter()
            .map(|v| c1 * &v.r1 + c2 * &v.r2)
            .max()
            .expect("region has at least one vertex")
    }

    /// Largest value of `axis` over the region.
    pub fn axis_max(&self, axis: Axis) -> Rational {
        self.vertices.iter().map(|v| v.coord(axis).clone()).max().expect("nonempty")
    }

    /// Max of the free coordinate over the slice `{fixed_axis = v}`.
    pub fn boundary_max(&self, fixed_axis: Axis, v: &Rational) -> SliceMax {
        let mut lo = Rational::zero();
        let mut hi: Option<Rational> = None;
        for h in &self.halfplanes {
            let (af, ao) = match fixed_axis {
                Axis::R1 => (&h.a1, &h.a2),
                Axis::R2 => (&h.a2, &h.a1),
            };
            let rest = &h.b - &(af * v);
            if ao.is_zero() {
                if rest.is_negative() {
                    return SliceMax::Infeasible;
                }
            } else if ao.is_positive() {
                let bound = rest / ao.clone();
                hi = Some(match hi {
                    Some(x) => x.min(bound),
                    None => bound,
                });
            } else {
                lo = lo.max(rest / ao.clone());
            }
        }
        match hi {
            Some(hi) if hi >= lo => SliceMax::Value(hi),
            Some(_) => SliceMax::Infeasible,
            // bounded regions always constrain the free axis from above
            None => unreachable!("region is bounded"),
        }
    }

    pub fn subset_of(&self, other: &RateRegion) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Reflection across `R1 = R2`.
    pub fn mirrored(&self) -> RateRegion {
        let hs: Vec<HalfPlane> = self
            .halfplanes
            .iter()
            .map(|h| HalfPlane { a1: h.a2.clone(), a2: h.a1.clone(), b: h.b.clone() })
            .collect();
        RateRegion::from_halfplanes(&hs).expect("mirror of a valid region")
    }

    /// Vertices rendered as `(p/q, p/q)` pairs.
    pub fn canonical_text(&self) -> String {
        self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for RateRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// True when some nonzero direction `d ≥ 0` has `a·d ≤ 0` for every constraint.
fn is_unbounded(hs: &[HalfPlane]) -> bool {
    let mut dirs = vec![Point::new(1i64, 0i64), Point::new(0i64, 1i64)];
    for h in hs {
        dirs.push(Point { r1: h.a2.clone(), r2: -&h.a1 });
        dirs.push(Point { r1: -&h.a2, r2: h.a1.clone() });
    }
    dirs.into_iter()
        .filter(|d| !d.r1.is_negative() && !d.r2.is_negative() && !(d.r1.is_zero() && d.r2.is_zero()))
        .any(|d| hs.iter().all(|h| !h.eval(&d).is_positive()))
}

pub fn from_halfplanes(hs: &[HalfPlane]) -> Result<RateRegion> {
    RateRegion::from_halfplanes(hs)
}

pub fn sup_linear(r: &RateRegion, c1: &Rational, c2: &Rational) -> Rational {
    r.sup_linear(c1, c2)
}

pub fn boundary_max(r: &RateRegion, fixed_axis: Axis, v: &Rational) -> SliceMax {
    r.boundary_max(fixed_axis, v)
}

pub fn equals(a: &RateRegion, b: &RateRegion) -> bool {
    a == b
}

pub fn subset(a: &RateRegion, b: &RateRegion) -> bool {
    a.subset_of(b)
}
