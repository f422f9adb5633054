//! Exact causal arithmetic in inertial Minkowski charts `ℝ^{1,d}` (`d ∈ {1,2}`,
//! light speed 1) and in the open future cone `I⁺(0)`.
//!
//! Every predicate is a closed-form inequality evaluated as written: the
//! causal relation and `J±` are closed (`≥`), the chronological relation,
//! `I±` and diamonds are open (`>`/`<`). No tolerance is applied anywhere.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of spatial dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_usize(d: usize) -> Result<Dim> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

/// A spatial vector of dimension 1 or 2.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spatial {
    coords: [f64; 2],
    dim: Dim,
}

impl Spatial {
    pub fn d1(x: f64) -> Self {
        Spatial { coords: [x, 0.0], dim: Dim::One }
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Spatial { coords: [x, y], dim: Dim::Two }
    }

    pub fn zero(dim: Dim) -> Self {
        Spatial { coords: [0.0; 2], dim }
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self> {
        match *xs {
            [x] => Ok(Spatial::d1(x)),
            [x, y] => Ok(Spatial::d2(x, y)),
            _ => Err(Error::UnsupportedDimension(xs.len())),
        }
    }

    /// `r·u` where `u` is the unit vector at angle `theta` (ignored in d=1
    /// except for its sign convention: `theta = 0` is `+r`, `theta = π` is `−r`).
    pub fn polar(dim: Dim, r: f64, theta: f64) -> Self {
        match dim {
            Dim::One => Spatial::d1(if theta.cos() >= 0.0 { r } else { -r }),
            Dim::Two => Spatial::d2(r * theta.cos(), r * theta.sin()),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim.get()]
    }

    pub fn first(&self) -> f64 {
        self.coords[0]
    }

    /// Euclidean norm, computed without intermediate underflow.
    pub fn norm(&self) -> f64 {
        match self.dim {
            Dim::One => self.coords[0].abs(),
            Dim::Two => self.coords[0].hypot(self.coords[1]),
        }
    }

    pub fn dist(&self, other: &Spatial) -> f64 {
        (*self - *other).norm()
    }

    pub fn dot(&self, other: &Spatial) -> f64 {
        match self.dim {
            Dim::One => self.coords[0] * other.coords[0],
            Dim::Two => self.coords[0] * other.coords[0] + self.coords[1] * other.coords[1],
        }
    }

    pub fn scale(&self, s: f64) -> Spatial {
        Spatial { coords: [self.coords[0] * s, self.coords[1] * s], dim: self.dim }
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }
}

impl std::ops::Sub for Spatial {
    type Output = Spatial;
    fn sub(self, rhs: Spatial) -> Spatial {
        Spatial { coords: [self.coords[0] - rhs.coords[0], self.coords[1] - rhs.coords[1]], dim: self.dim }
    }
}

impl std::ops::Add for Spatial {
    type Output = Spatial;
    fn add(self, rhs: Spatial) -> Spatial {
        Spatial { coords: [self.coords[0] + rhs.coords[0], self.coords[1] + rhs.coords[1]], dim: self.dim }
    }
}

impl TryFrom<Vec<f64>> for Spatial {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Spatial::from_slice(&v)
    }
}

impl From<Spatial> for Vec<f64> {
    fn from(s: Spatial) -> Vec<f64> {
        s.as_slice().to_vec()
    }
}

impl fmt::Debug for Spatial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

/// An event `(t, x)` in an inertial chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: Spatial,
}

impl Point {
    pub fn new(t: f64, x: Spatial) -> Self {
        Point { t, x }
    }

    pub fn d1(t: f64, x: f64) -> Self {
        Point { t, x: Spatial::d1(x) }
    }

    pub fn d2(t: f64, x: f64, y: f64) -> Self {
        Point { t, x: Spatial::d2(x, y) }
    }

    pub fn dim(&self) -> Dim {
        self.x.dim()
    }

    pub fn radius(&self) -> f64 {
        self.x.norm()
    }

    pub fn time_reversed(&self) -> Point {
        Point { t: -self.t, x: self.x }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite()
    }

    /// Closed causal order `self ≼ q`: `t_q − t_p ≥ ‖x_q − x_p‖`.
    pub fn precedes(&self, q: &Point) -> bool {
        q.t - self.t >= q.x.dist(&self.x)
    }

    /// Strict chronological order `self ≪ q`: `t_q − t_p > ‖x_q − x_p‖`.
    pub fn chronologically_precedes(&self, q: &Point) -> bool {
        q.t - self.t > q.x.dist(&self.x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, x={:?})", self.t, self.x)
    }
}

/// The ambient globally hyperbolic spacetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "dim", rename_all = "kebab-case")]
pub enum Spacetime {
    /// All of `ℝ^{1,d}`.
    Minkowski(Dim),
    /// The open region `I⁺(0) = {t > ‖x‖}`. It is causally convex, so the
    /// restricted causal order is the ambient one.
    FutureCone(Dim),
}

impl Spacetime {
    pub fn dim(&self) -> Dim {
        match *self {
            Spacetime::Minkowski(d) | Spacetime::FutureCone(d) => d,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim() || !p.is_finite() {
            return false;
        }
        match self {
            Spacetime::Minkowski(_) => true,
            Spacetime::FutureCone(_) => p.t > p.x.norm(),
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        if !p.is_finite() {
            return Err(Error::NonFinite("point"));
        }
        if !self.contains(p) {
            return Err(Error::OutsideSpacetime { point: *p, spacetime: *self });
        }
        Ok(())
    }
}

impl fmt::Display for Spacetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spacetime::Minkowski(d) => write!(f, "Minkowski R^(1,{})", d.get()),
            Spacetime::FutureCone(d) => write!(f, "I+(0) in R^(1,{})", d.get()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Future,
    Past,
    Both,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Future => Direction::Past,
            Direction::Past => Direction::Future,
            Direction::Both => Direction::Both,
        }
    }
}

/// A finite, nonempty set of events standing in for a compact `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactCloud {
    points: Vec<Point>,
    ambient: Spacetime,
}

impl CompactCloud {
    pub fn new(points: Vec<Point>, ambient: Spacetime) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        for p in &points {
            ambient.check(p)?;
        }
        Ok(CompactCloud { points, ambient })
    }

    pub fn minkowski(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyCloud)?.dim();
        CompactCloud::new(points, Spacetime::Minkowski(dim))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ambient(&self) -> Spacetime {
        self.ambient
    }

    pub fn dim(&self) -> Dim {
        self.ambient.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership in `J⁺(K)`, `J⁻(K)` or `J(K)` without the ambient check.
    pub fn causal_contains(&self, p: &Point, direction: Direction) -> bool {
        self.points.iter().any(|k| match direction {
            Direction::Future => k.precedes(p),
            Direction::Past => p.precedes(k),
            Direction::Both => k.precedes(p) || p.precedes(k),
        })
    }

    pub fn chronological_contains(&self, p: &Point, direction: Direction) -> bool {
        self.points.iter().any(|k| match direction {
            Direction::Future => k.chronologically_precedes(p),
            Direction::Past => p.chronologically_precedes(k),
            Direction::Both => k.chronologically_precedes(p) || p.chronologically_precedes(k),
        })
    }

    /// Largest value of `‖x_k‖ + |t − t_k|`: the radius of the smallest
    /// origin-centred ball containing the slice `J(K) ∩ {t = const}`.
    pub fn slice_radius(&self, t: f64) -> f64 {
        self.points.iter().map(|k| k.x.norm() + (t - k.t).abs()).fold(0.0, f64::max)
    }

    pub fn time_reversed(&self) -> CompactCloud {
        let ambient = match self.ambient {
            // I⁺(0) maps to I⁻(0), which is not a supported ambient.
            Spacetime::FutureCone(d) => Spacetime::Minkowski(d),
            other => other,
        };
        CompactCloud { points: self.points.iter().map(Point::time_reversed).collect(), ambient }
    }
}

/// The domain of dependence `D(B)` of an open ball `B` on the flat leaf
/// `t = leaf_time`: a double cone ("diamond").
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondRegion {
    pub leaf_time: f64,
    pub center: Spatial,
    pub radius: f64,
}

impl DiamondRegion {
    pub fn new(leaf_time: f64, center: Spatial, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("diamond radius must be positive, got {radius}")));
        }
        if !leaf_time.is_finite() || !center.is_finite() {
            return Err(Error::NonFinite("diamond"));
        }
        Ok(DiamondRegion { leaf_time, center, radius })
    }

    pub fn contains(&self, p: &Point) -> bool {
        (p.t - self.leaf_time).abs() + p.x.dist(&self.center) < self.radius
    }
}

fn check_pair(p: &Point, q: &Point, st: &Spacetime) -> Result<()> {
    st.check(p)?;
    st.check(q)
}

/// `p ≼ q` in the closed causal order of `st`.
pub fn causally_precedes(p: &Point, q: &Point, st: &Spacetime) -> Result<bool> {
    check_pair(p, q, st)?;
    Ok(p.precedes(q))
}

/// Membership of `p` in `J⁺(K)`, `J⁻(K)` or `J(K)`.
pub fn in_causal_set(k: &CompactCloud, p: &Point, direction: Direction) -> Result<bool> {
    k.ambient().check(p)?;
    Ok(k.causal_contains(p, direction))
}

/// Membership of `p` in `I⁺(K)`, `I⁻(K)` or `I(K)`.
pub fn in_chronological_set(k: &CompactCloud, p: &Point, direction: Direction) -> Result<bool> {
    k.ambient().check(p)?;
    Ok(k.chronological_contains(p, direction))
}

pub fn in_domain_of_dependence(d: &DiamondRegion, p: &Point) -> Result<bool> {
    if p.dim() != d.center.dim() {
        return Err(Error::DimensionMismatch { expected: d.center.dim(), found: p.dim() });
    }
    if !p.is_finite() {
        return Err(Error::NonFinite("point"));
    }
    Ok(d.contains(p))
}
