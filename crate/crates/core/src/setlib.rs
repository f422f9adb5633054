//! Closed sets given by exact membership predicates, together with the
//! closed-form slice and extent information the classifier can exploit.
//!
//! Sets live in the full Minkowski chart of dimension `1 + d`. The hyperbola
//! band is a subset of `I⁺(0)` (its lower edge satisfies
//! `√(1+r²) − 1/(2√(1+r²)) > r`) but is tagged with the full chart.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::minkowski::{CompactCloud, Dim, Direction, Point, Spacetime, Spatial};
use crate::surfaces::{seeded, Foliation, SurfaceGraph, Witness};

/// Largest exponent used by the samplers; beyond it `e^{−x}` leaves the
/// normal `f64` range.
const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    /// `lower ≤ e^{rate‖x‖²}·t ≤ upper`.
    GaussianBand { lower: f64, upper: f64, rate: f64 },
    /// `|t − √(1+r²)| ≤ 1/(2√(1+r²))`.
    HyperbolaBand,
    /// `t = v·x₁`.
    BoostPlane { velocity: f64 },
    /// A finite set of events.
    Cloud { points: Vec<Point> },
    /// `J⁺(K)`, `J⁻(K)` or `J(K)`.
    CausalHull { generators: CompactCloud, direction: Direction },
    /// The image of the inner set under `t ↦ −t`.
    Mirrored(Box<SetKind>),
}

/// Intersection of a set with a leaf `t = const`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeafSlice {
    Empty,
    /// Every member on the leaf has `‖x‖ ≤ r`.
    Within(f64),
}

/// Intersection of a set with the vertical line through `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeExtent {
    Empty,
    Interval(f64, f64),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSet {
    kind: SetKind,
    dim: Dim,
    label: String,
}

impl AnalyticSet {
    pub fn new(kind: SetKind, dim: Dim, label: impl Into<String>) -> Result<Self> {
        check_kind(&kind, dim)?;
        Ok(AnalyticSet { kind, dim, label: label.into() })
    }

    pub fn causal_hull(generators: CompactCloud, direction: Direction) -> Self {
        let dim = generators.dim();
        let label = match direction {
            Direction::Future => "J+(K)",
            Direction::Past => "J-(K)",
            Direction::Both => "J(K)",
        };
        AnalyticSet { kind: SetKind::CausalHull { generators, direction }, dim, label: label.into() }
    }

    pub fn cloud(points: &CompactCloud) -> Self {
        AnalyticSet { kind: SetKind::Cloud { points: points.points().to_vec() }, dim: points.dim(), label: "cloud".into() }
    }

    /// The time mirror `{(−t, x) : (t, x) ∈ A}`.
    pub fn mirrored(&self) -> Self {
        let kind = match &self.kind {
            SetKind::Mirrored(inner) => (**inner).clone(),
            other => SetKind::Mirrored(Box::new(other.clone())),
        };
        let label = match self.label.strip_prefix("mirror:") {
            Some(inner) => inner.to_string(),
            None => format!("mirror:{}", self.label),
        };
        AnalyticSet { kind, dim: self.dim, label }
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient(&self) -> Spacetime {
        Spacetime::Minkowski(self.dim)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim && kind_contains(&self.kind, p)
    }

    /// Membership of `(±e^{ln_abs_t}, x)` decided from `ln |t|` and the sign
    /// alone. Only sets whose predicate is multiplicative in `t` answer.
    pub fn contains_log_time(&self, negative: bool, ln_abs_t: f64, x: &Spatial) -> Option<bool> {
        fn go(kind: &SetKind, negative: bool, l: f64, x: &Spatial) -> Option<bool> {
            match kind {
                SetKind::GaussianBand { lower, upper, rate } => {
                    let e = l + rate * x.dot(x);
                    Some(!negative && e >= lower.ln() && e <= upper.ln())
                }
                SetKind::Mirrored(inner) => go(inner, !negative, l, x),
                _ => None,
            }
        }
        go(&self.kind, negative, ln_abs_t, x)
    }

    /// Re-checks a witness, using its log time when it carries one.
    pub fn witness_is_member(&self, w: &Witness) -> bool {
        let neg = w.point.t.is_sign_negative();
        match w.log_abs_t.and_then(|l| self.contains_log_time(neg, l, &w.point.x)) {
            Some(m) => m,
            None => self.contains(&w.point),
        }
    }

    /// The point of the graph `s` above `x`, if it belongs to the set.
    pub fn graph_witness(&self, s: &SurfaceGraph, x: &Spatial) -> Option<Witness> {
        let point = s.point_at(*x);
        if self.contains_log_time(false, 0.0, x).is_some() {
            let l = s.log_abs_eval(x)?;
            let member = self.contains_log_time(point.t.is_sign_negative(), l, x)?;
            return member.then_some(Witness { point, log_abs_t: Some(l) });
        }
        self.contains(&point).then(|| Witness::exact(point))
    }

    /// Closed-form radius bound of the slice by the leaf `t = const`.
    /// `None` when no finite bound exists or none is known.
    pub fn leaf_slice(&self, t: f64) -> Option<LeafSlice> {
        kind_leaf_slice(&self.kind, self.dim, t)
    }

    pub fn time_extent_at(&self, x: &Spatial) -> TimeExtent {
        kind_time_extent(&self.kind, x)
    }

    /// The set as a graph `t = f(x)`, for sets that are one.
    pub fn graph_form(&self) -> Option<SurfaceGraph> {
        let v = match &self.kind {
            SetKind::BoostPlane { velocity } => *velocity,
            SetKind::Mirrored(inner) => match **inner {
                SetKind::BoostPlane { velocity } => -velocity,
                _ => return None,
            },
            _ => return None,
        };
        SurfaceGraph::plane(axis(self.dim).scale(v), 0.0).ok()
    }

    /// A compact generating cloud when the set is built from one.
    pub fn generator_hint(&self) -> Option<CompactCloud> {
        kind_generators(&self.kind)
    }

    /// `count` members with `‖x‖ ≤ radius`. Radii are uniform in
    /// `[0, radius]`; directions uniform (± in one dimension).
    pub fn sample(&self, radius: f64, count: usize, seed: u64) -> Vec<Point> {
        self.sample_shell(0.0, radius, count, seed)
    }

    /// `count` draws with `lo ≤ ‖x‖ ≤ hi`; draws that do not land in the set
    /// are dropped, so every returned point is a member.
    pub fn sample_shell(&self, lo: f64, hi: f64, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = seeded(seed);
        if let Some(pts) = self.finite_members() {
            return pts.into_iter().filter(|p| (lo..=hi).contains(&p.x.norm())).collect();
        }
        (0..count)
            .filter_map(|_| {
                let r = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                self.draw(&mut rng, r)
            })
            .collect()
    }

    /// Members with `‖x‖ = r` exactly (up to rounding of the direction in two dimensions).
    pub fn sample_at_radius(&self, r: f64, count: usize, seed: u64) -> Vec<Point> {
        self.sample_shell(r, r, count, seed)
    }

    pub fn finite_members(&self) -> Option<Vec<Point>> {
        fn go(kind: &SetKind) -> Option<Vec<Point>> {
            match kind {
                SetKind::Cloud { points } => Some(points.clone()),
                SetKind::Mirrored(inner) => go(inner).map(|v| v.iter().map(Point::time_reversed).collect()),
                _ => None,
            }
        }
        go(&self.kind)
    }

    fn draw(&self, rng: &mut ChaCha8Rng, r: f64) -> Option<Point> {
        let x = random_direction(rng, self.dim).scale(r);
        let t = kind_draw_time(&self.kind, rng, &x)?;
        let p = Point::new(t, x);
        self.contains(&p).then_some(p)
    }
}

impl fmt::Display for AnalyticSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (d={})", self.label, self.dim.get())
    }
}

fn check_kind(kind: &SetKind, dim: Dim) -> Result<()> {
    match kind {
        SetKind::GaussianBand { lower, upper, rate } => {
            if !(*lower > 0.0 && lower <= upper && upper.is_finite() && *rate > 0.0 && rate.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "gaussian band needs 0 < lower <= upper and rate > 0, got ({lower}, {upper}, {rate})"
                )));
            }
            Ok(())
        }
        SetKind::HyperbolaBand => Ok(()),
        SetKind::BoostPlane { velocity } => {
            if !(velocity.abs() < 1.0) {
                return Err(Error::InvalidParameter(format!("boost velocity must satisfy |v| < 1, got {velocity}")));
            }
            Ok(())
        }
        SetKind::Cloud { points } => {
            if points.is_empty() {
                return Err(Error::EmptyCloud);
            }
            match points.iter().find(|p| p.dim() != dim) {
                Some(p) => Err(Error::DimensionMismatch { expected: dim, found: p.dim() }),
                None => Ok(()),
            }
        }
        SetKind::CausalHull { generators, .. } => {
            if generators.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: generators.dim() });
            }
            Ok(())
        }
        SetKind::Mirrored(inner) => check_kind(inner, dim),
    }
}

fn kind_contains(kind: &SetKind, p: &Point) -> bool {
    match kind {
        SetKind::GaussianBand { lower, upper, rate } => {
            if !(p.t > 0.0) {
                return false;
            }
            let e = rate * p.x.dot(&p.x);
            let product = e.exp() * p.t;
            if e <= MAX_EXPONENT && p.t.is_normal() && product.is_finite() {
                product >= *lower && product <= *upper
            } else {
                let l = p.t.ln() + e;
                l >= lower.ln() && l <= upper.ln()
            }
        }
        SetKind::HyperbolaBand => {
            let c = 1f64.hypot(p.x.norm());
            (p.t - c).abs() <= 0.5 / c
        }
        SetKind::BoostPlane { velocity } => p.t == velocity * p.x.first(),
        SetKind::Cloud { points } => points.contains(p),
        SetKind::CausalHull { generators, direction } => generators.causal_contains(p, *direction),
        SetKind::Mirrored(inner) => kind_contains(inner, &p.time_reversed()),
    }
}

fn kind_leaf_slice(kind: &SetKind, dim: Dim, t: f64) -> Option<LeafSlice> {
    Some(match kind {
        SetKind::GaussianBand { upper, rate, .. } => {
            if !(t > 0.0) {
                return Some(LeafSlice::Empty);
            }
            let top = (upper / t).ln() / rate;
            if top < 0.0 {
                LeafSlice::Empty
            } else {
                LeafSlice::Within(top.sqrt())
            }
        }
        SetKind::HyperbolaBand => {
            if t < 0.5 {
                LeafSlice::Empty
            } else {
                let c = 0.5 * (t + (t * t + 2.0).sqrt());
                LeafSlice::Within(((c - 1.0) * (c + 1.0)).max(0.0).sqrt())
            }
        }
        SetKind::BoostPlane { velocity } => {
            if dim != Dim::One || *velocity == 0.0 {
                return (t != 0.0).then_some(LeafSlice::Empty);
            }
            LeafSlice::Within((t / velocity).abs())
        }
        SetKind::Cloud { points } => points
            .iter()
            .filter(|p| p.t == t)
            .map(|p| p.x.norm())
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
            .map_or(LeafSlice::Empty, LeafSlice::Within),
        SetKind::CausalHull { generators, direction } => generators
            .points()
            .iter()
            .filter_map(|k| {
                let dt = match direction {
                    Direction::Future => t - k.t,
                    Direction::Past => k.t - t,
                    Direction::Both => (t - k.t).abs(),
                };
                (dt >= 0.0).then(|| k.x.norm() + dt)
            })
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
            .map_or(LeafSlice::Empty, LeafSlice::Within),
        SetKind::Mirrored(inner) => return kind_leaf_slice(inner, dim, -t),
    })
}

fn kind_time_extent(kind: &SetKind, x: &Spatial) -> TimeExtent {
    match kind {
        SetKind::GaussianBand { lower, upper, rate } => {
            let s = (-rate * x.dot(x)).exp();
            TimeExtent::Interval(lower * s, upper * s)
        }
        SetKind::HyperbolaBand => {
            let c = 1f64.hypot(x.norm());
            TimeExtent::Interval(c - 0.5 / c, c + 0.5 / c)
        }
        SetKind::BoostPlane { velocity } => {
            let t = velocity * x.first();
            TimeExtent::Interval(t, t)
        }
        SetKind::Cloud { points } => {
            let ts: Vec<f64> = points.iter().filter(|p| p.x == *x).map(|p| p.t).collect();
            if ts.is_empty() {
                TimeExtent::Empty
            } else {
                TimeExtent::Interval(ts.iter().copied().fold(f64::INFINITY, f64::min), ts.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            }
        }
        SetKind::CausalHull { .. } => TimeExtent::Unbounded,
        SetKind::Mirrored(inner) => match kind_time_extent(inner, x) {
            TimeExtent::Interval(lo, hi) => TimeExtent::Interval(-hi, -lo),
            other => other,
        },
    }
}

fn kind_generators(kind: &SetKind) -> Option<CompactCloud> {
    match kind {
        SetKind::Cloud { points } => CompactCloud::minkowski(points.clone()).ok(),
        SetKind::CausalHull { generators, .. } => Some(generators.clone()),
        SetKind::Mirrored(inner) => kind_generators(inner).map(|k| k.time_reversed()),
        _ => None,
    }
}

fn kind_draw_time(kind: &SetKind, rng: &mut ChaCha8Rng, x: &Spatial) -> Option<f64> {
    match kind {
        SetKind::GaussianBand { lower, upper, rate } => {
            let e = rate * x.dot(x);
            if e > MAX_EXPONENT {
                return None;
            }
            let u: f64 = rng.gen_range(0.02..=0.98);
            Some((lower + u * (upper - lower)).ln().exp() * (-e).exp())
        }
        SetKind::HyperbolaBand => {
            let c = 1f64.hypot(x.norm());
            let s: f64 = rng.gen_range(-0.98..=0.98);
            Some(c + s * 0.5 / c)
        }
        SetKind::BoostPlane { velocity } => Some(velocity * x.first()),
        SetKind::Cloud { .. } => None,
        SetKind::CausalHull { generators, direction } => {
            let k = generators.points()[rng.gen_range(0..generators.len())];
            let reach = x.dist(&k.x) + rng.gen_range(0.01..=1.0) * (1.0 + x.norm());
            let future = match direction {
                Direction::Future => true,
                Direction::Past => false,
                Direction::Both => rng.gen_bool(0.5),
            };
            Some(if future { k.t + reach } else { k.t - reach })
        }
        SetKind::Mirrored(inner) => kind_draw_time(inner, rng, x).map(|t| -t),
    }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: Dim) -> Spatial {
    match dim {
        Dim::One => Spatial::d1(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }),
        Dim::Two => {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Spatial::d2(th.cos(), th.sin())
        }
    }
}

fn axis(dim: Dim) -> Spatial {
    match dim {
        Dim::One => Spatial::d1(1.0),
        Dim::Two => Spatial::d2(1.0, 0.0),
    }
}

/// `2/3 ≤ e^{‖x‖²} t ≤ 4/3` in one spatial dimension.
pub fn gaussian_band() -> AnalyticSet {
    gaussian_band_in(Dim::One)
}

pub fn gaussian_band_in(dim: Dim) -> AnalyticSet {
    AnalyticSet { kind: SetKind::GaussianBand { lower: 2.0 / 3.0, upper: 4.0 / 3.0, rate: 1.0 }, dim, label: "gaussian_band".into() }
}

/// `t = e^{−‖x‖²}`.
pub fn gaussian_surface() -> SurfaceGraph {
    gaussian_surface_in(Dim::One)
}

pub fn gaussian_surface_in(dim: Dim) -> SurfaceGraph {
    SurfaceGraph::gaussian(dim, 1.0, 1.0).expect("the unit gaussian is spacelike")
}

pub fn hyperbola_band() -> AnalyticSet {
    hyperbola_band_in(Dim::One)
}

pub fn hyperbola_band_in(dim: Dim) -> AnalyticSet {
    AnalyticSet { kind: SetKind::HyperbolaBand, dim, label: "hyperbola_band".into() }
}

/// Hyperboloids `t = √(R² + ‖x‖²)`, `R > 0`, foliating `I⁺(0)`.
pub fn hyperbola_foliation() -> Foliation {
    Foliation::hyperbolic(Dim::One)
}

pub fn hyperbola_foliation_in(dim: Dim) -> Foliation {
    Foliation::hyperbolic(dim)
}

/// The boosted leaf `t = v·x₁` as a set and as a spacelike graph.
pub fn boost_plane(v: f64) -> Result<(AnalyticSet, SurfaceGraph)> {
    boost_plane_in(Dim::One, v)
}

pub fn boost_plane_in(dim: Dim, v: f64) -> Result<(AnalyticSet, SurfaceGraph)> {
    let set = AnalyticSet::new(SetKind::BoostPlane { velocity: v }, dim, format!("boost_plane({v})"))?;
    let graph = set.graph_form().expect("boost planes have a graph form");
    Ok((set, graph))
}

/// `(sinh τ, cosh τ · x̂)`: the unit spacelike hyperbola through `(0, x̂)`,
/// an inextendible timelike curve outside `I⁺(0)`.
pub fn boost_curve(x_unit: Spatial, tau: f64) -> Result<Point> {
    if !tau.is_finite() || !x_unit.is_finite() {
        return Err(Error::NonFinite("boost curve"));
    }
    if (x_unit.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("direction {:?} is not a unit vector", x_unit)));
    }
    Ok(Point::new(tau.sinh(), x_unit.scale(tau.cosh())))
}
