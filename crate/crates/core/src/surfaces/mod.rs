//! Hypersurfaces `t = f(x)` certified by their Lipschitz constant, the
//! envelope constructions `Σ₋`/`Σ₊` built from causal cones of a cloud,
//! foliations, exhaustions, the surface deformation through prescribed
//! events, and slice bounds `A ∩ Σ`.

mod deform;
mod slice;

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{CompactCloud, Dim, Point, Spacetime, Spatial};

pub use deform::deform_surface;
pub use slice::{slice_bound, RadiusSchedule, SearchSpec, SliceBound, Witness};

/// Slack allowed on the Lipschitz bound of achronal graphs. The envelope
/// formulas are exactly 1-Lipschitz; this only absorbs rounding.
pub const ACHRONAL_TOLERANCE: f64 = 1e-12;

/// Closed-form height functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Height {
    /// The standard leaf `t = const`.
    Flat { t: f64 },
    /// A boosted plane `t = slope · x + offset`.
    Plane { slope: Spatial, offset: f64 },
    /// `amplitude · exp(−rate ‖x‖²) + offset`.
    Gaussian { amplitude: f64, rate: f64, offset: f64 },
    /// The hyperboloid leaf `t = √(R² + ‖x‖²)` of `I⁺(0)`.
    Hyperboloid { radius: f64 },
    /// Linear interpolation through `(x, t)` knots sorted by `x`, extended
    /// by the end values. One spatial dimension only.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// `min(base(x), min_k (t_k + ‖x − x_k‖))`.
    LowerEnvelope { apexes: Vec<Point>, base: Box<Height> },
    /// `max(base(x), max_k (t_k − ‖x − x_k‖))`.
    UpperEnvelope { apexes: Vec<Point>, base: Box<Height> },
}

impl Height {
    pub fn eval(&self, x: &Spatial) -> f64 {
        match self {
            Height::Flat { t } => *t,
            Height::Plane { slope, offset } => slope.dot(x) + offset,
            Height::Gaussian { amplitude, rate, offset } => {
                let bump = amplitude * (-rate * x.dot(x)).exp();
                if *offset == 0.0 {
                    bump
                } else {
                    bump + offset
                }
            }
            Height::Hyperboloid { radius } => radius.hypot(x.norm()),
            Height::PiecewiseLinear { knots } => eval_piecewise(knots, x.first()),
            Height::LowerEnvelope { apexes, base } => apexes
                .iter()
                .map(|k| k.t + x.dist(&k.x))
                .fold(base.eval(x), f64::min),
            Height::UpperEnvelope { apexes, base } => apexes
                .iter()
                .map(|k| k.t - x.dist(&k.x))
                .fold(base.eval(x), f64::max),
        }
    }

    /// `ln |f(x)|` computed without forming `f(x)` when the closed form
    /// allows it, so that far-out Gaussian heights below the `f64` range stay
    /// usable. The sign is that of [`Height::eval`], which keeps the sign bit
    /// even when the value underflows to zero.
    pub fn log_abs_eval(&self, x: &Spatial) -> Option<f64> {
        match self {
            Height::Gaussian { amplitude, rate, offset } if *offset == 0.0 && *amplitude != 0.0 => {
                Some(amplitude.abs().ln() - rate * x.dot(x))
            }
            _ => {
                let v = self.eval(x);
                (v != 0.0).then(|| v.abs().ln())
            }
        }
    }

    /// Global Lipschitz constant of the closed form (a supremum for the
    /// hyperboloid, which approaches 1 without attaining it).
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            Height::Flat { .. } => 0.0,
            Height::Plane { slope, .. } => slope.norm(),
            Height::Gaussian { amplitude, rate, .. } => {
                amplitude.abs() * (2.0 * rate).sqrt() * (-0.5f64).exp()
            }
            Height::Hyperboloid { .. } => 1.0,
            Height::PiecewiseLinear { knots } => knots
                .windows(2)
                .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
                .fold(0.0, f64::max),
            Height::LowerEnvelope { base, .. } | Height::UpperEnvelope { base, .. } => {
                base.lipschitz_bound().max(1.0)
            }
        }
    }

    /// The same height raised by `dt`, when the closed form has an offset.
    pub fn shifted(&self, dt: f64) -> Option<Height> {
        match self {
            Height::Flat { t } => Some(Height::Flat { t: t + dt }),
            Height::Plane { slope, offset } => Some(Height::Plane { slope: *slope, offset: offset + dt }),
            Height::Gaussian { amplitude, rate, offset } => {
                Some(Height::Gaussian { amplitude: *amplitude, rate: *rate, offset: offset + dt })
            }
            _ => None,
        }
    }

    fn check_dim(&self, dim: Dim) -> Result<()> {
        let mismatch = |found| Err(Error::DimensionMismatch { expected: dim, found });
        match self {
            Height::Plane { slope, .. } if slope.dim() != dim => mismatch(slope.dim()),
            Height::PiecewiseLinear { knots } => {
                if dim != Dim::One {
                    return mismatch(Dim::One);
                }
                if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return Err(Error::InvalidParameter("piecewise-linear knots must be strictly increasing".into()));
                }
                Ok(())
            }
            Height::LowerEnvelope { apexes, base } | Height::UpperEnvelope { apexes, base } => {
                if let Some(p) = apexes.iter().find(|p| p.dim() != dim) {
                    return mismatch(p.dim());
                }
                base.check_dim(dim)
            }
            _ => Ok(()),
        }
    }
}

fn eval_piecewise(knots: &[(f64, f64)], x: f64) -> f64 {
    let (Some(first), Some(last)) = (knots.first(), knots.last()) else {
        return 0.0;
    };
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    // first knot with abscissa >= x
    let i = knots.partition_point(|k| k.0 < x);
    let (x1, t1) = knots[i];
    if x1 == x {
        return t1;
    }
    let (x0, t0) = knots[i - 1];
    t0 + (t1 - t0) * (x - x0) / (x1 - x0)
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Flat { t } => write!(f, "leaf t={t}"),
            Height::Plane { slope, offset } => write!(f, "plane t={:?}·x{:+}", slope, offset),
            Height::Gaussian { amplitude, rate, offset } => {
                write!(f, "gaussian t={amplitude}·exp(-{rate}|x|^2){offset:+}")
            }
            Height::Hyperboloid { radius } => write!(f, "hyperboloid t=sqrt({radius}^2+|x|^2)"),
            Height::PiecewiseLinear { knots } => write!(f, "piecewise-linear ({} knots)", knots.len()),
            Height::LowerEnvelope { apexes, base } => {
                write!(f, "lower envelope of {} cones over [{base}]", apexes.len())
            }
            Height::UpperEnvelope { apexes, base } => {
                write!(f, "upper envelope of {} cones over [{base}]", apexes.len())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    /// Lipschitz constant `< 1`.
    Spacelike,
    /// Lipschitz constant `≤ 1`.
    Achronal,
}

/// Sampling plan for Lipschitz estimates: a regular grid on `[−radius, radius]^d`
/// plus `count` seeded random pairs at separations from `radius/1000` to `2·radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub radius: f64,
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { radius: 64.0, count: 512, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    pub estimate: f64,
    pub witness: (Spatial, Spatial),
}

/// A graph hypersurface `{(f(x), x)}` over all of space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGraph {
    height: Height,
    kind: SurfaceKind,
    ambient: Spacetime,
}

impl SurfaceGraph {
    /// Validates the Lipschitz certificate for `kind` and, for `I⁺(0)`, that
    /// sampled graph points stay inside the cone.
    pub fn new(height: Height, kind: SurfaceKind, ambient: Spacetime) -> Result<Self> {
        height.check_dim(ambient.dim())?;
        let s = SurfaceGraph { height, kind, ambient };
        s.validate(&SampleSpec::default())?;
        Ok(s)
    }

    pub fn flat(dim: Dim, t: f64) -> Self {
        SurfaceGraph { height: Height::Flat { t }, kind: SurfaceKind::Spacelike, ambient: Spacetime::Minkowski(dim) }
    }

    pub fn plane(slope: Spatial, offset: f64) -> Result<Self> {
        if !(slope.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("plane slope {:?} is not spacelike", slope)));
        }
        let dim = slope.dim();
        Ok(SurfaceGraph { height: Height::Plane { slope, offset }, kind: SurfaceKind::Spacelike, ambient: Spacetime::Minkowski(dim) })
    }

    pub fn gaussian(dim: Dim, amplitude: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::InvalidParameter(format!("gaussian rate must be positive, got {rate}")));
        }
        let height = Height::Gaussian { amplitude, rate, offset: 0.0 };
        if !(height.lipschitz_bound() < 1.0) {
            return Err(Error::NotCausalGraph { kind: "spacelike", estimate: height.lipschitz_bound() });
        }
        Ok(SurfaceGraph { height, kind: SurfaceKind::Spacelike, ambient: Spacetime::Minkowski(dim) })
    }

    pub fn validate(&self, spec: &SampleSpec) -> Result<()> {
        let est = lipschitz_estimate(self, spec)?;
        match self.kind {
            SurfaceKind::Spacelike if !(est.estimate < 1.0) => {
                return Err(Error::NotCausalGraph { kind: "spacelike", estimate: est.estimate })
            }
            SurfaceKind::Achronal if !(est.estimate <= 1.0 + ACHRONAL_TOLERANCE) => {
                return Err(Error::NotCausalGraph { kind: "achronal", estimate: est.estimate })
            }
            _ => {}
        }
        if let Spacetime::FutureCone(_) = self.ambient {
            for x in grid_points(self.dim(), spec.radius, spec.count) {
                if !(self.eval(&x) > x.norm()) {
                    return Err(Error::SurfaceOutsideAmbient { x: x.as_slice().to_vec() });
                }
            }
        }
        Ok(())
    }

    pub fn height(&self) -> &Height {
        &self.height
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn ambient(&self) -> Spacetime {
        self.ambient
    }

    pub fn dim(&self) -> Dim {
        self.ambient.dim()
    }

    pub fn eval(&self, x: &Spatial) -> f64 {
        self.height.eval(x)
    }

    pub fn log_abs_eval(&self, x: &Spatial) -> Option<f64> {
        self.height.log_abs_eval(x)
    }

    pub fn point_at(&self, x: Spatial) -> Point {
        Point::new(self.eval(&x), x)
    }

    /// `p ∈ J⁺(Σ)`. For a graph with Lipschitz constant at most 1 this is `t ≥ f(x)`.
    pub fn future_contains(&self, p: &Point) -> bool {
        p.t >= self.eval(&p.x)
    }

    /// `p ∈ J⁻(Σ)`, i.e. `t ≤ f(x)`.
    pub fn past_contains(&self, p: &Point) -> bool {
        p.t <= self.eval(&p.x)
    }

    /// The same surface raised by `dt`; only for closed forms with an offset.
    pub fn shifted(&self, dt: f64) -> Option<SurfaceGraph> {
        self.height.shifted(dt).map(|height| SurfaceGraph { height, ..self.clone() })
    }
}

impl fmt::Display for SurfaceGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.height, self.kind)
    }
}

fn grid_points(dim: Dim, radius: f64, count: usize) -> Vec<Spatial> {
    match dim {
        Dim::One => linspace(-radius, radius, count).map(Spatial::d1).collect(),
        Dim::Two => {
            let m = (count as f64).sqrt().ceil().max(2.0) as usize;
            let axis: Vec<f64> = linspace(-radius, radius, m).collect();
            axis.iter().flat_map(|&x| axis.iter().map(move |&y| Spatial::d2(x, y))).collect()
        }
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}

/// Largest sampled difference quotient `|f(x) − f(y)| / ‖x − y‖`.
pub fn lipschitz_estimate(s: &SurfaceGraph, spec: &SampleSpec) -> Result<LipschitzEstimate> {
    if spec.count < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: spec.count });
    }
    if !(spec.radius > 0.0) || !spec.radius.is_finite() {
        return Err(Error::InvalidParameter(format!("sample radius must be positive, got {}", spec.radius)));
    }
    let dim = s.dim();
    let mut pairs: Vec<(Spatial, Spatial)> = Vec::new();
    match dim {
        Dim::One => {
            let pts = grid_points(dim, spec.radius, spec.count);
            pairs.extend(pts.windows(2).map(|w| (w[0], w[1])));
        }
        Dim::Two => {
            let m = (spec.count as f64).sqrt().ceil().max(2.0) as usize;
            let axis: Vec<f64> = linspace(-spec.radius, spec.radius, m).collect();
            for i in 0..m {
                for j in 0..m {
                    let p = Spatial::d2(axis[i], axis[j]);
                    if i + 1 < m {
                        pairs.push((p, Spatial::d2(axis[i + 1], axis[j])));
                    }
                    if j + 1 < m {
                        pairs.push((p, Spatial::d2(axis[i], axis[j + 1])));
                    }
                    if i + 1 < m && j + 1 < m {
                        pairs.push((p, Spatial::d2(axis[i + 1], axis[j + 1])));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = ((spec.radius * 1e-3).ln(), (2.0 * spec.radius).ln());
    for _ in 0..spec.count {
        let x = random_in_box(&mut rng, dim, spec.radius);
        let len = rng.gen_range(lo..hi).exp();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        pairs.push((x, x + Spatial::polar(dim, len, theta)));
    }

    let mut best = LipschitzEstimate { estimate: 0.0, witness: pairs[0] };
    for (x, y) in pairs {
        let d = x.dist(&y);
        if d == 0.0 {
            continue;
        }
        let q = (s.eval(&x) - s.eval(&y)).abs() / d;
        if q > best.estimate {
            best = LipschitzEstimate { estimate: q, witness: (x, y) };
        }
    }
    Ok(best)
}

pub(crate) fn random_in_box(rng: &mut ChaCha8Rng, dim: Dim, radius: f64) -> Spatial {
    match dim {
        Dim::One => Spatial::d1(rng.gen_range(-radius..=radius)),
        Dim::Two => Spatial::d2(rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)),
    }
}

fn require_minkowski(cloud: &CompactCloud, base: &SurfaceGraph) -> Result<()> {
    if let Spacetime::FutureCone(_) = cloud.ambient() {
        return Err(Error::UnsupportedAmbient { required: "Minkowski ambient", found: cloud.ambient() });
    }
    if base.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: cloud.dim(), found: base.dim() });
    }
    Ok(())
}

/// `T₋(x) = min(0, min_k (t_k + ‖x − x_k‖))`: the first time each vertical
/// line meets `J⁺(A)`, capped by the leaf `t = 0`.
pub fn construct_sigma_minus(a: &CompactCloud) -> Result<SurfaceGraph> {
    construct_sigma_minus_over(a, &SurfaceGraph::flat(a.dim(), 0.0))
}

/// `T₊(x) = max(0, max_k (t_k − ‖x − x_k‖))`, the time mirror of [`construct_sigma_minus`].
pub fn construct_sigma_plus(a: &CompactCloud) -> Result<SurfaceGraph> {
    construct_sigma_plus_over(a, &SurfaceGraph::flat(a.dim(), 0.0))
}

/// [`construct_sigma_minus`] with the leaf `t = 0` replaced by an arbitrary
/// spacelike base graph.
pub fn construct_sigma_minus_over(a: &CompactCloud, base: &SurfaceGraph) -> Result<SurfaceGraph> {
    require_minkowski(a, base)?;
    let height = Height::LowerEnvelope { apexes: a.points().to_vec(), base: Box::new(base.height.clone()) };
    SurfaceGraph::new(height, SurfaceKind::Achronal, a.ambient())
}

pub fn construct_sigma_plus_over(a: &CompactCloud, base: &SurfaceGraph) -> Result<SurfaceGraph> {
    require_minkowski(a, base)?;
    let height = Height::UpperEnvelope { apexes: a.points().to_vec(), base: Box::new(base.height.clone()) };
    SurfaceGraph::new(height, SurfaceKind::Achronal, a.ambient())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoliationKind {
    /// `Σ_s = {t = s}`, `s ∈ ℝ`.
    Standard,
    /// `Σ_R = {t = √(R² + ‖x‖²)}`, `R > 0`, foliating `I⁺(0)`.
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Foliation {
    pub kind: FoliationKind,
    pub dim: Dim,
}

impl Foliation {
    pub fn standard(dim: Dim) -> Self {
        Foliation { kind: FoliationKind::Standard, dim }
    }

    pub fn hyperbolic(dim: Dim) -> Self {
        Foliation { kind: FoliationKind::Hyperbolic, dim }
    }

    /// Open parameter range.
    pub fn parameter_range(&self) -> (f64, f64) {
        match self.kind {
            FoliationKind::Standard => (f64::NEG_INFINITY, f64::INFINITY),
            FoliationKind::Hyperbolic => (0.0, f64::INFINITY),
        }
    }

    pub fn ambient(&self) -> Spacetime {
        match self.kind {
            FoliationKind::Standard => Spacetime::Minkowski(self.dim),
            FoliationKind::Hyperbolic => Spacetime::FutureCone(self.dim),
        }
    }

    pub fn leaf(&self, s: f64) -> Result<SurfaceGraph> {
        let (lo, hi) = self.parameter_range();
        if !(s > lo && s < hi) {
            return Err(Error::InvalidParameter(format!("leaf parameter {s} outside ({lo}, {hi})")));
        }
        Ok(match self.kind {
            FoliationKind::Standard => SurfaceGraph::flat(self.dim, s),
            FoliationKind::Hyperbolic => SurfaceGraph {
                height: Height::Hyperboloid { radius: s },
                kind: SurfaceKind::Spacelike,
                ambient: self.ambient(),
            },
        })
    }

    /// Parameter of the leaf through `p`, or `None` outside the foliated region.
    pub fn parameter_of(&self, p: &Point) -> Option<f64> {
        match self.kind {
            FoliationKind::Standard => Some(p.t),
            FoliationKind::Hyperbolic => {
                let r = p.x.norm();
                (p.t > r).then(|| ((p.t - r) * (p.t + r)).sqrt())
            }
        }
    }
}

/// A closed ball (an interval in one dimension) on the base leaf `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Spatial,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, x: &Spatial) -> bool {
        x.dist(&self.center) <= self.radius
    }

    pub fn interior_contains(&self, x: &Spatial) -> bool {
        x.dist(&self.center) < self.radius
    }
}

/// Nested compact sets `K_1 ⊂ int K_2 ⊂ …` on the leaf `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    sets: Vec<Ball>,
}

impl Exhaustion {
    pub fn new(sets: Vec<Ball>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter("an exhaustion needs at least one set".into()));
        }
        let dim = sets[0].center.dim();
        for (i, b) in sets.iter().enumerate() {
            if b.center.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.center.dim() });
            }
            if !(b.radius > 0.0) {
                return Err(Error::InvalidParameter(format!("set {i} has non-positive radius")));
            }
        }
        for (i, w) in sets.windows(2).enumerate() {
            if !(w[0].center.dist(&w[1].center) + w[0].radius < w[1].radius) {
                return Err(Error::ExhaustionNotNested { index: i });
            }
        }
        Ok(Exhaustion { sets })
    }

    pub fn concentric(dim: Dim, radii: &[f64]) -> Result<Self> {
        Exhaustion::new(radii.iter().map(|&radius| Ball { center: Spatial::zero(dim), radius }).collect())
    }

    pub fn sets(&self) -> &[Ball] {
        &self.sets
    }

    pub fn dim(&self) -> Dim {
        self.sets[0].center.dim()
    }

    /// Whether the union contains the closed origin-centred ball of `radius`.
    pub fn covers(&self, radius: f64) -> bool {
        self.sets.iter().any(|b| b.center.norm() + radius <= b.radius)
    }
}

pub(crate) fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
