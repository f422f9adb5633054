use serde::{Deserialize, Serialize};

use super::{linspace, Height, SurfaceGraph};
use crate::error::{Error, Result};
use crate::minkowski::{Dim, Point, Spatial};
use crate::setlib::{AnalyticSet, LeafSlice};

/// Geometric radii `base, base·ratio, …` up to and including `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadiusSchedule {
    pub base: f64,
    pub ratio: f64,
    pub cap: f64,
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        RadiusSchedule { base: 1.0, ratio: 10.0, cap: 1000.0 }
    }
}

impl RadiusSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.base > 0.0 && self.ratio > 1.0 && self.cap >= self.base && self.cap.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad radius schedule {self:?}")));
        }
        Ok(())
    }

    pub fn rungs(&self) -> Vec<f64> {
        let mut out = vec![];
        let mut r = self.base;
        // relative slack so that 10^k rungs survive repeated multiplication
        while r <= self.cap * (1.0 + 1e-12) {
            out.push(r.min(self.cap));
            r *= self.ratio;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub schedule: RadiusSchedule,
    /// Sample radii per shell and ray.
    pub density: usize,
    /// Ray directions in two dimensions (one dimension always uses ±).
    pub rays: usize,
    /// Use closed-form leaf slices when the set provides them.
    pub use_analytic: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec { schedule: RadiusSchedule::default(), density: 256, rays: 16, use_analytic: true }
    }
}

/// A member of `A ∩ Σ`. `log_abs_t` carries `ln |t|` for sets whose
/// membership can be decided from it; far out on a Gaussian graph `t`
/// underflows to a signed zero and only the logarithm and the sign bit of
/// `point.t` remain meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_abs_t: Option<f64>,
}

impl Witness {
    pub fn exact(point: Point) -> Self {
        Witness { point, log_abs_t: None }
    }

    pub fn radius(&self) -> f64 {
        self.point.x.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SliceBound {
    /// `A ∩ Σ ⊂ {‖x‖ ≤ r_max}`; an empty slice reports `r_max = 0`.
    Bounded { r_max: f64, analytic: bool },
    /// Members found at each of the last three rung radii of the schedule.
    Unbounded { witnesses: Vec<Witness> },
    Inconclusive { reason: String },
}

impl SliceBound {
    pub fn is_bounded(&self) -> bool {
        matches!(self, SliceBound::Bounded { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, SliceBound::Unbounded { .. })
    }
}

fn rays(dim: Dim, count: usize) -> Vec<Spatial> {
    match dim {
        Dim::One => vec![Spatial::d1(1.0), Spatial::d1(-1.0)],
        Dim::Two => (0..count.max(1))
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / count.max(1) as f64;
                Spatial::d2(th.cos(), th.sin())
            })
            .collect(),
    }
}

/// Bounds the spatial extent of `A ∩ S`.
///
/// Flat leaves use the set's closed-form slice when available. Otherwise the
/// graph is sampled along rays over the shells `(r_{i−1}, r_i]` of the radius
/// schedule: members at each of the last three rung radii give `Unbounded`
/// (with the outermost member of each shell as witness), an empty last shell
/// with every member below the second-to-last rung gives `Bounded` with the
/// outermost member radius refined by bisection, and anything else is
/// `Inconclusive`.
///
/// Sets that are themselves graphs (boosted planes) are sliced through their
/// graph form by locating sign changes of the height difference.
pub fn slice_bound(a: &AnalyticSet, s: &SurfaceGraph, spec: &SearchSpec) -> Result<SliceBound> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: s.dim() });
    }
    spec.schedule.validate()?;
    if spec.density < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: spec.density });
    }
    if spec.use_analytic {
        if let Height::Flat { t } = s.height() {
            if let Some(slice) = a.leaf_slice(*t) {
                let r_max = match slice {
                    LeafSlice::Empty => 0.0,
                    LeafSlice::Within(r) => r,
                };
                return Ok(SliceBound::Bounded { r_max, analytic: true });
            }
        }
    }

    let rungs = spec.schedule.rungs();
    let graph = a.graph_form();
    let mut shell_witness: Vec<Option<Witness>> = vec![None; rungs.len()];
    let mut on_rung = vec![false; rungs.len()];
    let mut r_max: Option<f64> = None;

    for dir in rays(a.dim(), spec.rays) {
        let at = |r: f64| dir.scale(r);
        let member = |r: f64| -> Option<Witness> {
            match &graph {
                Some(g) => {
                    let x = at(r);
                    (g.eval(&x) == s.eval(&x)).then(|| Witness::exact(s.point_at(x)))
                }
                None => a.graph_witness(s, &at(r)),
            }
        };
        let gap = |r: f64| graph.as_ref().map(|g| g.eval(&at(r)) - s.eval(&at(r)));

        let mut prev: Option<(f64, bool, Option<f64>)> = None;
        let mut outer_member: Option<f64> = None;
        let mut refine_from: Option<(f64, f64)> = None;
        for (i, &hi) in rungs.iter().enumerate() {
            let lo = if i == 0 { 0.0 } else { rungs[i - 1] };
            let samples = linspace(lo, hi, spec.density + usize::from(i == 0));
            for r in samples.skip(usize::from(i > 0)) {
                let w = member(r);
                let h = gap(r);
                let mut hit = w.is_some();
                if let (Some((rp, _, Some(hp))), Some(hc)) = (prev, h) {
                    if !hit && hp != 0.0 && hp.signum() != hc.signum() {
                        // transversal crossing of two graphs between rp and r
                        let root = bisect(rp, r, |m| gap(m).map(|v| v.signum() == hp.signum()).unwrap_or(false));
                        outer_member = Some(outer_member.map_or(root, |o: f64| o.max(root)));
                    }
                }
                if let Some(w) = w {
                    hit = true;
                    on_rung[i] |= r == hi;
                    let slot = &mut shell_witness[i];
                    if slot.map_or(true, |old| w.radius() >= old.radius()) {
                        *slot = Some(w);
                    }
                    outer_member = Some(r);
                    refine_from = None;
                } else if let Some((rp, true, _)) = prev {
                    if graph.is_none() && outer_member == Some(rp) {
                        refine_from = Some((rp, r));
                    }
                }
                prev = Some((r, hit, h));
            }
        }
        let mut ray_max = outer_member;
        if let (Some((inside, outside)), None) = (refine_from, &graph) {
            ray_max = Some(bisect(inside, outside, |m| member(m).is_some()));
        }
        if let Some(m) = ray_max {
            r_max = Some(r_max.map_or(m, |o| o.max(m)));
        }
    }

    let n = rungs.len();
    let hit = |i: usize| shell_witness[i].is_some();
    if n >= 3 && (n - 3..n).all(|i| on_rung[i]) {
        let witnesses = shell_witness.into_iter().flatten().collect();
        return Ok(SliceBound::Unbounded { witnesses });
    }
    let quiet = n < 2 || !hit(n - 1);
    if quiet && r_max.map_or(true, |r| r < rungs[n.saturating_sub(2)]) {
        return Ok(SliceBound::Bounded { r_max: r_max.unwrap_or(0.0), analytic: false });
    }
    Ok(SliceBound::Inconclusive {
        reason: format!("members reach the outer shells but not all of the last three rungs (cap {})", spec.schedule.cap),
    })
}

/// Bisection for the boundary of `inside` between `a` (inside) and `b` (outside).
fn bisect(mut a: f64, mut b: f64, inside: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if inside(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}
