use serde::{Deserialize, Serialize};

use super::SearchBudget;
use crate::error::{Error, Result};
use crate::minkowski::{Dim, Point, Spatial};
use crate::setlib::{boost_curve, AnalyticSet, TimeExtent};
use crate::surfaces::{Foliation, FoliationKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Sandwich {
    /// Every sample lies between the leaves with these parameters.
    Found { lower: f64, upper: f64 },
    /// Far samples escape every sandwich seen on the inner shells.
    NotFound { witnesses: Vec<Point> },
}

/// Looks for leaf parameters `s₋ < s₊` with the samples of `a` between the
/// leaves `Σ_{s₋}` and `Σ_{s₊}`. Samples are supplemented by the ends of the
/// vertical extent of the set above each sample, when those are members.
/// The parameter range is taken from the samples inside the third-to-last
/// rung; if the two outer shells extend it, the extending samples are
/// reported instead.
pub fn foliation_sandwich(a: &AnalyticSet, f: &Foliation, b: &SearchBudget) -> Result<Sandwich> {
    if f.dim != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: f.dim });
    }
    let mut samples = b.verification_samples(a, 0x5A);
    let ends: Vec<Point> = samples
        .iter()
        .filter_map(|p| match a.time_extent_at(&p.x) {
            TimeExtent::Interval(lo, hi) => Some([Point::new(lo, p.x), Point::new(hi, p.x)]),
            _ => None,
        })
        .flatten()
        .filter(|q| a.contains(q))
        .collect();
    samples.extend(ends);
    let rungs = b.schedule.rungs();
    let inner_cap = if rungs.len() >= 3 { rungs[rungs.len() - 3] } else { f64::INFINITY };
    let mut params = Vec::with_capacity(samples.len());
    for p in &samples {
        match f.parameter_of(p) {
            Some(s) => params.push((s, *p)),
            None => return Ok(Sandwich::NotFound { witnesses: vec![*p] }),
        }
    }
    if params.is_empty() {
        return Ok(Sandwich::NotFound { witnesses: vec![] });
    }
    let range = |it: &mut dyn Iterator<Item = f64>| {
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
    };
    let inner: Vec<&(f64, Point)> = params.iter().filter(|(_, p)| p.x.norm() <= inner_cap).collect();
    let (lo, hi) = if inner.is_empty() {
        (f64::INFINITY, f64::NEG_INFINITY)
    } else {
        range(&mut inner.iter().map(|(s, _)| *s))
    };
    let below = params.iter().filter(|(s, _)| *s < lo).min_by(|a, b| a.0.total_cmp(&b.0));
    let above = params.iter().filter(|(s, _)| *s > hi).max_by(|a, b| a.0.total_cmp(&b.0));
    if below.is_none() && above.is_none() {
        return Ok(match f.kind {
            FoliationKind::Standard => Sandwich::Found { lower: lo - b.margin, upper: hi + b.margin },
            FoliationKind::Hyperbolic => Sandwich::Found { lower: lo / 2.0, upper: hi + b.margin },
        });
    }
    Ok(Sandwich::NotFound { witnesses: below.into_iter().chain(above).map(|(_, p)| *p).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "kebab-case")]
pub enum CausalCurve {
    /// `s ↦ (s, x)`.
    Vertical { x: Spatial },
    /// `τ ↦ (sinh τ, cosh τ · x̂)`.
    Boost { x_unit: Spatial },
}

impl CausalCurve {
    pub fn at(&self, s: f64) -> Result<Point> {
        match self {
            CausalCurve::Vertical { x } => Ok(Point::new(s, *x)),
            CausalCurve::Boost { x_unit } => boost_curve(*x_unit, s),
        }
    }
}

/// Intersection with a curve, in the curve parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Intersection {
    Empty,
    Bounded { lo: f64, hi: f64 },
    Unbounded { witnesses: Vec<Point> },
    Inconclusive { reason: String },
}

impl Intersection {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Intersection::Empty | Intersection::Bounded { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve: CausalCurve,
    pub intersection: Intersection,
}

/// Vertical lines over the witness grid and at the rung radii, and the
/// boost curves through unit directions.
pub fn default_curves(dim: Dim, b: &SearchBudget) -> Vec<CausalCurve> {
    let k = (b.witness_radius / b.witness_step).floor() as i64;
    let mut xs: Vec<f64> = (-k..=k).map(|i| i as f64 * b.witness_step).collect();
    for r in b.schedule.rungs() {
        xs.extend([r, -r]);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut out: Vec<CausalCurve> = match dim {
        Dim::One => xs.iter().map(|&x| CausalCurve::Vertical { x: Spatial::d1(x) }).collect(),
        Dim::Two => xs.iter().map(|&x| CausalCurve::Vertical { x: Spatial::d2(x, 0.0) }).collect(),
    };
    let units: Vec<Spatial> = match dim {
        Dim::One => vec![Spatial::d1(1.0), Spatial::d1(-1.0)],
        Dim::Two => (0..8).map(|i| Spatial::polar(Dim::Two, 1.0, std::f64::consts::FRAC_PI_4 * i as f64)).collect(),
    };
    out.extend(units.into_iter().map(|x_unit| CausalCurve::Boost { x_unit }));
    out
}

const CURVE_SAMPLES: usize = 4001;

fn intersect(a: &AnalyticSet, c: &CausalCurve, b: &SearchBudget) -> Result<Intersection> {
    let rungs = b.schedule.rungs();
    let outer: Vec<f64> = rungs.iter().rev().take(3).rev().copied().collect();
    match c {
        CausalCurve::Vertical { x } => match a.time_extent_at(x) {
            TimeExtent::Empty => Ok(Intersection::Empty),
            TimeExtent::Interval(lo, hi) if lo <= hi => Ok(Intersection::Bounded { lo, hi }),
            TimeExtent::Interval(..) => Ok(Intersection::Empty),
            TimeExtent::Unbounded => {
                let witnesses: Vec<Point> = outer
                    .iter()
                    .filter_map(|&r| [r, -r].into_iter().map(|t| Point::new(t, *x)).find(|p| a.contains(p)))
                    .collect();
                if witnesses.len() == outer.len() && outer.len() == 3 {
                    Ok(Intersection::Unbounded { witnesses })
                } else {
                    Ok(Intersection::Inconclusive { reason: "unbounded extent without far members".into() })
                }
            }
        },
        CausalCurve::Boost { .. } => {
            let tau_max = b.schedule.cap.asinh();
            let mut hits: Vec<(f64, Point)> = vec![];
            for i in 0..CURVE_SAMPLES {
                let tau = -tau_max + 2.0 * tau_max * i as f64 / (CURVE_SAMPLES - 1) as f64;
                let p = c.at(tau)?;
                if a.contains(&p) {
                    hits.push((tau, p));
                }
            }
            if hits.is_empty() {
                return Ok(Intersection::Empty);
            }
            let far: Vec<Point> = outer
                .iter()
                .filter_map(|&r| hits.iter().find(|(_, p)| p.t.abs() >= r).map(|(_, p)| *p))
                .collect();
            if outer.len() == 3 && far.len() == 3 {
                return Ok(Intersection::Unbounded { witnesses: far });
            }
            let lo = hits.first().unwrap().0;
            let hi = hits.last().unwrap().0;
            Ok(Intersection::Bounded { lo, hi })
        }
    }
}

pub fn causal_curve_intersections(a: &AnalyticSet, curves: &[CausalCurve], b: &SearchBudget) -> Result<Vec<CurveReport>> {
    curves
        .iter()
        .map(|c| Ok(CurveReport { curve: *c, intersection: intersect(a, c, b)? }))
        .collect()
}

/// A member `q` of `a` on the vertical line through `p` with `p ≼ q`, which
/// places `p` in `J⁻(a)`.
pub fn past_witness(a: &AnalyticSet, p: &Point) -> Option<Point> {
    let TimeExtent::Interval(lo, hi) = a.time_extent_at(&p.x) else { return None };
    [0.5 * (lo + hi), hi, lo]
        .into_iter()
        .map(|t| Point::new(t, p.x))
        .find(|q| q.t >= p.t && a.contains(q) && p.precedes(q))
}
