use super::{Exhaustion, Height, SurfaceGraph, SurfaceKind};
use crate::error::{DeformCondition, Error, Result};
use crate::minkowski::{Dim, Point, Spacetime, Spatial};

/// Bends the leaf `t = 0` through the events `points[n]` (one spatial
/// dimension), using the exhaustion to keep the bends apart.
///
/// Each event is its own patch `B_n = {x_n}`. Its shadow on the leaf is the
/// interval `J(x_n) ∩ Σ = [y_n − |t_n|, y_n + |t_n|]`. The bend for event
/// `n` lives in `L_n`: `K_1` for the first event, and for later events the
/// component of `K_n \ K_{n−1}` holding the shadow. Inside `L_n` the new
/// surface is the tent from the ends of `L_n` up (or down) to the event, so
/// it stays inside the diamond `D(L_n)`; outside every `L_n` it is the leaf.
pub fn deform_surface(points: &[Point], exhaustion: &Exhaustion, slope_cap: f64) -> Result<SurfaceGraph> {
    if !(slope_cap > 0.0 && slope_cap < 1.0) {
        return Err(Error::InvalidParameter(format!("slope cap must lie in (0, 1), got {slope_cap}")));
    }
    if exhaustion.dim() != Dim::One {
        return Err(Error::DimensionMismatch { expected: Dim::One, found: exhaustion.dim() });
    }
    if points.len() > exhaustion.sets().len() {
        return Err(Error::InvalidParameter(format!(
            "{} points but only {} exhaustion sets",
            points.len(),
            exhaustion.sets().len()
        )));
    }

    let interval = |n: usize| {
        let b = exhaustion.sets()[n];
        (b.center.first() - b.radius, b.center.first() + b.radius)
    };
    let shadow = |p: &Point| (p.x.first() - p.t.abs(), p.x.first() + p.t.abs());

    for (n, p) in points.iter().enumerate() {
        if p.dim() != Dim::One || !p.is_finite() {
            return Err(Error::HypothesisViolation {
                condition: DeformCondition::PointInPatch,
                index: n,
                detail: format!("{p} is not a finite event of the 1+1 chart"),
            });
        }
        let (lo, hi) = shadow(p);
        let (a, b) = interval(n);
        if !(a < lo && hi < b) {
            return Err(Error::HypothesisViolation {
                condition: DeformCondition::ShadowInsideOwnSet,
                index: n,
                detail: format!("shadow [{lo}, {hi}] not inside the open interval ({a}, {b})"),
            });
        }
        if n > 0 {
            let (a, b) = interval(n - 1);
            if !(hi < a || lo > b) {
                return Err(Error::HypothesisViolation {
                    condition: DeformCondition::ShadowAvoidsPreviousSet,
                    index: n,
                    detail: format!("shadow [{lo}, {hi}] meets K_{} = [{a}, {b}]", n),
                });
            }
        }
    }

    let mut knots: Vec<(f64, f64)> = Vec::new();
    for (n, p) in points.iter().enumerate() {
        let (a, b) = interval(n);
        let (room_lo, room_hi) = if n == 0 {
            (a, b)
        } else {
            let (pa, pb) = interval(n - 1);
            if shadow(p).1 < pa {
                (a, pa)
            } else {
                (pb, b)
            }
        };
        let y = p.x.first();
        let required = (p.t.abs() / (y - room_lo)).max(p.t.abs() / (room_hi - y));
        if required > slope_cap {
            return Err(Error::SlopeInfeasible { index: n, required, cap: slope_cap });
        }
        if p.t != 0.0 {
            knots.extend([(room_lo, 0.0), (y, p.t), (room_hi, 0.0)]);
        }
    }
    knots.sort_by(|a, b| a.0.total_cmp(&b.0));
    // neighbouring rooms share an endpoint where both tents vanish
    knots.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);

    let surface = SurfaceGraph::new(Height::PiecewiseLinear { knots }, SurfaceKind::Spacelike, Spacetime::Minkowski(Dim::One))?;
    for p in points {
        debug_assert_eq!(surface.eval(&Spatial::d1(p.x.first())), p.t);
    }
    Ok(surface)
}
