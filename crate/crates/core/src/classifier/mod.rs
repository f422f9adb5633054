//! Three-valued compactness classification by certificate search and
//! refutation search.
//!
//! Every universally quantified property is replaced by a finite proxy: a
//! fixed adversarial surface family, a grid of witness events and a
//! geometric radius schedule. A certificate is reported only after all fresh
//! samples pass its containment predicate exactly; a refutation only with
//! explicit members on each of the last three rungs of the schedule. When a
//! search finds neither, or both, the entry is inconclusive.

mod curves;

use serde::{Deserialize, Serialize};

use crate::minkowski::{CompactCloud, Dim, Direction, Point, Spatial};
use crate::setlib::{AnalyticSet, LeafSlice};
use crate::surfaces::{
    construct_sigma_minus_over, construct_sigma_plus_over, slice_bound, RadiusSchedule, SearchSpec, SliceBound,
    SurfaceGraph, Witness,
};

pub use curves::{
    causal_curve_intersections, default_curves, foliation_sandwich, past_witness, CausalCurve, CurveReport,
    Intersection, Sandwich,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "payload", rename_all = "kebab-case")]
pub enum Entry<C, R> {
    Certificate(C),
    Refutation(R),
    Inconclusive(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::True => "yes",
            Tri::False => "no",
            Tri::Unknown => "inconclusive",
        })
    }
}

impl<C, R> Entry<C, R> {
    pub fn tri(&self) -> Tri {
        match self {
            Entry::Certificate(_) => Tri::True,
            Entry::Refutation(_) => Tri::False,
            Entry::Inconclusive(_) => Tri::Unknown,
        }
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Entry::Certificate(c) => Some(c),
            _ => None,
        }
    }

    pub fn refutation(&self) -> Option<&R> {
        match self {
            Entry::Refutation(r) => Some(r),
            _ => None,
        }
    }

    fn combine(cert: Option<C>, refutation: Option<R>, what: &str) -> Self {
        match (cert, refutation) {
            (Some(_), Some(_)) => Entry::Inconclusive(format!("{what}: certificate and refutation both found")),
            (Some(c), None) => Entry::Certificate(c),
            (None, Some(r)) => Entry::Refutation(r),
            (None, None) => Entry::Inconclusive(format!("{what}: neither a certificate nor a refutation within budget")),
        }
    }
}

/// A surface of the adversarial family meeting the set in an unbounded slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRefutation {
    pub label: String,
    pub surface: SurfaceGraph,
    pub witnesses: Vec<Witness>,
}

/// An event `p` whose causal future (or past) meets the set at every one of
/// the last radius rungs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRefutation {
    pub point: Point,
    pub witnesses: Vec<Point>,
}

pub type ScEntry = Entry<CompactCloud, SurfaceRefutation>;
pub type CausalEntry = Entry<SurfaceGraph, PointRefutation>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub sc: ScEntry,
    /// `A ⊂ J⁻(Σ)`; refuted by `p` with `A ∩ J⁺(p)` unbounded.
    pub fc: CausalEntry,
    /// `A ⊂ J⁺(Σ)`; refuted by `p` with `A ∩ J⁻(p)` unbounded.
    pub pc: CausalEntry,
}

impl Verdict {
    pub fn tc(&self) -> Tri {
        self.fc.tri().and(self.pc.tri())
    }

    pub fn fsc(&self) -> Tri {
        self.sc.tri().and(self.fc.tri())
    }

    pub fn psc(&self) -> Tri {
        self.sc.tri().and(self.pc.tri())
    }

    /// `(name, value)` for all six flags in a fixed order.
    pub fn flags(&self) -> [(&'static str, Tri); 6] {
        [
            ("sc", self.sc.tri()),
            ("fc", self.fc.tri()),
            ("pc", self.pc.tri()),
            ("tc", self.tc()),
            ("fsc", self.fsc()),
            ("psc", self.psc()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchBudget {
    pub schedule: RadiusSchedule,
    /// Radius of the sample cloud that seeds proposals.
    pub proposal_radius: f64,
    pub samples_per_shell: usize,
    /// Witness events cover `[−T, T] × [−R, R]^d` at this resolution.
    pub witness_time: f64,
    pub witness_radius: f64,
    pub witness_step: f64,
    /// Standard leaves used for per-leaf checks.
    pub leaf_times: Vec<f64>,
    /// Inflation of proposed certificates.
    pub margin: f64,
    pub slice_density: usize,
    pub rays: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            schedule: RadiusSchedule::default(),
            proposal_radius: 10.0,
            samples_per_shell: 64,
            witness_time: 4.0,
            witness_radius: 4.0,
            witness_step: 1.0,
            leaf_times: (1..=50).map(|i| 4.0 / 3.0 * i as f64 / 50.0).collect(),
            margin: 1.0,
            slice_density: 256,
            rays: 16,
            seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn slice_spec(&self) -> SearchSpec {
        SearchSpec { schedule: self.schedule, density: self.slice_density, rays: self.rays, use_analytic: true }
    }

    fn subseed(&self, tag: u64, i: u64) -> u64 {
        // splitmix-style mixing keeps per-task streams independent of evaluation order
        let mut z = self.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Witness events sorted by distance from the origin (time first on ties).
    pub fn witness_points(&self, dim: Dim) -> Vec<Point> {
        let axis = |half: f64| -> Vec<f64> {
            let k = (half / self.witness_step).floor() as i64;
            (-k..=k).map(|i| i as f64 * self.witness_step).collect()
        };
        let ts = axis(self.witness_time);
        let xs = axis(self.witness_radius);
        let mut pts = vec![];
        for &t in &ts {
            for &x in &xs {
                match dim {
                    Dim::One => pts.push(Point::d1(t, x)),
                    Dim::Two => pts.extend(xs.iter().map(|&y| Point::d2(t, x, y))),
                }
            }
        }
        pts.sort_by(|a, b| {
            let ka = (a.t.abs().max(a.x.norm()), a.t.abs(), a.x.norm());
            let kb = (b.t.abs().max(b.x.norm()), b.t.abs(), b.x.norm());
            ka.partial_cmp(&kb).unwrap().then(a.t.total_cmp(&b.t)).then(a.x.first().total_cmp(&b.x.first()))
        });
        pts
    }

    /// Fresh members over every shell of the schedule, plus the exact rung radii.
    fn verification_samples(&self, a: &AnalyticSet, tag: u64) -> Vec<Point> {
        if let Some(all) = a.finite_members() {
            return all;
        }
        let rungs = self.schedule.rungs();
        let mut out = a.sample(rungs[0], self.samples_per_shell, self.subseed(tag, 0));
        for (i, w) in rungs.windows(2).enumerate() {
            out.extend(a.sample_shell(w[0], w[1], self.samples_per_shell, self.subseed(tag, i as u64 + 1)));
        }
        for (i, r) in rungs.iter().enumerate() {
            out.extend(a.sample_at_radius(*r, self.samples_per_shell / 4 + 1, self.subseed(tag ^ 0xA5, i as u64)));
        }
        out
    }
}

/// The fixed family of spacelike graphs used in place of "every Cauchy
/// surface": standard leaves, boosted planes and scaled Gaussians.
pub fn adversarial_family(dim: Dim) -> Vec<(String, SurfaceGraph)> {
    let mut fam = vec![];
    for t in -4..=4 {
        fam.push((format!("leaf t={t}"), SurfaceGraph::flat(dim, t as f64)));
    }
    let axes: Vec<(&str, Spatial)> = match dim {
        Dim::One => vec![("x1", Spatial::d1(1.0))],
        Dim::Two => vec![("x1", Spatial::d2(1.0, 0.0)), ("x2", Spatial::d2(0.0, 1.0))],
    };
    for (name, e) in &axes {
        for v in [0.3, -0.3, 0.5, -0.5, 0.7, -0.7, 0.9, -0.9] {
            for c in [-1.0, 0.0, 1.0] {
                let s = SurfaceGraph::plane(e.scale(v), c).expect("|v| < 1");
                fam.push((format!("plane t={v}*{name}{c:+}"), s));
            }
        }
    }
    let mut gaussians = vec![(1.0, 1.0)];
    for c in [1.0, -1.0, 0.5, -0.5] {
        for a in [0.5, 1.0, 1.25] {
            if (c, a) != (1.0, 1.0) {
                gaussians.push((c, a));
            }
        }
    }
    for (c, a) in gaussians {
        let s = SurfaceGraph::gaussian(dim, c, a).expect("Lipschitz constant below 1");
        let label = if (c, a) == (1.0, 1.0) { "gaussian_surface".to_string() } else { format!("gaussian {c}*exp(-{a}|x|^2)") };
        fam.push((label, s));
    }
    fam
}

fn first_hit<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().enumerate().find_map_first(|(i, t)| f(i, t))
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().find_map(|(i, t)| f(i, t))
    }
}

/// First family surface whose slice with `a` is certified unbounded.
pub fn search_surface_refutation(a: &AnalyticSet, b: &SearchBudget) -> Option<SurfaceRefutation> {
    let fam = adversarial_family(a.dim());
    let spec = b.slice_spec();
    first_hit(&fam, |_, (label, s)| match slice_bound(a, s, &spec) {
        Ok(SliceBound::Unbounded { witnesses }) => {
            Some(SurfaceRefutation { label: label.clone(), surface: s.clone(), witnesses })
        }
        _ => None,
    })
}

/// Slices by the standard leaves of the budget's leaf grid.
pub fn leaf_checks(a: &AnalyticSet, b: &SearchBudget) -> Vec<(f64, SliceBound)> {
    let spec = b.slice_spec();
    b.leaf_times
        .iter()
        .map(|&t| {
            let bound = slice_bound(a, &SurfaceGraph::flat(a.dim(), t), &spec)
                .unwrap_or_else(|e| SliceBound::Inconclusive { reason: e.to_string() });
            (t, bound)
        })
        .collect()
}

/// Lattice points on the lower and upper faces of the sampled bounding box,
/// pushed out by `margin`, spaced at most `margin` apart. `J` of this cloud
/// contains the whole box.
fn box_cloud(samples: &[Point], dim: Dim, margin: f64) -> Option<CompactCloud> {
    if samples.is_empty() {
        return None;
    }
    let t_lo = samples.iter().map(|p| p.t).fold(f64::INFINITY, f64::min) - margin;
    let t_hi = samples.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max) + margin;
    let half = dim_extent(samples, dim) + margin;
    let k = (2.0 * half / margin).ceil().max(1.0) as i64;
    let coord = |i: i64| -half + 2.0 * half * i as f64 / k as f64;
    let mut pts = vec![];
    for t in [t_lo, t_hi] {
        match dim {
            Dim::One => pts.extend((0..=k).map(|i| Point::d1(t, coord(i)))),
            Dim::Two => {
                for i in 0..=k {
                    pts.extend((0..=k).map(|j| Point::d2(t, coord(i), coord(j))));
                }
            }
        }
    }
    CompactCloud::minkowski(pts).ok()
}

fn dim_extent(samples: &[Point], dim: Dim) -> f64 {
    samples
        .iter()
        .flat_map(|p| p.x.as_slice()[..dim.get()].iter().map(|v| v.abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

/// `Ok(n)` when all `n` verification samples lie in `J(K)`, otherwise the
/// first sample outside.
pub fn verify_sc_certificate(a: &AnalyticSet, k: &CompactCloud, b: &SearchBudget) -> Result<usize, Point> {
    let samples = b.verification_samples(a, 0x5C);
    if let Some(p) = samples.iter().find(|p| !k.causal_contains(p, Direction::Both)) {
        return Err(*p);
    }
    // extreme members on the closed-form leaf slices
    for &t in &b.leaf_times {
        if let Some(LeafSlice::Within(r)) = a.leaf_slice(t) {
            for dir in directions(a.dim(), b.rays) {
                let p = Point::new(t, dir.scale(r));
                if a.contains(&p) && !k.causal_contains(&p, Direction::Both) {
                    return Err(p);
                }
            }
        }
    }
    Ok(samples.len())
}

fn directions(dim: Dim, rays: usize) -> Vec<Spatial> {
    match dim {
        Dim::One => vec![Spatial::d1(1.0), Spatial::d1(-1.0)],
        Dim::Two => (0..rays.max(1))
            .map(|i| Spatial::polar(Dim::Two, 1.0, std::f64::consts::TAU * i as f64 / rays.max(1) as f64))
            .collect(),
    }
}

fn sc_certificate(a: &AnalyticSet, b: &SearchBudget) -> Option<CompactCloud> {
    let proposal = match a.generator_hint() {
        Some(k) => k,
        None => {
            let samples = a.sample(b.proposal_radius, 4 * b.samples_per_shell, b.subseed(0x51, 0));
            box_cloud(&samples, a.dim(), b.margin)?
        }
    };
    verify_sc_certificate(a, &proposal, b).ok().map(|_| proposal)
}

pub fn classify_spacelike_compact(a: &AnalyticSet, b: &SearchBudget) -> ScEntry {
    let refutation = search_surface_refutation(a, b);
    let cert = sc_certificate(a, b);
    Entry::combine(cert, refutation, "spacelike compactness")
}

/// Searches the witness grid for `p` with `A ∩ J^dir(p)` meeting the last
/// three rungs.
fn point_refutation(a: &AnalyticSet, b: &SearchBudget, dir: Direction) -> Option<PointRefutation> {
    let rungs = b.schedule.rungs();
    let outer: Vec<f64> = rungs.iter().rev().take(3).rev().copied().collect();
    if outer.len() < 3 {
        return None;
    }
    let tag = if dir == Direction::Future { 0xF0 } else { 0x0F };
    let members: Vec<Vec<Point>> = outer
        .iter()
        .enumerate()
        .map(|(i, r)| a.sample_at_radius(*r, b.samples_per_shell, b.subseed(tag, i as u64)))
        .collect();
    let pts = b.witness_points(a.dim());
    first_hit(&pts, |_, p| {
        let reach = |q: &Point| match dir {
            Direction::Future => p.precedes(q),
            _ => q.precedes(p),
        };
        let witnesses: Option<Vec<Point>> = members.iter().map(|m| m.iter().copied().find(|q| reach(q))).collect();
        witnesses.map(|w| PointRefutation { point: *p, witnesses: w })
    })
}

/// `Σ₊` (for `fc`) or `Σ₋` (for `pc`) over a shifted family base, accepted
/// when every fresh sample lies on the correct side.
fn envelope_certificate(a: &AnalyticSet, b: &SearchBudget, future: bool) -> Option<SurfaceGraph> {
    let proposal = match a.finite_members() {
        Some(all) => all,
        None => a.sample(b.proposal_radius, 4 * b.samples_per_shell, b.subseed(0xE0, u64::from(future))),
    };
    if proposal.is_empty() {
        return None;
    }
    let cloud = CompactCloud::minkowski(proposal.clone()).ok()?;
    let check = b.verification_samples(a, if future { 0xC1 } else { 0xC2 });
    let fam = adversarial_family(a.dim());
    first_hit(&fam, |_, (_, base)| {
        let gaps = proposal.iter().map(|p| p.t - base.eval(&p.x));
        let shift = if future {
            gaps.fold(f64::NEG_INFINITY, f64::max) + b.margin
        } else {
            gaps.fold(f64::INFINITY, f64::min) - b.margin
        };
        let shifted = base.shifted(shift)?;
        let sigma = if future {
            construct_sigma_plus_over(&cloud, &shifted).ok()?
        } else {
            construct_sigma_minus_over(&cloud, &shifted).ok()?
        };
        let ok = check
            .iter()
            .all(|p| if future { sigma.past_contains(p) } else { sigma.future_contains(p) });
        ok.then_some(sigma)
    })
}

pub fn classify_future_compact(a: &AnalyticSet, b: &SearchBudget) -> CausalEntry {
    let refutation = point_refutation(a, b, Direction::Future);
    let cert = envelope_certificate(a, b, true);
    Entry::combine(cert, refutation, "future compactness")
}

pub fn classify_past_compact(a: &AnalyticSet, b: &SearchBudget) -> CausalEntry {
    let refutation = point_refutation(a, b, Direction::Past);
    let cert = envelope_certificate(a, b, false);
    Entry::combine(cert, refutation, "past compactness")
}

pub fn classify(a: &AnalyticSet, b: &SearchBudget) -> Verdict {
    Verdict {
        sc: classify_spacelike_compact(a, b),
        fc: classify_future_compact(a, b),
        pc: classify_past_compact(a, b),
    }
}
