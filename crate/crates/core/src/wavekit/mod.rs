//! Leapfrog discretisation of `□ = ∂t² − ∂x²` on a uniform 1+1 lattice.
//!
//! At `λ = Δt/Δx = 1` the stencil propagates exactly one cell per step, so
//! the lattice cone coincides with the continuum cone on grid nodes and
//! support statements can be checked with zero tolerance.
//!
//! A finite grid cannot tell a compactly supported field from one that keeps
//! going past the edge. Every field therefore carries a declared
//! [`SupportClass`], read as an extension policy: which grid edges the
//! support may touch (and is understood to continue through).

mod io;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::Point;

pub use io::{read_binary, read_csv, write_binary, write_csv};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dt: f64,
    pub dx: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub j_max: i64,
}

impl Grid {
    /// Time levels `0..=n_max`, sites `−j_max..=j_max`.
    pub fn new(dt: f64, dx: f64, n_max: i64, j_max: i64) -> Result<Self> {
        Grid::with_range(dt, dx, 0, n_max, j_max)
    }

    pub fn with_range(dt: f64, dx: f64, n_min: i64, n_max: i64, j_max: i64) -> Result<Self> {
        if !(dt > 0.0 && dx > 0.0 && dt.is_finite() && dx.is_finite()) {
            return Err(Error::InvalidGrid(format!("steps must be positive and finite, got dt={dt}, dx={dx}")));
        }
        if n_max < n_min || j_max < 1 {
            return Err(Error::InvalidGrid(format!("empty extents n=[{n_min}, {n_max}], J={j_max}")));
        }
        let lambda = dt / dx;
        if lambda > 1.0 {
            return Err(Error::Cfl { lambda });
        }
        Ok(Grid { dt, dx, n_min, n_max, j_max })
    }

    pub fn lambda(&self) -> f64 {
        self.dt / self.dx
    }

    pub fn rows(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn cols(&self) -> usize {
        (2 * self.j_max + 1) as usize
    }

    pub fn contains(&self, n: i64, j: i64) -> bool {
        (self.n_min..=self.n_max).contains(&n) && (-self.j_max..=self.j_max).contains(&j)
    }

    fn index(&self, n: i64, j: i64) -> usize {
        (n - self.n_min) as usize * self.cols() + (j + self.j_max) as usize
    }

    /// The grid under `n ↦ −n`.
    pub fn mirrored(&self) -> Grid {
        Grid { n_min: -self.n_max, n_max: -self.n_min, ..*self }
    }

    pub fn event(&self, n: i64, j: i64) -> Point {
        Point::d1(n as f64 * self.dt, j as f64 * self.dx)
    }
}

/// Support classes of sections, ordered as in the duality table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportClass {
    Compact,
    Sc,
    Fsc,
    Psc,
    Tc,
    Fc,
    Pc,
    Unrestricted,
}

/// Which grid edges a support may reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgePolicy {
    pub past: bool,
    pub future: bool,
    pub spatial: bool,
}

impl SupportClass {
    pub const ALL: [SupportClass; 8] = [
        SupportClass::Compact,
        SupportClass::Sc,
        SupportClass::Fsc,
        SupportClass::Psc,
        SupportClass::Tc,
        SupportClass::Fc,
        SupportClass::Pc,
        SupportClass::Unrestricted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SupportClass::Compact => "compact",
            SupportClass::Sc => "sc",
            SupportClass::Fsc => "fsc",
            SupportClass::Psc => "psc",
            SupportClass::Tc => "tc",
            SupportClass::Fc => "fc",
            SupportClass::Pc => "pc",
            SupportClass::Unrestricted => "unrestricted",
        }
    }

    pub fn parse(s: &str) -> Result<SupportClass> {
        SupportClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown support class {s:?}")))
    }

    /// The class whose sections pair with this one.
    pub fn dual(self) -> SupportClass {
        match self {
            SupportClass::Compact => SupportClass::Unrestricted,
            SupportClass::Unrestricted => SupportClass::Compact,
            SupportClass::Sc => SupportClass::Tc,
            SupportClass::Tc => SupportClass::Sc,
            SupportClass::Fsc => SupportClass::Pc,
            SupportClass::Pc => SupportClass::Fsc,
            SupportClass::Psc => SupportClass::Fc,
            SupportClass::Fc => SupportClass::Psc,
        }
    }

    pub fn edges(self) -> EdgePolicy {
        let (past, future, spatial) = match self {
            SupportClass::Compact => (false, false, false),
            SupportClass::Fsc => (true, false, false),
            SupportClass::Psc => (false, true, false),
            SupportClass::Sc => (true, true, false),
            SupportClass::Fc => (true, false, true),
            SupportClass::Pc => (false, true, true),
            SupportClass::Tc => (false, false, true),
            SupportClass::Unrestricted => (true, true, true),
        };
        EdgePolicy { past, future, spatial }
    }

    /// Set inclusion of the classes.
    pub fn is_subclass_of(self, other: SupportClass) -> bool {
        let (a, b) = (self.edges(), other.edges());
        (!a.past || b.past) && (!a.future || b.future) && (!a.spatial || b.spatial)
    }

    pub fn time_reversed(self) -> SupportClass {
        match self {
            SupportClass::Fsc => SupportClass::Psc,
            SupportClass::Psc => SupportClass::Fsc,
            SupportClass::Fc => SupportClass::Pc,
            SupportClass::Pc => SupportClass::Fc,
            other => other,
        }
    }
}

impl fmt::Display for SupportClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Admits a pairing `⟨φ, f⟩` only between mutually dual classes.
#[derive(Debug, Clone, Copy, Default)]
pub struct PairingGuard;

impl PairingGuard {
    pub fn table() -> Vec<(SupportClass, SupportClass)> {
        SupportClass::ALL.into_iter().map(|c| (c, c.dual())).collect()
    }

    pub fn permits(phi: SupportClass, f: SupportClass) -> bool {
        phi.dual() == f
    }

    pub fn check(phi: SupportClass, f: SupportClass) -> Result<()> {
        if Self::permits(phi, f) {
            return Ok(());
        }
        Err(Error::IncompatibleSupport { phi, f, row: format!("{phi} <-> {}", phi.dual()) })
    }
}

/// Inclusive index bounds of the nonzero entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportBox {
    pub n_lo: i64,
    pub n_hi: i64,
    pub j_lo: i64,
    pub j_hi: i64,
}

impl SupportBox {
    fn extend(self, n: i64, j: i64) -> SupportBox {
        SupportBox { n_lo: self.n_lo.min(n), n_hi: self.n_hi.max(n), j_lo: self.j_lo.min(j), j_hi: self.j_hi.max(j) }
    }

    fn intersect(self, o: SupportBox) -> Option<SupportBox> {
        let b = SupportBox {
            n_lo: self.n_lo.max(o.n_lo),
            n_hi: self.n_hi.min(o.n_hi),
            j_lo: self.j_lo.max(o.j_lo),
            j_hi: self.j_hi.min(o.j_hi),
        };
        (b.n_lo <= b.n_hi && b.j_lo <= b.j_hi).then_some(b)
    }

    fn touches(&self, g: &Grid) -> EdgePolicy {
        EdgePolicy {
            past: self.n_lo == g.n_min,
            future: self.n_hi == g.n_max,
            spatial: self.j_lo == -g.j_max || self.j_hi == g.j_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    grid: Grid,
    values: Vec<f64>,
    class: SupportClass,
    support: Option<SupportBox>,
}

impl LatticeField {
    pub fn zeros(grid: Grid, class: SupportClass) -> Self {
        LatticeField { grid, values: vec![0.0; grid.rows() * grid.cols()], class, support: None }
    }

    /// Row-major values (time-major, then space). The declared class is checked.
    pub fn from_values(grid: Grid, values: Vec<f64>, class: SupportClass) -> Result<Self> {
        if values.len() != grid.rows() * grid.cols() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.rows() * grid.cols(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("lattice field"));
        }
        let mut f = LatticeField { grid, values, class, support: None };
        f.rescan();
        f.validate_class()?;
        Ok(f)
    }

    /// A unit value at `(n, j)`, class `compact`.
    pub fn impulse(grid: Grid, n: i64, j: i64) -> Result<Self> {
        let mut f = LatticeField::zeros(grid, SupportClass::Compact);
        f.set(n, j, 1.0)?;
        f.validate_class()?;
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class(&self) -> SupportClass {
        self.class
    }

    pub fn support_box(&self) -> Option<SupportBox> {
        self.support
    }

    pub fn get(&self, n: i64, j: i64) -> f64 {
        if self.grid.contains(n, j) {
            self.values[self.grid.index(n, j)]
        } else {
            0.0
        }
    }

    pub fn row(&self, n: i64) -> &[f64] {
        let c = self.grid.cols();
        let start = (n - self.grid.n_min) as usize * c;
        &self.values[start..start + c]
    }

    pub fn set(&mut self, n: i64, j: i64, v: f64) -> Result<()> {
        if !self.grid.contains(n, j) {
            return Err(Error::InvalidGrid(format!("node ({n}, {j}) outside the grid")));
        }
        if !v.is_finite() {
            return Err(Error::NonFinite("lattice value"));
        }
        let i = self.grid.index(n, j);
        let was = self.values[i];
        self.values[i] = v;
        if v != 0.0 {
            self.support = Some(match self.support {
                Some(b) => b.extend(n, j),
                None => SupportBox { n_lo: n, n_hi: n, j_lo: j, j_hi: j },
            });
        } else if was != 0.0 {
            self.rescan();
        }
        Ok(())
    }

    fn rescan(&mut self) {
        let g = self.grid;
        let cols = g.cols();
        self.support = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| (g.n_min + (i / cols) as i64, (i % cols) as i64 - g.j_max))
            .fold(None, |b: Option<SupportBox>, (n, j)| {
                Some(match b {
                    Some(b) => b.extend(n, j),
                    None => SupportBox { n_lo: n, n_hi: n, j_lo: j, j_hi: j },
                })
            });
    }

    /// Checks the support box against the declared class's edge policy.
    pub fn validate_class(&self) -> Result<()> {
        let Some(b) = self.support else { return Ok(()) };
        let touch = b.touches(&self.grid);
        let allow = self.class.edges();
        let mut bad = vec![];
        if touch.past && !allow.past {
            bad.push("past edge");
        }
        if touch.future && !allow.future {
            bad.push("future edge");
        }
        if touch.spatial && !allow.spatial {
            bad.push("spatial edge");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ClassMismatch { class: self.class, detail: format!("support {b:?} reaches the {}", bad.join(" and ")) })
        }
    }

    /// Re-tags the field; the new class must admit the current support.
    pub fn with_class(mut self, class: SupportClass) -> Result<Self> {
        self.class = class;
        self.validate_class()?;
        Ok(self)
    }

    /// Events `(n Δt, j Δx)` of all nonzero nodes.
    pub fn support_points(&self) -> Vec<Point> {
        let g = self.grid;
        let cols = g.cols();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| g.event(g.n_min + (i / cols) as i64, (i % cols) as i64 - g.j_max))
            .collect()
    }

    /// The field under `n ↦ −n`, with the class mirrored accordingly.
    pub fn mirrored(&self) -> LatticeField {
        let g = self.grid.mirrored();
        let cols = g.cols();
        let mut values = Vec::with_capacity(self.values.len());
        for r in self.values.chunks(cols).rev() {
            values.extend_from_slice(r);
        }
        let support = self.support.map(|b| SupportBox { n_lo: -b.n_hi, n_hi: -b.n_lo, ..b });
        LatticeField { grid: g, values, class: self.class.time_reversed(), support }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `(Pu)^n_j` on the interior nodes `n_min < n < n_max`, `|j| < J`.
/// The result lives on a grid shrunk by one cell on every side and carries
/// the class `unrestricted`.
pub fn apply_p(u: &LatticeField) -> Result<LatticeField> {
    let g = u.grid;
    if g.rows() < 3 || g.j_max < 2 {
        return Err(Error::MarginViolation("apply_p needs at least one interior node in every direction".into()));
    }
    let inner = Grid { n_min: g.n_min + 1, n_max: g.n_max - 1, j_max: g.j_max - 1, ..g };
    let (dt2, dx2) = (g.dt * g.dt, g.dx * g.dx);
    let mut out = vec![0.0; inner.rows() * inner.cols()];
    for n in inner.n_min..=inner.n_max {
        for j in -inner.j_max..=inner.j_max {
            let c = u.get(n, j);
            let tt = (u.get(n + 1, j) - 2.0 * c + u.get(n - 1, j)) / dt2;
            let xx = (u.get(n, j + 1) - 2.0 * c + u.get(n, j - 1)) / dx2;
            out[inner.index(n, j)] = tt - xx;
        }
    }
    let mut f = LatticeField { grid: inner, values: out, class: SupportClass::Unrestricted, support: None };
    f.rescan();
    Ok(f)
}

fn retarded_class(c: SupportClass) -> Result<SupportClass> {
    match c {
        SupportClass::Compact | SupportClass::Psc => Ok(SupportClass::Psc),
        SupportClass::Pc | SupportClass::Tc => Ok(SupportClass::Pc),
        other => Err(Error::UnsupportedSourceClass(other)),
    }
}

/// Spatial room the cone of `f` needs over `rows` further steps.
fn check_cone_margin(f: &LatticeField, reach: i64) -> Result<()> {
    let Some(b) = f.support else { return Ok(()) };
    let j = f.grid.j_max;
    if b.j_lo - reach < -j + 1 || b.j_hi + reach > j - 1 {
        return Err(Error::MarginViolation(format!(
            "cone of support j in [{}, {}] spreads {reach} cells and reaches the spatial edge ±{j}",
            b.j_lo, b.j_hi
        )));
    }
    Ok(())
}

/// One leapfrog step: `new = 2 cur − old + λ²(cur_{j+1} − 2cur + cur_{j−1}) + Δt² src`.
#[inline]
fn step(new: &mut [f64], cur: &[f64], old: &[f64], src: &[f64], l2: f64, dt2: f64) {
    let m = cur.len();
    for j in 0..m {
        let left = if j > 0 { cur[j - 1] } else { 0.0 };
        let right = if j + 1 < m { cur[j + 1] } else { 0.0 };
        new[j] = 2.0 * cur[j] - old[j] + l2 * (right - 2.0 * cur[j] + left) + dt2 * src[j];
    }
}

/// `E⁺f`: forward recursion with vanishing data below the first level.
/// Level `n_min` is zero and level `n + 1` is driven by `f` at level `n`.
pub fn green_retarded(f: &LatticeField) -> Result<LatticeField> {
    let class = retarded_class(f.class)?;
    f.validate_class()?;
    let g = f.grid;
    let Some(b) = f.support else { return Ok(LatticeField::zeros(g, class)) };
    check_cone_margin(f, g.n_max - b.n_lo)?;
    let (l2, dt2) = (g.lambda() * g.lambda(), g.dt * g.dt);
    let cols = g.cols();
    let mut u = vec![0.0; g.rows() * cols];
    let zeros = vec![0.0; cols];
    for r in 1..g.rows() {
        let (done, rest) = u.split_at_mut(r * cols);
        let cur = &done[(r - 1) * cols..];
        let old = if r >= 2 { &done[(r - 2) * cols..(r - 1) * cols] } else { &zeros[..] };
        let src = &f.values[(r - 1) * cols..r * cols];
        step(&mut rest[..cols], cur, old, src, l2, dt2);
    }
    let mut out = LatticeField { grid: g, values: u, class, support: None };
    out.rescan();
    Ok(out)
}

/// `E⁻f`: the same recursion run backwards from vanishing data above the
/// last level. Agrees bitwise with the time mirror of [`green_retarded`].
pub fn green_advanced(f: &LatticeField) -> Result<LatticeField> {
    let class = retarded_class(f.class.time_reversed())?.time_reversed();
    f.validate_class()?;
    let g = f.grid;
    let Some(b) = f.support else { return Ok(LatticeField::zeros(g, class)) };
    check_cone_margin(f, b.n_hi - g.n_min)?;
    let (l2, dt2) = (g.lambda() * g.lambda(), g.dt * g.dt);
    let (rows, cols) = (g.rows(), g.cols());
    let mut u = vec![0.0; rows * cols];
    let zeros = vec![0.0; cols];
    for r in (0..rows - 1).rev() {
        let (head, later) = u.split_at_mut((r + 1) * cols);
        let cur = &later[..cols];
        let old = if r + 2 < rows { &later[cols..2 * cols] } else { &zeros[..] };
        let src = &f.values[(r + 1) * cols..(r + 2) * cols];
        step(&mut head[r * cols..], cur, old, src, l2, dt2);
    }
    let mut out = LatticeField { grid: g, values: u, class, support: None };
    out.rescan();
    Ok(out)
}

/// Homogeneous evolution of the Cauchy data `u0` (level 0) and `u1`
/// (level 1), forward to level `steps` and backward to level `−steps`.
/// Both arrays index sites `−J..=J` with `J = (len − 1)/2`; the output grid
/// adds one zero site on each side, so its spatial extent is `J + 1`.
pub fn solve_cauchy(dt: f64, dx: f64, u0: &[f64], u1: &[f64], steps: i64) -> Result<LatticeField> {
    if u0.len() != u1.len() || u0.len() % 2 == 0 {
        return Err(Error::InvalidGrid(format!("data lengths {} and {} must agree and be odd", u0.len(), u1.len())));
    }
    if steps < 1 {
        return Err(Error::InvalidParameter(format!("steps must be at least 1, got {steps}")));
    }
    let j_max = (u0.len() as i64 - 1) / 2;
    let g = Grid::with_range(dt, dx, -steps, steps, j_max + 1)?;
    if u0.iter().chain(u1).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("cauchy data"));
    }
    let nz = |v: &[f64]| v.iter().position(|x| *x != 0.0).zip(v.iter().rposition(|x| *x != 0.0));
    let spans: Vec<(usize, usize)> = [nz(u0), nz(u1)].into_iter().flatten().collect();
    if let (Some(lo), Some(hi)) = (spans.iter().map(|s| s.0).min(), spans.iter().map(|s| s.1).max()) {
        let (lo, hi) = (lo as i64 - j_max, hi as i64 - j_max);
        if lo < -j_max + steps || hi > j_max - steps {
            return Err(Error::MarginViolation(format!(
                "initial support j in [{lo}, {hi}] must lie in [{}, {}] for {steps} steps",
                -j_max + steps,
                j_max - steps
            )));
        }
    }
    let (rows, cols) = (g.rows(), g.cols());
    let l2 = g.lambda() * g.lambda();
    let zero_src = vec![0.0; cols];
    let mut u = vec![0.0; rows * cols];
    let r0 = steps as usize;
    u[r0 * cols + 1..(r0 + 1) * cols - 1].copy_from_slice(u0);
    u[(r0 + 1) * cols + 1..(r0 + 2) * cols - 1].copy_from_slice(u1);
    for r in r0 + 2..rows {
        let (done, rest) = u.split_at_mut(r * cols);
        step(&mut rest[..cols], &done[(r - 1) * cols..], &done[(r - 2) * cols..(r - 1) * cols], &zero_src, l2, 0.0);
    }
    for r in (0..r0).rev() {
        let (head, later) = u.split_at_mut((r + 1) * cols);
        step(&mut head[r * cols..], &later[..cols], &later[cols..2 * cols], &zero_src, l2, 0.0);
    }
    let mut out = LatticeField { grid: g, values: u, class: SupportClass::Sc, support: None };
    out.rescan();
    out.validate_class()?;
    Ok(out)
}

/// `⟨φ, f⟩ = Σ φ^n_j f^n_j Δt Δx`, admitted only for dual classes.
pub fn pairing(phi: &LatticeField, f: &LatticeField) -> Result<f64> {
    PairingGuard::check(phi.class, f.class)?;
    if phi.grid != f.grid {
        return Err(Error::InvalidGrid("pairing needs both fields on the same grid".into()));
    }
    phi.validate_class()?;
    f.validate_class()?;
    let (Some(a), Some(b)) = (phi.support, f.support) else { return Ok(0.0) };
    let Some(overlap) = a.intersect(b) else { return Ok(0.0) };
    let t = overlap.touches(&phi.grid);
    if t.past || t.future || t.spatial {
        return Err(Error::MarginViolation(format!("overlap {overlap:?} of the supports reaches the grid edge")));
    }
    let g = phi.grid;
    let mut sum = 0.0;
    for n in overlap.n_lo..=overlap.n_hi {
        let (pr, fr) = (phi.row(n), f.row(n));
        let lo = (overlap.j_lo + g.j_max) as usize;
        let hi = (overlap.j_hi + g.j_max) as usize;
        sum += pr[lo..=hi].iter().zip(&fr[lo..=hi]).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(sum * g.dt * g.dx)
}

/// Leapfrog energy at the half level `n + 1/2`, which is conserved exactly
/// by the homogeneous recursion.
pub fn discrete_energy(u: &LatticeField, n: i64) -> Result<f64> {
    let g = u.grid;
    if n < g.n_min || n + 1 > g.n_max {
        return Err(Error::InvalidGrid(format!("levels {n} and {} must both lie on the grid", n + 1)));
    }
    let (a, b) = (u.row(n), u.row(n + 1));
    let mut kinetic = 0.0;
    let mut strain = 0.0;
    for j in 0..a.len() {
        let d = (b[j] - a[j]) / g.dt;
        kinetic += d * d;
        let (an, bn) = (a.get(j + 1).copied().unwrap_or(0.0), b.get(j + 1).copied().unwrap_or(0.0));
        strain += (bn - b[j]) * (an - a[j]);
    }
    if let (Some(a0), Some(b0)) = (a.first(), b.first()) {
        // the link from the zero exterior to the first site
        strain += b0 * a0;
    }
    Ok((kinetic + strain / (g.dx * g.dx)) * g.dx / 2.0)
}
