//! Scenario files: one TOML document per run, every table closed to unknown keys.

use std::path::{Path, PathBuf};

use causalkit::classifier::SearchBudget;
use causalkit::minkowski::{CompactCloud, Dim, Direction, Point, Spacetime, Spatial};
use causalkit::setlib::{self, AnalyticSet};
use causalkit::wavekit::{Grid, SupportClass};
use serde::Deserialize;

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Classify,
    Counterexample,
    SigmaMinus,
    Wave,
    Pair,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Classify => "classify",
            Task::Counterexample => "counterexample",
            Task::SigmaMinus => "sigma-minus",
            Task::Wave => "wave",
            Task::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub task: Option<Task>,
    pub spacetime: SpacetimeSpec,
    pub set: Option<SetSpec>,
    pub budget: SearchBudget,
    pub counterexample: CounterexampleSpec,
    pub sigma: SigmaSpec,
    pub wave: WaveSpec,
    pub pair: PairSpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Minkowski,
    FutureCone,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpacetimeSpec {
    pub variant: Variant,
    pub d: usize,
}

impl Default for SpacetimeSpec {
    fn default() -> Self {
        SpacetimeSpec { variant: Variant::Minkowski, d: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetName {
    GaussianBand,
    HyperbolaBand,
    BoostPlane,
    Cloud,
    CausalHull,
}

impl SetName {
    fn name(self) -> &'static str {
        match self {
            SetName::GaussianBand => "gaussian-band",
            SetName::HyperbolaBand => "hyperbola-band",
            SetName::BoostPlane => "boost-plane",
            SetName::Cloud => "cloud",
            SetName::CausalHull => "causal-hull",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub name: SetName,
    pub velocity: Option<f64>,
    /// `[t, x1, ...]` rows.
    pub points: Option<Vec<Vec<f64>>>,
    pub direction: Option<Direction>,
    #[serde(default)]
    pub mirrored: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
pub enum CounterexampleName {
    #[default]
    #[serde(rename = "notSC")]
    NotSc,
    #[serde(rename = "notTC")]
    NotTc,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterexampleSpec {
    pub name: CounterexampleName,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaSpec {
    pub points: Vec<Vec<f64>>,
    /// Half-width of the exported window; `0` picks one from the cloud.
    pub extent: f64,
    pub samples: usize,
}

impl Default for SigmaSpec {
    fn default() -> Self {
        SigmaSpec { points: vec![vec![-1.0, -2.0], vec![-2.0, 0.5], vec![-0.5, 2.5]], extent: 0.0, samples: 401 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    #[default]
    Impulse,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    #[default]
    Retarded,
    Advanced,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveSpec {
    pub dt: f64,
    pub dx: f64,
    /// Time levels `0..=steps`.
    pub steps: i64,
    pub j_max: i64,
    pub source: Source,
    pub operator: Operator,
    /// Impulse position `[n, j]`; defaults to the level next to the start edge.
    pub at: Option<[i64; 2]>,
    /// Number of random events.
    pub count: usize,
}

impl Default for WaveSpec {
    fn default() -> Self {
        WaveSpec {
            dt: 1.0,
            dx: 1.0,
            steps: 200,
            j_max: 220,
            source: Source::Impulse,
            operator: Operator::Retarded,
            at: None,
            count: 4,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub class: String,
    /// `[n, j, value]` rows.
    pub events: Vec<(i64, i64, f64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairSpec {
    pub dt: f64,
    pub dx: f64,
    pub n_max: i64,
    pub j_max: i64,
    pub phi: FieldSpec,
    pub f: FieldSpec,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            dt: 1.0,
            dx: 1.0,
            n_max: 40,
            j_max: 60,
            phi: FieldSpec { class: "sc".into(), events: vec![(10, 0, 1.0), (12, 2, 0.5)] },
            f: FieldSpec { class: "tc".into(), events: vec![(12, 2, 0.75), (25, 2, 2.0), (27, -1, -1.0)] },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Text report name inside `dir`; the JSON twin swaps the extension.
    pub report: String,
    pub svg: bool,
    /// Leaf used for the exported slice table.
    pub slice_time: f64,
    /// Half-width of the plotted window.
    pub window: f64,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("causalkit-out"), report: "report.txt".into(), svg: false, slice_time: 1.0, window: 4.0 }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn dim(&self) -> Result<Dim, RunError> {
        Dim::from_usize(self.spacetime.d).map_err(config)
    }

    pub fn spacetime(&self) -> Result<Spacetime, RunError> {
        let dim = self.dim()?;
        Ok(match self.spacetime.variant {
            Variant::Minkowski => Spacetime::Minkowski(dim),
            Variant::FutureCone => Spacetime::FutureCone(dim),
        })
    }

    /// Checks everything that can be checked without running the task.
    pub fn validate(&self, task: Task) -> Result<(), RunError> {
        if let Some(t) = self.task {
            if t != task {
                return Err(RunError::Config(format!("config is for task {:?}, invoked as {:?}", t.name(), task.name())));
            }
        }
        self.spacetime()?;
        self.budget.schedule.validate().map_err(config)?;
        let b = &self.budget;
        if !(b.witness_step > 0.0 && b.witness_time >= 0.0 && b.witness_radius >= 0.0) {
            return Err(RunError::Config("budget: witness grid needs step > 0 and nonnegative extents".into()));
        }
        if b.samples_per_shell == 0 || b.rays == 0 || b.slice_density == 0 {
            return Err(RunError::Config("budget: sample counts must be positive".into()));
        }
        if !(b.proposal_radius > 0.0 && b.margin >= 0.0) {
            return Err(RunError::Config("budget: proposal_radius must be positive and margin nonnegative".into()));
        }
        let o = &self.output;
        if !(o.window > 0.0 && o.window.is_finite() && o.slice_time.is_finite()) {
            return Err(RunError::Config("output: window must be positive and slice_time finite".into()));
        }
        if o.report.is_empty() || Path::new(&o.report).file_name().is_none() {
            return Err(RunError::Config("output: report needs a file name".into()));
        }
        match task {
            Task::Classify => {
                self.analytic_set()?;
            }
            Task::Counterexample => {
                if self.set.is_some() {
                    return Err(RunError::Config("counterexample takes no [set] table".into()));
                }
                self.dim()?;
            }
            Task::SigmaMinus => {
                self.sigma_cloud()?;
                if self.sigma.samples < 2 || !(self.sigma.extent >= 0.0 && self.sigma.extent.is_finite()) {
                    return Err(RunError::Config("sigma: samples must be at least 2 and extent nonnegative".into()));
                }
            }
            Task::Wave => {
                self.wave_grid()?;
                let w = &self.wave;
                if w.source == Source::Random && w.count == 0 {
                    return Err(RunError::Config("wave: count must be positive".into()));
                }
                if let Some([n, j]) = w.at {
                    if w.source == Source::Random {
                        return Err(RunError::Config("wave: at applies to impulse sources only".into()));
                    }
                    if !(0..=w.steps).contains(&n) || j.abs() > w.j_max {
                        return Err(RunError::Config(format!("wave: impulse ({n}, {j}) lies off the grid")));
                    }
                }
            }
            Task::Pair => {
                let g = self.pair_grid()?;
                for (name, f) in [("phi", &self.pair.phi), ("f", &self.pair.f)] {
                    SupportClass::parse(&f.class).map_err(|e| RunError::Config(format!("pair.{name}: {e}")))?;
                    for &(n, j, v) in &f.events {
                        if !g.contains(n, j) || !v.is_finite() {
                            return Err(RunError::Config(format!("pair.{name}: event ({n}, {j}, {v}) lies off the grid")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn cloud(&self, rows: &[Vec<f64>], what: &str) -> Result<CompactCloud, RunError> {
        let dim = self.dim()?;
        let pts = rows
            .iter()
            .map(|row| {
                if row.len() != dim.get() + 1 {
                    return Err(RunError::Config(format!("{what}: point {row:?} needs {} coordinates", dim.get() + 1)));
                }
                let x = Spatial::from_slice(&row[1..]).map_err(config)?;
                Ok(Point::new(row[0], x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CompactCloud::new(pts, self.spacetime()?).map_err(|e| RunError::Config(format!("{what}: {e}")))
    }

    pub fn sigma_cloud(&self) -> Result<CompactCloud, RunError> {
        if self.spacetime.variant != Variant::Minkowski {
            return Err(RunError::Config("sigma-minus needs the minkowski variant".into()));
        }
        self.cloud(&self.sigma.points, "sigma.points")
    }

    pub fn analytic_set(&self) -> Result<AnalyticSet, RunError> {
        let spec = self.set.as_ref().ok_or_else(|| RunError::Config("classify needs a [set] table".into()))?;
        let dim = self.dim()?;
        let unused = |key: &str, present: bool| {
            if present {
                Err(RunError::Config(format!("set: key {key:?} does not apply to {}", spec.name.name())))
            } else {
                Ok(())
            }
        };
        let points_only = matches!(spec.name, SetName::Cloud | SetName::CausalHull);
        if !points_only && self.spacetime.variant != Variant::Minkowski {
            return Err(RunError::Config("library sets live in the minkowski variant".into()));
        }
        unused("velocity", spec.velocity.is_some() && spec.name != SetName::BoostPlane)?;
        unused("points", spec.points.is_some() && !points_only)?;
        unused("direction", spec.direction.is_some() && spec.name != SetName::CausalHull)?;
        let set = match spec.name {
            SetName::GaussianBand => setlib::gaussian_band_in(dim),
            SetName::HyperbolaBand => setlib::hyperbola_band_in(dim),
            SetName::BoostPlane => {
                let v = spec.velocity.ok_or_else(|| RunError::Config("set: boost-plane needs velocity".into()))?;
                setlib::boost_plane_in(dim, v).map_err(config)?.0
            }
            SetName::Cloud | SetName::CausalHull => {
                let rows = spec.points.as_ref().ok_or_else(|| RunError::Config("set: points are required".into()))?;
                let k = self.cloud(rows, "set.points")?;
                if spec.name == SetName::Cloud {
                    AnalyticSet::cloud(&k)
                } else {
                    AnalyticSet::causal_hull(k, spec.direction.unwrap_or(Direction::Both))
                }
            }
        };
        Ok(if spec.mirrored { set.mirrored() } else { set })
    }

    pub fn wave_grid(&self) -> Result<Grid, RunError> {
        let w = &self.wave;
        if w.steps < 2 {
            return Err(RunError::Config("wave: steps must be at least 2".into()));
        }
        Grid::with_range(w.dt, w.dx, 0, w.steps, w.j_max).map_err(config)
    }

    pub fn pair_grid(&self) -> Result<Grid, RunError> {
        let p = &self.pair;
        Grid::with_range(p.dt, p.dx, 0, p.n_max, p.j_max).map_err(config)
    }
}

fn config(e: causalkit::Error) -> RunError {
    RunError::Config(e.to_string())
}
