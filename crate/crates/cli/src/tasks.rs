//! One runner per subcommand. Runners build the report and the CSV artifacts
//! in memory; `main` writes them.

use std::io::Write as _;

use causalkit::classifier::{
    adversarial_family, causal_curve_intersections, classify, classify_future_compact, classify_past_compact,
    default_curves, leaf_checks, past_witness, search_surface_refutation, verify_sc_certificate, CausalCurve,
    CausalEntry, Intersection, ScEntry, SearchBudget, Tri,
};
use causalkit::export::{fmt_f64, write_set_csv, write_surface_csv};
use causalkit::minkowski::{Dim, Point, Spatial};
use causalkit::setlib::{self, AnalyticSet};
use causalkit::surfaces::{construct_sigma_minus, lipschitz_estimate, Height, SampleSpec, SliceBound, SurfaceGraph, Witness};
use causalkit::wavekit::{
    green_advanced, green_retarded, pairing, write_binary, write_csv, Grid, LatticeField, PairingGuard, SupportClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{CounterexampleName, FieldSpec, Operator, OutputSpec, ScenarioConfig, Source, Task};
use crate::RunError;

pub struct Context {
    pub seed: u64,
    pub budget: SearchBudget,
    pub output: OutputSpec,
}

pub struct Report {
    text: String,
    json: Map<String, Value>,
}

impl Report {
    fn new(task: Task, ctx: &Context) -> Self {
        let mut r = Report { text: String::new(), json: Map::new() };
        r.line(format!("causalkit {}", task.name()));
        r.line(format!("seed: {}", ctx.seed));
        r.put("task", json!(task.name()));
        r.put("seed", json!(ctx.seed));
        r
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn put(&mut self, key: &str, v: Value) {
        self.json.insert(key.into(), v);
    }

    fn put_ser(&mut self, key: &str, v: &impl Serialize) -> Result<(), RunError> {
        let v = serde_json::to_value(v).map_err(|e| RunError::Exec(format!("serialising {key}: {e}")))?;
        self.put(key, v);
        Ok(())
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn json(&self) -> String {
        // serde_json maps are ordered by key, so the document is deterministic
        let mut s = serde_json::to_string_pretty(&self.json).expect("a JSON map always serialises");
        s.push('\n');
        s
    }
}

pub struct Outcome {
    pub report: Report,
    pub files: Vec<(String, Vec<u8>)>,
}

#[derive(Default)]
struct Files(Vec<(String, Vec<u8>)>);

impl Files {
    fn add(
        &mut self,
        name: impl Into<String>,
        fill: impl FnOnce(&mut Vec<u8>) -> causalkit::Result<()>,
    ) -> Result<(), RunError> {
        let name = name.into();
        let mut buf = vec![];
        fill(&mut buf).map_err(|e| RunError::Exec(format!("{name}: {e}")))?;
        self.0.push((name, buf));
        Ok(())
    }
}

fn exec(e: causalkit::Error) -> RunError {
    RunError::Exec(e.to_string())
}

fn fmt_point(p: &Point) -> String {
    let xs: Vec<String> = p.x.as_slice().iter().map(|v| fmt_f64(*v)).collect();
    format!("(t={}, x=({}))", fmt_f64(p.t), xs.join(", "))
}

fn fmt_witness(w: &Witness) -> String {
    match w.log_abs_t {
        Some(l) => format!("{} ln|t|={}", fmt_point(&w.point), fmt_f64(l)),
        None => fmt_point(&w.point),
    }
}

fn describe(h: &Height) -> String {
    match h {
        Height::Flat { t } => format!("flat leaf t = {}", fmt_f64(*t)),
        Height::Plane { slope, offset } => format!("plane with slope {:?} and offset {}", slope, fmt_f64(*offset)),
        Height::Gaussian { amplitude, rate, offset } => {
            format!("gaussian amplitude {} rate {} offset {}", fmt_f64(*amplitude), fmt_f64(*rate), fmt_f64(*offset))
        }
        Height::Hyperboloid { radius } => format!("hyperboloid of radius {}", fmt_f64(*radius)),
        Height::PiecewiseLinear { knots } => format!("piecewise linear graph with {} knots", knots.len()),
        Height::LowerEnvelope { apexes, base } => {
            format!("lower envelope of {} future cones over the {}", apexes.len(), describe(base))
        }
        Height::UpperEnvelope { apexes, base } => {
            format!("upper envelope of {} past cones over the {}", apexes.len(), describe(base))
        }
    }
}

fn axis(half: f64, count: usize) -> Vec<f64> {
    let n = count.max(2) - 1;
    (0..=n).map(|i| -half + 2.0 * half * i as f64 / n as f64).collect()
}

fn on_axis(dim: Dim, x: f64) -> Spatial {
    match dim {
        Dim::One => Spatial::d1(x),
        Dim::Two => Spatial::d2(x, 0.0),
    }
}

fn scope(r: &mut Report, dim: Dim, b: &SearchBudget) {
    let rungs: Vec<String> = b.schedule.rungs().iter().map(|v| format!("{v}")).collect();
    let line = format!(
        "verdicts are relative to {} adversarial surfaces, {} witness events on [-{t}, {t}] x [-{x}, {x}]^{d} and radius rungs {}",
        adversarial_family(dim).len(),
        b.witness_points(dim).len(),
        rungs.join(", "),
        t = b.witness_time,
        x = b.witness_radius,
        d = dim.get(),
    );
    r.line(format!("scope: {line}"));
    r.put("scope", json!(line));
}

fn set_header(r: &mut Report, set: &AnalyticSet) {
    r.line(format!("set: {} (d = {})", set.label(), set.dim().get()));
    r.put("set", json!({ "label": set.label(), "d": set.dim().get() }));
}

/// Witnesses gathered for `witnesses.csv`, tagged with the claim they support.
type Tagged = Vec<(&'static str, Witness)>;

fn surface_csv(files: &mut Files, name: &str, s: &SurfaceGraph, out: &OutputSpec) -> Result<(), RunError> {
    let xs: Vec<Spatial> = axis(out.window, 401).into_iter().map(|x| on_axis(s.dim(), x)).collect();
    files.add(format!("surface_{name}.csv"), |w| write_surface_csv(s, &xs, w))
}

fn sc_section(r: &mut Report, set: &AnalyticSet, e: &ScEntry, ctx: &Context, files: &mut Files, tagged: &mut Tagged) -> Result<(), RunError> {
    r.line(format!("sc: {}", e.tri()));
    match e {
        ScEntry::Certificate(k) => {
            r.line(format!("  certificate: the set lies in J(K) for {} generator events", k.len()));
            for p in k.points() {
                r.line(format!("    generator {}", fmt_point(p)));
            }
            match verify_sc_certificate(set, k, &ctx.budget) {
                Ok(n) => r.line(format!("  certificate checked on {n} samples")),
                Err(p) => r.line(format!("  certificate check failed at {}", fmt_point(&p))),
            }
            let cloud = AnalyticSet::cloud(k);
            files.add("generators.csv", |w| write_set_csv(&cloud, k.points(), w))?;
        }
        ScEntry::Refutation(sr) => {
            r.line(format!("  refuted by surface {}: {}", sr.label, describe(sr.surface.height())));
            for w in &sr.witnesses {
                r.line(format!("    witness r={}: {}", w.point.radius(), fmt_witness(w)));
                tagged.push(("sc", *w));
            }
            surface_csv(files, "sc_refutation", &sr.surface, &ctx.output)?;
        }
        ScEntry::Inconclusive(why) => r.line(format!("  {why}")),
    }
    Ok(())
}

fn causal_section(
    r: &mut Report,
    name: &'static str,
    e: &CausalEntry,
    ctx: &Context,
    files: &mut Files,
    tagged: &mut Tagged,
) -> Result<(), RunError> {
    r.line(format!("{name}: {}", e.tri()));
    let (side, cone) = if name == "fc" { ("below", "J+(p)") } else { ("above", "J-(p)") };
    match e {
        CausalEntry::Certificate(s) => {
            r.line(format!("  certificate: the set lies {side} the {}", describe(s.height())));
            surface_csv(files, &format!("{name}_certificate"), s, &ctx.output)?;
        }
        CausalEntry::Refutation(pr) => {
            r.line(format!("  refuted at p = {}: {cone} meets the set at the outer rungs", fmt_point(&pr.point)));
            for w in &pr.witnesses {
                r.line(format!("    witness r={}: {}", w.radius(), fmt_point(w)));
                tagged.push((name, Witness::exact(*w)));
            }
        }
        CausalEntry::Inconclusive(why) => r.line(format!("  {why}")),
    }
    Ok(())
}

fn set_files(set: &AnalyticSet, ctx: &Context, tagged: &Tagged, files: &mut Files) -> Result<(), RunError> {
    let (dim, out) = (set.dim(), &ctx.output);
    let grid = axis(out.window, 121);
    let mut samples: Vec<Point> =
        grid.iter().flat_map(|&t| grid.iter().map(move |&x| Point::new(t, on_axis(dim, x)))).collect();
    match set.finite_members() {
        Some(all) => samples.extend(all),
        None => samples.extend(set.sample(out.window, 400, ctx.seed)),
    }
    files.add("samples.csv", |w| write_set_csv(set, &samples, w))?;
    let leaf: Vec<Point> = axis(out.window, 401).into_iter().map(|x| Point::new(out.slice_time, on_axis(dim, x))).collect();
    files.add("slice.csv", |w| write_set_csv(set, &leaf, w))?;
    files.add("witnesses.csv", |w| {
        let coords: Vec<String> = (1..=dim.get()).map(|i| format!("x{i}")).collect();
        writeln!(w, "role,t,{},log_abs_t,member", coords.join(","))?;
        for (role, wit) in tagged {
            let xs: Vec<String> = wit.point.x.as_slice().iter().map(|v| fmt_f64(*v)).collect();
            let log = wit.log_abs_t.map(fmt_f64).unwrap_or_default();
            let member = u8::from(set.witness_is_member(wit));
            writeln!(w, "{role},{},{},{log},{member}", fmt_f64(wit.point.t), xs.join(","))?;
        }
        Ok(())
    })
}

pub fn classify_task(set: &AnalyticSet, ctx: &Context) -> Result<Outcome, RunError> {
    let b = &ctx.budget;
    let mut r = Report::new(Task::Classify, ctx);
    set_header(&mut r, set);
    scope(&mut r, set.dim(), b);
    let v = classify(set, b);
    let (mut files, mut tagged) = (Files::default(), Tagged::new());
    sc_section(&mut r, set, &v.sc, ctx, &mut files, &mut tagged)?;
    causal_section(&mut r, "fc", &v.fc, ctx, &mut files, &mut tagged)?;
    causal_section(&mut r, "pc", &v.pc, ctx, &mut files, &mut tagged)?;
    let flags: Vec<String> = v.flags().iter().map(|(n, t)| format!("{n}={t}")).collect();
    r.line(format!("flags: {}", flags.join(" ")));
    let flag_map: Map<String, Value> = v.flags().iter().map(|(n, t)| (n.to_string(), json!(t))).collect();
    r.put("flags", Value::Object(flag_map));
    r.put_ser("verdict", &v)?;
    set_files(set, ctx, &tagged, &mut files)?;
    Ok(Outcome { report: r, files: files.0 })
}

pub fn counterexample_task(cfg: &ScenarioConfig, ctx: &Context) -> Result<Outcome, RunError> {
    let dim = cfg.dim()?;
    match cfg.counterexample.name {
        CounterexampleName::NotSc => not_sc(dim, ctx),
        CounterexampleName::NotTc => not_tc(dim, ctx),
    }
}

fn not_sc(dim: Dim, ctx: &Context) -> Result<Outcome, RunError> {
    let b = &ctx.budget;
    let set = setlib::gaussian_band_in(dim);
    let mut r = Report::new(Task::Counterexample, ctx);
    r.put("name", json!("notSC"));
    set_header(&mut r, &set);
    scope(&mut r, dim, b);
    let leaves = leaf_checks(&set, b);
    let bounded = leaves.iter().filter(|(_, s)| s.is_bounded()).count();
    r.line(format!("per-leaf slices: {bounded} of {} standard leaves bounded", leaves.len()));
    for (t, s) in &leaves {
        let what = match s {
            SliceBound::Bounded { r_max, analytic } => {
                format!("bounded, r <= {}{}", fmt_f64(*r_max), if *analytic { " (closed form)" } else { "" })
            }
            SliceBound::Unbounded { witnesses } => format!("unbounded ({} witnesses)", witnesses.len()),
            SliceBound::Inconclusive { reason } => format!("inconclusive: {reason}"),
        };
        r.line(format!("  leaf t={}: {what}", fmt_f64(*t)));
    }
    r.put_ser("leaf_checks", &leaves)?;
    let (mut files, mut tagged) = (Files::default(), Tagged::new());
    let refutation = search_surface_refutation(&set, b);
    let conclusion = match &refutation {
        Some(sr) => {
            r.line(format!("refutation: surface {} ({})", sr.label, describe(sr.surface.height())));
            for w in &sr.witnesses {
                r.line(format!("  witness r={}: {}", w.point.radius(), fmt_witness(w)));
                tagged.push(("sc", *w));
            }
            surface_csv(&mut files, "sc_refutation", &sr.surface, &ctx.output)?;
            "not spacelike compact"
        }
        None => "inconclusive",
    };
    r.put_ser("refutation", &refutation)?;
    r.line(format!("verdict: {conclusion}"));
    r.put("conclusion", json!(conclusion));
    set_files(&set, ctx, &tagged, &mut files)?;
    Ok(Outcome { report: r, files: files.0 })
}

fn not_tc(dim: Dim, ctx: &Context) -> Result<Outcome, RunError> {
    let b = &ctx.budget;
    let set = setlib::hyperbola_band_in(dim);
    let mut r = Report::new(Task::Counterexample, ctx);
    r.put("name", json!("notTC"));
    set_header(&mut r, &set);
    scope(&mut r, dim, b);
    let curves = default_curves(dim, b);
    let reports = causal_curve_intersections(&set, &curves, b).map_err(exec)?;
    let bounded = reports.iter().filter(|c| c.intersection.is_bounded()).count();
    r.line(format!("curve intersections: {bounded} of {} inextendible causal curves bounded", reports.len()));
    for c in &reports {
        let curve = match c.curve {
            CausalCurve::Vertical { x } => format!("vertical line x={:?}", x),
            CausalCurve::Boost { x_unit } => format!("boost curve toward {:?}", x_unit),
        };
        let what = match &c.intersection {
            Intersection::Empty => "empty".to_string(),
            Intersection::Bounded { lo, hi } => format!("bounded, parameter in [{}, {}]", fmt_f64(*lo), fmt_f64(*hi)),
            Intersection::Unbounded { witnesses } => format!("unbounded ({} witnesses)", witnesses.len()),
            Intersection::Inconclusive { reason } => format!("inconclusive: {reason}"),
        };
        r.line(format!("  {curve}: {what}"));
    }
    r.put_ser("curves", &reports)?;
    let (mut boost_points, mut members, mut shadowed) = (0usize, 0usize, 0usize);
    for c in curves.iter().filter(|c| matches!(c, CausalCurve::Boost { .. })) {
        for i in -400..=400 {
            let p = c.at(i as f64 * 0.01).map_err(exec)?;
            boost_points += 1;
            members += usize::from(set.contains(&p));
            shadowed += usize::from(past_witness(&set, &p).is_some());
        }
    }
    r.line(format!(
        "boost curve points: {boost_points} sampled, {members} in the set, {shadowed} with a set member in their future"
    ));
    r.put("boost_points", json!({ "sampled": boost_points, "members": members, "in_past_of_set": shadowed }));
    let fc = classify_future_compact(&set, b);
    let pc = classify_past_compact(&set, b);
    let (mut files, mut tagged) = (Files::default(), Tagged::new());
    causal_section(&mut r, "fc", &fc, ctx, &mut files, &mut tagged)?;
    causal_section(&mut r, "pc", &pc, ctx, &mut files, &mut tagged)?;
    r.put_ser("fc", &fc)?;
    r.put_ser("pc", &pc)?;
    let conclusion = match (fc.tri(), pc.tri()) {
        (Tri::False, Tri::True) => {
            "not timelike compact (past compact, not future compact)"
        }
        (Tri::False, _) | (_, Tri::False) => "not timelike compact",
        _ => "inconclusive",
    };
    r.line(format!("verdict: {conclusion}"));
    r.put("conclusion", json!(conclusion));
    set_files(&set, ctx, &tagged, &mut files)?;
    Ok(Outcome { report: r, files: files.0 })
}

pub fn sigma_minus_task(cfg: &ScenarioConfig, ctx: &Context) -> Result<Outcome, RunError> {
    let k = cfg.sigma_cloud()?;
    let s = construct_sigma_minus(&k).map_err(exec)?;
    let dim = k.dim();
    let extent = if cfg.sigma.extent > 0.0 {
        cfg.sigma.extent
    } else {
        k.points().iter().map(|p| p.x.norm() + p.t.abs()).fold(0.0, f64::max) + 2.0
    };
    let mut r = Report::new(Task::SigmaMinus, ctx);
    r.line(format!("cloud: {} events (d = {})", k.len(), dim.get()));
    r.line(format!("graph: {}", describe(s.height())));
    let mut below = 0;
    for p in k.points() {
        let foot = s.point_at(p.x);
        let ok = foot.precedes(p);
        below += usize::from(ok);
        r.line(format!("  event {}: graph height {} {}", fmt_point(p), fmt_f64(foot.t), if ok { "in J-(event)" } else { "NOT in J-(event)" }));
    }
    let est = lipschitz_estimate(&s, &SampleSpec { radius: extent, count: 4000, seed: ctx.seed }).map_err(exec)?;
    r.line(format!("events in the causal future of the graph: {below} of {}", k.len()));
    r.line(format!("sampled Lipschitz estimate on radius {}: {}", fmt_f64(extent), fmt_f64(est.estimate)));
    // difference quotients along a cone generator round to 1 ± a few ulps
    let achronal = est.estimate <= 1.0 + 1e-12;
    r.line(format!("achronal on the samples: {}", if achronal { "yes" } else { "no" }));
    r.put_ser("cloud", &k)?;
    r.put_ser("graph", &s)?;
    r.put("events_above", json!(below));
    r.put("lipschitz_estimate", json!(est.estimate));
    r.put("achronal", json!(achronal));
    r.put("extent", json!(extent));
    let mut files = Files::default();
    let members = AnalyticSet::cloud(&k);
    files.add("cloud.csv", |w| write_set_csv(&members, k.points(), w))?;
    let xs: Vec<Spatial> = match dim {
        Dim::One => axis(extent, cfg.sigma.samples).into_iter().map(Spatial::d1).collect(),
        Dim::Two => {
            let g = axis(extent, cfg.sigma.samples.min(81) | 1);
            g.iter().flat_map(|&x| g.iter().map(move |&y| Spatial::d2(x, y))).collect()
        }
    };
    files.add("sigma.csv", |w| write_surface_csv(&s, &xs, w))?;
    Ok(Outcome { report: r, files: files.0 })
}

/// Nonzero nodes of `u` outside the union of lattice cones of the source
/// nodes, and whether every level reaches the outermost cone sites.
fn cone_check(u: &LatticeField, sources: &[(i64, i64)], future: bool) -> (usize, bool) {
    let g = u.grid();
    let (mut outside, mut edges) = (0, true);
    for n in g.n_min..=g.n_max {
        let reach: Vec<(i64, i64)> = sources
            .iter()
            .filter_map(|&(m, k)| {
                let dn = if future { n - m } else { m - n };
                (dn >= 1).then_some((k, dn - 1))
            })
            .collect();
        let row = u.row(n);
        for (c, v) in row.iter().enumerate() {
            let j = c as i64 - g.j_max;
            if *v != 0.0 && !reach.iter().any(|&(k, w)| (j - k).abs() <= w) {
                outside += 1;
            }
        }
        if let (Some(lo), Some(hi)) = (reach.iter().map(|(k, w)| k - w).min(), reach.iter().map(|(k, w)| k + w).max()) {
            let at = |j: i64| row[(j + g.j_max) as usize];
            edges &= at(lo) != 0.0 && at(hi) != 0.0;
        }
    }
    (outside, edges)
}

fn events_csv(field: &LatticeField, w: &mut Vec<u8>) -> causalkit::Result<()> {
    let g = field.grid();
    writeln!(w, "n,j,value")?;
    for n in g.n_min..=g.n_max {
        for (c, v) in field.row(n).iter().enumerate() {
            if *v != 0.0 {
                writeln!(w, "{},{},{}", n, c as i64 - g.j_max, fmt_f64(*v))?;
            }
        }
    }
    Ok(())
}

pub fn wave_task(cfg: &ScenarioConfig, ctx: &Context) -> Result<Outcome, RunError> {
    let w = &cfg.wave;
    let g = cfg.wave_grid()?;
    let future = w.operator == Operator::Retarded;
    let mut f = LatticeField::zeros(g, SupportClass::Compact);
    let mut sources = vec![];
    match w.source {
        Source::Impulse => {
            let [n, j] = w.at.unwrap_or(if future { [1, 0] } else { [w.steps - 1, 0] });
            f.set(n, j, 1.0).map_err(exec)?;
            sources.push((n, j));
        }
        Source::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let spread = (w.j_max / 4).min(10);
            while sources.len() < w.count {
                let n = rng.gen_range(w.steps / 4..=3 * w.steps / 4);
                let j = rng.gen_range(-spread..=spread);
                if sources.contains(&(n, j)) {
                    continue;
                }
                let v: f64 = rng.gen_range(0.1..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                f.set(n, j, v).map_err(exec)?;
                sources.push((n, j));
            }
        }
    }
    let u = if future { green_retarded(&f) } else { green_advanced(&f) }.map_err(exec)?;
    let (outside, edges) = cone_check(&u, &sources, future);
    let verdict = match (outside, edges) {
        (0, true) => "exact cone",
        (0, false) => "inside cone",
        _ => "outside cone",
    };
    let mut r = Report::new(Task::Wave, ctx);
    let op = if future { "retarded" } else { "advanced" };
    r.line(format!(
        "grid: dt={} dx={} lambda={} levels 0..={} sites -{}..={}",
        fmt_f64(g.dt),
        fmt_f64(g.dx),
        fmt_f64(g.lambda()),
        g.n_max,
        g.j_max,
        g.j_max
    ));
    r.line(format!("operator: {op}"));
    r.line(format!("source: {} events", sources.len()));
    for &(n, j) in &sources {
        r.line(format!("  n={n} j={j} value={}", fmt_f64(f.get(n, j))));
    }
    let nonzero = u.values().iter().filter(|v| **v != 0.0).count();
    r.line(format!("field class: {}", u.class()));
    r.line(format!("nonzero nodes: {nonzero}; max |u| = {}", fmt_f64(u.max_abs())));
    if let Some(b) = u.support_box() {
        r.line(format!("support box: n in [{}, {}], j in [{}, {}]", b.n_lo, b.n_hi, b.j_lo, b.j_hi));
    }
    r.line(format!("nodes outside the source cones: {outside}"));
    r.line(format!("support containment: {verdict}"));
    r.put_ser("grid", &g)?;
    r.put("operator", json!(op));
    r.put("sources", json!(sources.iter().map(|&(n, j)| json!([n, j, f.get(n, j)])).collect::<Vec<_>>()));
    r.put("class", json!(u.class().name()));
    r.put("nonzero", json!(nonzero));
    r.put("max_abs", json!(u.max_abs()));
    r.put_ser("support_box", &u.support_box())?;
    r.put("outside_cone", json!(outside));
    r.put("support_containment", json!(verdict));
    let mut files = Files::default();
    files.add("source.csv", |b| events_csv(&f, b))?;
    files.add("field.csv", |b| write_csv(&u, b))?;
    files.add("field.bin", |b| write_binary(&u, b))?;
    Ok(Outcome { report: r, files: files.0 })
}

fn field(spec: &FieldSpec, g: Grid, name: &str) -> Result<LatticeField, RunError> {
    let class = SupportClass::parse(&spec.class).map_err(|e| RunError::Config(format!("pair.{name}: {e}")))?;
    let mut f = LatticeField::zeros(g, SupportClass::Unrestricted);
    for &(n, j, v) in &spec.events {
        f.set(n, j, v).map_err(|e| RunError::Config(format!("pair.{name}: {e}")))?;
    }
    f.with_class(class).map_err(|e| RunError::Config(format!("pair.{name}: {e}")))
}

pub fn pair_task(cfg: &ScenarioConfig, ctx: &Context) -> Result<Outcome, RunError> {
    let g = cfg.pair_grid()?;
    let phi = field(&cfg.pair.phi, g, "phi")?;
    let f = field(&cfg.pair.f, g, "f")?;
    let value = pairing(&phi, &f).map_err(exec)?;
    let mut r = Report::new(Task::Pair, ctx);
    r.line(format!("grid: dt={} dx={} levels 0..={} sites -{}..={}", fmt_f64(g.dt), fmt_f64(g.dx), g.n_max, g.j_max, g.j_max));
    for (name, u) in [("phi", &phi), ("f", &f)] {
        let n = u.values().iter().filter(|v| **v != 0.0).count();
        r.line(format!("{name}: class {}, {n} nonzero nodes", u.class()));
    }
    r.line(format!("guard: {} <-> {} admitted", phi.class(), f.class()));
    r.line(format!("pairing: {}", fmt_f64(value)));
    r.put("phi_class", json!(phi.class().name()));
    r.put("f_class", json!(f.class().name()));
    r.put("pairing", json!(value));
    let table: Vec<String> = PairingGuard::table().iter().map(|(a, b)| format!("{a} <-> {b}")).collect();
    r.put("guard_table", json!(table));
    match adjointness(&phi, &f) {
        Ok(Some((lhs, rhs))) => {
            r.line(format!("adjointness: <E+ phi, f> = {}, <phi, E- f> = {}", fmt_f64(lhs), fmt_f64(rhs)));
            r.line(format!("  difference: {}", fmt_f64((lhs - rhs).abs())));
            r.put("adjointness", json!({ "retarded_side": lhs, "advanced_side": rhs }));
        }
        Ok(None) => r.line("adjointness: skipped (both supports must be compact)"),
        Err(e) => r.line(format!("adjointness: skipped ({e})")),
    }
    let mut files = Files::default();
    files.add("phi.csv", |b| write_csv(&phi, b))?;
    files.add("f.csv", |b| write_csv(&f, b))?;
    Ok(Outcome { report: r, files: files.0 })
}

/// `⟨E⁺φ, f⟩` and `⟨φ, E⁻f⟩` for compactly supported sections.
fn adjointness(phi: &LatticeField, f: &LatticeField) -> causalkit::Result<Option<(f64, f64)>> {
    let (Ok(phi), Ok(f)) = (phi.clone().with_class(SupportClass::Compact), f.clone().with_class(SupportClass::Compact)) else {
        return Ok(None);
    };
    let lhs = pairing(&green_retarded(&phi)?, &f.clone().with_class(SupportClass::Fc)?)?;
    let rhs = pairing(&phi.with_class(SupportClass::Pc)?, &green_advanced(&f)?)?;
    Ok(Some((lhs, rhs)))
}
