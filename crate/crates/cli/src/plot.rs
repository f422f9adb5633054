//! SVG rendering of the CSV artifacts. Plots are rebuilt from the files on
//! disk so that they always show exactly what was exported.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::Task;
use crate::RunError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const MEMBER: &str = "#4a7ab5";
const WITNESS: &str = "#c0392b";
const POSITIVE: &str = "#c0392b";
const NEGATIVE: &str = "#2962ff";
const CURVES: [&str; 4] = ["#2e7d32", "#6a1b9a", "#ef6c00", "#00838f"];

pub struct Frame {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
}

pub struct Svg {
    body: String,
    frame: Frame,
}

fn num(v: f64) -> String {
    format!("{v:.2}")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    pub fn new(mut frame: Frame) -> Self {
        for r in [&mut frame.x, &mut frame.y] {
            if !(r.1 > r.0) {
                *r = (r.0 - 1.0, r.0 + 1.0);
            }
        }
        let mut svg = Svg { body: String::new(), frame };
        svg.axes();
        svg
    }

    fn px(&self, x: f64) -> f64 {
        let (a, b) = self.frame.x;
        LEFT + (x - a) / (b - a) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (a, b) = self.frame.y;
        HEIGHT - BOTTOM - (y - a) / (b - a) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self) {
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        let b = &mut self.body;
        let _ = writeln!(b, r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333"/>"##, num(x0), num(y0), num(x1 - x0), num(y1 - y0));
        let _ = writeln!(b, r##"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"##, num(WIDTH / 2.0), escape(&self.frame.title));
        let _ = writeln!(b, r##"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"##, num((x0 + x1) / 2.0), num(HEIGHT - 14.0), escape(&self.frame.xlabel));
        let _ = writeln!(
            b,
            r##"<text x="18" y="{0}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {0})">{1}</text>"##,
            num((y0 + y1) / 2.0),
            escape(&self.frame.ylabel)
        );
        for i in 0..=4 {
            let s = i as f64 / 4.0;
            let xv = self.frame.x.0 + s * (self.frame.x.1 - self.frame.x.0);
            let yv = self.frame.y.0 + s * (self.frame.y.1 - self.frame.y.0);
            let (px, py) = (self.px(xv), self.py(yv));
            let b = &mut self.body;
            let _ = writeln!(b, r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#333"/>"##, num(px), num(y1), num(y1 + 5.0));
            let _ = writeln!(b, r##"<text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"##, num(px), num(y1 + 18.0), tick_label(xv));
            let _ = writeln!(b, r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#333"/>"##, num(x0 - 5.0), num(py), num(x0));
            let _ = writeln!(b, r##"<text x="{}" y="{}" text-anchor="end" font-size="11">{}</text>"##, num(x0 - 8.0), num(py + 4.0), tick_label(yv));
        }
    }

    fn visible(&self, x: f64, y: f64) -> bool {
        let (a, b) = self.frame.x;
        let (c, d) = self.frame.y;
        x.is_finite() && y.is_finite() && (a..=b).contains(&x) && (c..=d).contains(&y)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{},{}", num(self.px(x)), num(self.py(y))))
            .collect();
        if coords.len() >= 2 {
            let _ = writeln!(
                self.body,
                r##"<polyline clip-path="url(#plot)" fill="none" stroke="{stroke}" stroke-width="1.5" points="{}"/>"##,
                coords.join(" ")
            );
        }
    }

    pub fn dots(&mut self, pts: &[(f64, f64)], fill: &str, r: f64) {
        let shown: Vec<(f64, f64)> = pts.iter().copied().filter(|&(x, y)| self.visible(x, y)).collect();
        for (x, y) in shown {
            let _ = writeln!(self.body, r##"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"##, num(self.px(x)), num(self.py(y)), num(r));
        }
    }

    pub fn crosses(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let shown: Vec<(f64, f64)> = pts.iter().copied().filter(|&(x, y)| self.visible(x, y)).collect();
        for (x, y) in shown {
            let (cx, cy) = (self.px(x), self.py(y));
            let _ = writeln!(
                self.body,
                r##"<path d="M{} {}L{} {}M{} {}L{} {}" stroke="{stroke}" stroke-width="2"/>"##,
                num(cx - 5.0),
                num(cy - 5.0),
                num(cx + 5.0),
                num(cy + 5.0),
                num(cx - 5.0),
                num(cy + 5.0),
                num(cx + 5.0),
                num(cy - 5.0)
            );
        }
    }

    /// Axis-aligned cell between data corners.
    pub fn cell(&mut self, x: (f64, f64), y: (f64, f64), fill: &str, opacity: f64) {
        let (l, r) = (self.px(x.0), self.px(x.1));
        let (t, b) = (self.py(y.1), self.py(y.0));
        let _ = writeln!(
            self.body,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" fill-opacity="{opacity:.3}"/>"##,
            num(l),
            num(t),
            num((r - l).max(0.5)),
            num((b - t).max(0.5))
        );
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = TOP + 14.0 + 16.0 * i as f64;
            let x = WIDTH - RIGHT - 150.0;
            let _ = writeln!(self.body, r##"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"##, num(x), num(y - 9.0));
            let _ = writeln!(self.body, r##"<text x="{}" y="{}" font-size="11">{}</text>"##, num(x + 14.0), num(y), escape(label));
        }
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"##,
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(
            out,
            r##"<defs><clipPath id="plot"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"##,
            num(LEFT),
            num(TOP),
            num(WIDTH - LEFT - RIGHT),
            num(HEIGHT - TOP - BOTTOM)
        );
        let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// A CSV artifact read back as named float columns.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn read(dir: &Path, name: &str) -> Result<Table, RunError> {
        let path = dir.join(name);
        if !path.is_file() {
            return Err(RunError::Exec(format!("missing artifact {}", path.display())));
        }
        let bad = |e: csv::Error| RunError::Exec(format!("{name}: {e}"));
        let mut r = csv::Reader::from_path(&path).map_err(bad)?;
        let header = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let mut rows = vec![];
        for rec in r.records() {
            let rec = rec.map_err(bad)?;
            // non-numeric cells (labels, empty optionals) read as NaN
            rows.push(rec.iter().map(|c| c.parse().unwrap_or(f64::NAN)).collect());
        }
        Ok(Table { header, rows })
    }

    fn col(&self, name: &str) -> Result<usize, RunError> {
        self.header.iter().position(|h| h == name).ok_or_else(|| RunError::Exec(format!("column {name:?} missing")))
    }

    fn pairs(&self, x: &str, y: &str) -> Result<Vec<(f64, f64)>, RunError> {
        let (i, j) = (self.col(x)?, self.col(y)?);
        Ok(self.rows.iter().map(|r| (r[i], r[j])).collect())
    }

    /// Rows on the `x1` axis: the second spatial coordinate, when present, is zero.
    fn on_axis(&self) -> Vec<&Vec<f64>> {
        match self.header.iter().position(|h| h == "x2") {
            Some(k) => self.rows.iter().filter(|r| r[k] == 0.0).collect(),
            None => self.rows.iter().collect(),
        }
    }
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

fn pad((a, b): (f64, f64)) -> (f64, f64) {
    let m = 0.05 * (b - a).max(1e-9);
    (a - m, b + m)
}

fn write(dir: &Path, name: &str, svg: Svg, written: &mut Vec<String>) -> Result<(), RunError> {
    std::fs::write(dir.join(name), svg.finish()).map_err(|e| RunError::Exec(format!("{name}: {e}")))?;
    written.push(name.to_string());
    Ok(())
}

/// Renders every plot the task's artifacts support; returns the file names.
pub fn emit_plots(dir: &Path, task: Task, window: f64) -> Result<Vec<String>, RunError> {
    let mut written = vec![];
    match task {
        Task::Classify | Task::Counterexample => {
            set_plot(dir, window, &mut written)?;
            slice_plot(dir, &mut written)?;
            surfaces_plot(dir, window, &mut written)?;
        }
        Task::SigmaMinus => sigma_plot(dir, &mut written)?,
        Task::Wave => heat_map(dir, "field.csv", Some("source.csv"), "field.svg", &mut written)?,
        Task::Pair => {
            heat_map(dir, "phi.csv", None, "phi.svg", &mut written)?;
            heat_map(dir, "f.csv", None, "f.svg", &mut written)?;
        }
    }
    Ok(written)
}

fn witness_marks(dir: &Path) -> Result<Vec<(f64, f64)>, RunError> {
    let w = Table::read(dir, "witnesses.csv")?;
    let (x, t) = (w.col("x1")?, w.col("t")?);
    Ok(w.on_axis().iter().map(|r| (r[x], r[t])).collect())
}

fn set_plot(dir: &Path, window: f64, written: &mut Vec<String>) -> Result<(), RunError> {
    let samples = Table::read(dir, "samples.csv")?;
    let (x, t, m) = (samples.col("x1")?, samples.col("t")?, samples.col("member")?);
    let members: Vec<(f64, f64)> = samples.on_axis().iter().filter(|r| r[m] == 1.0).map(|r| (r[x], r[t])).collect();
    let leaf = Table::read(dir, "slice.csv")?;
    let leaf_t = leaf.rows.first().map_or(0.0, |r| r[0]);
    let mut svg = Svg::new(Frame {
        x: (-window, window),
        y: (-window, window),
        title: format!("set members, leaf t = {}", tick_label(leaf_t)),
        xlabel: "x1".into(),
        ylabel: "t".into(),
    });
    svg.dots(&members, MEMBER, 1.6);
    svg.polyline(&[(-window, leaf_t), (window, leaf_t)], "#999");
    svg.crosses(&witness_marks(dir)?, WITNESS);
    svg.legend(&[("member", MEMBER), ("witness", WITNESS)]);
    write(dir, "set.svg", svg, written)
}

fn slice_plot(dir: &Path, written: &mut Vec<String>) -> Result<(), RunError> {
    let leaf = Table::read(dir, "slice.csv")?;
    let (x, m) = (leaf.col("x1")?, leaf.col("member")?);
    let rows = leaf.on_axis();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[x], r[m])).collect();
    let leaf_t = leaf.rows.first().map_or(0.0, |r| r[0]);
    let mut step = vec![];
    for w in pts.windows(2) {
        let mid = 0.5 * (w[0].0 + w[1].0);
        step.extend([w[0], (mid, w[0].1), (mid, w[1].1)]);
    }
    step.extend(pts.last());
    let mut svg = Svg::new(Frame {
        x: pad(range(pts.iter().map(|p| p.0))),
        y: (-0.25, 1.25),
        title: format!("cross-section on the leaf t = {}", tick_label(leaf_t)),
        xlabel: "x1".into(),
        ylabel: "member".into(),
    });
    svg.polyline(&step, MEMBER);
    write(dir, "slice.svg", svg, written)
}

fn surface_files(dir: &Path) -> Result<Vec<String>, RunError> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map_err(|e| RunError::Exec(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.starts_with("surface_") && n.ends_with(".csv"))
        .collect();
    names.sort();
    Ok(names)
}

fn surfaces_plot(dir: &Path, window: f64, written: &mut Vec<String>) -> Result<(), RunError> {
    let names = surface_files(dir)?;
    if names.is_empty() {
        return Ok(());
    }
    let mut curves = vec![];
    for name in &names {
        let s = Table::read(dir, name)?;
        let (x, f) = (s.col("x1")?, s.col("f")?);
        curves.push(s.on_axis().iter().map(|r| (r[x], r[f])).collect::<Vec<_>>());
    }
    let mut svg = Svg::new(Frame {
        x: (-window, window),
        y: (-window, window),
        title: "surfaces".into(),
        xlabel: "x1".into(),
        ylabel: "t".into(),
    });
    let labels: Vec<String> = names.iter().map(|n| n.trim_start_matches("surface_").trim_end_matches(".csv").to_string()).collect();
    let mut legend = vec![];
    for (i, c) in curves.iter().enumerate() {
        let color = CURVES[i % CURVES.len()];
        svg.polyline(c, color);
        legend.push((labels[i].as_str(), color));
    }
    svg.crosses(&witness_marks(dir)?, WITNESS);
    legend.push(("witness", WITNESS));
    svg.legend(&legend);
    write(dir, "surfaces.svg", svg, written)
}

fn sigma_plot(dir: &Path, written: &mut Vec<String>) -> Result<(), RunError> {
    let sigma = Table::read(dir, "sigma.csv")?;
    let (x, f) = (sigma.col("x1")?, sigma.col("f")?);
    let curve: Vec<(f64, f64)> = sigma.on_axis().iter().map(|r| (r[x], r[f])).collect();
    let cloud = Table::read(dir, "cloud.csv")?;
    let pts = cloud.pairs("x1", "t")?;
    let xr = range(curve.iter().map(|p| p.0));
    let yr = pad(range(curve.iter().map(|p| p.1).chain(pts.iter().map(|p| p.1))));
    let mut svg = Svg::new(Frame { x: xr, y: yr, title: "lower envelope of the cloud".into(), xlabel: "x1".into(), ylabel: "t".into() });
    svg.polyline(&curve, CURVES[0]);
    svg.crosses(&pts, WITNESS);
    svg.legend(&[("graph", CURVES[0]), ("cloud event", WITNESS)]);
    write(dir, "sigma.svg", svg, written)
}

/// Red for positive values, blue for negative, opacity from `|v| / max|v|`;
/// at most 160 blocks per axis, each showing its largest-magnitude entry.
fn heat_map(dir: &Path, field: &str, marks: Option<&str>, name: &str, written: &mut Vec<String>) -> Result<(), RunError> {
    let t = Table::read(dir, field)?;
    let (ni, ji, vi) = (t.col("n")?, t.col("j")?, t.col("value")?);
    let nr = range(t.rows.iter().map(|r| r[ni]));
    let jr = range(t.rows.iter().map(|r| r[ji]));
    if !nr.0.is_finite() {
        return Err(RunError::Exec(format!("{field} is empty")));
    }
    let block = |span: f64| ((span + 1.0) / 160.0).ceil().max(1.0) as i64;
    let (bn, bj) = (block(nr.1 - nr.0), block(jr.1 - jr.0));
    let mut cells: std::collections::BTreeMap<(i64, i64), f64> = Default::default();
    let mut max = 0.0f64;
    for r in &t.rows {
        let v = r[vi];
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        max = max.max(v.abs());
        let key = (((r[ni] - nr.0) as i64) / bn, ((r[ji] - jr.0) as i64) / bj);
        let e = cells.entry(key).or_insert(0.0);
        if v.abs() > e.abs() {
            *e = v;
        }
    }
    let mut svg = Svg::new(Frame {
        x: (jr.0 - 0.5, jr.1 + 0.5),
        y: (nr.0 - 0.5, nr.1 + 0.5),
        title: format!("{} (max |value| {})", field.trim_end_matches(".csv"), tick_label(max)),
        xlabel: "site j".into(),
        ylabel: "level n".into(),
    });
    for (&(a, b), &v) in &cells {
        let n0 = nr.0 + (a * bn) as f64 - 0.5;
        let j0 = jr.0 + (b * bj) as f64 - 0.5;
        let alpha = (v.abs() / max).sqrt().max(0.08);
        let color = if v > 0.0 { POSITIVE } else { NEGATIVE };
        svg.cell((j0, j0 + bj as f64), (n0, n0 + bn as f64), color, alpha);
    }
    let mut legend = vec![("positive", POSITIVE), ("negative", NEGATIVE)];
    if let Some(m) = marks {
        let s = Table::read(dir, m)?;
        svg.crosses(&s.pairs("j", "n")?, "#111");
        legend.push(("source", "#111"));
    }
    svg.legend(&legend);
    write(dir, name, svg, written)
}
