use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use causalkit::classifier::{PointRefutation, SurfaceRefutation};
use causalkit::minkowski::{Point, Spatial};
use causalkit::setlib;
use causalkit::surfaces::Witness;
use causalkit::wavekit::{read_binary, read_csv, SupportClass};
use serde_json::Value;
use tempfile::TempDir;

fn causalkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("CAUSALKIT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = causalkit(args, dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir).unwrap().map(|e| e.unwrap()).map(|e| (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())).collect()
}

fn report_json(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let hull = config(d, "hull.toml", "[set]\nname = \"causal-hull\"\npoints = [[0, 0], [1, 2], [-1, 0.5]]\n");
    let wave = config(d, "wave.toml", "[wave]\nsource = \"random\"\ncount = 3\n");
    let runs: [&[&str]; 4] = [
        &["counterexample", "--svg"],
        &["classify", "--config", &hull, "--svg"],
        &["wave", "--config", &wave, "--seed", "7", "--svg"],
        &["sigma-minus", "--svg"],
    ];
    for args in runs {
        let (a, b) = (d.join("a"), d.join("b"));
        let first = ok(&[args, &["--out", a.to_str().unwrap()]].concat(), d);
        let second = ok(&[args, &["--out", b.to_str().unwrap()]].concat(), d);
        assert_eq!(first, second, "{args:?}");
        let (sa, sb) = (snapshot(&a), snapshot(&b));
        assert!(sa.contains_key("report.txt") && sa.contains_key("report.json"));
        assert_eq!(sa, sb, "{args:?}");
        fs::remove_dir_all(&a).unwrap();
        fs::remove_dir_all(&b).unwrap();
    }
}

#[test]
fn seeds_change_random_sources() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let wave = config(d, "wave.toml", "[wave]\nsource = \"random\"\n");
    ok(&["wave", "--config", &wave, "--seed", "1", "--out", "s1"], d);
    ok(&["wave", "--config", &wave, "--seed", "2", "--out", "s2"], d);
    assert_ne!(fs::read(d.join("s1/source.csv")).unwrap(), fs::read(d.join("s2/source.csv")).unwrap());
}

/// `(t=…, x=(…)) [ln|t|=…]` as printed in witness lines.
fn parse_witness(line: &str) -> Witness {
    let t0 = line.find("(t=").unwrap() + 3;
    let t_end = line[t0..].find(',').unwrap() + t0;
    let t: f64 = line[t0..t_end].parse().unwrap();
    let x0 = line.find("x=(").unwrap() + 3;
    let x_end = line[x0..].find(')').unwrap() + x0;
    let xs: Vec<f64> = line[x0..x_end].split(", ").map(|v| v.parse().unwrap()).collect();
    let log_abs_t = line.split("ln|t|=").nth(1).map(|v| v.trim().parse().unwrap());
    Witness { point: Point::new(t, Spatial::from_slice(&xs).unwrap()), log_abs_t }
}

#[test]
fn gaussian_band_witnesses_revalidate() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let text = ok(&["counterexample", "--out", "o"], d);
    let band = setlib::gaussian_band();
    assert!(text.contains("per-leaf slices: 50 of 50 standard leaves bounded"));
    assert!(text.contains("refutation: surface gaussian_surface"));
    assert!(text.contains("verdict: not spacelike compact"));
    let printed: Vec<Witness> = text.lines().filter(|l| l.trim_start().starts_with("witness")).map(parse_witness).collect();
    assert_eq!(printed.len(), 4);
    assert!(printed.iter().all(|w| band.witness_is_member(w)), "{printed:?}");
    let json = report_json(&d.join("o"));
    let r: SurfaceRefutation = serde_json::from_value(json["refutation"].clone()).unwrap();
    assert_eq!(r.witnesses, printed);
    let radii: Vec<f64> = r.witnesses.iter().map(|w| w.point.radius()).collect();
    assert_eq!(radii, [1.0, 10.0, 100.0, 1000.0]);
    for w in &r.witnesses {
        assert!(band.witness_is_member(w));
        // the witnesses lie on the refuting surface
        assert_eq!(r.surface.eval(&w.point.x), w.point.t);
    }
    let table = fs::read_to_string(d.join("o/witnesses.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("role,t,x1,log_abs_t,member"));
    assert!(table.lines().skip(1).all(|l| l.ends_with(",1")), "{table}");
}

#[test]
fn hyperbola_band_report() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = config(d, "tc.toml", "[counterexample]\nname = \"notTC\"\n");
    let text = ok(&["counterexample", "--config", &cfg, "--out", "o"], d);
    assert!(text.contains("inextendible causal curves bounded"));
    assert!(text.contains("fc: no") && text.contains("pc: yes"));
    assert!(text.contains("verdict: not timelike compact"));
    let band = setlib::hyperbola_band();
    let json = report_json(&d.join("o"));
    let fc: PointRefutation = serde_json::from_value(json["fc"]["payload"].clone()).unwrap();
    assert_eq!(fc.point, Point::d1(0.0, 0.0));
    for w in &fc.witnesses {
        assert!(band.contains(w) && fc.point.precedes(w), "{w}");
    }
    let printed: Vec<Point> = text.lines().filter(|l| l.trim_start().starts_with("witness")).map(|l| parse_witness(l).point).collect();
    assert_eq!(printed, fc.witnesses);
    assert_eq!(json["boost_points"]["members"], 0);
    assert_eq!(json["boost_points"]["sampled"], json["boost_points"]["in_past_of_set"]);
    assert!(d.join("o/surface_pc_certificate.csv").is_file());
}

#[test]
fn classify_writes_certificates_and_flags() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = config(d, "boost.toml", "[set]\nname = \"boost-plane\"\nvelocity = -0.5\n");
    let text = ok(&["classify", "--config", &cfg, "--out", "o"], d);
    assert!(text.contains("flags: sc=no fc=yes pc=yes tc=yes fsc=no psc=no"), "{text}");
    let json = report_json(&d.join("o"));
    let sc: SurfaceRefutation = serde_json::from_value(json["verdict"]["sc"]["payload"].clone()).unwrap();
    let (plane, _) = setlib::boost_plane(-0.5).unwrap();
    assert!(sc.witnesses.iter().all(|w| plane.witness_is_member(w)));
    for f in ["surface_fc_certificate.csv", "surface_pc_certificate.csv", "surface_sc_refutation.csv", "samples.csv", "slice.csv"] {
        assert!(d.join("o").join(f).is_file(), "{f}");
    }
    let samples = fs::read_to_string(d.join("o/samples.csv")).unwrap();
    assert_eq!(samples.lines().next(), Some("t,x1,member"));
    for line in samples.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[2] == 1.0, plane.contains(&Point::d1(cols[0], cols[1])), "{line}");
    }
}

#[test]
fn two_dimensional_hull() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = config(d, "h.toml", "[spacetime]\nd = 2\n[set]\nname = \"causal-hull\"\npoints = [[0, 0, 0], [1, 1, -1]]\n");
    let text = ok(&["classify", "--config", &cfg, "--out", "o", "--svg"], d);
    assert!(text.contains("sc: yes"), "{text}");
    let header = fs::read_to_string(d.join("o/slice.csv")).unwrap();
    assert!(header.starts_with("t,x1,x2,member\n"));
}

#[test]
fn wave_field_dump_and_cone_verdict() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let text = ok(&["wave", "--out", "o"], d);
    assert!(text.contains("support containment: exact cone"), "{text}");
    let bin = read_binary(fs::File::open(d.join("o/field.bin")).unwrap()).unwrap();
    assert_eq!(bin.class(), SupportClass::Psc);
    let csv = read_csv(std::io::BufReader::new(fs::File::open(d.join("o/field.csv")).unwrap()), *bin.grid(), SupportClass::Psc).unwrap();
    assert_eq!(csv, bin);
    // impulse at (1, 0): one new site on each side per level
    let b = bin.support_box().unwrap();
    assert_eq!((b.n_lo, b.n_hi, b.j_lo, b.j_hi), (2, 200, -198, 198));
    let adv = config(d, "adv.toml", "[wave]\noperator = \"advanced\"\nsteps = 60\nj_max = 70\n");
    let text = ok(&["wave", "--config", &adv, "--out", "a"], d);
    assert!(text.contains("field class: fsc") && text.contains("exact cone"), "{text}");
}

#[test]
fn sigma_minus_lies_below_the_cloud() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let text = ok(&["sigma-minus", "--out", "o", "--svg"], d);
    assert!(text.contains("events in the causal future of the graph: 3 of 3"));
    assert!(text.contains("achronal on the samples: yes"));
    let table = fs::read_to_string(d.join("o/sigma.csv")).unwrap();
    let rows: Vec<(f64, f64)> = table
        .lines()
        .skip(1)
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    let cloud = [(-1.0, -2.0), (-2.0, 0.5), (-0.5, 2.5)];
    for (x, f) in rows {
        let oracle = cloud.iter().map(|&(t, xk): &(f64, f64)| t + (x - xk).abs()).fold(0.0, f64::min);
        assert!((f - oracle).abs() <= 1e-12, "x={x}: {f} vs {oracle}");
    }
    let svg = fs::read_to_string(d.join("o/sigma.svg")).unwrap();
    assert!(svg.contains(">x1<") && svg.contains(">t<") && svg.contains("<polyline"));
}

#[test]
fn plots_carry_axes_and_witness_markers() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let text = ok(&["counterexample", "--out", "o", "--svg"], d);
    for name in ["set.svg", "slice.svg", "surfaces.svg"] {
        assert!(text.contains(&format!("plot: {name}")));
        let svg = fs::read_to_string(d.join("o").join(name)).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(">x1<"), "{name}");
    }
    let set = fs::read_to_string(d.join("o/set.svg")).unwrap();
    assert!(set.contains("<path d=\"M"), "witness marker missing");
    assert!(set.contains("leaf t = 1"));
    ok(&["wave", "--out", "w", "--svg"], d);
    let field = fs::read_to_string(d.join("w/field.svg")).unwrap();
    assert!(field.contains("fill-opacity") && field.contains(">level n<"));
}

#[test]
fn pairing_and_its_guard() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let text = ok(&["pair", "--out", "o"], d);
    assert!(text.contains("guard: sc <-> tc admitted"));
    let json = report_json(&d.join("o"));
    assert_eq!(json["pairing"], 0.375);
    let adj = &json["adjointness"];
    assert_eq!(adj["retarded_side"], adj["advanced_side"]);
    let bad = config(d, "bad.toml", "[pair.phi]\nclass = \"fc\"\nevents = [[5, 0, 1.0]]\n[pair.f]\nclass = \"fc\"\nevents = [[6, 0, 1.0]]\n");
    let out = causalkit(&["pair", "--config", &bad, "--out", "x"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fc <-> psc"));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cases: [(&str, &str, &str, i32); 8] = [
        ("unknown.toml", "bogus = 1\n", "wave", 2),
        ("nested.toml", "[wave]\nspeed = 2\n", "wave", 2),
        ("schedule.toml", "[budget.schedule]\nratio = 0.5\n", "counterexample", 2),
        ("velocity.toml", "[set]\nname = \"boost-plane\"\nvelocity = 1.5\n", "classify", 2),
        ("cfl.toml", "[wave]\ndt = 2.0\n", "wave", 2),
        ("task.toml", "task = \"wave\"\n", "pair", 2),
        ("margin.toml", "[wave]\nat = [100, 200]\n", "wave", 1),
        ("fine.toml", "[wave]\nsteps = 20\nj_max = 30\n", "wave", 0),
    ];
    for (name, body, task, code) in cases {
        let cfg = config(d, name, body);
        let out = causalkit(&[task, "--config", &cfg, "--out", "x"], d);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(causalkit(&["classify", "--out", "x"], d).status.code(), Some(2));
    assert_eq!(causalkit(&["wave", "--config", "missing.toml"], d).status.code(), Some(2));
    assert_eq!(causalkit(&["wave", "--bogus"], d).status.code(), Some(2));
}

#[test]
fn output_directory_precedence() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = config(d, "w.toml", "[wave]\nsteps = 10\nj_max = 20\n[output]\ndir = \"from_config\"\nreport = \"run.txt\"\n");
    ok(&["wave", "--config", &cfg], d);
    assert!(d.join("from_config/run.txt").is_file() && d.join("from_config/run.json").is_file());
    let run = |extra: &[&str]| {
        let status = Command::new(env!("CARGO_BIN_EXE_causalkit"))
            .args([&["wave", "--config", cfg.as_str()], extra].concat())
            .current_dir(d)
            .env("CAUSALKIT_OUT_DIR", "from_env")
            .status()
            .unwrap();
        assert!(status.success());
    };
    run(&[]);
    assert!(d.join("from_env/run.txt").is_file());
    run(&["--out", "from_flag"]);
    assert!(d.join("from_flag/run.txt").is_file());
}

#[test]
fn shipped_scenarios_run() {
    let tmp = TempDir::new().unwrap();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut names: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for path in names {
        let body = fs::read_to_string(&path).unwrap();
        let task = body.lines().find_map(|l| l.strip_prefix("task = ")).unwrap().trim_matches('"').to_string();
        let out = tmp.path().join(path.file_stem().unwrap());
        ok(&[&task, "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()], tmp.path());
        assert!(out.join("report.txt").is_file(), "{}", path.display());
    }
}
