//! Plain-text tables for surfaces and set samples.

use std::io::Write;

use crate::error::Result;
use crate::minkowski::{Point, Spatial};
use crate::setlib::AnalyticSet;
use crate::surfaces::SurfaceGraph;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn coord_header(dim: usize) -> String {
    (1..=dim).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",")
}

fn coords(x: &Spatial) -> String {
    x.as_slice().iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
}

/// `x..., f` for each sample position.
pub fn write_surface_csv<W: Write>(s: &SurfaceGraph, xs: &[Spatial], mut w: W) -> Result<()> {
    writeln!(w, "{},f", coord_header(s.dim().get()))?;
    for x in xs {
        writeln!(w, "{},{}", coords(x), fmt_f64(s.eval(x)))?;
    }
    Ok(())
}

/// `t, x..., member` with the membership flag as 0/1.
pub fn write_set_csv<W: Write>(a: &AnalyticSet, points: &[Point], mut w: W) -> Result<()> {
    writeln!(w, "t,{},member", coord_header(a.dim().get()))?;
    for p in points {
        writeln!(w, "{},{},{}", fmt_f64(p.t), coords(&p.x), u8::from(a.contains(p)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setlib;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn tables() {
        let mut buf = vec![];
        write_surface_csv(&setlib::gaussian_surface(), &[Spatial::d1(0.0)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x1,f\n0.0000000000000000e0,1.0000000000000000e0\n");
        let mut buf = vec![];
        let band = setlib::gaussian_band();
        write_set_csv(&band, &[Point::d1(1.0, 0.0), Point::d1(1.0, 1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x1,member\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(",1"));
        assert!(text.lines().nth(2).unwrap().ends_with(",0"));
    }
}
