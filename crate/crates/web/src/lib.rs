//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes and returns flat numeric arrays so the page can hand
//! them straight to a canvas. The exports are thin wrappers over plain
//! functions that also build and test on native targets.

use causalkit::minkowski::{CompactCloud, Point, Spatial};
use causalkit::setlib::{self, LeafSlice};
use causalkit::surfaces::construct_sigma_minus;
use causalkit::wavekit::{green_retarded, Grid, LatticeField};
use wasm_bindgen::prelude::*;

/// Radius of the gaussian band's slice on the leaf `t`; `-1` when the slice is empty.
#[wasm_bindgen]
pub fn band_slice_radius(t: f64) -> f64 {
    match setlib::gaussian_band().leaf_slice(t) {
        Some(LeafSlice::Within(r)) => r,
        _ => -1.0,
    }
}

/// Membership of the gaussian band on a `cols × rows` raster covering
/// `[-half, half] × [t_lo, t_hi]`, top row first.
#[wasm_bindgen]
pub fn band_raster(cols: usize, rows: usize, half: f64, t_lo: f64, t_hi: f64) -> Vec<u8> {
    let band = setlib::gaussian_band();
    let mut out = Vec::with_capacity(cols * rows);
    for r in 0..rows {
        let t = t_hi - (t_hi - t_lo) * (r as f64 + 0.5) / rows as f64;
        for c in 0..cols {
            let x = -half + 2.0 * half * (c as f64 + 0.5) / cols as f64;
            out.push(u8::from(band.contains(&Point::d1(t, x))));
        }
    }
    out
}

pub fn envelope_heights(events: &[f64], xs: &[f64]) -> Result<Vec<f64>, String> {
    if events.len() % 2 != 0 {
        return Err("events must be (t, x) pairs".into());
    }
    let pts = events.chunks(2).map(|p| Point::d1(p[0], p[1])).collect();
    let cloud = CompactCloud::minkowski(pts).map_err(|e| e.to_string())?;
    let graph = construct_sigma_minus(&cloud).map_err(|e| e.to_string())?;
    Ok(xs.iter().map(|&x| graph.eval(&Spatial::d1(x))).collect())
}

pub fn impulse_response(lambda: f64, steps: i64, j_max: i64, n0: i64, j0: i64) -> Result<Vec<f64>, String> {
    let run = || -> causalkit::Result<Vec<f64>> {
        let grid = Grid::with_range(lambda, 1.0, 0, steps, j_max)?;
        let source = LatticeField::impulse(grid, n0, j0)?;
        Ok(green_retarded(&source)?.values().to_vec())
    };
    run().map_err(|e| e.to_string())
}

/// Heights of the lower envelope of the events `[t0, x0, t1, x1, …]` at `xs`.
#[wasm_bindgen]
pub fn sigma_minus(events: &[f64], xs: &[f64]) -> Result<Vec<f64>, JsError> {
    envelope_heights(events, xs).map_err(|e| JsError::new(&e))
}

/// Retarded response to a unit impulse at `(n0, j0)` on levels `0..=steps`
/// and sites `-j_max..=j_max` with `Δx = 1`, `Δt = λ`; row-major from level 0.
#[wasm_bindgen]
pub fn retarded_impulse(lambda: f64, steps: i32, j_max: i32, n0: i32, j0: i32) -> Result<Vec<f64>, JsError> {
    impulse_response(lambda, steps.into(), j_max.into(), n0.into(), j0.into()).map_err(|e| JsError::new(&e))
}
