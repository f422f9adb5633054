use std::io::{BufRead, Read, Write};

use super::{Grid, LatticeField, SupportClass};
use crate::error::{Error, Result};
use crate::export::fmt_f64;

const MAGIC: &[u8; 4] = b"LATF";
const VERSION: u32 = 1;

/// `n,j,value` for every node, time-major.
pub fn write_csv<W: Write>(field: &LatticeField, mut w: W) -> Result<()> {
    let g = field.grid();
    writeln!(w, "n,j,value")?;
    for n in g.n_min..=g.n_max {
        for (k, v) in field.row(n).iter().enumerate() {
            writeln!(w, "{},{},{}", n, k as i64 - g.j_max, fmt_f64(*v))?;
        }
    }
    Ok(())
}

/// Reads `n,j,value` rows onto `grid`; nodes not listed are zero.
pub fn read_csv<R: BufRead>(r: R, grid: Grid, class: SupportClass) -> Result<LatticeField> {
    let mut values = vec![0.0; grid.rows() * grid.cols()];
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "n,j,value" {
                return Err(Error::Parse(format!("unexpected header {line:?}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: {line:?}", i + 1));
        let mut parts = line.split(',');
        let n: i64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
        let j: i64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
        let v: f64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || !grid.contains(n, j) {
            return Err(bad());
        }
        values[grid.index(n, j)] = v;
    }
    LatticeField::from_values(grid, values, class)
}

/// Header `LATF`, version, `Δt`, `Δx`, `n_min`, `n_max`, `J`, class tag
/// (length-prefixed UTF-8), then the row-major payload. Little-endian throughout.
pub fn write_binary<W: Write>(field: &LatticeField, mut w: W) -> Result<()> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&g.dt.to_le_bytes())?;
    w.write_all(&g.dx.to_le_bytes())?;
    for e in [g.n_min, g.n_max, g.j_max] {
        w.write_all(&e.to_le_bytes())?;
    }
    let tag = field.class().name().as_bytes();
    w.write_all(&(tag.len() as u32).to_le_bytes())?;
    w.write_all(tag)?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<LatticeField> {
    fn take<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        r.read_exact(&mut b).map_err(|e| Error::Parse(format!("truncated field dump: {e}")))?;
        Ok(b)
    }
    if &take::<4>(&mut r)? != MAGIC {
        return Err(Error::Parse("not a lattice field dump".into()));
    }
    let version = u32::from_le_bytes(take(&mut r)?);
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported dump version {version}")));
    }
    let dt = f64::from_le_bytes(take(&mut r)?);
    let dx = f64::from_le_bytes(take(&mut r)?);
    let n_min = i64::from_le_bytes(take(&mut r)?);
    let n_max = i64::from_le_bytes(take(&mut r)?);
    let j_max = i64::from_le_bytes(take(&mut r)?);
    let grid = Grid::with_range(dt, dx, n_min, n_max, j_max)?;
    let len = u32::from_le_bytes(take(&mut r)?) as usize;
    if len > 64 {
        return Err(Error::Parse(format!("class tag of {len} bytes")));
    }
    let mut tag = vec![0u8; len];
    r.read_exact(&mut tag).map_err(|e| Error::Parse(format!("truncated field dump: {e}")))?;
    let class = SupportClass::parse(std::str::from_utf8(&tag).map_err(|e| Error::Parse(e.to_string()))?)?;
    let count = grid.rows() * grid.cols();
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(f64::from_le_bytes(take(&mut r)?));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Parse("trailing bytes after payload".into()));
    }
    LatticeField::from_values(grid, values, class)
}
