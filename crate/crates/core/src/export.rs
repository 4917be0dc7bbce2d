//! CSV and binary writers.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so every
//! value reads back bit for bit. Infinity is written as `inf`.

use std::io::{self, Write};

use crate::diode::{DirectionalDensity, WorkingAreaCurve};
use crate::single_photon::SweepRow;
use crate::two_photon::TwoPhotonMap;

/// Leading bytes of a binary map file.
pub const MAP_MAGIC: [u8; 8] = *b"CDMAP\x00\x01\x00";

pub const SWEEP_HEADER: &str = "detuning_over_Gamma,gamma1_over_Gamma,T,R,loss";
pub const CURVE_HEADER: &str = "gamma1_over_Gamma,Gamma_abs_x,branch,diverges";
pub const DIRECTIONAL_HEADER: &str = "gamma1_over_Gamma,Gamma_x,psi_tt_sq_left,psi_tt_sq_right";

/// Shortest representation that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            num(r.detuning_over_gamma),
            num(r.gamma1_over_gamma),
            num(r.transmittance),
            num(r.reflectance),
            num(r.loss)
        )?;
    }
    Ok(())
}

/// One row per grid point, x1 outer. Reflection columns appear only when the
/// map carries them.
pub fn write_map_csv<W: Write>(mut w: W, map: &TwoPhotonMap) -> io::Result<()> {
    let full = map.rr.is_some() && map.rt.is_some();
    if full {
        writeln!(w, "x1,x2,psi_tt_sq,psi_rr_sq,psi_rt_sq")?;
    } else {
        writeln!(w, "x1,x2,psi_tt_sq")?;
    }
    let n = map.size();
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            write!(w, "{},{},{}", num(map.x[i]), num(map.x[j]), num(map.tt[k]))?;
            if let (Some(rr), Some(rt)) = (&map.rr, &map.rt) {
                write!(w, ",{},{}", num(rr[k]), num(rt[k]))?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// |ψ_tt|² as a little-endian binary file: 8-byte magic, u32 rows, u32 cols,
/// f64 x_min, f64 x_max, then rows·cols f64 values, x1 outer.
pub fn write_map_binary<W: Write>(mut w: W, map: &TwoPhotonMap) -> io::Result<()> {
    let n = map.size();
    let n32 = u32::try_from(n).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "map too large"))?;
    w.write_all(&MAP_MAGIC)?;
    w.write_all(&n32.to_le_bytes())?;
    w.write_all(&n32.to_le_bytes())?;
    w.write_all(&map.x.first().copied().unwrap_or(0.0).to_le_bytes())?;
    w.write_all(&map.x.last().copied().unwrap_or(0.0).to_le_bytes())?;
    for v in &map.tt {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Header and values of a binary map.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMap {
    pub rows: u32,
    pub cols: u32,
    pub x_min: f64,
    pub x_max: f64,
    pub values: Vec<f64>,
}

pub fn read_map_binary(bytes: &[u8]) -> io::Result<BinaryMap> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    if bytes.len() < 32 || bytes[..8] != MAP_MAGIC {
        return Err(bad("not a binary map"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (rows, cols) = (u32_at(8), u32_at(12));
    let count = rows as usize * cols as usize;
    if bytes.len() != 32 + 8 * count {
        return Err(bad("length does not match header"));
    }
    Ok(BinaryMap {
        rows,
        cols,
        x_min: f64_at(16),
        x_max: f64_at(24),
        values: (0..count).map(|i| f64_at(32 + 8 * i)).collect(),
    })
}

pub fn write_curve_csv<W: Write>(mut w: W, curve: &WorkingAreaCurve) -> io::Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for p in &curve.points {
        writeln!(
            w,
            "{},{},{},{}",
            num(p.gamma1_over_gamma),
            num(p.gamma_abs_x),
            p.branch,
            u8::from(p.diverges)
        )?;
    }
    Ok(())
}

pub fn write_directional_csv<W: Write>(mut w: W, rows: &[DirectionalDensity]) -> io::Result<()> {
    writeln!(w, "{DIRECTIONAL_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            num(r.gamma1_over_gamma),
            num(r.gamma_x),
            num(r.left),
            num(r.right)
        )?;
    }
    Ok(())
}

/// Plain numeric table under a caller-supplied header.
pub fn write_table<W: Write>(mut w: W, header: &str, rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(w, "{header}")?;
    for r in rows {
        let line: Vec<String> = r.iter().map(|&v| num(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}
