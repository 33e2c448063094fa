use super::grid::CylinderGrid;
use super::field::HarmonicField;
use crate::error::{Error, Result};
use crate::format::CsvTable;

pub const FOLH_MAGIC: &[u8; 4] = b"FOLH";
pub const FOLH_VERSION: u32 = 1;

/// `x, theta, value` rows in x-major order.
pub fn field_csv(field: &HarmonicField) -> CsvTable {
    let g = &field.grid;
    let mut t = CsvTable::new(["x", "theta", "value"]);
    for i in 0..g.nx {
        for j in 0..g.ntheta {
            t.push_floats(&[g.x(i), g.theta(j), field.at(i, j)]);
        }
    }
    t
}

/// 16-byte header `FOLH`, version, `nx`, `ntheta` (little-endian `u32`),
/// then the values as little-endian `f64`, x-major.
pub fn encode_folh(grid: &CylinderGrid, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * values.len());
    out.extend_from_slice(FOLH_MAGIC);
    out.extend_from_slice(&FOLH_VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.nx as u32).to_le_bytes());
    out.extend_from_slice(&(grid.ntheta as u32).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Inverse of [`encode_folh`]: `(nx, ntheta, values)`.
pub fn decode_folh(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
    if bytes.len() < 16 || &bytes[..4] != FOLH_MAGIC {
        return Err(Error::Schema("not a FOLH dump".into()));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != FOLH_VERSION {
        return Err(Error::Schema(format!("FOLH version {version} unsupported")));
    }
    let (nx, nt) = (word(8) as usize, word(12) as usize);
    let body = &bytes[16..];
    if body.len() != 8 * nx * nt {
        return Err(Error::Schema(format!(
            "FOLH body has {} bytes, header promises {}x{} floats",
            body.len(),
            nx,
            nt
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok((nx, nt, values))
}
