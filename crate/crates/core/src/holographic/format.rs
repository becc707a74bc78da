//! `HOLO` container:
//!
//! ```text
//! magic "HOLO" | version u16 | ndim u8 | dims u32 × ndim | phase-mode u8
//! | seed u64 (mode 0) or phase raster f64 × N (mode 1)
//! | data (re f64, im f64) × N, row-major
//! ```
//!
//! All integers and floats are little-endian.

use crate::array::{ComplexArray, Shape};
use crate::error::Result;
use crate::wire::{dim_u32, put_complex, Reader};

use super::{Hologram, PhaseField, PhaseProvenance};

pub const HOLO_MAGIC: &[u8; 4] = b"HOLO";
pub const HOLO_VERSION: u16 = 1;

const MODE_SEED: u8 = 0;
const MODE_EMBEDDED: u8 = 1;

pub fn encode_hologram(h: &Hologram) -> Result<Vec<u8>> {
    let shape = h.shape();
    let mut out = Vec::with_capacity(16 + shape.len() * 24);
    out.extend_from_slice(HOLO_MAGIC);
    out.extend_from_slice(&HOLO_VERSION.to_le_bytes());
    out.push(shape.ndim() as u8);
    for d in shape.dims() {
        out.extend_from_slice(&dim_u32(d, "dimension")?.to_le_bytes());
    }
    match h.provenance() {
        PhaseProvenance::Seed(seed) => {
            out.push(MODE_SEED);
            out.extend_from_slice(&seed.to_le_bytes());
        }
        PhaseProvenance::Embedded(field) => {
            out.push(MODE_EMBEDDED);
            for v in field.values() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    put_complex(&mut out, h.data().as_slice());
    Ok(out)
}

pub fn decode_hologram(bytes: &[u8]) -> Result<Hologram> {
    let mut r = Reader::new(bytes, "hologram");
    if r.take(4)? != HOLO_MAGIC {
        return Err(r.error(0, "bad magic, expected \"HOLO\""));
    }
    let version = r.u16()?;
    if version != HOLO_VERSION {
        return Err(r.error(4, format!("unsupported version {version}")));
    }
    let ndim_at = r.position();
    let ndim = r.u8()?;
    if !(1..=2).contains(&ndim) {
        return Err(r.error(ndim_at, format!("unsupported ndim {ndim}")));
    }
    let dims_at = r.position();
    let dims = (0..ndim)
        .map(|_| r.u32().map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let shape = Shape::from_dims(&dims).map_err(|e| r.error(dims_at, e.to_string()))?;
    let n = shape.len();
    // reject absurd headers before allocating
    if bytes.len() < r.position() + n.saturating_mul(16) {
        return Err(r.error(r.position(), format!("truncated: {n} samples declared")));
    }

    let mode_at = r.position();
    let phase = match r.u8()? {
        MODE_SEED => PhaseProvenance::Seed(r.u64()?),
        MODE_EMBEDDED => {
            let raster_at = r.position();
            let values = (0..n).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            if values.iter().any(|v| !(0.0..1.0).contains(v)) {
                return Err(r.error(raster_at, "phase value outside [0, 1)"));
            }
            PhaseProvenance::Embedded(PhaseField::from_values(shape, values)?)
        }
        other => return Err(r.error(mode_at, format!("unknown phase mode {other}"))),
    };
    let data = (0..n).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Hologram::from_parts(ComplexArray::new(shape, data)?, phase)
}
