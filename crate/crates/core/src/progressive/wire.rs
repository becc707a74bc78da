//! `HPKT` packet encoding:
//!
//! ```text
//! magic "HPKT" | version u16 | packet_id u32 | total u32 | ndim u8
//! | dims u32 × ndim | (start u32, len u32) × ndim
//! | payload (re f64, im f64) × window size | crc32 u32
//! ```
//!
//! Little-endian throughout; the CRC covers every preceding byte.

use crate::array::Shape;
use crate::error::{Error, Result};
use crate::holographic::{Span, WindowSpec};
use crate::wire::{dim_u32, put_complex, Reader};

use super::Packet;

pub const HPKT_MAGIC: &[u8; 4] = b"HPKT";
pub const HPKT_VERSION: u16 = 1;

fn body(p: &Packet) -> Result<Vec<u8>> {
    let shape = p.source_shape;
    let spans = p.window.spans();
    if spans.len() != shape.ndim() {
        return Err(Error::invalid("window and source dimensionality differ"));
    }
    let mut out = Vec::with_capacity(32 + p.payload.len() * 16);
    out.extend_from_slice(HPKT_MAGIC);
    out.extend_from_slice(&HPKT_VERSION.to_le_bytes());
    out.extend_from_slice(&p.packet_id.to_le_bytes());
    out.extend_from_slice(&p.total_packets.to_le_bytes());
    out.push(shape.ndim() as u8);
    for d in shape.dims() {
        out.extend_from_slice(&dim_u32(d, "dimension")?.to_le_bytes());
    }
    for s in spans {
        out.extend_from_slice(&dim_u32(s.start, "window start")?.to_le_bytes());
        out.extend_from_slice(&dim_u32(s.len, "window length")?.to_le_bytes());
    }
    put_complex(&mut out, &p.payload);
    Ok(out)
}

pub(super) fn checksum(p: &Packet) -> Result<u32> {
    Ok(crc32fast::hash(&body(p)?))
}

pub fn encode_packet(p: &Packet) -> Result<Vec<u8>> {
    let mut out = body(p)?;
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

/// Parses and CRC-checks a packet. Structural problems are
/// [`Error::Format`]; a checksum mismatch is [`Error::Integrity`].
pub fn decode_packet(bytes: &[u8]) -> Result<Packet> {
    if bytes.len() < 4 {
        return Err(Error::Format {
            what: "packet",
            offset: 0,
            reason: "too short".into(),
        });
    }
    let (content, crc_bytes) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(crc_bytes.try_into().expect("split at len - 4"));
    let actual = crc32fast::hash(content);
    if stored != actual {
        return Err(Error::Integrity(format!(
            "packet checksum mismatch: stored {stored:08x}, computed {actual:08x}"
        )));
    }

    let mut r = Reader::new(content, "packet");
    if r.take(4)? != HPKT_MAGIC {
        return Err(r.error(0, "bad magic, expected \"HPKT\""));
    }
    let version = r.u16()?;
    if version != HPKT_VERSION {
        return Err(r.error(4, format!("unsupported version {version}")));
    }
    let packet_id = r.u32()?;
    let total_packets = r.u32()?;
    let ndim_at = r.position();
    let ndim = r.u8()?;
    if !(1..=2).contains(&ndim) {
        return Err(r.error(ndim_at, format!("unsupported ndim {ndim}")));
    }
    let dims_at = r.position();
    let dims = (0..ndim)
        .map(|_| r.u32().map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let source_shape = Shape::from_dims(&dims).map_err(|e| r.error(dims_at, e.to_string()))?;
    let window_at = r.position();
    let spans = (0..ndim)
        .map(|_| Ok(Span::new(r.u32()? as usize, r.u32()? as usize)))
        .collect::<Result<Vec<_>>>()?;
    let window = WindowSpec::from_spans(&spans)?;
    window
        .validate(source_shape)
        .map_err(|e| r.error(window_at, e.to_string()))?;
    let payload = (0..window.size()).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(Packet {
        packet_id,
        total_packets,
        window,
        payload,
        source_shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holographic::{encode, generate_phase};
    use crate::progressive::partition;
    use crate::ComplexArray;
    use proptest::prelude::*;

    fn packets(shape: Shape, n: usize) -> Vec<Packet> {
        let img = ComplexArray::from_real(shape, &vec![0.5; shape.len()]).unwrap();
        partition(&encode(&img, &generate_phase(1, shape).unwrap()).unwrap(), n).unwrap()
    }

    #[test]
    fn layout_of_1d_packet() {
        let p = &packets(Shape::D1(16), 4)[2];
        let bytes = encode_packet(p).unwrap();
        assert_eq!(&bytes[..4], b"HPKT");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(&bytes[6..10], &[2, 0, 0, 0]);
        assert_eq!(&bytes[10..14], &[4, 0, 0, 0]);
        assert_eq!(bytes[14], 1);
        assert_eq!(&bytes[15..19], &[16, 0, 0, 0]);
        assert_eq!(&bytes[19..27], &[8, 0, 0, 0, 4, 0, 0, 0]);
        assert_eq!(bytes.len(), 27 + 4 * 16 + 4);
        let crc = crc32fast::hash(&bytes[..bytes.len() - 4]);
        assert_eq!(&bytes[bytes.len() - 4..], &crc.to_le_bytes());
        assert_eq!(p.checksum().unwrap(), crc);
    }

    #[test]
    fn corruption_is_detected() {
        let p = &packets(Shape::D1(16), 4)[1];
        let bytes = encode_packet(p).unwrap();
        for i in [0, 7, 30, bytes.len() - 1] {
            let mut bad = bytes.clone();
            bad[i] ^= 0x40;
            assert!(matches!(decode_packet(&bad), Err(Error::Integrity(_))), "byte {i}");
        }
        assert!(matches!(decode_packet(&bytes[..3]), Err(Error::Format { .. })));
    }

    #[test]
    fn structurally_bad_packet_with_valid_crc() {
        let p = &packets(Shape::D1(16), 4)[1];
        let mut bytes = encode_packet(p).unwrap();
        bytes.truncate(bytes.len() - 4);
        bytes[19] = 15; // window start beyond the axis
        let crc = crc32fast::hash(&bytes);
        bytes.extend_from_slice(&crc.to_le_bytes());
        assert!(matches!(decode_packet(&bytes), Err(Error::Format { offset: 19, .. })));
    }

    proptest! {
        #[test]
        fn round_trip(rows in 1usize..5, cols in 1usize..5, n in 1usize..4, two_d in any::<bool>()) {
            let lead = rows * n;
            let shape = if two_d { Shape::D2 { rows: lead, cols } } else { Shape::D1(lead * cols) };
            for p in packets(shape, n) {
                prop_assert_eq!(decode_packet(&encode_packet(&p).unwrap()).unwrap(), p);
            }
        }
    }
}
