//! File formats: binary PGM (P5, 8-bit) images, CSV signals, and atomic
//! writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use holo_core::{Complex64, ComplexArray, Shape};

use crate::error::{CliError, CliResult};

/// A parse failure located by byte offset (PGM) or 1-based line (CSV).
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError(pub String);

pub fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

/// Writes via a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Returns the value and the offset of its first digit.
    fn number(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError(format!("byte {start}: expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map(|v| (v, start))
            .map_err(|_| ParseError(format!("byte {start}: {what} out of range")))
    }
}

/// Decodes a P5 image into amplitudes `pixel / maxval`.
pub fn parse_pgm(bytes: &[u8]) -> Result<ComplexArray, ParseError> {
    if !bytes.starts_with(b"P5") {
        return Err(ParseError("byte 0: expected magic \"P5\"".into()));
    }
    let mut h = Header { bytes, pos: 2 };
    if !h.bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(ParseError("byte 2: expected whitespace after magic".into()));
    }
    let (width, width_at) = h.number("width")?;
    let (height, _) = h.number("height")?;
    let (maxval, maxval_at) = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ParseError(format!("byte {width_at}: empty image {width}x{height}")));
    }
    if !(1..=255).contains(&maxval) {
        return Err(ParseError(format!(
            "byte {maxval_at}: maxval {maxval} unsupported, only 8-bit images are read"
        )));
    }
    if !h.bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(ParseError(format!("byte {}: expected whitespace after maxval", h.pos)));
    }
    let data_at = h.pos + 1;
    let pixels = &bytes[data_at..];
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ParseError(format!("byte {width_at}: image too large")))?;
    if pixels.len() < expected {
        return Err(ParseError(format!(
            "byte {}: truncated raster, {} of {expected} pixels",
            bytes.len(),
            pixels.len()
        )));
    }
    if pixels.len() > expected {
        return Err(ParseError(format!(
            "byte {}: trailing data after raster",
            data_at + expected
        )));
    }
    if let Some(i) = pixels.iter().position(|&p| p as usize > maxval) {
        return Err(ParseError(format!(
            "byte {}: pixel {} exceeds maxval",
            data_at + i,
            pixels[i]
        )));
    }
    let values: Vec<f64> = pixels.iter().map(|&p| p as f64 / maxval as f64).collect();
    Ok(ComplexArray::from_real(
        Shape::D2 {
            rows: height,
            cols: width,
        },
        &values,
    )
    .expect("finite pixels"))
}

/// Clamps to `[0, 1]` and rounds half up onto the 8-bit grid.
pub fn quantize(amplitude: f64) -> u8 {
    (amplitude.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

pub fn encode_pgm(rows: usize, cols: usize, amplitudes: &[f64]) -> Vec<u8> {
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend(amplitudes.iter().map(|&a| quantize(a)));
    out
}

/// One sample per line: `value` or `re,im`. Blank lines are ignored.
pub fn parse_signal(text: &str) -> Result<ComplexArray, ParseError> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError(format!("line {}: not a finite number: {:?}", i + 1, s.trim())))
        };
        let z = match line.split(',').collect::<Vec<_>>().as_slice() {
            [re] => Complex64::new(field(re)?, 0.0),
            [re, im] => Complex64::new(field(re)?, field(im)?),
            _ => return Err(ParseError(format!("line {}: expected 1 or 2 columns", i + 1))),
        };
        samples.push(z);
    }
    if samples.is_empty() {
        return Err(ParseError("line 1: no samples".into()));
    }
    Ok(ComplexArray::new_1d(samples).expect("finite samples"))
}

/// Real signals are written one value per line, complex ones as `re,im`.
pub fn encode_signal(samples: &[Complex64]) -> Vec<u8> {
    let complex = samples.iter().any(|z| z.im != 0.0);
    let mut out = String::with_capacity(samples.len() * 20);
    for z in samples {
        if complex {
            out.push_str(&format!("{},{}\n", z.re, z.im));
        } else {
            out.push_str(&format!("{}\n", z.re));
        }
    }
    out.into_bytes()
}

/// Loads a `.pgm` image or, for any other extension, a CSV signal.
pub fn load_input(path: &Path) -> CliResult<ComplexArray> {
    let bytes = read_bytes(path)?;
    let parsed = if is_pgm(path) {
        parse_pgm(&bytes)
    } else {
        std::str::from_utf8(&bytes)
            .map_err(|e| ParseError(format!("byte {}: invalid UTF-8", e.valid_up_to())))
            .and_then(parse_signal)
    };
    parsed.map_err(|e| CliError::parse(path, e.0))
}

/// Writes amplitudes as a PGM (2D) or CSV (1D), picked by shape; the path's
/// extension must agree.
pub fn save_amplitudes(path: &Path, shape: Shape, amplitudes: &[f64]) -> CliResult<()> {
    let bytes = match (shape, is_pgm(path)) {
        (Shape::D2 { rows, cols }, true) => encode_pgm(rows, cols, amplitudes),
        (Shape::D1(_), false) => {
            let samples: Vec<Complex64> = amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
            encode_signal(&samples)
        }
        (Shape::D2 { .. }, false) => {
            return Err(CliError::usage(format!(
                "{}: 2D output must be a .pgm file",
                path.display()
            )))
        }
        (Shape::D1(_), true) => {
            return Err(CliError::usage(format!(
                "{}: 1D output cannot be a .pgm file",
                path.display()
            )))
        }
    };
    write_atomic(path, &bytes)
}
