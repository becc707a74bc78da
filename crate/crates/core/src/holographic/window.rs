use serde::{Deserialize, Serialize};

use crate::array::Shape;
use crate::error::{Error, Result};

/// Contiguous index interval `[start, start + len)` along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    pub fn full(m: usize) -> Self {
        Self { start: 0, len: m }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.start && i < self.end()
    }

    fn validate(&self, m: usize, axis: &str) -> Result<()> {
        if self.len == 0 {
            return Err(Error::invalid(format!("{axis} window length must be at least 1")));
        }
        if self.start.checked_add(self.len).is_none_or(|end| end > m) {
            return Err(Error::invalid(format!(
                "{axis} window [{}, {}) exceeds axis length {m}",
                self.start,
                self.start.saturating_add(self.len)
            )));
        }
        Ok(())
    }
}

/// A crop of a hologram: an interval in 1D, an axis-aligned rectangle in 2D.
/// Windows never wrap around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindowSpec {
    D1(Span),
    D2 { rows: Span, cols: Span },
}

impl WindowSpec {
    pub fn d1(start: usize, len: usize) -> Self {
        WindowSpec::D1(Span::new(start, len))
    }

    pub fn d2(row_start: usize, row_len: usize, col_start: usize, col_len: usize) -> Self {
        WindowSpec::D2 {
            rows: Span::new(row_start, row_len),
            cols: Span::new(col_start, col_len),
        }
    }

    /// The window covering every sample of `shape`.
    pub fn full(shape: Shape) -> Self {
        match shape {
            Shape::D1(m) => WindowSpec::D1(Span::full(m)),
            Shape::D2 { rows, cols } => WindowSpec::D2 {
                rows: Span::full(rows),
                cols: Span::full(cols),
            },
        }
    }

    pub fn spans(&self) -> Vec<Span> {
        match *self {
            WindowSpec::D1(s) => vec![s],
            WindowSpec::D2 { rows, cols } => vec![rows, cols],
        }
    }

    pub fn from_spans(spans: &[Span]) -> Result<Self> {
        match *spans {
            [s] => Ok(WindowSpec::D1(s)),
            [rows, cols] => Ok(WindowSpec::D2 { rows, cols }),
            _ => Err(Error::invalid("windows must have one or two axes")),
        }
    }

    /// Number of samples inside the window.
    pub fn size(&self) -> usize {
        self.spans().iter().map(|s| s.len).product()
    }

    /// Shape of the cropped block.
    pub fn crop_shape(&self) -> Shape {
        match *self {
            WindowSpec::D1(s) => Shape::D1(s.len),
            WindowSpec::D2 { rows, cols } => Shape::D2 {
                rows: rows.len,
                cols: cols.len,
            },
        }
    }

    pub fn validate(&self, shape: Shape) -> Result<()> {
        match (*self, shape) {
            (WindowSpec::D1(s), Shape::D1(m)) => s.validate(m, "1D"),
            (WindowSpec::D2 { rows, cols }, Shape::D2 { rows: r, cols: c }) => {
                rows.validate(r, "row")?;
                cols.validate(c, "column")
            }
            _ => Err(Error::invalid(format!(
                "window {self:?} does not match the dimensionality of {shape:?}"
            ))),
        }
    }

    /// Flat row-major indices covered by the window, in row-major order.
    pub fn indices(&self, shape: Shape) -> Vec<usize> {
        match (*self, shape) {
            (WindowSpec::D1(s), _) => (s.start..s.end()).collect(),
            (WindowSpec::D2 { rows, cols }, Shape::D2 { cols: width, .. }) => (rows.start..rows.end())
                .flat_map(|r| (cols.start..cols.end()).map(move |c| r * width + c))
                .collect(),
            (WindowSpec::D2 { .. }, Shape::D1(_)) => Vec::new(),
        }
    }

    /// Indicator of the window over the flat index set of `shape`.
    pub fn mask(&self, shape: Shape) -> Vec<bool> {
        let mut mask = vec![false; shape.len()];
        for i in self.indices(shape) {
            mask[i] = true;
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_matches_start_range() {
        let shape = Shape::D1(16);
        assert!(WindowSpec::d1(0, 16).validate(shape).is_ok());
        assert!(WindowSpec::d1(12, 4).validate(shape).is_ok());
        assert!(WindowSpec::d1(13, 4).validate(shape).is_err());
        assert!(WindowSpec::d1(0, 0).validate(shape).is_err());
        assert!(WindowSpec::d1(usize::MAX, 2).validate(shape).is_err());
        assert!(WindowSpec::d2(0, 1, 0, 1).validate(shape).is_err());
    }

    #[test]
    fn rectangle_indices_are_row_major() {
        let shape = Shape::D2 { rows: 4, cols: 5 };
        let w = WindowSpec::d2(1, 2, 3, 2);
        assert_eq!(w.indices(shape), vec![8, 9, 13, 14]);
        assert_eq!(w.size(), 4);
        assert_eq!(w.mask(shape).iter().filter(|&&b| b).count(), 4);
    }
}
