//! The complex sample grid shared by every transform in the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions of a sample grid. 2D data is stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    D1(usize),
    D2 { rows: usize, cols: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::D1(m) => m,
            Shape::D2 { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ndim(&self) -> usize {
        match self {
            Shape::D1(_) => 1,
            Shape::D2 { .. } => 2,
        }
    }

    /// Per-axis extents, outermost first.
    pub fn dims(&self) -> Vec<usize> {
        match *self {
            Shape::D1(m) => vec![m],
            Shape::D2 { rows, cols } => vec![rows, cols],
        }
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        let shape = match *dims {
            [m] => Shape::D1(m),
            [rows, cols] => Shape::D2 { rows, cols },
            _ => {
                return Err(Error::invalid(format!(
                    "only 1D and 2D shapes are supported, got {} axes",
                    dims.len()
                )))
            }
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims().contains(&0) {
            return Err(Error::invalid(format!("shape {self:?} has an empty axis")));
        }
        Ok(())
    }
}

/// A finite complex-valued array, 1D or 2D.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexArray {
    shape: Shape,
    data: Vec<Complex64>,
}

impl ComplexArray {
    pub fn new(shape: Shape, data: Vec<Complex64>) -> Result<Self> {
        shape.validate()?;
        if data.len() != shape.len() {
            return Err(Error::invalid(format!(
                "shape {shape:?} needs {} samples, got {}",
                shape.len(),
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { shape, data })
    }

    pub fn new_1d(data: Vec<Complex64>) -> Result<Self> {
        Self::new(Shape::D1(data.len()), data)
    }

    pub fn new_2d(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::new(Shape::D2 { rows, cols }, data)
    }

    pub fn from_real(shape: Shape, values: &[f64]) -> Result<Self> {
        Self::new(shape, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(shape: Shape) -> Result<Self> {
        shape.validate()?;
        Ok(Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.len()],
        })
    }

    /// Skips the finiteness scan. Only for results of arithmetic on
    /// already-validated arrays.
    pub(crate) fn from_parts(shape: Shape, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(shape.len(), data.len());
        Self { shape, data }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm()).collect()
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexArray) -> f64 {
        assert_eq!(self.shape, other.shape, "shape mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_parts(self.shape, self.data.iter().map(|&z| f(z)).collect())
    }
}

impl std::ops::Index<usize> for ComplexArray {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}
