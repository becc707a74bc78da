use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::array::Shape;
use crate::error::{Error, Result};

/// Identifies the deterministic generator behind [`generate_phase`]:
/// ChaCha8 seeded through `seed_from_u64`, one `f64` per sample in
/// row-major order, 53-bit mantissa mapping onto `[0, 1)`.
pub const GENERATOR_ID: &str = "chacha8-u64-f64-v1";

/// Random phase samples `P(·)` in `[0, 1)`. The encoding factor is
/// `e^{j2πP}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    values: Vec<f64>,
    shape: Shape,
    seed: Option<u64>,
    generator: Option<&'static str>,
}

impl PhaseField {
    /// Wraps arbitrary phase values. Values are reduced into `[0, 1)`.
    pub fn from_values(shape: Shape, values: Vec<f64>) -> Result<Self> {
        shape.validate()?;
        if values.len() != shape.len() {
            return Err(Error::invalid(format!(
                "phase field for {shape:?} needs {} values, got {}",
                shape.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("phase values must be finite"));
        }
        let values = values.into_iter().map(wrap_unit).collect();
        Ok(Self {
            values,
            shape,
            seed: None,
            generator: None,
        })
    }

    pub fn zeros(shape: Shape) -> Result<Self> {
        Self::from_values(shape, vec![0.0; shape.len()])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Seed the field was generated from, if it came from [`generate_phase`].
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn generator_id(&self) -> Option<&'static str> {
        self.generator
    }
}

/// Reduces into `[0, 1)`; `rem_euclid` can round up to exactly 1.0 for tiny
/// negative inputs.
fn wrap_unit(v: f64) -> f64 {
    let w = v.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Deterministic i.i.d. uniform phases for `shape`.
pub fn generate_phase(seed: u64, shape: Shape) -> Result<PhaseField> {
    shape.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..shape.len()).map(|_| rng.gen::<f64>()).collect();
    Ok(PhaseField {
        values,
        shape,
        seed: Some(seed),
        generator: Some(GENERATOR_ID),
    })
}
