//! Holographic Fourier representations of 1D signals and 2D images.
//!
//! A signal is multiplied by a unimodular random-phase factor and then
//! transformed with a unitary DFT. Any contiguous crop of the resulting
//! hologram reconstructs the whole signal with a blur whose strength depends
//! only on the crop size, not on where it was taken.
//!
//! Module map:
//!
//! - [`dft`]: unitary transforms, the brute-force oracle, and the closed-form
//!   kernels (geometric exponential sum, periodic sinc ratio).
//! - [`holographic`]: phase fields, encoding, full and windowed recovery,
//!   and the hologram file format.
//! - [`statistics`]: random-phase moment predictions, Monte Carlo estimators
//!   and quality metrics.
//! - [`chft`]: Riemann-sum realization of the continuous transform, box and
//!   Gaussian kernels, and the Fourier series / transform link.
//! - [`progressive`]: packetization, a lossy reordering channel, and an
//!   order-independent receiver.
//! - [`identities`]: a battery of numeric identity checks used as a smoke test.

pub mod array;
pub mod chft;
pub mod dft;
pub mod error;
pub mod holographic;
pub mod identities;
pub mod progressive;
pub mod statistics;
mod wire;

pub use array::{ComplexArray, Shape};
pub use error::{Error, Result};
pub use num_complex::Complex64;
