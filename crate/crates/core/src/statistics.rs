//! Moments of random-phase sums, Monte Carlo estimators, and quality metrics.
//!
//! For `V = Σ_k e^{j2πθ_k} φ(k)` with i.i.d. uniform `θ_k`:
//! `E[V] = 0`, `E|V|² = Σ φ²`, `σ(|V|²) = sqrt(Σ_{k≠l} φ²(k) φ²(l))`.
//! Every windowed recovery of a constant signal has this form with
//! `φ = φ_L(r - ·)`, which is where the `L/M` energy ratio comes from.
//!
//! Trials run in parallel but are reduced in trial order, so reports are
//! bit-identical for a given base seed regardless of thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{ComplexArray, Shape};
use crate::dft::{self, cis};
use crate::error::{Error, Result};
use crate::holographic::{self, generate_phase, WindowSpec};

/// Real weights `φ(k)` of a random-phase sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("weight vector must be nonempty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        Ok(Self(values))
    }

    /// The blur kernel row `φ_L(r - k)`, `k = 0..M`.
    pub fn phi_row(r: usize, len: usize, m: usize) -> Result<Self> {
        if r >= m {
            return Err(Error::invalid(format!("row index {r} outside 0..{m}")));
        }
        let values = (0..m)
            .map(|k| dft::phi_l(r as i64 - k as i64, len, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Predicted vs observed moments of `|V|²` over an ensemble of phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub expected_energy: f64,
    pub predicted_sigma: f64,
    pub empirical_mean_energy: f64,
    pub empirical_sigma: f64,
    /// Sample mean of the complex value itself; predicted to be zero.
    pub empirical_mean_re: f64,
    pub empirical_mean_im: f64,
    pub trials: usize,
    pub seeds: Vec<u64>,
}

impl MomentReport {
    pub fn relative_error(&self) -> f64 {
        (self.empirical_mean_energy - self.expected_energy).abs() / self.expected_energy
    }

    pub fn empirical_mean(&self) -> Complex64 {
        Complex64::new(self.empirical_mean_re, self.empirical_mean_im)
    }
}

/// `(Σ φ², sqrt(Σ_{k≠l} φ²(k) φ²(l)))`.
///
/// The off-diagonal sum is accumulated as `Σ_k φ²(k) (S - φ²(k))`, which is
/// exactly zero when a single weight is nonzero.
pub fn lemma1_predicted_moments(phi: &WeightVector) -> (f64, f64) {
    let squares: Vec<f64> = phi.values().iter().map(|v| v * v).collect();
    let total: f64 = squares.iter().sum();
    let off_diagonal: f64 = squares.iter().map(|s| s * (total - s)).sum();
    (total, off_diagonal.max(0.0).sqrt())
}

/// Seed used for trial `t`.
pub fn trial_seed(base_seed: u64, t: usize) -> u64 {
    base_seed.wrapping_add(t as u64)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::invalid(format!("need at least 2 trials, got {trials}")));
    }
    Ok(())
}

/// Mean and sample standard deviation, summed in index order.
fn mean_and_sigma(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Samples `V` once per trial with fresh uniform phases from
/// [`generate_phase`] seeded by `base_seed + t`.
pub fn lemma1_empirical_moments(phi: &WeightVector, trials: usize, base_seed: u64) -> Result<MomentReport> {
    check_trials(trials)?;
    let shape = Shape::D1(phi.len());
    let values: Vec<Complex64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let theta = generate_phase(trial_seed(base_seed, t), shape)?;
            Ok(theta
                .values()
                .iter()
                .zip(phi.values())
                .map(|(&th, &w)| cis(2.0 * PI * th) * w)
                .sum())
        })
        .collect::<Result<_>>()?;

    let energies: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    let (mean_energy, sigma) = mean_and_sigma(&energies);
    let mean_value = values.iter().sum::<Complex64>() / trials as f64;
    let (expected, predicted_sigma) = lemma1_predicted_moments(phi);
    Ok(MomentReport {
        expected_energy: expected,
        predicted_sigma,
        empirical_mean_energy: mean_energy,
        empirical_sigma: sigma,
        empirical_mean_re: mean_value.re,
        empirical_mean_im: mean_value.im,
        trials,
        seeds: (0..trials).map(|t| trial_seed(base_seed, t)).collect(),
    })
}

/// Encodes the constant signal `I0` under `trials` independent phase fields,
/// recovers through the window `[start, start + len)` and aggregates
/// `|I_W(r)|²` over every `r` and trial. The prediction is `(L/M) I0²`.
pub fn windowed_energy_experiment(
    m: usize,
    len: usize,
    start: usize,
    amplitude: f64,
    trials: usize,
    base_seed: u64,
) -> Result<MomentReport> {
    check_trials(trials)?;
    let shape = Shape::D1(m);
    let window = WindowSpec::d1(start, len);
    window.validate(shape)?;
    if !amplitude.is_finite() {
        return Err(Error::invalid("amplitude must be finite"));
    }
    let signal = ComplexArray::from_real(shape, &vec![amplitude; m])?;

    let recoveries: Vec<ComplexArray> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let phase = generate_phase(trial_seed(base_seed, t), shape)?;
            let h = holographic::encode_1d(&signal, &phase)?;
            holographic::recover_windowed_zero_extended(&h, &window)
        })
        .collect::<Result<_>>()?;

    let energies: Vec<f64> = recoveries
        .iter()
        .flat_map(|iw| iw.as_slice().iter().map(|z| z.norm_sqr()))
        .collect();
    let (mean_energy, sigma) = mean_and_sigma(&energies);
    let mean_value = recoveries
        .iter()
        .flat_map(|iw| iw.as_slice().iter().copied())
        .sum::<Complex64>()
        / energies.len() as f64;

    let i0_sq = amplitude * amplitude;
    // the kernel is circulant, so row 0 predicts every r
    let (_, kernel_sigma) = lemma1_predicted_moments(&WeightVector::phi_row(0, len, m)?);
    Ok(MomentReport {
        expected_energy: len as f64 / m as f64 * i0_sq,
        predicted_sigma: i0_sq * kernel_sigma,
        empirical_mean_energy: mean_energy,
        empirical_sigma: sigma,
        empirical_mean_re: mean_value.re,
        empirical_mean_im: mean_value.im,
        trials,
        seeds: (0..trials).map(|t| trial_seed(base_seed, t)).collect(),
    })
}

/// RMSE and PSNR between two arrays' amplitudes.
///
/// A perfect match reports `psnr_db = f64::INFINITY` (see
/// [`QualityMetrics::psnr_is_infinite`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityMetrics {
    pub rmse: f64,
    #[serde(with = "psnr_serde")]
    pub psnr_db: f64,
    pub peak: f64,
}

impl QualityMetrics {
    pub fn psnr_is_infinite(&self) -> bool {
        self.psnr_db == f64::INFINITY
    }
}

/// JSON has no infinity; the sentinel is the string `"inf"`.
pub const PSNR_INFINITE_SENTINEL: &str = "inf";

mod psnr_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::PSNR_INFINITE_SENTINEL;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(f64),
        Sentinel(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            Repr::Sentinel(PSNR_INFINITE_SENTINEL.to_owned()).serialize(s)
        } else {
            Repr::Finite(*v).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Finite(v) => Ok(v),
            Repr::Sentinel(s) if s == PSNR_INFINITE_SENTINEL => Ok(f64::INFINITY),
            Repr::Sentinel(s) => Err(serde::de::Error::custom(format!("bad PSNR value {s:?}"))),
        }
    }
}

/// Amplitude-domain RMSE and `PSNR = 20 log10(peak / RMSE)` where `peak` is
/// the largest reference amplitude.
pub fn quality_metrics(reference: &[f64], recovered: &[f64]) -> Result<QualityMetrics> {
    if reference.len() != recovered.len() {
        return Err(Error::invalid(format!(
            "reference has {} samples, recovered has {}",
            reference.len(),
            recovered.len()
        )));
    }
    if reference.is_empty() {
        return Err(Error::invalid("cannot compare empty arrays"));
    }
    let peak = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::UndefinedPsnr);
    }
    let sse: f64 = reference
        .iter()
        .zip(recovered)
        .map(|(a, b)| (a.abs() - b.abs()).powi(2))
        .sum();
    let rmse = (sse / reference.len() as f64).sqrt();
    let psnr_db = if rmse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (peak / rmse).log10()
    };
    Ok(QualityMetrics { rmse, psnr_db, peak })
}

/// [`quality_metrics`] on the amplitudes of two complex arrays.
pub fn quality_metrics_complex(reference: &ComplexArray, recovered: &ComplexArray) -> Result<QualityMetrics> {
    if reference.shape() != recovered.shape() {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            reference.shape(),
            recovered.shape()
        )));
    }
    quality_metrics(&reference.amplitudes(), &recovered.amplitudes())
}
