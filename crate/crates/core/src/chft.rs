//! Riemann-sum realization of the continuous holographic transform.
//!
//! A function is represented by left-endpoint samples `f(y_n)`,
//! `y_n = y0 + n Δy`. Every integral below is the plain sum
//! `Σ_n (...) Δy` over those samples, with no higher-order quadrature. The
//! continuous transform uses the kernel `e^{-j2πωx}`, opposite in sign to the
//! discrete encoder in [`crate::holographic`].
//!
//! [`ContinuousPhase`] supplies a phase that is continuous in `y`, which the
//! regularized inversion needs in order to converge to `f(x) e^{j2πP(x)}`.
//! A per-sample i.i.d. field (as from [`generate_phase`]) is the right input
//! for the random-phase statistics of [`windowed_reconstruct`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array::Shape;
use crate::dft::{cis, sinc};
use crate::error::{Error, Result};
use crate::holographic::{generate_phase, PhaseField};
use crate::statistics::{lemma1_predicted_moments, WeightVector};

/// Left-endpoint samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples: Vec<Complex64>,
    start: f64,
    step: f64,
}

impl SampledFunction {
    pub fn new(samples: Vec<Complex64>, start: f64, step: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("a sampled function needs at least 2 samples"));
        }
        if !(step > 0.0 && step.is_finite()) || !start.is_finite() {
            return Err(Error::invalid(format!("bad grid: start {start}, step {step}")));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("samples must be finite"));
        }
        Ok(Self { samples, start, step })
    }

    /// Samples `f` at `count` points covering `[lo, hi)`.
    pub fn from_fn(lo: f64, hi: f64, count: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if count < 2 || !(hi > lo) {
            return Err(Error::invalid(format!("bad grid [{lo}, {hi}) with {count} samples")));
        }
        let step = (hi - lo) / count as f64;
        let samples = (0..count).map(|n| f(lo + n as f64 * step)).collect();
        Self::new(samples, lo, step)
    }

    pub fn from_real_fn(lo: f64, hi: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(lo, hi, count, |x| Complex64::new(f(x), 0.0))
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn point(&self, n: usize) -> f64 {
        self.start + n as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.point(n)).collect()
    }

    fn check_phase(&self, phase: &PhaseField) -> Result<()> {
        if phase.shape() != Shape::D1(self.len()) {
            return Err(Error::invalid(format!(
                "phase shape {:?} does not match {} samples",
                phase.shape(),
                self.len()
            )));
        }
        Ok(())
    }

    /// `f(y_n) e^{j2πP(y_n)}`
    fn phased(&self, phase: &PhaseField) -> Result<Vec<Complex64>> {
        self.check_phase(phase)?;
        Ok(self
            .samples
            .iter()
            .zip(phase.values())
            .map(|(&f, &p)| f * cis(2.0 * PI * p))
            .collect())
    }
}

/// Ideal low-pass `W(ω) = 1` on `[-k, k]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxFilter(f64);

impl BoxFilter {
    pub fn new(cutoff: f64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::invalid(format!("cutoff must be positive, got {cutoff}")));
        }
        Ok(Self(cutoff))
    }

    pub fn cutoff(&self) -> f64 {
        self.0
    }
}

/// Width parameter `n` of the Gaussian regularizer `e^{-ω²/n²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationIndex(f64);

impl RegularizationIndex {
    pub fn new(n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid(format!(
                "regularization index must be positive, got {n}"
            )));
        }
        Ok(Self(n))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// A seeded random phase that is continuous in `y`.
///
/// Knot values are i.i.d. uniform draws from [`generate_phase`], placed
/// `spacing` apart starting at `lo`; between knots the phase follows a
/// half-cosine blend, so `P` is C¹ and stays inside `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousPhase {
    knots: Vec<f64>,
    lo: f64,
    spacing: f64,
}

impl ContinuousPhase {
    pub fn new(seed: u64, lo: f64, hi: f64, spacing: f64) -> Result<Self> {
        if !(hi > lo) || !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid(format!(
                "bad phase support [{lo}, {hi}] spacing {spacing}"
            )));
        }
        let count = ((hi - lo) / spacing).ceil() as usize + 1;
        let knots = generate_phase(seed, Shape::D1(count))?.values().to_vec();
        Ok(Self { knots, lo, spacing })
    }

    pub fn eval(&self, y: f64) -> f64 {
        let last = self.knots.len() - 1;
        let t = ((y - self.lo) / self.spacing).max(0.0);
        let i = (t.floor() as usize).min(last);
        if i == last {
            return self.knots[last];
        }
        let frac = t - i as f64;
        let blend = (1.0 - (PI * frac).cos()) / 2.0;
        self.knots[i] + (self.knots[i + 1] - self.knots[i]) * blend
    }

    /// The phase at each grid point of `f`.
    pub fn sample(&self, f: &SampledFunction) -> Result<PhaseField> {
        PhaseField::from_values(
            Shape::D1(f.len()),
            f.points().into_iter().map(|y| self.eval(y)).collect(),
        )
    }
}

/// `H(ω) ≈ Σ_n f(y_n) e^{-j2πωy_n} e^{j2πP(y_n)} Δy`
pub fn chft_forward(f: &SampledFunction, phase: &PhaseField, omegas: &[f64]) -> Result<Vec<Complex64>> {
    let h = f.phased(phase)?;
    let points = f.points();
    Ok(omegas
        .iter()
        .map(|&w| {
            h.iter()
                .zip(&points)
                .map(|(&z, &y)| z * cis(-2.0 * PI * w * y))
                .sum::<Complex64>()
                * f.step
        })
        .collect())
}

/// Spatial form of the box filter, `w(x) = 2k sinc(2πkx)`.
pub fn box_kernel(w: BoxFilter, x: f64) -> f64 {
    2.0 * w.0 * sinc(2.0 * PI * w.0 * x)
}

/// `g(x) ≈ Σ_n [f(y_n) w(x - y_n) Δy] e^{j2πP(y_n)}`
pub fn windowed_reconstruct(
    f: &SampledFunction,
    phase: &PhaseField,
    w: BoxFilter,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let h = f.phased(phase)?;
    let points = f.points();
    Ok(xs
        .iter()
        .map(|&x| {
            h.iter()
                .zip(&points)
                .map(|(&z, &y)| z * (box_kernel(w, x - y) * f.step))
                .sum()
        })
        .collect())
}

/// Moduli of the deterministic weights `f(y_n) w(x - y_n) Δy` that multiply
/// the random phasors in [`windowed_reconstruct`]. A complex weight's
/// argument is absorbed by the uniform phase, so only moduli matter.
pub fn reconstruction_weights(f: &SampledFunction, w: BoxFilter, x: f64) -> Result<WeightVector> {
    WeightVector::new(
        f.samples
            .iter()
            .zip(f.points())
            .map(|(&z, y)| (z * (box_kernel(w, x - y) * f.step)).norm())
            .collect(),
    )
}

/// `(Σ_n [f(y_n) w(x - y_n) Δy]²)^{1/2}`, the predicted `E|g(x)|²` square-rooted.
pub fn amplitude_estimate(f: &SampledFunction, w: BoxFilter, x: f64) -> Result<f64> {
    let (energy, _) = lemma1_predicted_moments(&reconstruction_weights(f, w, x)?);
    Ok(energy.sqrt())
}

/// `k_n(d) = n sqrt(π) e^{-(2πd)² n² / 4}`, the transform of `e^{-ω²/n²}`.
pub fn gaussian_kernel(n: RegularizationIndex, d: f64) -> f64 {
    let n = n.0;
    n * PI.sqrt() * (-(2.0 * PI * d).powi(2) * n * n / 4.0).exp()
}

/// `f_n(x) ≈ Σ_m f(y_m) e^{j2πP(y_m)} k_n(x - y_m) Δy`; tends to
/// `f(x) e^{j2πP(x)}` as `n` grows when `P` is continuous and the grid
/// resolves `k_n`.
pub fn regularized_inverse(
    f: &SampledFunction,
    phase: &PhaseField,
    n: RegularizationIndex,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    let h = f.phased(phase)?;
    let points = f.points();
    Ok(xs
        .iter()
        .map(|&x| {
            h.iter()
                .zip(&points)
                .map(|(&z, &y)| z * (gaussian_kernel(n, x - y) * f.step))
                .sum()
        })
        .collect())
}

/// Fourier series coefficient `a_n = (1/L) ∫_{-L/2}^{L/2} f(x) e^{-2πjxn/L} dx`
/// by Riemann sum. `f` must be sampled over exactly one period starting at
/// `-L/2`.
pub fn fourier_series_coefficient(f: &SampledFunction, period: f64, n: i64) -> Result<Complex64> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::invalid(format!("period must be positive, got {period}")));
    }
    let span = f.step * f.len() as f64;
    let tol = 1e-9 * period;
    if (f.start + period / 2.0).abs() > tol || (span - period).abs() > tol {
        return Err(Error::invalid(format!(
            "samples cover [{}, {}), expected one period [-{h}, {h})",
            f.start,
            f.start + span,
            h = period / 2.0
        )));
    }
    let freq = n as f64 / period;
    let sum: Complex64 = f
        .samples
        .iter()
        .zip(f.points())
        .map(|(&z, x)| z * cis(-2.0 * PI * x * freq))
        .sum();
    Ok(sum * f.step / period)
}

/// Composite Simpson approximation of `∫_lo^hi f(x) e^{-2πjωx} dx`, i.e. the
/// Fourier transform of a function supported in `[lo, hi]`.
pub fn fourier_transform_simpson(
    f: impl Fn(f64) -> Complex64,
    lo: f64,
    hi: f64,
    omega: f64,
    panels: usize,
) -> Result<Complex64> {
    if panels == 0 || panels % 2 != 0 || !(hi > lo) {
        return Err(Error::invalid(
            "Simpson's rule needs an even, positive panel count on a nonempty interval",
        ));
    }
    let h = (hi - lo) / panels as f64;
    let g = |x: f64| f(x) * cis(-2.0 * PI * omega * x);
    let mut sum = g(lo) + g(hi);
    for i in 1..panels {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += g(lo + i as f64 * h) * weight;
    }
    Ok(sum * h / 3.0)
}

/// Both sides of `a_n = (1/L) f̂(n/L)` for `f` supported in `[-L/2, L/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTransformLink {
    /// Riemann-sum series coefficient.
    pub coefficient: Complex64,
    /// Simpson quadrature of the transform, scaled by `1/L`.
    pub scaled_transform: Complex64,
}

impl SeriesTransformLink {
    pub fn discrepancy(&self) -> f64 {
        (self.coefficient - self.scaled_transform).norm()
    }
}

pub fn series_transform_link(
    f: impl Fn(f64) -> Complex64,
    period: f64,
    n: i64,
    samples: usize,
) -> Result<SeriesTransformLink> {
    let half = period / 2.0;
    let sampled = SampledFunction::from_fn(-half, half, samples, &f)?;
    let coefficient = fourier_series_coefficient(&sampled, period, n)?;
    let panels = samples + samples % 2;
    let scaled_transform = fourier_transform_simpson(&f, -half, half, n as f64 / period, panels)? / period;
    Ok(SeriesTransformLink {
        coefficient,
        scaled_transform,
    })
}

/// Test functions.
pub mod shapes {
    use std::f64::consts::PI;

    /// `e^{-πx²}`, its own Fourier transform.
    pub fn gaussian(x: f64) -> f64 {
        (-PI * x * x).exp()
    }

    /// `(1 + cos πx)/2` on `[-1, 1]`, zero outside. C¹.
    pub fn raised_cosine(x: f64) -> f64 {
        if x.abs() <= 1.0 {
            0.5 * (1.0 + (PI * x).cos())
        } else {
            0.0
        }
    }

    /// Indicator of `[-1/2, 1/2]`.
    pub fn unit_box(x: f64) -> f64 {
        if x.abs() <= 0.5 {
            1.0
        } else {
            0.0
        }
    }
}

/// Sup-norm errors `sup_x |f_n(x) e^{-j2πP(x)} - f(x)|` over the grid
/// points of `f`, one per regularization index.
pub fn regularized_convergence(
    f: &SampledFunction,
    phase: &PhaseField,
    indices: &[RegularizationIndex],
) -> Result<Vec<f64>> {
    let xs = f.points();
    indices
        .iter()
        .map(|&n| {
            let fn_x = regularized_inverse(f, phase, n, &xs)?;
            Ok(fn_x
                .iter()
                .zip(f.samples())
                .zip(phase.values())
                .map(|((&approx, &exact), &p)| (approx * cis(-2.0 * PI * p) - exact).norm())
                .fold(0.0, f64::max))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;

    fn zero_phase(f: &SampledFunction) -> PhaseField {
        PhaseField::zeros(Shape::D1(f.len())).unwrap()
    }

    /// Trapezoid rule on a fine grid, independent of the Riemann sums above.
    fn trapezoid(g: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
        let h = (hi - lo) / panels as f64;
        let inner: f64 = (1..panels).map(|i| g(lo + i as f64 * h)).sum();
        h * (inner + 0.5 * (g(lo) + g(hi)))
    }

    #[test]
    fn sampled_function_validation() {
        assert!(SampledFunction::new(vec![Complex64::default()], 0.0, 1.0).is_err());
        assert!(SampledFunction::new(vec![Complex64::default(); 2], 0.0, 0.0).is_err());
        assert!(SampledFunction::from_real_fn(1.0, 0.0, 8, |x| x).is_err());
        let f = SampledFunction::from_real_fn(-1.0, 1.0, 4, |x| x).unwrap();
        assert_eq!(f.points(), vec![-1.0, -0.5, 0.0, 0.5]);
        assert!(BoxFilter::new(0.0).is_err());
        assert!(RegularizationIndex::new(-1.0).is_err());
    }

    #[test]
    fn forward_of_gaussian_is_gaussian() {
        let f = SampledFunction::from_real_fn(-8.0, 8.0, 1024, gaussian).unwrap();
        let omegas = [0.0, 0.5, 1.0];
        let h = chft_forward(&f, &zero_phase(&f), &omegas).unwrap();
        for (z, w) in h.iter().zip(omegas) {
            assert!((z.norm() - gaussian(w)).abs() < 1e-4, "ω={w}");
        }
    }

    #[test]
    fn forward_of_zero_and_triangle_bound() {
        let zero = SampledFunction::from_real_fn(-1.0, 1.0, 64, |_| 0.0).unwrap();
        let phase = generate_phase(1, Shape::D1(64)).unwrap();
        assert!(chft_forward(&zero, &phase, &[0.0, 1.3])
            .unwrap()
            .iter()
            .all(|z| z.norm() == 0.0));

        let f = SampledFunction::from_real_fn(-2.0, 2.0, 128, raised_cosine).unwrap();
        let phase = generate_phase(2, Shape::D1(128)).unwrap();
        let bound: f64 = f.samples().iter().map(|z| z.norm()).sum::<f64>() * f.step();
        assert!(chft_forward(&f, &phase, &[0.0]).unwrap()[0].norm() <= bound);
        assert!(chft_forward(&f, &generate_phase(2, Shape::D1(127)).unwrap(), &[0.0]).is_err());
    }

    #[test]
    fn box_kernel_examples() {
        let w = BoxFilter::new(3.0).unwrap();
        assert_eq!(box_kernel(w, 0.0), 6.0);
        assert!(box_kernel(w, 1.0 / 6.0).abs() < 1e-14);
        // inverse transform of the indicator by quadrature
        for i in 0..20 {
            let x = -1.0 + 0.1 * i as f64 + 0.013;
            let numeric = trapezoid(|om| (2.0 * PI * om * x).cos(), -3.0, 3.0, 20000);
            assert!((numeric - box_kernel(w, x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn windowed_reconstruct_trivial_cases() {
        let f = SampledFunction::from_real_fn(-1.0, 1.0, 32, |_| 0.0).unwrap();
        let phase = generate_phase(3, Shape::D1(32)).unwrap();
        let w = BoxFilter::new(4.0).unwrap();
        assert!(windowed_reconstruct(&f, &phase, w, &[0.0, 0.3])
            .unwrap()
            .iter()
            .all(|z| z.norm() == 0.0));

        let mut samples = vec![Complex64::default(); 32];
        samples[5] = Complex64::new(1.0, 0.0);
        let f = SampledFunction::new(samples, -1.0, 1.0 / 16.0).unwrap();
        let xs = [0.0, -0.6, 0.77];
        let g = windowed_reconstruct(&f, &phase, w, &xs).unwrap();
        let y5 = f.point(5);
        for (z, x) in g.iter().zip(xs) {
            let expected = cis(2.0 * PI * phase.values()[5]) * (box_kernel(w, x - y5) * f.step());
            assert_eq!(*z, expected);
        }
    }

    #[test]
    fn wide_box_reproduces_smooth_function() {
        // cutoff well above the Gaussian's bandwidth but resolved by the grid
        let f = SampledFunction::from_real_fn(-8.0, 8.0, 1024, gaussian).unwrap();
        let w = BoxFilter::new(4.0).unwrap();
        let xs: Vec<f64> = (0..200).map(|i| -2.0 + 0.02 * i as f64).collect();
        let g = windowed_reconstruct(&f, &zero_phase(&f), w, &xs).unwrap();
        for (z, x) in g.iter().zip(xs) {
            assert!((z - gaussian(x)).norm() <= 0.02 * gaussian(x).max(1e-3), "x={x}");
        }
        // at the Nyquist cutoff the sampled kernel is a Kronecker delta
        let nyquist = BoxFilter::new(0.5 / f.step()).unwrap();
        let g = windowed_reconstruct(&f, &zero_phase(&f), nyquist, &f.points()).unwrap();
        for (z, s) in g.iter().zip(f.samples()) {
            assert!((z - s).norm() < 1e-12);
        }
    }

    #[test]
    fn amplitude_estimate_cases() {
        let mut samples = vec![Complex64::default(); 16];
        samples[3] = Complex64::new(-2.0, 0.0);
        let f = SampledFunction::new(samples, 0.0, 0.25).unwrap();
        let w = BoxFilter::new(1.0).unwrap();
        let x = 0.4;
        let expected = (2.0 * box_kernel(w, x - f.point(3)) * 0.25).abs();
        assert!((amplitude_estimate(&f, w, x).unwrap() - expected).abs() < 1e-15);

        let constant = SampledFunction::from_real_fn(-1.0, 1.0, 64, |_| 0.7).unwrap();
        let weights = reconstruction_weights(&constant, w, 0.1).unwrap();
        let (energy, _) = lemma1_predicted_moments(&weights);
        assert_eq!(amplitude_estimate(&constant, w, 0.1).unwrap(), energy.sqrt());
    }

    #[test]
    fn gaussian_kernel_closed_form() {
        let n = RegularizationIndex::new(2.0).unwrap();
        assert_eq!(gaussian_kernel(n, 0.0), 2.0 * PI.sqrt());
        assert_eq!(gaussian_kernel(n, 0.3), gaussian_kernel(n, -0.3));
        // defining integral ∫ e^{j2πωd} e^{-ω²/n²} dω; the sine part vanishes
        let d = 0.3;
        let numeric = trapezoid(|w| (2.0 * PI * w * d).cos() * (-w * w / 4.0).exp(), -20.0, 20.0, 40000);
        assert!((numeric - gaussian_kernel(n, d)).abs() < 1e-8);
    }

    #[test]
    fn gaussian_kernel_integral_matches_nested_quadrature() {
        for nv in [1.0, 2.0, 4.0] {
            let n = RegularizationIndex::new(nv).unwrap();
            let (lo, hi) = (-10.0 / nv, 10.0 / nv);
            let closed = trapezoid(|d| gaussian_kernel(n, d), lo, hi, 4000);
            let nested = trapezoid(
                |d| {
                    trapezoid(
                        |w| (2.0 * PI * w * d).cos() * (-w * w / (nv * nv)).exp(),
                        -8.0 * nv,
                        8.0 * nv,
                        800,
                    )
                },
                lo,
                hi,
                4000,
            );
            assert!((closed - nested).abs() < 1e-8, "n={nv}: {closed} vs {nested}");
        }
    }

    #[test]
    fn regularized_inverse_of_zero_is_zero() {
        let f = SampledFunction::from_real_fn(-1.0, 1.0, 64, |_| 0.0).unwrap();
        let phase = generate_phase(4, Shape::D1(64)).unwrap();
        let out = regularized_inverse(&f, &phase, RegularizationIndex::new(8.0).unwrap(), &f.points()).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn continuous_phase_is_continuous_and_in_range() {
        let p = ContinuousPhase::new(9, -1.0, 1.0, 0.5).unwrap();
        let mut prev = p.eval(-1.0);
        for i in 1..=2000 {
            let y = -1.0 + i as f64 * 0.001;
            let v = p.eval(y);
            assert!((0.0..1.0).contains(&v));
            assert!((v - prev).abs() < 0.01, "jump at {y}");
            prev = v;
        }
        let knots = generate_phase(9, Shape::D1(5)).unwrap();
        assert_eq!(p.eval(0.0), knots.values()[2]);
        assert_eq!(p.eval(5.0), knots.values()[4]);
    }

    #[test]
    fn series_coefficients_of_cosine() {
        let period = 2.0;
        let f = |x: f64| Complex64::new((2.0 * PI * x / period).cos(), 0.0);
        for (n, expected) in [(1, 0.5), (-1, 0.5), (0, 0.0), (2, 0.0)] {
            let link = series_transform_link(f, period, n, 512).unwrap();
            assert!(
                (link.coefficient - Complex64::new(expected, 0.0)).norm() < 1e-6,
                "n={n}"
            );
            assert!(
                (link.scaled_transform - Complex64::new(expected, 0.0)).norm() < 1e-6,
                "n={n}"
            );
        }
    }

    #[test]
    fn series_coefficients_of_constant() {
        let sampled = SampledFunction::from_real_fn(-1.5, 1.5, 300, |_| 2.5).unwrap();
        assert!((fourier_series_coefficient(&sampled, 3.0, 0).unwrap() - 2.5).norm() < 1e-12);
        for n in [1, -3, 7] {
            assert!(fourier_series_coefficient(&sampled, 3.0, n).unwrap().norm() < 1e-12);
        }
        assert!(fourier_series_coefficient(&sampled, 2.0, 0).is_err());
    }

    #[test]
    fn series_link_for_bandlimited_function() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let period = 1.5;
        let coeffs: Vec<Complex64> = (-8..=8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = |x: f64| -> Complex64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * cis(2.0 * PI * (i as f64 - 8.0) * x / period))
                .sum()
        };
        for n in -8..=8 {
            let link = series_transform_link(f, period, n, 4096).unwrap();
            assert!(link.discrepancy() < 1e-8, "n={n}: {}", link.discrepancy());
            assert!((link.coefficient - coeffs[(n + 8) as usize]).norm() < 1e-10);
        }
    }
}
