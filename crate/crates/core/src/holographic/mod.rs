//! Random-phase encoding and the recovery paths of the discrete holographic
//! Fourier transform.
//!
//! Encoding is `H = Forward[I · e^{j2πP}]` under the sign convention of
//! [`crate::dft`]. Recovery applies the `Inverse` kernel to the full
//! hologram, to a zero-extended crop (`I_W`, length `M`) or to the compact
//! crop alone (`I_T`, length `L`). The two crop paths are tied by
//! `|I_T(r̃)| = sqrt(M/L) |I_W(M r̃ / L)|`.

mod format;
mod phase;
mod window;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::array::{ComplexArray, Shape};
use crate::dft::{self, cis, Direction};
use crate::error::{Error, Result};

pub use format::{decode_hologram, encode_hologram, HOLO_MAGIC, HOLO_VERSION};
pub use phase::{generate_phase, PhaseField, GENERATOR_ID};
pub use window::{Span, WindowSpec};

/// Where the decoder gets the phase field from.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseProvenance {
    /// Regenerate with [`generate_phase`].
    Seed(u64),
    Embedded(PhaseField),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hologram {
    data: ComplexArray,
    phase: PhaseProvenance,
}

impl Hologram {
    /// Assembles a hologram from raw parts (used by the file decoder).
    pub fn from_parts(data: ComplexArray, phase: PhaseProvenance) -> Result<Self> {
        if let PhaseProvenance::Embedded(field) = &phase {
            if field.shape() != data.shape() {
                return Err(Error::invalid(format!(
                    "embedded phase {:?} does not match hologram {:?}",
                    field.shape(),
                    data.shape()
                )));
            }
        }
        Ok(Self { data, phase })
    }

    pub fn data(&self) -> &ComplexArray {
        &self.data
    }

    pub fn shape(&self) -> Shape {
        self.data.shape()
    }

    pub fn provenance(&self) -> &PhaseProvenance {
        &self.phase
    }

    /// Reconstructs the exact phase field used at encode time.
    pub fn phase_field(&self) -> Result<PhaseField> {
        match &self.phase {
            PhaseProvenance::Seed(seed) => generate_phase(*seed, self.shape()),
            PhaseProvenance::Embedded(field) => Ok(field.clone()),
        }
    }

    /// Switches to carrying the raw phase raster. The embedded copy does not
    /// remember its seed, matching what a decoder sees.
    pub fn embed_phase(self) -> Result<Self> {
        let generated = self.phase_field()?;
        let field = PhaseField::from_values(generated.shape(), generated.values().to_vec())?;
        Ok(Self {
            data: self.data,
            phase: PhaseProvenance::Embedded(field),
        })
    }
}

fn check_phase_shape(signal: &ComplexArray, phase: &PhaseField) -> Result<()> {
    if signal.shape() != phase.shape() {
        return Err(Error::invalid(format!(
            "signal shape {:?} does not match phase shape {:?}",
            signal.shape(),
            phase.shape()
        )));
    }
    Ok(())
}

fn provenance_of(phase: &PhaseField) -> PhaseProvenance {
    match phase.seed() {
        Some(seed) if phase.generator_id() == Some(GENERATOR_ID) => PhaseProvenance::Seed(seed),
        _ => PhaseProvenance::Embedded(phase.clone()),
    }
}

/// `signal ⊙ e^{j2πP}`
pub fn apply_phase(signal: &ComplexArray, phase: &PhaseField) -> Result<ComplexArray> {
    check_phase_shape(signal, phase)?;
    let data = signal
        .as_slice()
        .iter()
        .zip(phase.values())
        .map(|(&z, &p)| z * cis(2.0 * PI * p))
        .collect();
    Ok(ComplexArray::from_parts(signal.shape(), data))
}

/// Divides out `e^{j2πP}`, turning a full recovery back into the source.
pub fn remove_phase(recovered: &ComplexArray, phase: &PhaseField) -> Result<ComplexArray> {
    check_phase_shape(recovered, phase)?;
    let data = recovered
        .as_slice()
        .iter()
        .zip(phase.values())
        .map(|(&z, &p)| z * cis(-2.0 * PI * p))
        .collect();
    Ok(ComplexArray::from_parts(recovered.shape(), data))
}

/// `H(u) = Σ_k I(k) e^{j2πP(k)} (1/sqrt(M)) e^{j2πuk/M}`.
pub fn encode_1d(signal: &ComplexArray, phase: &PhaseField) -> Result<Hologram> {
    if !matches!(signal.shape(), Shape::D1(_)) {
        return Err(Error::invalid("encode_1d expects a 1D signal"));
    }
    let data = dft::udft_1d(&apply_phase(signal, phase)?, Direction::Forward)?;
    Ok(Hologram {
        data,
        phase: provenance_of(phase),
    })
}

/// 2D encoding, separable application of the 1D kernel along both axes.
pub fn encode_2d(image: &ComplexArray, phase: &PhaseField) -> Result<Hologram> {
    if !matches!(image.shape(), Shape::D2 { .. }) {
        return Err(Error::invalid("encode_2d expects a 2D image"));
    }
    let data = dft::udft_2d(&apply_phase(image, phase)?, Direction::Forward)?;
    Ok(Hologram {
        data,
        phase: provenance_of(phase),
    })
}

pub fn encode(signal: &ComplexArray, phase: &PhaseField) -> Result<Hologram> {
    match signal.shape() {
        Shape::D1(_) => encode_1d(signal, phase),
        Shape::D2 { .. } => encode_2d(signal, phase),
    }
}

/// Returns `I(r) e^{j2πP(r)}`; its amplitude is the source amplitude and
/// needs no knowledge of `P`.
pub fn recover_full(h: &Hologram) -> Result<ComplexArray> {
    dft::udft(&h.data, Direction::Inverse)
}

/// Inverse transform of `data` with every sample outside `mask` zeroed.
pub fn recover_masked(data: &ComplexArray, mask: &[bool]) -> Result<ComplexArray> {
    if mask.len() != data.len() {
        return Err(Error::invalid(format!(
            "mask has {} entries, data has {}",
            mask.len(),
            data.len()
        )));
    }
    let masked = data
        .as_slice()
        .iter()
        .zip(mask)
        .map(|(&z, &keep)| if keep { z } else { Complex64::default() })
        .collect();
    dft::udft(&ComplexArray::from_parts(data.shape(), masked), Direction::Inverse)
}

/// `I_W(r) = Σ_u H(u) W(u) (1/sqrt(M)) e^{-j2πur/M}`, full length.
pub fn windowed_recovery(data: &ComplexArray, window: &WindowSpec) -> Result<ComplexArray> {
    window.validate(data.shape())?;
    recover_masked(data, &window.mask(data.shape()))
}

/// Zero-extended windowed recovery of a hologram.
pub fn recover_windowed_zero_extended(h: &Hologram, window: &WindowSpec) -> Result<ComplexArray> {
    windowed_recovery(&h.data, window)
}

/// Evaluates the blur-kernel form of the 1D windowed recovery directly from
/// the source signal:
///
/// `I_W(r) = e^{-j(2π/M)[a+(L-1)/2] r} Σ_k I(k) e^{j2πP̃_a(k)} φ_L(r-k)`
///
/// with `P̃_a(k) = P(k) + (k/M)(a + (L-1)/2)`. O(M²); used to cross-check the
/// transform path.
pub fn windowed_recovery_closed_form(
    signal: &ComplexArray,
    phase: &PhaseField,
    window: &WindowSpec,
) -> Result<ComplexArray> {
    check_phase_shape(signal, phase)?;
    window.validate(signal.shape())?;
    let (Shape::D1(m), WindowSpec::D1(span)) = (signal.shape(), *window) else {
        return Err(Error::invalid("the closed form is defined for 1D windows"));
    };
    let mf = m as f64;
    let centre = span.start as f64 + (span.len as f64 - 1.0) / 2.0;
    let kernel = (-(m as i64 - 1)..m as i64)
        .map(|d| dft::phi_l(d, span.len, m))
        .collect::<Result<Vec<_>>>()?;
    let shifted: Vec<Complex64> = signal
        .as_slice()
        .iter()
        .zip(phase.values())
        .enumerate()
        .map(|(k, (&i, &p))| i * cis(2.0 * PI * (p + k as f64 / mf * centre)))
        .collect();
    let out = (0..m)
        .map(|r| {
            let sum: Complex64 = shifted
                .iter()
                .enumerate()
                .map(|(k, &z)| z * kernel[r + m - 1 - k])
                .sum();
            cis(-2.0 * PI / mf * centre * r as f64) * sum
        })
        .collect();
    Ok(ComplexArray::from_parts(signal.shape(), out))
}

/// Transform of the compact crop alone,
/// `I_T(r) = Σ_{k<L} H(k+a) (1/sqrt(L)) e^{-j2πrk/L}`; output has the
/// window's shape.
pub fn recover_windowed_compact(h: &Hologram, window: &WindowSpec) -> Result<ComplexArray> {
    window.validate(h.shape())?;
    let values = window.indices(h.shape()).into_iter().map(|i| h.data[i]).collect();
    let crop = ComplexArray::new(window.crop_shape(), values)?;
    dft::udft(&crop, Direction::Inverse)
}

/// Largest violation of `|I_T(r̃)| = sqrt(M/L) |I_W(M r̃/L)|` over all `r̃`.
/// In 2D the relation is applied per axis. Requires `L | M` on every axis.
pub fn check_subsampling_relation(h: &Hologram, window: &WindowSpec) -> Result<f64> {
    window.validate(h.shape())?;
    let dims = h.shape().dims();
    let spans = window.spans();
    for (&m, s) in dims.iter().zip(&spans) {
        if m % s.len != 0 {
            return Err(Error::invalid(format!(
                "window length {} does not divide axis length {m}",
                s.len
            )));
        }
    }
    let compact = recover_windowed_compact(h, window)?;
    let extended = recover_windowed_zero_extended(h, window)?;
    let scale = (h.shape().len() as f64 / window.size() as f64).sqrt();

    let crop_dims = window.crop_shape().dims();
    let steps: Vec<usize> = dims.iter().zip(&spans).map(|(&m, s)| m / s.len).collect();
    let mut worst = 0.0f64;
    for (t, z) in compact.as_slice().iter().enumerate() {
        // unravel the compact index, stretch each coordinate, re-ravel
        let mut rem = t;
        let mut coords = vec![0usize; crop_dims.len()];
        for axis in (0..crop_dims.len()).rev() {
            coords[axis] = rem % crop_dims[axis];
            rem /= crop_dims[axis];
        }
        let flat = coords
            .iter()
            .zip(&steps)
            .zip(&dims)
            .fold(0usize, |acc, ((&c, &step), &m)| acc * m + c * step);
        worst = worst.max((z.norm() - scale * extended[flat].norm()).abs());
    }
    Ok(worst)
}

/// Multiplies by `sqrt(M/L)` so a windowed recovery estimates the source
/// scale.
pub fn rescale_amplitude(x: &ComplexArray, len: usize, m: usize) -> Result<ComplexArray> {
    dft::check_window_len(len, m)?;
    let factor = (m as f64 / len as f64).sqrt();
    Ok(x.map(|z| z * factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::brute_force_dft;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(shape: Shape, seed: u64, nonnegative: bool) -> ComplexArray {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..shape.len())
            .map(|_| {
                if nonnegative {
                    Complex64::new(rng.gen_range(0.0..1.0), 0.0)
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        ComplexArray::new(shape, data).unwrap()
    }

    /// Literal double sum of the 1D encoding formula.
    fn encode_oracle(signal: &ComplexArray, phase: &PhaseField) -> Vec<Complex64> {
        let m = signal.len();
        (0..m)
            .map(|u| {
                (0..m)
                    .map(|k| {
                        signal[k] * cis(2.0 * PI * phase.values()[k]) * cis(2.0 * PI * (u * k) as f64 / m as f64)
                            / (m as f64).sqrt()
                    })
                    .sum()
            })
            .collect()
    }

    /// Literal windowed sum `Σ_{u∈W} H(u)/sqrt(M) e^{-j2πur/M}`.
    fn windowed_oracle(h: &Hologram, start: usize, len: usize) -> Vec<Complex64> {
        let m = h.data.len();
        (0..m)
            .map(|r| {
                (start..start + len)
                    .map(|u| h.data[u] * cis(-2.0 * PI * (u * r) as f64 / m as f64) / (m as f64).sqrt())
                    .sum()
            })
            .collect()
    }

    #[test]
    fn zero_phase_impulse_encodes_to_constant() {
        let mut v = vec![Complex64::default(); 4];
        v[0] = Complex64::new(1.0, 0.0);
        let h = encode_1d(
            &ComplexArray::new_1d(v).unwrap(),
            &PhaseField::zeros(Shape::D1(4)).unwrap(),
        )
        .unwrap();
        for z in h.data().as_slice() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn encode_matches_literal_sum_and_preserves_energy() {
        let signal = random_signal(Shape::D1(8), 1, false);
        let phase = generate_phase(11, Shape::D1(8)).unwrap();
        let h = encode_1d(&signal, &phase).unwrap();
        let oracle = ComplexArray::new_1d(encode_oracle(&signal, &phase)).unwrap();
        assert!(h.data().max_abs_diff(&oracle) < 1e-12);
        assert!((h.data().norm() - signal.norm()).abs() < 1e-10);
        assert_eq!(h.provenance(), &PhaseProvenance::Seed(11));
    }

    #[test]
    fn encode_rejects_shape_mismatch() {
        let signal = random_signal(Shape::D1(8), 1, false);
        assert!(encode_1d(&signal, &generate_phase(0, Shape::D1(7)).unwrap()).is_err());
        let image = random_signal(Shape::D2 { rows: 2, cols: 4 }, 1, false);
        assert!(encode_2d(&image, &generate_phase(0, Shape::D2 { rows: 4, cols: 2 }).unwrap()).is_err());
        assert!(encode_1d(&image, &generate_phase(0, image.shape()).unwrap()).is_err());
    }

    #[test]
    fn constant_image_with_zero_phase_has_single_bin() {
        let shape = Shape::D2 { rows: 4, cols: 4 };
        let img = ComplexArray::from_real(shape, &[1.0; 16]).unwrap();
        let h = encode_2d(&img, &PhaseField::zeros(shape).unwrap()).unwrap();
        assert!((h.data()[0] - Complex64::new(4.0, 0.0)).norm() < 1e-14);
        assert!(h.data().as_slice()[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn encode_2d_is_separable_and_unitary() {
        let shape = Shape::D2 { rows: 8, cols: 8 };
        let img = random_signal(shape, 3, false);
        let phase = generate_phase(5, shape).unwrap();
        let h = encode_2d(&img, &phase).unwrap();
        // separable oracle: 1D encoding along rows (phase applied once),
        // then plain 1D forward transforms down the columns
        let mut rows_done = Vec::new();
        for r in 0..8 {
            let row = ComplexArray::new_1d(img.as_slice()[r * 8..r * 8 + 8].to_vec()).unwrap();
            let p = PhaseField::from_values(Shape::D1(8), phase.values()[r * 8..r * 8 + 8].to_vec()).unwrap();
            rows_done.extend(encode_1d(&row, &p).unwrap().data().as_slice().to_vec());
        }
        let mut oracle = vec![Complex64::default(); 64];
        for c in 0..8 {
            let col = ComplexArray::new_1d((0..8).map(|r| rows_done[r * 8 + c]).collect()).unwrap();
            let t = brute_force_dft(&col, Direction::Forward).unwrap();
            for r in 0..8 {
                oracle[r * 8 + c] = t[r];
            }
        }
        assert!(h.data().max_abs_diff(&ComplexArray::new(shape, oracle).unwrap()) < 1e-12);

        let shape = Shape::D2 { rows: 16, cols: 16 };
        let img = random_signal(shape, 4, false);
        let h = encode_2d(&img, &generate_phase(6, shape).unwrap()).unwrap();
        assert!((h.data().norm() - img.norm()).abs() < 1e-10);
    }

    #[test]
    fn full_recovery_is_exact() {
        let signal = random_signal(Shape::D1(64), 7, true);
        let phase = generate_phase(8, Shape::D1(64)).unwrap();
        let h = encode_1d(&signal, &phase).unwrap();
        let rec = recover_full(&h).unwrap();
        for (a, b) in rec.amplitudes().iter().zip(signal.amplitudes()) {
            assert!((a - b).abs() < 1e-10);
        }
        let unphased = remove_phase(&rec, &h.phase_field().unwrap()).unwrap();
        assert!(unphased.max_abs_diff(&signal) < 1e-10);

        let shape = Shape::D2 { rows: 8, cols: 8 };
        let ones = ComplexArray::from_real(shape, &[1.0; 64]).unwrap();
        let h = encode_2d(&ones, &generate_phase(9, shape).unwrap()).unwrap();
        assert!(recover_full(&h)
            .unwrap()
            .amplitudes()
            .iter()
            .all(|a| (a - 1.0).abs() < 1e-10));
    }

    #[test]
    fn full_window_equals_full_recovery() {
        let signal = random_signal(Shape::D1(32), 10, false);
        let h = encode_1d(&signal, &generate_phase(1, Shape::D1(32)).unwrap()).unwrap();
        let full = recover_full(&h).unwrap();
        let w = WindowSpec::full(h.shape());
        assert!(recover_windowed_zero_extended(&h, &w).unwrap().max_abs_diff(&full) < 1e-12);
        assert!(recover_windowed_compact(&h, &w).unwrap().max_abs_diff(&full) < 1e-12);
    }

    #[test]
    fn windowed_paths_agree_with_closed_form() {
        let m = 16;
        let signal = random_signal(Shape::D1(m), 12, false);
        let phase = generate_phase(13, Shape::D1(m)).unwrap();
        let h = encode_1d(&signal, &phase).unwrap();
        for (a, len) in [(3, 5), (0, 1), (0, 16), (11, 5), (7, 9)] {
            let w = WindowSpec::d1(a, len);
            let direct = ComplexArray::new_1d(windowed_oracle(&h, a, len)).unwrap();
            let fast = recover_windowed_zero_extended(&h, &w).unwrap();
            let closed = windowed_recovery_closed_form(&signal, &phase, &w).unwrap();
            assert!(fast.max_abs_diff(&direct) < 1e-12, "a={a} L={len}");
            assert!(closed.max_abs_diff(&direct) < 1e-9, "a={a} L={len}");
        }
    }

    #[test]
    fn compact_recovery_of_single_sample() {
        let signal = random_signal(Shape::D1(8), 14, false);
        let h = encode_1d(&signal, &generate_phase(2, Shape::D1(8)).unwrap()).unwrap();
        let out = recover_windowed_compact(&h, &WindowSpec::d1(5, 1)).unwrap();
        assert_eq!(out.shape(), Shape::D1(1));
        assert!((out[0] - h.data()[5]).norm() < 1e-15);
    }

    #[test]
    fn subsampling_relation_holds() {
        let signal = random_signal(Shape::D1(16), 15, false);
        let h = encode_1d(&signal, &generate_phase(3, Shape::D1(16)).unwrap()).unwrap();
        assert!(check_subsampling_relation(&h, &WindowSpec::d1(5, 4)).unwrap() < 1e-10);
        assert!(check_subsampling_relation(&h, &WindowSpec::d1(0, 16)).unwrap() < 1e-12);
        assert!(matches!(
            check_subsampling_relation(&h, &WindowSpec::d1(0, 5)),
            Err(Error::InvalidArgument(_))
        ));

        let ones = ComplexArray::from_real(Shape::D1(64), &[1.0; 64]).unwrap();
        let h = encode_1d(&ones, &generate_phase(4, Shape::D1(64)).unwrap()).unwrap();
        assert!(check_subsampling_relation(&h, &WindowSpec::d1(8, 16)).unwrap() < 1e-10);

        let shape = Shape::D2 { rows: 8, cols: 16 };
        let img = random_signal(shape, 16, true);
        let h = encode_2d(&img, &generate_phase(5, shape).unwrap()).unwrap();
        assert!(check_subsampling_relation(&h, &WindowSpec::d2(2, 4, 3, 8)).unwrap() < 1e-10);
    }

    #[test]
    fn disjoint_windows_add_linearly() {
        let signal = random_signal(Shape::D1(32), 17, false);
        let h = encode_1d(&signal, &generate_phase(6, Shape::D1(32)).unwrap()).unwrap();
        let w1 = recover_windowed_zero_extended(&h, &WindowSpec::d1(2, 6)).unwrap();
        let w2 = recover_windowed_zero_extended(&h, &WindowSpec::d1(20, 9)).unwrap();
        let mut mask = vec![false; 32];
        mask[2..8].fill(true);
        mask[20..29].fill(true);
        let union = recover_masked(h.data(), &mask).unwrap();
        let sum = ComplexArray::new_1d(w1.as_slice().iter().zip(w2.as_slice()).map(|(a, b)| a + b).collect()).unwrap();
        assert!(sum.max_abs_diff(&union) < 1e-12);
    }

    #[test]
    fn windowed_2d_is_separable_per_axis_kernel() {
        // A rectangle window factorizes, so the recovery of a zero-phase
        // impulse at the origin is the outer product of the 1D kernels.
        let shape = Shape::D2 { rows: 8, cols: 8 };
        let mut v = vec![Complex64::default(); 64];
        v[0] = Complex64::new(1.0, 0.0);
        let img = ComplexArray::new(shape, v).unwrap();
        let h = encode_2d(&img, &PhaseField::zeros(shape).unwrap()).unwrap();
        let w = WindowSpec::d2(0, 3, 0, 5);
        let out = recover_windowed_zero_extended(&h, &w).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let expected = dft::phi_l(r as i64, 3, 8).unwrap().abs() * dft::phi_l(c as i64, 5, 8).unwrap().abs();
                assert!((out[r * 8 + c].norm() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rescale_examples() {
        let x = random_signal(Shape::D1(8), 18, false);
        assert_eq!(rescale_amplitude(&x, 8, 8).unwrap(), x);
        let doubled = rescale_amplitude(&x, 2, 8).unwrap();
        assert!(doubled.max_abs_diff(&x.map(|z| z * 2.0)) < 1e-15);
        assert!(rescale_amplitude(&x, 0, 8).is_err());
        assert!(rescale_amplitude(&x, 9, 8).is_err());
    }

    #[test]
    fn invalid_windows_are_rejected() {
        let h = encode_1d(
            &random_signal(Shape::D1(8), 19, false),
            &generate_phase(0, Shape::D1(8)).unwrap(),
        )
        .unwrap();
        for w in [WindowSpec::d1(5, 4), WindowSpec::d1(0, 0), WindowSpec::d2(0, 1, 0, 1)] {
            assert!(recover_windowed_zero_extended(&h, &w).is_err());
            assert!(recover_windowed_compact(&h, &w).is_err());
        }
    }

    #[test]
    fn embedded_phase_reconstructs_same_field() {
        let phase = generate_phase(21, Shape::D1(8)).unwrap();
        let h = encode_1d(&random_signal(Shape::D1(8), 20, false), &phase).unwrap();
        let embedded = h.clone().embed_phase().unwrap();
        assert!(matches!(embedded.provenance(), PhaseProvenance::Embedded(_)));
        assert_eq!(embedded.phase_field().unwrap().values(), phase.values());

        let custom = PhaseField::from_values(Shape::D1(8), vec![0.25; 8]).unwrap();
        let h = encode_1d(&random_signal(Shape::D1(8), 20, false), &custom).unwrap();
        assert_eq!(h.provenance(), &PhaseProvenance::Embedded(custom));
    }
}
