//! Numeric identity battery.
//!
//! Each check evaluates both sides of an identity the rest of the crate
//! relies on and reports the largest discrepancy against a fixed tolerance.
//! Random inputs are drawn from a seeded ChaCha8 stream, so a run is fully
//! determined by its seed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{ComplexArray, Shape};
use crate::chft;
use crate::dft::{self, cis, Direction};
use crate::error::Result;
use crate::holographic::{self, generate_phase, WindowSpec};
use crate::progressive::{partition, ReceiverState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_owned(),
            max_error,
            tolerance,
            // NaN must fail
            passed: max_error <= tolerance,
        }
    }
}

fn random_array(rng: &mut ChaCha8Rng, shape: Shape) -> ComplexArray {
    let data = (0..shape.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexArray::new(shape, data).expect("finite samples")
}

fn random_image(rng: &mut ChaCha8Rng, shape: Shape) -> ComplexArray {
    let values: Vec<f64> = (0..shape.len()).map(|_| rng.gen::<f64>()).collect();
    ComplexArray::from_real(shape, &values).expect("finite samples")
}

fn amplitude_error(a: &ComplexArray, b: &ComplexArray) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max)
}

/// Runs every check. Order and names are stable.
pub fn run_suite(seed: u64) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        unitarity(&mut rng)?,
        round_trip(&mut rng)?,
        oracle_1d(&mut rng)?,
        oracle_2d(&mut rng)?,
        geometric_sum(&mut rng)?,
        phi_delta()?,
        sinc_ratio_sum()?,
        convolution_theorem(&mut rng)?,
        convolution_shift(&mut rng)?,
        exact_recovery(&mut rng)?,
        windowed_closed_form(&mut rng)?,
        subsampling(&mut rng)?,
        window_linearity(&mut rng)?,
        progressive_full_coverage(&mut rng)?,
        series_link()?,
    ])
}

fn unitarity(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for shape in [
        Shape::D1(1),
        Shape::D1(37),
        Shape::D1(256),
        Shape::D2 { rows: 12, cols: 7 },
    ] {
        let x = random_array(rng, shape);
        for dir in [Direction::Forward, Direction::Inverse] {
            let y = dft::udft(&x, dir)?;
            worst = worst.max((y.norm() - x.norm()).abs() / x.norm());
        }
    }
    Ok(IdentityCheck::new("unitarity", worst, 1e-10))
}

fn round_trip(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for shape in [Shape::D1(16), Shape::D1(100), Shape::D2 { rows: 8, cols: 8 }] {
        let x = random_array(rng, shape);
        let back = dft::udft(&dft::udft(&x, Direction::Forward)?, Direction::Inverse)?;
        worst = worst.max(back.max_abs_diff(&x));
    }
    Ok(IdentityCheck::new("round trip", worst, 1e-12))
}

fn oracle_1d(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for m in 1..=64 {
        let x = random_array(rng, Shape::D1(m));
        for dir in [Direction::Forward, Direction::Inverse] {
            worst = worst.max(dft::udft(&x, dir)?.max_abs_diff(&dft::brute_force_dft(&x, dir)?));
        }
    }
    Ok(IdentityCheck::new("fast vs brute force, 1D", worst, 1e-10))
}

fn oracle_2d(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for rows in 1..=16 {
        for cols in 1..=16 {
            let x = random_array(rng, Shape::D2 { rows, cols });
            let dir = Direction::Forward;
            worst = worst.max(dft::udft(&x, dir)?.max_abs_diff(&dft::brute_force_dft(&x, dir)?));
        }
    }
    Ok(IdentityCheck::new("fast vs brute force, 2D", worst, 1e-10))
}

fn geometric_sum(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = rng.gen_range(-4.0..4.0);
        let len = rng.gen_range(1..=64);
        let direct: Complex64 = (0..len).map(|u| cis(-2.0 * PI * x * u as f64)).sum();
        worst = worst.max((dft::geometric_exp_sum(x, len)? - direct).norm());
    }
    Ok(IdentityCheck::new("geometric sum closed form", worst, 1e-11))
}

fn phi_delta() -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for m in [1usize, 7, 16, 64] {
        for d in -(m as i64 - 1)..m as i64 {
            let expected = if d == 0 { 1.0 } else { 0.0 };
            worst = worst.max((dft::phi_l(d, m, m)? - expected).abs());
        }
    }
    Ok(IdentityCheck::new("phi_M is the Kronecker delta", worst, 1e-12))
}

fn sinc_ratio_sum() -> Result<IdentityCheck> {
    let worst = (1..=128usize)
        .into_par_iter()
        .map(|m| {
            let mut worst = 0.0f64;
            for len in 1..=m {
                for r in 0..m {
                    let sum = dft::sinc_ratio_sum(len, m, r)?;
                    worst = worst.max((sum - m as f64 / len as f64).abs());
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(IdentityCheck::new("sinc ratio sum = M/L", worst, 1e-8))
}

fn convolution_theorem(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let n = 16;
    let scale = (n as f64).sqrt();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x1 = random_array(rng, Shape::D1(n));
        let h = random_array(rng, Shape::D1(n));
        let x2 = dft::circular_convolve(&x1, &h)?;
        let dir = Direction::Inverse;
        let (f1, fh, f2) = (dft::udft(&x1, dir)?, dft::udft(&h, dir)?, dft::udft(&x2, dir)?);
        for v in 0..n {
            worst = worst.max((f2[v] - fh[v] * f1[v] * scale).norm());
        }
    }
    Ok(IdentityCheck::new("DFT of circular convolution", worst, 1e-10))
}

fn convolution_shift(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let n = 16;
    let h = random_array(rng, Shape::D1(n));
    let fh = dft::udft(&h, Direction::Inverse)?;
    let mut worst = 0.0f64;
    for a in 0..n {
        let mut delta = vec![Complex64::default(); n];
        delta[a] = Complex64::new(1.0, 0.0);
        let shifted = dft::circular_convolve(&ComplexArray::new_1d(delta)?, &h)?;
        let fs = dft::udft(&shifted, Direction::Inverse)?;
        for v in 0..n {
            let factor = cis(-2.0 * PI * (v * a) as f64 / n as f64);
            worst = worst.max((fs[v] - fh[v] * factor).norm());
        }
    }
    Ok(IdentityCheck::new("circular shift phase factor", worst, 1e-10))
}

fn exact_recovery(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for shape in [Shape::D1(256), Shape::D2 { rows: 64, cols: 64 }] {
        let img = random_image(rng, shape);
        let h = holographic::encode(&img, &generate_phase(rng.gen(), shape)?)?;
        worst = worst.max(amplitude_error(&holographic::recover_full(&h)?, &img));
    }
    Ok(IdentityCheck::new("exact full recovery", worst, 1e-9))
}

fn windowed_closed_form(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let m = 64;
    let shape = Shape::D1(m);
    let signal = random_image(rng, shape);
    let phase = generate_phase(rng.gen(), shape)?;
    let h = holographic::encode(&signal, &phase)?;
    let mut worst = 0.0f64;
    for (start, len) in [(0, 1), (0, 16), (5, 16), (48, 16), (10, 33), (0, 64)] {
        let w = WindowSpec::d1(start, len);
        let transform = holographic::recover_windowed_zero_extended(&h, &w)?;
        let closed = holographic::windowed_recovery_closed_form(&signal, &phase, &w)?;
        worst = worst.max(transform.max_abs_diff(&closed));
    }
    Ok(IdentityCheck::new("windowed recovery blur-kernel form", worst, 1e-10))
}

fn subsampling(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for m in [16usize, 64, 256] {
        let shape = Shape::D1(m);
        let h = holographic::encode(&random_image(rng, shape), &generate_phase(rng.gen(), shape)?)?;
        for len in (1..=m).filter(|l| m % l == 0) {
            let start = rng.gen_range(0..=m - len);
            worst = worst.max(holographic::check_subsampling_relation(
                &h,
                &WindowSpec::d1(start, len),
            )?);
        }
    }
    let shape = Shape::D2 { rows: 16, cols: 8 };
    let h = holographic::encode(&random_image(rng, shape), &generate_phase(rng.gen(), shape)?)?;
    worst = worst.max(holographic::check_subsampling_relation(
        &h,
        &WindowSpec::d2(3, 4, 2, 2),
    )?);
    Ok(IdentityCheck::new(
        "compact crop subsamples the zero-extended recovery",
        worst,
        1e-10,
    ))
}

fn window_linearity(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let m = 128;
    let data = random_array(rng, Shape::D1(m));
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a = rng.gen_range(0..m - 2);
        let split = rng.gen_range(a + 1..m - 1);
        let end = rng.gen_range(split + 1..=m);
        let w1 = WindowSpec::d1(a, split - a);
        let w2 = WindowSpec::d1(split, end - split);
        let union = WindowSpec::d1(a, end - a);
        let sum: Vec<Complex64> = holographic::windowed_recovery(&data, &w1)?
            .as_slice()
            .iter()
            .zip(holographic::windowed_recovery(&data, &w2)?.as_slice())
            .map(|(x, y)| x + y)
            .collect();
        let joint = holographic::windowed_recovery(&data, &union)?;
        worst = worst.max(ComplexArray::new_1d(sum)?.max_abs_diff(&joint));
    }
    Ok(IdentityCheck::new("window linearity", worst, 1e-12))
}

fn progressive_full_coverage(rng: &mut ChaCha8Rng) -> Result<IdentityCheck> {
    let shape = Shape::D1(256);
    let h = holographic::encode(&random_image(rng, shape), &generate_phase(rng.gen(), shape)?)?;
    let packets = partition(&h, 8)?;
    let mut state = ReceiverState::new(shape, 8)?;
    for p in packets.into_iter().rev() {
        state.accumulate(p)?;
    }
    let rendered = state.render()?;
    let worst = rendered.recovered.max_abs_diff(&holographic::recover_full(&h)?);
    Ok(IdentityCheck::new("all packets render the full recovery", worst, 1e-10))
}

fn series_link() -> Result<IdentityCheck> {
    let period = 2.0;
    let f = |x: f64| Complex64::new((2.0 * PI * x / period).cos(), 0.0);
    let mut worst = 0.0f64;
    for n in [-1i64, 1] {
        let link = chft::series_transform_link(f, period, n, 2048)?;
        worst = worst
            .max((link.coefficient - 0.5).norm())
            .max((link.scaled_transform - 0.5).norm());
    }
    Ok(IdentityCheck::new("Fourier series / transform link", worst, 1e-6))
}
