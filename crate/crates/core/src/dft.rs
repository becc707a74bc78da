//! Unitary discrete Fourier transforms and the closed-form kernels built on
//! them.
//!
//! Sign convention: [`Direction::Forward`] uses the kernel
//! `(1/sqrt(M)) e^{+j2πuk/M}`, which is the kernel the holographic encoder
//! applies. [`Direction::Inverse`] uses `e^{-j2πuk/M}`, the kernel of every
//! recovery sum. This is the opposite of the usual engineering convention,
//! so `Forward` maps onto rustfft's `Inverse` and vice versa.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::array::{ComplexArray, Shape};
use crate::error::{Error, Result};

/// Largest total sample count [`brute_force_dft`] accepts.
pub const ORACLE_CAP: usize = 4096;

/// Below this magnitude `sinc` switches to its Taylor series.
const SINC_SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Kernel `e^{+j2πuk/M}`.
    Forward,
    /// Kernel `e^{-j2πuk/M}`.
    Inverse,
}

impl Direction {
    /// Sign of the exponent.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Inverse => -1.0,
        }
    }

    fn rustfft(self) -> FftDirection {
        match self {
            Direction::Forward => FftDirection::Inverse,
            Direction::Inverse => FftDirection::Forward,
        }
    }
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_THRESHOLD {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `e^{jθ}`
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

thread_local! {
    // plans cache their twiddles; rebuilding them dominates small transforms
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Transform along contiguous lanes of length `n`, in place, unitary scaling.
fn transform_lanes(data: &mut [Complex64], n: usize, direction: Direction) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction.rustfft()));
    fft.process(data);
    let scale = 1.0 / (n as f64).sqrt();
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// Unitary 1D transform, O(M log M) for every length.
pub fn udft_1d(x: &ComplexArray, direction: Direction) -> Result<ComplexArray> {
    let Shape::D1(m) = x.shape() else {
        return Err(Error::invalid("udft_1d expects a 1D array"));
    };
    let mut data = x.as_slice().to_vec();
    transform_lanes(&mut data, m, direction);
    Ok(ComplexArray::from_parts(x.shape(), data))
}

/// Unitary 2D transform, rows then columns.
pub fn udft_2d(x: &ComplexArray, direction: Direction) -> Result<ComplexArray> {
    let Shape::D2 { rows, cols } = x.shape() else {
        return Err(Error::invalid("udft_2d expects a 2D array"));
    };
    let mut data = x.as_slice().to_vec();
    transform_lanes(&mut data, cols, direction);

    let mut transposed = transpose(&data, rows, cols);
    transform_lanes(&mut transposed, rows, direction);
    let data = transpose(&transposed, cols, rows);
    Ok(ComplexArray::from_parts(x.shape(), data))
}

/// Dispatches on dimensionality.
pub fn udft(x: &ComplexArray, direction: Direction) -> Result<ComplexArray> {
    match x.shape() {
        Shape::D1(_) => udft_1d(x, direction),
        Shape::D2 { .. } => udft_2d(x, direction),
    }
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// Literal evaluation of the defining sum (1D) or double sum (2D).
///
/// Shares no code with the fast path. Twiddles are computed from the exact
/// integer product `u*k mod M` so accuracy does not degrade with size.
pub fn brute_force_dft(x: &ComplexArray, direction: Direction) -> Result<ComplexArray> {
    if x.len() > ORACLE_CAP {
        return Err(Error::invalid(format!(
            "oracle input has {} samples, cap is {ORACLE_CAP}",
            x.len()
        )));
    }
    let sign = direction.sign();
    let twiddle = |uk: usize, m: usize| cis(sign * 2.0 * PI * ((uk % m) as f64) / m as f64);
    let input = x.as_slice();
    let out = match x.shape() {
        Shape::D1(m) => {
            let scale = 1.0 / (m as f64).sqrt();
            (0..m)
                .map(|u| {
                    let sum: Complex64 = (0..m).map(|k| input[k] * twiddle(u * k, m)).sum();
                    sum * scale
                })
                .collect()
        }
        Shape::D2 { rows, cols } => {
            let scale = 1.0 / ((rows * cols) as f64).sqrt();
            let mut out = Vec::with_capacity(rows * cols);
            for u in 0..rows {
                for v in 0..cols {
                    let mut sum = Complex64::default();
                    for k in 0..rows {
                        for l in 0..cols {
                            sum += input[k * cols + l] * twiddle(u * k, rows) * twiddle(v * l, cols);
                        }
                    }
                    out.push(sum * scale);
                }
            }
            out
        }
    };
    Ok(ComplexArray::from_parts(x.shape(), out))
}

/// `Σ_{u=0}^{L-1} e^{-j2πxu}` in closed form,
/// `L e^{-j(L-1)πx} sinc(Lπx) / sinc(πx)`.
///
/// The sum is 1-periodic in `x`, so `x` is first reduced to `[-1/2, 1/2]`;
/// the denominator then never vanishes and integer `x` yields exactly `L`.
pub fn geometric_exp_sum(x: f64, len: usize) -> Result<Complex64> {
    if len == 0 {
        return Err(Error::invalid("geometric sum needs at least one term"));
    }
    if !x.is_finite() {
        return Err(Error::invalid("geometric sum argument must be finite"));
    }
    let l = len as f64;
    let r = x - x.round();
    let ratio = sinc(l * PI * r) / sinc(PI * r);
    Ok(cis(-(l - 1.0) * PI * r) * (l * ratio))
}

/// The periodic-sinc blur kernel `L sinc(Lπd/M) / (M sinc(πd/M))`.
///
/// Exactly the Kronecker delta when `L == M`.
pub fn phi_l(d: i64, len: usize, m: usize) -> Result<f64> {
    check_window_len(len, m)?;
    if d.unsigned_abs() as usize >= m {
        return Err(Error::invalid(format!("offset {d} outside ±(M-1) for M={m}")));
    }
    if d == 0 {
        return Ok(len as f64 / m as f64);
    }
    if len == m {
        return Ok(0.0);
    }
    let (l, mf, d) = (len as f64, m as f64, d as f64);
    Ok(l * sinc(l * PI * d / mf) / (mf * sinc(PI * d / mf)))
}

/// Direct evaluation of `Σ_k sinc²(Lπ(r-k)/M) / sinc²(π(r-k)/M)` over
/// `k = 0..M`. Equals `M/L`.
pub fn sinc_ratio_sum(len: usize, m: usize, r: usize) -> Result<f64> {
    check_window_len(len, m)?;
    if r >= m {
        return Err(Error::invalid(format!("index r={r} outside 0..{m}")));
    }
    let (l, mf) = (len as f64, m as f64);
    let total = (0..m)
        .map(|k| {
            let d = r as f64 - k as f64;
            let num = sinc(l * PI * d / mf);
            let den = sinc(PI * d / mf);
            (num * num) / (den * den)
        })
        .sum();
    Ok(total)
}

pub(crate) fn check_window_len(len: usize, m: usize) -> Result<()> {
    if len == 0 || len > m {
        return Err(Error::invalid(format!(
            "window length {len} must satisfy 1 <= L <= M = {m}"
        )));
    }
    Ok(())
}

/// `x2(n) = Σ_k h((n-k) mod N) x1(k)`.
pub fn circular_convolve(x1: &ComplexArray, h: &ComplexArray) -> Result<ComplexArray> {
    let (Shape::D1(n), Shape::D1(nh)) = (x1.shape(), h.shape()) else {
        return Err(Error::invalid("circular convolution expects 1D arrays"));
    };
    if n != nh {
        return Err(Error::invalid(format!("length mismatch: {n} vs {nh}")));
    }
    let (x1, h) = (x1.as_slice(), h.as_slice());
    let out = (0..n)
        .map(|i| (0..n).map(|k| h[(i + n - k) % n] * x1[k]).sum())
        .collect();
    Ok(ComplexArray::from_parts(Shape::D1(n), out))
}
