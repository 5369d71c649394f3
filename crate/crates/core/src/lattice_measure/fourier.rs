use num_complex::Complex64;
use rustfft::FftPlanner;

use super::measure::SignedLatticeMeasure;
use crate::error::{Error, Result};

/// Samples of a Fourier transform on the grid `ξ = 2πj/N` (per axis).
///
/// `values` is row-major with `shape[0]` rows; for 1D `shape[1] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrid {
    pub shape: [usize; 2],
    pub values: Vec<Complex64>,
}

impl FourierGrid {
    /// Wraps 1D samples.
    pub fn from_1d(values: Vec<Complex64>) -> Self {
        FourierGrid {
            shape: [values.len(), 1],
            values,
        }
    }

    /// Samples `f(2πj/N)` for `j = 0..N`.
    pub fn sample_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let h = 2.0 * std::f64::consts::PI / n as f64;
        Self::from_1d((0..n).map(|j| f(h * j as f64)).collect())
    }
}

/// Next power of two at least `2·width`; the default grid size.
pub fn default_grid_size(width: usize) -> usize {
    (2 * width.max(1)).next_power_of_two()
}

fn fft_axis(data: &mut [Complex64], shape: [usize; 2], axis: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let n = shape[axis];
    if n <= 1 {
        return;
    }
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    if axis == 1 {
        for row in data.chunks_mut(shape[1]) {
            fft.process(row);
        }
    } else {
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..shape[1] {
            for i in 0..n {
                col[i] = data[i * shape[1] + j];
            }
            fft.process(&mut col);
            for i in 0..n {
                data[i * shape[1] + j] = col[i];
            }
        }
    }
}

/// Values of `μ̂(ξ) = Σ_k μ(k) e^{i⟨ξ,k⟩}` at `ξ = 2πj/N` on every axis.
///
/// Exact (no aliasing) when `n` is at least the window width on each axis.
pub fn fourier_sample(m: &SignedLatticeMeasure, n: usize) -> Result<FourierGrid> {
    let [w0, w1] = m.shape();
    let dim = m.dimension();
    if n < w0 || (dim == 2 && n < w1) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid size {n} smaller than support window {w0}x{w1}"
        )));
    }
    let shape = if dim == 1 { [n, 1] } else { [n, n] };
    let mut data = vec![Complex64::new(0.0, 0.0); shape[0] * shape[1]];
    let ws = m.weights();
    for i in 0..w0 {
        for j in 0..w1 {
            data[i * shape[1] + j] = Complex64::new(ws[i * w1 + j], 0.0);
        }
    }
    // The inverse transform computes Σ_t x_t e^{+2πijt/N}.
    fft_axis(&mut data, shape, 0, true);
    if dim == 2 {
        fft_axis(&mut data, shape, 1, true);
    }
    let off = m.offset();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            let phase = h * ((off[0] as f64) * i as f64 + (off[1] as f64) * j as f64);
            data[i * shape[1] + j] *= Complex64::from_polar(1.0, phase);
        }
    }
    Ok(FourierGrid {
        shape,
        values: data,
    })
}

/// Fourier coefficients `c_t = N^{-d} Σ_j f(ξ_j) e^{-i⟨t,ξ_j⟩}`, indices mod N.
pub fn fourier_coefficients(samples: &FourierGrid) -> Vec<Complex64> {
    let shape = samples.shape;
    let mut data = samples.values.clone();
    fft_axis(&mut data, shape, 0, false);
    fft_axis(&mut data, shape, 1, false);
    let scale = 1.0 / (shape[0] * shape[1]) as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    data
}

/// Wiener-algebra norm `Σ |c_t|` of the trigonometric polynomial sampled on
/// the grid. Equals the total variation norm of the underlying measure when
/// the grid is at least as wide as its support.
pub fn wiener_norm(samples: &FourierGrid) -> f64 {
    fourier_coefficients(samples).iter().map(|c| c.norm()).sum()
}

/// Recovers the weights of a 1D measure supported in `[offset, offset + len)`
/// from its samples.
pub fn inverse_fourier_1d(samples: &FourierGrid, offset: i64, len: usize) -> Vec<f64> {
    let n = samples.shape[0];
    let c = fourier_coefficients(samples);
    (0..len)
        .map(|t| c[(offset + t as i64).rem_euclid(n as i64) as usize].re)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dirac_samples() {
        let g = fourier_sample(&SignedLatticeMeasure::dirac(0), 8).unwrap();
        assert!(g.values.iter().all(|v| (*v - c(1.0, 0.0)).norm() < 1e-15));
        let g = fourier_sample(&SignedLatticeMeasure::dirac(1), 4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (v, e) in g.values.iter().zip(expect) {
            assert!((*v - e).norm() < 1e-15);
        }
    }

    #[test]
    fn bernoulli_half_on_eight_points() {
        let m = SignedLatticeMeasure::new_1d(0, vec![0.5, 0.5], 0.0).unwrap();
        let g = fourier_sample(&m, 8).unwrap();
        for (j, v) in g.values.iter().enumerate() {
            let xi = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
            let e = (c(1.0, 0.0) + Complex64::from_polar(1.0, xi)) * 0.5;
            assert!((*v - e).norm() < 1e-15);
        }
    }

    #[test]
    fn wiener_norm_examples() {
        assert_abs_diff_eq!(wiener_norm(&FourierGrid::sample_fn(16, |_| c(1.0, 0.0))), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            wiener_norm(&FourierGrid::sample_fn(16, |x| Complex64::from_polar(1.0, x))),
            1.0,
            epsilon = 1e-14
        );
        let m = SignedLatticeMeasure::new_1d(0, vec![-0.3, 0.5, 0.8], 0.0).unwrap();
        let g = fourier_sample(&m, default_grid_size(m.width())).unwrap();
        assert_abs_diff_eq!(wiener_norm(&g), 1.6, epsilon = 1e-14);
    }

    #[test]
    fn roundtrip_with_negative_offset_and_2d() {
        let m = SignedLatticeMeasure::new_1d(-3, vec![0.1, -0.2, 0.3, 0.4], 0.0).unwrap();
        let g = fourier_sample(&m, 8).unwrap();
        let back = inverse_fourier_1d(&g, -3, 4);
        for (a, b) in back.iter().zip(m.weights()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let m2 = SignedLatticeMeasure::from_atoms_2d(&[([0, -1], 0.5), ([2, 1], -0.25)]).unwrap();
        let g2 = fourier_sample(&m2, 4).unwrap();
        assert_abs_diff_eq!(wiener_norm(&g2), 0.75, epsilon = 1e-14);
        // ξ = (π/2, π): e^{i(0·π/2 − π)}·0.5 − 0.25 e^{i(π + π)}
        let v = g2.values[4 + 2];
        assert!((v - c(-0.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn grid_too_small_is_an_error() {
        let m = SignedLatticeMeasure::new_1d(0, vec![1.0; 10], 0.0).unwrap();
        assert!(fourier_sample(&m, 8).is_err());
        assert_eq!(default_grid_size(10), 32);
    }
}
