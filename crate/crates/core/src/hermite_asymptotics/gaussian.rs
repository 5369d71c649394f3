use crate::error::{Error, Result};
use crate::lattice_measure::{compound_poisson_measure, LevyExponent, SignedLatticeMeasure};

/// Standard normal distribution function `Φ(x) = erfc(−x/√2)/2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov distance between the law of `(X − center)/scale`, with `X`
/// distributed as the 1D measure `m`, and the standard Gaussian.
///
/// The distribution function of the lattice law is a step function, so the
/// supremum is attained at an atom, either at the value or the left limit.
pub fn kolmogorov_to_gaussian(m: &SignedLatticeMeasure, center: f64, scale: f64) -> Result<f64> {
    if m.dimension() != 1 {
        return Err(Error::NotOneDimensional(m.dimension()));
    }
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let mut cdf = 0.0;
    let mut sup: f64 = 0.0;
    for (k, w) in m.atoms() {
        let phi = normal_cdf((k as f64 - center) / scale);
        sup = sup.max((cdf - phi).abs());
        cdf += w;
        sup = sup.max((cdf - phi).abs());
    }
    Ok(sup)
}

/// Kolmogorov distance between the standardized Poisson(λ) law and the
/// standard Gaussian.
pub fn gaussian_kolmogorov(lambda: f64) -> Result<f64> {
    let p = compound_poisson_measure(&LevyExponent::poisson(), lambda, 1e-15)?;
    kolmogorov_to_gaussian(&p, lambda, lambda.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_abs_diff_eq!(normal_cdf(1.0), 0.841_344_746_068_542_9, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_cdf(-3.0), 0.001_349_898_031_630_094_6, epsilon = 1e-16);
    }

    #[test]
    fn lambda_one_enumeration() {
        let v = gaussian_kolmogorov(1.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!(v >= (e1 - 0.5).abs());
        // Direct enumeration of both one-sided limits at k = 0..30.
        let mut f = 0.0;
        let mut best: f64 = 0.0;
        let mut pk = e1;
        for k in 0..30 {
            let phi = normal_cdf(k as f64 - 1.0);
            best = best.max((f - phi).abs());
            f += pk;
            best = best.max((f - phi).abs());
            pk /= (k + 1) as f64;
        }
        assert_abs_diff_eq!(v, best, epsilon = 1e-14);
    }

    #[test]
    fn decays_like_inverse_square_root() {
        let a = gaussian_kolmogorov(25.0).unwrap();
        let b = gaussian_kolmogorov(100.0).unwrap();
        let c = gaussian_kolmogorov(400.0).unwrap();
        assert!(c < b && b < a);
        let ratio = (c * 20.0) / (b * 10.0);
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
    }
}
