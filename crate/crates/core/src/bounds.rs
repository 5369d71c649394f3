//! Non-asymptotic upper bounds on total variation distances.
//!
//! Two families are provided: the classical closed-form bounds for sums of
//! independent Bernoulli variables against a Poisson law, and the
//! Wiener-algebra norm estimate for an approximation scheme of order `r`.
//! Distances follow the crate convention `d_TV = Σ|μ − ν|` (no factor ½).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice_measure::{wiener_norm, FourierGrid, LaurentResidue, LevyExponent, SignedLatticeMeasure};

/// `C_H = π/√3`.
pub const C_H: f64 = 1.813_799_364_234_217_8;

/// Values of the three classical Poisson-approximation bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBounds {
    /// `2λ/n`, only defined when all parameters are equal.
    pub prohorov: Option<f64>,
    /// `2 Σ p_i²`.
    pub le_cam: f64,
    /// `2 (1 − e^{−Σp}) Σp² / Σp`.
    pub chen_steele: f64,
}

/// Classical bounds on `d_TV(Σ B(p_i), Poisson(Σ p_i))`.
pub fn classical_tv_bounds(p: &[f64]) -> Result<ClassicalBounds> {
    if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidParameter(format!("Bernoulli parameter {bad} not in [0,1]")));
    }
    let lambda: f64 = p.iter().sum();
    let p2: f64 = p.iter().map(|v| v * v).sum();
    let all_equal = p.windows(2).all(|w| w[0] == w[1]);
    let prohorov = (all_equal && !p.is_empty()).then(|| 2.0 * lambda / p.len() as f64);
    let chen_steele = if lambda > 0.0 {
        2.0 * (-(-lambda).exp_m1()) * p2 / lambda
    } else {
        0.0
    };
    Ok(ClassicalBounds {
        prohorov,
        le_cam: 2.0 * p2,
        chen_steele,
    })
}

/// Inputs of the Wiener-algebra norm estimate in dimension 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub lambda: f64,
    pub r: usize,
    pub eps: f64,
    /// `‖ψ − χ‖_A`.
    pub norm_psi_minus_chi_a: f64,
    /// `β_{r+1}(ε) = sup_{|ξ| ≤ ε} |(ψ − χ)^{(r+1)}(ξ)|`.
    pub beta_r1_eps: f64,
    /// `γ(ε) = sup_{|ξ| ≤ ε} |φ''(ξ) + σ²|`.
    pub gamma_eps: f64,
    pub big_m: f64,
    pub sigma2: f64,
    /// `‖φ'‖_∞` over the torus.
    pub phi_prime_sup: f64,
}

impl BoundInputs {
    /// Checks the hypotheses of the norm estimate.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("lambda", self.lambda),
            ("eps", self.eps),
            ("norm_psi_minus_chi_a", self.norm_psi_minus_chi_a),
            ("beta_r1_eps", self.beta_r1_eps),
            ("gamma_eps", self.gamma_eps),
            ("M", self.big_m),
            ("sigma2", self.sigma2),
            ("phi_prime_sup", self.phi_prime_sup),
        ];
        for (name, v) in fields {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Precondition(format!("{name} = {v} must be finite and non-negative")));
            }
        }
        if !(self.eps > 0.0 && self.eps < PI) {
            return Err(Error::Precondition(format!("eps = {} not in (0, π)", self.eps)));
        }
        if self.sigma2 <= 0.0 || self.big_m <= 0.0 {
            return Err(Error::Precondition("sigma2 and M must be positive".into()));
        }
        if self.gamma_eps > self.sigma2 / 2.0 {
            return Err(Error::Precondition(format!(
                "gamma(eps) = {} exceeds sigma2/2 = {}",
                self.gamma_eps,
                self.sigma2 / 2.0
            )));
        }
        if self.lambda < 2.0 / self.sigma2 {
            return Err(Error::Precondition(format!(
                "lambda = {} below 2/sigma2 = {}",
                self.lambda,
                2.0 / self.sigma2
            )));
        }
        Ok(())
    }
}

/// `C_{r+1} = (1/(r+1)!) √((2π/3) Γ(r + 3/2))`.
pub fn c_constant(r: usize) -> f64 {
    let fact: f64 = (1..=r + 1).map(|k| k as f64).product();
    ((2.0 * PI / 3.0) * libm::tgamma(r as f64 + 1.5)).sqrt() / fact
}

/// Wiener-algebra norm estimate of `d_TV(μ, ν)` for a scheme of order `r`:
///
/// `‖ψ−χ‖_A (1 + C_H(√(2/(πε)) + λ‖φ'‖_∞)) e^{−λMε²/4}
///  + C_{r+1} β_{r+1}(ε)(ε^{−1} + √(5(r+1))) / (σ²λ/2)^{r/2+1/4}`.
///
/// Returns [`Error::Precondition`] when the hypotheses do not hold.
pub fn tv_norm_bound_1d(inp: &BoundInputs) -> Result<f64> {
    inp.validate()?;
    let BoundInputs {
        lambda,
        r,
        eps,
        norm_psi_minus_chi_a: norm,
        beta_r1_eps: beta,
        big_m,
        sigma2,
        phi_prime_sup,
        ..
    } = *inp;
    let first = if norm == 0.0 {
        0.0
    } else {
        norm * (1.0 + C_H * ((2.0 / (PI * eps)).sqrt() + lambda * phi_prime_sup))
            * (-lambda * big_m * eps * eps / 4.0).exp()
    };
    let second = if beta == 0.0 {
        0.0
    } else {
        c_constant(r) * beta * (1.0 / eps + (5.0 * (r + 1) as f64).sqrt())
            / (sigma2 * lambda / 2.0).powf(r as f64 / 2.0 + 0.25)
    };
    Ok(first + second)
}

/// Conservative estimate of `sup |f^{(r+1)}|` from samples of `f` on a
/// uniform grid covering `[−ε, ε]` (first and last samples at `∓ε`).
///
/// With `D_h` the largest `(r+1)`-th divided difference at the sample
/// spacing and `D_{2h}` the same at twice the spacing, the estimate is
/// `D_h + 2|D_h − D_{2h}|`.
pub fn beta_sup_estimate(samples: &[Complex64], eps: f64, r: usize) -> Result<f64> {
    let order = r + 1;
    if samples.len() < 4 * (r + 2) {
        return Err(Error::InvalidParameter(format!(
            "need at least {} samples, got {}",
            4 * (r + 2),
            samples.len()
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let h = 2.0 * eps / (samples.len() - 1) as f64;
    let binom: Vec<f64> = (0..=order)
        .map(|l| {
            let c = (0..l).fold(1.0, |acc, i| acc * (order - i) as f64 / (i + 1) as f64);
            if (order - l).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect();
    let max_diff = |stride: usize| -> f64 {
        let span = order * stride;
        let step = h * stride as f64;
        (0..samples.len() - span)
            .map(|i| {
                let d: Complex64 = binom
                    .iter()
                    .enumerate()
                    .map(|(l, &c)| samples[i + l * stride] * c)
                    .sum();
                d.norm() / step.powi(order as i32)
            })
            .fold(0.0, f64::max)
    };
    let d1 = max_diff(1);
    let d2 = max_diff(2);
    Ok(d1 + 2.0 * (d1 - d2).abs())
}

/// Deconvolution residue `ψ(ξ) = μ̂(ξ) e^{−λφ(ξ)}` of a 1D law.
#[derive(Debug, Clone)]
pub enum ResidueFunction {
    /// Residue of a sum of independent Bernoulli variables against
    /// Poisson(λ): `Π_j (1 + p_j x) e^{−p_j x} · e^{(Σp − λ) x}` with
    /// `x = e^{iξ} − 1`. Parameters above 1/4 are kept as explicit factors;
    /// the others enter through `exp(Σ_{k≥2} (−1)^{k−1} 𝔭_k x^k / k)`.
    Product {
        large: Vec<f64>,
        small_powers: Vec<f64>,
        drift: f64,
    },
    /// `μ̂ e^{−λφ}` evaluated directly from the atoms of `μ`.
    Deconvolved {
        atoms: Vec<(i64, f64)>,
        exponent: LevyExponent,
        lambda: f64,
    },
}

/// Number of power sums kept in the logarithmic series.
const LOG_SERIES_TERMS: usize = 56;
/// Direct deconvolution amplifies rounding errors by up to `e^{2λ}`.
pub const MAX_DECONVOLUTION_LAMBDA: f64 = 9.0;

impl ResidueFunction {
    /// Residue of `Σ B(p_j)` against Poisson(λ).
    pub fn bernoulli_product(p: &[f64], lambda: f64) -> Result<Self> {
        if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!("Bernoulli parameter {bad} not in [0,1]")));
        }
        let large: Vec<f64> = p.iter().copied().filter(|&v| v > 0.25).collect();
        let mut small_powers = vec![0.0; LOG_SERIES_TERMS + 1];
        for &v in p.iter().rev().filter(|&&v| v <= 0.25 && v > 0.0) {
            let mut pk = v;
            for slot in small_powers.iter_mut().skip(1) {
                *slot += pk;
                pk *= v;
                if pk < 1e-300 {
                    break;
                }
            }
        }
        let drift = p.iter().sum::<f64>() - lambda;
        Ok(ResidueFunction::Product {
            large,
            small_powers,
            drift,
        })
    }

    /// Residue `μ̂ e^{−λφ}` for a 1D measure; refused above λ = 9.
    pub fn deconvolved(m: &SignedLatticeMeasure, exponent: &LevyExponent, lambda: f64) -> Result<Self> {
        if m.dimension() != 1 || exponent.dimension() != 1 {
            return Err(Error::NotOneDimensional(m.dimension().max(exponent.dimension())));
        }
        if lambda > MAX_DECONVOLUTION_LAMBDA {
            return Err(Error::Precondition(format!(
                "direct deconvolution is unstable for lambda = {lambda} > {MAX_DECONVOLUTION_LAMBDA}"
            )));
        }
        Ok(ResidueFunction::Deconvolved {
            atoms: m.atoms(),
            exponent: exponent.clone(),
            lambda,
        })
    }

    /// `ψ(ξ)`.
    pub fn eval(&self, xi: f64) -> Complex64 {
        match self {
            ResidueFunction::Product {
                large,
                small_powers,
                drift,
            } => {
                let x = Complex64::from_polar(1.0, xi) - 1.0;
                let mut log = x * *drift;
                let mut xk = x;
                for (k, &pk) in small_powers.iter().enumerate().skip(1) {
                    if k >= 2 {
                        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                        log += xk * (sign * pk / k as f64);
                    }
                    xk *= x;
                }
                let mut val = log.exp();
                for &p in large {
                    val *= (x * p + 1.0) * (-x * p).exp();
                }
                val
            }
            ResidueFunction::Deconvolved {
                atoms,
                exponent,
                lambda,
            } => {
                let mu: Complex64 = atoms
                    .iter()
                    .map(|&(k, w)| Complex64::from_polar(w, k as f64 * xi))
                    .sum();
                mu * (-exponent.eval(0, xi) * *lambda).exp()
            }
        }
    }
}

/// `‖f‖_A` from FFT samples, doubling the grid until two successive values
/// agree to `1e−13` relative (or the grid reaches `2^20` points).
pub fn wiener_norm_of_fn(f: impl Fn(f64) -> Complex64) -> f64 {
    let mut n = 64;
    let mut prev = wiener_norm(&FourierGrid::sample_fn(n, &f));
    loop {
        n *= 2;
        let cur = wiener_norm(&FourierGrid::sample_fn(n, &f));
        if (cur - prev).abs() <= 1e-13 * cur.max(1e-300) || n >= 1 << 20 {
            return cur;
        }
        prev = cur;
    }
}

/// Number of samples on `[−ε, ε]` used to estimate `β_{r+1}(ε)`.
pub const BETA_SAMPLES: usize = 1025;

/// Collects every input of the norm estimate for the scheme `e^{λφ}χ`
/// approximating a law with residue `ψ`.
pub fn assemble_bound_inputs(
    exponent: &LevyExponent,
    lambda: f64,
    r: usize,
    eps: f64,
    psi: &ResidueFunction,
    chi: &LaurentResidue,
) -> Result<BoundInputs> {
    if exponent.dimension() != 1 || chi.dimension() != 1 {
        return Err(Error::NotOneDimensional(exponent.dimension().max(chi.dimension())));
    }
    let diff = |xi: f64| psi.eval(xi) - chi.eval(xi);
    let norm = wiener_norm_of_fn(diff);
    let h = 2.0 * eps / (BETA_SAMPLES - 1) as f64;
    let samples: Vec<Complex64> = (0..BETA_SAMPLES).map(|i| diff(-eps + h * i as f64)).collect();
    let beta = beta_sup_estimate(&samples, eps, r)?;
    Ok(BoundInputs {
        lambda,
        r,
        eps,
        norm_psi_minus_chi_a: norm,
        beta_r1_eps: beta,
        gamma_eps: exponent.gamma(eps),
        big_m: exponent.big_m()[0],
        sigma2: exponent.sigma2()[0],
        phi_prime_sup: exponent.phi_prime_sup(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_measure::{distance_tv, scheme_measure};
    use approx::assert_abs_diff_eq;

    #[test]
    fn classical_examples() {
        let z = classical_tv_bounds(&[0.0; 5]).unwrap();
        assert_eq!(z.prohorov, Some(0.0));
        assert_eq!(z.le_cam, 0.0);
        assert_eq!(z.chen_steele, 0.0);

        let b = classical_tv_bounds(&[0.1; 10]).unwrap();
        assert_abs_diff_eq!(b.prohorov.unwrap(), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.le_cam, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.chen_steele, 0.2 * (1.0 - (-1.0f64).exp()), epsilon = 1e-12);
        assert_abs_diff_eq!(b.chen_steele, 0.1264, epsilon = 1e-4);

        let c = classical_tv_bounds(&[0.5, 0.25]).unwrap();
        assert_eq!(c.prohorov, None);
        assert_abs_diff_eq!(c.le_cam, 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(
            c.chen_steele,
            2.0 * (1.0 - (-0.75f64).exp()) * 0.3125 / 0.75,
            epsilon = 1e-15
        );
        assert!(classical_tv_bounds(&[1.5]).is_err());
    }

    #[test]
    fn c_constants() {
        assert_abs_diff_eq!(c_constant(0), (PI.powf(1.5) / 3.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(c_constant(0), 1.3624, epsilon = 1e-4);
        assert_abs_diff_eq!(C_H, PI / 3f64.sqrt(), epsilon = 1e-15);
    }

    fn poisson_inputs(lambda: f64) -> BoundInputs {
        let e = LevyExponent::poisson();
        BoundInputs {
            lambda,
            r: 1,
            eps: 0.5,
            norm_psi_minus_chi_a: 0.0,
            beta_r1_eps: 0.0,
            gamma_eps: e.gamma(0.5),
            big_m: e.big_m()[0],
            sigma2: 1.0,
            phi_prime_sup: 1.0,
        }
    }

    #[test]
    fn zero_inputs_give_zero() {
        assert_eq!(tv_norm_bound_1d(&poisson_inputs(25.0)).unwrap(), 0.0);
    }

    #[test]
    fn preconditions_are_errors() {
        let small = poisson_inputs(1.0);
        assert!(matches!(tv_norm_bound_1d(&small), Err(Error::Precondition(_))));
        let mut wide = poisson_inputs(25.0);
        wide.gamma_eps = 0.6;
        assert!(matches!(tv_norm_bound_1d(&wide), Err(Error::Precondition(_))));
        let mut neg = poisson_inputs(25.0);
        neg.beta_r1_eps = -1.0;
        assert!(matches!(tv_norm_bound_1d(&neg), Err(Error::Precondition(_))));
    }

    #[test]
    fn beta_estimate_of_monomial() {
        let eps = 0.5;
        for r in 0..4usize {
            let c = 0.7;
            let n = 513;
            let h = 2.0 * eps / (n - 1) as f64;
            let s: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(0.0, -eps + h * i as f64).powi(r as i32 + 1) * c)
                .collect();
            let fact: f64 = (1..=r + 1).map(|k| k as f64).product();
            let est = beta_sup_estimate(&s, eps, r).unwrap();
            assert!((est / (c * fact) - 1.0).abs() < 0.02, "r={r} est={est}");
        }
        let zeros = vec![Complex64::new(0.0, 0.0); 64];
        assert_eq!(beta_sup_estimate(&zeros, eps, 1).unwrap(), 0.0);
        assert!(beta_sup_estimate(&zeros[..7], eps, 0).is_err());
    }

    #[test]
    fn product_residue_matches_deconvolution() {
        let p = [0.6, 0.3, 0.2, 0.1, 0.05];
        let lambda: f64 = p.iter().sum();
        let law = p.iter().fold(SignedLatticeMeasure::dirac(0), |m, &q| {
            m.convolve_two_point(1.0 - q, q).unwrap()
        });
        let e = LevyExponent::poisson();
        let a = ResidueFunction::bernoulli_product(&p, lambda).unwrap();
        let b = ResidueFunction::deconvolved(&law, &e, lambda).unwrap();
        for i in 0..50 {
            let xi = -3.0 + 0.12 * i as f64;
            assert!((a.eval(xi) - b.eval(xi)).norm() < 1e-12);
        }
        assert!(ResidueFunction::deconvolved(&law, &e, 20.0).is_err());
    }

    #[test]
    fn wiener_norm_of_trig_polynomial() {
        let f = |xi: f64| Complex64::from_polar(0.5, 3.0 * xi) - Complex64::from_polar(0.25, -xi);
        assert_abs_diff_eq!(wiener_norm_of_fn(f), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn bound_dominates_bernoulli_scheme_distance() {
        // p_j = j^{-0.6} truncated at n = 200; λ = Σp ≈ 13.
        let p: Vec<f64> = (1..=200).map(|j| (j as f64).powf(-0.6)).collect();
        let lambda: f64 = p.iter().sum();
        let p2: f64 = p.iter().map(|v| v * v).sum();
        let law = p.iter().fold(SignedLatticeMeasure::dirac(0), |m, &q| {
            m.convolve_two_point(1.0 - q, q).unwrap()
        });
        let e = LevyExponent::poisson();
        let chi = LaurentResidue::new_1d(vec![1.0, 0.0, -p2 / 2.0], vec![]).unwrap();
        let nu = scheme_measure(&e, lambda, &chi, 1e-14).unwrap();
        let d = distance_tv(&law, &nu).unwrap().value;
        let psi = ResidueFunction::bernoulli_product(&p, lambda).unwrap();
        let inp = assemble_bound_inputs(&e, lambda, 2, 0.5, &psi, &chi).unwrap();
        let bound = tv_norm_bound_1d(&inp).unwrap();
        assert!(d <= bound, "d = {d}, bound = {bound}");
    }
}
