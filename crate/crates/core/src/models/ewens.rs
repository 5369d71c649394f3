use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::bernoulli::{bernoulli_exact_law, bernoulli_residue_alphabet};
use super::{Model, ResidueMode};
use crate::bounds::ResidueFunction;
use crate::error::{Error, Result};
use crate::lattice_measure::{LevyExponent, SignedLatticeMeasure};
use crate::symfun::{theta_alphabet, FormalAlphabet};

/// Largest `n` accepted by the Stirling oracle.
pub const MAX_STIRLING_N: u64 = 60;

/// Feller-coupling parameters `θ/(θ+j−1)`, `j = 1..=n`.
fn feller_parameters(n: u64, theta: f64) -> Vec<f64> {
    (1..=n).map(|j| theta / (theta + (j - 1) as f64)).collect()
}

fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|j| 1.0 / j as f64).sum()
}

/// Law of the number of cycles of an Ewens(θ) permutation of size `n`,
/// as the product of the Feller Bernoulli laws.
pub fn ewens_cycle_law(n: u64, theta: f64) -> Result<SignedLatticeMeasure> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta = {theta} must be positive")));
    }
    if n == 0 {
        return Err(Error::OutOfRange("Ewens law needs n >= 1".into()));
    }
    bernoulli_exact_law(&feller_parameters(n, theta))
}

/// Unsigned Stirling numbers of the first kind `|s(n, k)|`, `k = 0..=n`,
/// from `|s(m+1,k)| = |s(m,k−1)| + m|s(m,k)|`.
pub fn stirling_row(n: u64) -> Result<Vec<BigUint>> {
    if n > MAX_STIRLING_N {
        return Err(Error::OutOfRange(format!("Stirling numbers for n = {n} > {MAX_STIRLING_N}")));
    }
    let mut row = vec![BigUint::one()];
    for m in 0..n {
        let mut next = vec![BigUint::zero(); row.len() + 1];
        for (k, v) in row.iter().enumerate() {
            next[k + 1] += v;
            next[k] += v * BigUint::from(m);
        }
        row = next;
    }
    Ok(row)
}

/// `|s(n, k)|`.
pub fn stirling_first_kind(n: u64, k: u64) -> Result<BigUint> {
    let row = stirling_row(n)?;
    Ok(row.get(k as usize).cloned().unwrap_or_default())
}

/// `λ = θH_n + K` and the limiting alphabet `Θ`.
pub fn ewens_scheme_params(n: u64, theta: f64, k_const: f64, k_max: usize) -> (f64, FormalAlphabet) {
    (theta * harmonic(n) + k_const, theta_alphabet(theta, k_max))
}

/// Number of cycles of an Ewens(θ) permutation against Poisson(θH_n + K).
#[derive(Debug, Clone)]
pub struct EwensModel {
    theta: f64,
    k_const: f64,
    mode: ResidueMode,
}

impl EwensModel {
    pub fn new(theta: f64, k_const: f64, mode: ResidueMode) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() || !k_const.is_finite() {
            return Err(Error::InvalidParameter(format!("ewens: theta = {theta}, K = {k_const}")));
        }
        Ok(EwensModel { theta, k_const, mode })
    }
}

impl Model for EwensModel {
    fn name(&self) -> &'static str {
        "ewens"
    }

    fn params(&self) -> String {
        format!("theta={} K={} residue={}", self.theta, self.k_const, self.mode.as_str())
    }

    fn alphabet_label(&self) -> String {
        if self.theta == 1.0 {
            "N*^-1".into()
        } else {
            "Theta".into()
        }
    }

    fn dimension(&self) -> usize {
        1
    }

    fn n_range(&self) -> (u64, u64) {
        (1, 1_000_000)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson()
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok(self.theta * harmonic(n) + self.k_const)
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        ewens_cycle_law(n, self.theta)
    }

    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        match self.mode {
            ResidueMode::Limit => Ok(theta_alphabet(self.theta, k_max)),
            ResidueMode::Finite => bernoulli_residue_alphabet(
                "theta-finite",
                &feller_parameters(n, self.theta),
                self.lambda(n)?,
                k_max,
            ),
        }
    }

    fn exact_residue(&self, n: u64, lambda: f64) -> Result<Option<ResidueFunction>> {
        Ok(Some(ResidueFunction::bernoulli_product(&feller_parameters(n, self.theta), lambda)?))
    }

    fn bernoulli_parameters(&self, n: u64) -> Option<Vec<f64>> {
        Some(feller_parameters(n, self.theta))
    }
}
