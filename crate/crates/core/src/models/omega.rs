use super::{Model, Scheme};
use crate::bounds::{ResidueFunction, MAX_DECONVOLUTION_LAMBDA};
use crate::error::{Error, Result};
use crate::lattice_measure::{LaurentResidue, LevyExponent, SignedLatticeMeasure};
use crate::models::LeadingTerm;
use crate::symfun::{alphabet_sum, prime_zeta_alphabet, zeta_alphabet, FormalAlphabet};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Largest `n` accepted by the sieve.
pub const MAX_SIEVE_N: u64 = 10_000_000;

/// Smallest prime factor of every `k ≤ n` (`spf[0] = spf[1] = 0`).
pub fn smallest_prime_factors(n: u64) -> Result<Vec<u32>> {
    if n > MAX_SIEVE_N {
        return Err(Error::OutOfRange(format!("sieve limit {n} > {MAX_SIEVE_N}")));
    }
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    Ok(spf)
}

/// `ω(k)` for `k = 0..=n` (with `ω(0) = ω(1) = 0`), via
/// `ω(k) = ω(k/p) + [p ∤ k/p]` for `p` the smallest prime factor of `k`.
pub fn omega_values(spf: &[u32]) -> Vec<u8> {
    let mut w = vec![0u8; spf.len()];
    for k in 2..spf.len() {
        let p = spf[k] as usize;
        let m = k / p;
        w[k] = w[m] + u8::from(!m.is_multiple_of(p));
    }
    w
}

/// Exact law of `ω(N)` for `N` uniform on `⟦1,n⟧`.
pub fn prime_omega_law(n: u64) -> Result<SignedLatticeMeasure> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let w = omega_values(&smallest_prime_factors(n)?);
    let mut counts = vec![0u64; 16];
    for &v in &w[1..] {
        counts[v as usize] += 1;
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    let weights = counts.iter().map(|&c| c as f64 / n as f64).collect();
    SignedLatticeMeasure::new_1d(0, weights, 0.0)
}

/// `λ = log log n + γ` and the alphabet `N*^{-1} + P^{-1}`.
pub fn prime_omega_params(n: u64, k_max: usize) -> Result<(f64, FormalAlphabet)> {
    if n < 2 {
        return Err(Error::OutOfRange("log log n needs n >= 2".into()));
    }
    let a = alphabet_sum(&zeta_alphabet(k_max), &prime_zeta_alphabet(k_max));
    let a = FormalAlphabet::new("N*^-1 + P^-1", a.powers().to_vec())?;
    Ok(((n as f64).ln().ln() + EULER_GAMMA, a))
}

/// Residue classes `b_1 = 1` and `b_2 = a − 1` of `(Z/aZ)^*` for `a ∈ {3,4,6}`.
fn residue_classes(a: u64) -> Result<[u64; 2]> {
    match a {
        3 | 4 | 6 => Ok([1, a - 1]),
        _ => Err(Error::InvalidParameter(format!("a = {a}: only a in {{3,4,6}} (phi(a) = 2)"))),
    }
}

/// Exact 2D law of `(ω_1(N), ω_2(N))`, the numbers of distinct prime
/// divisors of `N` (uniform on `⟦1,n⟧`) congruent to 1 and to `a − 1`
/// modulo `a`. Primes dividing `a` are not counted.
pub fn prime_residue_law(n: u64, a: u64) -> Result<SignedLatticeMeasure> {
    let classes = residue_classes(a)?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let spf = smallest_prime_factors(n)?;
    let mut w = vec![[0u8; 2]; spf.len()];
    let mut counts = vec![[0u64; 16]; 16];
    for k in 1..spf.len() {
        if k >= 2 {
            let p = spf[k] as usize;
            let m = k / p;
            w[k] = w[m];
            if !m.is_multiple_of(p) {
                let r = p as u64 % a;
                if let Some(i) = classes.iter().position(|&b| b == r) {
                    w[k][i] += 1;
                }
            }
        }
        counts[w[k][0] as usize][w[k][1] as usize] += 1;
    }
    let mut atoms = Vec::new();
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                atoms.push(([i as i64, j as i64], c as f64 / n as f64));
            }
        }
    }
    SignedLatticeMeasure::from_atoms_2d(&atoms)
}

/// Number of distinct prime divisors of a uniform integer in `⟦1,n⟧`.
#[derive(Debug, Clone, Copy)]
pub struct OmegaModel;

impl Model for OmegaModel {
    fn name(&self) -> &'static str {
        "omega"
    }

    fn params(&self) -> String {
        String::new()
    }

    fn alphabet_label(&self) -> String {
        "N*^-1 + P^-1".into()
    }

    fn dimension(&self) -> usize {
        1
    }

    fn n_range(&self) -> (u64, u64) {
        (2, MAX_SIEVE_N)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson()
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok(prime_omega_params(n, 2)?.0)
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        prime_omega_law(n)
    }

    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        Ok(prime_omega_params(n, k_max.min(40))?.1)
    }

    fn exact_residue(&self, n: u64, lambda: f64) -> Result<Option<ResidueFunction>> {
        if lambda > MAX_DECONVOLUTION_LAMBDA {
            return Ok(None);
        }
        Ok(Some(ResidueFunction::deconvolved(&self.exact_law(n)?, &self.exponent(), lambda)?))
    }
}

/// Distinct prime divisors split by residue class modulo `a ∈ {3,4,6}`.
///
/// Only the basic Poisson scheme is available: the limiting residue has no
/// closed form, so no alphabet or prediction is attached.
#[derive(Debug, Clone, Copy)]
pub struct OmegaResidueModel {
    a: u64,
}

impl OmegaResidueModel {
    pub fn new(a: u64) -> Result<Self> {
        residue_classes(a)?;
        Ok(OmegaResidueModel { a })
    }
}

impl Model for OmegaResidueModel {
    fn name(&self) -> &'static str {
        "omega-residue"
    }

    fn params(&self) -> String {
        format!("a={}", self.a)
    }

    fn alphabet_label(&self) -> String {
        "none (basic scheme only)".into()
    }

    fn dimension(&self) -> usize {
        2
    }

    fn n_range(&self) -> (u64, u64) {
        (3, MAX_SIEVE_N)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson_split(2)
    }

    /// `λ_n = log log n`.
    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok((n as f64).ln().ln())
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        prime_residue_law(n, self.a)
    }

    fn alphabet(&self, _n: u64, k_max: usize) -> Result<FormalAlphabet> {
        Ok(FormalAlphabet::zero(k_max))
    }

    fn scheme(&self, _n: u64, r: usize, _lambda: f64) -> Result<Scheme> {
        if r != 0 {
            return Err(Error::InvalidParameter(format!(
                "omega-residue supports the order-0 scheme only, got r = {r}"
            )));
        }
        Ok(Scheme {
            residue: LaurentResidue::one(2),
            leading: LeadingTerm::None,
        })
    }
}
