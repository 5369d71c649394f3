use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::{law_from_counts, Model, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::lattice_measure::{LevyExponent, SignedLatticeMeasure};
use crate::symfun::{euler_phi, mobius, zeta_minus_one, FormalAlphabet};

/// Largest degree for which irreducible counts are produced.
pub const MAX_GAUSS_DEGREE: u64 = 64;
/// Largest degree of the exact factor-count law.
pub const MAX_FQ_DEGREE: u64 = 40;

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

/// `|𝔍_d|` for `d = 0..=n_max` (index 0 holds 0), from Gauss' formula
/// `|𝔍_d| = (1/d) Σ_{e|d} μ(d/e) q^e`.
pub fn irreducible_counts(q: u64, n_max: u64) -> Result<Vec<BigUint>> {
    if !is_prime_power(q) || q > 16 {
        return Err(Error::InvalidParameter(format!("q = {q} must be a prime power <= 16")));
    }
    if n_max > MAX_GAUSS_DEGREE {
        return Err(Error::OutOfRange(format!("degree {n_max} > {MAX_GAUSS_DEGREE}")));
    }
    let mut out = vec![BigUint::zero()];
    for d in 1..=n_max {
        let mut acc = BigInt::zero();
        for e in (1..=d).filter(|e| d % e == 0) {
            let mu = mobius(d / e);
            if mu != 0 {
                let term = BigInt::from(q).pow(e as u32);
                acc += if mu > 0 { term } else { -term };
            }
        }
        let (quot, rem) = (&acc / BigInt::from(d), &acc % BigInt::from(d));
        assert!(rem.is_zero(), "Gauss formula must give an integer");
        out.push(quot.to_biguint().expect("non-negative count"));
    }
    Ok(out)
}

/// How the irreducible factors are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorCount {
    /// Number of distinct irreducible factors.
    Distinct,
    /// Number of irreducible factors with multiplicity.
    WithMultiplicity,
}

fn binom_big(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Number of monic degree-`n` polynomials over `F_q` with `k` irreducible
/// factors, `k = 0..=n`.
pub fn fq_factor_counts(q: u64, n: u64, counted: FactorCount) -> Result<Vec<BigUint>> {
    if !(2..=5).contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} not in {{2,3,4,5}}")));
    }
    if n > MAX_FQ_DEGREE {
        return Err(Error::OutOfRange(format!("degree {n} > {MAX_FQ_DEGREE}")));
    }
    let irr = irreducible_counts(q, n)?;
    let n = n as usize;
    // table[m][k]: monic degree-m polynomials with k factors, built from
    // irreducibles of degree ≤ d.
    let mut table = vec![vec![BigUint::zero(); n + 1]; n + 1];
    table[0][0] = BigUint::one();
    #[allow(clippy::needless_range_loop)]
    for d in 1..=n {
        // Terms (i, m', c): c · w^i z^{d m'} of the degree-d factor.
        let mut terms: Vec<(usize, usize, BigUint)> = Vec::new();
        let count = &irr[d];
        match counted {
            FactorCount::Distinct => {
                // (1 + w z^d/(1 − z^d))^I = Σ_i C(I,i) w^i Σ_{m≥i} C(m−1,i−1) z^{dm}.
                for i in 1..=n / d {
                    let ci = binom_big(count, i as u64);
                    if ci.is_zero() {
                        break;
                    }
                    for m in i..=n / d {
                        let c = &ci * binom_big(&BigUint::from(m - 1), (i - 1) as u64);
                        terms.push((i, m, c));
                    }
                }
            }
            FactorCount::WithMultiplicity => {
                // (1 − w z^d)^{−I} = Σ_i C(I+i−1, i) w^i z^{di}.
                for i in 1..=n / d {
                    let c = binom_big(&(count + BigUint::from(i) - BigUint::one()), i as u64);
                    terms.push((i, i, c));
                }
            }
        }
        let mut next = table.clone();
        for (m, row) in table.iter().enumerate() {
            for (k, cell) in row.iter().enumerate().take(m + 1) {
                if cell.is_zero() {
                    continue;
                }
                for (i, mm, c) in &terms {
                    let deg = m + d * mm;
                    if deg > n {
                        continue;
                    }
                    next[deg][k + i] += cell * c;
                }
            }
        }
        table = next;
    }
    let row = table.swap_remove(n);
    debug_assert_eq!(row.iter().sum::<BigUint>(), BigUint::from(q).pow(n as u32));
    Ok(row)
}

/// Exact law of the number of irreducible factors of a uniform monic
/// polynomial of degree `n` over `F_q`.
pub fn fq_factor_law(q: u64, n: u64, counted: FactorCount) -> Result<SignedLatticeMeasure> {
    let counts = fq_factor_counts(q, n, counted)?;
    let total: BigUint = counts.iter().sum();
    law_from_counts(0, &counts, &total)
}

fn log_series(q: u64, weight: impl Fn(u64) -> f64) -> f64 {
    let qf = q as f64;
    let mut acc = 0.0;
    for k in 2..=200u64 {
        let x = qf.powi(1 - k as i32);
        if x < 1e-18 {
            break;
        }
        acc += weight(k) / k as f64 * -(-x).ln_1p();
    }
    acc
}

/// `R(1/q) = Σ_{k≥2} μ(k)/k log(1/(1 − q^{1−k}))`.
pub fn fq_series_r(q: u64) -> f64 {
    log_series(q, |k| mobius(k) as f64)
}

/// `S(1/q) = Σ_{k≥2} φ(k)/k log(1/(1 − q^{1−k}))`.
pub fn fq_series_s(q: u64) -> f64 {
    log_series(q, |k| euler_phi(k) as f64)
}

/// `λ_n` and the alphabet of the factor-count model.
///
/// Distinct factors: `λ = log n + R(1/q) + γ`, `𝔭_k = ζ(k) + Σ_d |𝔍_d| q^{−dk}`.
/// With multiplicity: `λ = log n + S(1/q) + γ`,
/// `𝔭_k = ζ(k) + (−1)^{k−1} Σ_d |𝔍_d| / (q^d − 1)^k`.
pub fn fq_scheme_params(q: u64, n: u64, counted: FactorCount, k_max: usize) -> Result<(f64, FormalAlphabet)> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let irr: Vec<f64> = irreducible_counts(q, MAX_GAUSS_DEGREE)?
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let qf = q as f64;
    let (shift, label) = match counted {
        FactorCount::Distinct => (fq_series_r(q), "N*^-1 + (q^deg I)^-1"),
        FactorCount::WithMultiplicity => (fq_series_s(q), "N*^-1 + eps((q^deg I - 1)^-1)"),
    };
    let lambda = (n as f64).ln() + shift + EULER_GAMMA;
    let alphabet = FormalAlphabet::from_fn(label, k_max, |k| {
        if k == 1 {
            return 0.0;
        }
        let mut s = 0.0;
        for d in (1..=MAX_GAUSS_DEGREE as usize).rev() {
            let term = match counted {
                FactorCount::Distinct => irr[d] * qf.powi(-(d as i32) * k as i32),
                FactorCount::WithMultiplicity => irr[d] * (qf.powi(d as i32) - 1.0).powi(-(k as i32)),
            };
            s += term;
        }
        let sign = if counted == FactorCount::WithMultiplicity && k % 2 == 0 { -1.0 } else { 1.0 };
        1.0 + zeta_minus_one(k) + sign * s
    })?;
    Ok((lambda, alphabet))
}

/// Number of irreducible factors of a uniform monic polynomial over `F_q`.
#[derive(Debug, Clone)]
pub struct FqPolyModel {
    q: u64,
    counted: FactorCount,
}

impl FqPolyModel {
    pub fn new(q: u64, counted: FactorCount) -> Result<Self> {
        if !(2..=5).contains(&q) {
            return Err(Error::InvalidParameter(format!("q = {q} not in {{2,3,4,5}}")));
        }
        Ok(FqPolyModel { q, counted })
    }
}

impl Model for FqPolyModel {
    fn name(&self) -> &'static str {
        match self.counted {
            FactorCount::Distinct => "fqpoly-distinct",
            FactorCount::WithMultiplicity => "fqpoly-mult",
        }
    }

    fn params(&self) -> String {
        format!("q={}", self.q)
    }

    fn alphabet_label(&self) -> String {
        match self.counted {
            FactorCount::Distinct => "N*^-1 + (q^deg I)^-1".into(),
            FactorCount::WithMultiplicity => "N*^-1 + eps((q^deg I - 1)^-1)".into(),
        }
    }

    fn dimension(&self) -> usize {
        1
    }

    fn n_range(&self) -> (u64, u64) {
        (1, MAX_FQ_DEGREE)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson()
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok(fq_scheme_params(self.q, n, self.counted, 2)?.0)
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        fq_factor_law(self.q, n, self.counted)
    }

    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        Ok(fq_scheme_params(self.q, n, self.counted, k_max)?.1)
    }

    fn exact_residue(&self, n: u64, lambda: f64) -> Result<Option<crate::bounds::ResidueFunction>> {
        if lambda > crate::bounds::MAX_DECONVOLUTION_LAMBDA {
            return Ok(None);
        }
        let law = self.exact_law(n)?;
        Ok(Some(crate::bounds::ResidueFunction::deconvolved(&law, &self.exponent(), lambda)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn gauss_counts() {
        assert_eq!(irreducible_counts(2, 6).unwrap(), big(&[0, 2, 1, 2, 3, 6, 9]));
        assert_eq!(irreducible_counts(3, 1).unwrap()[1], BigUint::from(3u32));
        for n in 1..=12u64 {
            let c = irreducible_counts(2, n).unwrap();
            let s: BigUint = (1..=n).filter(|d| n % d == 0).map(|d| &c[d as usize] * BigUint::from(d)).sum();
            assert_eq!(s, BigUint::from(2u32).pow(n as u32));
        }
        assert!(irreducible_counts(6, 3).is_err());
        assert!(irreducible_counts(2, 65).is_err());
        assert!(irreducible_counts(16, 64).is_ok());
    }

    #[test]
    fn small_laws() {
        assert_eq!(fq_factor_counts(2, 2, FactorCount::Distinct).unwrap(), big(&[0, 3, 1]));
        assert_eq!(fq_factor_counts(2, 2, FactorCount::WithMultiplicity).unwrap(), big(&[0, 1, 3]));
        for c in [FactorCount::Distinct, FactorCount::WithMultiplicity] {
            let l = fq_factor_law(3, 1, c).unwrap();
            assert_eq!(l.at(1), 1.0);
            let counts = fq_factor_counts(5, 12, c).unwrap();
            assert_eq!(counts.iter().sum::<BigUint>(), BigUint::from(5u32).pow(12u32));
        }
    }

    #[test]
    fn series_constants() {
        // Leading term of R(1/2) is μ(2)/2 · log 2.
        let first = -0.5 * 2f64.ln();
        let r = fq_series_r(2);
        assert!((r - first).abs() < 0.2, "R(1/2) = {r}");
        let direct: f64 = (2..=70u64)
            .map(|k| mobius(k) as f64 / k as f64 * -(1.0 - 2f64.powi(1 - k as i32)).ln())
            .sum();
        assert_abs_diff_eq!(r, direct, epsilon = 1e-15);
        let (_, a) = fq_scheme_params(2, 10, FactorCount::Distinct, 3).unwrap();
        let i2: f64 = (1..=64usize)
            .map(|d| irreducible_counts(2, 64).unwrap()[d].to_f64().unwrap() * 4f64.powi(-(d as i32)))
            .sum();
        assert_abs_diff_eq!(a.p(2), 1.0 + zeta_minus_one(2) + i2, epsilon = 1e-13);
        assert!(i2 > 0.5 + 1.0 / 16.0 + 2.0 / 64.0);
    }
}
