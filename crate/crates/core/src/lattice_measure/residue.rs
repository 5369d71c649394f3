use std::collections::BTreeMap;

use num_complex::Complex64;

use super::exponent::{compound_poisson_measure, poisson_weights, LevyExponent};
use super::measure::SignedLatticeMeasure;
use crate::error::{Error, Result};

/// Polynomial correction `χ(ξ)` of an approximation scheme.
///
/// In 1D, `χ = Σ_k b_k (e^{iξ}−1)^k + Σ_{k≥1} c_k (e^{−iξ}−1)^k` with
/// `b_0 = 1`. In 2D, `χ = Σ_α a_α Π_i (e^{iξ_i}−1)^{α_i}` with `a_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum LaurentResidue {
    Uni { b: Vec<f64>, c: Vec<f64> },
    Bi(BTreeMap<[u32; 2], f64>),
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Atoms of `(e^{±iξ}−1)^k = Σ_l (−1)^{k−l} C(k,l) e^{±ilξ}`.
fn power_atoms(k: u32) -> Vec<f64> {
    (0..=k)
        .map(|l| {
            let s = if (k - l).is_multiple_of(2) { 1.0 } else { -1.0 };
            s * binomial(k, l)
        })
        .collect()
}

impl LaurentResidue {
    /// The trivial residue `χ = 1` in the given dimension.
    pub fn one(dim: usize) -> Self {
        if dim == 1 {
            LaurentResidue::Uni {
                b: vec![1.0],
                c: vec![],
            }
        } else {
            LaurentResidue::Bi(BTreeMap::from([([0, 0], 1.0)]))
        }
    }

    /// 1D residue; `b[0]` must equal 1 and `c[k-1]` multiplies `(e^{−iξ}−1)^k`.
    pub fn new_1d(b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if b.first().copied() != Some(1.0) {
            return Err(Error::InvalidParameter("residue must satisfy b_0 = 1".into()));
        }
        Ok(LaurentResidue::Uni { b, c })
    }

    /// 2D residue from multi-index coefficients; the `(0,0)` coefficient must be 1.
    pub fn new_2d(coeffs: BTreeMap<[u32; 2], f64>) -> Result<Self> {
        if coeffs.get(&[0, 0]).copied() != Some(1.0) {
            return Err(Error::InvalidParameter("residue must satisfy a_(0,0) = 1".into()));
        }
        Ok(LaurentResidue::Bi(coeffs))
    }

    /// `1 + β (e^{iξ}−1)^k`.
    pub fn single_power(beta: f64, k: usize) -> Self {
        let mut b = vec![0.0; k + 1];
        b[0] = 1.0;
        b[k] += beta;
        LaurentResidue::Uni { b, c: vec![] }
    }

    pub fn dimension(&self) -> usize {
        match self {
            LaurentResidue::Uni { .. } => 1,
            LaurentResidue::Bi(_) => 2,
        }
    }

    /// Highest total degree present.
    pub fn degree(&self) -> usize {
        match self {
            LaurentResidue::Uni { b, c } => (b.len() - 1).max(c.len()),
            LaurentResidue::Bi(m) => m.keys().map(|a| (a[0] + a[1]) as usize).max().unwrap_or(0),
        }
    }

    /// `χ(ξ)` for a 1D residue.
    pub fn eval(&self, xi: f64) -> Complex64 {
        match self {
            LaurentResidue::Uni { b, c } => {
                let x = Complex64::from_polar(1.0, xi) - 1.0;
                let y = Complex64::from_polar(1.0, -xi) - 1.0;
                let mut acc = Complex64::new(0.0, 0.0);
                let mut p = Complex64::new(1.0, 0.0);
                for &bk in b {
                    acc += p * bk;
                    p *= x;
                }
                let mut p = y;
                for &ck in c {
                    acc += p * ck;
                    p *= y;
                }
                acc
            }
            LaurentResidue::Bi(_) => self.eval_2d([xi, 0.0]),
        }
    }

    /// `χ(ξ_1, ξ_2)` for a 2D residue.
    pub fn eval_2d(&self, xi: [f64; 2]) -> Complex64 {
        match self {
            LaurentResidue::Uni { .. } => self.eval(xi[0]),
            LaurentResidue::Bi(m) => {
                let x0 = Complex64::from_polar(1.0, xi[0]) - 1.0;
                let x1 = Complex64::from_polar(1.0, xi[1]) - 1.0;
                m.iter()
                    .map(|(a, &v)| x0.powu(a[0]) * x1.powu(a[1]) * v)
                    .sum()
            }
        }
    }
}

/// The finitely supported signed measure whose Fourier transform is `χ`.
pub fn residue_atoms(residue: &LaurentResidue) -> SignedLatticeMeasure {
    match residue {
        LaurentResidue::Uni { b, c } => {
            let mut atoms = Vec::new();
            for (k, &bk) in b.iter().enumerate() {
                for (l, v) in power_atoms(k as u32).into_iter().enumerate() {
                    atoms.push((l as i64, bk * v));
                }
            }
            for (k1, &ck) in c.iter().enumerate() {
                for (l, v) in power_atoms(k1 as u32 + 1).into_iter().enumerate() {
                    atoms.push((-(l as i64), ck * v));
                }
            }
            SignedLatticeMeasure::from_atoms(&atoms).expect("finite residue atoms")
        }
        LaurentResidue::Bi(m) => {
            let mut atoms = Vec::new();
            for (a, &v) in m {
                let p0 = power_atoms(a[0]);
                let p1 = power_atoms(a[1]);
                for (i, &x) in p0.iter().enumerate() {
                    for (j, &y) in p1.iter().enumerate() {
                        atoms.push(([i as i64, j as i64], v * x * y));
                    }
                }
            }
            SignedLatticeMeasure::from_atoms_2d(&atoms).expect("finite residue atoms")
        }
    }
}

/// Scheme measure `ν` with `ν̂(ξ) = e^{λφ(ξ)} χ(ξ)`.
pub fn scheme_measure(
    exponent: &LevyExponent,
    lambda: f64,
    residue: &LaurentResidue,
    tol: f64,
) -> Result<SignedLatticeMeasure> {
    if exponent.dimension() != residue.dimension() {
        return Err(Error::DimensionMismatch(exponent.dimension(), residue.dimension()));
    }
    let base = compound_poisson_measure(exponent, lambda, tol)?;
    base.convolve(&residue_atoms(residue))
}

/// Closed Poisson–Charlier form of the correction that the residue
/// `1 + β(e^{iξ}−1)^{r+1}` adds to the Poisson(λ) weight at `k`:
/// `β e^{−λ}λ^k/k! Σ_{l ≤ (r+1)∧k} (−1)^{r+1−l} C(r+1,l) λ^{−l} k!/(k−l)!`.
pub fn charlier_scheme_values(lambda: f64, beta: f64, r: u32, k: u32) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    let pw = poisson_weights(lambda, k as usize)[k as usize];
    let p = r + 1;
    let mut sum = 0.0;
    let mut falling = 1.0;
    for l in 0..=p.min(k) {
        if l > 0 {
            falling *= (k - l + 1) as f64 / lambda;
        }
        let s = if (p - l).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += s * binomial(p, l) * falling;
    }
    beta * pw * sum
}
