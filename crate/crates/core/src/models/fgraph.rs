use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{law_from_counts, Model, EULER_GAMMA};
use crate::bounds::{ResidueFunction, MAX_DECONVOLUTION_LAMBDA};
use crate::error::{Error, Result};
use crate::lattice_measure::{LevyExponent, SignedLatticeMeasure};
use crate::symfun::{odd_zeta_alphabet, FormalAlphabet};

/// Largest size of the exact functional-graph law.
pub const MAX_FGRAPH_N: u64 = 40;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Number of connected functional graphs on `j` labelled points,
/// `conn_j = j! [z^j] log(1/(1 − T(z)))` with `T(z) = Σ n^{n−1} z^n/n!`,
/// for `j = 0..=n` (index 0 holds 0). Computed in exact rationals.
pub fn connected_functional_graphs(n: u64) -> Result<Vec<BigUint>> {
    if n > MAX_FGRAPH_N {
        return Err(Error::OutOfRange(format!("n = {n} > {MAX_FGRAPH_N}")));
    }
    let len = n as usize + 1;
    let t: Vec<BigRational> = (0..=n)
        .map(|j| {
            if j == 0 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(j).pow((j - 1) as u32), factorial(j).into())
            }
        })
        .collect();
    // log(1/(1−T)) = Σ_{m≥1} T^m/m, truncated at degree n.
    let mut c = vec![BigRational::zero(); len];
    let mut power = t.clone();
    for m in 1..=n {
        for (ci, pi) in c.iter_mut().zip(&power) {
            *ci += pi / BigRational::from_integer(BigInt::from(m));
        }
        let mut next = vec![BigRational::zero(); len];
        for (i, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in t.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        power = next;
    }
    c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let v = cj * BigRational::from_integer(factorial(j as u64).into());
            assert!(v.is_integer(), "conn_{j} must be an integer");
            v.to_integer()
                .to_biguint()
                .ok_or_else(|| Error::InvalidParameter("negative component count".into()))
        })
        .collect()
}

/// Number of maps of `⟦1,n⟧` with `k` connected components, `k = 0..=n`.
pub fn functional_graph_counts(n: u64) -> Result<Vec<BigUint>> {
    let conn = connected_functional_graphs(n)?;
    let n = n as usize;
    // f[m][k]: maps of ⟦1,m⟧ with k components; the component of the
    // largest point has size j and is chosen in C(m−1, j−1) ways.
    let mut f = vec![vec![BigUint::zero(); n + 1]; n + 1];
    f[0][0] = BigUint::one();
    for m in 1..=n {
        for k in 1..=m {
            let mut acc = BigUint::zero();
            for j in 1..=m - k + 1 {
                if !f[m - j][k - 1].is_zero() {
                    acc += binom((m - 1) as u64, (j - 1) as u64) * &conn[j] * &f[m - j][k - 1];
                }
            }
            f[m][k] = acc;
        }
    }
    Ok(f.swap_remove(n))
}

/// Exact law of the number of connected components of a uniform random
/// map of `⟦1,n⟧` to itself.
pub fn functional_graph_law(n: u64) -> Result<SignedLatticeMeasure> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let counts = functional_graph_counts(n)?;
    let total = BigUint::from(n).pow(n as u32);
    debug_assert_eq!(counts.iter().sum::<BigUint>(), total);
    law_from_counts(0, &counts, &total)
}

/// `λ = (log 2n + γ)/2` and the alphabet `(2N+1)^{-1}`.
pub fn functional_graph_params(n: u64, k_max: usize) -> (f64, FormalAlphabet) {
    (((2.0 * n as f64).ln() + EULER_GAMMA) / 2.0, odd_zeta_alphabet(k_max))
}

/// Number of components of a uniform random map.
#[derive(Debug, Clone, Copy)]
pub struct FunctionalGraphModel;

impl Model for FunctionalGraphModel {
    fn name(&self) -> &'static str {
        "fgraph"
    }

    fn params(&self) -> String {
        String::new()
    }

    fn alphabet_label(&self) -> String {
        "(2N+1)^-1".into()
    }

    fn dimension(&self) -> usize {
        1
    }

    fn n_range(&self) -> (u64, u64) {
        (1, MAX_FGRAPH_N)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson()
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok(functional_graph_params(n, 1).0)
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        functional_graph_law(n)
    }

    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        Ok(functional_graph_params(n, k_max).1)
    }

    fn exact_residue(&self, n: u64, lambda: f64) -> Result<Option<ResidueFunction>> {
        if lambda > MAX_DECONVOLUTION_LAMBDA {
            return Ok(None);
        }
        Ok(Some(ResidueFunction::deconvolved(&self.exact_law(n)?, &self.exponent(), lambda)?))
    }
}
