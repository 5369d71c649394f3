use super::bernoulli::bernoulli_residue_alphabet;
use super::ewens::ewens_cycle_law;
use super::{scheme_2d_symmetric, Model, ResidueMode, Scheme};
use crate::error::{Error, Result};
use crate::lattice_measure::{LevyExponent, SignedLatticeMeasure};
use crate::symfun::{zeta_alphabet, FormalAlphabet};

/// Largest `n` of the coloured-permutation model.
pub const MAX_COLOURED_N: u64 = 3000;

fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|j| 1.0 / j as f64).sum()
}

/// Exact law of the cycle counts per colour of a uniform 2-coloured
/// permutation of size `n`.
///
/// Each Feller increment is non-zero with probability `1/j` and then picks
/// one of the two colours uniformly, so given `k` cycles in total the
/// split is Binomial(`k`, ½). The law is assembled from the 1D cycle law
/// and this split, which equals the `n`-fold 2D convolution.
pub fn coloured_perm_law(n: u64) -> Result<SignedLatticeMeasure> {
    if n == 0 || n > MAX_COLOURED_N {
        return Err(Error::OutOfRange(format!("coloured-perm: n = {n} outside 1..={MAX_COLOURED_N}")));
    }
    let total = ewens_cycle_law(n, 1.0)?;
    let mut atoms = Vec::new();
    let mut row = vec![1.0f64];
    for k in 0..=total.offset()[0] + total.width() as i64 {
        if k > 0 {
            let mut next = vec![0.0; row.len() + 1];
            for (i, &v) in row.iter().enumerate() {
                next[i] += 0.5 * v;
                next[i + 1] += 0.5 * v;
            }
            row = next;
        }
        let pk = total.at(k);
        if pk == 0.0 {
            continue;
        }
        for (a, &c) in row.iter().enumerate() {
            atoms.push(([a as i64, k - a as i64], pk * c));
        }
    }
    let law = SignedLatticeMeasure::from_atoms_2d(&atoms)?;
    Ok(law.with_extra_truncation(total.truncated_mass()))
}

/// The same law by direct convolution of the `n` increment laws
/// `{(0,0): 1−1/j, (1,0): 1/(2j), (0,1): 1/(2j)}`; quadratic in `n`.
pub fn coloured_perm_law_by_convolution(n: u64) -> Result<SignedLatticeMeasure> {
    if n == 0 || n > MAX_COLOURED_N {
        return Err(Error::OutOfRange(format!("coloured-perm: n = {n} outside 1..={MAX_COLOURED_N}")));
    }
    let mut law = SignedLatticeMeasure::dirac_2d([0, 0]);
    for j in 1..=n {
        let jf = j as f64;
        let step = SignedLatticeMeasure::from_atoms_2d(&[
            ([0, 0], 1.0 - 1.0 / jf),
            ([1, 0], 0.5 / jf),
            ([0, 1], 0.5 / jf),
        ])?;
        law = law.convolve(&step)?;
    }
    Ok(law)
}

/// Cycle counts per colour of a uniform random 2-coloured permutation,
/// against the factorized exponent `½Σ(e^{iξ_i}−1)` with `λ = H_n`.
#[derive(Debug, Clone, Copy)]
pub struct ColouredPermModel {
    mode: ResidueMode,
}

impl ColouredPermModel {
    pub fn new(mode: ResidueMode) -> Self {
        ColouredPermModel { mode }
    }
}

impl Model for ColouredPermModel {
    fn name(&self) -> &'static str {
        "coloured-perm"
    }

    fn params(&self) -> String {
        format!("d=2 residue={}", self.mode.as_str())
    }

    fn alphabet_label(&self) -> String {
        "N*^-1".into()
    }

    fn dimension(&self) -> usize {
        2
    }

    fn n_range(&self) -> (u64, u64) {
        (1, MAX_COLOURED_N)
    }

    fn exponent(&self) -> LevyExponent {
        LevyExponent::poisson_split(2)
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.check_n(n)?;
        Ok(harmonic(n))
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        coloured_perm_law(n)
    }

    /// Power sums of the residue in the variable `y = ½Σ(e^{iξ_i}−1)`.
    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        match self.mode {
            ResidueMode::Limit => Ok(zeta_alphabet(k_max)),
            ResidueMode::Finite => {
                let p: Vec<f64> = (1..=n).map(|j| 1.0 / j as f64).collect();
                bernoulli_residue_alphabet("zeta-finite", &p, harmonic(n), k_max)
            }
        }
    }

    fn scheme(&self, n: u64, r: usize, lambda: f64) -> Result<Scheme> {
        let a = self.shifted_alphabet(n, r + 16, lambda)?;
        scheme_2d_symmetric(&a, r)
    }
}
