//! Concrete mod-Poisson sequences with exact laws from counting oracles,
//! their parameters `λ_n`, formal alphabets and scheme residues.
//!
//! Every model implements [`Model`]; [`build_model`] resolves a registry name
//! plus `key=value` parameters into a boxed model.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds::ResidueFunction;
use crate::error::{Error, Result};
use crate::hermite_asymptotics::MultiBeta;
use crate::lattice_measure::{LaurentResidue, LevyExponent, SignedLatticeMeasure};
use crate::symfun::{elementary_sequence, FormalAlphabet};

mod bernoulli;
mod coloured;
mod ewens;
mod fgraph;
mod fq;
mod omega;

pub use coloured::MAX_COLOURED_N;
pub use fgraph::MAX_FGRAPH_N;
pub use fq::{MAX_FQ_DEGREE, MAX_GAUSS_DEGREE};
pub use omega::MAX_SIEVE_N;

pub use bernoulli::{
    bernoulli_alphabet, bernoulli_exact_law, bernoulli_residue_alphabet, BernoulliModel, BernoulliRule,
};
pub use coloured::{coloured_perm_law, coloured_perm_law_by_convolution, ColouredPermModel};
pub use ewens::{ewens_cycle_law, ewens_scheme_params, stirling_first_kind, stirling_row, EwensModel};
pub use fgraph::{
    connected_functional_graphs, functional_graph_counts, functional_graph_law, functional_graph_params,
    FunctionalGraphModel,
};
pub use fq::{
    fq_factor_counts, fq_factor_law, fq_scheme_params, fq_series_r, fq_series_s, irreducible_counts, FactorCount, FqPolyModel,
};
pub use omega::{
    omega_values, prime_omega_law, prime_omega_params, prime_residue_law, smallest_prime_factors, OmegaModel,
    OmegaResidueModel, EULER_GAMMA,
};

/// Default number of power sums carried by model alphabets.
pub const DEFAULT_K: usize = 24;

/// Leading error term of a scheme, used for the asymptotic predictions.
#[derive(Debug, Clone, PartialEq)]
pub enum LeadingTerm {
    /// `β (e^{iξ}−1)^{s+1}` in dimension 1.
    OneD { s: usize, beta: f64 },
    /// `Σ_{|α|=s+1} β^α Π(e^{iξ_i}−1)^{α_i}` in dimension 2.
    TwoD { s: usize, beta: MultiBeta },
    /// No prediction available (zero residue error or no known alphabet).
    None,
}

/// Residue and leading error term of the order-`r` scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub residue: LaurentResidue,
    pub leading: LeadingTerm,
}

/// A lattice-valued model converging mod-φ.
pub trait Model: Send + Sync {
    /// Registry name.
    fn name(&self) -> &'static str;
    /// Human-readable parameter summary, e.g. `theta=1`.
    fn params(&self) -> String;
    /// Row of the alphabet table this model corresponds to.
    fn alphabet_label(&self) -> String;
    fn dimension(&self) -> usize;
    /// Inclusive range of admissible `n`.
    fn n_range(&self) -> (u64, u64);
    fn exponent(&self) -> LevyExponent;
    /// `λ_n` under the convention of the corresponding theorem.
    fn lambda(&self, n: u64) -> Result<f64>;
    /// Exact law of `X_n`.
    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure>;
    /// Power sums of the residue relative to the theorem `λ_n` (`𝔭_1` included).
    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet>;

    /// Order-`r` scheme relative to the parameter `lambda`.
    fn scheme(&self, n: u64, r: usize, lambda: f64) -> Result<Scheme> {
        let a = self.shifted_alphabet(n, r + 16, lambda)?;
        scheme_1d(&a, r)
    }

    /// Residue `ψ_n` evaluated exactly, for the norm estimate (1D only).
    fn exact_residue(&self, _n: u64, _lambda: f64) -> Result<Option<ResidueFunction>> {
        Ok(None)
    }

    /// Bernoulli parameters when `X_n` is a sum of independent Bernoulli variables.
    fn bernoulli_parameters(&self, _n: u64) -> Option<Vec<f64>> {
        None
    }

    /// Alphabet with `𝔭_1` moved from the theorem `λ_n` to `lambda`.
    fn shifted_alphabet(&self, n: u64, k_max: usize, lambda: f64) -> Result<FormalAlphabet> {
        let a = self.alphabet(n, k_max)?;
        let shift = self.lambda(n)? - lambda;
        Ok(a.with_p1(a.p(1) + shift))
    }

    /// Checks `n` against [`n_range`](Self::n_range).
    fn check_n(&self, n: u64) -> Result<()> {
        let (lo, hi) = self.n_range();
        if n < lo || n > hi {
            return Err(Error::OutOfRange(format!("{}: n = {n} outside {lo}..={hi}", self.name())));
        }
        Ok(())
    }
}

/// Coefficients below this magnitude are treated as zero when locating
/// the leading error term.
const ZERO_COEFF: f64 = 1e-14;
/// Search depth for the first non-vanishing `𝔢_{s+1}`.
const MAX_LEADING_SEARCH: usize = 12;

/// `χ = Σ_{k≤r} 𝔢_k (e^{iξ}−1)^k` and the first non-zero `𝔢_{s+1}`, `s ≥ r`.
pub fn scheme_1d(alphabet: &FormalAlphabet, r: usize) -> Result<Scheme> {
    let depth = (r + MAX_LEADING_SEARCH).min(alphabet.k_max());
    let e = elementary_sequence(alphabet, depth)?;
    let residue = LaurentResidue::new_1d(e[..=r.min(depth)].to_vec(), vec![])?;
    let leading = (r..depth)
        .find(|&s| e[s + 1].abs() > ZERO_COEFF)
        .map(|s| LeadingTerm::OneD { s, beta: e[s + 1] })
        .unwrap_or(LeadingTerm::None);
    Ok(Scheme { residue, leading })
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `𝔢_k y^k` with `y = (x_1 + x_2)/2` expanded in the basis `x_1^a x_2^b`.
fn symmetric_power(coef: f64, k: u32) -> MultiBeta {
    (0..=k)
        .map(|a| ([a, k - a], coef * binomial_f64(k, a) / 2f64.powi(k as i32)))
        .collect()
}

/// 2D scheme for a residue that depends on `y = ½(x_1 + x_2)` only:
/// `χ = Σ_{k≤r} 𝔢_k y^k`, leading term `𝔢_{s+1} y^{s+1}` expanded.
pub fn scheme_2d_symmetric(alphabet: &FormalAlphabet, r: usize) -> Result<Scheme> {
    let depth = (r + MAX_LEADING_SEARCH).min(alphabet.k_max());
    let e = elementary_sequence(alphabet, depth)?;
    let mut coeffs = BTreeMap::new();
    for (k, &ek) in e.iter().enumerate().take(r.min(depth) + 1) {
        if k == 0 || ek != 0.0 {
            for (a, v) in symmetric_power(ek, k as u32) {
                *coeffs.entry(a).or_insert(0.0) += v;
            }
        }
    }
    let residue = LaurentResidue::new_2d(coeffs)?;
    let leading = (r..depth)
        .find(|&s| e[s + 1].abs() > ZERO_COEFF)
        .map(|s| LeadingTerm::TwoD {
            s,
            beta: symmetric_power(e[s + 1], s as u32 + 1),
        })
        .unwrap_or(LeadingTerm::None);
    Ok(Scheme { residue, leading })
}

/// Exact-sum parameter `λ = Σ_i E[X_i] / Σ_i m_i`.
pub fn exact_sum_lambda(law: &SignedLatticeMeasure, exponent: &LevyExponent) -> f64 {
    let mean = law.mean();
    let m: f64 = exponent.m().iter().sum();
    (0..law.dimension()).map(|i| mean[i]).sum::<f64>() / m
}

/// Index of the first power of `x = e^{iξ}−1` at which `ψ` and `χ` differ,
/// minus one: the largest `r` such that `ψ − χ = O(x^{r+1})`.
///
/// `psi_alphabet` holds the power sums of `ψ` itself.
pub fn matching_order(psi_alphabet: &FormalAlphabet, chi: &LaurentResidue) -> Result<usize> {
    let LaurentResidue::Uni { b, c } = chi else {
        return Err(Error::NotOneDimensional(2));
    };
    if !c.is_empty() {
        return Err(Error::InvalidParameter("matching order needs a polynomial residue".into()));
    }
    let depth = (b.len() + 4).min(psi_alphabet.k_max());
    let e = elementary_sequence(psi_alphabet, depth)?;
    for (k, &ek) in e.iter().enumerate() {
        let bk = b.get(k).copied().unwrap_or(0.0);
        if (ek - bk).abs() > 1e-12 * (1.0 + ek.abs()) {
            return Ok(k.saturating_sub(1));
        }
    }
    Ok(depth)
}

/// Converts `num/den` to the nearest `f64` via exact rational arithmetic.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new(num.clone().into(), den.clone().into())
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Builds a law on `offset..` from exact integer counts over a common denominator.
pub(crate) fn law_from_counts(offset: i64, counts: &[BigUint], den: &BigUint) -> Result<SignedLatticeMeasure> {
    let w: Vec<f64> = counts.iter().map(|c| ratio_to_f64(c, den)).collect();
    SignedLatticeMeasure::new_1d(offset, w, 0.0)
}

/// Parameters of a model passed as `key=value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParams(pub BTreeMap<String, String>);

impl ModelParams {
    /// Parses `["theta=1", "K=0"]`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for it in items {
            let it = it.as_ref();
            let (k, v) = it
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{it}`")))?;
            m.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(ModelParams(m))
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("parameter {key}={v} is not a number"))),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("parameter {key}={v} is not an integer"))),
        }
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Whether a model builds its scheme from finite-`n` or limiting power sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueMode {
    Finite,
    Limit,
}

impl ResidueMode {
    fn parse(p: &ModelParams, default: ResidueMode) -> Result<Self> {
        match p.get_str("residue") {
            None => Ok(default),
            Some("finite") => Ok(ResidueMode::Finite),
            Some("limit") => Ok(ResidueMode::Limit),
            Some(other) => Err(Error::InvalidParameter(format!(
                "residue={other}: expected finite or limit"
            ))),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ResidueMode::Finite => "finite",
            ResidueMode::Limit => "limit",
        }
    }
}

/// Registered model names.
pub const MODEL_NAMES: [&str; 8] = [
    "bernoulli",
    "ewens",
    "fgraph",
    "fqpoly-distinct",
    "fqpoly-mult",
    "omega",
    "coloured-perm",
    "omega-residue",
];

/// Resolves a registry name and parameters into a model.
pub fn build_model(name: &str, params: &ModelParams) -> Result<Box<dyn Model>> {
    match name {
        "bernoulli" => {
            params.reject_unknown(&["p", "residue"])?;
            let rule = BernoulliRule::parse(params.get_str("p").unwrap_or("power:0.6"))?;
            let mode = ResidueMode::parse(params, ResidueMode::Finite)?;
            Ok(Box::new(BernoulliModel::new(rule, mode)))
        }
        "ewens" => {
            params.reject_unknown(&["theta", "K", "residue"])?;
            let theta = params.get_f64("theta", 1.0)?;
            let k = params.get_f64("K", 0.0)?;
            let mode = ResidueMode::parse(params, ResidueMode::Limit)?;
            Ok(Box::new(EwensModel::new(theta, k, mode)?))
        }
        "fgraph" => {
            params.reject_unknown(&[])?;
            Ok(Box::new(FunctionalGraphModel))
        }
        "fqpoly-distinct" | "fqpoly-mult" => {
            params.reject_unknown(&["q"])?;
            let q = params.get_u64("q", 2)?;
            let counted = if name == "fqpoly-distinct" {
                FactorCount::Distinct
            } else {
                FactorCount::WithMultiplicity
            };
            Ok(Box::new(FqPolyModel::new(q, counted)?))
        }
        "omega" => {
            params.reject_unknown(&[])?;
            Ok(Box::new(OmegaModel))
        }
        "coloured-perm" => {
            params.reject_unknown(&["d", "residue"])?;
            let d = params.get_u64("d", 2)?;
            if d != 2 {
                return Err(Error::InvalidParameter(format!("coloured-perm supports d=2 only, got {d}")));
            }
            let mode = ResidueMode::parse(params, ResidueMode::Limit)?;
            Ok(Box::new(ColouredPermModel::new(mode)))
        }
        "omega-residue" => {
            params.reject_unknown(&["a"])?;
            let a = params.get_u64("a", 4)?;
            Ok(Box::new(OmegaResidueModel::new(a)?))
        }
        other => Err(Error::UnknownModel(other.to_string())),
    }
}
