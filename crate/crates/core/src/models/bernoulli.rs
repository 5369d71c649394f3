use super::{Model, ResidueMode};
use crate::bounds::ResidueFunction;
use crate::error::{Error, Result};
use crate::lattice_measure::{LevyExponent, SignedLatticeMeasure};
use crate::symfun::{power_law_alphabet, FormalAlphabet};

/// Rule producing the Bernoulli parameters `p_1, …, p_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BernoulliRule {
    /// `p_j = j^{−a}` with `a > 1/2`.
    Power(f64),
    /// `p_j = λ/n` for every `j`.
    Uniform(f64),
}

impl BernoulliRule {
    /// Parses `power:0.6` or `uniform:1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("Bernoulli rule `{s}`: expected power:a or uniform:lambda")))?;
        let v: f64 = val
            .parse()
            .map_err(|_| Error::Parse(format!("Bernoulli rule `{s}`: bad number")))?;
        match kind {
            "power" if v > 0.5 && v.is_finite() => Ok(BernoulliRule::Power(v)),
            "power" => Err(Error::InvalidParameter(format!("power:{v} needs a > 1/2"))),
            "uniform" if v > 0.0 && v.is_finite() => Ok(BernoulliRule::Uniform(v)),
            "uniform" => Err(Error::InvalidParameter(format!("uniform:{v} needs lambda > 0"))),
            _ => Err(Error::Parse(format!("unknown Bernoulli rule `{kind}`"))),
        }
    }

    /// `p_1, …, p_n`.
    pub fn parameters(&self, n: u64) -> Result<Vec<f64>> {
        match *self {
            BernoulliRule::Power(a) => Ok((1..=n).map(|j| (j as f64).powf(-a)).collect()),
            BernoulliRule::Uniform(l) => {
                if l > n as f64 {
                    return Err(Error::OutOfRange(format!("uniform:{l} needs n >= lambda, got n = {n}")));
                }
                Ok(vec![l / n as f64; n as usize])
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            BernoulliRule::Power(a) => format!("p=power:{a}"),
            BernoulliRule::Uniform(l) => format!("p=uniform:{l}"),
        }
    }
}

/// Exact law of `Σ_j B(p_j)` by iterated two-atom convolution.
pub fn bernoulli_exact_law(p: &[f64]) -> Result<SignedLatticeMeasure> {
    if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidParameter(format!("Bernoulli parameter {bad} not in [0,1]")));
    }
    p.iter()
        .try_fold(SignedLatticeMeasure::dirac(0), |m, &q| m.convolve_two_point(1.0 - q, q))
}

/// Limiting alphabet `𝔭_k = Σ_{j≥1} p_j^k` (`𝔭_1 := 0`).
///
/// For `power:a` this is `ζ(ak)`; for `uniform` every `𝔭_{k≥2}` tends to 0.
pub fn bernoulli_alphabet(rule: &BernoulliRule, k_max: usize) -> FormalAlphabet {
    match rule {
        BernoulliRule::Power(a) => power_law_alphabet(*a, k_max),
        BernoulliRule::Uniform(_) => FormalAlphabet::zero(k_max),
    }
}

/// Finite alphabet `𝔭_1 = Σp − λ`, `𝔭_k = Σ_j p_j^k`: the power sums of the
/// residue of `Σ B(p_j)` against Poisson(λ).
pub fn bernoulli_residue_alphabet(label: &str, p: &[f64], lambda: f64, k_max: usize) -> Result<FormalAlphabet> {
    let mut sums = vec![0.0; k_max];
    for &q in p.iter().rev() {
        let mut qk = q;
        for s in sums.iter_mut() {
            *s += qk;
            qk *= q;
        }
    }
    sums[0] -= lambda;
    FormalAlphabet::new(label, sums)
}

/// `X_n = Σ_{j≤n} B(p_j)` compared with Poisson(`Σ p_j`).
#[derive(Debug, Clone)]
pub struct BernoulliModel {
    rule: BernoulliRule,
    mode: ResidueMode,
}

impl BernoulliModel {
    pub fn new(rule: BernoulliRule, mode: ResidueMode) -> Self {
        BernoulliModel { rule, mode }
    }
}

impl Model for BernoulliModel {
    fn name(&self) -> &'static str {
        "bernoulli"
    }

    fn params(&self) -> String {
        format!("{} residue={}", self.rule.describe(), self.mode.as_str())
    }

    fn alphabet_label(&self) -> String {
        "{p_1,p_2,p_3,...}".into()
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
        let p = self.rule.parameters(n)?;
        Ok(p.iter().rev().sum())
    }

    fn exact_law(&self, n: u64) -> Result<SignedLatticeMeasure> {
        self.check_n(n)?;
        bernoulli_exact_law(&self.rule.parameters(n)?)
    }

    fn alphabet(&self, n: u64, k_max: usize) -> Result<FormalAlphabet> {
        self.check_n(n)?;
        match self.mode {
            ResidueMode::Limit => Ok(bernoulli_alphabet(&self.rule, k_max)),
            ResidueMode::Finite => {
                let p = self.rule.parameters(n)?;
                bernoulli_residue_alphabet("bernoulli-finite", &p, self.lambda(n)?, k_max)
            }
        }
    }

    fn exact_residue(&self, n: u64, lambda: f64) -> Result<Option<ResidueFunction>> {
        let p = self.rule.parameters(n)?;
        Ok(Some(ResidueFunction::bernoulli_product(&p, lambda)?))
    }

    fn bernoulli_parameters(&self, n: u64) -> Option<Vec<f64>> {
        self.rule.parameters(n).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::{power_sum_partial, zeta_value};
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_law_examples() {
        let l = bernoulli_exact_law(&[0.3]).unwrap();
        assert_abs_diff_eq!(l.at(0), 0.7, epsilon = 1e-16);
        assert_abs_diff_eq!(l.at(1), 0.3, epsilon = 1e-16);
        let l = bernoulli_exact_law(&[0.5, 0.5]).unwrap();
        assert_eq!((l.at(0), l.at(1), l.at(2)), (0.25, 0.5, 0.25));
        let l = bernoulli_exact_law(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
        assert_abs_diff_eq!(l.at(3), 1.0 / 6.0, epsilon = 1e-16);
        assert!(bernoulli_exact_law(&[1.2]).is_err());
    }

    #[test]
    fn alphabets() {
        let a = bernoulli_alphabet(&BernoulliRule::Power(1.0), 6);
        assert_eq!(a.p(1), 0.0);
        assert_abs_diff_eq!(a.p(2), zeta_value(2).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.p(5), zeta_value(5).unwrap(), epsilon = 1e-12);
        let b = bernoulli_alphabet(&BernoulliRule::Power(0.6), 3);
        // Σ j^{−1.2}: direct partial sum plus the integral tail.
        let n = 2_000_000u64;
        let direct = power_sum_partial(1.2, n) + (n as f64).powf(-0.2) / 0.2 - 0.5 * (n as f64).powf(-1.2);
        assert_abs_diff_eq!(b.p(2), direct, epsilon = 1e-9);
        let f = bernoulli_residue_alphabet("f", &[0.5, 0.25], 0.75, 3).unwrap();
        assert_eq!(f.powers(), &[0.0, 0.3125, 0.140625]);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!(BernoulliRule::parse("power:0.6").unwrap(), BernoulliRule::Power(0.6));
        assert_eq!(BernoulliRule::parse("uniform:1").unwrap(), BernoulliRule::Uniform(1.0));
        assert!(BernoulliRule::parse("power:0.5").is_err());
        assert!(BernoulliRule::parse("other:1").is_err());
        assert!(BernoulliRule::Uniform(5.0).parameters(3).is_err());
    }

    #[test]
    fn model_lambda_is_the_mean() {
        let m = BernoulliModel::new(BernoulliRule::Power(0.6), ResidueMode::Finite);
        let law = m.exact_law(500).unwrap();
        assert_abs_diff_eq!(law.mean()[0], m.lambda(500).unwrap(), epsilon = 1e-9);
        assert_eq!(m.alphabet(500, 4).unwrap().p(1), 0.0);
    }
}
