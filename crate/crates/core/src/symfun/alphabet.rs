use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::partitions::{partitions, z_of_partition};
use crate::error::{Error, Result};

/// Power sums `𝔭_1..𝔭_K` of a formal alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalAlphabet {
    label: String,
    p: Vec<f64>,
}

impl FormalAlphabet {
    /// `p[k-1]` is `𝔭_k`.
    pub fn new(label: impl Into<String>, p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("alphabet needs K >= 1".into()));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("alphabet power sums must be finite".into()));
        }
        Ok(FormalAlphabet {
            label: label.into(),
            p,
        })
    }

    /// Builds `𝔭_k = f(k)` for `k = 1..=K`.
    pub fn from_fn(label: impl Into<String>, k_max: usize, f: impl Fn(u32) -> f64) -> Result<Self> {
        Self::new(label, (1..=k_max as u32).map(f).collect())
    }

    /// The alphabet with all power sums zero.
    pub fn zero(k_max: usize) -> Self {
        FormalAlphabet {
            label: "zero".into(),
            p: vec![0.0; k_max.max(1)],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Truncation order `K`.
    pub fn k_max(&self) -> usize {
        self.p.len()
    }

    /// `𝔭_k` for `1 ≤ k ≤ K`.
    pub fn p(&self, k: usize) -> f64 {
        self.p[k - 1]
    }

    pub fn powers(&self) -> &[f64] {
        &self.p
    }

    /// Copy with `𝔭_1` replaced.
    pub fn with_p1(&self, p1: f64) -> Self {
        let mut a = self.clone();
        a.p[0] = p1;
        a
    }

    /// Serializes to `label=...`, `K=...`, `p1=...` lines.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "label={}", self.label).unwrap();
        writeln!(s, "K={}", self.p.len()).unwrap();
        for (i, v) in self.p.iter().enumerate() {
            writeln!(s, "p{}={:.16e}", i + 1, v).unwrap();
        }
        s
    }

    /// Parses the format written by [`to_kv`](Self::to_kv).
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut label = String::new();
        let mut k = None;
        let mut vals: Vec<(usize, f64)> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            match key {
                "label" => label = val.to_string(),
                "K" => k = Some(val.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                _ => {
                    let idx = key
                        .strip_prefix('p')
                        .and_then(|i| i.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("unknown key `{key}`")))?;
                    let v = val.parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
                    vals.push((idx, v));
                }
            }
        }
        let k = k.ok_or_else(|| Error::Parse("missing K".into()))?;
        let mut p = vec![0.0; k];
        for (i, v) in vals {
            if i == 0 || i > k {
                return Err(Error::Parse(format!("p{i} outside 1..={k}")));
            }
            p[i - 1] = v;
        }
        Self::new(label, p)
    }
}

/// `𝔢_k = Σ_{L ⊢ k} (−1)^{|L|−ℓ(L)} 𝔭_L / z_L`.
pub fn elementary_from_powers(a: &FormalAlphabet, k: usize) -> Result<f64> {
    if k > a.k_max() {
        return Err(Error::OutOfRange(format!(
            "e_{k} needs power sums up to {k}, alphabet has K={}",
            a.k_max()
        )));
    }
    let mut acc = 0.0;
    for l in partitions(k as u32)? {
        let mut term = 1.0;
        for &part in l.parts() {
            term *= a.p(part as usize);
        }
        if term == 0.0 {
            continue;
        }
        let z = z_of_partition(&l).to_f64().unwrap_or(f64::INFINITY);
        let sign = if (l.size() as usize - l.length()).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * term / z;
    }
    Ok(acc)
}

/// `(𝔢_0, …, 𝔢_k)`.
pub fn elementary_sequence(a: &FormalAlphabet, k: usize) -> Result<Vec<f64>> {
    (0..=k).map(|j| elementary_from_powers(a, j)).collect()
}

/// `𝔭_k(A + B) = 𝔭_k(A) + 𝔭_k(B)`, truncated to the smaller order.
pub fn alphabet_sum(a: &FormalAlphabet, b: &FormalAlphabet) -> FormalAlphabet {
    let k = a.k_max().min(b.k_max());
    FormalAlphabet {
        label: format!("{}+{}", a.label, b.label),
        p: (0..k).map(|i| a.p[i] + b.p[i]).collect(),
    }
}

/// `𝔭_k(ε(A)) = (−1)^{k−1} 𝔭_k(A)`.
pub fn alphabet_epsilon(a: &FormalAlphabet) -> FormalAlphabet {
    FormalAlphabet {
        label: format!("eps({})", a.label),
        p: a
            .p
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
            .collect(),
    }
}
