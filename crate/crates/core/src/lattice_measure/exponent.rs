use num_complex::Complex64;
use num_integer::Integer;

use super::measure::SignedLatticeMeasure;
use crate::error::{Error, Result};

const M_GRID: usize = 4096;
const M_SAFETY: f64 = 0.99;

/// Compound-Poisson exponent `φ(ξ) = Σ_j c_j (e^{ijξ} − 1)`.
///
/// In dimension 2 the exponent is factorized, `φ(ξ) = φ_1(ξ_1) + φ_2(ξ_2)`,
/// and each coordinate carries its own jump map.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyExponent {
    coords: Vec<Vec<(i64, f64)>>,
    m: Vec<f64>,
    sigma2: Vec<f64>,
    big_m: Vec<f64>,
}

fn validate_jumps(jumps: &[(i64, f64)]) -> Result<Vec<(i64, f64)>> {
    let mut js: Vec<(i64, f64)> = jumps.iter().copied().filter(|&(_, c)| c != 0.0).collect();
    js.sort_by_key(|j| j.0);
    if js.is_empty() {
        return Err(Error::InvalidParameter("exponent needs a positive jump rate".into()));
    }
    for w in js.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::InvalidParameter(format!("repeated jump {}", w[0].0)));
        }
    }
    for &(j, c) in &js {
        if j == 0 {
            return Err(Error::InvalidParameter("jump 0 is not allowed".into()));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("jump rate c_{j} = {c} must be positive")));
        }
    }
    let g = js.iter().fold(0i64, |g, &(j, _)| g.gcd(&j));
    if g != 1 {
        return Err(Error::InvalidParameter(format!(
            "jumps generate the sublattice {g}Z, not Z"
        )));
    }
    Ok(js)
}

fn eval_coord(js: &[(i64, f64)], xi: f64) -> Complex64 {
    js.iter()
        .map(|&(j, c)| (Complex64::from_polar(1.0, j as f64 * xi) - 1.0) * c)
        .sum()
}

fn min_curvature(js: &[(i64, f64)]) -> f64 {
    let h = std::f64::consts::PI / M_GRID as f64;
    (1..=M_GRID)
        .map(|t| {
            let th = h * t as f64;
            -eval_coord(js, th).re / (th * th)
        })
        .fold(f64::INFINITY, f64::min)
}

impl LevyExponent {
    /// One-dimensional exponent from `(j, c_j)` pairs.
    pub fn new_1d(jumps: &[(i64, f64)]) -> Result<Self> {
        Self::factorized(&[jumps.to_vec()])
    }

    /// Factorized exponent, one jump map per coordinate (1 or 2 coordinates).
    pub fn factorized(coords: &[Vec<(i64, f64)>]) -> Result<Self> {
        if coords.is_empty() || coords.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension {} not supported",
                coords.len()
            )));
        }
        let coords = coords
            .iter()
            .map(|c| validate_jumps(c))
            .collect::<Result<Vec<_>>>()?;
        let m = coords
            .iter()
            .map(|js| js.iter().map(|&(j, c)| c * j as f64).sum())
            .collect();
        let sigma2 = coords
            .iter()
            .map(|js| js.iter().map(|&(j, c)| c * (j * j) as f64).sum())
            .collect();
        let big_m: Vec<f64> = coords.iter().map(|js| M_SAFETY * min_curvature(js)).collect();
        if big_m.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParameter("exponent has no positive curvature constant".into()));
        }
        Ok(LevyExponent {
            coords,
            m,
            sigma2,
            big_m,
        })
    }

    /// `φ(ξ) = e^{iξ} − 1`, the Poisson exponent.
    pub fn poisson() -> Self {
        Self::new_1d(&[(1, 1.0)]).unwrap()
    }

    /// `φ(ξ) = (1/d) Σ_i (e^{iξ_i} − 1)` on `Z^d` for `d ∈ {1, 2}`.
    pub fn poisson_split(d: usize) -> Self {
        let c = 1.0 / d as f64;
        Self::factorized(&vec![vec![(1, c)]; d]).unwrap()
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn jumps(&self, coord: usize) -> &[(i64, f64)] {
        &self.coords[coord]
    }

    /// Mean per unit λ, one entry per coordinate.
    pub fn m(&self) -> &[f64] {
        &self.m
    }

    /// Variance per unit λ, one entry per coordinate.
    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    /// Curvature constant per coordinate with `Re φ_i(θ) ≤ −M θ²`.
    pub fn big_m(&self) -> &[f64] {
        &self.big_m
    }

    /// `φ_i(ξ)` for coordinate `i`.
    pub fn eval(&self, coord: usize, xi: f64) -> Complex64 {
        eval_coord(&self.coords[coord], xi)
    }

    /// `φ_i'(ξ) = Σ c_j i j e^{ijξ}`.
    pub fn deriv1(&self, coord: usize, xi: f64) -> Complex64 {
        self.coords[coord]
            .iter()
            .map(|&(j, c)| Complex64::new(0.0, c * j as f64) * Complex64::from_polar(1.0, j as f64 * xi))
            .sum()
    }

    /// `φ_i''(ξ) = −Σ c_j j² e^{ijξ}`.
    pub fn deriv2(&self, coord: usize, xi: f64) -> Complex64 {
        self.coords[coord]
            .iter()
            .map(|&(j, c)| Complex64::from_polar(-c * (j * j) as f64, j as f64 * xi))
            .sum()
    }

    /// `sup_{|ξ| ≤ ε} |φ''(ξ) + σ²|` on a 4096-point grid (1D).
    pub fn gamma(&self, eps: f64) -> f64 {
        let s2 = self.sigma2[0];
        let h = 2.0 * eps / M_GRID as f64;
        (0..=M_GRID)
            .map(|t| (self.deriv2(0, -eps + h * t as f64) + s2).norm())
            .fold(0.0, f64::max)
    }

    /// `sup_ξ |φ'(ξ)|` over a 4096-point grid of the torus (1D).
    pub fn phi_prime_sup(&self) -> f64 {
        let h = 2.0 * std::f64::consts::PI / M_GRID as f64;
        (0..M_GRID)
            .map(|t| self.deriv1(0, h * t as f64).norm())
            .fold(0.0, f64::max)
    }
}

/// Poisson(μ) weights for `m = 0..=kmax`, computed outward from the mode so
/// that no intermediate value underflows.
pub fn poisson_weights(mu: f64, kmax: usize) -> Vec<f64> {
    if mu == 0.0 {
        let mut w = vec![0.0; kmax + 1];
        w[0] = 1.0;
        return w;
    }
    let mode = (mu.floor() as usize).min(kmax);
    let log_mode = -mu + mode as f64 * mu.ln() - libm::lgamma(mode as f64 + 1.0);
    let mut w = vec![0.0; kmax + 1];
    w[mode] = log_mode.exp();
    for k in (mode + 1)..=kmax {
        w[k] = w[k - 1] * mu / k as f64;
    }
    for k in (0..mode).rev() {
        w[k] = w[k + 1] * (k + 1) as f64 / mu;
    }
    w
}

/// Chernoff bound `P[N ≥ k] ≤ e^{−μ}(eμ/k)^k` for `k > μ`.
pub fn poisson_tail_chernoff(mu: f64, k: usize) -> f64 {
    let k = k as f64;
    if k <= mu {
        return 1.0;
    }
    (-mu + k * (1.0 + (mu / k).ln())).exp()
}

/// Truncation point and certified tail for Poisson(μ): returns `(kmax, tail)`
/// with `P[N > kmax] = tail < tol`.
///
/// The Chernoff bound gives a first cut-off; the tail beyond it is then
/// summed directly and the cut-off lowered while the tail stays below `tol`.
pub fn poisson_truncation(mu: f64, tol: f64) -> (usize, f64) {
    if mu == 0.0 {
        return (0, 0.0);
    }
    let mut k = (mu.ceil() as usize).max(1);
    while poisson_tail_chernoff(mu, k) >= tol {
        k += 1 + k / 64;
    }
    // Direct summation of the tail from k onward.
    let extra = 64 + (10.0 * mu.sqrt()) as usize;
    let w = poisson_weights(mu, k + extra);
    let mut tail: f64 = w[k..].iter().rev().sum();
    let ratio = mu / (k + extra + 1) as f64;
    tail += w[k + extra] * ratio / (1.0 - ratio);
    let mut kmax = k - 1;
    while kmax > 0 && tail + w[kmax] < tol {
        tail += w[kmax];
        kmax -= 1;
    }
    (kmax, tail)
}

fn compound_poisson_1d(js: &[(i64, f64)], lambda: f64, tol: f64) -> Result<SignedLatticeMeasure> {
    let total: f64 = js.iter().map(|j| j.1).sum();
    let mu = lambda * total;
    let (kmax, tail) = poisson_truncation(mu, tol);
    let w = poisson_weights(mu, kmax);
    if js.len() == 1 {
        // Single jump size j: the m-fold jump law is δ_{mj}.
        let j = js[0].0;
        if j > 0 {
            let mut v = vec![0.0; (j as usize) * kmax + 1];
            for (m, &wm) in w.iter().enumerate() {
                v[m * j as usize] = wm;
            }
            return SignedLatticeMeasure::new_1d(0, v, tail);
        }
        let step = (-j) as usize;
        let mut v = vec![0.0; step * kmax + 1];
        for (m, &wm) in w.iter().enumerate() {
            v[step * kmax - m * step] = wm;
        }
        return SignedLatticeMeasure::new_1d(j * kmax as i64, v, tail);
    }
    let atoms: Vec<(i64, f64)> = js.iter().map(|&(j, c)| (j, c / total)).collect();
    let jump = SignedLatticeMeasure::from_atoms(&atoms)?;
    let lo = jump.offset()[0];
    let width = jump.width();
    let out_lo = lo.min(0) * kmax as i64;
    let out_hi = (lo + width as i64 - 1).max(0) * kmax as i64;
    let mut acc = vec![0.0; (out_hi - out_lo + 1) as usize];
    let mut cur = SignedLatticeMeasure::dirac(0);
    for (m, &wm) in w.iter().enumerate() {
        if m > 0 {
            cur = cur.convolve(&jump)?;
        }
        let base = (cur.offset()[0] - out_lo) as usize;
        for (t, &x) in cur.weights().iter().enumerate() {
            acc[base + t] += wm * x;
        }
    }
    SignedLatticeMeasure::new_1d(out_lo, acc, tail + cur.truncated_mass())
}

/// The law with Fourier transform `e^{λφ(ξ)}`, truncated so that the
/// discarded mass is below `tol`.
pub fn compound_poisson_measure(
    exponent: &LevyExponent,
    lambda: f64,
    tol: f64,
) -> Result<SignedLatticeMeasure> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::OutOfRange(format!("tol {tol} not in (0, 1e-3]")));
    }
    match exponent.dimension() {
        1 => compound_poisson_1d(exponent.jumps(0), lambda, tol),
        _ => {
            let a = compound_poisson_1d(exponent.jumps(0), lambda, tol / 2.0)?;
            let b = compound_poisson_1d(exponent.jumps(1), lambda, tol / 2.0)?;
            SignedLatticeMeasure::outer(&a, &b)
        }
    }
}
