use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::table::{hermite_eval, HermiteTable, MAX_CONSTANT};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

fn check(beta: f64, sigma2: f64, lambda: f64, r: usize, need: usize) -> Result<()> {
    if !(lambda > 0.0) || !(sigma2 > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "prediction needs lambda > 0 and sigma2 > 0 (got {lambda}, {sigma2})"
        )));
    }
    if r + need > MAX_CONSTANT {
        return Err(Error::OutOfRange(format!("order {r} too large")));
    }
    Ok(())
}

/// Leading term of `d_L`: `|β| M_{r+1} / (√(2π) (σ²λ)^{r/2+1})`.
pub fn predict_local(beta: f64, sigma2: f64, lambda: f64, r: usize) -> Result<f64> {
    check(beta, sigma2, lambda, r, 1)?;
    let m = HermiteTable::global().m[r + 1];
    Ok(beta.abs() * m / ((2.0 * PI).sqrt() * (sigma2 * lambda).powf(r as f64 / 2.0 + 1.0)))
}

/// Leading term of `d_K`: `|β| M_r / (√(2π) (σ²λ)^{(r+1)/2})`.
pub fn predict_kolmogorov(beta: f64, sigma2: f64, lambda: f64, r: usize) -> Result<f64> {
    check(beta, sigma2, lambda, r, 0)?;
    let m = HermiteTable::global().m[r];
    Ok(beta.abs() * m / ((2.0 * PI).sqrt() * (sigma2 * lambda).powf((r as f64 + 1.0) / 2.0)))
}

/// Leading term of `d_TV`: `|β| V_r / (√(2π) (σ²λ)^{(r+1)/2})`.
pub fn predict_tv(beta: f64, sigma2: f64, lambda: f64, r: usize) -> Result<f64> {
    check(beta, sigma2, lambda, r, 0)?;
    let v = HermiteTable::global().v[r];
    Ok(beta.abs() * v / ((2.0 * PI).sqrt() * (sigma2 * lambda).powf((r as f64 + 1.0) / 2.0)))
}

/// Coefficients `β^α` indexed by multi-index `α = (α_1, α_2)`.
pub type MultiBeta = BTreeMap<[u32; 2], f64>;

fn check_md(beta: &MultiBeta, sigma: [f64; 2], lambda: f64, r: usize) -> Result<()> {
    if !(lambda > 0.0) || sigma.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidParameter("prediction needs lambda > 0 and sigma > 0".into()));
    }
    for a in beta.keys() {
        if (a[0] + a[1]) as usize != r + 1 {
            return Err(Error::InvalidParameter(format!(
                "multi-index {a:?} does not have |alpha| = r+1 = {}",
                r + 1
            )));
        }
        if a[0] as usize > 20 || a[1] as usize > 20 {
            return Err(Error::OutOfRange(format!("multi-index {a:?}")));
        }
    }
    Ok(())
}

/// `Σ_α β^α H_α(x)/σ^α` with `H_α(x) = H_{α_1}(x_1) H_{α_2}(x_2)`.
pub fn md_polynomial(beta: &MultiBeta, sigma: [f64; 2], x: f64, y: f64) -> f64 {
    beta.iter()
        .map(|(a, &b)| {
            b * hermite_eval(a[0] as usize, x) * hermite_eval(a[1] as usize, y)
                / (sigma[0].powi(a[0] as i32) * sigma[1].powi(a[1] as i32))
        })
        .sum()
}

fn md_density(beta: &MultiBeta, sigma: [f64; 2], x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / 2.0).exp() * md_polynomial(beta, sigma, x, y).abs()
}

/// `sup_{x ∈ R²} e^{−‖x‖²/2} |Σ β^α H_α(x)/σ^α|`: 200×200 grid on `[−6,6]²`
/// followed by a shrinking pattern search around the best grid point.
pub fn md_sup_inner(beta: &MultiBeta, sigma: [f64; 2]) -> f64 {
    let n = 200;
    let h = 12.0 / (n - 1) as f64;
    let f = |x: f64, y: f64| md_density(beta, sigma, x, y);
    let mut best = (0.0, 0.0, f(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (-6.0 + h * i as f64, -6.0 + h * j as f64);
            let v = f(x, y);
            if v > best.2 {
                best = (x, y, v);
            }
        }
    }
    let mut step = h;
    while step > 1e-9 {
        let mut improved = false;
        for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let (x, y) = (best.0 + dx * step, best.1 + dy * step);
            let v = f(x, y);
            if v > best.2 {
                best = (x, y, v);
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best.2
}

/// `∫_{R²} e^{−‖x‖²/2} |Σ β^α H_α(x)/σ^α| dx` over `[−10,10]²`.
///
/// The outer axis uses 400 Gauss–Legendre nodes. For each outer node the
/// inner integrand is split at the sign changes of the polynomial, so each
/// inner piece is smooth and gets its own 48-point rule.
pub fn md_integral_inner(beta: &MultiBeta, sigma: [f64; 2]) -> f64 {
    let outer = GaussLegendre::new(400).mapped(-10.0, 10.0);
    let inner = GaussLegendre::new(48);
    let scan = 4000;
    let hs = 20.0 / scan as f64;
    outer
        .iter()
        .map(|&(x, wx)| {
            let p = |y: f64| md_polynomial(beta, sigma, x, y);
            let mut cuts = vec![-10.0];
            let mut prev_y = -10.0;
            let mut prev = p(prev_y);
            for k in 1..=scan {
                let y = -10.0 + hs * k as f64;
                let v = p(y);
                if prev != 0.0 && v != 0.0 && (v < 0.0) != (prev < 0.0) {
                    let (mut a, mut b, mut fa) = (prev_y, y, prev);
                    for _ in 0..60 {
                        let m = 0.5 * (a + b);
                        let fm = p(m);
                        if (fm < 0.0) == (fa < 0.0) {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                    }
                    cuts.push(0.5 * (a + b));
                }
                prev_y = y;
                prev = v;
            }
            cuts.push(10.0);
            let row: f64 = cuts
                .windows(2)
                .map(|w| inner.integrate(w[0], w[1], |y| md_density(beta, sigma, x, y)))
                .sum();
            wx * row
        })
        .sum()
}

/// Leading term of `d_L` in dimension 2:
/// `sup(...) / ((Π √(2π) σ_i) λ^{(r+3)/2})`.
pub fn predict_local_md(beta: &MultiBeta, sigma: [f64; 2], lambda: f64, r: usize) -> Result<f64> {
    check_md(beta, sigma, lambda, r)?;
    let pref = 2.0 * PI * sigma[0] * sigma[1];
    Ok(md_sup_inner(beta, sigma) / (pref * lambda.powf((r as f64 + 3.0) / 2.0)))
}

/// Leading term of `d_TV` in dimension 2:
/// `∫(...) / (2π λ^{(r+1)/2})`.
pub fn predict_tv_md(beta: &MultiBeta, sigma: [f64; 2], lambda: f64, r: usize) -> Result<f64> {
    check_md(beta, sigma, lambda, r)?;
    Ok(md_integral_inner(beta, sigma) / (2.0 * PI * lambda.powf((r as f64 + 1.0) / 2.0)))
}
