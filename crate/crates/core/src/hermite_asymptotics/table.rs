use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Highest polynomial degree supported.
pub const MAX_HERMITE: usize = 20;
/// Highest index for the `M_r` and `V_r` constants.
pub const MAX_CONSTANT: usize = 16;
const DOMAIN: f64 = 12.0;
const SCAN_STEP: f64 = 1e-3;
const BISECT_TOL: f64 = 1e-13;

/// Exact coefficients of the probabilists' Hermite polynomial `H_r`,
/// lowest degree first, from `H_{r+1} = x H_r − H_r'`.
pub fn hermite_coeffs(r: usize) -> Result<Vec<i64>> {
    if r > MAX_HERMITE {
        return Err(Error::OutOfRange(format!("H_{r}: order above {MAX_HERMITE}")));
    }
    let mut h = vec![1i64];
    for _ in 0..r {
        let mut next = vec![0i64; h.len() + 1];
        for (k, &c) in h.iter().enumerate() {
            next[k + 1] += c;
            if k > 0 {
                next[k - 1] -= k as i64 * c;
            }
        }
        h = next;
    }
    Ok(h)
}

/// Horner evaluation of an integer-coefficient polynomial.
pub fn eval_poly(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

fn cached_coeffs() -> &'static Vec<Vec<i64>> {
    static C: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    C.get_or_init(|| (0..=MAX_HERMITE).map(|r| hermite_coeffs(r).unwrap()).collect())
}

/// `H_r(x)` for `r ≤ 20`.
pub fn hermite_eval(r: usize, x: f64) -> f64 {
    eval_poly(&cached_coeffs()[r], x)
}

/// `G_r(α) = (d/dα)^r e^{−α²/2} = (−1)^r H_r(α) e^{−α²/2}`.
pub fn g_eval(r: usize, alpha: f64) -> Result<f64> {
    if r > MAX_HERMITE {
        return Err(Error::OutOfRange(format!("G_{r}: order above {MAX_HERMITE}")));
    }
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * hermite_eval(r, alpha) * (-alpha * alpha / 2.0).exp())
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > BISECT_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real zeros of `H_r` in increasing order (sign scan plus bisection).
pub fn hermite_zeros(r: usize) -> Result<Vec<f64>> {
    if r > MAX_HERMITE {
        return Err(Error::OutOfRange(format!("H_{r}: order above {MAX_HERMITE}")));
    }
    let f = |x: f64| hermite_eval(r, x);
    let steps = (2.0 * DOMAIN / SCAN_STEP).round() as usize;
    let mut zeros = Vec::with_capacity(r);
    let mut prev_x = -DOMAIN;
    let mut prev = f(prev_x);
    for i in 1..=steps {
        let x = -DOMAIN + i as f64 * SCAN_STEP;
        let v = f(x);
        if v == 0.0 {
            zeros.push(x);
        } else if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            zeros.push(bisect(f, prev_x, x));
        }
        prev_x = x;
        prev = v;
    }
    Ok(zeros)
}

/// Smallest absolute value of a zero of `H_r`.
pub fn smallest_abs_zero(r: usize) -> Result<f64> {
    if r == 0 || r > MAX_HERMITE {
        return Err(Error::OutOfRange(format!("smallest zero of H_{r}")));
    }
    if r % 2 == 1 {
        return Ok(0.0);
    }
    let f = |x: f64| hermite_eval(r, x);
    let mut x0 = 0.0;
    let mut f0 = f(0.0);
    loop {
        let x1 = x0 + SCAN_STEP;
        let f1 = f(x1);
        if f1 == 0.0 {
            return Ok(x1);
        }
        if (f1 < 0.0) != (f0 < 0.0) {
            return Ok(bisect(f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
}

/// `M_r = |G_r(z_{r+1})|`.
pub fn m_const(r: usize) -> Result<f64> {
    if r > MAX_CONSTANT {
        return Err(Error::OutOfRange(format!("M_{r}: index above {MAX_CONSTANT}")));
    }
    Ok(g_eval(r, smallest_abs_zero(r + 1)?)?.abs())
}

/// `V_r = ∫_R |G_{r+1}|` together with an error bar for the neglected tails.
///
/// The integral is split at the zeros of `H_{r+1}` inside `[−12, 12]` and each
/// sign-constant piece is integrated with a 64-point Gauss–Legendre rule.
pub fn v_const_with_error(r: usize) -> Result<(f64, f64)> {
    if r > MAX_CONSTANT {
        return Err(Error::OutOfRange(format!("V_{r}: index above {MAX_CONSTANT}")));
    }
    let gl = GaussLegendre::new(64);
    let mut cuts = vec![-DOMAIN];
    cuts.extend(hermite_zeros(r + 1)?);
    cuts.push(DOMAIN);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let piece = gl.integrate(w[0], w[1], |x| g_eval(r + 1, x).unwrap());
        total += piece.abs();
    }
    // |G_{r+1}(x)| ≤ Σ|h_k| x^{r+1} e^{−x²/2} beyond 12; bounded crudely by
    // the tail mass times the coefficient sum at 12.
    let h = &cached_coeffs()[r + 1];
    let coeff_sum: f64 = h.iter().map(|c| c.abs() as f64).sum();
    let tail = 2.0 * coeff_sum * DOMAIN.powi(r as i32 + 1) * (-DOMAIN * DOMAIN / 2.0).exp();
    Ok((total, tail))
}

/// `V_r = ∫_R |G_{r+1}(α)| dα`.
pub fn v_const(r: usize) -> Result<f64> {
    Ok(v_const_with_error(r)?.0)
}

/// Precomputed Hermite data up to a maximal order.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub max_order: usize,
    pub coeffs: Vec<Vec<i64>>,
    /// `z[r]`: smallest absolute zero of `H_r` (`z[0]` is NaN).
    pub z: Vec<f64>,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl HermiteTable {
    /// Table for `r ≤ max_order ≤ 16`.
    pub fn new(max_order: usize) -> Result<Self> {
        if max_order > MAX_CONSTANT {
            return Err(Error::OutOfRange(format!("table order {max_order}")));
        }
        let coeffs = (0..=max_order + 2)
            .map(hermite_coeffs)
            .collect::<Result<Vec<_>>>()?;
        let z = (0..=max_order + 2)
            .map(|r| if r == 0 { Ok(f64::NAN) } else { smallest_abs_zero(r) })
            .collect::<Result<Vec<_>>>()?;
        let m = (0..=max_order).map(m_const).collect::<Result<Vec<_>>>()?;
        let v = (0..=max_order).map(v_const).collect::<Result<Vec<_>>>()?;
        Ok(HermiteTable {
            max_order,
            coeffs,
            z,
            m,
            v,
        })
    }

    /// Shared table with `max_order = 16`.
    pub fn global() -> &'static HermiteTable {
        static T: OnceLock<HermiteTable> = OnceLock::new();
        T.get_or_init(|| HermiteTable::new(MAX_CONSTANT).unwrap())
    }
}
