use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Direct-summation length used before the Euler–Maclaurin tail.
const DIRECT_TERMS: u64 = 100_000;
const ZETA_CACHE_MAX: u32 = 128;

/// `B_{2k}/(2k)!` for k = 1..=6.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{j≥0} (j + a)^{−s}` for real `s > 1`, `a > 0`.
///
/// Sums the first 10^5 terms directly (smallest first) and adds the
/// Euler–Maclaurin expansion of the remainder.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    // For large s the terms vanish long before the cut-off.
    let n = if s > 30.0 { 64 } else { DIRECT_TERMS };
    let mut direct = 0.0;
    for j in (0..n).rev() {
        direct += (j as f64 + a).powf(-s);
    }
    let x = n as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Rising products s(s+1)...(s+2k−2) times x^{−s−2k+1}.
    let mut rising = s;
    let mut xp = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += b * rising * xp;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        xp /= x * x;
    }
    direct + tail
}

fn zeta_minus_one_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=ZETA_CACHE_MAX)
            .map(|k| if k < 2 { f64::NAN } else { hurwitz_zeta(k as f64, 2.0) })
            .collect()
    })
}

/// `ζ(k) − 1 = Σ_{j≥2} j^{−k}` without cancellation, for integer `k ≥ 2`.
pub fn zeta_minus_one(k: u32) -> f64 {
    if k <= ZETA_CACHE_MAX {
        zeta_minus_one_table()[k as usize]
    } else {
        // 2^{−k} dominates; 3^{−k} is below 1e−38 of it.
        2f64.powi(-(k as i32)) + 3f64.powi(-(k as i32))
    }
}

/// Riemann `ζ(k)` for integer `2 ≤ k ≤ 40`.
pub fn zeta_value(k: u32) -> Result<f64> {
    if !(2..=40).contains(&k) {
        return Err(Error::OutOfRange(format!("zeta({k}) outside 2..=40")));
    }
    Ok(1.0 + zeta_minus_one(k))
}

/// Partial sum `Σ_{j=1}^{n} j^{−s}`, smallest terms first.
pub fn power_sum_partial(s: f64, n: u64) -> f64 {
    let mut acc = 0.0;
    for j in (1..=n).rev() {
        acc += (j as f64).powf(-s);
    }
    acc
}

/// Möbius function by trial division.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n >= 1);
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Euler totient by trial division.
pub fn euler_phi(mut n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Prime zeta `P(k) = Σ_p p^{−k}` for `2 ≤ k ≤ 40`.
///
/// Without a prime list this uses `P(k) = Σ_{n≥1} μ(n)/n · log ζ(nk)`,
/// stopping once `2^{−nk}/n < 1e−17`. With a list of all primes up to some
/// `X`, it sums them directly and adds the tail estimate
/// `X^{1−k}/((k−1) log X)`.
pub fn prime_zeta_value(k: u32, primes: Option<&[u64]>) -> Result<f64> {
    if !(2..=40).contains(&k) {
        return Err(Error::OutOfRange(format!("prime zeta({k}) outside 2..=40")));
    }
    if let Some(ps) = primes {
        let mut acc = 0.0;
        for &p in ps.iter().rev() {
            acc += (p as f64).powi(-(k as i32));
        }
        if let Some(&x) = ps.last() {
            let x = x as f64;
            acc += x.powf(1.0 - k as f64) / ((k as f64 - 1.0) * x.ln());
        }
        return Ok(acc);
    }
    let mut acc = 0.0;
    let mut n = 1u64;
    loop {
        let s = n as u32 * k;
        let size = 2f64.powi(-(s as i32)) / n as f64;
        if size < 1e-17 {
            break;
        }
        let mu = mobius(n);
        if mu != 0 {
            acc += mu as f64 / n as f64 * zeta_minus_one(s).ln_1p();
        }
        n += 1;
    }
    Ok(acc)
}
