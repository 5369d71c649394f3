use std::sync::OnceLock;

use super::alphabet::FormalAlphabet;
use super::zeta::{hurwitz_zeta, prime_zeta_value, zeta_minus_one};

/// `𝔭_k = ζ(k)` for k ≥ 2, `𝔭_1 = 0` (the alphabet `N*^{-1}`).
pub fn zeta_alphabet(k_max: usize) -> FormalAlphabet {
    FormalAlphabet::from_fn("zeta", k_max, |k| if k == 1 { 0.0 } else { 1.0 + zeta_minus_one(k) })
        .expect("finite zeta values")
}

fn prime_zeta_cached(k: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        (0..=40)
            .map(|k| if k < 2 { 0.0 } else { prime_zeta_value(k, None).unwrap() })
            .collect()
    });
    t[k as usize]
}

/// `𝔭_k = Σ_p p^{−k}` for k ≥ 2, `𝔭_1 = 0` (the alphabet `P^{-1}`).
pub fn prime_zeta_alphabet(k_max: usize) -> FormalAlphabet {
    FormalAlphabet::from_fn("prime-zeta", k_max.min(40), |k| {
        if k == 1 {
            0.0
        } else {
            prime_zeta_cached(k)
        }
    })
    .expect("finite prime zeta values")
}

/// `𝔭_k = Σ_{n≥1} (2n−1)^{−k} = (1 − 2^{−k}) ζ(k)` for k ≥ 2, `𝔭_1 = 0`.
pub fn odd_zeta_alphabet(k_max: usize) -> FormalAlphabet {
    FormalAlphabet::from_fn("odd-zeta", k_max, |k| {
        if k == 1 {
            0.0
        } else {
            (1.0 - 2f64.powi(-(k as i32))) * (1.0 + zeta_minus_one(k))
        }
    })
    .expect("finite values")
}

/// `𝔭_k = Σ_{j≥1} (θ/(θ+j−1))^k = θ^k ζ(k, θ)` for k ≥ 2, `𝔭_1 = 0`.
pub fn theta_alphabet(theta: f64, k_max: usize) -> FormalAlphabet {
    FormalAlphabet::from_fn(format!("theta={theta}"), k_max, |k| {
        if k == 1 {
            0.0
        } else {
            theta.powi(k as i32) * hurwitz_zeta(k as f64, theta)
        }
    })
    .expect("finite values")
}

/// `𝔭_k = Σ_{j≥1} j^{−ak}` for k ≥ 2, `𝔭_1 = 0`; requires `2a > 1`.
pub fn power_law_alphabet(a: f64, k_max: usize) -> FormalAlphabet {
    FormalAlphabet::from_fn(format!("power={a}"), k_max, |k| {
        if k == 1 {
            0.0
        } else {
            hurwitz_zeta(a * k as f64, 1.0)
        }
    })
    .expect("finite values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::zeta::power_sum_partial;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn odd_zeta_matches_direct_sum() {
        let a = odd_zeta_alphabet(4);
        assert_abs_diff_eq!(a.p(2), PI * PI / 8.0, epsilon = 1e-13);
        let direct: f64 = (1..2_000_000u64).rev().map(|n| ((2 * n - 1) as f64).powi(-3)).sum();
        assert_abs_diff_eq!(a.p(3), direct, epsilon = 1e-12);
    }

    #[test]
    fn theta_two_is_shifted_zeta() {
        let a = theta_alphabet(2.0, 3);
        assert_abs_diff_eq!(a.p(2), 4.0 * (PI * PI / 6.0 - 1.0), epsilon = 1e-12);
        assert_eq!(theta_alphabet(1.0, 3).p(2), theta_alphabet(1.0, 3).p(2));
        assert_abs_diff_eq!(theta_alphabet(1.0, 3).p(2), PI * PI / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn power_law_alphabet_converges() {
        let a = power_law_alphabet(0.6, 3);
        let partial = power_sum_partial(1.2, 100_000);
        assert!(a.p(2) > partial);
        // Tail of Σ j^{-1.2} beyond 1e5 is about 5·(1e5)^{-0.2} = 0.5.
        assert_abs_diff_eq!(a.p(2) - partial, 5.0 * 1e5f64.powf(-0.2), epsilon = 1e-4);
    }
}
