//! Property tests of the core invariants against independent oracles.

use approx::assert_abs_diff_eq;
use modphi::bounds::classical_tv_bounds;
use modphi::hermite_asymptotics::{hermite_eval, hermite_zeros, m_const};
use modphi::lattice_measure::{
    charlier_scheme_values, distance_kolmogorov, distance_local, distance_tv, fourier_sample,
    inverse_fourier_1d, poisson_weights, scheme_measure, wiener_norm,
};
use modphi::models::{bernoulli_exact_law, ewens_cycle_law};
use modphi::symfun::elementary_sequence;
use modphi::{FormalAlphabet, LaurentResidue, LevyExponent, SignedLatticeMeasure};
use proptest::prelude::*;

fn measure_1d() -> impl Strategy<Value = SignedLatticeMeasure> {
    (-20i64..20, proptest::collection::vec(-1.0f64..1.0, 1..40))
        .prop_map(|(off, w)| SignedLatticeMeasure::new_1d(off, w, 0.0).unwrap())
}

fn probability_1d() -> impl Strategy<Value = SignedLatticeMeasure> {
    (-10i64..10, proptest::collection::vec(0.0f64..1.0, 1..30)).prop_filter_map("zero mass", |(off, w)| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| SignedLatticeMeasure::new_1d(off, w.iter().map(|x| x / s).collect(), 0.0).unwrap())
    })
}

/// Elementary symmetric functions of a finite set of reals by the product
/// `Π (1 + x_i t)`.
fn elementary_direct(xs: &[f64], k: usize) -> Vec<f64> {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &x in xs {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_chain_for_probability_pairs(a in probability_1d(), b in probability_1d()) {
        let l = distance_local(&a, &b).unwrap().value;
        let k = distance_kolmogorov(&a, &b).unwrap().value;
        let t = distance_tv(&a, &b).unwrap().value;
        prop_assert!(l <= 2.0 * k + 1e-12);
        prop_assert!(2.0 * k <= t + 1e-12);
        prop_assert!(t <= 2.0 + 1e-12);
    }

    #[test]
    fn distances_are_symmetric_and_vanish_on_diagonal(a in measure_1d(), b in measure_1d()) {
        for d in [distance_local, distance_tv] {
            prop_assert_eq!(d(&a, &b).unwrap().value, d(&b, &a).unwrap().value);
            prop_assert_eq!(d(&a, &a).unwrap().value, 0.0);
        }
        let k = distance_kolmogorov(&a, &b).unwrap().value;
        prop_assert!((k - distance_kolmogorov(&b, &a).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn tv_triangle_inequality(a in measure_1d(), b in measure_1d(), c in measure_1d()) {
        let ab = distance_tv(&a, &b).unwrap().value;
        let bc = distance_tv(&b, &c).unwrap().value;
        let ac = distance_tv(&a, &c).unwrap().value;
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn convolution_is_tv_submultiplicative(a in measure_1d(), b in measure_1d()) {
        let c = a.convolve(&b).unwrap();
        prop_assert!(c.tv_norm() <= a.tv_norm() * b.tv_norm() * (1.0 + 1e-12) + 1e-12);
        prop_assert!((c.total_mass() - a.total_mass() * b.total_mass()).abs() < 1e-10);
        let d = b.convolve(&a).unwrap();
        prop_assert!(distance_tv(&c, &d).unwrap().value < 1e-10);
    }

    #[test]
    fn wiener_norm_equals_tv_norm(a in measure_1d(), extra in 0usize..20) {
        let samples = fourier_sample(&a, a.width() + extra).unwrap();
        prop_assert!((wiener_norm(&samples) - a.tv_norm()).abs() < 1e-10 * (1.0 + a.tv_norm()));
    }

    #[test]
    fn fourier_roundtrip(a in measure_1d(), extra in 0usize..20) {
        let samples = fourier_sample(&a, a.width() + extra).unwrap();
        let back = inverse_fourier_1d(&samples, a.offset()[0], a.width());
        for (x, y) in back.iter().zip(a.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn text_roundtrip_is_exact(a in measure_1d()) {
        let b = SignedLatticeMeasure::from_text(&a.to_text()).unwrap();
        prop_assert_eq!(a.weights(), b.weights());
        prop_assert_eq!(a.offset(), b.offset());
    }

    #[test]
    fn elementary_functions_match_finite_alphabet(xs in proptest::collection::vec(-1.5f64..1.5, 1..7)) {
        let k = 6;
        let p: Vec<f64> = (1..=k as i32).map(|j| xs.iter().map(|x| x.powi(j)).sum()).collect();
        let alpha = FormalAlphabet::new("finite", p).unwrap();
        let e = elementary_sequence(&alpha, k).unwrap();
        let want = elementary_direct(&xs, k);
        for j in 0..=k {
            prop_assert!((e[j] - want[j]).abs() < 1e-9 * (1.0 + want[j].abs()), "e_{} {} vs {}", j, e[j], want[j]);
        }
    }

    #[test]
    fn scheme_mass_is_residue_at_zero(lambda in 0.5f64..30.0, beta in -2.0f64..2.0, k in 1usize..5) {
        let residue = LaurentResidue::single_power(beta, k);
        let m = scheme_measure(&LevyExponent::poisson(), lambda, &residue, 1e-14).unwrap();
        prop_assert!((m.total_mass() + m.truncated_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn charlier_matches_convolution(lambda in 0.5f64..20.0, beta in -1.0f64..1.0, r in 0u32..4) {
        let residue = LaurentResidue::single_power(beta, r as usize + 1);
        let m = scheme_measure(&LevyExponent::poisson(), lambda, &residue, 1e-15).unwrap();
        let kmax = (lambda + 12.0 * lambda.sqrt() + 20.0) as usize;
        let pw = poisson_weights(lambda, kmax);
        for k in 0..=kmax as u32 {
            let want = charlier_scheme_values(lambda, beta, r, k);
            let got = m.at(k as i64) - pw[k as usize];
            prop_assert!((got - want).abs() < 1e-12, "k={} {} vs {}", k, got, want);
        }
    }

    #[test]
    fn bernoulli_law_is_a_probability(p in proptest::collection::vec(0.0f64..1.0, 1..60)) {
        let law = bernoulli_exact_law(&p).unwrap();
        prop_assert!((law.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!(law.weights().iter().all(|w| *w >= 0.0));
        prop_assert!((law.mean()[0] - p.iter().sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn classical_bounds_dominate_measured_tv(p in proptest::collection::vec(0.0f64..0.3, 1..60)) {
        let lambda: f64 = p.iter().sum();
        prop_assume!(lambda > 0.0);
        let law = bernoulli_exact_law(&p).unwrap();
        let poisson = SignedLatticeMeasure::new_1d(0, poisson_weights(lambda, p.len() + 60), 0.0).unwrap();
        let tv = distance_tv(&law, &poisson).unwrap().value;
        let b = classical_tv_bounds(&p).unwrap();
        prop_assert!(tv <= b.le_cam + 1e-9);
        prop_assert!(tv <= b.chen_steele + 1e-9);
    }

    #[test]
    fn ewens_law_mean_is_harmonic_sum(n in 1u64..200, theta in 0.1f64..5.0) {
        let law = ewens_cycle_law(n, theta).unwrap();
        let mean: f64 = (1..=n).map(|j| theta / (theta + j as f64 - 1.0)).sum();
        prop_assert!((law.total_mass() - 1.0).abs() < 1e-10);
        prop_assert!((law.mean()[0] - mean).abs() < 1e-9 * mean.max(1.0));
    }
}

#[test]
fn hermite_zeros_and_sup_constants() {
    for r in 1..=10 {
        let zeros = hermite_zeros(r).unwrap();
        assert_eq!(zeros.len(), r);
        for z in &zeros {
            assert_abs_diff_eq!(hermite_eval(r, *z), 0.0, epsilon = 1e-8 * (1.0 + z.abs()).powi(r as i32));
        }
        let sup = (0..=200_000)
            .map(|i| -10.0 + i as f64 * 1e-4)
            .map(|x| (hermite_eval(r, x) * (-x * x / 2.0).exp()).abs())
            .fold(0.0f64, f64::max);
        let m = m_const(r).unwrap();
        assert!(m >= sup * (1.0 - 1e-12) && m - sup < 1e-7 * m, "r={r} M={m} grid sup={sup}");
    }
}
