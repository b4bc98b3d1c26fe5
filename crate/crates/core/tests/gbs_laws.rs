use fatigue_core::quadrature::integrate;
use fatigue_core::sim::{simulate_first_passage, DamageModel};
use fatigue_core::special::normal_quantile;
use fatigue_core::{ClassicalBsParams, GbsParams, QuadratureConfig};
use proptest::prelude::*;

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn density_integrates_to_one() {
    let g = GbsParams::new(1.5, 1.0, 1.0, 100.0).unwrap();
    let b = g.b_alpha();
    // in u = ln t the integrand is f(t)·t; the heavy upper tail is closed
    // with the survival function
    let (lo, hi) = ((b / 1e3).ln(), (b * 1e8).ln());
    let body = integrate(|u| { let t = u.exp(); g.pdf(t, &q()).unwrap() * t }, lo, hi, &q()).unwrap().value;
    let mass = body + g.cdf(lo.exp(), &q()).unwrap() + (1.0 - g.cdf(hi.exp(), &q()).unwrap());
    assert!((mass - 1.0).abs() < 1e-4, "{mass}");
    for t in [1.0, 50.0, 100.0, 500.0] {
        assert!(g.pdf(t, &q()).unwrap() >= 0.0);
    }
}

#[test]
fn gaussian_quantile_matches_classical_closed_form() {
    let (sigma_x, mu_x, s_star) = (0.8, 2.0, 300.0);
    let g = GbsParams::new(2.0, sigma_x / std::f64::consts::SQRT_2, mu_x, s_star).unwrap();
    let bs = ClassicalBsParams::from_damage(sigma_x, mu_x, s_star).unwrap();
    let p = 0.8413;
    // t = b (a z/2 + sqrt((a z/2)^2 + 1))^2
    let h = bs.a() * normal_quantile(p) / 2.0;
    let closed = bs.b() * (h + (h * h + 1.0).sqrt()).powi(2);
    assert!((g.quantile(p, &q()).unwrap() - closed).abs() < 1e-6 * closed);
    assert!((bs.quantile(p).unwrap() - closed).abs() < 1e-9 * closed);
    for t in [50.0, 150.0, 400.0] {
        assert!((g.pdf(t, &q()).unwrap() - bs.pdf(t).unwrap()).abs() < 1e-8);
    }
}

// The symmetric kernel cannot reproduce this value: non-negative Pareto
// damages make the centred partial sums converge to a totally skewed stable
// law, so the simulated P(N* <= 220) sits near 0.54 against 0.65 here.
#[test]
#[ignore = "first-passage law of one-sided damages is skewed; symmetric GBS misses by ~0.12"]
fn pareto_first_passage_matches_cdf_at_220() {
    let g = GbsParams::new(1.5, 1.0, 1.0, 200.0).unwrap();
    let model = DamageModel::ShiftedPareto { index: 1.5, scale: 1.0 / 3.0, shift: 0.0 };
    let r = simulate_first_passage(&model, 200.0, 100_000, 2).unwrap();
    let emp = r.n_star_samples.iter().filter(|&&n| n <= 220).count() as f64 / 1e5;
    assert!((emp - g.cdf(220.0, &q()).unwrap()).abs() <= 0.02, "{emp}");
}

fn params() -> impl Strategy<Value = GbsParams> {
    (1.05f64..=2.0, 0.1f64..3.0, 0.05f64..20.0, 1.0f64..1e4)
        .prop_map(|(a, s, m, t)| GbsParams::new(a, s, m, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn median_is_b_alpha(g in params()) {
        prop_assert!((g.cdf(g.b_alpha(), &q()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_monotone_in_time(g in params(), x in -6.0f64..6.0, dx in 1e-3f64..2.0) {
        let t = g.b_alpha() * x.exp();
        let a = g.cdf(t, &q()).unwrap();
        let b = g.cdf(t * dx.exp(), &q()).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn quantile_roundtrip(g in params(), p in 1e-3f64..0.999) {
        let t = g.quantile(p, &q()).unwrap();
        prop_assert!(t > 0.0);
        prop_assert!((g.cdf(t, &q()).unwrap() - p).abs() < 1e-7);
    }

    #[test]
    fn larger_threshold_means_longer_life(g in params(), grow in 1.0f64..10.0, x in -3.0f64..3.0) {
        let t = g.b_alpha() * x.exp();
        let h = GbsParams::new(g.alpha(), g.sigma(), g.mu_x(), g.s_star() * grow).unwrap();
        prop_assert!(h.cdf(t, &q()).unwrap() <= g.cdf(t, &q()).unwrap() + 1e-12);
    }
}
