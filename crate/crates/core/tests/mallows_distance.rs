use fatigue_core::mallows::*;
use fatigue_core::sim::{normalized_sums, DamageSource};
use fatigue_core::{QuadratureConfig, StableParams};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Open01;

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn self_distance_of_exact_draws() {
    // empirical d_1 shrinks like n^{-(1-1/α)}, so at α = 1.5 and n = 1e6
    // it still hovers around 0.01; α = 1.8 sits clearly below
    let law = StableParams::new(1.8, 1.0, 0.0).unwrap();
    let s = EmpiricalSample::new(law.sample(1_000_000, 17)).unwrap();
    let d = mallows_to_stable(&s, &law, 1.0, 10_000, &q()).unwrap();
    assert!(d.distance <= 0.01, "{d:?}");
}

#[test]
fn self_distance_gaussian() {
    let law = StableParams::new(2.0, 0.7, 4.0).unwrap();
    let s = EmpiricalSample::new(law.sample(1_000_000, 18)).unwrap();
    let d = mallows_to_stable(&s, &law, 1.0, 10_000, &q()).unwrap();
    assert!(d.distance <= 0.01, "{d:?}");
    assert!(!d.tail_divergence);
}

#[test]
fn point_mass_at_centre_gives_mean_absolute_deviation() {
    let law = StableParams::new(1.8, 1.0, 2.0).unwrap();
    let point = EmpiricalSample::new(vec![2.0]).unwrap();
    let d = mallows_to_stable(&point, &law, 1.0, 10_000, &q()).unwrap();
    let draws = law.sample(1_000_000, 19);
    let mc = draws.iter().map(|x| (x - 2.0).abs()).sum::<f64>() / draws.len() as f64;
    assert!((d.distance / mc - 1.0).abs() < 0.02, "{} vs {mc}", d.distance);
    assert!((law.mean_abs_deviation() / mc - 1.0).abs() < 0.02);
}

/// `±U^{-1/1.5}`: symmetric, with `P(|X| > x) = x^{-1.5}`.
struct SignedPareto;

impl DamageSource for SignedPareto {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.sample(Open01);
        let v = u.powf(-1.0 / 1.5);
        if rng.random::<bool>() { v } else { -v }
    }

    fn mean(&self) -> f64 {
        0.0
    }
}

#[test]
fn normalized_sums_approach_the_stable_limit() {
    // P(|X| > x) = x^{-α} puts the sum in the domain of S_α(σ, 0, 0) with
    // σ^α = Γ(2-α)|cos(πα/2)|/(α-1)
    let alpha: f64 = 1.5;
    let sigma = (fatigue_core::special::gamma(2.0 - alpha) * (std::f64::consts::FRAC_PI_2 * alpha).cos().abs()
        / (alpha - 1.0))
        .powf(1.0 / alpha);
    let target = StableParams::new(alpha, sigma, 0.0).unwrap();
    let mut medians = Vec::new();
    for n in [100u64, 1000, 10_000] {
        let mut ds: Vec<f64> = (0..20)
            .map(|seed| {
                let sums = normalized_sums(&SignedPareto, n, alpha, 500, 50 + seed).unwrap();
                let s = EmpiricalSample::new(sums).unwrap();
                mallows_to_stable(&s, &target, alpha, 500, &q()).unwrap().distance
            })
            .collect();
        ds.sort_by(f64::total_cmp);
        medians.push(0.5 * (ds[9] + ds[10]));
    }
    assert!(medians.windows(2).all(|w| w[1] < w[0]), "{medians:?}");
}

fn sample() -> impl Strategy<Value = EmpiricalSample> {
    prop::collection::vec(-100.0f64..100.0, 1..40).prop_map(|v| EmpiricalSample::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_axioms(f in sample(), g in sample(), h in sample(), r in prop::sample::select(vec![1.0, 1.5, 2.0])) {
        let fg = mallows_empirical(&f, &g, r).unwrap();
        let gh = mallows_empirical(&g, &h, r).unwrap();
        let fh = mallows_empirical(&f, &h, r).unwrap();
        prop_assert!(fg >= 0.0);
        prop_assert_eq!(fg, mallows_empirical(&g, &f, r).unwrap());
        prop_assert_eq!(mallows_empirical(&f, &f, r).unwrap(), 0.0);
        prop_assert!(fh <= fg + gh + 1e-12 * (fg + gh));
    }

    #[test]
    fn non_decreasing_in_order(f in sample(), g in sample(), lo in 0.0f64..1.0, mid in 0.0f64..1.0, hi in 0.0f64..1.0) {
        // rescale both samples to [-1, 1] with a common affine map
        let all: Vec<f64> = f.sorted().iter().chain(g.sorted()).copied().collect();
        let (a, b) = all.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        let w = (b - a).max(1e-300);
        let squash = |s: &EmpiricalSample| EmpiricalSample::new(s.sorted().iter().map(|x| 2.0 * (x - a) / w - 1.0).collect()).unwrap();
        let (f, g) = (squash(&f), squash(&g));
        let mut rs = [1.0 + 2.0 * lo, 1.0 + 2.0 * mid, 1.0 + 2.0 * hi];
        rs.sort_by(f64::total_cmp);
        let d: Vec<f64> = rs.iter().map(|&r| mallows_empirical(&f, &g, r).unwrap()).collect();
        prop_assert!(d[0] <= d[1] * (1.0 + 1e-12) && d[1] <= d[2] * (1.0 + 1e-12));
    }

    #[test]
    fn shift_gives_the_offset(v in prop::collection::vec(-1000.0f64..1000.0, 1..50), c in -50.0f64..50.0, r in 1.0f64..4.0) {
        let f = EmpiricalSample::new(v.clone()).unwrap();
        let g = EmpiricalSample::new(v.iter().map(|x| x + c).collect()).unwrap();
        let d = mallows_empirical(&f, &g, r).unwrap();
        prop_assert!((d - c.abs()).abs() <= 1e-12 * (1.0 + 1000.0));
    }

    #[test]
    fn dyadic_shift_is_exact(v in prop::collection::vec(-4096i32..4096, 1..50), c in -64i32..64, r in 1.0f64..4.0) {
        let f = EmpiricalSample::new(v.iter().map(|&x| x as f64 / 8.0).collect()).unwrap();
        let g = EmpiricalSample::new(v.iter().map(|&x| x as f64 / 8.0 + c as f64 / 4.0).collect()).unwrap();
        prop_assert_eq!(mallows_empirical(&f, &g, r).unwrap(), (c as f64 / 4.0).abs());
    }
}
