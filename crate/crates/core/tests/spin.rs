use entropic_core::bounds::lambda_s_two;
use entropic_core::optimize::lambda_d_numeric;
use entropic_core::spin::{
    deutsch_theta, difference_axis_eigenstates, lambda_s_theta, mu_theta, spin_observable, spin_pair,
    sum_axis_eigenstates, theta_star, Regime, ThetaCurve,
};
use entropic_core::{OptimizerConfig, UnitVector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn curve() -> ThetaCurve<f64> {
    ThetaCurve::new(OptimizerConfig::default())
}

#[test]
fn chain_holds_on_degree_grid() {
    let points = curve().sweep_degrees(0.0, 180.0, 181).unwrap();
    assert_eq!(points.len(), 181);
    for p in &points {
        assert!(p.chain_holds(1e-6), "θ = {}°: slack {}", p.theta_degrees(), p.chain_slack());
    }
    assert!(points.windows(2).all(|w| w[0].theta < w[1].theta));
}

#[test]
fn successive_bound_strictly_exceeds_distinct_optimum() {
    let c = curve();
    for d in (10..=80).step_by(10) {
        let p = c.point((d as f64).to_radians()).unwrap();
        assert!(p.lambda_s - p.lambda_d > 0.003, "θ = {d}°");
    }
}

#[test]
fn closed_form_matches_general_bound_for_random_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let n1 = UnitVector3::from_angles(rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.0..std::f64::consts::TAU));
        let n2 = UnitVector3::from_angles(rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.0..std::f64::consts::TAU));
        let theta = n1.dot(&n2).clamp(-1.0, 1.0).acos();
        let a = spin_observable(&n1).unwrap();
        let b = spin_observable(&n2).unwrap();
        let general = lambda_s_two(&a, &b).unwrap();
        assert!((general - lambda_s_theta(theta)).abs() <= 1e-10, "θ = {theta}");
    }
}

#[test]
fn numeric_optimum_follows_regime_closed_forms() {
    let config = OptimizerConfig::default().with_starts(32);
    let c = curve();
    for d in [10.0, 30.0, 60.0, 120.0, 150.0, 170.0] {
        let theta: f64 = f64::to_radians(d);
        let (a, b) = spin_pair(theta).unwrap();
        let numeric = lambda_d_numeric(&a, &b, &config).unwrap();
        let (closed, regime) = c.lambda_d(theta).unwrap();
        assert!((numeric.value - closed).abs() <= 1e-4, "θ = {d}°");
        let states = if regime == Regime::Low {
            sum_axis_eigenstates(theta)
        } else {
            difference_axis_eigenstates(theta)
        }
        .unwrap()
        .unwrap();
        let fidelity = states.iter().map(|s| s.fidelity(&numeric.minimizer)).fold(0.0, f64::max);
        assert!(fidelity >= 0.9999, "θ = {d}°: fidelity {fidelity}");
    }
}

#[test]
fn regimes_partition_the_half_turn() {
    let star: f64 = theta_star();
    assert_eq!(Regime::of(star), Regime::Low);
    assert_eq!(Regime::of(star + 1e-6), Regime::MiddleNumeric);
    assert_eq!(Regime::of(std::f64::consts::PI - star), Regime::High);
    assert_eq!(Regime::of(0.0), Regime::Low);
    assert_eq!(Regime::of(std::f64::consts::PI), Regime::High);
}

#[test]
fn weak_bounds_agree_at_extremes() {
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert!((mu_theta(half_pi) - lambda_s_theta(half_pi)).abs() <= 1e-15);
    assert!(deutsch_theta(std::f64::consts::PI) < 1e-15);
    assert!(mu_theta(std::f64::consts::PI) < 1e-15);
}
