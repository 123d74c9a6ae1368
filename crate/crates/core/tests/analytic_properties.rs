use fdcap::capacity::{fd_fixed_capacity_of, fd_optimal_capacity, fd_optimal_capacity_of, pipeline};
use fdcap::cinr::{cinr_distribution, BetaPrimeDist};
use fdcap::interference::{gamma_fit, laplace_transform, mean_interference, numerical_moment, shape_closed_form};
use fdcap::model::{derived_geometry, GammaParams, NetworkConfig};
use fdcap::powercontrol::{avg_power, marginal_utility, policy, power_policy, solve_cutoff};
use proptest::prelude::*;
use std::f64::consts::PI;

fn scenario() -> impl Strategy<Value = NetworkConfig> {
    (
        -7.0f64..-3.5,
        -2.0f64..2.5,
        2.3f64..6.0,
        0.5f64..4.0,
        0.3f64..3.0,
        1.0f64..4.0,
    )
        .prop_map(|(llam, lp, eta, m, omega, m0)| {
            let lambda = 10f64.powf(llam);
            NetworkConfig {
                lambda,
                p_bs: 10f64.powf(lp),
                eta,
                n0: 1e-9,
                bandwidth: 180e3,
                p_bar: 0.2,
                fading_interferer: GammaParams { shape: m, mean: omega },
                fading_signal: GammaParams {
                    shape: m0,
                    mean: (2.0 * lambda.sqrt()).powf(eta),
                },
                exclusion_radius: None,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometry_identities(llam in -9.0f64..0.0, c in 0.1f64..100.0) {
        let cfg = NetworkConfig::micro(1.0).with_lambda(10f64.powf(llam));
        let g = derived_geometry(&cfg);
        prop_assert!((PI * cfg.lambda * g.r0 * g.r0 - 1.0).abs() < 4.0 * f64::EPSILON);
        prop_assert!((g.rbar / g.r0 - PI.sqrt() / 2.0).abs() < 4.0 * f64::EPSILON);
        prop_assert!(g.rbar < g.r0);
        let s = derived_geometry(&cfg.with_lambda(c * cfg.lambda));
        prop_assert!((s.r0 * c.sqrt() / g.r0 - 1.0).abs() < 1e-14);
        prop_assert!((s.rbar * c.sqrt() / g.rbar - 1.0).abs() < 1e-14);
    }

    #[test]
    fn moment_match_consistency(cfg in scenario()) {
        let fit = gamma_fit(&cfg).unwrap();
        prop_assert_eq!(fit.gamma.mean, fit.mean_exact);
        prop_assert!(fit.second_moment_exact > fit.mean_exact * fit.mean_exact);
        prop_assert!((fit.gamma.second_moment() / fit.second_moment_exact - 1.0).abs() < 1e-14);
        let closed = shape_closed_form(cfg.fading_interferer.shape, cfg.eta);
        prop_assert!((fit.gamma.shape / closed - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shape_is_bit_identical_under_rescaling(cfg in scenario(), c in 0.01f64..100.0) {
        let base = gamma_fit(&cfg).unwrap().gamma.shape;
        prop_assert_eq!(gamma_fit(&cfg.with_lambda(c * cfg.lambda)).unwrap().gamma.shape, base);
        prop_assert_eq!(gamma_fit(&cfg.with_p_bs(c * cfg.p_bs)).unwrap().gamma.shape, base);
    }

    #[test]
    fn interference_scaling_laws(cfg in scenario(), c in 0.01f64..100.0) {
        let e = mean_interference(&cfg).unwrap();
        let by_lambda = mean_interference(&cfg.with_lambda(c * cfg.lambda)).unwrap();
        let by_power = mean_interference(&cfg.with_p_bs(c * cfg.p_bs)).unwrap();
        prop_assert!((by_lambda / e / c.powf(cfg.eta / 2.0) - 1.0).abs() < 1e-13);
        prop_assert!((by_power / e / c - 1.0).abs() < 1e-14);
    }

    #[test]
    fn laplace_transform_derivative(cfg in scenario()) {
        let fit = gamma_fit(&cfg).unwrap();
        let m1 = numerical_moment(&cfg, 1).unwrap();
        let m2 = numerical_moment(&cfg, 2).unwrap();
        prop_assert!((m1 / fit.mean_exact - 1.0).abs() < 1e-4);
        prop_assert!((m2 / fit.second_moment_exact - 1.0).abs() < 1e-3);
    }

    #[test]
    fn laplace_transform_is_decreasing(cfg in scenario(), x in 0.01f64..10.0) {
        let s = x / mean_interference(&cfg).unwrap();
        let (a, b) = (laplace_transform(&cfg, s).unwrap(), laplace_transform(&cfg, 1.5 * s).unwrap());
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(b < a);
    }

    #[test]
    fn beta_prime_normalised(m0 in 0.5f64..20.0, mi in 0.5f64..20.0, lk in -9.0f64..3.0) {
        use fdcap::numeric::quad::{integrate_real_line, QuadOptions};
        let d = BetaPrimeDist::new(m0, mi, 10f64.powf(lk)).unwrap();
        let peak = (m0 / mi).ln();
        let total = integrate_real_line("norm", |v| d.log_density_of_log(v).exp(), peak, 1.0, QuadOptions::rel(1e-13)).unwrap();
        prop_assert!((total.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_is_monotone(m0 in 0.5f64..20.0, mi in 0.5f64..20.0, x in 0.0f64..50.0, dx in 1e-6f64..1.0) {
        let d = BetaPrimeDist::new(m0, mi, 1.0).unwrap();
        prop_assert!(d.cdf(x + dx) >= d.cdf(x));
        prop_assert!((0.0..=1.0).contains(&d.cdf(x)));
    }

    #[test]
    fn avg_power_increasing_on_log_grid(m0 in 0.5f64..6.0, mi in 0.6f64..6.0, lk in -9.0f64..1.0) {
        let d = BetaPrimeDist::new(m0, mi, 10f64.powf(lk)).unwrap();
        let mut prev = 0.0;
        for i in -12..4 {
            let v = avg_power(&d, 10f64.powf(i as f64 / 2.0)).unwrap();
            prop_assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn solved_cutoff_is_kkt_stationary(cfg in scenario(), p_bar in 0.01f64..2.0) {
        let fit = gamma_fit(&cfg).unwrap();
        let d = cinr_distribution(&cfg, &fit).unwrap();
        let s = solve_cutoff(&d, p_bar, cfg.bandwidth).unwrap();
        prop_assert!(s.a0 > 0.0);
        prop_assert!((s.achieved_avg_power - p_bar).abs() <= 1e-3 * p_bar);
        prop_assert!(s.transmit_probability > 0.0 && s.transmit_probability <= 1.0);
        for f in [1.001, 1.5, 4.0, 100.0, 1e5] {
            let g = f / s.a0;
            let u = marginal_utility(cfg.bandwidth, g, power_policy(&s, g));
            prop_assert!((u / s.mu0 - 1.0).abs() < 1e-8);
        }
        prop_assert_eq!(power_policy(&s, 0.999 / s.a0), 0.0);
        let larger = solve_cutoff(&d, 1.5 * p_bar, cfg.bandwidth).unwrap();
        prop_assert!(larger.a0 > s.a0);
    }

    #[test]
    fn water_filling_dominates_at_resolvable_snr(m0 in 0.5f64..4.0, mi in 0.6f64..4.0, lk in -1.0f64..2.0, p_bar in 0.05f64..2.0) {
        // at moderate SNR the gap is far above quadrature precision
        let d = BetaPrimeDist::new(m0, mi, 10f64.powf(lk)).unwrap();
        let s = solve_cutoff(&d, p_bar, 1.0).unwrap();
        let opt = fd_optimal_capacity_of(&d, s.a0, 1.0).unwrap();
        let fixed = fd_fixed_capacity_of(&d, p_bar, 1.0).unwrap();
        prop_assert!(opt > fixed, "{} <= {}", opt, fixed);
    }
}

#[test]
fn policy_is_zero_at_and_below_cutoff() {
    for a0 in [1e-3, 0.2, 7.0] {
        assert_eq!(policy(a0, 1.0 / a0), 0.0);
        assert_eq!(policy(a0, 0.3 / a0), 0.0);
        assert_eq!(policy(a0, 0.0), 0.0);
        assert!(policy(a0, 1.0001 / a0) > 0.0);
    }
}

#[test]
fn capacity_not_increasing_in_density() {
    let base = NetworkConfig::micro(1.0);
    let caps: Vec<f64> = [1e-6, 3e-6, 1e-5, 3e-5, 1e-4]
        .iter()
        .map(|&l| fd_optimal_capacity(&base.with_lambda(l)).unwrap().capacity)
        .collect();
    assert!(caps.windows(2).all(|w| w[1] <= w[0]), "{caps:?}");
}

#[test]
fn optimal_capacity_vanishes_with_budget() {
    let cfg = NetworkConfig::micro(1.0);
    let p = pipeline(&cfg).unwrap();
    let tiny = solve_cutoff(&p.cinr, 1e-16, cfg.bandwidth).unwrap();
    let c = fd_optimal_capacity_of(&p.cinr, tiny.a0, cfg.bandwidth).unwrap();
    assert!(c < 1e-3 * fd_optimal_capacity(&cfg).unwrap().capacity);
}
