use fdcap::capacity::{default_rho, fd_fixed_power_capacity, pipeline};
use fdcap::cinr::BetaPrimeDist;
use fdcap::interference::{gamma_fit, laplace_transform};
use fdcap::mcsim::exec::run_chunks;
use fdcap::mcsim::{
    choose_rmax, estimate_fd, estimate_fd_fixed, estimate_hd, estimate_interference_moments, Emitters, Field, MCConfig,
    RMax,
};
use fdcap::model::{derived_geometry, NetworkConfig};
use fdcap::numeric::stats::{quantile_sorted, RunningStats};
use fdcap::powercontrol::{avg_power, policy};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

fn mc(n: u64, seed: u64) -> MCConfig {
    MCConfig::with_samples(n, seed)
}

fn merged(parts: Vec<RunningStats>) -> RunningStats {
    parts.into_iter().fold(RunningStats::new(), |mut a, s| {
        a.merge(&s);
        a
    })
}

#[test]
fn interference_moments_match_closed_forms() {
    let cfg = NetworkConfig::micro(1.0);
    let fit = gamma_fit(&cfg).unwrap();
    let est = estimate_interference_moments(&cfg, &mc(400_000, 11)).unwrap();
    let tail = 1e-4 * fit.mean_exact;
    let mean_gap = (est.stats.mean - fit.mean_exact).abs();
    assert!(mean_gap <= 3.0 * est.stats.std_error + tail, "{} vs {}", est.stats.mean, fit.mean_exact);
    assert!(mean_gap / fit.mean_exact < 0.01);
    let m2 = est.second_moment.mean;
    assert!((m2 / fit.second_moment_exact - 1.0).abs() < 0.02, "{m2} vs {}", fit.second_moment_exact);
    let shape = est.stats.mean * est.stats.mean / est.stats.variance;
    assert!((shape / fit.gamma.shape - 1.0).abs() < 0.03, "{shape} vs {}", fit.gamma.shape);
}

#[test]
fn laplace_transform_matches_empirical() {
    let cfg = NetworkConfig::micro(1.0);
    let s = 1e8;
    let want = laplace_transform(&cfg, s).unwrap();
    let mc = mc(1_000_000, 5);
    let field = Field::new(&cfg, Emitters::Downlink, choose_rmax(&cfg, mc.tail_epsilon), mc.far_field_variance_budget);
    let parts = run_chunks(mc.seed, mc.n_samples, mc.workers, |len, rng| {
        let mut st = RunningStats::new();
        for _ in 0..len {
            st.push((-s * field.sample(rng).0).exp());
        }
        st
    });
    let st = merged(parts);
    // the truncated tail lifts E[e^{-sI}] by at most s·ε·E[I]·L(s)
    let tail = s * mc.tail_epsilon * gamma_fit(&cfg).unwrap().mean_exact * want;
    assert!((st.mean() - want).abs() <= 3.0 * st.std_error() + tail, "{} vs {want}", st.mean());
}

#[test]
fn nearest_station_mean_distance() {
    let lambda = 1.0;
    let side = 12.0;
    let count = Poisson::new(lambda * side * side).unwrap();
    let parts = run_chunks(3, 200_000, 1, |len, rng| {
        let mut st = RunningStats::new();
        for _ in 0..len {
            let n = count.sample(rng) as usize;
            let mut best = f64::INFINITY;
            for _ in 0..n {
                let x = side * (rng.random::<f64>() - 0.5);
                let y = side * (rng.random::<f64>() - 0.5);
                best = best.min(x * x + y * y);
            }
            st.push(best.sqrt());
        }
        st
    });
    let st = merged(parts);
    let cfg = NetworkConfig::micro(1.0).with_lambda(lambda);
    let rbar = derived_geometry(&cfg).rbar;
    assert!((st.mean() - rbar).abs() <= 3.0 * st.std_error(), "{} vs {rbar}", st.mean());
}

/// Exact `P(h/(I+N₀) > x)` for Gamma(2) signal fading:
/// `E[e^{−θx(I+N₀)}(1 + θx(I+N₀))]`, written through the transform of `I`.
fn exact_cinr_sf(cfg: &NetworkConfig, x: f64) -> f64 {
    assert_eq!(cfg.fading_signal.shape, 2.0);
    let c = x / cfg.signal_gain().scale();
    let l = |s: f64| laplace_transform(cfg, s).unwrap();
    let h = 1e-3 * c;
    let dl = (-l(c + 2.0 * h) + 8.0 * l(c + h) - 8.0 * l(c - h) + l(c - 2.0 * h)) / (12.0 * h);
    let cn = c * cfg.n0;
    (-cn).exp() * ((1.0 + cn) * l(c) - c * dl)
}

#[test]
fn cinr_median_against_simulated_field() {
    let cfg = NetworkConfig::micro(1.0);
    let p = pipeline(&cfg).unwrap();
    let mc = mc(200_000, 8);
    let field = Field::new(&cfg, Emitters::Downlink, choose_rmax(&cfg, mc.tail_epsilon), mc.far_field_variance_budget);
    let gain = cfg.signal_gain();
    let h = Gamma::new(gain.shape, gain.scale()).unwrap();
    let mut samples: Vec<f64> = run_chunks(mc.seed, mc.n_samples, mc.workers, |len, rng| {
        (0..len).map(|_| h.sample(rng) / (field.sample(rng).0 + cfg.n0)).collect::<Vec<_>>()
    })
    .concat();
    samples.sort_by(f64::total_cmp);
    let empirical = quantile_sorted(&samples, 0.5);
    let analytic = p.cinr.quantile(0.5).unwrap();

    let (mut lo, mut hi) = (0.5 * analytic, 2.0 * analytic);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if exact_cinr_sf(&cfg, mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let exact = 0.5 * (lo + hi);
    // the simulator reproduces the exact law; the Gamma-fitted law carries the fit error
    assert!((empirical / exact - 1.0).abs() < 0.005, "{empirical} vs {exact}");
    let fit_gap = (analytic / exact - 1.0).abs();
    assert!(fit_gap < 0.03, "fitted median {analytic} vs exact {exact}");
}

#[test]
fn truncation_is_sound() {
    let cfg = NetworkConfig::micro(1.0);
    let eps = 1e-3;
    let base = MCConfig {
        tail_epsilon: eps,
        ..mc(100_000, 21)
    };
    let near = estimate_interference_moments(&cfg, &base).unwrap();
    let wide = estimate_interference_moments(
        &cfg,
        &MCConfig {
            r_max: RMax::Explicit(10.0 * choose_rmax(&cfg, eps)),
            ..base
        },
    )
    .unwrap();
    let mean = gamma_fit(&cfg).unwrap().mean_exact;
    let se = near.stats.std_error.hypot(wide.stats.std_error);
    assert!((wide.stats.mean - near.stats.mean).abs() <= eps * mean + 3.0 * se);
    for e in [&near, &wide] {
        let pc = &e.point_count;
        assert!((pc.mean - e.expected_point_count).abs() <= 3.0 * pc.std_error, "{} vs {}", pc.mean, e.expected_point_count);
    }
}

#[test]
fn aggregated_far_field_agrees_with_exact_field() {
    let cfg = NetworkConfig::micro(1.0);
    let exact = MCConfig {
        tail_epsilon: 1e-3,
        far_field_variance_budget: 0.0,
        ..mc(20_000, 4)
    };
    let split = MCConfig {
        far_field_variance_budget: 1e-6,
        seed: 9,
        ..exact
    };
    let a = estimate_interference_moments(&cfg, &exact).unwrap();
    let b = estimate_interference_moments(&cfg, &split).unwrap();
    let se = a.stats.std_error.hypot(b.stats.std_error);
    assert!((a.stats.mean - b.stats.mean).abs() <= 3.0 * se);
    let se2 = a.second_moment.std_error.hypot(b.second_moment.std_error);
    assert!((a.second_moment.mean - b.second_moment.mean).abs() <= 3.0 * se2);
}

#[test]
fn average_power_matches_policy_mean() {
    for (m0, mi, k, a0) in [(2.0, 1.2, 3.4e-8, 0.2), (1.0, 2.5, 1.0, 3.0), (4.0, 0.8, 1e-3, 50.0)] {
        let d = BetaPrimeDist::new(m0, mi, k).unwrap();
        let sampler = d.sampler();
        let st = merged(run_chunks(17, 1_000_000, 1, |len, rng| {
            let mut st = RunningStats::new();
            for _ in 0..len {
                st.push(policy(a0, sampler.sample(rng)));
            }
            st
        }));
        let want = avg_power(&d, a0).unwrap();
        assert!((st.mean() - want).abs() <= 3.0 * st.std_error(), "({m0},{mi},{k},{a0}): {} vs {want}", st.mean());
    }
}

#[test]
fn fixed_power_rate_matches_analytic() {
    let cfg = NetworkConfig::micro(1.0);
    let mc_rate = estimate_fd_fixed(&cfg, &mc(100_000, 2)).unwrap();
    let analytic = fd_fixed_power_capacity(&cfg).unwrap();
    assert!((mc_rate.mean / analytic - 1.0).abs() < 0.03, "{} vs {analytic}", mc_rate.mean);
}

#[test]
fn water_filling_stays_silent_below_cutoff() {
    let cfg = NetworkConfig::micro(1.0);
    let p = pipeline(&cfg).unwrap();
    let est = estimate_fd(&cfg, &mc(50_000, 6), p.waterfill.a0).unwrap();
    let analytic = p.cinr.cdf(1.0 / p.waterfill.a0);
    assert!((est.silent_fraction - analytic).abs() < 0.03, "{} vs {analytic}", est.silent_fraction);
    assert!((est.optimal_power.mean / cfg.p_bar - 1.0).abs() < 0.05);
    let never = estimate_fd(&cfg, &mc(20_000, 6), 0.0).unwrap();
    assert_eq!(never.silent_fraction, 1.0);
    assert_eq!(never.optimal_rate.mean, 0.0);
}

#[test]
fn half_duplex_scaling() {
    let cfg = NetworkConfig::micro(1.0);
    let rho = default_rho(&cfg);
    let run = mc(50_000, 13);
    let base = estimate_hd(&cfg, rho, &run).unwrap().rate;
    let halved = estimate_hd(
        &NetworkConfig {
            bandwidth: cfg.bandwidth / 2.0,
            ..cfg
        },
        rho,
        &run,
    )
    .unwrap()
    .rate;
    assert_eq!(halved.mean * 2.0, base.mean);
    let dense = estimate_hd(&cfg.with_lambda(2.0 * cfg.lambda), 2.0 * rho, &run).unwrap().rate;
    assert!((dense.mean / base.mean - 1.0).abs() < 0.05, "{} vs {}", dense.mean, base.mean);
    let quiet = estimate_hd(&cfg, 1e-16, &run).unwrap().rate;
    assert!(quiet.mean < 1e-3 * base.mean);
    assert_eq!(estimate_hd(&cfg, 0.0, &run).unwrap().rate.mean, 0.0);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let cfg = NetworkConfig::macro_cell(20.0);
    let one = MCConfig { workers: 1, ..mc(30_000, 77) };
    let three = MCConfig { workers: 3, ..one };
    let a = estimate_interference_moments(&cfg, &one).unwrap();
    let b = estimate_interference_moments(&cfg, &three).unwrap();
    assert_eq!(a, b);
    let a0 = pipeline(&cfg).unwrap().waterfill.a0;
    assert_eq!(estimate_fd(&cfg, &one, a0).unwrap(), estimate_fd(&cfg, &three, a0).unwrap());
    let other_seed = estimate_interference_moments(&cfg, &MCConfig { seed: 78, ..one }).unwrap();
    assert_ne!(a.stats.mean, other_seed.stats.mean);
}
