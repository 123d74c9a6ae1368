//! Monte Carlo ground truth over Poisson base-station fields.
//!
//! Every estimator is deterministic in `(config, MCConfig)`: samples are
//! drawn in fixed chunks with one ChaCha8 stream per chunk (see [`exec`]),
//! and chunk statistics are merged in chunk order.

pub mod exec;
pub mod field;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{derived_geometry, NetworkConfig};
use crate::numeric::stats::{Histogram, RunningStats, SampleStats};
use crate::powercontrol::policy;
pub use field::{Emitters, Field};

/// Truncation radius of the simulated field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RMax {
    /// Chosen by [`choose_rmax`] from `tail_epsilon`.
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub r_max: RMax,
    /// Share of `E[I]` the truncated tail may carry.
    pub tail_epsilon: f64,
    pub workers: usize,
    /// Share of `Var[I]` beyond which points are aggregated rather than drawn
    /// one by one; 0 draws every point.
    pub far_field_variance_budget: f64,
    /// Relative standard error an estimate should reach; a result that
    /// misses it is flagged as partial.
    pub target_rel_std_error: Option<f64>,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig {
            n_samples: 1_000_000,
            seed: 0x5eed,
            r_max: RMax::Auto,
            tail_epsilon: 1e-4,
            workers: exec::default_workers(),
            far_field_variance_budget: 1e-6,
            target_rel_std_error: None,
        }
    }
}

impl MCConfig {
    pub fn with_samples(n_samples: u64, seed: u64) -> Self {
        MCConfig {
            n_samples,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(self, cfg: &NetworkConfig) -> Result<Self> {
        if self.n_samples < 1 {
            return Err(Error::invalid("n_samples", "at least one sample is required"));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon <= 0.01) {
            return Err(Error::invalid("tail_epsilon", format!("{} must lie in (0, 0.01]", self.tail_epsilon)));
        }
        if let RMax::Explicit(r) = self.r_max {
            let r0 = derived_geometry(cfg).r0;
            if !(r > r0 && r.is_finite()) {
                return Err(Error::invalid("r_max", format!("{r} must exceed r0 = {r0}")));
            }
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers", "at least one worker is required"));
        }
        if !(0.0..1.0).contains(&self.far_field_variance_budget) {
            return Err(Error::invalid(
                "far_field_variance_budget",
                format!("{} must lie in [0, 1)", self.far_field_variance_budget),
            ));
        }
        if let Some(t) = self.target_rel_std_error {
            if !(t > 0.0) {
                return Err(Error::invalid("target_rel_std_error", format!("{t} must be positive")));
            }
        }
        Ok(self)
    }

    fn resolved_rmax(&self, cfg: &NetworkConfig) -> f64 {
        match self.r_max {
            RMax::Auto => choose_rmax(cfg, self.tail_epsilon),
            RMax::Explicit(r) => r,
        }
    }
}

/// `R_max = r0·ε^{1/(2−η)}`: the mean interference from beyond `R_max` is
/// `ε·E[I]`.
pub fn choose_rmax(cfg: &NetworkConfig, eps: f64) -> f64 {
    derived_geometry(cfg).r0 * eps.powf(1.0 / (2.0 - cfg.eta))
}

fn downlink_field(cfg: &NetworkConfig, mc: &MCConfig) -> Field {
    Field::new(cfg, Emitters::Downlink, mc.resolved_rmax(cfg), mc.far_field_variance_budget)
}

/// One draw of the aggregate downlink interference `Σ P_BS αᵢ rᵢ^{−η}`.
///
/// Builds the field on every call; estimators reuse one [`Field`].
pub fn sample_interference<R: Rng + ?Sized>(cfg: &NetworkConfig, mc: &MCConfig, rng: &mut R) -> f64 {
    downlink_field(cfg, mc).sample(rng).0
}

fn merge_all(parts: impl IntoIterator<Item = RunningStats>) -> RunningStats {
    parts.into_iter().fold(RunningStats::new(), |mut acc, s| {
        acc.merge(&s);
        acc
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceEstimate {
    /// Moments of `I`, with a Freedman–Diaconis histogram.
    pub stats: SampleStats,
    /// Moments of `I²`.
    pub second_moment: SampleStats,
    /// Moments of the number of points per realisation.
    pub point_count: SampleStats,
    pub expected_point_count: f64,
    pub r_max: f64,
    /// Ascending samples.
    #[serde(skip)]
    pub sorted_samples: Vec<f64>,
}

/// Samples of the interference, kept for distributional checks.
pub fn estimate_interference_moments(cfg: &NetworkConfig, mc: &MCConfig) -> Result<InterferenceEstimate> {
    let cfg = cfg.validate()?;
    let mc = mc.validate(&cfg)?;
    if mc.n_samples < 10_000 {
        return Err(Error::invalid(
            "n_samples",
            format!("{} is below the 10000 samples needed for moment estimates", mc.n_samples),
        ));
    }
    let field = downlink_field(&cfg, &mc);
    let chunks = exec::run_chunks(mc.seed, mc.n_samples, mc.workers, |len, rng| {
        let mut xs = Vec::with_capacity(len as usize);
        let (mut s1, mut s2, mut sc) = (RunningStats::new(), RunningStats::new(), RunningStats::new());
        for _ in 0..len {
            let (x, n) = field.sample(rng);
            xs.push(x);
            s1.push(x);
            s2.push(x * x);
            sc.push(n as f64);
        }
        (xs, s1, s2, sc)
    });
    let mut samples = Vec::with_capacity(mc.n_samples as usize);
    let (mut s1, mut s2, mut sc) = (RunningStats::new(), RunningStats::new(), RunningStats::new());
    for (xs, a, b, c) in chunks {
        samples.extend_from_slice(&xs);
        s1.merge(&a);
        s2.merge(&b);
        sc.merge(&c);
    }
    samples.sort_by(f64::total_cmp);
    let mut stats = s1.summary();
    stats.histogram = Some(Histogram::freedman_diaconis(&samples, 10_000));
    Ok(InterferenceEstimate {
        stats,
        second_moment: s2.summary(),
        point_count: sc.summary(),
        expected_point_count: field.expected_points(),
        r_max: field.r_max,
        sorted_samples: samples,
    })
}

/// Full-duplex Monte Carlo rates from one set of draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdEstimate {
    /// `B log₂(1 + P(γ)γ)` under the water-filling policy, bit/s.
    pub optimal_rate: SampleStats,
    /// `P(γ)`, W.
    pub optimal_power: SampleStats,
    /// `B log₂(1 + P̄γ)`, bit/s.
    pub fixed_rate: SampleStats,
    /// Share of draws with `γ ≤ 1/a₀`.
    pub silent_fraction: f64,
}

/// Rates of one draw `γ`: `(optimal rate, optimal power, fixed rate)`.
#[inline]
fn fd_rates(bandwidth: f64, a0: f64, p_bar: f64, gamma: f64) -> (f64, f64, f64) {
    let p = policy(a0, gamma);
    let opt = if p > 0.0 { bandwidth * (p * gamma).ln_1p() / std::f64::consts::LN_2 } else { 0.0 };
    let fixed = bandwidth * (p_bar * gamma).ln_1p() / std::f64::consts::LN_2;
    (opt, p, fixed)
}

/// Draws `I` from the field and `h` from its Gamma law, forms
/// `γ = h/(I + N₀)` and evaluates both FD rates. The water level `a₀` comes
/// from the analytic solver.
pub fn estimate_fd(cfg: &NetworkConfig, mc: &MCConfig, a0: f64) -> Result<FdEstimate> {
    let cfg = cfg.validate()?;
    let mc = mc.validate(&cfg)?;
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid("a0", format!("{a0} must be non-negative and finite")));
    }
    let field = downlink_field(&cfg, &mc);
    let gain = cfg.signal_gain();
    let h = Gamma::new(gain.shape, gain.scale()).expect("validated fading");
    let chunks = exec::run_chunks(mc.seed, mc.n_samples, mc.workers, |len, rng| {
        let (mut opt, mut pow, mut fixed) = (RunningStats::new(), RunningStats::new(), RunningStats::new());
        let mut silent = 0u64;
        for _ in 0..len {
            let (i, _) = field.sample(rng);
            let gamma = h.sample(rng) / (i + cfg.n0);
            let (r, p, f) = fd_rates(cfg.bandwidth, a0, cfg.p_bar, gamma);
            silent += u64::from(p == 0.0);
            opt.push(r);
            pow.push(p);
            fixed.push(f);
        }
        (opt, pow, fixed, silent)
    });
    let silent: u64 = chunks.iter().map(|c| c.3).sum();
    Ok(FdEstimate {
        optimal_rate: merge_all(chunks.iter().map(|c| c.0)).summary(),
        optimal_power: merge_all(chunks.iter().map(|c| c.1)).summary(),
        fixed_rate: merge_all(chunks.iter().map(|c| c.2)).summary(),
        silent_fraction: silent as f64 / mc.n_samples as f64,
    })
}

/// Water-filling rate (and power) under the solved `a₀`.
pub fn estimate_fd_optimal(
    cfg: &NetworkConfig,
    mc: &MCConfig,
    sol: &crate::powercontrol::WaterfillSolution,
) -> Result<FdEstimate> {
    estimate_fd(cfg, mc, sol.a0)
}

/// Constant-power rate `B log₂(1 + P̄γ)`.
pub fn estimate_fd_fixed(cfg: &NetworkConfig, mc: &MCConfig) -> Result<SampleStats> {
    Ok(estimate_fd(cfg, mc, 0.0)?.fixed_rate)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HdEstimate {
    /// `(B/2) log₂(1 + ρh/(I_u + N₀))`, bit/s.
    pub rate: SampleStats,
    pub rho: f64,
    /// True when `target_rel_std_error` was set and not reached.
    pub partial: bool,
}

/// Half-duplex uplink benchmark.
///
/// Interfering users form a PPP of intensity `λ` outside `r0`; each inverts
/// its own path loss to its serving BS (`d² ~ Exp(πλ)`) and transmits
/// `ρd^η`, reaching the test BS through Gamma(m, Ω) fading. The test link
/// has received level `ρ` and unit-mean Gamma(m₀) fading.
pub fn estimate_hd(cfg: &NetworkConfig, rho: f64, mc: &MCConfig) -> Result<HdEstimate> {
    let cfg = cfg.validate()?;
    let mc = mc.validate(&cfg)?;
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", format!("{rho} must be non-negative and finite")));
    }
    let field = Field::new(
        &cfg,
        Emitters::Uplink { rho },
        mc.resolved_rmax(&cfg),
        mc.far_field_variance_budget,
    );
    let m0 = cfg.fading_signal.shape;
    let h = Gamma::new(m0, 1.0 / m0).expect("validated fading");
    let half_b = 0.5 * cfg.bandwidth / std::f64::consts::LN_2;
    let chunks = exec::run_chunks(mc.seed, mc.n_samples, mc.workers, |len, rng| {
        let mut s = RunningStats::new();
        for _ in 0..len {
            let (iu, _) = field.sample(rng);
            let snr = rho * h.sample(rng) / (iu + cfg.n0);
            s.push(half_b * snr.ln_1p());
        }
        s
    });
    let rate = merge_all(chunks).summary();
    let partial = mc
        .target_rel_std_error
        .is_some_and(|t| rate.mean > 0.0 && rate.std_error / rate.mean > t);
    Ok(HdEstimate { rate, rho, partial })
}
