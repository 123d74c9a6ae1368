//! Poisson interferer fields outside the exclusion radius.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use std::f64::consts::PI;

use crate::model::{derived_geometry, NetworkConfig};

/// What each interferer contributes before path loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Emitters {
    /// Base stations at constant power `P_BS` with Gamma(m, Ω) channels.
    Downlink,
    /// Users inverting their own path loss `d^η` to a received level `ρ`,
    /// with `d² ~ Exp(πλ)`, seen through Gamma(m, Ω) channels.
    Uplink { rho: f64 },
}

/// Sampler of `Σ amplitude·markᵢ·rᵢ^{−η}` over a PPP on `[r0, r_max]`.
///
/// Points in `[r0, r_near]` are drawn exactly. For `[r_near, r_max]` only the
/// Poisson count is exact; the conditional sum is drawn from the Gamma law
/// with the exact conditional mean and variance.
#[derive(Debug, Clone)]
pub struct Field {
    pub r0: f64,
    pub r_near: f64,
    pub r_max: f64,
    eta: f64,
    /// `η/2` when it is an integer, for the faster `powi`.
    half_eta_int: Option<i32>,
    amplitude: f64,
    emitters: Emitters,
    /// `E[d^η]`-scale for uplink marks: `d^η = (E/(πλ))^{η/2}`.
    inv_pi_lambda: f64,
    mark: Gamma<f64>,
    near_count: Option<Poisson<f64>>,
    far_count: Option<Poisson<f64>>,
    expected_points: f64,
    far_point_mean: f64,
    far_point_var: f64,
}

/// Mean number of points of intensity `λ` in the annulus `[a, b]`.
fn annulus_mass(lambda: f64, a: f64, b: f64) -> f64 {
    lambda * PI * (b * b - a * a)
}

/// `E[r^{−p}]` for a point uniform in area on `[a, b]`.
fn inverse_power_moment(p: f64, a: f64, b: f64) -> f64 {
    2.0 * (a.powf(2.0 - p) - b.powf(2.0 - p)) / ((p - 2.0) * (b * b - a * a))
}

fn poisson(mean: f64) -> Option<Poisson<f64>> {
    (mean > 0.0).then(|| Poisson::new(mean).expect("finite positive mean"))
}

impl Field {
    pub fn new(cfg: &NetworkConfig, emitters: Emitters, r_max: f64, far_field_variance_budget: f64) -> Field {
        let r0 = derived_geometry(cfg).r0;
        let eta = cfg.eta;
        let r_near = if far_field_variance_budget > 0.0 {
            (r0 * far_field_variance_budget.powf(1.0 / (2.0 - 2.0 * eta))).min(r_max)
        } else {
            r_max
        };
        let m = cfg.fading_interferer.shape;
        let omega = cfg.fading_interferer.mean;
        let pl = PI * cfg.lambda;
        let amplitude = match emitters {
            Emitters::Downlink => cfg.p_bs,
            Emitters::Uplink { rho } => rho,
        };
        // E[mark], E[mark²]
        let (mark1, mark2) = match emitters {
            Emitters::Downlink => (omega, omega * omega * (1.0 + 1.0 / m)),
            Emitters::Uplink { .. } => {
                let d1 = statrs::function::gamma::gamma(1.0 + eta / 2.0) / pl.powf(eta / 2.0);
                let d2 = statrs::function::gamma::gamma(1.0 + eta) / pl.powf(eta);
                (omega * d1, omega * omega * (1.0 + 1.0 / m) * d2)
            }
        };
        let (far_point_mean, far_point_var) = if r_near < r_max {
            let mean = amplitude * mark1 * inverse_power_moment(eta, r_near, r_max);
            let second = amplitude * amplitude * mark2 * inverse_power_moment(2.0 * eta, r_near, r_max);
            (mean, second - mean * mean)
        } else {
            (0.0, 0.0)
        };
        Field {
            r0,
            r_near,
            r_max,
            eta,
            half_eta_int: ((0.5 * eta).fract() == 0.0 && eta < 64.0).then_some((0.5 * eta) as i32),
            amplitude,
            emitters,
            inv_pi_lambda: 1.0 / pl,
            mark: Gamma::new(m, omega / m).expect("validated fading"),
            near_count: poisson(annulus_mass(cfg.lambda, r0, r_near)),
            far_count: poisson(annulus_mass(cfg.lambda, r_near, r_max)),
            expected_points: annulus_mass(cfg.lambda, r0, r_max),
            far_point_mean,
            far_point_var,
        }
    }

    /// Expected number of points in `[r0, r_max]`.
    pub fn expected_points(&self) -> f64 {
        self.expected_points
    }

    /// One realisation: `(interference, number of points)`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, u64) {
        if self.amplitude == 0.0 {
            return (0.0, self.sample_counts(rng));
        }
        let mut total = 0.0;
        let mut points = 0u64;
        if let Some(nc) = &self.near_count {
            let n = nc.sample(rng) as u64;
            points += n;
            let (a2, span) = (self.r0 * self.r0, self.r_near * self.r_near - self.r0 * self.r0);
            for _ in 0..n {
                let r2 = a2 + span * rng.random::<f64>();
                let mut mark = self.mark.sample(rng);
                if let Emitters::Uplink { .. } = self.emitters {
                    let e: f64 = Exp1.sample(rng);
                    mark *= self.half_power(e * self.inv_pi_lambda);
                }
                total += mark / self.half_power(r2);
            }
        }
        if let Some(fc) = &self.far_count {
            let n = fc.sample(rng) as u64;
            points += n;
            if n > 0 {
                total += self.far_sum(n, rng) / self.amplitude;
            }
        }
        (self.amplitude * total, points)
    }

    /// `x^{η/2}`.
    #[inline]
    fn half_power(&self, x: f64) -> f64 {
        match self.half_eta_int {
            Some(k) => x.powi(k),
            None => x.powf(0.5 * self.eta),
        }
    }

    fn far_sum<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> f64 {
        let nf = n as f64;
        if self.far_point_var <= 0.0 {
            return nf * self.far_point_mean;
        }
        let shape = nf * self.far_point_mean * self.far_point_mean / self.far_point_var;
        let scale = self.far_point_var / self.far_point_mean;
        Gamma::new(shape, scale).expect("positive moments").sample(rng)
    }

    fn sample_counts<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.near_count.map_or(0, |p| p.sample(rng) as u64) + self.far_count.map_or(0, |p| p.sample(rng) as u64)
    }
}
