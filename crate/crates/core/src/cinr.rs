//! Law of the channel-to-interference-plus-noise ratio `γ = h/(I + N₀)`.
//!
//! With `h ~ Gamma(m₀, ·)` and `I + N₀` approximated by `Gamma(m_I, Ω_I + N₀)`
//! the ratio is beta-prime:
//!
//! ```text
//! f(x) = k^{m₀} x^{m₀−1} (1 + kx)^{−m₀−m_I} / B(m₀, m_I)
//! ```

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interference::InterferenceFit;
use crate::model::NetworkConfig;
use crate::numeric::roots;
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaPrimeDist {
    pub m0: f64,
    pub m_i: f64,
    pub k: f64,
    #[serde(skip)]
    ln_beta: f64,
}

/// `k = (2√λ)^η m₀ (Ω_I + N₀) / (m_I Ω₀)`.
pub fn cinr_distribution(cfg: &NetworkConfig, fit: &InterferenceFit) -> Result<BetaPrimeDist> {
    let cfg = cfg.validate()?;
    let m0 = cfg.fading_signal.shape;
    let k = cfg.path_loss_factor() * m0 * (fit.gamma.mean + cfg.n0) / (fit.gamma.shape * cfg.fading_signal.mean);
    BetaPrimeDist::new(m0, fit.gamma.shape, k)
}

impl BetaPrimeDist {
    pub fn new(m0: f64, m_i: f64, k: f64) -> Result<Self> {
        for (field, v) in [("m0", m0), ("m_i", m_i), ("k", k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(field, format!("{v} must be positive and finite")));
            }
        }
        Ok(Self {
            m0,
            m_i,
            k,
            ln_beta: specfun::log_beta(m0, m_i)?,
        })
    }

    pub fn ln_beta(&self) -> f64 {
        self.ln_beta
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.m0 > 1.0 {
                0.0
            } else if self.m0 == 1.0 {
                self.k * (-self.ln_beta).exp()
            } else {
                f64::INFINITY
            };
        }
        let kx = self.k * x;
        (self.m0 * self.k.ln() + (self.m0 - 1.0) * x.ln() - (self.m0 + self.m_i) * kx.ln_1p() - self.ln_beta).exp()
    }

    /// Log-density of `v = ln(kγ)`:
    /// `m₀v − (m₀+m_I) ln(1+e^v) − ln B(m₀, m_I)`.
    pub fn log_density_of_log(&self, v: f64) -> f64 {
        self.m0 * v - (self.m0 + self.m_i) * softplus(v) - self.ln_beta
    }

    /// `I_{kx/(1+kx)}(m₀, m_I)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return 1.0;
        }
        let u = self.k * x;
        let (p, q) = (u / (1.0 + u), 1.0 / (1.0 + u));
        specfun::reg_inc_beta_with_complement(self.m0, self.m_i, p, q)
            .expect("shapes validated at construction")
    }

    /// `1 − cdf(x)` without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x.is_infinite() {
            return 0.0;
        }
        let u = self.k * x;
        specfun::reg_inc_beta_with_complement(self.m_i, self.m0, 1.0 / (1.0 + u), u / (1.0 + u))
            .expect("shapes validated at construction")
    }

    /// Inverse cdf by bisection in `ln x`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("{p} must lie in (0, 1)")));
        }
        let f = |v: f64| Ok(self.cdf(v.exp() / self.k) - p);
        let mut lo = -1.0;
        while f(lo)? > 0.0 {
            lo *= 2.0;
        }
        let mut hi = 1.0;
        while f(hi)? < 0.0 {
            hi *= 2.0;
        }
        let root = roots::bisect(f, lo, hi, 1e-15, 400)?;
        Ok(root.x.exp() / self.k)
    }

    /// Mode `(m₀−1)/(k(m_I+1))` for `m₀ > 1`, else 0.
    pub fn mode(&self) -> f64 {
        if self.m0 > 1.0 {
            (self.m0 - 1.0) / (self.k * (self.m_i + 1.0))
        } else {
            0.0
        }
    }

    /// `m₀/(k(m_I−1))`, finite only for `m_I > 1`.
    pub fn mean(&self) -> f64 {
        if self.m_i > 1.0 {
            self.m0 / (self.k * (self.m_i - 1.0))
        } else {
            f64::INFINITY
        }
    }

    pub fn sampler(&self) -> CinrSampler {
        CinrSampler {
            num: Gamma::new(self.m0, 1.0).expect("validated shape"),
            den: Gamma::new(self.m_i, 1.0).expect("validated shape"),
            inv_k: 1.0 / self.k,
        }
    }

    /// One draw of `X/(kY)`, `X ~ Gamma(m₀, 1)`, `Y ~ Gamma(m_I, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

/// Reusable sampler holding the two Gamma generators.
#[derive(Debug, Clone, Copy)]
pub struct CinrSampler {
    num: Gamma<f64>,
    den: Gamma<f64>,
    inv_k: f64,
}

impl Distribution<f64> for CinrSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.num.sample(rng);
        let y = self.den.sample(rng);
        x / y * self.inv_k
    }
}

/// `ln(1 + e^v)`.
pub(crate) fn softplus(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

pub fn pdf(d: &BetaPrimeDist, x: f64) -> f64 {
    d.pdf(x)
}

pub fn cdf(d: &BetaPrimeDist, x: f64) -> f64 {
    d.cdf(x)
}

pub fn sample<R: Rng + ?Sized>(d: &BetaPrimeDist, rng: &mut R) -> f64 {
    d.sample(rng)
}
