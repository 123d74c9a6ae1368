//! Full-duplex capacity bounds and the half-duplex benchmark.

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::cinr::{cinr_distribution, softplus, BetaPrimeDist};
use crate::error::{Error, Result};
use crate::interference::{gamma_fit, InterferenceFit};
use crate::mcsim::{self, HdEstimate, MCConfig};
use crate::model::{derived_geometry, Geometry, NetworkConfig};
use crate::numeric::quad::{self, QuadOptions};
use crate::powercontrol::{integrate_above_cutoff, solve_cutoff, WaterfillSolution};
use crate::specfun::{self, EvalResult};

/// Relative tolerance of the capacity quadratures.
pub const CAPACITY_REL_TOL: f64 = 1e-12;

/// Every analytic intermediate of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pipeline {
    pub config: NetworkConfig,
    pub geometry: Geometry,
    pub fit: InterferenceFit,
    pub cinr: BetaPrimeDist,
    pub waterfill: WaterfillSolution,
}

/// `gamma_fit → cinr_distribution → solve_cutoff`.
pub fn pipeline(cfg: &NetworkConfig) -> Result<Pipeline> {
    let cfg = cfg.validate()?;
    let fit = gamma_fit(&cfg)?;
    let cinr = cinr_distribution(&cfg, &fit)?;
    let waterfill = solve_cutoff(&cinr, cfg.p_bar, cfg.bandwidth)?;
    Ok(Pipeline {
        config: cfg,
        geometry: derived_geometry(&cfg),
        fit,
        cinr,
        waterfill,
    })
}

/// `(B/ln 2) ∫_{1/a₀}^∞ ln(a₀x) f_γ(x) dx`, integrated in `t = ln(a₀x)`.
pub fn fd_optimal_capacity_of(d: &BetaPrimeDist, a0: f64, bandwidth: f64) -> Result<f64> {
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid("a0", format!("{a0} must be non-negative and finite")));
    }
    if a0 == 0.0 {
        return Ok(0.0);
    }
    let integral = integrate_above_cutoff("optimal capacity", d, a0, |t| t, CAPACITY_REL_TOL)?;
    Ok(bandwidth / LN_2 * integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdOptimal {
    /// bit/s
    pub capacity: f64,
    pub a0: f64,
    pub pipeline: Pipeline,
}

/// Capacity under water-filling with the solved cutoff.
pub fn fd_optimal_capacity(cfg: &NetworkConfig) -> Result<FdOptimal> {
    let p = pipeline(cfg)?;
    Ok(FdOptimal {
        capacity: fd_optimal_capacity_of(&p.cinr, p.waterfill.a0, p.config.bandwidth)?,
        a0: p.waterfill.a0,
        pipeline: p,
    })
}

/// Closed form of the optimal capacity:
///
/// ```text
/// B a₀^{m_I} ₃F₂(m_I, m_I, m₀+m_I; 1+m_I, 1+m_I; −a₀/k) / (B(m₀,m_I) m_I² k^{m_I} ln 2)
/// ```
///
/// Returns [`Error::Unavailable`] when the ₃F₂ cannot be evaluated.
pub fn fd_optimal_capacity_closed_form(d: &BetaPrimeDist, a0: f64, bandwidth: f64) -> Result<EvalResult> {
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid("a0", format!("{a0} must be non-negative and finite")));
    }
    let (m0, mi, k) = (d.m0, d.m_i, d.k);
    if a0 == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            method: specfun::Method::Series,
        });
    }
    let f = specfun::hyper_3f2([mi, mi, m0 + mi], [1.0 + mi, 1.0 + mi], -a0 / k)?;
    let pre = bandwidth / LN_2 * (mi * (a0 / k).ln() - d.ln_beta() - 2.0 * mi.ln()).exp();
    Ok(EvalResult {
        value: pre * f.value,
        abs_error_estimate: pre * f.abs_error_estimate,
        method: f.method,
    })
}

/// `(B/ln 2) ∫₀^∞ ln(1 + P̄x) f_γ(x) dx`, integrated in `v = ln(kx)`.
pub fn fd_fixed_capacity_of(d: &BetaPrimeDist, p_bar: f64, bandwidth: f64) -> Result<f64> {
    if !(p_bar >= 0.0 && p_bar.is_finite()) {
        return Err(Error::invalid("p_bar", format!("{p_bar} must be non-negative and finite")));
    }
    if p_bar == 0.0 {
        return Ok(0.0);
    }
    let shift = (p_bar / d.k).ln();
    // ln(1 + P̄x) = softplus(v + ln(P̄/k))
    let f = |v: f64| {
        let w = d.log_density_of_log(v).exp();
        if w == 0.0 {
            0.0
        } else {
            softplus(v + shift) * w
        }
    };
    let peak = (d.m0 / d.m_i).ln();
    let r = quad::integrate_real_line("fixed-power capacity", f, peak, 1.0, QuadOptions::rel(CAPACITY_REL_TOL))?;
    Ok(bandwidth / LN_2 * r.value)
}

/// Constant-power capacity for the scenario's `P̄` (analytic path).
pub fn fd_fixed_power_capacity(cfg: &NetworkConfig) -> Result<f64> {
    let cfg = cfg.validate()?;
    let d = cinr_distribution(&cfg, &gamma_fit(&cfg)?)?;
    fd_fixed_capacity_of(&d, cfg.p_bar, cfg.bandwidth)
}

/// Received-power target used when none is given: the mean received power
/// `P̄·E[h]` of a user transmitting at its average budget.
pub fn default_rho(cfg: &NetworkConfig) -> f64 {
    cfg.p_bar * cfg.signal_gain().mean
}

/// Monte Carlo half-duplex benchmark (see [`mcsim::estimate_hd`]).
pub fn hd_benchmark_capacity(cfg: &NetworkConfig, rho: f64, mc: &MCConfig) -> Result<HdEstimate> {
    mcsim::estimate_hd(cfg, rho, mc)
}

/// How a reported number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Quadrature,
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tagged {
    pub value: f64,
    pub provenance: Provenance,
}

impl Tagged {
    pub fn new(value: f64, provenance: Provenance) -> Self {
        Tagged { value, provenance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    /// bit/s
    pub c_fd_optimal: Tagged,
    pub c_fd_optimal_closed_form: Option<Tagged>,
    /// `"ok"` or the reason the closed form is unavailable.
    pub closed_form_status: String,
    pub c_fd_optimal_mc: Tagged,
    pub c_fd_optimal_mc_std_error: Tagged,
    pub c_fd_fixed: Tagged,
    pub c_fd_fixed_mc: Tagged,
    pub c_fd_fixed_mc_std_error: Tagged,
    pub c_hd: Tagged,
    pub c_hd_std_error: Tagged,
    pub hd_partial: bool,
    pub rho: Tagged,
    pub a0: Tagged,
    pub mu0: Tagged,
    pub m_i: Tagged,
    pub omega_i: Tagged,
    pub k: Tagged,
    pub r0: Tagged,
    pub rbar: Tagged,
    /// `c_fd_optimal < c_hd`: even the interference-free FD bound loses.
    pub fd_harmful: bool,
    /// `c_fd_fixed > c_hd`: a feasible FD scheme already wins.
    pub fd_beneficial: bool,
}

/// Assembles every capacity with its provenance and the comparison flags.
pub fn compare(cfg: &NetworkConfig, rho: f64, mc: &MCConfig) -> Result<CapacityReport> {
    use Provenance::*;
    let opt = fd_optimal_capacity(cfg)?;
    let p = opt.pipeline;
    let (closed, status) = match fd_optimal_capacity_closed_form(&p.cinr, p.waterfill.a0, p.config.bandwidth) {
        Ok(r) => (Some(Tagged::new(r.value, ClosedForm)), "ok".to_string()),
        Err(e @ Error::Unavailable { .. }) => (None, format!("closed form unavailable, quadrature used: {e}")),
        Err(e) => return Err(e),
    };
    let fixed = fd_fixed_capacity_of(&p.cinr, p.config.p_bar, p.config.bandwidth)?;
    let fd_mc = mcsim::estimate_fd(&p.config, mc, p.waterfill.a0)?;
    let hd = hd_benchmark_capacity(&p.config, rho, mc)?;
    Ok(CapacityReport {
        c_fd_optimal: Tagged::new(opt.capacity, Quadrature),
        c_fd_optimal_closed_form: closed,
        closed_form_status: status,
        c_fd_optimal_mc: Tagged::new(fd_mc.optimal_rate.mean, MonteCarlo),
        c_fd_optimal_mc_std_error: Tagged::new(fd_mc.optimal_rate.std_error, MonteCarlo),
        c_fd_fixed: Tagged::new(fixed, Quadrature),
        c_fd_fixed_mc: Tagged::new(fd_mc.fixed_rate.mean, MonteCarlo),
        c_fd_fixed_mc_std_error: Tagged::new(fd_mc.fixed_rate.std_error, MonteCarlo),
        c_hd: Tagged::new(hd.rate.mean, MonteCarlo),
        c_hd_std_error: Tagged::new(hd.rate.std_error, MonteCarlo),
        hd_partial: hd.partial,
        rho: Tagged::new(rho, ClosedForm),
        a0: Tagged::new(p.waterfill.a0, Quadrature),
        mu0: Tagged::new(p.waterfill.mu0, Quadrature),
        m_i: Tagged::new(p.fit.gamma.shape, ClosedForm),
        omega_i: Tagged::new(p.fit.gamma.mean, ClosedForm),
        k: Tagged::new(p.cinr.k, ClosedForm),
        r0: Tagged::new(p.geometry.r0, ClosedForm),
        rbar: Tagged::new(p.geometry.rbar, ClosedForm),
        fd_harmful: opt.capacity < hd.rate.mean,
        fd_beneficial: fixed > hd.rate.mean,
    })
}
