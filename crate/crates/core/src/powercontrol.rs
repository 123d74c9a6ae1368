//! Water-filling power control under an average-power budget.
//!
//! The policy is `P(γ) = (a₀ − 1/γ)⁺` with `a₀ = B/(μ₀ ln 2)`; the user is
//! silent whenever `γ ≤ 1/a₀`. The water level solves `E[P(γ)] = P̄`.

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::cinr::BetaPrimeDist;
use crate::error::{Error, Result};
use crate::numeric::quad::{self, QuadOptions};
use crate::numeric::roots;
use crate::specfun::{self, EvalResult, Method};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaterfillSolution {
    /// Water level in W.
    pub a0: f64,
    /// Lagrange multiplier `B/(a₀ ln 2)`.
    pub mu0: f64,
    pub achieved_avg_power: f64,
    pub solver_iterations: usize,
    pub bracket_doublings: usize,
    /// `achieved_avg_power − p̄`.
    pub residual: f64,
    /// `Pr[γ > 1/a₀]`.
    pub transmit_probability: f64,
}

/// Relative tolerance of the quadratures inside [`avg_power`].
pub const AVG_POWER_REL_TOL: f64 = 1e-12;
/// Relative residual at which [`solve_cutoff`] stops.
pub const SOLVER_REL_RESIDUAL: f64 = 1e-10;
pub const MAX_DOUBLINGS: usize = 200;

/// `(a₀ − 1/γ)⁺`.
#[inline]
pub fn policy(a0: f64, gamma: f64) -> f64 {
    if gamma <= 1.0 / a0 {
        return 0.0;
    }
    (a0 - 1.0 / gamma).max(0.0)
}

pub fn power_policy(sol: &WaterfillSolution, gamma: f64) -> f64 {
    policy(sol.a0, gamma)
}

/// `Bγ/(ln 2 (1 + γP))`, the marginal rate per unit power.
pub fn marginal_utility(bandwidth: f64, gamma: f64, power: f64) -> f64 {
    bandwidth * gamma / (LN_2 * (1.0 + gamma * power))
}

/// Integrates `g(t)·w(v_c + t)` over `t ≥ 0` where `w` is the density of
/// `v = ln(kγ)` and `v_c = ln(k/a₀)` marks the cutoff.
pub(crate) fn integrate_above_cutoff<G: Fn(f64) -> f64>(
    stage: &'static str,
    d: &BetaPrimeDist,
    a0: f64,
    g: G,
    rel_tol: f64,
) -> Result<f64> {
    let vc = (d.k / a0).ln();
    let f = |t: f64| {
        let v = vc + t;
        let w = d.log_density_of_log(v).exp();
        if w == 0.0 {
            0.0
        } else {
            g(t) * w
        }
    };
    let opts = QuadOptions::rel(rel_tol);
    // the density of v peaks at ln(m₀/m_I)
    let peak = (d.m0 / d.m_i).ln() - vc;
    if peak > 1.0 {
        let head = quad::integrate(stage, f, 0.0, peak, opts)?;
        let tail = quad::integrate_upper(stage, f, peak, 1.0, opts)?;
        Ok(head.value + tail.value)
    } else {
        Ok(quad::integrate_upper(stage, f, 0.0, 1.0, opts)?.value)
    }
}

/// `E[(a₀ − 1/γ)⁺] = ∫_{1/a₀}^∞ (a₀ − 1/x) f_γ(x) dx` by adaptive quadrature.
///
/// In `t = ln(a₀γ)` the integrand is `a₀(1 − e^{−t})` times the log-density.
pub fn avg_power(d: &BetaPrimeDist, a0: f64) -> Result<f64> {
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid("a0", format!("{a0} must be non-negative and finite")));
    }
    if a0 == 0.0 {
        return Ok(0.0);
    }
    integrate_above_cutoff("average power", d, a0, |t| -a0 * (-t).exp_m1(), AVG_POWER_REL_TOL)
}

/// Which denominator the second hypergeometric term of the closed form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormVariant {
    /// Second term divided by `m_I`, as usually printed.
    Printed,
    /// Second term divided by `m_I + 1`, as integration by parts gives.
    Corrected,
}

/// Two-₂F₁ closed form of the average power:
///
/// ```text
/// a₀^{m_I+1}/(B(m₀,m_I) k^{m_I}) · [₂F₁(m_I, m_I+m₀; 1+m_I; −a₀/k)/m_I
///                                 − ₂F₁(m_I+1, m_I+m₀; 2+m_I; −a₀/k)/D]
/// ```
///
/// with `D = m_I` ([`ClosedFormVariant::Printed`]) or `m_I + 1`
/// ([`ClosedFormVariant::Corrected`]).
pub fn avg_power_closed_form_variant(d: &BetaPrimeDist, a0: f64, variant: ClosedFormVariant) -> Result<EvalResult> {
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid("a0", format!("{a0} must be non-negative and finite")));
    }
    if a0 == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            method: Method::Series,
        });
    }
    let (m0, mi, k) = (d.m0, d.m_i, d.k);
    let z = -a0 / k;
    let f1 = specfun::gauss_2f1(mi, mi + m0, 1.0 + mi, z)?;
    let f2 = specfun::gauss_2f1(mi + 1.0, mi + m0, 2.0 + mi, z)?;
    let denom = match variant {
        ClosedFormVariant::Printed => mi,
        ClosedFormVariant::Corrected => mi + 1.0,
    };
    let pre = ((mi + 1.0) * a0.ln() - d.ln_beta() - mi * k.ln()).exp();
    let (t1, t2) = (f1.value / mi, f2.value / denom);
    let value = pre * (t1 - t2);
    let abs_error_estimate =
        pre * (f1.abs_error_estimate / mi + f2.abs_error_estimate / denom + 4.0 * f64::EPSILON * (t1.abs() + t2.abs()));
    let method = if f1.method == f2.method { f1.method } else { Method::Transformation };
    Ok(EvalResult {
        value,
        abs_error_estimate,
        method,
    })
}

/// The closed form as usually printed (see [`avg_power_closed_form_variant`]).
pub fn avg_power_closed_form(d: &BetaPrimeDist, a0: f64) -> Result<EvalResult> {
    avg_power_closed_form_variant(d, a0, ClosedFormVariant::Printed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub quadrature: f64,
    /// `None` when the hypergeometric evaluation was unavailable.
    pub printed: Option<f64>,
    pub corrected: Option<f64>,
    pub printed_rel_deviation: Option<f64>,
    pub corrected_rel_deviation: Option<f64>,
    /// Variants within `tol` of the quadrature.
    pub matching: Vec<ClosedFormVariant>,
}

/// Compares both closed-form variants with [`avg_power`]; quadrature wins.
pub fn check_avg_power_closed_form(d: &BetaPrimeDist, a0: f64, tol: f64) -> Result<ClosedFormCheck> {
    let quadrature = avg_power(d, a0)?;
    let eval = |v| match avg_power_closed_form_variant(d, a0, v) {
        Ok(r) => Ok(Some(r.value)),
        Err(Error::Unavailable { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let printed = eval(ClosedFormVariant::Printed)?;
    let corrected = eval(ClosedFormVariant::Corrected)?;
    let dev = |v: Option<f64>| v.map(|x| ((x - quadrature) / quadrature).abs());
    let (pd, cd) = (dev(printed), dev(corrected));
    let matching = [(ClosedFormVariant::Printed, pd), (ClosedFormVariant::Corrected, cd)]
        .into_iter()
        .filter(|(_, d)| d.is_some_and(|d| d <= tol))
        .map(|(v, _)| v)
        .collect();
    Ok(ClosedFormCheck {
        quadrature,
        printed,
        corrected,
        printed_rel_deviation: pd,
        corrected_rel_deviation: cd,
        matching,
    })
}

/// Solves `avg_power(d, a₀) = p̄` by doubling from `a₀ = p̄` and bisection.
pub fn solve_cutoff(d: &BetaPrimeDist, p_bar: f64, bandwidth: f64) -> Result<WaterfillSolution> {
    if !(p_bar > 0.0 && p_bar.is_finite()) {
        return Err(Error::invalid("p_bar", format!("{p_bar} must be positive and finite")));
    }
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::invalid("bandwidth", format!("{bandwidth} must be positive and finite")));
    }
    let g = |a0: f64| Ok(avg_power(d, a0)? - p_bar);
    let bracket = roots::bracket_by_doubling("cutoff bracket", g, p_bar, MAX_DOUBLINGS)?;
    let root = roots::bisect(g, bracket.lo, bracket.hi, SOLVER_REL_RESIDUAL * p_bar, 300)?;
    let a0 = root.x;
    Ok(WaterfillSolution {
        a0,
        mu0: bandwidth / (a0 * LN_2),
        achieved_avg_power: p_bar + root.residual,
        solver_iterations: root.iterations,
        bracket_doublings: bracket.doublings,
        residual: root.residual,
        transmit_probability: d.sf(1.0 / a0),
    })
}
