//! Scenario parameters, validation and derived geometry.

use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};

/// Gamma law by `(shape, mean)`; the scale is `mean / shape`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    pub shape: f64,
    pub mean: f64,
}

impl GammaParams {
    pub fn new(shape: f64, mean: f64) -> Result<Self> {
        let g = GammaParams { shape, mean };
        g.check("gamma")?;
        Ok(g)
    }

    fn check(&self, field: &'static str) -> Result<()> {
        if !(self.shape > 0.0 && self.shape.is_finite()) {
            return Err(Error::invalid(field, format!("shape {} must be positive and finite", self.shape)));
        }
        if !(self.mean > 0.0 && self.mean.is_finite()) {
            return Err(Error::invalid(field, format!("mean {} must be positive and finite", self.mean)));
        }
        Ok(())
    }

    pub fn scale(&self) -> f64 {
        self.mean / self.shape
    }

    pub fn variance(&self) -> f64 {
        self.mean * self.mean / self.shape
    }

    pub fn second_moment(&self) -> f64 {
        self.mean * self.mean * (1.0 + 1.0 / self.shape)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let theta = self.scale();
        let m = self.shape;
        if x == 0.0 {
            return match m.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => 1.0 / theta,
                _ => 0.0,
            };
        }
        let ln = (m - 1.0) * x.ln() - x / theta - m * theta.ln() - statrs::function::gamma::ln_gamma(m);
        ln.exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            statrs::function::gamma::gamma_lr(self.shape, x / self.scale())
        }
    }
}

/// Physical scenario. Intensities are per m², powers in W, bandwidth in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkConfig {
    pub lambda: f64,
    pub p_bs: f64,
    pub eta: f64,
    pub n0: f64,
    pub bandwidth: f64,
    pub p_bar: f64,
    /// `(m, Ω)` of the interfering BS-to-BS channels.
    pub fading_interferer: GammaParams,
    /// `(m₀, Ω₀)` of the intended user-to-BS channel before the path-loss factor.
    pub fading_signal: GammaParams,
    /// Replaces `1/√(πλ)` as the interference exclusion radius when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclusion_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    pub r0: f64,
    pub rbar: f64,
}

/// `p_bs` grid (W) used for small cells.
pub const MICRO_P_BS_GRID: [f64; 6] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0];
/// `p_bs` grid (W) used for large cells.
pub const MACRO_P_BS_GRID: [f64; 8] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0];

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} must be positive and finite")))
    }
}

impl NetworkConfig {
    /// Small-cell scenario: λ = 5·10⁻⁵ m⁻², η = 4, B = 180 kHz, N₀ = 10⁻⁹ W,
    /// Rayleigh interferers, `m₀ = 2` with unit-mean composite signal gain.
    pub fn micro(p_bs: f64) -> Self {
        Self::baseline(5e-5, p_bs)
    }

    /// Large-cell scenario: as [`NetworkConfig::micro`] with λ = 5·10⁻⁶ m⁻².
    pub fn macro_cell(p_bs: f64) -> Self {
        Self::baseline(5e-6, p_bs)
    }

    fn baseline(lambda: f64, p_bs: f64) -> Self {
        let eta = 4.0;
        NetworkConfig {
            lambda,
            p_bs,
            eta,
            n0: 1e-9,
            bandwidth: 180e3,
            p_bar: 0.2,
            fading_interferer: GammaParams { shape: 1.0, mean: 1.0 },
            fading_signal: GammaParams {
                shape: 2.0,
                mean: (2.0 * lambda.sqrt()).powf(eta),
            },
            exclusion_radius: None,
        }
    }

    /// Checks every invariant in field order and returns the config unchanged.
    pub fn validate(self) -> Result<Self> {
        positive("lambda", self.lambda)?;
        if !(self.p_bs >= 0.0 && self.p_bs.is_finite()) {
            return Err(Error::invalid("p_bs", format!("{} must be non-negative and finite", self.p_bs)));
        }
        if !self.eta.is_finite() {
            return Err(Error::invalid("eta", format!("{} must be finite", self.eta)));
        }
        if self.eta <= 2.0 {
            return Err(Error::Divergence { eta: self.eta });
        }
        positive("n0", self.n0)?;
        positive("bandwidth", self.bandwidth)?;
        positive("p_bar", self.p_bar)?;
        self.fading_interferer.check("fading_interferer")?;
        self.fading_signal.check("fading_signal")?;
        if let Some(r0) = self.exclusion_radius {
            positive("r0", r0)?;
            let rbar = 0.5 / self.lambda.sqrt();
            if r0 <= rbar {
                return Err(Error::invalid("r0", format!("{r0} must exceed the link distance {rbar}")));
            }
        }
        Ok(self)
    }

    /// True when the exclusion radius is the default `1/√(πλ)`.
    pub fn default_exclusion(&self) -> bool {
        self.exclusion_radius.is_none()
    }

    /// `(2√λ)^η`, the factor dividing `α₀` in the composite signal gain `h`.
    pub fn path_loss_factor(&self) -> f64 {
        (2.0 * self.lambda.sqrt()).powf(self.eta)
    }

    /// Law of the composite signal gain `h = α₀/(2√λ)^η`.
    pub fn signal_gain(&self) -> GammaParams {
        GammaParams {
            shape: self.fading_signal.shape,
            mean: self.fading_signal.mean / self.path_loss_factor(),
        }
    }

    pub fn with_p_bs(mut self, p_bs: f64) -> Self {
        self.p_bs = p_bs;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_p_bar(mut self, p_bar: f64) -> Self {
        self.p_bar = p_bar;
        self
    }

    /// Parses the `key = value` format; `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self> {
        const KEYS: [&str; 10] = [
            "lambda", "p_bs", "eta", "n0", "bandwidth", "p_bar", "m_int", "omega_int", "m_sig", "omega_sig",
        ];
        let mut values: [Option<f64>; 10] = [None; 10];
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigSyntax {
                line: line_no,
                reason: format!("expected `key = value`, found `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::ConfigSyntax {
                line: line_no,
                reason: format!("unknown key `{key}`"),
            })?;
            if values[slot].is_some() {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    reason: format!("duplicate key `{key}`"),
                });
            }
            let parsed = if key == "lambda" {
                parse_intensity(value)
            } else {
                value.parse::<f64>().map_err(|e| e.to_string())
            };
            values[slot] = Some(parsed.map_err(|reason| Error::ConfigSyntax {
                line: line_no,
                reason: format!("`{key}`: {reason}"),
            })?);
        }
        if let Some(missing) = KEYS.iter().zip(values.iter()).find(|(_, v)| v.is_none()) {
            return Err(Error::ConfigSyntax {
                line: text.lines().count(),
                reason: format!("missing key `{}`", missing.0),
            });
        }
        let v = |i: usize| values[i].unwrap_or(f64::NAN);
        NetworkConfig {
            lambda: v(0),
            p_bs: v(1),
            eta: v(2),
            n0: v(3),
            bandwidth: v(4),
            p_bar: v(5),
            fading_interferer: GammaParams { shape: v(6), mean: v(7) },
            fading_signal: GammaParams { shape: v(8), mean: v(9) },
            exclusion_radius: None,
        }
        .validate()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_config_str(&text)
    }

    /// Renders the config in the format accepted by [`NetworkConfig::from_config_str`].
    pub fn to_config_string(&self) -> String {
        format!(
            "lambda = {:e}\np_bs = {}\neta = {}\nn0 = {:e}\nbandwidth = {}\np_bar = {}\n\
             m_int = {}\nomega_int = {}\nm_sig = {}\nomega_sig = {:e}\n",
            self.lambda,
            self.p_bs,
            self.eta,
            self.n0,
            self.bandwidth,
            self.p_bar,
            self.fading_interferer.shape,
            self.fading_interferer.mean,
            self.fading_signal.shape,
            self.fading_signal.mean,
        )
    }
}

/// Parses an intensity in m⁻²; a `/km2` suffix converts from km⁻², `/m2` is
/// accepted explicitly.
pub fn parse_intensity(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let (number, factor) = if let Some(n) = t.strip_suffix("/km2") {
        (n, 1e-6)
    } else if let Some(n) = t.strip_suffix("/m2") {
        (n, 1.0)
    } else {
        (t, 1.0)
    };
    number
        .trim()
        .parse::<f64>()
        .map(|v| v * factor)
        .map_err(|e| format!("cannot parse intensity `{t}`: {e}"))
}

/// Validates a config (free-function form of [`NetworkConfig::validate`]).
pub fn validate(cfg: NetworkConfig) -> Result<NetworkConfig> {
    cfg.validate()
}

/// `r0 = 1/√(πλ)` (or the override) and `rbar = 1/(2√λ)`.
pub fn derived_geometry(cfg: &NetworkConfig) -> Geometry {
    Geometry {
        r0: cfg.exclusion_radius.unwrap_or_else(|| 1.0 / (PI * cfg.lambda).sqrt()),
        rbar: 0.5 / cfg.lambda.sqrt(),
    }
}
