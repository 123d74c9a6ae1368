//! Command-line front end: `analyze`, `sweep` and `validate`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numeric failure, 3 a
//! validation tolerance failed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::capacity::{self, Provenance, Tagged};
use crate::error::{Error, Result};
use crate::interference::gamma_fit;
use crate::mcsim::{self, MCConfig, RMax};
use crate::model::{derived_geometry, parse_intensity, NetworkConfig};
use crate::numeric::stats::ks_distance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fdcap", version, about = "Uplink capacity bounds for full-duplex cellular networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse one scenario and print a JSON report (capacities in bit/s).
    Analyze(AnalyzeArgs),
    /// Sweep one parameter and print a CSV table (capacities in kbit/s).
    Sweep(SweepArgs),
    /// Compare the interference model and capacity with Monte Carlo.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 200_000)]
    pub samples: u64,
    /// Random seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: FDCAP_WORKERS or all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Share of the mean interference the truncated field may drop.
    #[arg(long, default_value_t = 1e-4)]
    pub tail_epsilon: f64,
}

impl McArgs {
    fn to_config(&self) -> MCConfig {
        MCConfig {
            n_samples: self.samples,
            seed: self.seed,
            r_max: RMax::Auto,
            tail_epsilon: self.tail_epsilon,
            workers: self.workers.unwrap_or_else(mcsim::exec::default_workers),
            ..MCConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub config: PathBuf,
    /// Half-duplex received-power target in W (default: p_bar times the mean signal gain).
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub mc: McArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweptParameter {
    PBs,
    Lambda,
    PBar,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::PBs => "p_bs",
            SweptParameter::Lambda => "lambda",
            SweptParameter::PBar => "p_bar",
        }
    }

    fn apply(self, cfg: NetworkConfig, v: f64) -> NetworkConfig {
        match self {
            SweptParameter::PBs => cfg.with_p_bs(v),
            SweptParameter::Lambda => cfg.with_lambda(v),
            SweptParameter::PBar => cfg.with_p_bar(v),
        }
    }

    fn parse_value(self, text: &str) -> std::result::Result<f64, String> {
        match self {
            SweptParameter::Lambda => parse_intensity(text),
            _ => text.trim().parse::<f64>().map_err(|e| format!("cannot parse `{text}`: {e}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Output {
    FdOpt,
    FdOptCf,
    FdFixed,
    Hd,
    FdOptMc,
    FdFixedMc,
}

impl Output {
    fn column(self) -> &'static str {
        match self {
            Output::FdOpt => "fd_opt_kbps",
            Output::FdOptCf => "fd_opt_cf_kbps",
            Output::FdFixed => "fd_fixed_kbps",
            Output::Hd => "hd_kbps",
            Output::FdOptMc => "fd_opt_mc_kbps",
            Output::FdFixedMc => "fd_fixed_mc_kbps",
        }
    }

    fn needs_mc(self) -> bool {
        matches!(self, Output::Hd | Output::FdOptMc | Output::FdFixedMc)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    pub sweep: SweptParameter,
    /// First grid value (lambda accepts a /km2 suffix).
    #[arg(long, requires = "to", conflicts_with = "grid")]
    pub from: Option<String>,
    /// Last grid value.
    #[arg(long, requires = "from")]
    pub to: Option<String>,
    /// Number of grid points.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Space the grid logarithmically.
    #[arg(long)]
    pub log: bool,
    /// Explicit comma-separated grid instead of --from/--to.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<String>>,
    /// Columns to compute.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "fd_opt,fd_opt_cf,fd_fixed,hd")]
    pub outputs: Vec<Output>,
    /// Half-duplex received-power target in W (default: p_bar times the mean signal gain).
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub mc: McArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub config: PathBuf,
    /// Interference samples (at least 10000).
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Samples for the capacity comparison (default: --samples).
    #[arg(long)]
    pub fd_samples: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Override the exclusion radius in m.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Histogram CSV path.
    #[arg(long, default_value = "interference_histogram.csv")]
    pub histogram: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sweep definition after parsing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub swept_parameter: SweptParameter,
    pub grid: Vec<f64>,
    pub base_config: NetworkConfig,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn validate(self) -> Result<Self> {
        if self.grid.is_empty() {
            return Err(Error::invalid("grid", "the grid is empty"));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid", "values must be strictly ascending"));
        }
        if self.outputs.is_empty() {
            return Err(Error::invalid("outputs", "no outputs requested"));
        }
        for &v in &self.grid {
            self.swept_parameter.apply(self.base_config, v).validate()?;
        }
        Ok(self)
    }
}

/// Builds the grid from `--from/--to/--points/--log` or `--grid`.
pub fn build_grid(args: &SweepArgs) -> Result<Vec<f64>> {
    let parse = |t: &str| args.sweep.parse_value(t).map_err(|r| Error::invalid("grid", r));
    if let Some(values) = &args.grid {
        return values.iter().map(|t| parse(t)).collect();
    }
    let (Some(from), Some(to)) = (&args.from, &args.to) else {
        return Err(Error::invalid("grid", "give either --grid or both --from and --to"));
    };
    let (a, b) = (parse(from)?, parse(to)?);
    let n = args.points;
    if n == 0 {
        return Err(Error::invalid("points", "at least one grid point is required"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    if args.log && !(a > 0.0 && b > 0.0) {
        return Err(Error::invalid("grid", "a logarithmic grid needs positive end points"));
    }
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if args.log {
                (a.ln() + f * (b.ln() - a.ln())).exp()
            } else {
                a + f * (b - a)
            }
        })
        .collect())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct AnalyzeReport {
    capacity_unit: &'static str,
    mc_samples: u64,
    mc_seed: u64,
    #[serde(flatten)]
    report: capacity::CapacityReport,
}

/// Runs the full analysis of one config and returns the JSON text.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<String> {
    let cfg = NetworkConfig::from_file(&args.config)?;
    let rho = args.rho.unwrap_or_else(|| capacity::default_rho(&cfg));
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", format!("{rho} must be positive")));
    }
    let mc = args.mc.to_config().validate(&cfg)?;
    let report = capacity::compare(&cfg, rho, &mc)?;
    let text = to_json(&AnalyzeReport {
        capacity_unit: "bit/s",
        mc_samples: mc.n_samples,
        mc_seed: mc.seed,
        report,
    });
    emit(args.out.as_deref(), &text)?;
    Ok(text)
}

fn fmt_kbps(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{:.6}", x / 1e3),
        _ => String::new(),
    }
}

/// Computes the sweep table and returns the CSV text.
pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let base = NetworkConfig::from_file(&args.config)?;
    let spec = SweepSpec {
        swept_parameter: args.sweep,
        grid: build_grid(args)?,
        base_config: base,
        outputs: args.outputs.clone(),
    }
    .validate()?;
    let mc = args.mc.to_config();
    if spec.outputs.iter().any(|o| o.needs_mc()) {
        mc.validate(&base)?;
    }
    let mut csv = String::new();
    csv.push_str(spec.swept_parameter.name());
    for o in &spec.outputs {
        csv.push(',');
        csv.push_str(o.column());
    }
    csv.push('\n');
    for &v in &spec.grid {
        let cfg = spec.swept_parameter.apply(base, v);
        let opt = capacity::fd_optimal_capacity(&cfg)?;
        let p = opt.pipeline;
        let needs_fd_mc = spec.outputs.iter().any(|o| matches!(o, Output::FdOptMc | Output::FdFixedMc));
        let fd_mc = if needs_fd_mc {
            Some(mcsim::estimate_fd(&cfg, &mc, opt.a0)?)
        } else {
            None
        };
        write!(csv, "{v:e}").expect("string write");
        for o in &spec.outputs {
            let value = match o {
                Output::FdOpt => Some(opt.capacity),
                Output::FdOptCf => match capacity::fd_optimal_capacity_closed_form(&p.cinr, opt.a0, cfg.bandwidth) {
                    Ok(r) => Some(r.value),
                    Err(Error::Unavailable { .. }) => None,
                    Err(e) => return Err(e),
                },
                Output::FdFixed => Some(capacity::fd_fixed_capacity_of(&p.cinr, cfg.p_bar, cfg.bandwidth)?),
                Output::Hd => {
                    let rho = args.rho.unwrap_or_else(|| capacity::default_rho(&cfg));
                    Some(capacity::hd_benchmark_capacity(&cfg, rho, &mc)?.rate.mean)
                }
                Output::FdOptMc => fd_mc.as_ref().map(|f| f.optimal_rate.mean),
                Output::FdFixedMc => fd_mc.as_ref().map(|f| f.fixed_rate.mean),
            };
            csv.push(',');
            csv.push_str(&fmt_kbps(value));
        }
        csv.push('\n');
    }
    emit(args.out.as_deref(), &csv)?;
    Ok(csv)
}

/// Tolerances applied by `validate`.
pub const TOL_MEAN: f64 = 0.01;
pub const TOL_SECOND_MOMENT: f64 = 0.02;
pub const TOL_KS: f64 = 0.03;
pub const TOL_FD_GAP: f64 = 0.03;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, tolerance: f64) -> Check {
        Check {
            name,
            value,
            tolerance,
            pass: value < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub config: NetworkConfig,
    pub samples: u64,
    pub fd_samples: u64,
    pub seed: u64,
    pub r0: Tagged,
    pub r_max: f64,
    pub fitted_shape: Tagged,
    pub fitted_mean: Tagged,
    pub mc_mean: Tagged,
    pub mc_mean_std_error: f64,
    pub exact_second_moment: Tagged,
    pub mc_second_moment: Tagged,
    pub mc_shape: Tagged,
    pub mc_point_count: f64,
    pub expected_point_count: f64,
    pub c_fd_optimal: Tagged,
    pub c_fd_optimal_mc: Tagged,
    pub c_fd_optimal_mc_std_error: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Runs the validation; returns the report JSON and whether every check passed.
pub fn cmd_validate(args: &ValidateArgs) -> Result<(String, bool)> {
    let mut cfg = NetworkConfig::from_file(&args.config)?;
    cfg.exclusion_radius = args.r0;
    let cfg = cfg.validate()?;
    if args.samples < 10_000 {
        return Err(Error::invalid(
            "samples",
            format!("{} is below the minimum of 10000", args.samples),
        ));
    }
    let workers = args.workers.unwrap_or_else(mcsim::exec::default_workers);
    let mc = MCConfig {
        workers,
        ..MCConfig::with_samples(args.samples, args.seed)
    };
    let fd_mc = MCConfig {
        n_samples: args.fd_samples.unwrap_or(args.samples),
        ..mc
    };
    let fit = gamma_fit(&cfg)?;
    let est = mcsim::estimate_interference_moments(&cfg, &mc)?;
    let g = fit.gamma;
    let ks = ks_distance(&est.sorted_samples, |x| g.cdf(x));
    let mean_err = ((est.stats.mean - fit.mean_exact) / fit.mean_exact).abs();
    let second_err = ((est.second_moment.mean - fit.second_moment_exact) / fit.second_moment_exact).abs();
    let mc_shape = est.stats.mean * est.stats.mean / est.stats.variance;

    let opt = capacity::fd_optimal_capacity(&cfg)?;
    let fd = mcsim::estimate_fd(&cfg, &fd_mc, opt.a0)?;
    let fd_gap = ((fd.optimal_rate.mean - opt.capacity) / opt.capacity).abs();

    let checks = vec![
        Check::below("interference_mean_rel_error", mean_err, TOL_MEAN),
        Check::below("interference_second_moment_rel_error", second_err, TOL_SECOND_MOMENT),
        Check::below("ks_distance_vs_fitted_gamma", ks, TOL_KS),
        Check::below("fd_optimal_mc_rel_gap", fd_gap, TOL_FD_GAP),
    ];
    let pass = checks.iter().all(|c| c.pass);
    let report = ValidationReport {
        config: cfg,
        samples: mc.n_samples,
        fd_samples: fd_mc.n_samples,
        seed: mc.seed,
        r0: Tagged::new(derived_geometry(&cfg).r0, Provenance::ClosedForm),
        r_max: est.r_max,
        fitted_shape: Tagged::new(g.shape, Provenance::ClosedForm),
        fitted_mean: Tagged::new(g.mean, Provenance::ClosedForm),
        mc_mean: Tagged::new(est.stats.mean, Provenance::MonteCarlo),
        mc_mean_std_error: est.stats.std_error,
        exact_second_moment: Tagged::new(fit.second_moment_exact, Provenance::ClosedForm),
        mc_second_moment: Tagged::new(est.second_moment.mean, Provenance::MonteCarlo),
        mc_shape: Tagged::new(mc_shape, Provenance::MonteCarlo),
        mc_point_count: est.point_count.mean,
        expected_point_count: est.expected_point_count,
        c_fd_optimal: Tagged::new(opt.capacity, Provenance::Quadrature),
        c_fd_optimal_mc: Tagged::new(fd.optimal_rate.mean, Provenance::MonteCarlo),
        c_fd_optimal_mc_std_error: fd.optimal_rate.std_error,
        checks,
        pass,
    };

    let mut hist = String::from("bin_left,bin_right,density,gamma_pdf\n");
    if let Some(h) = &est.stats.histogram {
        for (l, r, d) in h.densities() {
            writeln!(hist, "{l:e},{r:e},{d:e},{:e}", g.pdf(0.5 * (l + r))).expect("string write");
        }
    }
    std::fs::write(&args.histogram, hist)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", args.histogram.display())))?;

    let text = to_json(&report);
    emit(args.out.as_deref(), &text)?;
    Ok((text, pass))
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Validate(a) => cmd_validate(a).map(|(_, pass)| pass),
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("validation failed: at least one tolerance was exceeded (see the report)");
            EXIT_VALIDATION
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
