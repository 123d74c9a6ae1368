//! Adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Finite intervals are bisected greedily on the largest local error until the
//! global estimate meets `max(abs_tol, rel_tol·|I|)`, floored at the roundoff
//! level of `∫|f|`. Semi-infinite intervals
//! are covered by geometrically growing panels, which suits the exponentially
//! or power-law decaying integrands used throughout the crate.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_455_557_596,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    fn zero() -> Self {
        Self {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        }
    }

    fn add(&mut self, other: QuadResult) {
        self.value += other.value;
        self.abs_error += other.abs_error;
        self.evaluations += other.evaluations;
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    res_abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv = [0.0f64; 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Panel {
        a,
        b,
        value,
        error,
        res_abs,
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Non-finite integrand values or a budget overrun are reported as
/// [`Error::Quadrature`] carrying the best estimate reached.
pub fn integrate<F: Fn(f64) -> f64>(
    stage: &'static str,
    f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    if b < a {
        let r = integrate(stage, f, b, a, opts)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    let first = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_total = first.res_abs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                stage,
                value,
                abs_error: error,
            });
        }
        // Tolerances below the accumulated roundoff floor are clipped to it.
        let floor = 100.0 * f64::EPSILON * abs_total;
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()).max(floor) {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                stage,
                value,
                abs_error: error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        // Interval exhausted at machine resolution: keep its contribution and stop refining it.
        if mid <= worst.a || mid >= worst.b {
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_total += left.res_abs + right.res_abs - worst.res_abs;
        heap.push(left);
        heap.push(right);
    }
    // Resum to shed drift accumulated by the incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadResult {
        value,
        abs_error: error,
        evaluations,
    })
}

/// Integrates `f` over `[a, ∞)` using panels `[a, a+L], [a+L, a+3L], …` of
/// doubling width until the newest panels stop contributing.
pub fn integrate_upper<F: Fn(f64) -> f64>(
    stage: &'static str,
    f: F,
    a: f64,
    first_width: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    let mut total = QuadResult::zero();
    let mut lo = a;
    let mut width = first_width;
    let mut quiet = 0;
    for panel in 0..200 {
        let hi = lo + width;
        let r = integrate(stage, &f, lo, hi, opts)?;
        total.add(r);
        let negligible = r.value.abs() + r.abs_error
            <= 0.1 * opts.rel_tol * total.value.abs() + opts.abs_tol
            || (total.value == 0.0 && panel > 60);
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet >= 2 && panel >= 3 {
            return Ok(total);
        }
        lo = hi;
        width *= 2.0;
        if !lo.is_finite() {
            break;
        }
    }
    Err(Error::Quadrature {
        stage,
        value: total.value,
        abs_error: total.abs_error,
    })
}

/// Integrates `f` over `(-∞, b]`.
pub fn integrate_lower<F: Fn(f64) -> f64>(
    stage: &'static str,
    f: F,
    b: f64,
    first_width: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    integrate_upper(stage, |x| f(-x), -b, first_width, opts)
}

/// Integrates `f` over the whole real line, splitting at `split`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    stage: &'static str,
    f: F,
    split: f64,
    first_width: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    let mut left = integrate_lower(stage, &f, split, first_width, opts)?;
    let right = integrate_upper(stage, &f, split, first_width, opts)?;
    left.add(right);
    Ok(left)
}

/// `∫₀¹ t^{p−1} (1−t)^{q−1} g(t) dt` for `p, q > 0`, with both endpoint
/// singularities removed by substitution.
///
/// On `[0, ½]` the variable `t = e^{−v}` turns the weight into `e^{−pv}` and
/// spreads any structure of `g` near the origin (e.g. `g(t) = (1+Kt)^{−c}`
/// with huge `K`) over a unit scale in `v`. On `[½, 1]` the substitution
/// `s = (1−t)^q` absorbs the right weight.
pub fn integrate_beta_weighted<G: Fn(f64) -> f64>(
    stage: &'static str,
    p: f64,
    q: f64,
    g: G,
    opts: QuadOptions,
) -> Result<QuadResult> {
    let left = |v: f64| {
        let t = (-v).exp();
        (-p * v).exp() * (-(-v).exp_m1()).powf(q - 1.0) * g(t)
    };
    let mut total = integrate_upper(stage, left, std::f64::consts::LN_2, 1.0, opts)?;
    let s_max = 0.5f64.powf(q);
    let right = |s: f64| {
        let one_minus_t = s.powf(1.0 / q);
        let t = 1.0 - one_minus_t;
        t.powf(p - 1.0) * g(t) / q
    };
    total.add(integrate(stage, right, 0.0, s_max, opts)?);
    Ok(total)
}
