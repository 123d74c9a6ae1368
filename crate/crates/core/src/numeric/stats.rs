//! Streaming moments and empirical-distribution helpers.

use serde::Serialize;

/// Welford accumulator; [`RunningStats::merge`] uses Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.n as f64 * w;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        (self.variance() / self.n as f64).sqrt()
    }

    pub fn summary(&self) -> SampleStats {
        SampleStats {
            n: self.n,
            mean: self.mean,
            variance: self.variance(),
            std_error: self.std_error(),
            histogram: None,
        }
    }
}

/// Equal-width histogram normalised to a density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins chosen by the Freedman–Diaconis rule (width `2·IQR·n^{−1/3}`),
    /// capped at `max_bins`.
    pub fn freedman_diaconis(sorted: &[f64], max_bins: usize) -> Histogram {
        assert!(!sorted.is_empty(), "histogram of an empty sample");
        let n = sorted.len();
        let lo = sorted[0];
        let hi = sorted[n - 1];
        let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
        let width = 2.0 * iqr / (n as f64).cbrt();
        let bins = if width > 0.0 && hi > lo {
            (((hi - lo) / width).ceil() as usize).clamp(1, max_bins.max(1))
        } else {
            1
        };
        let span = if hi > lo { hi - lo } else { 1.0 };
        let step = span / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + step * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in sorted {
            let idx = (((x - lo) / step) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(left, right, density)` triples.
    pub fn densities(&self) -> Vec<(f64, f64, f64)> {
        let n = self.total() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let (l, r) = (self.edges[i], self.edges[i + 1]);
                (l, r, c as f64 / (n * (r - l)))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

/// Linear-interpolated quantile of an ascending slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    }
}

/// Two-sided Kolmogorov–Smirnov distance `sup |F_n − F|` for an ascending sample.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}
