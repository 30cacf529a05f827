//! Monte Carlo estimators for sampled configurations and goodness-of-fit
//! statistics against exact predictions.

use crate::error::{domain, Result};
use crate::model::BeadConfiguration;

/// Mergeable per-bin tallies of particle counts on one line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineTally {
    pub line: usize,
    pub bins: usize,
    pub configs: u64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl LineTally {
    pub fn new(line: usize, bins: usize) -> Result<Self> {
        if bins == 0 {
            return domain("need at least one bin");
        }
        Ok(Self {
            line,
            bins,
            configs: 0,
            sum: vec![0.0; bins],
            sum_sq: vec![0.0; bins],
        })
    }

    pub fn add(&mut self, config: &BeadConfiguration) {
        let mut counts = vec![0u32; self.bins];
        for &x in config.line(self.line) {
            counts[bin_of(x, self.bins)] += 1;
        }
        for (i, c) in counts.into_iter().enumerate() {
            let c = c as f64;
            self.sum[i] += c;
            self.sum_sq[i] += c * c;
        }
        self.configs += 1;
    }

    pub fn merge(&mut self, other: &LineTally) -> Result<()> {
        if self.line != other.line || self.bins != other.bins {
            return domain("cannot merge tallies of different shape");
        }
        for i in 0..self.bins {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self.configs += other.configs;
        Ok(())
    }

    pub fn histogram(&self) -> Result<Histogram> {
        if self.configs == 0 {
            return domain("no configurations tallied");
        }
        let n = self.configs as f64;
        let width = 1.0 / self.bins as f64;
        let mut density = Vec::with_capacity(self.bins);
        let mut std_err = Vec::with_capacity(self.bins);
        for i in 0..self.bins {
            let mean = self.sum[i] / n;
            let var = (self.sum_sq[i] / n - mean * mean).max(0.0);
            density.push(mean / width);
            std_err.push((var / n).sqrt() / width);
        }
        Ok(Histogram {
            edges: (0..=self.bins).map(|i| i as f64 * width).collect(),
            density,
            std_err,
            configs: self.configs,
        })
    }
}

fn bin_of(x: f64, bins: usize) -> usize {
    ((x * bins as f64) as usize).min(bins - 1)
}

/// Particle density per unit length per configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    /// Standard error of each bin's density.
    pub std_err: Vec<f64>,
    pub configs: u64,
}

impl Histogram {
    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    pub fn integral(&self) -> f64 {
        self.density.iter().zip(self.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum()
    }
}

pub fn empirical_line_density(configs: &[BeadConfiguration], t: usize, bins: usize) -> Result<Histogram> {
    if configs.is_empty() {
        return domain("no configurations");
    }
    let mut tally = LineTally::new(t, bins)?;
    for c in configs {
        tally.add(c);
    }
    tally.histogram()
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n - F|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return domain("no samples");
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// The 99% asymptotic KS band `1.63/√n`.
pub fn ks_band_99(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Regularised incomplete beta `I_x(a, b)`, the Beta(a,b) CDF.
pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        statrs::function::beta::beta_reg(a, b, x)
    }
}

/// A half-open interval `[lo, hi)` on one line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub line: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Cell {
    pub fn new(line: usize, lo: f64, hi: f64) -> Self {
        Self { line, lo, hi }
    }

    fn count(&self, c: &BeadConfiguration) -> usize {
        c.line(self.line).iter().filter(|&&x| self.lo <= x && x < self.hi).count()
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if self.std_err == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_err
        }
    }
}

/// Estimates `∫_A ∫_B ρ₂`: the mean of `N_A N_B`, with the diagonal
/// `N_{A∩B}` removed when the cells share a line.
pub fn pair_correlation_estimate(configs: &[BeadConfiguration], a: Cell, b: Cell) -> Result<Estimate> {
    if configs.is_empty() {
        return domain("no configurations");
    }
    let overlap = (a.line == b.line).then(|| Cell::new(a.line, a.lo.max(b.lo), a.hi.min(b.hi)));
    let vals: Vec<f64> = configs
        .iter()
        .map(|c| {
            let na = a.count(c) as f64;
            let nb = b.count(c) as f64;
            let diag = overlap.map_or(0.0, |o| if o.lo < o.hi { o.count(c) as f64 } else { 0.0 });
            na * nb - diag
        })
        .collect();
    Ok(mean_estimate(&vals))
}

/// Estimates `∫_A ρ₁`.
pub fn count_estimate(configs: &[BeadConfiguration], a: Cell) -> Result<Estimate> {
    if configs.is_empty() {
        return domain("no configurations");
    }
    let vals: Vec<f64> = configs.iter().map(|c| a.count(c) as f64).collect();
    Ok(mean_estimate(&vals))
}

fn mean_estimate(vals: &[f64]) -> Estimate {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    Estimate {
        mean,
        std_err: (var / n).sqrt(),
    }
}
