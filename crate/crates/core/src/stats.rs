//! Small statistics toolkit shared by the experiment modules: running
//! moments with exact-order merging, the Kolmogorov-Smirnov distance, and a
//! least-squares fit in log-log coordinates for empirical decay rates.

use crate::error::Error;
use crate::Result;

/// Streaming count / mean / sum-of-squared-deviations accumulator
/// (Welford updates, Chan merging).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    /// Combines two accumulators as if their samples had been seen in one
    /// pass.
    pub fn merge(&self, other: &RunningMoments) -> RunningMoments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let nf = count as f64;
        let mean = self.mean + delta * other.count as f64 / nf;
        let m2 =
            self.m2 + other.m2 + delta * delta * self.count as f64 * other.count as f64 / nf;
        RunningMoments { count, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sum_squared_deviations(&self) -> f64 {
        self.m2
    }

    /// Unbiased sample variance; zero when fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.std_dev() / (self.count as f64).sqrt()
        }
    }
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and the continuous distribution function `cdf`.
///
/// For sorted samples the statistic is
/// `max_i max(i/m - F(x_i), F(x_i) - (i-1)/m)`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / m - f;
        let below = f - i as f64 / m;
        sup = sup.max(above).max(below);
    }
    Ok(sup)
}

/// Result of a least-squares line through `(log x, log y)` points.
#[derive(Debug, Clone, Copy)]
pub struct LogLogFit {
    /// Slope: the fitted decay exponent.
    pub exponent: f64,
    /// Intercept in log space.
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `y ~ c * x^exponent` by least squares in log-log coordinates.
/// Needs at least three points with strictly positive coordinates.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 3 {
        return Err(Error::TooFewSamples {
            what: "log-log fit",
            have: points.len(),
            need: 3,
        });
    }
    for (index, &(x, y)) in points.iter().enumerate() {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::NonPositiveFitData {
                index,
                value: if x > 0.0 { y } else { x },
            });
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &logs {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit needs at least two distinct x"));
    }
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let ss_res = syy - exponent * sxy;
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(LogLogFit {
        exponent,
        intercept,
        r_squared,
    })
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
