use std::fmt;

use serde::{Deserialize, Serialize};

/// How an [`Estimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Quadrature,
    Mc,
}

impl Mode {
    /// The weaker of two modes (exact < quadrature < mc).
    pub fn join(self, other: Mode) -> Mode {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Quadrature => "quadrature",
            Mode::Mc => "mc",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A numerical result with its uncertainty.
///
/// `stderr` is the Monte Carlo standard error and is zero unless the mode is
/// [`Mode::Mc`]. `abs_error` carries a deterministic error estimate
/// (quadrature refinement, or the error of norms computed inside an
/// integrand) and is zero in exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub abs_error: f64,
    pub samples_used: u64,
    pub mode: Mode,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            stderr: 0.0,
            abs_error: 0.0,
            samples_used: 0,
            mode: Mode::Exact,
        }
    }

    pub fn quadrature(value: f64, abs_error: f64, points: u64) -> Self {
        Estimate {
            value,
            stderr: 0.0,
            abs_error,
            samples_used: points,
            mode: Mode::Quadrature,
        }
    }

    pub fn mc(value: f64, stderr: f64, samples: u64) -> Self {
        Estimate {
            value,
            stderr,
            abs_error: 0.0,
            samples_used: samples,
            mode: Mode::Mc,
        }
    }

    /// `stderr + abs_error`: the scale against which comparisons are judged.
    pub fn uncertainty(&self) -> f64 {
        self.stderr + self.abs_error
    }
}

/// Running mean and variance (Welford), mergeable in a fixed order.
///
/// The running-mean update leaves the mean unchanged when a value equal to
/// it is pushed, so averaging identical values is exact.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanVar {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &MeanVar) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = if delta == 0.0 {
            self.mean
        } else {
            self.mean + delta * (other.n as f64 / n as f64)
        };
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        self.mean = mean;
        self.n = n;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// `m^{1/q}` with its delta-method standard error, given the standard error
/// `se` of `m`.
pub fn root_with_stderr(m: f64, se: f64, q: f64) -> (f64, f64) {
    if m <= 0.0 {
        return (0.0, 0.0);
    }
    let v = root(m, q);
    (v, v / (q * m) * se)
}

/// `m^{1/q}`, exact for `q ∈ {1, 2}`.
pub fn root(m: f64, q: f64) -> f64 {
    if q == 1.0 {
        m
    } else if q == 2.0 {
        m.sqrt()
    } else {
        m.powf(1.0 / q)
    }
}

/// `x^q`, exact for `q ∈ {1, 2}`.
pub fn power(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else if q == 2.0 {
        x * x
    } else {
        x.powf(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 7.25, 0.5];
        let mut acc = MeanVar::default();
        xs.iter().for_each(|&x| acc.push(x));
        let mean = xs.iter().sum::<f64>() / 6.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 5.0;
        assert!((acc.mean - mean).abs() < 1e-14);
        assert!((acc.variance() - var).abs() < 1e-12);

        let mut a = MeanVar::default();
        let mut b = MeanVar::default();
        xs[..2].iter().for_each(|&x| a.push(x));
        xs[2..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - mean).abs() < 1e-14);
        assert!((a.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn constant_stream_mean_is_exact() {
        let mut acc = MeanVar::default();
        for _ in 0..1000 {
            acc.push(0.1);
        }
        assert_eq!(acc.mean, 0.1);
        assert_eq!(acc.variance(), 0.0);
        let mut other = MeanVar::default();
        other.push(0.1);
        acc.merge(&other);
        assert_eq!(acc.mean, 0.1);
    }

    #[test]
    fn mode_join_is_weakest() {
        assert_eq!(Mode::Exact.join(Mode::Quadrature), Mode::Quadrature);
        assert_eq!(Mode::Mc.join(Mode::Exact), Mode::Mc);
        assert_eq!(Mode::Mc.to_string(), "mc");
    }
}
