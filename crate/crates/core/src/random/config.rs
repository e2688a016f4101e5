use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard ceiling on exact sign enumeration (2^24 patterns).
pub const MAX_EXACT_CUTOFF: u32 = 24;

/// How tensor grids are sized for torus quadrature.
///
/// A variable in which the integrand has degree `deg` gets
/// `max(factor · deg, min)` points, rounded up to an even count so that the
/// every-other-point subgrid can serve as a coarse comparison. Grids whose
/// total point count would exceed `max_points` are not built; the caller
/// falls back to Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridPolicy {
    pub factor: u64,
    /// Per-variable floor for `L_r(T^k)` element norms.
    pub function_min: usize,
    /// Per-variable floor for polytorus `H_2` quadrature.
    pub polytorus_min: usize,
    /// Floor for single-variable circle norms.
    pub circle_min: usize,
    pub max_points: usize,
    /// Cap on norm evaluations (points × sign patterns) when refining a
    /// polytorus or circle grid by doubling.
    pub max_work: usize,
    /// Stop refining once successive grids agree to this relative tolerance.
    pub rel_tol: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            factor: 8,
            function_min: 64,
            polytorus_min: 16,
            circle_min: 1024,
            max_points: 1 << 22,
            max_work: 1 << 20,
            rel_tol: 1e-9,
        }
    }
}

impl GridPolicy {
    /// Even grid size for a variable of the given degree.
    pub fn size_for(&self, degree: u64, floor: usize) -> Option<usize> {
        let raw = degree.checked_mul(self.factor)?.max(floor as u64).max(2);
        let even = raw.checked_add(raw % 2)?;
        usize::try_from(even).ok()
    }
}

/// Sampling and enumeration budget shared by every estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Monte Carlo sample count for torus integrals and random averages.
    pub samples: usize,
    /// Sign enumeration is exact for at most this many nonzero terms.
    pub exact_cutoff: u32,
    /// Sign patterns drawn when an outer sign average cannot be enumerated.
    pub outer_samples: usize,
    /// Samples for a norm computed inside another integral (nested `L_r` norms).
    pub inner_samples: usize,
    pub grid: GridPolicy,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            samples: 100_000,
            exact_cutoff: 20,
            outer_samples: 256,
            inner_samples: 1024,
            grid: GridPolicy::default(),
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_exact_cutoff(mut self, cutoff: u32) -> Self {
        self.exact_cutoff = cutoff;
        self
    }

    /// Disables quadrature grids so that torus integrals use Monte Carlo.
    pub fn monte_carlo_only(mut self) -> Self {
        self.grid.max_points = 0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".into()));
        }
        if self.outer_samples == 0 || self.inner_samples == 0 {
            return Err(Error::Domain(
                "outer and inner sample counts must be at least 1".into(),
            ));
        }
        if self.exact_cutoff > MAX_EXACT_CUTOFF {
            return Err(Error::Domain(format!(
                "exact_cutoff {} exceeds {MAX_EXACT_CUTOFF}",
                self.exact_cutoff
            )));
        }
        if self.grid.factor == 0 || !(self.grid.rel_tol >= 0.0) {
            return Err(Error::Domain(
                "grid factor must be positive and rel_tol non-negative".into(),
            ));
        }
        Ok(())
    }
}
