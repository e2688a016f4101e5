//! Derivative-free maximization of the RUC ratio over coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ruc_ratio, RatioReport};
use crate::dirichlet::DirichletPolynomial;
use crate::random::rng::{derive_seed, sample_rng, streams};
use crate::random::SamplerConfig;
use crate::spaces::{Element, SpaceSpec};
use crate::{Error, Result};

/// Random restarts of a compass search on coefficient moduli and phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Maximum number of sweeps over all coordinates per restart.
    pub iterations: usize,
    pub initial_step: f64,
    /// Step multiplier after a sweep without improvement.
    pub decay: f64,
    pub min_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 4,
            iterations: 20,
            initial_step: 0.5,
            decay: 0.5,
            min_step: 1e-2,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::Domain(
                "restarts and iterations must be at least 1".into(),
            ));
        }
        if !(self.decay > 0.0 && self.decay < 1.0)
            || !(self.initial_step > 0.0)
            || !(self.min_step > 0.0)
        {
            return Err(Error::Domain(
                "step schedule needs 0 < decay < 1 and positive steps".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Maximizing coefficients `a_n`, `n = 1..N`, with `max |a_n| = 1`.
    pub coefficients: Vec<Complex64>,
    pub best: RatioReport,
    /// Ratio at the all-ones starting point.
    pub start_ratio: f64,
    pub restart: usize,
    pub evaluations: usize,
    /// Always true: a finite search only bounds the constant from below.
    pub lower_bound: bool,
}

/// Polar coefficients `r_n e^{iφ_n}`.
#[derive(Clone)]
struct Point {
    r: Vec<f64>,
    phi: Vec<f64>,
}

impl Point {
    fn coefficients(&self) -> Vec<Complex64> {
        self.r
            .iter()
            .zip(&self.phi)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect()
    }

    /// Rescales so that the largest modulus is one; the ratio is homogeneous.
    fn normalize(&mut self) {
        let m = self.r.iter().copied().fold(0.0, f64::max);
        if m > 0.0 {
            self.r.iter_mut().for_each(|r| *r /= m);
        }
    }
}

struct Objective<'a> {
    space: &'a SpaceSpec,
    xs: &'a [Element],
    p: f64,
    cfg: &'a SamplerConfig,
}

impl Objective<'_> {
    fn eval(&self, pt: &Point) -> Result<Option<RatioReport>> {
        let terms = pt
            .coefficients()
            .into_iter()
            .zip(self.xs)
            .enumerate()
            .map(|(i, (a, x))| (i as u64 + 1, x.scaled(a)));
        let d = DirichletPolynomial::from_terms(self.space.clone(), terms)?;
        match ruc_ratio(&d, self.p, self.cfg) {
            Ok(r) => Ok(Some(r)),
            Err(Error::UndefinedRatio(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

struct Run {
    point: Point,
    best: RatioReport,
    evaluations: usize,
}

fn compass(obj: &Objective<'_>, start: Point, scfg: &SearchConfig) -> Result<Option<Run>> {
    let mut point = start;
    point.normalize();
    let Some(mut best) = obj.eval(&point)? else {
        return Ok(None);
    };
    let mut evaluations = 1;
    let mut step = scfg.initial_step;
    for _ in 0..scfg.iterations {
        if step < scfg.min_step {
            break;
        }
        let mut improved = false;
        for n in 0..point.r.len() {
            let moves = [
                (step, 0.0),
                (-step, 0.0),
                (0.0, step * PI),
                (0.0, -step * PI),
            ];
            let mut local: Option<(Point, RatioReport)> = None;
            for (dr, dphi) in moves {
                let mut cand = point.clone();
                cand.r[n] = (cand.r[n] + dr).clamp(0.0, 1.0);
                cand.phi[n] += dphi;
                cand.normalize();
                evaluations += 1;
                if let Some(r) = obj.eval(&cand)? {
                    let incumbent = local.as_ref().map_or(best.ratio, |l| l.1.ratio);
                    // Strict improvement only: ties keep the incumbent.
                    if r.ratio > incumbent {
                        local = Some((cand, r));
                    }
                }
            }
            if let Some((cand, r)) = local {
                point = cand;
                best = r;
                improved = true;
            }
        }
        if !improved {
            step *= scfg.decay;
        }
    }
    Ok(Some(Run {
        point,
        best,
        evaluations,
    }))
}

/// Lower bound for the RUC constant of `xs` (indexed `1..=N`) in `H_p(X)`.
///
/// Maximizes `ruc_ratio(Σ a_n x_n n^{-s})` over coefficients with
/// `max |a_n| = 1`. Restart 0 starts from `a = (1, …, 1)`, the others from
/// random points seeded by `(cfg.seed, restart)`. All evaluations share the
/// sampler seed, so comparisons between candidates use common random
/// numbers. The best restart wins; ties go to the lowest restart index.
pub fn ruc_constant_search(
    space: &SpaceSpec,
    xs: &[Element],
    p: f64,
    scfg: &SearchConfig,
    cfg: &SamplerConfig,
) -> Result<SearchOutcome> {
    scfg.validate()?;
    space.validate()?;
    for x in xs {
        space.conforms(x)?;
    }
    if xs.iter().all(Element::is_zero) {
        return Err(Error::Domain("search over an all-zero family".into()));
    }
    let n = xs.len();
    let obj = Objective { space, xs, p, cfg };
    let starts: Vec<Point> = (0..scfg.restarts)
        .map(|k| {
            if k == 0 {
                return Point {
                    r: vec![1.0; n],
                    phi: vec![0.0; n],
                };
            }
            let mut rng = sample_rng(
                derive_seed(cfg.seed, streams::SEARCH, k as u64),
                streams::SEARCH,
                0,
            );
            Point {
                r: (0..n).map(|_| rng.random::<f64>()).collect(),
                phi: (0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect(),
            }
        })
        .collect();
    let start_ratio = obj
        .eval(&starts[0])?
        .map(|r| r.ratio)
        .ok_or_else(|| Error::UndefinedRatio("all-ones combination vanishes".into()))?;
    let runs: Vec<Result<Option<Run>>> = starts
        .into_par_iter()
        .map(|s| compass(&obj, s, scfg))
        .collect();
    let mut winner: Option<(usize, Run)> = None;
    let mut evaluations = 1;
    for (k, run) in runs.into_iter().enumerate() {
        let Some(run) = run? else { continue };
        evaluations += run.evaluations;
        let better = winner
            .as_ref()
            .map_or(true, |(_, w)| run.best.ratio > w.best.ratio);
        if better {
            winner = Some((k, run));
        }
    }
    let (restart, run) = winner.expect("restart 0 has a defined ratio");
    Ok(SearchOutcome {
        coefficients: run.point.coefficients(),
        best: run.best,
        start_ratio,
        restart,
        evaluations,
        lower_bound: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::summing_basis;

    #[test]
    fn hilbert_search_stays_at_one() {
        let h = SpaceSpec::Hilbert { d: 2 };
        let xs = vec![
            Element::real_coords(&[1.0, 0.0]),
            Element::real_coords(&[1.0, 1.0]),
        ];
        let scfg = SearchConfig {
            restarts: 2,
            iterations: 3,
            ..SearchConfig::default()
        };
        let out = ruc_constant_search(&h, &xs, 2.0, &scfg, &SamplerConfig::default()).unwrap();
        assert_eq!(out.best.ratio, 1.0);
        assert_eq!(out.restart, 0);
        assert!(out.lower_bound);
    }

    #[test]
    fn summing_search_dominates_start() {
        let m = 4;
        let sup = SpaceSpec::Sup { d: m };
        let xs: Vec<Element> = (1..=m).map(|n| summing_basis(n, m)).collect();
        let scfg = SearchConfig {
            restarts: 2,
            iterations: 2,
            ..SearchConfig::default()
        };
        let mut cfg = SamplerConfig::default().with_samples(2_000).with_seed(4);
        cfg.grid.max_work = 1 << 12;
        let out = ruc_constant_search(&sup, &xs, 2.0, &scfg, &cfg).unwrap();
        assert!(out.best.ratio >= out.start_ratio);
        let max = out
            .coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_family_and_bad_config() {
        let s = SpaceSpec::scalar();
        let zero = vec![Element::real_coords(&[0.0])];
        let cfg = SamplerConfig::default();
        assert!(matches!(
            ruc_constant_search(&s, &zero, 2.0, &SearchConfig::default(), &cfg),
            Err(Error::Domain(_))
        ));
        let bad = SearchConfig {
            restarts: 0,
            ..SearchConfig::default()
        };
        assert!(ruc_constant_search(&s, &[Element::real_coords(&[1.0])], 2.0, &bad, &cfg).is_err());
    }
}
