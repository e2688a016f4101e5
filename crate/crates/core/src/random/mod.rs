//! Randomized norm averages.
//!
//! `(E‖Σ ε_n x_n‖^q)^{1/q}` over Rademacher signs is computed by exhaustive
//! enumeration when there are at most `exact_cutoff` nonzero vectors and by
//! Monte Carlo otherwise. Steinhaus and Gaussian averages are always sampled
//! unless a closed form applies. The `H_p^rad` norm of a Dirichlet
//! polynomial averages `H_p` norms over sign patterns.

pub mod config;
pub mod estimate;
pub mod rng;

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dirichlet::{self, DirichletPolynomial};
use crate::spaces::{self, Element, SpaceSpec};
use crate::{Error, Result};

pub use config::{GridPolicy, SamplerConfig, MAX_EXACT_CUTOFF};
pub use estimate::{Estimate, MeanVar, Mode};

use estimate::{power, root, root_with_stderr};
use rng::{sample_rng, streams, torus_point};

const BLOCK: u64 = 1024;

/// Deterministic parallel fold over sample indices `0..n`.
///
/// Indices are processed in fixed blocks whose partial results are merged in
/// block order, so the outcome is independent of the thread count.
pub(crate) fn mc_fold<A, I, F, M>(n: u64, init: I, step: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let blocks = n.div_ceil(BLOCK);
    let parts: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                step(&mut acc, i);
            }
            acc
        })
        .collect();
    let mut acc = init();
    for p in parts {
        merge(&mut acc, p);
    }
    acc
}

pub(crate) fn check_moment(q: f64, name: &str) -> Result<()> {
    if q.is_nan() || q < 1.0 || q.is_infinite() {
        Err(Error::Domain(format!(
            "{name} = {q} must be a finite number ≥ 1"
        )))
    } else {
        Ok(())
    }
}

/// Validates the inputs and drops zero vectors, which never affect a sum.
fn nonzero<'a>(
    xs: &'a [Element],
    space: &SpaceSpec,
    cfg: &SamplerConfig,
) -> Result<Vec<&'a Element>> {
    space.validate()?;
    cfg.validate()?;
    for x in xs {
        space.conforms(x)?;
    }
    Ok(xs.iter().filter(|x| !x.is_zero()).collect())
}

/// Norm of `Σ c_n x_n` for a fixed family `x_n`.
///
/// Coordinate spaces are handled with a reusable buffer; function spaces
/// assemble the combination and integrate it with `inner` as budget.
pub(crate) struct Combiner<'a> {
    space: &'a SpaceSpec,
    xs: Vec<&'a Element>,
    inner: SamplerConfig,
}

/// Norm value, its deterministic error and how it was obtained.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormValue {
    pub value: f64,
    pub err: f64,
    pub mode: Mode,
}

impl<'a> Combiner<'a> {
    pub fn new(space: &'a SpaceSpec, xs: Vec<&'a Element>, cfg: &SamplerConfig) -> Self {
        let mut inner = cfg.clone();
        inner.samples = cfg.inner_samples;
        // Inner norms run once per outer point: no grid may cost more than
        // the Monte Carlo fallback with `inner_samples` points.
        inner.grid.max_points = inner.grid.max_points.min(1 << 16).min(cfg.inner_samples);
        inner.grid.rel_tol = inner.grid.rel_tol.max(1e-6);
        Combiner { space, xs, inner }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.space.dim().unwrap_or(0)]
    }

    /// `‖Σ c_n x_n‖`; `nested` keys the Monte Carlo stream of an inner
    /// function norm.
    pub fn norm(&self, coeffs: &[Complex64], buf: &mut [Complex64], nested: u64) -> NormValue {
        if self.space.dim().is_some() {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for (x, &c) in self.xs.iter().zip(coeffs) {
                if let Element::Coords(v) = x {
                    for (b, &xi) in buf.iter_mut().zip(v) {
                        *b += c * xi;
                    }
                }
            }
            return NormValue {
                value: spaces::coord_norm(self.space, buf),
                err: 0.0,
                mode: Mode::Exact,
            };
        }
        let mut acc = self.space.zero();
        for (x, &c) in self.xs.iter().zip(coeffs) {
            acc.axpy(c, x).expect("conformity checked on construction");
        }
        let mut inner = self.inner.clone();
        inner.seed = rng::derive_seed(self.inner.seed, streams::NESTED, nested);
        let e = spaces::norm_with(self.space, &acc, &inner).expect("validated space");
        NormValue {
            value: e.value,
            err: e.uncertainty(),
            mode: e.mode,
        }
    }
}

/// Sorted-order power mean of enumerated norms.
///
/// Sorting makes the result a function of the multiset of norms, which is
/// unchanged when any single vector is negated.
fn enumerated_power_mean(mut values: Vec<NormValue>, q: f64, patterns: u64) -> Estimate {
    values.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut acc = MeanVar::default();
    let mut err: f64 = 0.0;
    let mut mode = Mode::Exact;
    for v in &values {
        acc.push(power(v.value, q));
        err = err.max(v.err);
        mode = mode.join(v.mode);
    }
    let value = root(acc.mean, q);
    match mode {
        Mode::Exact => Estimate::exact(value),
        Mode::Quadrature => Estimate::quadrature(value, err, patterns),
        Mode::Mc => Estimate {
            value,
            stderr: 0.0,
            abs_error: err,
            samples_used: patterns,
            mode: Mode::Mc,
        },
    }
}

/// `(E‖Σ ε_n x_n‖^q)^{1/q}` over independent Rademacher signs.
///
/// Exact when at most `cfg.exact_cutoff` of the vectors are nonzero.
///
/// ```
/// use dirichlet_ruc::random::{rademacher_average, SamplerConfig};
/// use dirichlet_ruc::spaces::{Element, SpaceSpec};
/// let xs = [Element::real_coords(&[1.0]), Element::real_coords(&[1.0])];
/// let e = rademacher_average(&xs, &SpaceSpec::scalar(), 1.0, &SamplerConfig::default()).unwrap();
/// assert_eq!(e.value, 1.0); // (|2| + |0| + |0| + |-2|) / 4
/// ```
pub fn rademacher_average(
    xs: &[Element],
    space: &SpaceSpec,
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    check_moment(q, "q")?;
    let xs = nonzero(xs, space, cfg)?;
    let m = xs.len();
    if m == 0 {
        return Ok(Estimate::exact(0.0));
    }
    let comb = Combiner::new(space, xs, cfg);
    if m as u32 <= cfg.exact_cutoff {
        // ‖S‖ = ‖-S‖: fix the first sign.
        let patterns = 1u64 << (m - 1);
        let values: Vec<NormValue> = (0..patterns)
            .into_par_iter()
            .map_init(
                || (comb.scratch(), vec![Complex64::new(0.0, 0.0); m]),
                |(buf, coeffs), pat| {
                    coeffs[0] = Complex64::new(1.0, 0.0);
                    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
                        let neg = (pat >> (n - 1)) & 1 == 1;
                        *c = Complex64::new(if neg { -1.0 } else { 1.0 }, 0.0);
                    }
                    comb.norm(coeffs, buf, pat)
                },
            )
            .collect();
        return Ok(enumerated_power_mean(values, q, patterns));
    }
    let seed = cfg.seed;
    Ok(sampled_power_mean(
        &comb,
        q,
        cfg.samples as u64,
        |i, coeffs| {
            let mut rng = sample_rng(seed, streams::RADEMACHER, i);
            for c in coeffs.iter_mut() {
                *c = Complex64::new(if rng::sign(&mut rng) { -1.0 } else { 1.0 }, 0.0);
            }
        },
    ))
}

/// Monte Carlo `(E‖Σ c_n x_n‖^q)^{1/q}` with coefficients drawn by `draw`.
fn sampled_power_mean<D>(comb: &Combiner<'_>, q: f64, samples: u64, draw: D) -> Estimate
where
    D: Fn(u64, &mut [Complex64]) + Sync,
{
    let m = comb.len();
    let (acc, err, mode) = mc_fold(
        samples,
        || {
            (
                MeanVar::default(),
                0.0f64,
                Mode::Mc,
                comb.scratch(),
                vec![Complex64::new(0.0, 0.0); m],
            )
        },
        |(acc, err, mode, buf, coeffs), i| {
            draw(i, coeffs);
            let v = comb.norm(coeffs, buf, i);
            acc.push(power(v.value, q));
            *err = err.max(v.err);
            *mode = mode.join(v.mode);
        },
        |a, b| {
            a.0.merge(&b.0);
            a.1 = a.1.max(b.1);
            a.2 = a.2.join(b.2);
        },
    )
    .into_parts();
    let (value, se) = root_with_stderr(acc.mean, acc.stderr(), q);
    Estimate {
        value,
        stderr: se,
        abs_error: err,
        samples_used: acc.n,
        mode,
    }
}

trait IntoParts {
    fn into_parts(self) -> (MeanVar, f64, Mode);
}

impl<B, C> IntoParts for (MeanVar, f64, Mode, B, C) {
    fn into_parts(self) -> (MeanVar, f64, Mode) {
        (self.0, self.1, self.2)
    }
}

/// `(Σ ‖x_n‖²)^{1/2}`, with the element norms' errors added up.
fn square_sum_norm(xs: &[&Element], space: &SpaceSpec, cfg: &SamplerConfig) -> Result<Estimate> {
    let mut total = 0.0;
    let mut err = 0.0;
    let mut mode = Mode::Exact;
    for x in xs {
        let e = spaces::norm_with(space, x, cfg)?;
        total += e.value * e.value;
        err += e.uncertainty();
        mode = mode.join(e.mode);
    }
    let value = total.sqrt();
    Ok(match mode {
        Mode::Exact => Estimate::exact(value),
        _ => Estimate::quadrature(value, err, 0),
    })
}

/// Single-vector or closed-form shortcut shared by the rotation-invariant averages.
fn rotation_shortcut(
    xs: &[&Element],
    space: &SpaceSpec,
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Option<Estimate>> {
    match xs.len() {
        0 => Ok(Some(Estimate::exact(0.0))),
        _ if q == 2.0 && space.is_hilbertian() => square_sum_norm(xs, space, cfg).map(Some),
        _ => Ok(None),
    }
}

/// `(E‖Σ z_n x_n‖^q)^{1/q}` over independent uniform unimodular `z_n`.
pub fn steinhaus_average(
    xs: &[Element],
    space: &SpaceSpec,
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    check_moment(q, "q")?;
    let xs = nonzero(xs, space, cfg)?;
    if let Some(e) = rotation_shortcut(&xs, space, q, cfg)? {
        return Ok(e);
    }
    if xs.len() == 1 {
        // ‖z x‖ = ‖x‖ for |z| = 1.
        return spaces::norm_with(space, xs[0], cfg);
    }
    let comb = Combiner::new(space, xs, cfg);
    let seed = cfg.seed;
    Ok(sampled_power_mean(
        &comb,
        q,
        cfg.samples as u64,
        |i, coeffs| {
            let mut rng = sample_rng(seed, streams::STEINHAUS, i);
            for c in coeffs.iter_mut() {
                *c = torus_point(&mut rng).to_complex();
            }
        },
    ))
}

/// Which Gaussian variables drive [`gaussian_average_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaussianKind {
    /// Standard complex Gaussians, `E|γ|² = 1`.
    #[default]
    Complex,
    /// Standard real Gaussians.
    Real,
}

/// `(E‖Σ γ_n x_n‖^q)^{1/q}` over standard complex Gaussians.
pub fn gaussian_average(
    xs: &[Element],
    space: &SpaceSpec,
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    gaussian_average_with(xs, space, q, GaussianKind::Complex, cfg)
}

pub fn gaussian_average_with(
    xs: &[Element],
    space: &SpaceSpec,
    q: f64,
    kind: GaussianKind,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    check_moment(q, "q")?;
    let xs = nonzero(xs, space, cfg)?;
    if let Some(e) = rotation_shortcut(&xs, space, q, cfg)? {
        return Ok(e);
    }
    let comb = Combiner::new(space, xs, cfg);
    let seed = cfg.seed;
    Ok(sampled_power_mean(
        &comb,
        q,
        cfg.samples as u64,
        |i, coeffs| {
            let mut rng = sample_rng(seed, streams::GAUSSIAN, i);
            for c in coeffs.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                *c = match kind {
                    GaussianKind::Real => Complex64::new(re, 0.0),
                    GaussianKind::Complex => {
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                    }
                };
            }
        },
    ))
}

/// The `Rad(X)` norm `E‖Σ ε_n x_n‖`.
pub fn rad_norm(xs: &[Element], space: &SpaceSpec, cfg: &SamplerConfig) -> Result<Estimate> {
    rademacher_average(xs, space, 1.0, cfg)
}

/// `(E‖S‖^p)^{1/p} / E‖S‖` for `S = Σ ε_n x_n`; at least one by Jensen.
pub fn kahane_ratio(xs: &[Element], space: &SpaceSpec, p: f64, cfg: &SamplerConfig) -> Result<f64> {
    check_moment(p, "p")?;
    let num = rademacher_average(xs, space, p, cfg)?;
    let den = rademacher_average(xs, space, 1.0, cfg)?;
    if den.value <= 0.0 {
        return Err(Error::UndefinedRatio("all vectors are zero".into()));
    }
    Ok(num.value / den.value)
}

/// Both sides of `E‖Σ ε_n a_n x_n‖ ≤ (π/2) max|a_n| E‖Σ ε_n x_n‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionReport {
    pub lhs: Estimate,
    /// Already multiplied by `π/2`.
    pub rhs: Estimate,
    pub holds: bool,
}

/// Checks the contraction principle for multipliers `|a_n| ≤ 1`.
pub fn contraction_check(
    xs: &[Element],
    a: &[Complex64],
    space: &SpaceSpec,
    cfg: &SamplerConfig,
) -> Result<ContractionReport> {
    if a.len() != xs.len() {
        return Err(Error::Shape(format!(
            "{} multipliers for {} vectors",
            a.len(),
            xs.len()
        )));
    }
    if let Some(bad) = a.iter().find(|c| !(c.norm() <= 1.0 + 1e-12)) {
        return Err(Error::Precondition(format!(
            "multiplier {bad} has modulus above 1"
        )));
    }
    let scaled: Vec<Element> = xs.iter().zip(a).map(|(x, &c)| x.scaled(c)).collect();
    let lhs = rademacher_average(&scaled, space, 1.0, cfg)?;
    let base = rademacher_average(xs, space, 1.0, cfg)?;
    let rhs = Estimate {
        value: FRAC_PI_2 * base.value,
        stderr: FRAC_PI_2 * base.stderr,
        abs_error: FRAC_PI_2 * base.abs_error,
        ..base
    };
    let slack = 3.0 * lhs.stderr.hypot(rhs.stderr) + lhs.abs_error + rhs.abs_error;
    Ok(ContractionReport {
        lhs,
        rhs,
        holds: lhs.value <= rhs.value + slack,
    })
}

/// `‖D‖_{H_p^rad(X)} = E‖Σ ε_n x_n n^{-s}‖_{H_p(X)}`.
///
/// The sign average is exact when the support has at most
/// `cfg.exact_cutoff` nonzero terms and sampled with `cfg.outer_samples`
/// patterns otherwise. Every pattern is integrated on the same torus points,
/// so the reported standard error (the mean of the per-pattern errors, plus
/// the outer sampling error in quadrature) is a conservative delta-method
/// approximation.
pub fn hprad_norm(d: &DirichletPolynomial, p: f64, cfg: &SamplerConfig) -> Result<Estimate> {
    check_moment(p, "p")?;
    cfg.validate()?;
    let m = d.support().count();
    if m == 0 {
        return Ok(Estimate::exact(0.0));
    }
    if p == 2.0 && d.space().is_hilbertian() {
        // Parseval: every sign pattern has the same norm.
        return dirichlet::hp_norm(d, 2.0, cfg);
    }
    let (per_pattern, outer_sampled) = if m as u32 <= cfg.exact_cutoff {
        (
            dirichlet::sign_pattern_norms(d, p, &dirichlet::SignPatterns::all(m), cfg)?,
            false,
        )
    } else {
        let patterns = dirichlet::SignPatterns::sampled(m, cfg.outer_samples, cfg.seed);
        (dirichlet::sign_pattern_norms(d, p, &patterns, cfg)?, true)
    };
    let mut outer = MeanVar::default();
    let mut inner_se = MeanVar::default();
    let mut err = MeanVar::default();
    let mut mode = if outer_sampled { Mode::Mc } else { Mode::Exact };
    for e in &per_pattern {
        outer.push(e.value);
        inner_se.push(e.stderr);
        err.push(e.abs_error);
        mode = mode.join(e.mode);
    }
    let outer_se = if outer_sampled { outer.stderr() } else { 0.0 };
    Ok(Estimate {
        value: outer.mean,
        stderr: outer_se.hypot(inner_se.mean),
        abs_error: err.mean,
        samples_used: per_pattern
            .iter()
            .map(|e| e.samples_used)
            .max()
            .unwrap_or(0)
            * per_pattern.len() as u64,
        mode,
    })
}
