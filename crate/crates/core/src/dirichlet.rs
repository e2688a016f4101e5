//! Vector-valued Dirichlet polynomials `Σ x_n n^{-s}`, their Bohr lift to
//! the polytorus, and `H_p(X)` norm engines.
//!
//! The `H_p` norm of `D` is the `L_p` norm of the lifted polynomial
//! `Σ x_{n(α)} z^α` over the torus `T^k`, where `k` counts the primes that
//! divide some index in the support. Unused coordinates integrate out.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::{self, MultiIndex, TorusPoint};
use crate::quad::{grid_fold, grid_points, integrate_adaptive};
use crate::random::estimate::{power, root, root_with_stderr};
use crate::random::rng::{sample_rng, sign, streams, torus_point};
use crate::random::{check_moment, mc_fold, Combiner, Estimate, MeanVar, Mode, SamplerConfig};
use crate::spaces::{self, Element, SpaceSpec};
use crate::{Error, Result};

/// A finitely supported Dirichlet series with coefficients in a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletPolynomial {
    space: SpaceSpec,
    terms: BTreeMap<u64, Element>,
}

impl DirichletPolynomial {
    /// The zero polynomial.
    pub fn new(space: SpaceSpec) -> Result<Self> {
        space.validate()?;
        Ok(DirichletPolynomial {
            space,
            terms: BTreeMap::new(),
        })
    }

    /// Builds `Σ x_n n^{-s}`; repeated indices are rejected.
    pub fn from_terms<I>(space: SpaceSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Element)>,
    {
        let mut d = Self::new(space)?;
        for (n, x) in terms {
            if d.terms.contains_key(&n) {
                return Err(Error::Domain(format!("index n = {n} given twice")));
            }
            d.insert(n, x)?;
        }
        Ok(d)
    }

    /// Scalar polynomial `Σ a_n n^{-s}`.
    pub fn scalar<I>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        Self::from_terms(
            SpaceSpec::scalar(),
            coeffs.into_iter().map(|(n, a)| (n, Element::scalar(a))),
        )
    }

    /// Sets the coefficient of `n^{-s}`, replacing any previous one.
    pub fn insert(&mut self, n: u64, x: Element) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("Dirichlet indices start at 1".into()));
        }
        if n > bohr::MAX_INDEX {
            return Err(Error::Overflow(format!("index {n} exceeds 2^63 - 1")));
        }
        self.space.conforms(&x)?;
        self.terms.insert(n, x);
        Ok(())
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// All stored terms in increasing `n`, zero ones included.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Element)> {
        self.terms.iter().map(|(&n, x)| (n, x))
    }

    /// Indices carrying a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(&n, _)| n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Element::is_zero)
    }

    /// `x_n`, or the zero element when `n` is absent.
    pub fn coefficient(&self, n: u64) -> Element {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(|| self.space.zero())
    }

    /// Terms with `n ≤ big_n`.
    pub fn partial_sum(&self, big_n: u64) -> DirichletPolynomial {
        DirichletPolynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .range(..=big_n)
                .map(|(&n, x)| (n, x.clone()))
                .collect(),
        }
    }

    /// `D_σ = Σ x_n n^{-σ} n^{-s}`.
    pub fn vertical_translate(&self, sigma: f64) -> Result<DirichletPolynomial> {
        if sigma.is_nan() || sigma < 0.0 {
            return Err(Error::Domain(format!(
                "translation σ = {sigma} must be ≥ 0"
            )));
        }
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        Ok(DirichletPolynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&n, x)| (n, x.scaled(Complex64::new((n as f64).powf(-sigma), 0.0))))
                .collect(),
        })
    }

    pub fn scaled(&self, c: Complex64) -> DirichletPolynomial {
        DirichletPolynomial {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(&n, x)| (n, x.scaled(c))).collect(),
        }
    }

    /// Multiplies the coefficient of `n^{-s}` by `λ_n`; absent indices are
    /// treated as `λ_n = 1`.
    pub fn with_multipliers(&self, lambda: &BTreeMap<u64, Complex64>) -> DirichletPolynomial {
        DirichletPolynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&n, x)| {
                    (
                        n,
                        lambda.get(&n).map_or_else(|| x.clone(), |&c| x.scaled(c)),
                    )
                })
                .collect(),
        }
    }

    /// The Bohr lift `Σ x_n z^{α(n)}`.
    ///
    /// ```
    /// use dirichlet_ruc::dirichlet::DirichletPolynomial;
    /// use dirichlet_ruc::bohr::MultiIndex;
    /// use dirichlet_ruc::Complex64;
    /// let d = DirichletPolynomial::scalar([(6, Complex64::new(1.0, 0.0))]).unwrap();
    /// let lift = d.bohr_lift().unwrap();
    /// assert_eq!(lift.variables(), 2);
    /// assert!(lift.terms().any(|(a, _)| *a == MultiIndex::new(vec![1, 1])));
    /// ```
    pub fn bohr_lift(&self) -> Result<PolytorusPolynomial> {
        let mut terms = BTreeMap::new();
        for (&n, x) in &self.terms {
            terms.insert(bohr::factorize(n)?, x.clone());
        }
        let variables = terms.keys().map(MultiIndex::len).max().unwrap_or(0);
        Ok(PolytorusPolynomial {
            space: self.space.clone(),
            terms,
            variables,
        })
    }
}

/// `Σ_α x_α z^α` on the polytorus.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytorusPolynomial {
    space: SpaceSpec,
    terms: BTreeMap<MultiIndex, Element>,
    variables: usize,
}

impl PolytorusPolynomial {
    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Number of prime coordinates in use.
    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Element)> {
        self.terms.iter()
    }

    /// Inverse of [`DirichletPolynomial::bohr_lift`].
    pub fn to_dirichlet(&self) -> Result<DirichletPolynomial> {
        let mut out = DirichletPolynomial::new(self.space.clone())?;
        for (alpha, x) in &self.terms {
            out.insert(bohr::index_of(alpha)?, x.clone())?;
        }
        Ok(out)
    }

    /// Value at `z ∈ T^k`.
    pub fn eval(&self, z: &[TorusPoint]) -> Result<Element> {
        let mut acc = self.space.zero();
        for (alpha, x) in &self.terms {
            acc.axpy(bohr::monomial_eval(alpha, z)?, x)?;
        }
        Ok(acc)
    }

    /// `L_p` norm on a uniform tensor grid with `per_variable` points per
    /// coordinate, evaluated point by point through [`Self::eval`].
    ///
    /// Slow, sequential and independent of the engines behind [`hp_norm`];
    /// exact for `p = 2` once `per_variable` exceeds twice every degree.
    pub fn norm_on_grid(
        &self,
        p: f64,
        per_variable: usize,
        cfg: &SamplerConfig,
    ) -> Result<Estimate> {
        check_moment(p, "p")?;
        let k = self.variables;
        let total = per_variable
            .checked_pow(k as u32)
            .filter(|&t| t <= cfg.grid.max_points);
        let Some(total) = total else {
            return Err(Error::Resource(format!(
                "{per_variable}^{k} grid points exceed the budget"
            )));
        };
        let mut idx = vec![0usize; k];
        let mut z = vec![TorusPoint::ONE; k];
        let mut sum = 0.0;
        for _ in 0..total {
            for (t, &i) in z.iter_mut().zip(&idx) {
                *t = TorusPoint::from_fraction(i as i64, per_variable as u64);
            }
            let v = spaces::norm_with(&self.space, &self.eval(&z)?, cfg)?;
            sum += power(v.value, p);
            for i in idx.iter_mut() {
                *i += 1;
                if *i < per_variable {
                    break;
                }
                *i = 0;
            }
        }
        Ok(Estimate::quadrature(
            root(sum / total as f64, p),
            0.0,
            total as u64,
        ))
    }
}

/// How [`hp_norm_with`] evaluates the torus integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Parseval, a tensor grid or Monte Carlo, whichever applies first.
    #[default]
    Auto,
    /// Always sample.
    MonteCarlo,
}

/// `‖D‖_{H_p(X)}`.
///
/// Exact by Parseval when `p = 2` and `X` is Hilbertian, on a tensor grid
/// when `p = 2` with at most four prime variables, and by Monte Carlo over
/// independent uniform torus coordinates otherwise.
///
/// ```
/// use dirichlet_ruc::dirichlet::{hp_norm, DirichletPolynomial};
/// use dirichlet_ruc::random::SamplerConfig;
/// use dirichlet_ruc::Complex64;
/// let one = Complex64::new(1.0, 0.0);
/// let d = DirichletPolynomial::scalar((1..=4).map(|n| (n, one))).unwrap();
/// assert_eq!(hp_norm(&d, 2.0, &SamplerConfig::default()).unwrap().value, 2.0);
/// ```
pub fn hp_norm(d: &DirichletPolynomial, p: f64, cfg: &SamplerConfig) -> Result<Estimate> {
    hp_norm_with(d, p, cfg, Engine::Auto)
}

pub fn hp_norm_with(
    d: &DirichletPolynomial,
    p: f64,
    cfg: &SamplerConfig,
    engine: Engine,
) -> Result<Estimate> {
    check_moment(p, "p")?;
    cfg.validate()?;
    if d.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    if engine == Engine::Auto && p == 2.0 && d.space.is_hilbertian() {
        let sq: f64 = d
            .terms
            .values()
            .flat_map(|x| match x {
                Element::Coords(c) => c.iter().map(|v| v.norm_sqr()),
                Element::Trig(_) => unreachable!("function spaces are not Hilbertian here"),
            })
            .sum();
        return Ok(Estimate::exact(sq.sqrt()));
    }
    let lifted = Lifted::of(d)?;
    let single = SignPatterns::single();
    Ok(match engine {
        Engine::Auto => lifted.integrate_auto(p, &single, cfg),
        Engine::MonteCarlo => lifted.integrate(p, &single, &Points::Mc(streams::HP_NORM), cfg),
    }
    .remove(0))
}

/// Sign patterns `ε ∈ {±1}^m` over the nonzero support, in increasing `n`.
pub(crate) enum SignPatterns {
    /// Every pattern with `ε_1 = +1`; the others are their negatives.
    All {
        m: usize,
    },
    List(Vec<Vec<bool>>),
}

impl SignPatterns {
    fn single() -> Self {
        SignPatterns::All { m: 1 }
    }

    pub fn all(m: usize) -> Self {
        SignPatterns::All { m }
    }

    pub fn sampled(m: usize, count: usize, seed: u64) -> Self {
        SignPatterns::List(
            (0..count as u64)
                .map(|j| {
                    let mut rng = sample_rng(seed, streams::OUTER_SIGNS, j);
                    (0..m).map(|_| sign(&mut rng)).collect()
                })
                .collect(),
        )
    }

    fn count(&self) -> usize {
        match self {
            SignPatterns::All { m } => 1usize << m.saturating_sub(1),
            SignPatterns::List(v) => v.len(),
        }
    }

    fn negative(&self, j: usize, n: usize) -> bool {
        match self {
            SignPatterns::All { .. } => n > 0 && (j >> (n - 1)) & 1 == 1,
            SignPatterns::List(v) => v[j][n],
        }
    }
}

/// `H_p` norms of `Σ ε_n x_n n^{-s}` for each sign pattern, all integrated
/// on the same torus points.
pub(crate) fn sign_pattern_norms(
    d: &DirichletPolynomial,
    p: f64,
    patterns: &SignPatterns,
    cfg: &SamplerConfig,
) -> Result<Vec<Estimate>> {
    Ok(Lifted::of(d)?.integrate_auto(p, patterns, cfg))
}

enum Points {
    Grid(Vec<usize>),
    Mc(u64),
}

/// Nonzero terms of a lifted polynomial.
struct Lifted<'a> {
    space: &'a SpaceSpec,
    alphas: Vec<MultiIndex>,
    xs: Vec<&'a Element>,
    vars: usize,
}

#[derive(Clone)]
struct PatternAcc {
    mv: Vec<MeanVar>,
    fine: Vec<f64>,
    coarse: Vec<f64>,
    err: f64,
    mode: Mode,
}

impl PatternAcc {
    fn new(patterns: usize) -> Self {
        PatternAcc {
            mv: vec![MeanVar::default(); patterns],
            fine: vec![0.0; patterns],
            coarse: vec![0.0; patterns],
            err: 0.0,
            mode: Mode::Exact,
        }
    }

    fn merge(&mut self, other: &PatternAcc) {
        for (a, b) in self.mv.iter_mut().zip(&other.mv) {
            a.merge(b);
        }
        for (a, b) in self.fine.iter_mut().zip(&other.fine) {
            *a += b;
        }
        for (a, b) in self.coarse.iter_mut().zip(&other.coarse) {
            *a += b;
        }
        self.err = self.err.max(other.err);
        self.mode = self.mode.join(other.mode);
    }
}

impl<'a> Lifted<'a> {
    fn of(d: &'a DirichletPolynomial) -> Result<Self> {
        let mut alphas = Vec::new();
        let mut xs = Vec::new();
        for (&n, x) in &d.terms {
            if !x.is_zero() {
                alphas.push(bohr::factorize(n)?);
                xs.push(x);
            }
        }
        Ok(Self::new(&d.space, alphas, xs))
    }

    fn new(space: &'a SpaceSpec, alphas: Vec<MultiIndex>, xs: Vec<&'a Element>) -> Self {
        let vars = alphas.iter().map(MultiIndex::len).max().unwrap_or(0);
        Lifted {
            space,
            alphas,
            xs,
            vars,
        }
    }

    fn degrees(&self) -> Vec<u64> {
        (0..self.vars)
            .map(|j| {
                self.alphas
                    .iter()
                    .map(|a| a.get(j) as u64)
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    fn grid_for(&self, floor: usize, cfg: &SamplerConfig) -> Option<Vec<usize>> {
        let sizes: Option<Vec<usize>> = self
            .degrees()
            .into_iter()
            .map(|d| cfg.grid.size_for(d, floor))
            .collect();
        sizes.filter(|s| grid_points(s) <= cfg.grid.max_points)
    }

    /// Tensor grid for `p = 2` with at most four variables, Monte Carlo
    /// otherwise. With function-valued coefficients every point costs a
    /// nested norm, so the grid must also fit in `cfg.samples` points.
    fn integrate_auto(
        &self,
        p: f64,
        patterns: &SignPatterns,
        cfg: &SamplerConfig,
    ) -> Vec<Estimate> {
        if p == 2.0 && self.vars <= 4 {
            let nested = self.space.dim().is_none();
            if let Some(sizes) = self
                .grid_for(cfg.grid.polytorus_min, cfg)
                .filter(|s| !nested || grid_points(s) <= cfg.samples)
            {
                return self.integrate_refined(p, patterns, sizes, cfg);
            }
        }
        self.integrate(p, patterns, &Points::Mc(streams::HP_NORM), cfg)
    }

    /// Grid quadrature, doubling every size until the fine and coarse
    /// values agree to `cfg.grid.rel_tol` or the work would exceed
    /// `cfg.grid.max_work` norm evaluations.
    ///
    /// Only a Hilbertian target makes `‖f‖²` a trigonometric polynomial, on
    /// which the first grid is already exact; `‖f‖_{ℓ_1}²` has kinks and
    /// converges at the trapezoid rate.
    fn integrate_refined(
        &self,
        p: f64,
        patterns: &SignPatterns,
        mut sizes: Vec<usize>,
        cfg: &SamplerConfig,
    ) -> Vec<Estimate> {
        let count = patterns.count();
        loop {
            let est = self.integrate(p, patterns, &Points::Grid(sizes.clone()), cfg);
            let done = est
                .iter()
                .all(|e| e.abs_error <= cfg.grid.rel_tol * e.value);
            let next: Vec<usize> = sizes.iter().map(|s| s * 2).collect();
            // Nested function norms carry their own error; refining the outer grid cannot remove it.
            if done
                || self.space.dim().is_none()
                || grid_points(&next).saturating_mul(count)
                    > cfg.grid.max_work.max(grid_points(&sizes))
                || grid_points(&next) > cfg.grid.max_points
            {
                return est;
            }
            sizes = next;
        }
    }

    fn integrate(
        &self,
        p: f64,
        patterns: &SignPatterns,
        points: &Points,
        cfg: &SamplerConfig,
    ) -> Vec<Estimate> {
        let count = patterns.count();
        let m = self.xs.len();
        let comb = Combiner::new(self.space, self.xs.clone(), cfg);
        let zero = Complex64::new(0.0, 0.0);
        let init = || {
            (
                PatternAcc::new(count),
                vec![zero; m],
                vec![zero; m],
                comb.scratch(),
                vec![TorusPoint::ONE; self.vars],
            )
        };
        // Accumulates ‖Σ ε_n z^{α_n} x_n‖^p for every pattern at the point in `s.4`.
        let at_point = |s: &mut (
            PatternAcc,
            Vec<Complex64>,
            Vec<Complex64>,
            Vec<Complex64>,
            Vec<TorusPoint>,
        ),
                        key: u64,
                        coarse: Option<bool>| {
            let (acc, weights, coeffs, buf, z) = s;
            for (w, alpha) in weights.iter_mut().zip(&self.alphas) {
                let mut angle = TorusPoint::ONE;
                for (&e, t) in alpha.exponents().iter().zip(z.iter()) {
                    angle = angle.mul(t.pow(e as i64));
                }
                *w = angle.to_complex();
            }
            for j in 0..count {
                for (n, (c, &w)) in coeffs.iter_mut().zip(weights.iter()).enumerate() {
                    *c = if patterns.negative(j, n) { -w } else { w };
                }
                let v = comb.norm(
                    coeffs,
                    buf,
                    key.wrapping_mul(count as u64).wrapping_add(j as u64),
                );
                acc.err = acc.err.max(v.err);
                acc.mode = acc.mode.join(v.mode);
                let y = power(v.value, p);
                match coarse {
                    None => acc.mv[j].push(y),
                    Some(is_coarse) => {
                        acc.fine[j] += y;
                        if is_coarse {
                            acc.coarse[j] += y;
                        }
                    }
                }
            }
        };
        match points {
            Points::Grid(sizes) => {
                let steps: Vec<Vec<TorusPoint>> = sizes
                    .iter()
                    .map(|&g| {
                        (0..g)
                            .map(|k| TorusPoint::from_fraction(k as i64, g as u64))
                            .collect()
                    })
                    .collect();
                let s = grid_fold(
                    sizes,
                    init,
                    |s, idx, is_coarse| {
                        for (j, &k) in idx.iter().enumerate() {
                            s.4[j] = steps[j][k];
                        }
                        let key = idx
                            .iter()
                            .zip(sizes)
                            .fold(0u64, |a, (&k, &g)| a * g as u64 + k as u64);
                        at_point(s, key, Some(is_coarse));
                    },
                    |a, b| a.0.merge(&b.0),
                );
                let acc = s.0;
                let total = grid_points(sizes) as f64;
                let coarse_total: f64 = sizes.iter().map(|&g| (g / 2) as f64).product();
                (0..count)
                    .map(|j| {
                        let fine = root(acc.fine[j] / total, p);
                        let coarse = root(acc.coarse[j] / coarse_total, p);
                        let mut e = Estimate::quadrature(
                            fine,
                            (fine - coarse).abs() + acc.err,
                            total as u64,
                        );
                        if acc.mode == Mode::Mc {
                            e.mode = Mode::Mc;
                        }
                        e
                    })
                    .collect()
            }
            Points::Mc(stream) => {
                let seed = cfg.seed;
                let vars = self.vars;
                let s = mc_fold(
                    cfg.samples as u64,
                    init,
                    |s, i| {
                        let mut rng = sample_rng(seed, *stream, i);
                        for t in s.4.iter_mut().take(vars) {
                            *t = torus_point(&mut rng);
                        }
                        at_point(s, i, None);
                    },
                    |a, b| a.0.merge(&b.0),
                );
                let acc = s.0;
                acc.mv
                    .iter()
                    .map(|mv| {
                        let (v, se) = root_with_stderr(mv.mean, mv.stderr(), p);
                        let mut e = Estimate::mc(v, se, mv.n);
                        e.abs_error = acc.err;
                        e
                    })
                    .collect()
            }
        }
    }
}

/// `(∫_T ‖Σ_{n=1}^N x_n z^n‖^p dz)^{1/p}`, `x_n = xs[n-1]`.
///
/// Integrated on a uniform grid of at least `max(8N, 1024)` points, doubled
/// until the relative change drops below the grid tolerance; the first grid
/// is exact for `p = 2` in a Hilbertian space. Falls back to Monte Carlo when the grid would be too large.
pub fn circle_hp_norm(
    xs: &[Element],
    space: &SpaceSpec,
    p: f64,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    check_moment(p, "p")?;
    space.validate()?;
    cfg.validate()?;
    for x in xs {
        space.conforms(x)?;
    }
    let mut alphas = Vec::new();
    let mut kept = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        if !x.is_zero() {
            let n = u32::try_from(i + 1)
                .map_err(|_| Error::Overflow("too many circle terms".into()))?;
            alphas.push(MultiIndex::new(vec![n]));
            kept.push(x);
        }
    }
    if kept.is_empty() {
        return Ok(Estimate::exact(0.0));
    }
    let lifted = Lifted::new(space, alphas, kept);
    let single = SignPatterns::single();
    Ok(match lifted.grid_for(cfg.grid.circle_min, cfg) {
        Some(sizes) => lifted.integrate_refined(p, &single, sizes, cfg),
        None => lifted.integrate(p, &single, &Points::Mc(streams::CIRCLE), cfg),
    }
    .remove(0))
}

/// `‖Σ_{n=1}^N w^n‖_{L_1(T)} = (1/π) ∫_0^π |sin(Nθ/2) / sin(θ/2)| dθ`.
///
/// Each arc between consecutive zeros of the kernel is integrated
/// adaptively, so the total error stays below `1e-9`.
///
/// ```
/// use dirichlet_ruc::dirichlet::dirichlet_kernel_l1;
/// let v = dirichlet_kernel_l1(2).unwrap().value;
/// assert!((v - 4.0 / std::f64::consts::PI).abs() < 1e-12);
/// ```
pub fn dirichlet_kernel_l1(n: u64) -> Result<Estimate> {
    use std::f64::consts::PI;
    if n == 0 {
        return Err(Error::Domain("Dirichlet kernel needs N ≥ 1".into()));
    }
    if n == 1 {
        return Ok(Estimate::exact(1.0));
    }
    let nf = n as f64;
    let f = |t: f64| ((nf * t / 2.0).sin() / (t / 2.0).sin()).abs();
    let mut breaks: Vec<f64> = (0..=n / 2)
        .map(|k| 2.0 * PI * k as f64 / nf)
        .filter(|&t| t < PI)
        .collect();
    breaks.push(PI);
    let panels = breaks.len() - 1;
    let tol = 1e-10 / panels as f64;
    let (mut total, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let (v, e) = integrate_adaptive(f, w[0], w[1], tol);
        total += v;
        err += e;
    }
    Ok(Estimate::quadrature(total / PI, err / PI, panels as u64))
}
