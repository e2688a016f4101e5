//! Norm oracles for the finite-dimensional complex spaces the crate works in.
//!
//! Coordinate spaces (`ℓ_r^d`, Hilbert, sup-norm) have exact norms.
//! `L_r(T^k)` is represented by trigonometric polynomials; their norms are
//! computed on uniform tensor grids (exact for `r = 2`, refined by grid
//! doubling otherwise) and fall back to Monte Carlo when the exponents are
//! too large for a grid, as happens with lacunary exponents `2^n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::{self, TorusPoint};
use crate::quad::{grid_fold, grid_points};
use crate::random::estimate::{power, root, root_with_stderr, MeanVar};
use crate::random::rng::{sample_rng, streams, torus_point};
use crate::random::{mc_fold, Estimate, SamplerConfig};
use crate::{Error, Result};

/// A finite-dimensional complex normed space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum SpaceSpec {
    /// `ℓ_r^d`, `1 ≤ r ≤ ∞`.
    Sequence { r: f64, d: usize },
    /// `ℓ_2^d`.
    Hilbert { d: usize },
    /// `ℓ_∞^d`; the summing basis lives here.
    Sup { d: usize },
    /// Trigonometric polynomials in `k` variables with the `L_r(T^k)` norm.
    FunctionLr { r: f64, k: usize },
}

impl SpaceSpec {
    /// The scalar field, as the one-dimensional Hilbert space.
    pub fn scalar() -> Self {
        SpaceSpec::Hilbert { d: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::Sequence { r, d } => {
                check_exponent(r, true)?;
                check_positive(d, "dimension")
            }
            SpaceSpec::Hilbert { d } | SpaceSpec::Sup { d } => check_positive(d, "dimension"),
            SpaceSpec::FunctionLr { r, k } => {
                check_exponent(r, false)?;
                check_positive(k, "torus dimension")
            }
        }
    }

    /// Coordinate dimension, or `None` for function spaces.
    pub fn dim(&self) -> Option<usize> {
        match *self {
            SpaceSpec::Sequence { d, .. } | SpaceSpec::Hilbert { d } | SpaceSpec::Sup { d } => {
                Some(d)
            }
            SpaceSpec::FunctionLr { .. } => None,
        }
    }

    /// True when the norm comes from an inner product on coordinates.
    pub fn is_hilbertian(&self) -> bool {
        match *self {
            SpaceSpec::Hilbert { .. } => true,
            SpaceSpec::Sequence { r, d } => r == 2.0 || d == 1,
            SpaceSpec::Sup { d } => d == 1,
            SpaceSpec::FunctionLr { .. } => false,
        }
    }

    pub fn zero(&self) -> Element {
        match *self {
            SpaceSpec::FunctionLr { k, .. } => Element::Trig(TrigPolynomial::new(k)),
            _ => Element::Coords(vec![Complex64::new(0.0, 0.0); self.dim().unwrap_or(0)]),
        }
    }

    /// Checks that `x` is an element of this space.
    pub fn conforms(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (SpaceSpec::FunctionLr { k, .. }, Element::Trig(p)) => {
                if p.vars() == *k {
                    Ok(())
                } else {
                    Err(Error::Shape(format!(
                        "trigonometric polynomial in {} variables, space has {k}",
                        p.vars()
                    )))
                }
            }
            (SpaceSpec::FunctionLr { .. }, Element::Coords(_)) => Err(Error::Shape(
                "coordinate vector given for a function space".into(),
            )),
            (_, Element::Trig(_)) => Err(Error::Shape(
                "trigonometric polynomial given for a coordinate space".into(),
            )),
            (s, Element::Coords(c)) => {
                let d = s.dim().unwrap_or(0);
                if c.len() == d {
                    Ok(())
                } else {
                    Err(Error::Shape(format!(
                        "vector of length {}, space has dimension {d}",
                        c.len()
                    )))
                }
            }
        }
    }
}

fn check_exponent(r: f64, allow_inf: bool) -> Result<()> {
    if r.is_nan() || r < 1.0 || (!allow_inf && r.is_infinite()) {
        Err(Error::Domain(format!(
            "norm exponent r = {r} must lie in [1, ∞{}",
            if allow_inf { "]" } else { ")" }
        )))
    } else {
        Ok(())
    }
}

fn check_positive(d: usize, what: &str) -> Result<()> {
    if d == 0 {
        Err(Error::Domain(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Finite sum `Σ c_β w^β`, `β ∈ Z^k`, on the `k`-torus.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<i64>, Complex64>,
}

impl TrigPolynomial {
    pub fn new(vars: usize) -> Self {
        TrigPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial; short exponent vectors are padded with zeros and
    /// repeated exponents are summed.
    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut p = TrigPolynomial::new(vars);
        for (beta, c) in terms {
            p.add_term(beta, c)?;
        }
        Ok(p)
    }

    /// The monomial `c · w^β`.
    pub fn monomial(vars: usize, beta: Vec<i64>, c: Complex64) -> Result<Self> {
        Self::from_terms(vars, [(beta, c)])
    }

    pub fn add_term(&mut self, mut beta: Vec<i64>, c: Complex64) -> Result<()> {
        if beta.len() > self.vars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in a polynomial of {} variables",
                beta.len(),
                self.vars
            )));
        }
        beta.resize(self.vars, 0);
        *self.terms.entry(beta).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], Complex64)> {
        self.terms.iter().map(|(b, &c)| (b.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.norm_sqr() == 0.0)
    }

    /// Largest `|β_j|` per variable over the nonzero terms.
    pub fn max_abs_exponents(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.vars];
        for (beta, c) in &self.terms {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (m, b) in out.iter_mut().zip(beta) {
                *m = (*m).max(b.unsigned_abs());
            }
        }
        out
    }

    /// `(Σ |c_β|²)^{1/2}`, the `L_2` norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        TrigPolynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(b, &v)| (b.clone(), v * c))
                .collect(),
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: Complex64, other: &TrigPolynomial) {
        debug_assert_eq!(self.vars, other.vars);
        for (b, &v) in &other.terms {
            *self
                .terms
                .entry(b.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += c * v;
        }
    }

    /// Value at `w`, with exponents reduced in fixed-point angle arithmetic.
    pub fn eval(&self, w: &[TorusPoint]) -> Result<Complex64> {
        if w.len() < self.vars {
            return Err(Error::Arity {
                needed: self.vars,
                got: w.len(),
            });
        }
        Ok(self.eval_unchecked(w))
    }

    fn eval_unchecked(&self, w: &[TorusPoint]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (beta, &c) in &self.terms {
            let mut angle = TorusPoint::ONE;
            for (&b, t) in beta.iter().zip(w) {
                angle = angle.mul(t.pow(b));
            }
            acc += c * angle.to_complex();
        }
        acc
    }
}

/// An element of a [`SpaceSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Element {
    Coords(Vec<Complex64>),
    Trig(TrigPolynomial),
}

impl Element {
    /// A scalar, as an element of the one-dimensional space.
    pub fn scalar(c: Complex64) -> Self {
        Element::Coords(vec![c])
    }

    pub fn real_coords(xs: &[f64]) -> Self {
        Element::Coords(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Coords(c) => c.iter().all(|v| v.norm_sqr() == 0.0),
            Element::Trig(p) => p.is_zero(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Element {
        match self {
            Element::Coords(v) => Element::Coords(v.iter().map(|&x| x * c).collect()),
            Element::Trig(p) => Element::Trig(p.scaled(c)),
        }
    }

    /// `self += c · other`; both must live in the same space.
    pub fn axpy(&mut self, c: Complex64, other: &Element) -> Result<()> {
        match (self, other) {
            (Element::Coords(a), Element::Coords(b)) if a.len() == b.len() => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += c * y;
                }
                Ok(())
            }
            (Element::Trig(a), Element::Trig(b)) if a.vars == b.vars => {
                a.axpy(c, b);
                Ok(())
            }
            _ => Err(Error::Shape("elements of different spaces".into())),
        }
    }
}

/// Exact norm of a coordinate vector in a coordinate space.
pub(crate) fn coord_norm(space: &SpaceSpec, coords: &[Complex64]) -> f64 {
    match *space {
        SpaceSpec::Hilbert { .. } => coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        SpaceSpec::Sup { .. } => coords.iter().map(|c| c.norm()).fold(0.0, f64::max),
        SpaceSpec::Sequence { r, .. } => {
            if r.is_infinite() {
                coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
            } else if r == 2.0 {
                coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
            } else if r == 1.0 {
                coords.iter().map(|c| c.norm()).sum()
            } else {
                coords
                    .iter()
                    .map(|c| c.norm().powf(r))
                    .sum::<f64>()
                    .powf(1.0 / r)
            }
        }
        SpaceSpec::FunctionLr { .. } => unreachable!("coordinate norm of a function space"),
    }
}

/// `‖x‖_X` with the default sampler configuration.
///
/// ```
/// use dirichlet_ruc::spaces::{norm, Element, SpaceSpec};
/// let l1 = SpaceSpec::Sequence { r: 1.0, d: 3 };
/// let v = norm(&l1, &Element::real_coords(&[1.0, 1.0, 1.0])).unwrap();
/// assert_eq!(v.value, 3.0);
/// ```
pub fn norm(space: &SpaceSpec, x: &Element) -> Result<Estimate> {
    norm_with(space, x, &SamplerConfig::default())
}

/// `‖x‖_X`; `cfg` governs the grids and the Monte Carlo fallback used for
/// `L_r(T^k)` elements.
pub fn norm_with(space: &SpaceSpec, x: &Element, cfg: &SamplerConfig) -> Result<Estimate> {
    space.validate()?;
    space.conforms(x)?;
    match (space, x) {
        (SpaceSpec::FunctionLr { r, .. }, Element::Trig(p)) => function_norm(*r, p, cfg),
        (_, Element::Coords(c)) => Ok(Estimate::exact(coord_norm(space, c))),
        _ => unreachable!("conformity checked above"),
    }
}

/// `‖p‖_{L_r(T^k)}`.
fn function_norm(r: f64, p: &TrigPolynomial, cfg: &SamplerConfig) -> Result<Estimate> {
    if p.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let policy = &cfg.grid;
    let base: Option<Vec<usize>> = p
        .max_abs_exponents()
        .into_iter()
        .map(|d| policy.size_for(d, policy.function_min))
        .collect();
    let feasible = |s: &Vec<usize>| grid_points(s) <= policy.max_points;
    match base {
        Some(sizes) if feasible(&sizes) => {
            let (mut fine, mut coarse) = grid_lr(p, &sizes, r);
            let mut sizes = sizes;
            // r = 2 is exact on any grid finer than twice the degree.
            while r != 2.0 && (fine - coarse).abs() > policy.rel_tol * fine {
                let next: Vec<usize> = sizes.iter().map(|s| s * 2).collect();
                if !feasible(&next) {
                    break;
                }
                sizes = next;
                (fine, coarse) = grid_lr(p, &sizes, r);
            }
            Ok(Estimate::quadrature(
                fine,
                (fine - coarse).abs(),
                grid_points(&sizes) as u64,
            ))
        }
        _ if r == 2.0 => Ok(Estimate::exact(p.l2_norm())),
        _ => Ok(function_norm_mc(r, p, cfg.seed, cfg.samples)),
    }
}

/// `(fine, coarse)` grid values of `‖p‖_r`.
fn grid_lr(p: &TrigPolynomial, sizes: &[usize], r: f64) -> (f64, f64) {
    let roots: Vec<Vec<Complex64>> = sizes
        .iter()
        .map(|&g| {
            (0..g)
                .map(|k| TorusPoint::from_fraction(k as i64, g as u64).to_complex())
                .collect()
        })
        .collect();
    let terms: Vec<(Vec<u64>, Complex64)> = p
        .terms()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(beta, c)| {
            let reduced = beta
                .iter()
                .zip(sizes)
                .map(|(&b, &g)| b.rem_euclid(g as i64) as u64)
                .collect();
            (reduced, c)
        })
        .collect();
    let (fine, coarse) = grid_fold(
        sizes,
        || (0.0f64, 0.0f64),
        |acc, idx, is_coarse| {
            let mut v = Complex64::new(0.0, 0.0);
            for (beta, c) in &terms {
                let mut m = *c;
                for (j, (&b, &k)) in beta.iter().zip(idx).enumerate() {
                    let g = sizes[j] as u64;
                    m *= roots[j][((b * k as u64) % g) as usize];
                }
                v += m;
            }
            let w = power(v.norm(), r);
            acc.0 += w;
            if is_coarse {
                acc.1 += w;
            }
        },
        |a, b| {
            a.0 += b.0;
            a.1 += b.1;
        },
    );
    let total = grid_points(sizes) as f64;
    let coarse_total = sizes.iter().map(|&s| (s / 2) as f64).product::<f64>();
    (root(fine / total, r), root(coarse / coarse_total, r))
}

/// Monte Carlo `‖p‖_r` over independent uniform torus coordinates.
pub(crate) fn function_norm_mc(r: f64, p: &TrigPolynomial, seed: u64, samples: usize) -> Estimate {
    let vars = p.vars();
    let acc = mc_fold(
        samples as u64,
        || (MeanVar::default(), vec![TorusPoint::ONE; vars]),
        |(acc, w), i| {
            let mut rng = sample_rng(seed, streams::FUNCTION_NORM, i);
            for t in w.iter_mut() {
                *t = torus_point(&mut rng);
            }
            acc.push(power(p.eval_unchecked(w).norm(), r));
        },
        |a, b| a.0.merge(&b.0),
    )
    .0;
    let (v, se) = root_with_stderr(acc.mean, acc.stderr(), r);
    Estimate::mc(v, se, acc.n)
}

/// `Σ a_n s_n` for the summing basis `s_n = e_1 + ⋯ + e_n` of `ℓ_∞^m`,
/// together with its norm `sup_k |Σ_{n=k}^m a_n|`.
///
/// The norm is computed from the tail-sum formula, independently of the
/// assembled coordinates; both agree exactly.
///
/// ```
/// use dirichlet_ruc::spaces::summing_combination;
/// use dirichlet_ruc::Complex64;
/// let a = [1.0, -1.0, 1.0].map(|x| Complex64::new(x, 0.0));
/// let (_, n) = summing_combination(&a).unwrap();
/// assert_eq!(n, 1.0);
/// ```
pub fn summing_combination(a: &[Complex64]) -> Result<(Element, f64)> {
    if a.is_empty() {
        return Err(Error::Domain(
            "summing combination of an empty coefficient vector".into(),
        ));
    }
    let m = a.len();
    let mut coords = vec![Complex64::new(0.0, 0.0); m];
    for (n, &an) in a.iter().enumerate() {
        for c in coords.iter_mut().take(n + 1) {
            *c += an;
        }
    }
    let sup = (0..m)
        .map(|k| {
            a[k..]
                .iter()
                .fold(Complex64::new(0.0, 0.0), |s, &x| s + x)
                .norm()
        })
        .fold(0.0, f64::max);
    Ok((Element::Coords(coords), sup))
}

/// The summing basis vector `s_n` of `ℓ_∞^m` (1-based `n`).
pub fn summing_basis(n: usize, m: usize) -> Element {
    Element::Coords(
        (0..m)
            .map(|i| Complex64::new(if i < n { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    )
}

/// Standard basis vector `e_i` (1-based) of a `d`-dimensional coordinate space.
pub fn basis_vector(i: usize, d: usize) -> Element {
    Element::Coords(
        (0..d)
            .map(|j| Complex64::new(if j + 1 == i { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    )
}

/// Evaluates an `L_r(T^k)` element at `w`.
pub fn trig_eval(x: &Element, w: &[TorusPoint]) -> Result<Complex64> {
    match x {
        Element::Trig(p) => p.eval(w),
        Element::Coords(_) => Err(Error::Shape(
            "trig_eval needs a trigonometric polynomial".into(),
        )),
    }
}

fn two_pow(n: u64) -> Result<i64> {
    if n > 62 {
        return Err(Error::Overflow(format!(
            "lacunary exponent 2^{n} exceeds 2^62"
        )));
    }
    Ok(1i64 << n)
}

fn is_prime(n: u64) -> Result<bool> {
    Ok(bohr::shared_table(n)?.is_prime(n).unwrap_or(false))
}

/// Vectors `x_n ∈ L_r(T^2)`, `1 ≤ n ≤ n_max`: `w_1^n` for prime `n` and
/// `w_2^{2^n}` otherwise. With `r = 1` their Dirichlet series is RUC in
/// `H_2` while the power series is not.
pub fn prime_lacunary_family(n_max: u64, r: f64) -> Result<(SpaceSpec, Vec<(u64, Element)>)> {
    let space = SpaceSpec::FunctionLr { r, k: 2 };
    space.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let beta = if is_prime(n)? {
            vec![n as i64, 0]
        } else {
            vec![0, two_pow(n)?]
        };
        out.push((n, Element::Trig(TrigPolynomial::monomial(2, beta, one)?)));
    }
    Ok((space, out))
}

/// Vectors `x_n ∈ L_r(T^2)`: `w_1^k` when `n = 2^k`, `w_2^{2^n}` otherwise.
/// Here the power series is RUC in `H_2` while the Dirichlet series is not.
pub fn dyadic_lacunary_family(n_max: u64, r: f64) -> Result<(SpaceSpec, Vec<(u64, Element)>)> {
    let space = SpaceSpec::FunctionLr { r, k: 2 };
    space.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let beta = if n.is_power_of_two() {
            vec![n.trailing_zeros() as i64, 0]
        } else {
            vec![0, two_pow(n)?]
        };
        out.push((n, Element::Trig(TrigPolynomial::monomial(2, beta, one)?)));
    }
    Ok((space, out))
}

/// Functions `f_n(w) = w^{α(n)}` in `L_r(T^k)`, `1 ≤ n ≤ m`, where `k` is
/// the number of primes up to `m`.
pub fn prime_monomial_family(m: u64, r: f64) -> Result<(SpaceSpec, Vec<(u64, Element)>)> {
    let k = bohr::primes_up_to(m.max(2))?.len();
    let space = SpaceSpec::FunctionLr { r, k };
    space.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for n in 1..=m {
        let beta: Vec<i64> = bohr::factorize(n)?
            .exponents()
            .iter()
            .map(|&e| e as i64)
            .collect();
        out.push((n, Element::Trig(TrigPolynomial::monomial(k, beta, one)?)));
    }
    Ok((space, out))
}
