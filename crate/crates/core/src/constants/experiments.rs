//! Growth experiments behind the two counterexamples and the summing basis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::{self, PrimeAP, TorusPoint};
use crate::dirichlet::dirichlet_kernel_l1;
use crate::random::estimate::root_with_stderr;
use crate::random::rng::{sample_rng, streams, torus_point};
use crate::random::{mc_fold, Estimate, MeanVar, SamplerConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeApRow {
    pub n: usize,
    /// Progression of primes used as the frequency set.
    pub ap: PrimeAP,
    /// `‖Σ_{n∈A} w^n‖_{L_2} = √N`.
    pub lhs: Estimate,
    /// `‖Σ_{n∈A} w^n‖_{L_1}`, the Dirichlet kernel norm.
    pub rhs: Estimate,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeApTable {
    pub rows: Vec<PrimeApRow>,
    /// Lengths with no progression below the bound.
    pub skipped: Vec<usize>,
}

/// Compares `√N` with `‖Σ_{n∈A_N} w^n‖_{L_1(T)}` for progressions `A_N` of
/// `N` primes below `bound`.
///
/// On `A_N = {a + kd}` the sum is `w^a Σ_k (w^d)^k`, and `w ↦ w^d`
/// preserves Haar measure, so the `L_1` norm is that of the Dirichlet
/// kernel of order `N`. A bounded ratio would make the prime-indexed
/// monomials RUC in `L_1`; it grows like `√N / log N`.
pub fn experiment_prime_ap(lengths: &[usize], bound: u64) -> Result<PrimeApTable> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &n in lengths {
        let ap = match n {
            0 => {
                return Err(Error::Domain(
                    "progression length must be at least 1".into(),
                ))
            }
            1 => Some(PrimeAP {
                start: 2,
                step: 0,
                length: 1,
            }),
            _ if bound < n as u64 => None,
            _ => bohr::prime_ap_search(n, bound)?,
        };
        let Some(ap) = ap else {
            skipped.push(n);
            continue;
        };
        let lhs = Estimate::exact((n as f64).sqrt());
        let rhs = dirichlet_kernel_l1(n as u64)?;
        rows.push(PrimeApRow {
            n,
            ap,
            ratio: lhs.value / rhs.value,
            lhs,
            rhs,
        });
    }
    Ok(PrimeApTable { rows, skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LacunaryRow {
    pub n: u64,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub ratio: f64,
}

/// `‖Σ_{n≤N} w^n‖_{L_2} / ‖Σ_{n≤N} w^n‖_{L_1} = √N / L_1(N)` for each `N`.
///
/// This is the obstruction for the power series of the dyadic family:
/// its `n = 2^k` terms turn the Dirichlet series into a plain power series
/// in one prime variable, where signs cannot be averaged away.
pub fn experiment_lacunary_power(ns: &[u64]) -> Result<Vec<LacunaryRow>> {
    ns.iter()
        .map(|&n| {
            let rhs = dirichlet_kernel_l1(n)?;
            let lhs = Estimate::exact((n as f64).sqrt());
            Ok(LacunaryRow {
                n,
                ratio: lhs.value / rhs.value,
                lhs,
                rhs,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub n: u64,
    pub l1: Estimate,
    /// `(4/π²) ln N`.
    pub asymptotic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub rows: Vec<KernelRow>,
    /// Least-squares slope of `L_1(N)` against `ln N`.
    pub slope: f64,
}

/// Dirichlet kernel norms and their growth rate against `ln N`.
pub fn kernel_growth(ns: &[u64]) -> Result<KernelTable> {
    let rows: Vec<KernelRow> = ns
        .iter()
        .map(|&n| {
            Ok(KernelRow {
                n,
                l1: dirichlet_kernel_l1(n)?,
                asymptotic: 4.0 / (PI * PI) * (n as f64).ln(),
            })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.l1.value).collect();
    Ok(KernelTable {
        slope: least_squares_slope(&xs, &ys),
        rows,
    })
}

/// Slope of the least-squares line through `(x_i, y_i)`; NaN for fewer
/// than two distinct abscissae.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummingReport {
    /// `‖sup_k |Σ_{n=k}^m a_n n^{-s}|‖_{H_2}`.
    pub m: Estimate,
    /// `(Σ |a_n|²)^{1/2}`.
    pub l2: f64,
    /// Empirical maximal-function constant `M / ℓ_2(a)`.
    pub ratio: f64,
    /// `M + 3·stderr ≥ ℓ_2(a)`.
    pub holds: bool,
}

/// Monte Carlo estimate of the `H_2` norm of the maximal tail function
/// `sup_k |Σ_{n=k}^m a_n n^{-s}|`, the norm of `Σ a_n n^{-s} s_n` in
/// `H_2(ℓ_∞^m)` with the summing basis `s_n`.
///
/// Each sample point of the Bohr lift yields all tail sums at once. The
/// maximal function dominates `|Σ a_n n^{-s}|`, whose `H_2` norm is
/// `ℓ_2(a)`.
pub fn experiment_summing_basis(a: &[Complex64], cfg: &SamplerConfig) -> Result<SummingReport> {
    if a.is_empty() {
        return Err(Error::Domain("empty coefficient vector".into()));
    }
    cfg.validate()?;
    let m = a.len() as u64;
    let alphas: Vec<_> = (1..=m).map(bohr::factorize).collect::<Result<_>>()?;
    let vars = alphas.iter().map(|x| x.len()).max().unwrap_or(0);
    let seed = cfg.seed;
    let (acc, _) = mc_fold(
        cfg.samples as u64,
        || (MeanVar::default(), vec![TorusPoint::ONE; vars]),
        |(acc, z), i| {
            let mut rng = sample_rng(seed, streams::SUMMING, i);
            for t in z.iter_mut() {
                *t = torus_point(&mut rng);
            }
            let mut tail = Complex64::new(0.0, 0.0);
            let mut sup: f64 = 0.0;
            for (alpha, &an) in alphas.iter().zip(a).rev() {
                let w = bohr::monomial_eval(alpha, z).expect("enough coordinates");
                tail += an * w;
                sup = sup.max(tail.norm());
            }
            acc.push(sup * sup);
        },
        |x, y| x.0.merge(&y.0),
    );
    let (value, se) = root_with_stderr(acc.mean, acc.stderr(), 2.0);
    let l2 = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(SummingReport {
        m: Estimate::mc(value, se, acc.n),
        l2,
        ratio: value / l2,
        holds: value + 3.0 * se >= l2,
    })
}
