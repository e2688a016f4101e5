//! Primes, the `n ↔ α(n)` correspondence and fixed-point torus points.
//!
//! Every positive integer `n = p_1^{α_1} ⋯ p_m^{α_m}` corresponds to the
//! finitely supported exponent sequence `α(n)`, and the Dirichlet monomial
//! `n^{-s}` corresponds to the polytorus monomial `z^{α(n)}`. This module
//! owns that correspondence together with the torus arithmetic used to
//! evaluate monomials.
//!
//! Torus points are stored as 64-bit fixed-point fractions of a full turn,
//! so `z^k` is an exact wrapping multiplication of the angle. This keeps
//! lacunary exponents such as `2^60` meaningful, where a floating-point angle
//! would have lost every significant bit.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest integer accepted by [`factorize`] and produced by [`index_of`].
pub const MAX_INDEX: u64 = i64::MAX as u64;

/// Default upper limit for a single sieve (one byte per integer).
pub const DEFAULT_SIEVE_BUDGET: u64 = 1 << 28;

/// Exponent sequence `α = (α_1, …, α_m)` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Builds a multi-index, trimming trailing zeros.
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        MultiIndex(exponents)
    }

    /// The empty multi-index, `α(1)`.
    pub fn one() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of stored slots; the last one is nonzero.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent of the `i`-th prime (0-based), zero past the stored slots.
    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Componentwise sum, i.e. `α(mn) = α(m) + α(n)`.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        let len = self.len().max(other.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let e = self
                .get(i)
                .checked_add(other.get(i))
                .ok_or_else(|| Error::Overflow("exponent sum exceeds u32".into()))?;
            out.push(e);
        }
        Ok(MultiIndex::new(out))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex::new(v)
    }
}

impl fmt::Display for MultiIndex {
    /// Space-separated exponents; the empty index prints as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// All primes up to `limit`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    /// Sieves `[2, limit]`, refusing limits above `budget`.
    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::Domain("sieve limit must be at least 1".into()));
        }
        if limit > budget {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the memory budget {budget}"
            )));
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        Ok(PrimeTable { primes, limit })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Largest integer that was sieved.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Membership test; `None` when `n` lies beyond the sieved range.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.primes.binary_search(&n).is_ok())
    }

    /// 0-based position of the prime `p`, if `p` is a prime within range.
    pub fn slot_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Factorizes `n`, or reports the sieve limit that would be needed.
    fn try_factorize(&self, n: u64) -> std::result::Result<MultiIndex, u64> {
        let mut rem = n;
        // (slot, exponent) pairs; at most 15 distinct primes below 2^63.
        let mut found: Vec<(usize, u32)> = Vec::with_capacity(16);
        for (slot, &p) in self.primes.iter().enumerate() {
            if p.saturating_mul(p) > rem {
                break;
            }
            if rem % p == 0 {
                let mut e = 0;
                while rem % p == 0 {
                    rem /= p;
                    e += 1;
                }
                found.push((slot, e));
            }
        }
        if rem > 1 {
            if self.limit.saturating_mul(self.limit) < rem && self.limit < rem {
                // Cofactor may still be composite: sieve far enough to see it.
                return Err(isqrt(rem).max(self.limit.saturating_mul(2)).min(rem));
            }
            match self.slot_of(rem) {
                Some(slot) => found.push((slot, 1)),
                None => return Err(rem),
            }
        }
        let mut exps = vec![0u32; found.last().map_or(0, |&(slot, _)| slot + 1)];
        for (slot, e) in found {
            exps[slot] = e;
        }
        Ok(MultiIndex(exps))
    }
}

/// Sieve of Eratosthenes with the default memory budget.
///
/// ```
/// let table = dirichlet_ruc::bohr::primes_up_to(10).unwrap();
/// assert_eq!(table.primes(), &[2, 3, 5, 7]);
/// ```
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    PrimeTable::with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

static SHARED: Mutex<Option<Arc<PrimeTable>>> = Mutex::new(None);

/// Process-wide table covering at least `min_limit`, grown on demand.
pub fn shared_table(min_limit: u64) -> Result<Arc<PrimeTable>> {
    let mut guard = SHARED.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit >= min_limit {
            return Ok(Arc::clone(t));
        }
    }
    let current = guard.as_ref().map_or(0, |t| t.limit);
    let target = min_limit.max(current.saturating_mul(2)).max(1 << 16);
    let target = target.min(DEFAULT_SIEVE_BUDGET).max(min_limit);
    let table = Arc::new(primes_up_to(target)?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// Shared table holding at least `count` primes.
fn table_with_count(count: usize) -> Result<Arc<PrimeTable>> {
    let mut limit = 1 << 16;
    loop {
        let t = shared_table(limit)?;
        if t.len() >= count {
            return Ok(t);
        }
        limit = t.limit().saturating_mul(2);
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Exponent sequence `α(n)` of `n ≥ 1`.
///
/// ```
/// use dirichlet_ruc::bohr::factorize;
/// assert_eq!(factorize(63).unwrap().exponents(), &[0, 2, 0, 1]);
/// ```
pub fn factorize(n: u64) -> Result<MultiIndex> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    if n > MAX_INDEX {
        return Err(Error::Overflow(format!("{n} exceeds 2^63 - 1")));
    }
    let mut table = shared_table(0)?;
    loop {
        match table.try_factorize(n) {
            Ok(alpha) => return Ok(alpha),
            Err(need) => {
                if need > DEFAULT_SIEVE_BUDGET {
                    return Err(Error::Resource(format!(
                        "factorizing {n} needs primes up to {need}, beyond the sieve budget"
                    )));
                }
                table = shared_table(need)?;
            }
        }
    }
}

/// The integer `n(α) = Π p_i^{α_i}`.
///
/// ```
/// use dirichlet_ruc::bohr::{index_of, MultiIndex};
/// assert_eq!(index_of(&MultiIndex::new(vec![2, 1])).unwrap(), 12);
/// ```
pub fn index_of(alpha: &MultiIndex) -> Result<u64> {
    if alpha.is_empty() {
        return Ok(1);
    }
    let table = table_with_count(alpha.len())?;
    let overflow = || Error::Overflow(format!("n(α) for α = ({alpha}) exceeds 2^63 - 1"));
    let mut n: u64 = 1;
    // Exponents are mostly zero runs; skip them a chunk at a time.
    let exps = alpha.exponents();
    let nonzero = exps
        .chunks(64)
        .enumerate()
        .filter(|(_, c)| c.iter().any(|&e| e != 0))
        .flat_map(|(k, c)| {
            c.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(move |(j, &e)| (64 * k + j, e))
        });
    for (slot, e) in nonzero {
        let p = table.primes()[slot];
        let pe = p.checked_pow(e).ok_or_else(overflow)?;
        n = n.checked_mul(pe).ok_or_else(overflow)?;
        if n > MAX_INDEX {
            return Err(overflow());
        }
    }
    Ok(n)
}

/// A point `e^{2πi t}` of the unit circle with `t = turns / 2^128`.
///
/// Powers multiply the angle modulo one turn, so `z^k` is exact for every
/// `|k| < 2^63`. The width matters for sampling: a uniformly random point
/// raised to `2^62` still carries 66 random bits, which keeps lacunary powers
/// uniformly distributed instead of collapsing onto a few roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TorusPoint(pub u128);

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

impl TorusPoint {
    pub const ONE: TorusPoint = TorusPoint(0);

    /// The point `e^{2πi x}`; only the fractional part of `x` matters.
    pub fn from_turns(x: f64) -> Self {
        let frac = x.rem_euclid(1.0);
        // `frac * 2^64` can round up to 2^64, which is the full turn.
        let scaled = frac * TWO_POW_64;
        if scaled >= TWO_POW_64 {
            TorusPoint(0)
        } else {
            TorusPoint((scaled as u64 as u128) << 64)
        }
    }

    /// The root of unity `e^{2πi num/den}`, exact up to the 2^-128 grid.
    pub fn from_fraction(num: i64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let den = den as u128;
        let r = (num as i128).rem_euclid(den as i128) as u128;
        // Two steps of long division by `den`, 64 bits at a time.
        let hi = (r << 64) / den;
        let lo = (((r << 64) % den) << 64) / den;
        TorusPoint((hi << 64) | lo)
    }

    /// Nearest fixed-point representative of a nonzero complex number's argument.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_turns(z.im.atan2(z.re) / std::f64::consts::TAU)
    }

    /// Builds a point from 128 random bits.
    pub fn from_bits(hi: u64, lo: u64) -> Self {
        TorusPoint(((hi as u128) << 64) | lo as u128)
    }

    pub fn turns(self) -> f64 {
        (self.0 >> 64) as f64 / TWO_POW_64
    }

    /// `z^k`, exactly: the angle is multiplied modulo one turn.
    pub fn pow(self, k: i64) -> Self {
        TorusPoint(self.0.wrapping_mul(k as i128 as u128))
    }

    /// Product of two points on the circle.
    pub fn mul(self, other: TorusPoint) -> Self {
        TorusPoint(self.0.wrapping_add(other.0))
    }

    /// `e^{2πi t}` as a complex number; quarter turns map exactly.
    pub fn to_complex(self) -> Complex64 {
        let top = (self.0 >> 64) as u64;
        let quadrant = top >> 62;
        let rem = top & ((1u64 << 62) - 1);
        let theta = rem as f64 * (std::f64::consts::FRAC_PI_2 / (1u64 << 62) as f64);
        let (s, c) = theta.sin_cos();
        match quadrant {
            0 => Complex64::new(c, s),
            1 => Complex64::new(-s, c),
            2 => Complex64::new(-c, -s),
            _ => Complex64::new(s, -c),
        }
    }
}

/// Angle of `z^α` as a torus point.
pub fn monomial_angle(alpha: &MultiIndex, z: &[TorusPoint]) -> Result<TorusPoint> {
    if z.len() < alpha.len() {
        return Err(Error::Arity {
            needed: alpha.len(),
            got: z.len(),
        });
    }
    let mut acc = TorusPoint::ONE;
    for (&e, t) in alpha.exponents().iter().zip(z) {
        acc = acc.mul(t.pow(e as i64));
    }
    Ok(acc)
}

/// `z^α = z_1^{α_1} ⋯ z_m^{α_m}` on the polytorus.
///
/// ```
/// use dirichlet_ruc::bohr::{monomial_eval, MultiIndex, TorusPoint};
/// let alpha = MultiIndex::new(vec![1, 0, 2]);
/// let z = [TorusPoint::from_turns(0.25), TorusPoint::ONE, TorusPoint::from_turns(0.5)];
/// let v = monomial_eval(&alpha, &z).unwrap();
/// assert_eq!((v.re, v.im), (0.0, 1.0));
/// ```
pub fn monomial_eval(alpha: &MultiIndex, z: &[TorusPoint]) -> Result<Complex64> {
    monomial_angle(alpha, z).map(TorusPoint::to_complex)
}

/// [`monomial_eval`] for points given as unimodular complex numbers.
pub fn monomial_eval_complex(alpha: &MultiIndex, z: &[Complex64]) -> Result<Complex64> {
    let pts: Vec<TorusPoint> = z.iter().map(|&c| TorusPoint::from_complex(c)).collect();
    monomial_eval(alpha, &pts)
}

/// Arithmetic progression `start + k·step`, `0 ≤ k < length`, of primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAP {
    pub start: u64,
    pub step: u64,
    pub length: usize,
}

impl PrimeAP {
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length as u64).map(move |k| self.start + k * self.step)
    }
}

/// First progression of `length` primes not exceeding `bound`.
///
/// Candidates are ordered by start, then by step, so the result is the
/// progression with the smallest first term and, among those, the smallest
/// common difference.
pub fn prime_ap_search(length: usize, bound: u64) -> Result<Option<PrimeAP>> {
    if length < 2 {
        return Err(Error::Precondition(
            "progression length must be at least 2".into(),
        ));
    }
    if bound < length as u64 {
        return Err(Error::Precondition(format!(
            "bound {bound} is smaller than the length {length}"
        )));
    }
    let table = primes_up_to(bound)?;
    let mut is_prime = vec![false; bound as usize + 1];
    for &p in table.primes() {
        is_prime[p as usize] = true;
    }
    let span = (length - 1) as u64;
    for &start in table.primes() {
        let max_step = (bound - start) / span;
        for step in 1..=max_step {
            if (1..=span).all(|k| is_prime[(start + k * step) as usize]) {
                return Ok(Some(PrimeAP {
                    start,
                    step,
                    length,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small_limits() {
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
        assert!(primes_up_to(1).unwrap().is_empty());
        assert!(matches!(primes_up_to(0), Err(Error::Domain(_))));
        assert!(matches!(
            PrimeTable::with_budget(1000, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().exponents(), &[2, 1]);
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(63).unwrap().exponents(), &[0, 2, 0, 1]);
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
        assert!(matches!(factorize(u64::MAX), Err(Error::Overflow(_))));
    }

    #[test]
    fn factorize_large_powers_and_primes() {
        assert_eq!(factorize(1 << 62).unwrap().exponents(), &[62]);
        // 999983 is the largest prime below 10^6 and the 78498th prime.
        let a = factorize(999_983).unwrap();
        assert_eq!(a.len(), 78_498);
        assert_eq!(index_of(&a).unwrap(), 999_983);
    }

    #[test]
    fn index_of_examples() {
        assert_eq!(index_of(&MultiIndex::new(vec![2, 1])).unwrap(), 12);
        assert_eq!(index_of(&MultiIndex::one()).unwrap(), 1);
        assert_eq!(index_of(&MultiIndex::new(vec![0, 0, 1])).unwrap(), 5);
        assert!(matches!(
            index_of(&MultiIndex::new(vec![63])),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            index_of(&MultiIndex::new(vec![40, 40])),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn multi_index_trims() {
        assert_eq!(MultiIndex::new(vec![1, 0, 0]).exponents(), &[1]);
        assert_eq!(MultiIndex::new(vec![0, 0]), MultiIndex::one());
        assert_eq!(MultiIndex::new(vec![2, 1]).to_string(), "2 1");
    }

    #[test]
    fn monomial_examples() {
        let i = TorusPoint::from_turns(0.25);
        let minus_one = TorusPoint::from_turns(0.5);
        let v = monomial_eval(
            &MultiIndex::new(vec![1, 0, 2]),
            &[i, TorusPoint::ONE, minus_one],
        )
        .unwrap();
        assert_eq!(v, Complex64::new(0.0, 1.0));

        let v = monomial_eval(&MultiIndex::one(), &[]).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));

        let w = TorusPoint::from_fraction(1, 3);
        let v = monomial_eval(&MultiIndex::new(vec![3]), &[w]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let v = monomial_eval_complex(&MultiIndex::new(vec![3]), &[w]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        assert_eq!(
            monomial_eval(&MultiIndex::new(vec![0, 1]), &[i]),
            Err(Error::Arity { needed: 2, got: 1 })
        );
    }

    #[test]
    fn huge_lacunary_exponent_is_exact() {
        // (e^{2πi/8})^{2^62} = 1 and (e^{2πi·5/2^20})^{2^19} = -1, exactly.
        assert_eq!(
            TorusPoint::from_fraction(1, 8).pow(1 << 62),
            TorusPoint::ONE
        );
        assert_eq!(
            TorusPoint::from_fraction(5, 1 << 20).pow(1 << 19),
            TorusPoint::from_fraction(1, 2)
        );
        // 2^62 ≡ 1 (mod 3): the representation error of 1/3 is below 2^-128,
        // so even amplified by 2^62 it stays far below f64 resolution.
        let w = TorusPoint::from_fraction(1, 3);
        let v = w.pow(1 << 62).to_complex();
        assert!((v - w.to_complex()).norm() < 1e-15);
        assert_eq!(w.pow(-1).mul(w), TorusPoint::ONE);
    }

    #[test]
    fn to_complex_is_unimodular() {
        for k in 0..1000u64 {
            let t = TorusPoint((k as u128).wrapping_mul(0x9E37_79B9_7F4A_7C15_F39C_C060_5CED_C835));
            assert!((t.to_complex().norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ap_search_examples() {
        let ap = prime_ap_search(3, 100).unwrap().unwrap();
        assert_eq!((ap.start, ap.step), (3, 2));
        let ap = prime_ap_search(5, 100).unwrap().unwrap();
        assert_eq!((ap.start, ap.step), (5, 6));
        let ap = prime_ap_search(2, 10).unwrap().unwrap();
        assert_eq!((ap.start, ap.step), (2, 1));
        assert_eq!(prime_ap_search(6, 20).unwrap(), None);
        assert!(prime_ap_search(1, 10).is_err());
        assert!(prime_ap_search(10, 5).is_err());
    }
}
