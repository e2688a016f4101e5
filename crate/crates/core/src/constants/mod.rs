//! RUC/RUD ratios, lower bounds for the extremal constants, type and cotype
//! witnesses, and the counterexample experiments.
//!
//! A system is RUC in `H_p(X)` when `‖D‖_{H_p^rad} ≤ C ‖D‖_{H_p}` for every
//! polynomial `D` in its span, and RUD for the reverse inequality. The ratio
//! functions evaluate one instance; [`ruc_constant_search`] maximizes over
//! coefficients and can only certify lower bounds on `C`.

mod experiments;
mod search;

use serde::{Deserialize, Serialize};

use crate::dirichlet::{hp_norm, DirichletPolynomial};
use crate::random::{hprad_norm, rademacher_average, Estimate, Mode, SamplerConfig};
use crate::spaces::{self, Element, SpaceSpec};
use crate::{Error, Result};

pub use experiments::{
    experiment_lacunary_power, experiment_prime_ap, experiment_summing_basis, kernel_growth,
    least_squares_slope, KernelRow, KernelTable, LacunaryRow, PrimeApRow, PrimeApTable,
    SummingReport,
};
pub use search::{ruc_constant_search, SearchConfig, SearchOutcome};

/// One instance of a ratio of two norm estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub numerator: Estimate,
    pub denominator: Estimate,
    pub ratio: f64,
    pub instance: String,
}

impl RatioReport {
    fn new(numerator: Estimate, denominator: Estimate, instance: String) -> Result<Self> {
        if !(denominator.value > 0.0) {
            return Err(Error::UndefinedRatio(format!(
                "zero denominator for {instance}"
            )));
        }
        Ok(RatioReport {
            ratio: numerator.value / denominator.value,
            numerator,
            denominator,
            instance,
        })
    }

    /// Combined mode of both sides.
    pub fn mode(&self) -> Mode {
        self.numerator.mode.join(self.denominator.mode)
    }

    /// First-order standard error of the ratio.
    pub fn stderr(&self) -> f64 {
        let rel = (self.numerator.stderr / self.numerator.value.max(f64::MIN_POSITIVE))
            .hypot(self.denominator.stderr / self.denominator.value);
        self.ratio * rel
    }
}

fn describe(d: &DirichletPolynomial, p: f64) -> String {
    format!("{:?}, {} terms, p = {p}", d.space(), d.support().count())
}

fn both_sides(
    d: &DirichletPolynomial,
    p: f64,
    cfg: &SamplerConfig,
) -> Result<(Estimate, Estimate)> {
    if d.is_zero() {
        return Err(Error::UndefinedRatio("zero Dirichlet polynomial".into()));
    }
    Ok((hprad_norm(d, p, cfg)?, hp_norm(d, p, cfg)?))
}

/// `‖D‖_{H_p^rad} / ‖D‖_{H_p}`.
///
/// ```
/// use dirichlet_ruc::constants::ruc_ratio;
/// use dirichlet_ruc::dirichlet::DirichletPolynomial;
/// use dirichlet_ruc::random::SamplerConfig;
/// use dirichlet_ruc::Complex64;
/// let d = DirichletPolynomial::scalar([(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.0, 2.0))]).unwrap();
/// assert_eq!(ruc_ratio(&d, 2.0, &SamplerConfig::default()).unwrap().ratio, 1.0);
/// ```
pub fn ruc_ratio(d: &DirichletPolynomial, p: f64, cfg: &SamplerConfig) -> Result<RatioReport> {
    let (rad, plain) = both_sides(d, p, cfg)?;
    RatioReport::new(rad, plain, describe(d, p))
}

/// `‖D‖_{H_p} / ‖D‖_{H_p^rad}`, from the same two estimates as [`ruc_ratio`].
pub fn rud_ratio(d: &DirichletPolynomial, p: f64, cfg: &SamplerConfig) -> Result<RatioReport> {
    let (rad, plain) = both_sides(d, p, cfg)?;
    RatioReport::new(plain, rad, describe(d, p))
}

fn square_sum(space: &SpaceSpec, xs: &[Element], cfg: &SamplerConfig) -> Result<Estimate> {
    let mut total = 0.0;
    let mut mode = Mode::Exact;
    let mut err = 0.0;
    for x in xs {
        let e = spaces::norm_with(space, x, cfg)?;
        total += e.value * e.value;
        err += e.uncertainty();
        mode = mode.join(e.mode);
    }
    if total == 0.0 {
        return Err(Error::Domain("all vectors are zero".into()));
    }
    let v = total.sqrt();
    Ok(if mode == Mode::Exact {
        Estimate::exact(v)
    } else {
        Estimate::quadrature(v, err, 0)
    })
}

/// `(E‖Σ ε_n x_n‖²)^{1/2} / (Σ ‖x_n‖²)^{1/2}`; bounded over all families
/// exactly when `X` has type 2.
///
/// ```
/// use dirichlet_ruc::constants::type_constant_witness;
/// use dirichlet_ruc::random::SamplerConfig;
/// use dirichlet_ruc::spaces::{basis_vector, SpaceSpec};
/// let l1 = SpaceSpec::Sequence { r: 1.0, d: 4 };
/// let xs: Vec<_> = (1..=4).map(|i| basis_vector(i, 4)).collect();
/// let w = type_constant_witness(&l1, &xs, &SamplerConfig::default()).unwrap();
/// assert_eq!(w.ratio, 2.0);
/// ```
pub fn type_constant_witness(
    space: &SpaceSpec,
    xs: &[Element],
    cfg: &SamplerConfig,
) -> Result<RatioReport> {
    let den = square_sum(space, xs, cfg)?;
    let num = rademacher_average(xs, space, 2.0, cfg)?;
    RatioReport::new(
        num,
        den,
        format!("type 2 witness, {:?}, {} vectors", space, xs.len()),
    )
}

/// `(Σ ‖x_n‖²)^{1/2} / (E‖Σ ε_n x_n‖²)^{1/2}`; bounded exactly when `X`
/// has cotype 2.
pub fn cotype_constant_witness(
    space: &SpaceSpec,
    xs: &[Element],
    cfg: &SamplerConfig,
) -> Result<RatioReport> {
    let num = square_sum(space, xs, cfg)?;
    let den = rademacher_average(xs, space, 2.0, cfg)?;
    RatioReport::new(
        num,
        den,
        format!("cotype 2 witness, {:?}, {} vectors", space, xs.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::basis_vector;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg() -> SamplerConfig {
        SamplerConfig::default().with_samples(20_000).with_seed(1)
    }

    #[test]
    fn hilbert_and_scalar_ratios_are_one() {
        let d = DirichletPolynomial::scalar((1..=5).map(|n| (n, c(1.0)))).unwrap();
        assert_eq!(ruc_ratio(&d, 2.0, &cfg()).unwrap().ratio, 1.0);
        assert_eq!(rud_ratio(&d, 2.0, &cfg()).unwrap().ratio, 1.0);
        let h = SpaceSpec::Hilbert { d: 3 };
        let d = DirichletPolynomial::from_terms(
            h,
            [
                (2, Element::real_coords(&[1.0, -2.0, 0.5])),
                (9, Element::real_coords(&[0.0, 1.0, 1.0])),
            ],
        )
        .unwrap();
        assert_eq!(ruc_ratio(&d, 2.0, &cfg()).unwrap().ratio, 1.0);
    }

    #[test]
    fn summing_basis_ratio_is_at_least_one() {
        let sup = SpaceSpec::Sup { d: 3 };
        // Spread the combination over three indices: x_n = a_n s_n.
        let terms = (1..=3).map(|n| {
            let a = if n == 2 { -1.0 } else { 1.0 };
            (n as u64, spaces::summing_basis(n, 3).scaled(c(a)))
        });
        let d = DirichletPolynomial::from_terms(sup, terms).unwrap();
        let r = ruc_ratio(&d, 2.0, &cfg()).unwrap();
        assert!(
            r.ratio >= 1.0 - 3.0 * r.stderr() - r.numerator.abs_error,
            "{r:?}"
        );
    }

    #[test]
    fn zero_polynomial_is_undefined() {
        let d = DirichletPolynomial::scalar([(2, c(0.0))]).unwrap();
        assert!(matches!(
            ruc_ratio(&d, 2.0, &cfg()),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn witnesses() {
        for n in [4usize, 8] {
            let xs: Vec<Element> = (1..=n).map(|i| basis_vector(i, n)).collect();
            let t =
                type_constant_witness(&SpaceSpec::Sequence { r: 1.0, d: n }, &xs, &cfg()).unwrap();
            assert!((t.ratio - (n as f64).sqrt()).abs() < 1e-12);
            let ct = cotype_constant_witness(&SpaceSpec::Sup { d: n }, &xs, &cfg()).unwrap();
            assert!((ct.ratio - (n as f64).sqrt()).abs() < 1e-12);
            let h = type_constant_witness(&SpaceSpec::Hilbert { d: n }, &xs, &cfg()).unwrap();
            assert!((h.ratio - 1.0).abs() < 1e-12);
        }
        let single = [Element::real_coords(&[1.0, 5.0])];
        let s = SpaceSpec::Sequence { r: 3.0, d: 2 };
        assert_eq!(
            type_constant_witness(&s, &single, &cfg()).unwrap().ratio,
            1.0
        );
        assert_eq!(
            cotype_constant_witness(&s, &single, &cfg()).unwrap().ratio,
            1.0
        );
        let zero = [Element::real_coords(&[0.0, 0.0])];
        assert!(matches!(
            type_constant_witness(&s, &zero, &cfg()),
            Err(Error::Domain(_))
        ));
    }
}
