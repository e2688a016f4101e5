use std::collections::BTreeMap;
use std::f64::consts::PI;

use dirichlet_ruc::bohr::{factorize, index_of, monomial_eval, MultiIndex, TorusPoint};
use dirichlet_ruc::constants::{ruc_constant_search, ruc_ratio, rud_ratio, SearchConfig};
use dirichlet_ruc::dirichlet::{circle_hp_norm, hp_norm, DirichletPolynomial};
use dirichlet_ruc::random::{
    contraction_check, kahane_ratio, rademacher_average, Mode, SamplerConfig,
};
use dirichlet_ruc::spaces::{
    norm, norm_with, summing_basis, summing_combination, Element, SpaceSpec, TrigPolynomial,
};
use dirichlet_ruc::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64).prop_map(|t| TorusPoint::from_turns(t).to_complex())
}

fn coord_space() -> impl Strategy<Value = SpaceSpec> {
    (
        1usize..5,
        prop_oneof![
            Just(1.0),
            Just(1.5),
            Just(2.0),
            Just(3.0),
            Just(f64::INFINITY)
        ],
        0..3u8,
    )
        .prop_map(|(d, r, kind)| match kind {
            0 => SpaceSpec::Sequence { r, d },
            1 => SpaceSpec::Hilbert { d },
            _ => SpaceSpec::Sup { d },
        })
}

fn vectors(
    space: &SpaceSpec,
    count: std::ops::Range<usize>,
) -> impl Strategy<Value = Vec<Element>> {
    let d = space.dim().unwrap();
    prop::collection::vec(
        prop::collection::vec(complex(), d).prop_map(Element::Coords),
        count,
    )
}

fn space_and_vectors(
    count: std::ops::Range<usize>,
) -> impl Strategy<Value = (SpaceSpec, Vec<Element>)> {
    coord_space().prop_flat_map(move |s| {
        let v = vectors(&s, count.clone());
        (Just(s), v)
    })
}

fn hilbert_polynomial() -> impl Strategy<Value = DirichletPolynomial> {
    (1usize..6).prop_flat_map(|d| {
        prop::collection::btree_map(1u64..200, prop::collection::vec(complex(), d), 1..8).prop_map(
            move |m| {
                DirichletPolynomial::from_terms(
                    SpaceSpec::Hilbert { d },
                    m.into_iter().map(|(n, v)| (n, Element::Coords(v))),
                )
                .unwrap()
            },
        )
    })
}

fn small_cfg() -> SamplerConfig {
    SamplerConfig::default().with_samples(4_000).with_seed(17)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorize_roundtrip(n in 1u64..=10_000_000) {
        prop_assert_eq!(index_of(&factorize(n).unwrap()).unwrap(), n);
    }

    #[test]
    fn factorize_is_multiplicative(m in 1u64..100_000, n in 1u64..100_000) {
        let sum = factorize(m).unwrap().add(&factorize(n).unwrap()).unwrap();
        prop_assert_eq!(factorize(m * n).unwrap(), sum);
    }

    #[test]
    fn monomials_are_characters(
        a in prop::collection::vec(0u32..1000, 0..5),
        b in prop::collection::vec(0u32..1000, 0..5),
        z in prop::collection::vec(0.0..1.0f64, 5),
    ) {
        let z: Vec<TorusPoint> = z.into_iter().map(TorusPoint::from_turns).collect();
        let (a, b) = (MultiIndex::new(a), MultiIndex::new(b));
        let lhs = monomial_eval(&a.add(&b).unwrap(), &z).unwrap();
        let rhs = monomial_eval(&a, &z).unwrap() * monomial_eval(&b, &z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((lhs.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norms_are_homogeneous((s, xs) in space_and_vectors(1..2), c in complex()) {
        let x = &xs[0];
        let lhs = norm(&s, &x.scaled(c)).unwrap().value;
        let rhs = c.norm() * norm(&s, x).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn triangle_inequality((s, xs) in space_and_vectors(2..3)) {
        let mut sum = xs[0].clone();
        sum.axpy(Complex64::new(1.0, 0.0), &xs[1]).unwrap();
        let lhs = norm(&s, &sum).unwrap().value;
        let rhs = norm(&s, &xs[0]).unwrap().value + norm(&s, &xs[1]).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn function_l2_norm_is_parseval(
        terms in prop::collection::vec(((-12i64..12, -12i64..12), complex()), 1..6),
    ) {
        let p = TrigPolynomial::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], c))).unwrap();
        let e = norm(&SpaceSpec::FunctionLr { r: 2.0, k: 2 }, &Element::Trig(p.clone())).unwrap();
        prop_assert!((e.value - p.l2_norm()).abs() < 1e-10);
    }

    #[test]
    fn summing_closed_form_is_sup_norm(a in prop::collection::vec(complex(), 1..10)) {
        let (x, v) = summing_combination(&a).unwrap();
        let sup = norm(&SpaceSpec::Sup { d: a.len() }, &x).unwrap().value;
        // Tail sums and coordinates are accumulated in different orders.
        prop_assert!((v - sup).abs() <= 1e-12 * v.max(1.0));
        let mut assembled = SpaceSpec::Sup { d: a.len() }.zero();
        for (n, &c) in a.iter().enumerate() {
            assembled.axpy(c, &summing_basis(n + 1, a.len())).unwrap();
        }
        prop_assert_eq!(assembled, x);
    }

    #[test]
    fn parseval_is_sign_and_rotation_invariant(
        d in hilbert_polynomial(),
        lambdas in prop::collection::vec(unimodular(), 8),
    ) {
        let cfg = SamplerConfig::default();
        let base = hp_norm(&d, 2.0, &cfg).unwrap();
        let signs: BTreeMap<u64, Complex64> = d
            .terms()
            .enumerate()
            .map(|(i, (n, _))| (n, Complex64::new(if i % 2 == 0 { -1.0 } else { 1.0 }, 0.0)))
            .collect();
        prop_assert_eq!(hp_norm(&d.with_multipliers(&signs), 2.0, &cfg).unwrap(), base);
        let rot: BTreeMap<u64, Complex64> = d.terms().zip(&lambdas).map(|((n, _), &l)| (n, l)).collect();
        let rotated = hp_norm(&d.with_multipliers(&rot), 2.0, &cfg).unwrap();
        // Rotations change each |x_i|² by rounding only.
        prop_assert!((rotated.value - base.value).abs() <= 1e-12 * base.value.max(1.0));
    }

    #[test]
    fn circle_p2_is_l2_aggregate((xs, d) in (1usize..5).prop_flat_map(|d| (
        prop::collection::vec(prop::collection::vec(complex(), d).prop_map(Element::Coords), 1..12),
        Just(d),
    ))) {
        let s = SpaceSpec::Hilbert { d };
        let e = circle_hp_norm(&xs, &s, 2.0, &SamplerConfig::default()).unwrap();
        let agg = xs.iter().map(|x| norm(&s, x).unwrap().value.powi(2)).sum::<f64>().sqrt();
        prop_assert!((e.value - agg).abs() <= 1e-10 * agg.max(1.0));
    }

    #[test]
    fn rademacher_symmetry_is_bit_identical((s, xs) in space_and_vectors(1..9), flip in 0usize..8) {
        let cfg = SamplerConfig::default();
        let mut flipped = xs.clone();
        let i = flip % xs.len();
        flipped[i] = flipped[i].scaled(Complex64::new(-1.0, 0.0));
        for q in [1.0, 2.0, 3.0] {
            let a = rademacher_average(&xs, &s, q, &cfg).unwrap();
            let b = rademacher_average(&flipped, &s, q, &cfg).unwrap();
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn jensen_chain_and_kahane((s, xs) in space_and_vectors(1..10)) {
        prop_assume!(xs.iter().any(|x| !x.is_zero()));
        let cfg = SamplerConfig::default();
        let q1 = rademacher_average(&xs, &s, 1.0, &cfg).unwrap().value;
        let q2 = rademacher_average(&xs, &s, 2.0, &cfg).unwrap().value;
        let q4 = rademacher_average(&xs, &s, 4.0, &cfg).unwrap().value;
        prop_assert!(q1 <= q2 * (1.0 + 1e-12) && q2 <= q4 * (1.0 + 1e-12));
        prop_assert!(kahane_ratio(&xs, &s, 3.0, &cfg).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn contraction_holds((s, xs) in space_and_vectors(1..9), a in prop::collection::vec((0.0..=1.0f64, 0.0..1.0f64), 8)) {
        let a: Vec<Complex64> = a[..xs.len()].iter().map(|&(r, t)| Complex64::from_polar(r, 2.0 * PI * t)).collect();
        let rep = contraction_check(&xs, &a, &s, &SamplerConfig::default()).unwrap();
        prop_assert!(rep.holds, "{rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hp_norm_is_monotone_in_p(
        coeffs in prop::collection::btree_map(1u64..40, complex(), 1..6),
    ) {
        let d = DirichletPolynomial::scalar(coeffs).unwrap();
        let cfg = small_cfg();
        let e1 = hp_norm(&d, 1.0, &cfg).unwrap();
        let e2 = hp_norm(&d, 2.0, &cfg).unwrap();
        let e4 = hp_norm(&d, 4.0, &cfg).unwrap();
        let slack = |a: f64, b: f64| 3.0 * a.hypot(b);
        prop_assert!(e1.value <= e2.value + slack(e1.stderr, e2.stderr));
        prop_assert!(e2.value <= e4.value + slack(e2.stderr, e4.stderr));
    }

    #[test]
    fn coefficients_are_contractive(
        (space, terms) in coord_space().prop_flat_map(|s| {
            let d = s.dim().unwrap();
            (Just(s), prop::collection::btree_map(1u64..30, prop::collection::vec(complex(), d), 1..5))
        }),
        p in prop_oneof![Just(1.0), Just(2.0), Just(3.0)],
    ) {
        let d = DirichletPolynomial::from_terms(
            space.clone(),
            terms.into_iter().map(|(n, v)| (n, Element::Coords(v))),
        ).unwrap();
        let e = hp_norm(&d, p, &small_cfg()).unwrap();
        for (n, _) in d.terms() {
            let c = norm(&space, &d.coefficient(n)).unwrap().value;
            prop_assert!(c <= e.value + 3.0 * e.stderr + e.abs_error + 1e-12, "n = {n}: {c} > {e:?}");
        }
    }

    #[test]
    fn ruc_and_rud_are_reciprocal(
        (space, terms) in coord_space().prop_flat_map(|s| {
            let d = s.dim().unwrap();
            (Just(s), prop::collection::btree_map(1u64..12, prop::collection::vec(complex(), d), 1..5))
        }),
        p in prop_oneof![Just(1.0), Just(2.0)],
    ) {
        let d = DirichletPolynomial::from_terms(space, terms.into_iter().map(|(n, v)| (n, Element::Coords(v)))).unwrap();
        prop_assume!(!d.is_zero());
        let cfg = small_cfg();
        let a = ruc_ratio(&d, p, &cfg).unwrap();
        let b = rud_ratio(&d, p, &cfg).unwrap();
        prop_assert_eq!(a.numerator, b.denominator);
        prop_assert_eq!(a.denominator, b.numerator);
        prop_assert!((a.ratio * b.ratio - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn ruc_ratio_is_scale_invariant(
        (space, terms) in coord_space().prop_flat_map(|s| {
            let d = s.dim().unwrap();
            (Just(s), prop::collection::btree_map(1u64..12, prop::collection::vec(complex(), d), 1..5))
        }),
        c in complex(),
    ) {
        let d = DirichletPolynomial::from_terms(space.clone(), terms.into_iter().map(|(n, v)| (n, Element::Coords(v)))).unwrap();
        prop_assume!(!d.is_zero() && c.norm() > 1e-3);
        let cfg = small_cfg();
        let a = ruc_ratio(&d, 1.0, &cfg).unwrap();
        let b = ruc_ratio(&d.scaled(c), 1.0, &cfg).unwrap();
        let tol = 3.0 * a.stderr().hypot(b.stderr()) + 1e-12;
        prop_assert!((a.ratio - b.ratio).abs() <= tol, "{} vs {}", a.ratio, b.ratio);
        if space.is_hilbertian() {
            let a = ruc_ratio(&d, 2.0, &cfg).unwrap();
            let b = ruc_ratio(&d.scaled(c), 2.0, &cfg).unwrap();
            prop_assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
        }
    }

    #[test]
    fn leading_zero_terms_change_no_ratio(
        coeffs in prop::collection::vec(complex(), 1..5),
        zeros in 1u64..6,
    ) {
        // Sup-valued summing family, shifted behind explicit zero terms.
        let m = coeffs.len();
        let s = SpaceSpec::Sup { d: m };
        let terms: Vec<(u64, Element)> = coeffs.iter().enumerate()
            .map(|(i, &a)| (i as u64 + 1, summing_basis(i + 1, m).scaled(a)))
            .collect();
        let d = DirichletPolynomial::from_terms(s.clone(), terms.clone()).unwrap();
        prop_assume!(!d.is_zero());
        let mut padded = d.clone();
        for k in 0..zeros {
            padded.insert(100 + k, s.zero()).unwrap();
        }
        let cfg = small_cfg();
        prop_assert_eq!(ruc_ratio(&d, 1.0, &cfg).unwrap().ratio, ruc_ratio(&padded, 1.0, &cfg).unwrap().ratio);
    }
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let s = SpaceSpec::Sequence { r: 1.0, d: 3 };
    let xs: Vec<Element> = (0..30)
        .map(|i| Element::real_coords(&[1.0, i as f64 * 0.1, -0.5]))
        .collect();
    let cfg = SamplerConfig::default().with_samples(10_000).with_seed(99);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| rademacher_average(&xs, &s, 2.0, &cfg).unwrap());
    let b = four.install(|| rademacher_average(&xs, &s, 2.0, &cfg).unwrap());
    assert_eq!(a.mode, Mode::Mc);
    assert_eq!(a, b);
}

#[test]
fn function_norm_monte_carlo_ignores_thread_count() {
    let f = SpaceSpec::FunctionLr { r: 1.0, k: 2 };
    let one = Complex64::new(1.0, 0.0);
    let p = TrigPolynomial::from_terms(
        2,
        [
            (vec![3, 0], one),
            (vec![0, 1 << 50], one),
            (vec![1, 1 << 20], one),
        ],
    )
    .unwrap();
    let x = Element::Trig(p);
    let cfg = SamplerConfig::default().with_samples(5_000);
    let a = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| norm_with(&f, &x, &cfg).unwrap());
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| norm_with(&f, &x, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn search_never_regresses_below_start() {
    let m = 8;
    let sup = SpaceSpec::Sup { d: m };
    let xs: Vec<Element> = (1..=m).map(|n| summing_basis(n, m)).collect();
    let scfg = SearchConfig {
        restarts: 2,
        iterations: 1,
        ..SearchConfig::default()
    };
    let cfg = SamplerConfig::default()
        .with_samples(500)
        .with_exact_cutoff(8)
        .monte_carlo_only();
    let out = ruc_constant_search(&sup, &xs, 2.0, &scfg, &cfg).unwrap();
    assert!(out.best.ratio >= out.start_ratio);
    assert!(out.lower_bound);
}

#[test]
fn partial_sums_and_translates_are_exact() {
    let d = DirichletPolynomial::scalar((1..=20).map(|n| (n, Complex64::new(1.0 / n as f64, 0.0))))
        .unwrap();
    for big_n in [1, 5, 20, 50] {
        let p = d.partial_sum(big_n);
        assert!(p.terms().all(|(n, x)| n <= big_n && *x == d.coefficient(n)));
        assert_eq!(p.terms().count() as u64, big_n.min(20));
    }
    let t = d.vertical_translate(0.5).unwrap();
    for (n, x) in t.terms() {
        assert_eq!(
            *x,
            d.coefficient(n)
                .scaled(Complex64::new((n as f64).powf(-0.5), 0.0))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Stored zero terms at fresh indices change neither side of the ratio.
    #[test]
    fn zero_terms_leave_ratios_unchanged(
        coeffs in prop::collection::vec(complex(), 1..6),
        extra in prop::collection::btree_set(7u64..40, 1..5),
        p in prop_oneof![Just(1.0), Just(2.0), Just(3.0)],
    ) {
        prop_assume!(coeffs.iter().any(|c| c.norm() > 1e-3));
        let d = DirichletPolynomial::scalar(coeffs.iter().enumerate().map(|(i, &c)| (i as u64 + 1, c))).unwrap();
        let mut padded = d.clone();
        for n in extra {
            padded.insert(n, Element::scalar(Complex64::new(0.0, 0.0))).unwrap();
        }
        let cfg = SamplerConfig::default().with_seed(4).with_samples(2_000);
        let a = ruc_ratio(&d, p, &cfg).unwrap();
        let b = ruc_ratio(&padded, p, &cfg).unwrap();
        prop_assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio, "{} vs {}", a.ratio, b.ratio);
    }
}

#[test]
fn prime_lacunary_family_smoke() {
    // x_n = w_1^n (n prime) or w_2^{2^n} in L_1(T^2), N ≤ 12: the Dirichlet
    // series is RUC in H_2, so the ratio stays near one.
    use dirichlet_ruc::spaces::{
        dyadic_lacunary_family, prime_lacunary_family, prime_monomial_family,
    };
    let mut cfg = SamplerConfig::default()
        .with_samples(200)
        .with_exact_cutoff(4);
    cfg.inner_samples = 256;
    cfg.outer_samples = 16;
    cfg.grid.max_work = 1 << 12;
    for family in [
        prime_lacunary_family(12, 1.0),
        dyadic_lacunary_family(12, 1.0),
    ] {
        let (space, xs) = family.unwrap();
        let d = DirichletPolynomial::from_terms(space, xs.into_iter().filter(|(n, _)| *n <= 6))
            .unwrap();
        let r = ruc_ratio(&d, 2.0, &cfg).unwrap();
        assert!(
            r.ratio.is_finite() && r.ratio > 0.5 && r.ratio < 2.0,
            "{r:?}"
        );
    }
    let (space, fs) = prime_monomial_family(6, 1.5).unwrap();
    let d = DirichletPolynomial::from_terms(space, fs).unwrap();
    let r = ruc_ratio(&d, 1.0, &cfg).unwrap();
    assert!(
        r.ratio.is_finite() && r.ratio > 0.25 && r.ratio < 4.0,
        "{r:?}"
    );
}
