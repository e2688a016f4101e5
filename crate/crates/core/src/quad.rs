//! Quadrature building blocks: adaptive Gauss–Kronrod on intervals and a
//! deterministic parallel fold over uniform tensor grids on the torus.

use rayon::prelude::*;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod rule; returns (integral, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integral of `f` over `[a, b]` by recursive bisection of a Gauss–Kronrod
/// rule, targeting an absolute error of `abs_tol`.
///
/// Returns `(value, error_estimate)`. The estimate is the sum over accepted
/// panels of the Kronrod–Gauss difference, which overestimates the true
/// error for smooth integrands.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> (f64, f64) {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        whole: (f64, f64),
        depth: u32,
    ) -> (f64, f64) {
        let (v, e) = whole;
        if e <= tol || depth >= 48 {
            return (v, e);
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        let (lv, le) = rec(f, a, m, 0.5 * tol, left, depth + 1);
        let (rv, re) = rec(f, m, b, 0.5 * tol, right, depth + 1);
        (lv + rv, le + re)
    }
    let whole = gk15(&f, a, b);
    rec(&f, a, b, abs_tol, whole, 0)
}

/// Fold over every point of the tensor grid `Π_j {0, …, sizes[j] − 1}`.
///
/// `visit` receives the multi-index of the point and whether it belongs to
/// the coarse subgrid (every index even). Work is split along the first
/// coordinate and partial accumulators are merged in index order, so the
/// result does not depend on the number of worker threads.
pub fn grid_fold<A, I, V, M>(sizes: &[usize], init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize], bool) + Sync,
    M: Fn(&mut A, A),
{
    if sizes.is_empty() {
        let mut acc = init();
        visit(&mut acc, &[], true);
        return acc;
    }
    let parts: Vec<A> = (0..sizes[0])
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut idx = vec![0usize; sizes.len()];
            idx[0] = first;
            loop {
                let coarse = idx.iter().all(|k| k % 2 == 0);
                visit(&mut acc, &idx, coarse);
                // Odometer over the remaining coordinates.
                let mut j = sizes.len() - 1;
                loop {
                    if j == 0 {
                        return acc;
                    }
                    idx[j] += 1;
                    if idx[j] < sizes[j] {
                        break;
                    }
                    idx[j] = 0;
                    j -= 1;
                }
            }
        })
        .collect();
    let mut acc = init();
    for p in parts {
        merge(&mut acc, p);
    }
    acc
}

/// Total number of points of a tensor grid, saturating on overflow.
pub fn grid_points(sizes: &[usize]) -> usize {
    sizes.iter().fold(1usize, |acc, &s| acc.saturating_mul(s))
}
