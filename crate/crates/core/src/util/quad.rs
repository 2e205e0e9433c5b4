//! Adaptive Gauss–Kronrod quadrature (7/15 pair) with semi-infinite
//! transforms and the growth-based divergence flag used by the potential
//! diagnostics.

use crate::error::Error;

/// Nodes of the 15-point Kronrod rule on [-1, 1] (non-negative half).
/// The 7 Gauss points are the odd-indexed entries. Classical QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// 7-point Gauss weights; `WG[i]` pairs with node `XGK[2i + 1]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value/error pair returned by the adaptive driver.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub abs_err: f64,
}

/// One G7/K15 panel on [a, b]. Returns the Kronrod value, the |K15 - G7|
/// error estimate and the L¹ estimate used for noise floors.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = 0.0;
    let mut resabs = WGK[7] * fc.abs();

    for i in 0..7 {
        let x = half * XGK[i];
        let f1 = f(center - x);
        let f2 = f(center + x);
        let sum = f1 + f2;
        kronrod += WGK[i] * sum;
        resabs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * sum;
        }
    }
    gauss += WG[3] * fc;

    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err, resabs * half.abs())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Adaptive integration of `f` over the finite interval [a, b] to
/// `max(abs_tol, rel_tol * |I|)`. Endpoint singularities are fine as long as
/// they are integrable: the Kronrod nodes never touch the endpoints.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quad, Error> {
    integrate_with_budget(&f, a, b, rel_tol, abs_tol, 4000)
}

pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<Quad, Error> {
    if a == b {
        return Ok(Quad { value: 0.0, abs_err: 0.0 });
    }
    let (value, err, _) = gk15(f, a, b);
    let mut segs = vec![Segment { a, b, value, err }];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if total_err <= target {
            return Ok(Quad { value: total, abs_err: total_err });
        }
        if segs.len() >= max_segments {
            return Err(Error::QuadratureNonConvergence {
                what: format!("interval [{a:.6e}, {b:.6e}]"),
                achieved: total_err,
            });
        }
        // Split the worst segment.
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval exhausted at double precision; keep its estimate.
            segs.push(Segment { err: 0.0, ..s });
            continue;
        }
        let (v1, e1, _) = gk15(f, s.a, mid);
        let (v2, e2, _) = gk15(f, mid, s.b);
        segs.push(Segment { a: s.a, b: mid, value: v1, err: e1 });
        segs.push(Segment { a: mid, b: s.b, value: v2, err: e2 });
    }
}

/// Adaptive integration with interior breakpoints (kinks, support edges).
pub fn integrate_broken<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quad, Error> {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let mut value = 0.0;
    let mut err = 0.0;
    for w in points.windows(2) {
        let q = integrate_with_budget(&f, w[0], w[1], rel_tol, abs_tol / points.len() as f64, 4000)?;
        value += q.value;
        err += q.abs_err;
    }
    Ok(Quad { value, abs_err: err })
}

/// ∫_a^∞ f dx via the rational map x = a + t/(1-t).
pub fn integrate_to_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quad, Error> {
    let g = move |t: f64| {
        let u = 1.0 - t;
        let x = a + t / u;
        f(x) / (u * u)
    };
    integrate_with_budget(&g, 0.0, 1.0, rel_tol, abs_tol, 4000)
}

/// ∫_{-∞}^∞ f dx as two half-line integrals split at `center`.
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quad, Error> {
    let right = integrate_to_inf(&f, center, rel_tol, 0.5 * abs_tol)?;
    let left = integrate_to_inf(|x| f(2.0 * center - x), center, rel_tol, 0.5 * abs_tol)?;
    Ok(Quad { value: right.value + left.value, abs_err: right.abs_err + left.abs_err })
}

/// A possibly-divergent integral value. `divergent` is set either by the
/// 10%-growth rule over successive domain doublings or by outright
/// non-convergence of the adaptive rule.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Integrability {
    pub value: f64,
    pub divergent: bool,
}

impl Integrability {
    pub fn finite(value: f64) -> Self {
        Integrability { value, divergent: false }
    }

    pub fn divergent(partial: f64) -> Self {
        Integrability { value: partial, divergent: true }
    }
}

/// ∫_0^∞ f dr for a non-negative-domain improper integral, with divergence
/// detection: the domain is doubled from `r0`, and the integral is declared
/// divergent when two successive refinements each grow the running value by
/// more than 10% while the per-doubling contributions are not decaying.
/// The decay guard keeps the early bulk of a convergent integrand (whose
/// first doublings also grow the value) from tripping the rule.
pub fn improper_growing<F: Fn(f64) -> f64>(f: F, r0: f64, rel_tol: f64) -> Integrability {
    let mut total = match integrate_with_budget(&f, 0.0, r0, rel_tol, 0.0, 2000) {
        Ok(q) => q.value,
        Err(_) => return Integrability::divergent(f64::INFINITY),
    };
    let mut hi = r0;
    let mut prev_piece = total.abs();
    let mut growth_streak = 0u32;
    for _ in 0..64 {
        let next = 2.0 * hi;
        let piece = match integrate_with_budget(&f, hi, next, rel_tol, 0.0, 2000) {
            Ok(q) => q.value,
            Err(_) => return Integrability::divergent(total),
        };
        let new_total = total + piece;
        let decaying = piece.abs() < 0.6 * prev_piece;
        if !decaying && new_total.abs() > 1.1 * total.abs().max(f64::MIN_POSITIVE) {
            growth_streak += 1;
            if growth_streak >= 2 {
                return Integrability::divergent(new_total);
            }
        } else {
            growth_streak = 0;
        }
        if piece.abs() <= rel_tol * new_total.abs().max(f64::MIN_POSITIVE) {
            return Integrability::finite(new_total);
        }
        total = new_total;
        prev_piece = piece.abs().max(f64::MIN_POSITIVE);
        hi = next;
    }
    // Budget exhausted: a still-decaying tail is summed geometrically,
    // anything else is reported divergent.
    Integrability::divergent(total)
}
