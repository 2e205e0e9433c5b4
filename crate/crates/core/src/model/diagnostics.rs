//! Integrability diagnostics. Every entry is a weighted integral of the
//! potential reduced to one-dimensional adaptive quadrature:
//!
//! * d = 1: direct integration of the two half-lines;
//! * d >= 2, centered radial variants: the r^{d-1} surface factor;
//! * inverse-square balls: sphere-slicing through each ball (the
//!   sphere-cap area has a closed form in d = 2, 3).
//!
//! Entries whose quadrature grows by more than 10% over two successive
//! domain doublings, or fails outright, are flagged divergent.

use super::potential::{potential_eval, PotentialSpec, PotentialVariant};
use super::unit_sphere_area;
use crate::error::Error;
use crate::util::quad::{self, Integrability};
use serde::{Deserialize, Serialize};

/// Exponents entering the Lp and fractional-weight entries.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiagnosticsParams {
    /// δ0 in ∫ |V|^{1+δ0} dx.
    pub delta0: f64,
    /// α in ∫ (1 + |x|^{2α-2}) |V| dx.
    pub alpha: f64,
}

impl Default for DiagnosticsParams {
    fn default() -> Self {
        DiagnosticsParams { delta0: 0.5, alpha: 1.5 }
    }
}

/// The integrability quantities the weak-coupling, half-line and counting
/// machinery condition on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    /// ∫ V dx
    pub integral_v: Integrability,
    /// ∫ |V| dx
    pub integral_abs_v: Integrability,
    /// ∫ V_+^{d/2} dx (the CLR quantity)
    pub clr_integral: Integrability,
    /// ∫_0^∞ r |V(r e1)| dr (Bargman, half-line radial profile)
    pub bargman: Integrability,
    /// ∫ (1 + |x|²) |V| dx
    pub weight_1d: Integrability,
    /// ∫ ln²(2 + |x|) |V| dx
    pub weight_2d_log2: Integrability,
    /// ∫ |V|^{1+δ0} dx
    pub lp_norm: Integrability,
    /// ∫ (1 + |x|^{2α-2}) |V| dx
    pub frac_weight: Integrability,
    /// ∫ V_+ ln(2 + |x|) dx + ∫_{V>1} V ln V dx
    pub discreteness_b: Integrability,
}

/// Weighted integral ∫ g(V(x)) w(|x|) dx reduced to radial quadrature.
fn weighted_integral(
    spec: &PotentialSpec,
    g: &dyn Fn(f64) -> f64,
    w: &dyn Fn(f64) -> f64,
) -> Result<Integrability, Error> {
    let d = spec.dimension;
    match (&spec.variant, d) {
        (PotentialVariant::InverseSquareOnBalls { balls }, _) => {
            // Per-ball sphere slicing, partial sums under the 10% growth rule.
            let mut total = 0.0;
            let mut prev_term = f64::INFINITY;
            let mut streak = 0u32;
            for b in balls {
                let c = b.center.iter().map(|v| v * v).sum::<f64>().sqrt();
                let term = ball_integral(d, c, b.radius, &|r| g(1.0 / (r * r)) * w(r))?;
                total += term;
                if term.abs() >= 0.6 * prev_term && term.abs() > 0.1 * total.abs() {
                    streak += 1;
                    if streak >= 2 {
                        return Ok(Integrability::divergent(total));
                    }
                } else {
                    streak = 0;
                }
                prev_term = term.abs().max(f64::MIN_POSITIVE);
            }
            Ok(Integrability::finite(total))
        }
        (_, 1) => {
            let f = |r: f64| {
                (g(potential_eval(spec, &[r])) + g(potential_eval(spec, &[-r]))) * w(r)
            };
            Ok(quad::improper_growing(f, support_start(spec), 1e-8))
        }
        (_, _) if spec.is_centered_radial() => {
            let area = unit_sphere_area(d);
            let f = |r: f64| g(spec.radial_profile(r)) * w(r) * area * r.powi(d as i32 - 1);
            Ok(quad::improper_growing(f, support_start(spec), 1e-8))
        }
        _ => Err(Error::NotImplemented {
            msg: format!(
                "diagnostics in dimension {d} need a centered radial potential \
                 or inverse-square balls"
            ),
        }),
    }
}

/// Initial quadrature domain [0, r0] covering the bulk of the potential.
fn support_start(spec: &PotentialSpec) -> f64 {
    spec.support_radius_hint().clamp(1.0, 1e6)
}

/// ∫_{B(c,R)} f(|x|) dx by slicing into spheres about the origin.
/// In d = 3 the cap area is 2πr²(1 - cosθ0), in d = 2 the arc length 2rθ0,
/// with cosθ0 = (r² + c² - R²)/(2rc).
fn ball_integral(d: usize, c: f64, radius: f64, f: &dyn Fn(f64) -> f64) -> Result<f64, Error> {
    let lo = (c - radius).max(0.0);
    let hi = c + radius;
    let cap = move |r: f64| -> f64 {
        let cos_t = ((r * r + c * c - radius * radius) / (2.0 * r * c)).clamp(-1.0, 1.0);
        let theta = cos_t.acos();
        match d {
            2 => 2.0 * r * theta,
            3 => 2.0 * std::f64::consts::PI * r * r * (1.0 - cos_t),
            _ => f64::NAN,
        }
    };
    match d {
        1 => {
            // Balls on the line are intervals; both signs of x map to r = |x|.
            let q = quad::integrate(f, lo, hi, 1e-9, 1e-300)?;
            Ok(q.value)
        }
        2 | 3 => {
            let q = quad::integrate(move |r| f(r) * cap(r), lo, hi, 1e-9, 1e-300)?;
            Ok(q.value)
        }
        _ => Err(Error::NotImplemented {
            msg: format!("ball slicing in dimension {d}"),
        }),
    }
}

/// Computes every diagnostic entry for a radial (or radially reducible)
/// potential. Relative quadrature tolerance 1e-8; entries that fail the
/// growth rule come back flagged divergent rather than failing the call.
pub fn diagnostics(
    spec: &PotentialSpec,
    params: DiagnosticsParams,
) -> Result<DiagnosticsReport, Error> {
    let d = spec.dimension;
    let one = |_: f64| 1.0;

    let integral_v = weighted_integral(spec, &|v| v, &one)?;
    let integral_abs_v = weighted_integral(spec, &|v: f64| v.abs(), &one)?;
    let clr_integral =
        weighted_integral(spec, &|v: f64| v.max(0.0).powf(d as f64 / 2.0), &one)?;
    let bargman = bargman_profile(spec);
    let weight_1d = weighted_integral(spec, &|v: f64| v.abs(), &|r| 1.0 + r * r)?;
    let weight_2d_log2 =
        weighted_integral(spec, &|v: f64| v.abs(), &|r| (2.0 + r).ln().powi(2))?;
    let lp_norm = weighted_integral(spec, &|v: f64| v.abs().powf(1.0 + params.delta0), &one)?;
    let frac_weight = weighted_integral(spec, &|v: f64| v.abs(), &|r| {
        1.0 + r.powf(2.0 * params.alpha - 2.0)
    })?;
    let b1 = weighted_integral(spec, &|v: f64| v.max(0.0), &|r| (2.0 + r).ln())?;
    let b2 = weighted_integral(spec, &|v: f64| if v > 1.0 { v * v.ln() } else { 0.0 }, &one)?;
    let discreteness_b = Integrability {
        value: b1.value + b2.value,
        divergent: b1.divergent || b2.divergent,
    };

    Ok(DiagnosticsReport {
        integral_v,
        integral_abs_v,
        clr_integral,
        bargman,
        weight_1d,
        weight_2d_log2,
        lp_norm,
        frac_weight,
        discreteness_b,
    })
}

/// ∫_0^∞ r |V(r e1)| dr on the radial profile (the half-line Bargman gate).
fn bargman_profile(spec: &PotentialSpec) -> Integrability {
    quad::improper_growing(|r| r * spec.radial_profile(r).abs(), support_start(spec), 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball_clr() {
        // V = 1 on the unit ball in d = 3: ∫ V_+^{3/2} = vol = 4π/3.
        let spec = PotentialSpec::radial_well(3, 1.0, 1.0);
        let rep = diagnostics(&spec, DiagnosticsParams::default()).unwrap();
        assert!(!rep.clr_integral.divergent);
        assert!((rep.clr_integral.value - 4.0 * PI / 3.0).abs() < 1e-7);
        assert!((rep.integral_v.value - 4.0 * PI / 3.0).abs() < 1e-7);
    }

    #[test]
    fn gaussian_bargman_closed_form() {
        // V = e^{-x²}: ∫_0^∞ x e^{-x²} dx = 1/2.
        let spec = PotentialSpec::gaussian(1, 1.0, 1.0);
        let rep = diagnostics(&spec, DiagnosticsParams::default()).unwrap();
        assert!(!rep.bargman.divergent);
        assert!((rep.bargman.value - 0.5).abs() < 1e-8);
        // ∫ (1+x²)e^{-x²} dx = √π (1 + 1/2) over the line
        assert!((rep.weight_1d.value - 1.5 * PI.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn example1_clr_diverges() {
        let spec = PotentialSpec::inverse_square_spots(3, 1..=24);
        let rep = diagnostics(&spec, DiagnosticsParams::default()).unwrap();
        assert!(rep.clr_integral.divergent, "clr = {:?}", rep.clr_integral);
        // Each ball contributes a comparable constant to ∫ V^{3/2};
        // the flag must trip well before the list is exhausted.
        assert!(rep.integral_abs_v.divergent);
    }

    #[test]
    fn per_ball_clr_term_value() {
        // Single ball at |c| = 2, R = 2/3 in d = 3: ∫_B |x|^{-3} dx computed
        // against a brute Monte-Carlo-free oracle: spherical-shell slicing
        // with an independent trapezoid rule.
        let spec = PotentialSpec {
            dimension: 3,
            variant: PotentialVariant::InverseSquareOnBalls {
                balls: vec![super::super::Ball { center: vec![2.0, 0.0, 0.0], radius: 2.0 / 3.0 }],
            },
        };
        let rep = diagnostics(&spec, DiagnosticsParams::default()).unwrap();
        // oracle: trapezoid over r with cap area
        let c = 2.0;
        let radius = 2.0 / 3.0;
        let n = 400_000;
        let lo = c - radius;
        let hi = c + radius;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let r: f64 = lo + i as f64 * h;
            let cos_t = ((r * r + c * c - radius * radius) / (2.0 * r * c)).clamp(-1.0, 1.0);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * 2.0 * PI * r * r * (1.0 - cos_t) * r.powi(-3) * h;
        }
        assert!(
            (rep.clr_integral.value - acc).abs() < 1e-5 * acc,
            "slicing {} vs oracle {acc}",
            rep.clr_integral.value
        );
    }

    #[test]
    fn scaling_property_radial_well() {
        // c V scales linear entries by |c| and clr by c^{d/2} (c > 0, d = 3).
        let base = PotentialSpec::radial_well(3, 2.0, 1.3);
        let scaled = PotentialSpec::radial_well(3, 2.0 * 4.0, 1.3);
        let p = DiagnosticsParams::default();
        let r0 = diagnostics(&base, p).unwrap();
        let r1 = diagnostics(&scaled, p).unwrap();
        let c: f64 = 4.0;
        for (a, b) in [
            (r0.integral_v, r1.integral_v),
            (r0.integral_abs_v, r1.integral_abs_v),
            (r0.bargman, r1.bargman),
            (r0.weight_1d, r1.weight_1d),
            (r0.weight_2d_log2, r1.weight_2d_log2),
            (r0.frac_weight, r1.frac_weight),
        ] {
            assert!((b.value - c * a.value).abs() < 1e-7 * b.value.abs().max(1.0));
        }
        assert!(
            (r1.clr_integral.value - c.powf(1.5) * r0.clr_integral.value).abs()
                < 1e-7 * r1.clr_integral.value
        );
    }

    #[test]
    fn translates_in_2d_not_implemented() {
        let base = PotentialSpec::gaussian(2, 1.0, 1.0);
        let spec = PotentialSpec {
            dimension: 2,
            variant: PotentialVariant::WeightedTranslates {
                base: Box::new(base),
                translates: vec![super::super::Translate { center: vec![1.0, 0.0], weight: 1.0 }],
            },
        };
        assert!(matches!(
            diagnostics(&spec, DiagnosticsParams::default()),
            Err(Error::NotImplemented { .. })
        ));
    }

    #[test]
    fn translates_in_1d_work() {
        let base = PotentialSpec::gaussian(1, 1.0, 1.0);
        let spec = PotentialSpec {
            dimension: 1,
            variant: PotentialVariant::WeightedTranslates {
                base: Box::new(base),
                translates: vec![
                    super::super::Translate { center: vec![-2.0], weight: 1.0 },
                    super::super::Translate { center: vec![2.0], weight: 1.0 },
                ],
            },
        };
        let rep = diagnostics(&spec, DiagnosticsParams::default()).unwrap();
        assert!(!rep.integral_abs_v.divergent);
        assert!((rep.integral_abs_v.value - 2.0 * PI.sqrt()).abs() < 1e-7);
    }
}
