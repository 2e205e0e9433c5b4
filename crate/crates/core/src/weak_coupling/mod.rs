//! Quantitative weak-coupling machinery: the coupling constant m through its
//! two integral representations, the leading-order secular predictions for
//! λ(σ), the fractional Green-kernel splitting, and the quadratic-form
//! witness for potentials with positive mean.

mod green;
mod witness;

pub use green::{green_g_split, green_kernel};
pub use witness::{i2_at, quadform_witness, QuadformWitness};

use crate::error::Error;
use crate::model::{symbol_eval_radial, unit_sphere_area, PotentialSpec, SymbolSpec, SymbolVariant};
use crate::specfun::{c1_alpha, c2_alpha};
use crate::util::quad;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The two routes to m and their disagreement (absolute).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CouplingConstant {
    /// ∫ |V̂(k)|² / a(k) dk with the unitary Fourier normalization.
    pub m_fourier: f64,
    /// Double integral of V against the renormalized kernel of 1/a(k):
    /// -ln|x-y|/(2π) in the planar case, -c2(α)|x-y|^{α-1} on the line.
    pub m_position: f64,
    pub discrepancy: f64,
}

/// Which secular law applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// d = 2, α = 2: ln|λ| = -4π/(σ²m).
    Log2D,
    /// d = 1, α in (1, 2]: |λ| = (c1(α) σ² m)^{α/(α-1)}.
    Fractional1D,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SecularPrediction {
    pub sigma: f64,
    pub lambda_predicted: f64,
    pub regime: Regime,
    pub alpha: f64,
}

/// Validates that (symbol, potential) sit in one of the two weak-coupling
/// regimes and returns (d, α).
fn regime_of(symbol: &SymbolSpec, potential: &PotentialSpec) -> Result<(usize, f64), Error> {
    if symbol.dimension != potential.dimension {
        return Err(Error::invalid(vec![format!(
            "symbol dimension {} vs potential dimension {}",
            symbol.dimension, potential.dimension
        )]));
    }
    let alpha = match symbol.variant {
        SymbolVariant::PowerLaw { alpha } => alpha,
        _ => {
            return Err(Error::NotImplemented {
                msg: "coupling constant needs a power-law symbol".to_string(),
            })
        }
    };
    match (symbol.dimension, alpha) {
        (2, a) if a == 2.0 => Ok((2, 2.0)),
        (1, a) if a > 1.0 && a <= 2.0 => Ok((1, a)),
        (d, a) => Err(Error::NotImplemented {
            msg: format!(
                "weak coupling regime requires d=2, α=2 or d=1, α in (1,2]; got d={d}, α={a}"
            ),
        }),
    }
}

/// Cumulative radial first moment F(s) = ∫_0^s r V(r) dr, in closed form for
/// the Gaussian-based variants and the centered well.
fn radial_cumulative(potential: &PotentialSpec, s: f64) -> Result<f64, Error> {
    use crate::model::PotentialVariant::*;
    let gauss = |a: f64, w: f64, s: f64| 0.5 * a * w * w * (1.0 - (-(s * s) / (w * w)).exp());
    match &potential.variant {
        GaussianBump { amplitude, width, center } if center.iter().all(|&c| c == 0.0) => {
            Ok(gauss(*amplitude, *width, s))
        }
        MeanZeroPair { first, second }
            if first.center.iter().all(|&c| c == 0.0)
                && second.center.iter().all(|&c| c == 0.0) =>
        {
            Ok(gauss(first.amplitude, first.width, s) + gauss(second.amplitude, second.width, s))
        }
        RadialWell { height, radius, center } if center.iter().all(|&c| c == 0.0) => {
            let t = s.min(*radius);
            Ok(0.5 * height * t * t)
        }
        _ => Err(Error::NotImplemented {
            msg: "cumulative moment needs a centered radial variant".to_string(),
        }),
    }
}

/// Coupling constant m for mean-zero V, by the Fourier route and the
/// position route, with the discrepancy between them.
///
/// Rejects potentials with ∫V ≠ 0: the Fourier integral then diverges at
/// k = 0 and the positive-mean case belongs to the quadratic-form witness.
pub fn coupling_constant_m(
    potential: &PotentialSpec,
    symbol: &SymbolSpec,
) -> Result<CouplingConstant, Error> {
    let (d, alpha) = regime_of(symbol, potential)?;

    // Mean-zero gate: V̂(0) = ∫V against the L¹ mass scale.
    let vhat0 = potential.fourier_radial(0.0)?;
    let area = unit_sphere_area(d);
    let mass_scale = quad::integrate_to_inf(
        |r| potential.radial_profile(r).abs() * area * r.powi(d as i32 - 1),
        0.0,
        1e-10,
        1e-300,
    )?
    .value;
    if vhat0.abs() > 1e-8 * mass_scale.max(1e-300) {
        return Err(Error::Divergent {
            what: format!(
                "coupling constant: ∫V = {vhat0:.3e} ≠ 0 makes ∫|V̂|²/a(k) diverge at k = 0 \
                 (positive-mean potentials go through the quadratic-form witness instead)"
            ),
        });
    }
    if mass_scale == 0.0 {
        return Ok(CouplingConstant { m_fourier: 0.0, m_position: 0.0, discrepancy: 0.0 });
    }

    // Fourier route: (2π)^{-d} ω_{d-1} ∫ |V̂(k)|² / a(k) k^{d-1} dk.
    let norm = area / (2.0 * PI).powi(d as i32);
    let m_fourier = quad::integrate_to_inf(
        |k| {
            let vh = potential.fourier_radial(k).expect("checked variant");
            let a = symbol_eval_radial(symbol, k).expect("power law");
            norm * vh * vh / a * k.powi(d as i32 - 1)
        },
        0.0,
        1e-10,
        1e-300,
    )?
    .value;

    let m_position = match d {
        2 => m_position_log2d(potential)?,
        _ => m_position_fractional(potential, alpha)?,
    };

    Ok(CouplingConstant { m_fourier, m_position, discrepancy: (m_fourier - m_position).abs() })
}

/// m = -(1/2π) ∬ V(x) ln|x-y| V(y) dx dy for radial V, reduced by the circle
/// mean value of the log kernel (angular average = ln max(r, s)):
/// m = -4π ∫ s V(s) ln(s) F(s) ds with F the cumulative first moment.
fn m_position_log2d(potential: &PotentialSpec) -> Result<f64, Error> {
    let r_max = potential.support_radius_hint();
    // Sign-changing integrands can pass through zero, so the quadrature
    // needs an absolute floor tied to the potential's own scale.
    let mass = quad::integrate(|r| r * potential.radial_profile(r).abs(), 0.0, r_max, 1e-9, 1e-300)?
        .value;
    let abs_floor = 1e-13 * mass * mass * (1.0 + r_max.ln().abs());
    let q = quad::integrate(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            s * potential.radial_profile(s)
                * s.ln()
                * radial_cumulative(potential, s).expect("checked variant")
        },
        0.0,
        r_max,
        1e-10,
        abs_floor,
    )?;
    Ok(-4.0 * PI * q.value)
}

/// m = -c2(α) ∬_{R×R} V(x) |x-y|^{α-1} V(y) dx dy for even V, folded to the
/// quarter plane:
/// m = -2 c2(α) ∫_0^∞ ∫_0^∞ V(x) V(y) (|x-y|^{α-1} + (x+y)^{α-1}) dx dy.
/// At α = 2 the kernel is the explicit -|x-y|/2, i.e. c2 = 1/2.
fn m_position_fractional(potential: &PotentialSpec, alpha: f64) -> Result<f64, Error> {
    let c2 = if alpha < 2.0 { c2_alpha(alpha)? } else { 0.5 };
    let r_max = potential.support_radius_hint();
    let mass =
        quad::integrate(|r| potential.radial_profile(r).abs(), 0.0, r_max, 1e-9, 1e-300)?.value;
    let kernel_scale = (2.0 * r_max).powf(alpha - 1.0);
    let inner_floor = 1e-13 * mass * kernel_scale;
    let outer = quad::integrate(
        |x| {
            let inner = quad::integrate_broken(
                |y| {
                    potential.radial_profile(y)
                        * ((x - y).abs().powf(alpha - 1.0) + (x + y).powf(alpha - 1.0))
                },
                &[0.0, x.min(r_max), r_max],
                1e-9,
                inner_floor,
            )
            .expect("inner kernel integral");
            potential.radial_profile(x) * inner.value
        },
        0.0,
        r_max,
        1e-8,
        1e-13 * mass * mass * kernel_scale,
    )?;
    Ok(-2.0 * c2 * outer.value)
}

/// Leading-order bound-state prediction from the secular equation with the
/// o(1) remainders dropped. The non-perturbative value is the Birman–
/// Schwinger root; acceptance compares the two.
pub fn predict_lambda(
    sigma: f64,
    m: f64,
    regime: Regime,
    alpha: f64,
) -> Result<SecularPrediction, Error> {
    if sigma <= 0.0 {
        return Err(Error::domain("predict_lambda", format!("sigma = {sigma} must be > 0")));
    }
    if m <= 0.0 {
        return Err(Error::domain("predict_lambda", format!("m = {m} must be > 0")));
    }
    let lambda = match regime {
        Regime::Log2D => {
            if alpha != 2.0 {
                return Err(Error::domain("predict_lambda", "Log2D regime fixes α = 2"));
            }
            -(-4.0 * PI / (sigma * sigma * m)).exp()
        }
        Regime::Fractional1D => {
            if !(alpha > 1.0 && alpha <= 2.0) {
                return Err(Error::domain(
                    "predict_lambda",
                    format!("Fractional1D needs α in (1, 2], got {alpha}"),
                ));
            }
            let c1 = c1_alpha(alpha)?;
            -(c1 * sigma * sigma * m).powf(alpha / (alpha - 1.0))
        }
    };
    Ok(SecularPrediction { sigma, lambda_predicted: lambda, regime, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_2d() -> (PotentialSpec, SymbolSpec) {
        (PotentialSpec::mean_zero_pair(2, 1.0, 1.0, 2.0), SymbolSpec::power_law(2, 2.0))
    }

    /// Closed form for the Fourier route with the unit-amplitude concentric
    /// pair in 2D (V̂ = π w1² (e^{-p k²} - e^{-q k²}), Frullani integral):
    /// m = (π/4) w1⁴ ln((p+q)²/(4pq)), p = w1²/4, q = w2²/4.
    fn m_2d_closed(w1: f64, w2: f64) -> f64 {
        let p = w1 * w1 / 4.0;
        let q = w2 * w2 / 4.0;
        0.25 * PI * w1.powi(4) * ((p + q) * (p + q) / (4.0 * p * q)).ln()
    }

    #[test]
    fn m_fourier_matches_closed_form_2d() {
        let (pot, sym) = pair_2d();
        let m = coupling_constant_m(&pot, &sym).unwrap();
        let closed = m_2d_closed(1.0, 2.0);
        assert!(
            (m.m_fourier - closed).abs() < 1e-8 * closed,
            "quadrature {} vs closed {closed}",
            m.m_fourier
        );
    }

    #[test]
    fn m_duality_2d() {
        let (pot, sym) = pair_2d();
        let m = coupling_constant_m(&pot, &sym).unwrap();
        assert!(m.m_fourier > 0.0);
        assert!(
            m.discrepancy < 1e-6 * m.m_fourier,
            "fourier {} vs position {}",
            m.m_fourier,
            m.m_position
        );
    }

    #[test]
    fn m_duality_1d_fractional() {
        let pot = PotentialSpec::mean_zero_pair(1, 1.0, 1.0, 2.0);
        let sym = SymbolSpec::power_law(1, 1.5);
        let m = coupling_constant_m(&pot, &sym).unwrap();
        assert!(m.m_fourier > 0.0);
        assert!(
            m.discrepancy < 1e-6 * m.m_fourier,
            "fourier {} vs position {}",
            m.m_fourier,
            m.m_position
        );
    }

    #[test]
    fn m_scaling_quadratic() {
        let (pot, sym) = pair_2d();
        let scaled = PotentialSpec::mean_zero_pair(2, 2.0, 1.0, 2.0);
        let m1 = coupling_constant_m(&pot, &sym).unwrap();
        let m2 = coupling_constant_m(&scaled, &sym).unwrap();
        assert!((m2.m_fourier - 4.0 * m1.m_fourier).abs() < 1e-8 * m2.m_fourier);
    }

    #[test]
    fn nonzero_mean_rejected() {
        let pot = PotentialSpec::gaussian(2, 1.0, 1.0);
        let sym = SymbolSpec::power_law(2, 2.0);
        match coupling_constant_m(&pot, &sym) {
            Err(Error::Divergent { .. }) => {}
            other => panic!("expected divergent-m, got {other:?}"),
        }
    }

    #[test]
    fn predict_lambda_reference_points() {
        // Log2D with σ²m = 4π: λ = -e^{-1}.
        let p = predict_lambda((4.0 * PI).sqrt(), 1.0, Regime::Log2D, 2.0).unwrap();
        assert!((p.lambda_predicted + (-1.0f64).exp()).abs() < 1e-12);
        // Fractional at α = 2 collapses to λ = -(σ²m/2)².
        let p = predict_lambda(0.7, 1.3, Regime::Fractional1D, 2.0).unwrap();
        let expect = -(0.5 * 0.7f64.powi(2) * 1.3).powi(2);
        assert!((p.lambda_predicted - expect).abs() < 1e-9 * expect.abs());
        // Homogeneity: |λ(2σ)|/|λ(σ)| = 4^{α/(α-1)}.
        let a = 1.5;
        let p1 = predict_lambda(0.01, 2.0, Regime::Fractional1D, a).unwrap();
        let p2 = predict_lambda(0.02, 2.0, Regime::Fractional1D, a).unwrap();
        let ratio = p2.lambda_predicted / p1.lambda_predicted;
        assert!((ratio - 4.0f64.powf(a / (a - 1.0))).abs() < 1e-9 * ratio.abs());
    }

    #[test]
    fn log2d_prediction_linear_in_inverse_sigma_squared() {
        // σ small enough to be asymptotic, large enough that e^{-4π/(σ²m)}
        // stays above the double-precision floor.
        let m = 2.37;
        let sigmas = [0.1, 0.15, 0.2, 0.3];
        let xs: Vec<f64> = sigmas.iter().map(|s| 1.0 / (s * s)).collect();
        let ys: Vec<f64> = sigmas
            .iter()
            .map(|&s| {
                predict_lambda(s, m, Regime::Log2D, 2.0).unwrap().lambda_predicted.abs().ln()
            })
            .collect();
        let (slope, intercept, resid) = crate::util::fit::linear_fit(&xs, &ys);
        assert!((slope + 4.0 * PI / m).abs() < 1e-9);
        assert!(intercept.abs() < 1e-9);
        assert!(resid < 1e-9);
    }

    #[test]
    fn predict_lambda_domain_errors() {
        assert!(predict_lambda(0.0, 1.0, Regime::Log2D, 2.0).is_err());
        assert!(predict_lambda(1.0, 0.0, Regime::Log2D, 2.0).is_err());
        assert!(predict_lambda(1.0, 1.0, Regime::Fractional1D, 1.0).is_err());
    }
}
