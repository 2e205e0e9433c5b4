//! Quadratic-form witness for potentials with strictly positive mean:
//! an annulus state ψ̂ = |k|^{-d} on ε < |k| < ε1 makes
//! <Hψ, ψ> = I1 - σ I2 negative once ε is small enough, because I1 grows
//! like ln(1/ε) (d = 2, α = 2; bounded in the fractional d = 1 case) while
//! I2 grows like ln²(1/ε). Everything is quadrature over log-radial
//! coordinates, where both integrals are nearly flat.

use crate::error::Error;
use crate::model::{symbol_eval_radial, PotentialSpec, SymbolSpec};
use crate::util::quad;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadformWitness {
    pub epsilon: f64,
    pub epsilon1: f64,
    /// Lower bound on V̂ over the doubled annulus ball, v0 = V̂(0)/2.
    pub v0: f64,
    pub i1: f64,
    pub i2: f64,
    /// I1 - σ I2; the witness certifies a negative form iff this is < 0.
    pub form_value: f64,
    pub sigma: f64,
}

impl QuadformWitness {
    /// The witness certifies a negative-energy state.
    pub fn is_valid(&self) -> bool {
        self.form_value < 0.0
    }
}

/// I1(ε) = ∫_{ε<|k|<ε1} a(k) |k|^{-2d} dk, radial.
fn i1_annulus(symbol: &SymbolSpec, eps: f64, eps1: f64) -> Result<f64, Error> {
    let d = symbol.dimension as i32;
    let area = crate::model::unit_sphere_area(symbol.dimension);
    // log substitution r = e^t
    let q = quad::integrate(
        |t: f64| {
            let r = t.exp();
            let a = symbol_eval_radial(symbol, r).expect("radial symbol");
            area * a * r.powi(-d)
        },
        eps.ln(),
        eps1.ln(),
        1e-8,
        1e-300,
    )?;
    Ok(q.value)
}

/// I2(ε) = ∬ V̂(|k-ξ|) |k|^{-d} |ξ|^{-d} dk dξ over the annulus pair,
/// reduced to log-radial (plus one angle in d = 2) tensor quadrature.
fn i2_annulus(
    potential: &PotentialSpec,
    eps: f64,
    eps1: f64,
    d: usize,
) -> Result<f64, Error> {
    let (lo, hi) = (eps.ln(), eps1.ln());
    match d {
        1 => {
            // four sign quadrants fold to 2 ∬ [V̂(|r-s|) + V̂(r+s)] dt_r dt_s
            let q = quad::integrate(
                |tr: f64| {
                    let r = tr.exp();
                    quad::integrate(
                        |ts: f64| {
                            let s = ts.exp();
                            let a = potential.fourier_radial((r - s).abs()).expect("radial V̂");
                            let b = potential.fourier_radial(r + s).expect("radial V̂");
                            a + b
                        },
                        lo,
                        hi,
                        1e-7,
                        1e-300,
                    )
                    .expect("inner I2 integral")
                    .value
                },
                lo,
                hi,
                1e-7,
                1e-300,
            )?;
            Ok(2.0 * q.value)
        }
        2 => {
            let q = quad::integrate(
                |tr: f64| {
                    let r = tr.exp();
                    quad::integrate(
                        |ts: f64| {
                            let s = ts.exp();
                            quad::integrate(
                                |theta: f64| {
                                    let dist2 =
                                        r * r + s * s - 2.0 * r * s * theta.cos();
                                    potential
                                        .fourier_radial(dist2.max(0.0).sqrt())
                                        .expect("radial V̂")
                                },
                                0.0,
                                2.0 * PI,
                                1e-7,
                                1e-300,
                            )
                            .expect("angular I2 integral")
                            .value
                        },
                        lo,
                        hi,
                        1e-6,
                        1e-300,
                    )
                    .expect("inner I2 integral")
                    .value
                },
                lo,
                hi,
                1e-6,
                1e-300,
            )?;
            Ok(2.0 * PI * q.value)
        }
        _ => Err(Error::NotImplemented { msg: format!("witness in dimension {d}") }),
    }
}

/// Scans V̂ to fix (ε1, v0), then halves ε from ε1/2 until I1 - σ I2 < 0 or
/// the floor ε = 1e-12 is reached. Always returns the last evaluated
/// witness; `is_valid` distinguishes found from not-found (σ = 0 always
/// lands at a nonnegative form).
pub fn quadform_witness(
    symbol: &SymbolSpec,
    potential: &PotentialSpec,
    sigma: f64,
) -> Result<QuadformWitness, Error> {
    let d = symbol.dimension;
    if d != potential.dimension {
        return Err(Error::invalid(vec![format!(
            "symbol dimension {d} vs potential dimension {}",
            potential.dimension
        )]));
    }
    if !(d == 1 || d == 2) {
        return Err(Error::NotImplemented { msg: format!("witness in dimension {d}") });
    }
    if sigma < 0.0 {
        return Err(Error::domain("quadform_witness", "sigma must be >= 0"));
    }
    let vhat0 = potential.fourier_radial(0.0)?;
    if vhat0 <= 0.0 {
        return Err(Error::domain(
            "quadform_witness",
            format!("V̂(0) = ∫V = {vhat0:.3e} must be positive for the witness"),
        ));
    }
    let v0 = 0.5 * vhat0;
    // ε1: largest radius with V̂ > V̂(0)/2 on the doubled ball, located by
    // scanning then bisecting the first crossing of V̂ = V̂(0)/2.
    let mut r_hi = 1e-3;
    while potential.fourier_radial(r_hi)? > v0 && r_hi < 1e6 {
        r_hi *= 2.0;
    }
    if r_hi >= 1e6 {
        return Err(Error::domain("quadform_witness", "V̂ never drops to V̂(0)/2"));
    }
    let crossing = crate::util::roots::bisect(
        |r| potential.fourier_radial(r).expect("radial V̂") - v0,
        r_hi / 2.0,
        r_hi,
        1e-12 * r_hi,
        0.0,
        200,
    )?;
    let eps1 = 0.5 * crossing;

    let mut eps = 0.5 * eps1;
    loop {
        let i1 = i1_annulus(symbol, eps, eps1)?;
        let i2 = i2_annulus(potential, eps, eps1, d)?;
        let form_value = i1 - sigma * i2;
        let witness = QuadformWitness { epsilon: eps, epsilon1: eps1, v0, i1, i2, form_value, sigma };
        if form_value < 0.0 || eps * 0.5 < 1e-12 {
            return Ok(witness);
        }
        eps *= 0.5;
    }
}

/// I2 alone at a given ε (the ln²-growth diagnostics used by acceptance).
pub fn i2_at(
    symbol: &SymbolSpec,
    potential: &PotentialSpec,
    eps: f64,
) -> Result<(f64, f64), Error> {
    let vhat0 = potential.fourier_radial(0.0)?;
    let v0 = 0.5 * vhat0;
    let mut r_hi = 1e-3;
    while potential.fourier_radial(r_hi)? > v0 && r_hi < 1e6 {
        r_hi *= 2.0;
    }
    let crossing = crate::util::roots::bisect(
        |r| potential.fourier_radial(r).expect("radial V̂") - v0,
        r_hi / 2.0,
        r_hi,
        1e-12 * r_hi,
        0.0,
        200,
    )?;
    let eps1 = 0.5 * crossing;
    Ok((i2_annulus(potential, eps, eps1, symbol.dimension)?, eps1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SymbolSpec;

    fn unit_mass_gaussian(d: usize) -> PotentialSpec {
        // amplitude chosen so ∫V = 1: A (√π w)^d = 1.
        let w = 1.0f64;
        let a = 1.0 / PI.sqrt().powi(d as i32);
        PotentialSpec::gaussian(d, a / w.powi(d as i32), w)
    }

    #[test]
    fn witness_found_2d_laplacian() {
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = unit_mass_gaussian(2);
        let w = quadform_witness(&sym, &pot, 0.1).unwrap();
        assert!(w.is_valid(), "no witness: {w:?}");
        assert!(w.epsilon >= 1e-12);
        assert!(w.i1 > 0.0 && w.i2 > 0.0 && w.v0 > 0.0);
        // ε1 for the unit-mass Gaussian: V̂(k) = e^{-k²/4} crosses 1/2 at
        // k = 2√(ln 2), so ε1 = √(ln 2).
        assert!((w.epsilon1 - (2f64.ln()).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn witness_found_1d_fractional() {
        let sym = SymbolSpec::power_law(1, 1.5);
        let pot = unit_mass_gaussian(1);
        let w = quadform_witness(&sym, &pot, 0.1).unwrap();
        assert!(w.is_valid(), "no witness: {w:?}");
    }

    #[test]
    fn sigma_zero_never_a_witness() {
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = unit_mass_gaussian(2);
        let w = quadform_witness(&sym, &pot, 0.0).unwrap();
        assert!(!w.is_valid());
        assert!(w.form_value >= 0.0);
        assert!(w.epsilon * 0.5 < 1e-12, "halving should hit the floor");
    }

    #[test]
    fn i2_log_squared_trend() {
        // I2(ε) ~ c ln²(ε1/ε): the ratio at ε/2 vs ε tracks (ln(ε/2)/ln ε)².
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = unit_mass_gaussian(2);
        let eps = 1e-6;
        let (i2_a, eps1) = i2_at(&sym, &pot, eps).unwrap();
        let (i2_b, _) = i2_at(&sym, &pot, eps / 2.0).unwrap();
        let measured = i2_b / i2_a;
        let expected = ((eps1 / (eps / 2.0)).ln() / (eps1 / eps).ln()).powi(2);
        assert!(
            (measured / expected - 1.0).abs() < 0.1,
            "I2 ratio {measured} vs ln² trend {expected}"
        );
    }

    #[test]
    fn negative_mean_rejected() {
        let sym = SymbolSpec::power_law(2, 2.0);
        let pot = PotentialSpec::gaussian(2, -1.0, 1.0);
        assert!(quadform_witness(&sym, &pot, 0.1).is_err());
    }
}
