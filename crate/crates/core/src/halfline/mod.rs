//! The Neumann half-line problem: shooting for ψ'' + σVψ = 0 with
//! ψ(0) = 1, ψ'(0) = 0, Jost-type solutions built from the Picard series of
//! the tail integral equation, the σ-expansion coefficients (a, b, c²), and
//! the truncated-test-function certificate.

mod ivp;
mod jost;

pub use ivp::{
    integrate_ivp, suggested_x_max, truncated_form_value, FormCertificate, ShootingTrace,
};
pub use jost::{jost_solution, JostData};

use crate::error::Error;
use crate::model::{potential_eval, PotentialSpec};
use crate::util::quad;
use serde::{Deserialize, Serialize};

/// A potential on the half-line x >= 0. Implemented by `PotentialSpec`
/// (d = 1, evaluated at the coordinate) and by plain closures via
/// [`FnProfile`], which the closed-form test oracles use.
pub trait HalflineProfile: Sync {
    fn eval(&self, x: f64) -> f64;
    /// Beyond this point the potential is numerically negligible.
    fn support_end(&self) -> f64;
}

impl HalflineProfile for PotentialSpec {
    fn eval(&self, x: f64) -> f64 {
        assert_eq!(self.dimension, 1, "half-line problems take 1-dimensional potentials");
        potential_eval(self, &[x])
    }
    fn support_end(&self) -> f64 {
        self.support_radius_hint()
    }
}

/// Closure-backed profile.
pub struct FnProfile<F: Fn(f64) -> f64 + Sync> {
    pub f: F,
    pub support: f64,
}

impl<F: Fn(f64) -> f64 + Sync> HalflineProfile for FnProfile<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn support_end(&self) -> f64 {
        self.support
    }
}

/// The σ-expansion coefficients of the Jost boundary data:
/// a = ∫ ξV dξ, b = ∫ V dξ, c² = ∫ (∫_η^∞ V)² dη.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub a: f64,
    pub b: f64,
    pub c_squared: f64,
}

/// Quadrature values of the three coefficients, relative tolerance 1e-10.
/// The Bargman gate (∫ x|V| dx finite) is checked first.
pub fn expansion_coefficients(v: &dyn HalflineProfile) -> Result<ExpansionCoefficients, Error> {
    let bargman = quad::improper_growing(|x| x * v.eval(x).abs(), v.support_end().max(1.0), 1e-10);
    if bargman.divergent {
        return Err(Error::Divergent { what: "∫ x |V| dx (Bargman gate)".to_string() });
    }
    let end = v.support_end().max(1.0);
    let a = quad::integrate(|x| x * v.eval(x), 0.0, end, 1e-10, 1e-300)?.value;
    let b = quad::integrate(|x| v.eval(x), 0.0, end, 1e-10, 1e-300)?.value;
    // T(η) = ∫_η^∞ V: inner quadrature per node over the remaining support.
    let c_squared = quad::integrate(
        |eta: f64| {
            let t = quad::integrate(|x| v.eval(x), eta, end, 1e-10, 1e-300)
                .expect("tail integral")
                .value;
            t * t
        },
        0.0,
        end,
        1e-9,
        1e-300,
    )?
    .value;
    Ok(ExpansionCoefficients { a, b, c_squared })
}
