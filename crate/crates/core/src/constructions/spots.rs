//! Large separated spots: V >= |x|^{-2} on balls B(x_n, R_n) with
//! |x_n| = 2^n, R_n = 2^n/3. A single scaled bump profile ψ on the unit ball
//! gives Rayleigh quotients <Hψ_n, ψ_n> <= (|C1| - σ C2) R_n^{d-2}, so for
//! σ above σ* = |C1|/C2 every spot binds and N(σV) = ∞.

use crate::error::Error;
use crate::model::unit_sphere_area;
use crate::util::quad;
use serde::{Deserialize, Serialize};

/// Radial C¹ profile supported in the unit ball, with its derivative.
pub struct SpotProfile<F: Fn(f64) -> f64 + Sync, G: Fn(f64) -> f64 + Sync> {
    pub psi: F,
    pub dpsi: G,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpotsThreshold {
    /// C1 = -∫ |∇ψ|² dx (= ∫ Δψ ψ dx) < 0.
    pub c1: f64,
    /// C2 = ∫_{|u|<1} ψ(u)² / |3 e1 + u|² du (|x_n|/R_n = 3 by construction).
    pub c2: f64,
    /// σ* = |C1| / C2: every spot's Rayleigh quotient is negative above it.
    pub sigma_star: f64,
    pub dimension: usize,
}

impl SpotsThreshold {
    /// Exact R^{d-2} scaling of the Rayleigh numerator for spot n:
    /// <Hψ_n, ψ_n> <= (|C1| - σ C2) (2^n/3)^{d-2}.
    pub fn rayleigh_upper_bound(&self, sigma: f64, n: u32) -> f64 {
        let r_n = 2f64.powi(n as i32) / 3.0;
        (self.c1.abs() - sigma * self.c2) * r_n.powi(self.dimension as i32 - 2)
    }
}

/// Angular average of |3 e1 + u|^{-2} over the sphere |u| = r in dimension d.
/// d = 3 has the closed form ln((3+r)/(3-r)) / (6r); other d go through the
/// Gegenbauer weight sin^{d-2}θ.
fn inverse_square_average(r: f64, d: usize) -> Result<f64, Error> {
    if d == 3 {
        if r == 0.0 {
            return Ok(1.0 / 9.0);
        }
        return Ok(((3.0 + r) / (3.0 - r)).ln() / (6.0 * r));
    }
    let p = d as f64 - 2.0;
    let num = quad::integrate(
        |theta: f64| theta.sin().powf(p) / (9.0 + r * r + 6.0 * r * theta.cos()),
        0.0,
        std::f64::consts::PI,
        1e-10,
        1e-300,
    )?
    .value;
    let den = quad::integrate(
        |theta: f64| theta.sin().powf(p),
        0.0,
        std::f64::consts::PI,
        1e-12,
        1e-300,
    )?
    .value;
    Ok(num / den)
}

/// Computes (C1, C2, σ*) for a C¹ bump profile supported in the unit ball.
pub fn spots_threshold<F, G>(
    profile: &SpotProfile<F, G>,
    dimension: usize,
) -> Result<SpotsThreshold, Error>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    if dimension < 3 {
        return Err(Error::domain("spots_threshold", "the transient construction needs d >= 3"));
    }
    // C¹ sanity at the support edge: ψ(1) = 0 (continuity of the extension).
    let edge = (profile.psi)(1.0);
    if edge.abs() > 1e-10 {
        return Err(Error::domain(
            "spots_threshold",
            format!("profile must vanish at the unit sphere; ψ(1) = {edge:.3e}"),
        ));
    }
    let area = unit_sphere_area(dimension);
    let grad_sq = quad::integrate(
        |r: f64| {
            let d = (profile.dpsi)(r);
            d * d * area * r.powi(dimension as i32 - 1)
        },
        0.0,
        1.0,
        1e-11,
        1e-300,
    )?
    .value;
    let c2 = quad::integrate(
        |r: f64| {
            let p = (profile.psi)(r);
            p * p
                * inverse_square_average(r, dimension).expect("angular average")
                * area
                * r.powi(dimension as i32 - 1)
        },
        0.0,
        1.0,
        1e-10,
        1e-300,
    )?
    .value;
    if c2 <= 0.0 {
        return Err(Error::domain("spots_threshold", "profile has no mass"));
    }
    Ok(SpotsThreshold { c1: -grad_sq, c2, sigma_star: grad_sq / c2, dimension })
}

/// The reference profile (1 - r²)² used by the certificates.
pub fn quartic_bump() -> SpotProfile<impl Fn(f64) -> f64 + Sync, impl Fn(f64) -> f64 + Sync> {
    SpotProfile {
        psi: |r: f64| {
            let t = 1.0 - r * r;
            t * t
        },
        dpsi: |r: f64| -4.0 * r * (1.0 - r * r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quartic_bump_closed_forms_d3() {
        // ∫|∇ψ|² = 64π ∫ r⁴(1-r²)² dr = 64π (1/5 - 2/7 + 1/9) = 512π/315.
        let t = spots_threshold(&quartic_bump(), 3).unwrap();
        let exact_c1 = -512.0 * PI / 315.0;
        assert!((t.c1 - exact_c1).abs() < 1e-9 * exact_c1.abs(), "C1 = {} vs {exact_c1}", t.c1);
        assert!(t.c2 > 0.0);
        assert!(t.sigma_star > 0.0 && t.sigma_star.is_finite());
    }

    #[test]
    fn profile_scaling_leaves_sigma_star_unchanged() {
        let doubled = SpotProfile {
            psi: |r: f64| {
                let t = 1.0 - r * r;
                2.0 * t * t
            },
            dpsi: |r: f64| -8.0 * r * (1.0 - r * r),
        };
        let t1 = spots_threshold(&quartic_bump(), 3).unwrap();
        let t2 = spots_threshold(&doubled, 3).unwrap();
        assert!((t1.sigma_star - t2.sigma_star).abs() < 1e-9 * t1.sigma_star);
        // C1 and C2 both scale by 4.
        assert!((t2.c1 - 4.0 * t1.c1).abs() < 1e-8 * t2.c1.abs());
        assert!((t2.c2 - 4.0 * t1.c2).abs() < 1e-8 * t2.c2);
    }

    #[test]
    fn rayleigh_negative_above_threshold() {
        let t = spots_threshold(&quartic_bump(), 3).unwrap();
        let sigma = 2.0 * t.sigma_star;
        for n in 1..=10 {
            let rq = t.rayleigh_upper_bound(sigma, n);
            assert!(rq < 0.0, "spot {n} fails to bind at 2σ*: {rq}");
        }
        // and each bound scales by exactly 2^{d-2} per step
        let r1 = t.rayleigh_upper_bound(sigma, 4);
        let r2 = t.rayleigh_upper_bound(sigma, 5);
        assert!((r2 / r1 - 2.0).abs() < 1e-12);
        // below threshold nothing is certified
        assert!(t.rayleigh_upper_bound(0.5 * t.sigma_star, 3) > 0.0);
    }

    #[test]
    fn d3_angular_average_matches_quadrature() {
        for &r in &[0.2, 0.5, 0.9] {
            let closed = inverse_square_average(r, 3).unwrap();
            let num = quad::integrate(
                |theta: f64| theta.sin() / (9.0 + r * r + 6.0 * r * theta.cos()),
                0.0,
                PI,
                1e-12,
                0.0,
            )
            .unwrap()
            .value;
            assert!((closed - num / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dimension_four_also_works() {
        let t = spots_threshold(&quartic_bump(), 4).unwrap();
        assert!(t.sigma_star.is_finite() && t.sigma_star > 0.0);
    }

    #[test]
    fn non_vanishing_profile_rejected() {
        let bad = SpotProfile { psi: |_| 1.0, dpsi: |_| 0.0 };
        assert!(spots_threshold(&bad, 3).is_err());
    }
}
