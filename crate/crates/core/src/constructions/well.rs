//! The 2D circular well tuned so that λ < 0 is an exact eigenvalue: the
//! matching equation
//!
//!   τ J0'(τ)/J0(τ) = y K0'(y)/K0(y),   y = √|λ| δ, τ = √(h+λ) δ,
//!
//! has a unique root τ in (0, j01) (the left side falls monotonically from 0
//! to -∞ there while the right side is a fixed negative number), and the
//! depth follows as h = |λ| + τ²/δ².

use crate::error::Error;
use crate::specfun::{bessel_j0, bessel_j1, bessel_k0, bessel_k1, j0_first_zero};
use crate::util::{par, roots};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WellSolution {
    pub lambda: f64,
    pub delta: f64,
    pub tau: f64,
    /// |λ| + τ²/δ². Overflows for the extreme narrow wells of the
    /// essential-spectrum construction; those store the depth in log form
    /// and work with the always-representable bound `depth_bound`.
    pub h: f64,
}

impl WellSolution {
    /// h δ² = |λ|δ² + τ², computed without forming h (exact even where h
    /// itself overflows f64).
    pub fn depth_bound(&self) -> f64 {
        let y = self.lambda.abs().sqrt() * self.delta;
        y * y + self.tau * self.tau
    }

    /// log10 of the depth h, via the bound (representable for every
    /// admissible δ > 0).
    pub fn log10_h(&self) -> f64 {
        self.depth_bound().log10() - 2.0 * self.delta.log10()
    }
}

/// The matching function whose root is τ.
fn matching(tau: f64, rhs: f64) -> f64 {
    tau * (-bessel_j1(tau)) / bessel_j0(tau) - rhs
}

/// Right-hand side y K0'(y)/K0(y) = -y K1(y)/K0(y).
fn rhs_of(y: f64) -> Result<f64, Error> {
    Ok(-y * bessel_k1(y)? / bessel_k0(y)?)
}

/// Solves the matching equation for (λ, δ) with 0 < δ <= 1/√|λ|.
/// The residual of the returned solution is below 1e-10.
pub fn well_match(lambda: f64, delta: f64) -> Result<WellSolution, Error> {
    if lambda >= 0.0 {
        return Err(Error::domain("well_match", format!("lambda = {lambda} must be negative")));
    }
    let y = lambda.abs().sqrt() * delta;
    if !(delta > 0.0 && y <= 1.0) {
        return Err(Error::domain(
            "well_match",
            format!("need 0 < delta <= 1/√|λ|; got delta = {delta}, √|λ|δ = {y}"),
        ));
    }
    let rhs = rhs_of(y)?;
    let j01 = j0_first_zero();
    // Bracket barely inside (0, j01); the matching function is monotone.
    let root = roots::illinois(
        |tau| matching(tau, rhs),
        1e-12,
        j01 * (1.0 - 1e-12),
        0.0,
        1e-12,
        300,
    )?;
    let sol =
        WellSolution { lambda, delta, tau: root, h: lambda.abs() + root * root / (delta * delta) };
    let resid = matching(sol.tau, rhs).abs();
    if resid > 1e-10 {
        return Err(Error::NoConvergence { op: "well_match residual", budget: 300 });
    }
    Ok(sol)
}

/// Batch matching over (λ, δ) pairs; runs on rayon under the `parallel`
/// feature (entries are independent).
pub fn well_match_batch(pairs: &[(f64, f64)]) -> Vec<Result<WellSolution, Error>> {
    par::map_batch(pairs, |&(lambda, delta)| well_match(lambda, delta))
}

impl WellSolution {
    /// |matching residual| of this solution.
    pub fn matching_residual(&self) -> Result<f64, Error> {
        let y = self.lambda.abs().sqrt() * self.delta;
        Ok(matching(self.tau, rhs_of(y)?).abs())
    }

    /// Eigenfunction value at radius r (continuous across r = δ by the
    /// normalization to 1 at the interface).
    pub fn eigenfunction(&self, r: f64) -> Result<f64, Error> {
        let q = self.tau / self.delta;
        let kappa = self.lambda.abs().sqrt();
        let y = kappa * self.delta;
        if r < self.delta {
            Ok(bessel_j0(q * r) / bessel_j0(self.tau))
        } else {
            Ok(bessel_k0(kappa * r)? / bessel_k0(y)?)
        }
    }
}

/// ODE and interface residuals of the matched eigenfunction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WellResidual {
    /// max over the radial grid of |−ψ'' − ψ'/r − (v + λ)ψ| divided by the
    /// local magnitude of the equation's terms (the raw residual scales with
    /// the well depth q² = τ²/δ², so only the relative form is meaningful
    /// across the admissible region).
    pub ode_residual: f64,
    /// |ψ'(δ-) - ψ'(δ+)| · δ — exactly the matching-equation residual.
    pub derivative_jump: f64,
}

/// Evaluates the radial-ODE residual in the scaled variables (u = qr inside,
/// u = κr outside) with five-point finite differences on the implemented
/// Bessel functions, normalized by the local term magnitude.
pub fn well_eigenfunction_residual(sol: &WellSolution) -> Result<WellResidual, Error> {
    let kappa = sol.lambda.abs().sqrt();
    let y = kappa * sol.delta;

    // Five-point stencils. J0 is entire with O(1) derivatives, so an
    // absolute step is right; K0's derivatives scale like u^{-k}, so its
    // step is relative (0.004u balances the log-part truncation against
    // evaluation noise).
    let d2 = |f: &dyn Fn(f64) -> f64, u: f64, h: f64| {
        (-f(u + 2.0 * h) + 16.0 * f(u + h) - 30.0 * f(u) + 16.0 * f(u - h) - f(u - 2.0 * h))
            / (12.0 * h * h)
    };
    let d1 = |f: &dyn Fn(f64) -> f64, u: f64, h: f64| {
        (-f(u + 2.0 * h) + 8.0 * f(u + h) - 8.0 * f(u - h) + f(u - 2.0 * h)) / (12.0 * h)
    };

    let mut worst: f64 = 0.0;
    // interior samples: ψ = J0(u)/J0(τ), residual q²(J0'' + J0'/u + J0)
    let jf: &dyn Fn(f64) -> f64 = &bessel_j0;
    for i in 1..=20 {
        let u = sol.tau * i as f64 / 21.0;
        let h = 2e-3;
        let t1 = d2(jf, u, h);
        let t2 = d1(jf, u, h) / u;
        let t3 = bessel_j0(u);
        let resid = (t1 + t2 + t3).abs();
        let scale = t1.abs() + t2.abs() + t3.abs();
        worst = worst.max(resid / scale.max(1e-300));
    }
    // exterior samples: ψ = K0(u)/K0(y), residual κ²(K0'' + K0'/u - K0).
    // Below u ~ 0.02 the kernel is numerically the harmonic log and finite
    // differences lose the identity in rounding; the sample window starts
    // there (any u > y is a legitimate exterior radius r = u/κ > δ).
    let kf: &dyn Fn(f64) -> f64 = &|u: f64| bessel_k0(u).unwrap_or(f64::NAN);
    let u_lo = (1.05 * y).max(0.02);
    let u_hi = (3.0f64).max(10.0 * y);
    for i in 0..20 {
        let u = u_lo * (u_hi / u_lo).powf(i as f64 / 19.0);
        // relative step in the log regime, absolute in the exponential one
        let h = 4e-3 * u.min(1.0);
        let t1 = d2(kf, u, h);
        let t2 = d1(kf, u, h) / u;
        let t3 = -bessel_k0(u)?;
        let resid = (t1 + t2 + t3).abs();
        let scale = t1.abs() + t2.abs() + t3.abs();
        worst = worst.max(resid / scale.max(1e-300));
    }

    Ok(WellResidual { ode_residual: worst, derivative_jump: sol.matching_residual()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_reference_case() {
        // λ = -1, δ = 1: residual at tolerance, τ inside (0, j01).
        let sol = well_match(-1.0, 1.0).unwrap();
        assert!(sol.matching_residual().unwrap() <= 1e-10);
        assert!(sol.tau > 0.0 && sol.tau < 2.404825557695773);
        assert!(sol.h > sol.lambda.abs());
    }

    #[test]
    fn residuals_small_at_reference() {
        let sol = well_match(-1.0, 1.0).unwrap();
        let r = well_eigenfunction_residual(&sol).unwrap();
        assert!(r.ode_residual <= 1e-8, "ODE residual {}", r.ode_residual);
        assert!(r.derivative_jump <= 1e-10, "jump {}", r.derivative_jump);
        // continuity at the interface by construction
        let inner = sol.eigenfunction(sol.delta * (1.0 - 1e-12)).unwrap();
        let outer = sol.eigenfunction(sol.delta).unwrap();
        assert!((inner - outer).abs() < 1e-9);
    }

    #[test]
    fn random_admissible_pairs() {
        // 100 (λ, δ) with y = √|λ|δ across (0, 1]; residuals at tolerance.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let pairs: Vec<(f64, f64)> = (0..100)
            .map(|_| {
                let lambda = -(0.1 + 1.9 * rng.random::<f64>());
                let y = 0.05 + 0.95 * rng.random::<f64>();
                (lambda, y / lambda.abs().sqrt())
            })
            .collect();
        for sol in well_match_batch(&pairs) {
            let sol = sol.unwrap();
            assert!(sol.matching_residual().unwrap() <= 1e-10);
            let r = well_eigenfunction_residual(&sol).unwrap();
            assert!(r.ode_residual <= 1e-8, "ODE residual {} at {:?}", r.ode_residual, sol);
        }
    }

    #[test]
    fn tau_shrinks_like_inverse_log() {
        // τ² ln(1/y) is bounded as y -> 0 (the depth bound h δ² <= |λ|δ² + C/ln(1/y)).
        let mut y = 1e-1;
        let mut seen = Vec::new();
        while y >= 1e-12 {
            let lambda = -0.5;
            let delta = y / 0.5f64.sqrt();
            let sol = well_match(lambda, delta).unwrap();
            seen.push(sol.tau * sol.tau * (1.0 / y).ln());
            y /= 10.0;
        }
        for &v in &seen {
            assert!(v > 1.3 && v < 2.3, "τ² ln(1/y) = {v} escaped the frozen bracket");
        }
        // monotone approach to the asymptotic value 2 from below
        assert!(seen.windows(2).all(|w| w[1] >= w[0] - 1e-6), "{seen:?}");
    }

    #[test]
    fn inadmissible_inputs_rejected() {
        assert!(well_match(1.0, 0.5).is_err());
        assert!(well_match(-1.0, 1.5).is_err()); // δ > 1/√|λ|
        assert!(well_match(-1.0, 0.0).is_err());
    }
}
