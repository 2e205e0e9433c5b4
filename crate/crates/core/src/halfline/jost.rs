//! Jost-type solutions normalized at infinity: ψ1 -> 1 and ψ2 ~ x, built by
//! Picard iteration on the tail equation
//!
//!   z(x) + σ P z = -σ ∫_x^∞ (ξ-x) V(ξ) dξ,
//!   (P z)(x) = ∫_x^∞ (ξ-x) V(ξ) z(ξ) dξ,
//!
//! which contracts once α = σ ∫ (x - shift) |V| dx < 1. The origin is
//! shifted right along a dyadic grid until that holds; boundary data at 0
//! are recovered by integrating the ODE back across the shifted segment.

use super::HalflineProfile;
use crate::error::Error;
use crate::util::quad;
use serde::{Deserialize, Serialize};

/// Boundary data of the Jost pair at x = 0 plus iteration metadata.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JostData {
    pub psi1_0: f64,
    pub dpsi1_0: f64,
    pub psi2_0: f64,
    pub dpsi2_0: f64,
    pub picard_iterations: usize,
    /// σ ∫ (x - shift)|V| dx after the origin shift; the contraction factor.
    pub alpha_contraction: f64,
    /// The dyadic origin shift that achieved contraction.
    pub shift: f64,
    /// max |W(x) - 1| of the Wronskian ψ1 ψ2' - ψ1' ψ2 along the tail grid
    /// (exactly 1 for the anchored pair; drift measures integration error).
    pub wronskian_drift: f64,
}

/// Backward cumulative integral on a uniform grid: out[i] = ∫_{x_i}^{x_end} f.
/// Per-interval cubic (4-point) rule, exact for cubics, so the composite
/// error is O(h⁴).
fn cumulative_from_right(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4);
    let mut out = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n - 1).rev() {
        let piece = if i == 0 {
            // left-edge one-sided cubic
            h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0
        } else if i == n - 2 {
            // right-edge one-sided cubic (mirror)
            h * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 24.0
        } else {
            // interior: cubic through the four surrounding nodes
            h * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0
        };
        acc += piece;
        out[i] = acc;
    }
    out
}

/// (P z)(x) = M1(x) - x M0(x) with M0 = ∫_x^X V z, M1 = ∫_x^X ξ V z.
fn apply_p(h: f64, xs: &[f64], vvals: &[f64], z: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let f0: Vec<f64> = (0..n).map(|i| vvals[i] * z[i]).collect();
    let f1: Vec<f64> = (0..n).map(|i| xs[i] * vvals[i] * z[i]).collect();
    let m0 = cumulative_from_right(h, &f0);
    let m1 = cumulative_from_right(h, &f1);
    (0..n).map(|i| m1[i] - xs[i] * m0[i]).collect()
}

/// Reverse RK4 on the pair (ψ, ψ') from x = from down to x = 0, fixed step.
fn back_integrate(
    v: &dyn HalflineProfile,
    sigma: f64,
    from: f64,
    psi: f64,
    dpsi: f64,
    steps: usize,
) -> (f64, f64) {
    let h = -from / steps as f64;
    let mut x = from;
    let mut y = (psi, dpsi);
    let f = |x: f64, y: (f64, f64)| (y.1, -sigma * v.eval(x) * y.0);
    for _ in 0..steps {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, (y.0 + 0.5 * h * k1.0, y.1 + 0.5 * h * k1.1));
        let k3 = f(x + 0.5 * h, (y.0 + 0.5 * h * k2.0, y.1 + 0.5 * h * k2.1));
        let k4 = f(x + h, (y.0 + h * k3.0, y.1 + h * k3.1));
        y = (
            y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        x += h;
    }
    y
}

/// σ ∫_{shift}^∞ (x - shift)|V| dx.
fn contraction_at(v: &dyn HalflineProfile, sigma: f64, shift: f64, end: f64) -> f64 {
    sigma
        * quad::integrate(|x| (x - shift) * v.eval(x).abs(), shift, end, 1e-10, 1e-300)
            .map(|q| q.value)
            .unwrap_or(f64::INFINITY)
}

pub fn jost_solution(v: &dyn HalflineProfile, sigma: f64) -> Result<JostData, Error> {
    let end = v.support_end().max(1.0);

    // Smallest dyadic shift with α < 1.
    let mut shift = 0.0;
    let mut alpha = contraction_at(v, sigma, 0.0, end);
    if alpha >= 1.0 {
        let mut step = 0.5;
        loop {
            let cand = shift + step;
            if cand > end {
                return Err(Error::domain(
                    "jost_solution",
                    format!("contraction α = {alpha:.3} not achievable below the support end"),
                ));
            }
            let a = contraction_at(v, sigma, cand, end);
            if a < 1.0 {
                shift = cand;
                alpha = a;
                break;
            }
            step *= 2.0;
            shift = cand;
        }
    }

    // Uniform grid on [shift, X]; beyond X the tail moment is negligible.
    let x_end = end + 2.0;
    let n = 16_384usize;
    let h = (x_end - shift) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| shift + i as f64 * h).collect();
    let vvals: Vec<f64> = xs.iter().map(|&x| v.eval(x)).collect();

    // Picard: z_{k+1} = -σ (P z_k + P 1).
    let p_one = apply_p(h, &xs, &vvals, &vec![1.0; n]);
    let mut z = vec![0.0; n];
    let mut iterations = 0;
    let budget = 40_000usize;
    loop {
        let pz = apply_p(h, &xs, &vvals, &z);
        let mut delta = 0.0f64;
        for i in 0..n {
            let next = -sigma * (pz[i] + p_one[i]);
            delta = delta.max((next - z[i]).abs());
            z[i] = next;
        }
        iterations += 1;
        if delta <= 1e-13 {
            break;
        }
        if iterations >= budget {
            return Err(Error::NoConvergence { op: "jost Picard iteration", budget });
        }
    }

    // ψ1 = 1 + z; ψ1' = σ ∫_x^X V ψ1 (differentiated tail equation).
    let psi1: Vec<f64> = z.iter().map(|zi| 1.0 + zi).collect();
    let f0: Vec<f64> = (0..n).map(|i| vvals[i] * psi1[i]).collect();
    let m0 = cumulative_from_right(h, &f0);
    let dpsi1: Vec<f64> = m0.iter().map(|m| sigma * m).collect();

    // ψ2 anchored at the shifted origin: ψ2 = ψ1 ∫_{shift}^x ψ1^{-2};
    // requires ψ1 ≠ 0 on the grid.
    if psi1.iter().any(|&p| p == 0.0) || psi1.iter().any(|&p| p.signum() != psi1[0].signum()) {
        return Err(Error::domain(
            "jost_solution",
            "ψ1 vanishes on the tail grid; the ψ2 anchor is undefined",
        ));
    }
    let inv_sq: Vec<f64> = psi1.iter().map(|p| 1.0 / (p * p)).collect();
    // forward cumulative from the left = total - backward cumulative
    let back = cumulative_from_right(h, &inv_sq);
    let total = back[0];
    let psi2: Vec<f64> = (0..n).map(|i| psi1[i] * (total - back[i])).collect();
    let dpsi2: Vec<f64> = (0..n).map(|i| dpsi1[i] * (total - back[i]) + 1.0 / psi1[i]).collect();

    let wronskian_drift = (0..n)
        .map(|i| (psi1[i] * dpsi2[i] - dpsi1[i] * psi2[i] - 1.0).abs())
        .fold(0.0f64, f64::max);

    let data_at_shift = (psi1[0], dpsi1[0], psi2[0], dpsi2[0]);
    let (psi1_0, dpsi1_0, psi2_0, dpsi2_0) = if shift == 0.0 {
        data_at_shift
    } else {
        let steps = (shift / h).ceil() as usize + 16;
        let (p1, d1) = back_integrate(v, sigma, shift, data_at_shift.0, data_at_shift.1, steps);
        let (p2, d2) = back_integrate(v, sigma, shift, data_at_shift.2, data_at_shift.3, steps);
        (p1, d1, p2, d2)
    };

    Ok(JostData {
        psi1_0,
        dpsi1_0,
        psi2_0,
        dpsi2_0,
        picard_iterations: iterations,
        alpha_contraction: alpha,
        shift,
        wronskian_drift,
    })
}

impl JostData {
    /// Coefficients of ψ0 = A ψ1 + B ψ2 from the Neumann data ψ0(0) = 1,
    /// ψ0'(0) = 0 (solved through the 2x2 boundary system).
    pub fn shooting_coefficients(&self) -> (f64, f64) {
        let w = self.psi1_0 * self.dpsi2_0 - self.psi2_0 * self.dpsi1_0;
        let a = self.dpsi2_0 / w;
        let b = -self.dpsi1_0 / w;
        (a, b)
    }

    /// Wronskian ψ1 ψ2' - ψ1' ψ2 at the origin; exactly 1 for the anchored
    /// construction (checked along the trace by the tests).
    pub fn wronskian(&self) -> f64 {
        self.psi1_0 * self.dpsi2_0 - self.psi2_0 * self.dpsi1_0
    }
}

#[cfg(test)]
mod tests {
    use super::super::{expansion_coefficients, FnProfile};
    use super::*;

    #[test]
    fn free_equation_jost_pair() {
        let v = FnProfile { f: |_| 0.0, support: 2.0 };
        let j = jost_solution(&v, 1.0).unwrap();
        assert!((j.psi1_0 - 1.0).abs() < 1e-12);
        assert!(j.dpsi1_0.abs() < 1e-12);
        // ψ2 anchored at 0 with slope 1: ψ2(x) = x.
        assert!(j.psi2_0.abs() < 1e-12);
        assert!((j.dpsi2_0 - 1.0).abs() < 1e-12);
        assert!((j.wronskian() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compact_support_tail_is_free() {
        // Beyond the support ψ1 is constant and ψ2 linear; the boundary data
        // at 0 for a weak well stay near the free values.
        let v = FnProfile { f: |x: f64| if x < 1.0 { 1.0 } else { 0.0 }, support: 1.2 };
        let sigma = 1e-3;
        let j = jost_solution(&v, sigma).unwrap();
        let coeff = expansion_coefficients(&v).unwrap();
        // ψ1(0) = 1 - σ a + O(σ²), a = 1/2 for the unit well; the leftover
        // is the genuine σ² term.
        assert!((coeff.a - 0.5).abs() < 1e-9);
        assert!((j.psi1_0 - (1.0 - sigma * coeff.a)).abs() < 5.0 * sigma * sigma + 1e-10);
        // ψ1'(0) = σ b + O(σ²), b = 1.
        assert!((j.dpsi1_0 - sigma * coeff.b).abs() < 5.0 * sigma * sigma + 1e-10);
    }

    #[test]
    fn wronskian_constant_along_tail_grid() {
        // W = ψ1 ψ2' - ψ1' ψ2 must stay 1 along the whole grid to 1e-8.
        let v = FnProfile { f: |x: f64| (-(x - 2.0) * (x - 2.0)).exp(), support: 30.0 };
        for &sigma in &[1e-2, 0.3, 1.0] {
            let j = jost_solution(&v, sigma).unwrap();
            assert!(
                j.wronskian_drift < 1e-8,
                "σ = {sigma}: Wronskian drift {}",
                j.wronskian_drift
            );
        }
    }

    #[test]
    fn sigma_expansion_richardson() {
        // Fitted leading coefficients of ψ1(0) and ψ1'(0) against the
        // quadrature coefficients, over σ in {1e-3, 2e-3, 4e-3}.
        let v = FnProfile { f: |x: f64| (-(x - 1.5) * (x - 1.5)).exp(), support: 30.0 };
        let coeff = expansion_coefficients(&v).unwrap();
        let js: Vec<JostData> =
            [1e-3, 2e-3, 4e-3].iter().map(|&s| jost_solution(&v, s).unwrap()).collect();
        // (1 - ψ1(0))/σ = a + O(σ): Richardson combination kills the O(σ).
        let f = |j: &JostData, s: f64| (1.0 - j.psi1_0) / s;
        let a_fit = 2.0 * f(&js[0], 1e-3) - f(&js[1], 2e-3);
        assert!((a_fit - coeff.a).abs() < 1e-4, "a_fit {a_fit} vs a {}", coeff.a);
        let g = |j: &JostData, s: f64| j.dpsi1_0 / s;
        let b_fit = 2.0 * g(&js[0], 1e-3) - g(&js[1], 2e-3);
        assert!((b_fit - coeff.b).abs() < 1e-4, "b_fit {b_fit} vs b {}", coeff.b);
    }

    #[test]
    fn sigma_squared_coefficient_report() {
        // The σ² coefficient of ψ1'(0): the text's two candidate signs are
        // -ab + c² and ab + c²; the fit picks one. Reported, not asserted.
        let v = FnProfile { f: |x: f64| (-(x - 1.5) * (x - 1.5)).exp(), support: 30.0 };
        let coeff = expansion_coefficients(&v).unwrap();
        let sigmas = [1e-3, 5e-4, 2.5e-4];
        let beta: Vec<f64> = sigmas
            .iter()
            .map(|&s| {
                let j = jost_solution(&v, s).unwrap();
                (j.dpsi1_0 - s * coeff.b) / (s * s)
            })
            .collect();
        // Richardson in σ to the limit coefficient.
        let beta_fit = 2.0 * beta[1] - beta[0];
        let minus = -coeff.a * coeff.b + coeff.c_squared;
        let plus = coeff.a * coeff.b + coeff.c_squared;
        println!(
            "σ² coefficient of ψ1'(0): fitted {beta_fit:.8}, -ab+c² = {minus:.8}, \
             ab+c² = {plus:.8}"
        );
        let d_minus = (beta_fit - minus).abs();
        let d_plus = (beta_fit - plus).abs();
        // The fit must land decisively on one candidate.
        assert!(
            d_minus < 0.1 * d_plus || d_plus < 0.1 * d_minus,
            "ambiguous σ² fit: {beta_fit} vs {minus} / {plus}"
        );
    }

    #[test]
    fn b_negative_coefficient_forces_crossing() {
        // b = ∫V > 0 and small σ: B < 0, and the shooting trace crosses zero.
        let v = FnProfile { f: |x: f64| (-(x - 1.5) * (x - 1.5)).exp(), support: 30.0 };
        for &sigma in &[2e-3, 1e-2, 5e-2] {
            let j = jost_solution(&v, sigma).unwrap();
            let (_, b_coef) = j.shooting_coefficients();
            assert!(b_coef < 0.0, "B = {b_coef} at σ = {sigma}");
            let t = super::super::integrate_ivp(
                &v,
                sigma,
                super::super::suggested_x_max(&v, sigma),
                4096,
            )
            .unwrap();
            assert!(t.zero_crossing.is_some(), "no crossing at σ = {sigma}");
        }
    }

    #[test]
    fn contraction_shift_engages_for_strong_coupling() {
        // σ ∫x|V| > 1 at σ = 4: the origin must shift right.
        let v = FnProfile { f: |x: f64| (-(x - 1.5) * (x - 1.5)).exp(), support: 30.0 };
        let j = jost_solution(&v, 4.0).unwrap();
        assert!(j.shift > 0.0);
        assert!(j.alpha_contraction < 1.0);
        // Wronskian of the recovered boundary data stays 1 (constant W).
        assert!((j.wronskian() - 1.0).abs() < 1e-7, "W = {}", j.wronskian());
    }

    #[test]
    fn wronskian_constant_along_traces() {
        let v = FnProfile { f: |x: f64| (-(x - 2.0) * (x - 2.0)).exp(), support: 30.0 };
        let sigma = 0.3;
        // two independent solutions from different initial data
        let t1 = super::super::integrate_ivp(&v, sigma, 20.0, 2048).unwrap();
        // second solution: ψ(0) = 0, ψ'(0) = 1 via the trace machinery --
        // reuse integrate_ivp by a tiny wrapper equation? The IVP fixes
        // Neumann data, so instead check W(ψ0, ψ0') against the Jost pair:
        let j = jost_solution(&v, sigma).unwrap();
        // ψ0 = A ψ1 + B ψ2 and W(ψ1, ψ2) = 1 give W(ψ0, ψ1) = -B.
        let (_, b_coef) = j.shooting_coefficients();
        // At x = 0: W(ψ0, ψ1) = ψ0 ψ1' - ψ0' ψ1 = ψ1'(0) (Neumann data).
        let w0 = j.dpsi1_0;
        assert!(
            (w0 + b_coef * j.wronskian()).abs() < 1e-9,
            "W(ψ0, ψ1) = {w0} vs -B = {}",
            -b_coef
        );
        assert!(t1.zero_crossing.is_some());
    }
}
