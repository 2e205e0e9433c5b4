//! Adaptive integration of the shooting problem and the truncated-form
//! certificate. The integrator is classical RK4 with step doubling (the
//! half-step pair supplies the 5th-order error estimate), locally bounded by
//! 1e-10; the certificate re-integrates at fixed step so its composite
//! Simpson quadrature converges at a clean 4th order.

use super::HalflineProfile;
use crate::error::Error;
use serde::{Deserialize, Serialize};

/// Sampled solution of ψ'' + σVψ = 0, ψ(0)=1, ψ'(0)=0 on [0, x_max].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShootingTrace {
    pub xs: Vec<f64>,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub sigma: f64,
    /// First sign change of ψ, refined to ~1e-12, if one occurs.
    pub zero_crossing: Option<f64>,
}

#[derive(Clone, Copy)]
struct State {
    x: f64,
    psi: f64,
    dpsi: f64,
}

fn rk4_step(v: &dyn HalflineProfile, sigma: f64, s: State, h: f64) -> State {
    let f = |x: f64, psi: f64, dpsi: f64| (dpsi, -sigma * v.eval(x) * psi);
    let (k1p, k1d) = f(s.x, s.psi, s.dpsi);
    let (k2p, k2d) = f(s.x + 0.5 * h, s.psi + 0.5 * h * k1p, s.dpsi + 0.5 * h * k1d);
    let (k3p, k3d) = f(s.x + 0.5 * h, s.psi + 0.5 * h * k2p, s.dpsi + 0.5 * h * k2d);
    let (k4p, k4d) = f(s.x + h, s.psi + h * k3p, s.dpsi + h * k3d);
    State {
        x: s.x + h,
        psi: s.psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        dpsi: s.dpsi + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
    }
}

/// Advance to exactly `target` with local error control (step doubling).
fn advance(
    v: &dyn HalflineProfile,
    sigma: f64,
    mut s: State,
    target: f64,
    tol: f64,
) -> Result<State, Error> {
    let mut h = (target - s.x).min(0.1);
    let sliver = 1e-14 * target.max(1.0);
    while target - s.x > sliver {
        h = h.min(target - s.x);
        if h < 0.25 * sliver {
            return Err(Error::NoConvergence { op: "ivp step underflow", budget: 0 });
        }
        let full = rk4_step(v, sigma, s, h);
        let half = rk4_step(v, sigma, s, 0.5 * h);
        let two = rk4_step(v, sigma, half, 0.5 * h);
        let scale = s.psi.abs() + s.dpsi.abs() + 1.0;
        let err = ((two.psi - full.psi).abs() + (two.dpsi - full.dpsi).abs()) / 15.0;
        if err <= tol * scale {
            // Richardson-extrapolated 5th order accept.
            s = State {
                x: two.x,
                psi: two.psi + (two.psi - full.psi) / 15.0,
                dpsi: two.dpsi + (two.dpsi - full.dpsi) / 15.0,
            };
            let grow = if err > 0.0 { 0.9 * (tol * scale / err).powf(0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * (tol * scale / err).powf(0.2)).clamp(0.1, 0.9);
        }
    }
    s.x = target;
    Ok(s)
}

/// Default integration horizon: the point past which ∫_x^∞ x|V| dx < 1e-12
/// (so ψ is free to machine precision), extended to cover the linearly
/// extrapolated crossing and capped at 1e4.
pub fn suggested_x_max(v: &dyn HalflineProfile, sigma: f64) -> f64 {
    let support = v.support_end().min(1e4).max(1.0);
    // rough upper bound on the crossing position for small σ: ψ ~ 1 - σ b x
    let b = crate::util::quad::integrate(|x| v.eval(x), 0.0, support, 1e-8, 1e-300)
        .map(|q| q.value)
        .unwrap_or(0.0);
    let crossing_guess = if sigma * b > 0.0 { 2.5 / (sigma * b) + 2.0 * support } else { 0.0 };
    (support + 10.0).max(crossing_guess).min(1e4)
}

/// Integrates the IVP, sampling `n_samples` uniform points, and locates the
/// first zero crossing (bisection re-integration from the nearest sample).
pub fn integrate_ivp(
    v: &dyn HalflineProfile,
    sigma: f64,
    x_max: f64,
    n_samples: usize,
) -> Result<ShootingTrace, Error> {
    assert!(n_samples >= 2 && x_max > 0.0);
    let tol = 1e-10;
    let mut xs = Vec::with_capacity(n_samples);
    let mut psi = Vec::with_capacity(n_samples);
    let mut dpsi = Vec::with_capacity(n_samples);
    let mut state = State { x: 0.0, psi: 1.0, dpsi: 0.0 };
    xs.push(0.0);
    psi.push(1.0);
    dpsi.push(0.0);
    let mut crossing_bracket: Option<(State, f64)> = None;
    for i in 1..n_samples {
        let target = x_max * i as f64 / (n_samples - 1) as f64;
        let prev = state;
        state = advance(v, sigma, state, target, tol)?;
        xs.push(state.x);
        psi.push(state.psi);
        dpsi.push(state.dpsi);
        if crossing_bracket.is_none() && prev.psi > 0.0 && state.psi <= 0.0 {
            crossing_bracket = Some((prev, target));
        }
    }
    // Refine the crossing with bisection on re-integrations from the bracket
    // start (each segment is short, so this stays cheap and sharp).
    let zero_crossing = match crossing_bracket {
        None => None,
        Some((start, hi_x)) => {
            let mut lo = start.x;
            let mut hi = hi_x;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let s = advance(v, sigma, start, mid, tol)?;
                if s.psi > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-12 * hi.max(1.0) {
                    break;
                }
            }
            Some(0.5 * (lo + hi))
        }
    };
    Ok(ShootingTrace { xs, psi, dpsi, sigma, zero_crossing })
}

/// The truncated-form certificate at the trace's crossing:
/// form(σ') = ∫_0^{x0} (φ')² - σ' ∫_0^{x0} V φ² for φ = ψ0 restricted to
/// [0, x0]. `value` vanishes up to discretization (the defining identity),
/// `value_doubled` (σ -> 2σ) must come out negative.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FormCertificate {
    pub x0: f64,
    pub value: f64,
    pub value_doubled: f64,
    /// ∫ (φ')² — the scale against which `value` is judged.
    pub dphi_norm_sq: f64,
}

/// Fixed-step RK4 + composite Simpson on [0, x0]; both are 4th order, so the
/// certificate value converges to the exact zero at O(h⁴) under refinement.
pub fn truncated_form_value(
    v: &dyn HalflineProfile,
    sigma: f64,
    trace: &ShootingTrace,
    n_steps: usize,
) -> Result<FormCertificate, Error> {
    let x0 = trace.zero_crossing.ok_or_else(|| {
        Error::domain("truncated_form_value", "trace has no zero crossing")
    })?;
    let n = n_steps.max(64) & !1; // even for Simpson
    let h = x0 / n as f64;
    let mut kinetic_samples = Vec::with_capacity(n + 1);
    let mut potential_samples = Vec::with_capacity(n + 1);
    let mut s = State { x: 0.0, psi: 1.0, dpsi: 0.0 };
    kinetic_samples.push(s.dpsi * s.dpsi);
    potential_samples.push(v.eval(0.0) * s.psi * s.psi);
    for _ in 0..n {
        s = rk4_step(v, sigma, s, h);
        kinetic_samples.push(s.dpsi * s.dpsi);
        potential_samples.push(v.eval(s.x) * s.psi * s.psi);
    }
    let simpson = |f: &[f64]| -> f64 {
        let mut acc = f[0] + f[n];
        for (i, &fi) in f.iter().enumerate().take(n).skip(1) {
            acc += if i % 2 == 1 { 4.0 * fi } else { 2.0 * fi };
        }
        acc * h / 3.0
    };
    let kinetic = simpson(&kinetic_samples);
    let pot = simpson(&potential_samples);
    Ok(FormCertificate {
        x0,
        value: kinetic - sigma * pot,
        value_doubled: kinetic - 2.0 * sigma * pot,
        dphi_norm_sq: kinetic,
    })
}
