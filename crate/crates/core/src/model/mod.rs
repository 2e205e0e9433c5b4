//! Operator symbols `a(k)`, potential descriptors, recurrence classification
//! and the integrability diagnostics that gate the downstream solvers.

mod diagnostics;
mod potential;
mod symbol;

pub use diagnostics::{diagnostics, DiagnosticsParams, DiagnosticsReport};
pub use potential::{potential_eval, Ball, Bump, PotentialSpec, PotentialVariant, Translate};
pub use symbol::{
    classify_recurrence, symbol_eval, symbol_eval_radial, RadialProfile, Recurrence,
    RecurrenceReport, SymbolSpec, SymbolVariant,
};

/// Surface area of the unit sphere in `R^d` (2, 2π, 4π for d = 1, 2, 3).
pub fn unit_sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => {
            // 2 π^{d/2} / Γ(d/2); Γ built up from Γ(1) or Γ(1/2).
            let mut gamma = if d % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
            let mut x = if d % 2 == 0 { 1.0 } else { 0.5 };
            while x < d as f64 / 2.0 - 0.25 {
                gamma *= x;
                x += 1.0;
            }
            2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma
        }
    }
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    unit_sphere_area(d) / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_ball_constants() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-15);
        assert!((unit_sphere_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        // d = 4: area 2π², volume π²/2; d = 5: volume 8π²/15
        assert!((unit_sphere_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-13);
        assert!((unit_ball_volume(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-13);
        assert!((unit_ball_volume(5) - 8.0 * std::f64::consts::PI.powi(2) / 15.0).abs() < 1e-13);
    }
}
