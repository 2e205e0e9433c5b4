//! Analytic potential descriptors, pointwise evaluation, and the analytic
//! radial Fourier transforms used by the weak-coupling functionals.

use crate::error::Error;
use crate::specfun::bessel_j1;
use crate::util::quad;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One Gaussian bump: amplitude · exp(-|x - center|²/width²).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub width: f64,
    #[serde(default)]
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Translate {
    pub center: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub dimension: usize,
    pub variant: PotentialVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialVariant {
    /// height on |x - center| < radius, zero outside.
    RadialWell { height: f64, radius: f64, #[serde(default)] center: Vec<f64> },
    GaussianBump { amplitude: f64, width: f64, #[serde(default)] center: Vec<f64> },
    /// Σ weight_i · base(x - center_i); the base must be centered at the origin.
    WeightedTranslates { base: Box<PotentialSpec>, translates: Vec<Translate> },
    /// Two Gaussian bumps whose integrals cancel (∫V dx = 0 to 1e-10).
    MeanZeroPair { first: Bump, second: Bump },
    /// V(x) = 1/|x|² on each listed ball, zero outside; balls avoid the origin.
    InverseSquareOnBalls { balls: Vec<Ball> },
    /// Radial samples (increasing radii), linear interpolation, zero past the end.
    Sampled { radii: Vec<f64>, values: Vec<f64> },
}

fn dist(x: &[f64], center: &[f64]) -> f64 {
    if center.is_empty() {
        return x.iter().map(|c| c * c).sum::<f64>().sqrt();
    }
    x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn bump_eval(b: &Bump, x: &[f64]) -> f64 {
    let r = dist(x, &b.center);
    b.amplitude * (-(r * r) / (b.width * b.width)).exp()
}

/// Pointwise evaluation; deterministic and finite everywhere except the
/// origin for an inverse-square ball that touched it (excluded by validate).
pub fn potential_eval(spec: &PotentialSpec, x: &[f64]) -> f64 {
    assert_eq!(x.len(), spec.dimension, "evaluation point dimension mismatch");
    match &spec.variant {
        PotentialVariant::RadialWell { height, radius, center } => {
            if dist(x, center) < *radius {
                *height
            } else {
                0.0
            }
        }
        PotentialVariant::GaussianBump { amplitude, width, center } => {
            let r = dist(x, center);
            amplitude * (-(r * r) / (width * width)).exp()
        }
        PotentialVariant::WeightedTranslates { base, translates } => {
            let mut shifted = vec![0.0; x.len()];
            translates
                .iter()
                .map(|t| {
                    for (i, s) in shifted.iter_mut().enumerate() {
                        *s = x[i] - t.center[i];
                    }
                    t.weight * potential_eval(base, &shifted)
                })
                .sum()
        }
        PotentialVariant::MeanZeroPair { first, second } => bump_eval(first, x) + bump_eval(second, x),
        PotentialVariant::InverseSquareOnBalls { balls } => {
            let inside = balls.iter().any(|b| dist(x, &b.center) < b.radius);
            if inside {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                1.0 / r2
            } else {
                0.0
            }
        }
        PotentialVariant::Sampled { radii, values } => {
            let r = dist(x, &[]);
            if radii.is_empty() || r >= *radii.last().unwrap() {
                return 0.0;
            }
            if r <= radii[0] {
                return values[0];
            }
            let idx = radii.partition_point(|&q| q < r);
            let (r0, r1) = (radii[idx - 1], radii[idx]);
            let (v0, v1) = (values[idx - 1], values[idx]);
            v0 + (v1 - v0) * (r - r0) / (r1 - r0)
        }
    }
}

impl PotentialSpec {
    pub fn radial_well(dimension: usize, height: f64, radius: f64) -> Self {
        PotentialSpec {
            dimension,
            variant: PotentialVariant::RadialWell { height, radius, center: vec![] },
        }
    }

    pub fn gaussian(dimension: usize, amplitude: f64, width: f64) -> Self {
        PotentialSpec {
            dimension,
            variant: PotentialVariant::GaussianBump { amplitude, width, center: vec![] },
        }
    }

    /// Concentric mean-zero pair: A e^{-r²/w_in²} - A (w_in/w_out)^d e^{-r²/w_out²}.
    /// The second amplitude is the unique choice with ∫V dx = 0.
    pub fn mean_zero_pair(dimension: usize, amplitude: f64, w_in: f64, w_out: f64) -> Self {
        let ratio = (w_in / w_out).powi(dimension as i32);
        PotentialSpec {
            dimension,
            variant: PotentialVariant::MeanZeroPair {
                first: Bump { amplitude, width: w_in, center: vec![] },
                second: Bump { amplitude: -amplitude * ratio, width: w_out, center: vec![] },
            },
        }
    }

    /// The transient counterexample geometry: balls centered at |x_n| = 2^n
    /// along e1 with radius 2^n/3.
    pub fn inverse_square_spots(dimension: usize, n_range: std::ops::RangeInclusive<u32>) -> Self {
        let balls = n_range
            .map(|n| {
                let mut center = vec![0.0; dimension];
                center[0] = 2f64.powi(n as i32);
                Ball { center, radius: 2f64.powi(n as i32) / 3.0 }
            })
            .collect();
        PotentialSpec { dimension, variant: PotentialVariant::InverseSquareOnBalls { balls } }
    }

    /// True when every piece is centered at the origin, so all diagnostics
    /// reduce to one radial profile.
    pub fn is_centered_radial(&self) -> bool {
        fn centered(c: &[f64]) -> bool {
            c.is_empty() || c.iter().all(|&v| v == 0.0)
        }
        match &self.variant {
            PotentialVariant::RadialWell { center, .. } => centered(center),
            PotentialVariant::GaussianBump { center, .. } => centered(center),
            PotentialVariant::MeanZeroPair { first, second } => {
                centered(&first.center) && centered(&second.center)
            }
            PotentialVariant::Sampled { .. } => true,
            PotentialVariant::WeightedTranslates { .. } => false,
            PotentialVariant::InverseSquareOnBalls { .. } => false,
        }
    }

    /// Radial profile V(r e1); callers must ensure `is_centered_radial` or a
    /// 1-dimensional spec where the profile is simply V(±r).
    pub fn radial_profile(&self, r: f64) -> f64 {
        let mut x = vec![0.0; self.dimension];
        x[0] = r;
        potential_eval(self, &x)
    }

    /// A radius beyond which the potential is exactly zero or below 1e-300.
    pub fn support_radius_hint(&self) -> f64 {
        match &self.variant {
            PotentialVariant::RadialWell { radius, center, .. } => radius + norm(center),
            PotentialVariant::GaussianBump { width, center, .. } => 27.0 * width + norm(center),
            PotentialVariant::WeightedTranslates { base, translates } => {
                let base_r = base.support_radius_hint();
                translates.iter().map(|t| norm(&t.center) + base_r).fold(0.0, f64::max)
            }
            PotentialVariant::MeanZeroPair { first, second } => (27.0 * first.width
                + norm(&first.center))
            .max(27.0 * second.width + norm(&second.center)),
            PotentialVariant::InverseSquareOnBalls { balls } => {
                balls.iter().map(|b| norm(&b.center) + b.radius).fold(0.0, f64::max)
            }
            PotentialVariant::Sampled { radii, .. } => radii.last().copied().unwrap_or(0.0),
        }
    }

    /// Grid sample of the potential over a cell of side `dx` centered at x:
    /// the plain point value for smooth variants (spectrally accurate), the
    /// cell average across jump discontinuities (pointwise sampling of a
    /// sharp well misplaces its boundary by O(dx) and drags the eigenvalue
    /// with it).
    pub fn grid_sample(&self, x: &[f64], dx: f64) -> f64 {
        match &self.variant {
            PotentialVariant::RadialWell { height, radius, center } => {
                let r = dist(x, center);
                match x.len() {
                    1 => {
                        // exact overlap of [x-dx/2, x+dx/2] with the well
                        let c = if center.is_empty() { 0.0 } else { center[0] };
                        let lo = (x[0] - 0.5 * dx).max(c - radius);
                        let hi = (x[0] + 0.5 * dx).min(c + radius);
                        height * (hi - lo).max(0.0) / dx
                    }
                    _ => {
                        let half_diag = 0.5 * dx * (x.len() as f64).sqrt();
                        if r + half_diag < *radius {
                            *height
                        } else if r - half_diag > *radius {
                            0.0
                        } else {
                            // cut cell: subsample the indicator
                            let m = 32;
                            let mut inside = 0usize;
                            let mut y = vec![0.0; x.len()];
                            for i in 0..m {
                                for j in 0..m {
                                    y[0] = x[0] + dx * ((i as f64 + 0.5) / m as f64 - 0.5);
                                    y[1] = x[1] + dx * ((j as f64 + 0.5) / m as f64 - 0.5);
                                    if dist(&y, center) < *radius {
                                        inside += 1;
                                    }
                                }
                            }
                            height * inside as f64 / (m * m) as f64
                        }
                    }
                }
            }
            PotentialVariant::WeightedTranslates { base, translates } => {
                let mut shifted = vec![0.0; x.len()];
                translates
                    .iter()
                    .map(|t| {
                        for (i, s) in shifted.iter_mut().enumerate() {
                            *s = x[i] - t.center[i];
                        }
                        t.weight * base.grid_sample(&shifted, dx)
                    })
                    .sum()
            }
            _ => potential_eval(self, x),
        }
    }

    /// Structural validation; the mean-zero invariant is checked by radial
    /// quadrature to absolute tolerance 1e-10 relative to the L¹ mass.
    pub fn validate(&self) -> Result<(), Error> {
        let mut violations = Vec::new();
        let d = self.dimension;
        if d == 0 {
            violations.push("dimension must be positive".to_string());
        }
        let check_center = |c: &[f64], what: &str, violations: &mut Vec<String>| {
            if !c.is_empty() && c.len() != d {
                violations.push(format!(
                    "{what} center has {} coordinates, potential dimension is {d}",
                    c.len()
                ));
            }
        };
        match &self.variant {
            PotentialVariant::RadialWell { radius, center, .. } => {
                if *radius <= 0.0 {
                    violations.push("well radius must be positive".to_string());
                }
                check_center(center, "well", &mut violations);
            }
            PotentialVariant::GaussianBump { width, center, .. } => {
                if *width <= 0.0 {
                    violations.push("bump width must be positive".to_string());
                }
                check_center(center, "bump", &mut violations);
            }
            PotentialVariant::WeightedTranslates { base, translates } => {
                if base.dimension != d {
                    violations.push("translate base has a different dimension".to_string());
                }
                if !base.is_centered_radial() {
                    violations.push("translate base must be centered at the origin".to_string());
                }
                if let Err(Error::InvalidSpec { violations: inner }) = base.validate() {
                    violations.extend(inner);
                }
                for t in translates {
                    if t.center.len() != d {
                        violations.push("translate center dimension mismatch".to_string());
                        break;
                    }
                }
            }
            PotentialVariant::MeanZeroPair { first, second } => {
                check_center(&first.center, "first bump", &mut violations);
                check_center(&second.center, "second bump", &mut violations);
                if first.width <= 0.0 || second.width <= 0.0 {
                    violations.push("bump widths must be positive".to_string());
                }
                if violations.is_empty() {
                    // ∫ of each bump by radial quadrature; centers only shift,
                    // never change, the integrals.
                    let mass = |b: &Bump| -> f64 {
                        let area = super::unit_sphere_area(d);
                        quad::integrate_to_inf(
                            |r| {
                                b.amplitude
                                    * (-(r * r) / (b.width * b.width)).exp()
                                    * area
                                    * r.powi(d as i32 - 1)
                            },
                            0.0,
                            1e-13,
                            1e-300,
                        )
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN)
                    };
                    let m1 = mass(first);
                    let m2 = mass(second);
                    let scale = m1.abs() + m2.abs();
                    if !((m1 + m2).abs() <= 1e-10 * scale.max(1e-300)) {
                        violations.push(format!(
                            "mean-zero pair integrates to {:.3e}, tolerance 1e-10 relative",
                            m1 + m2
                        ));
                    }
                }
            }
            PotentialVariant::InverseSquareOnBalls { balls } => {
                for b in balls {
                    if b.center.len() != d {
                        violations.push("ball center dimension mismatch".to_string());
                        break;
                    }
                    if norm(&b.center) <= b.radius {
                        violations.push(format!(
                            "ball at |c| = {:.3e} with radius {:.3e} contains the origin",
                            norm(&b.center),
                            b.radius
                        ));
                    }
                }
                for (i, a) in balls.iter().enumerate() {
                    for b in balls.iter().skip(i + 1) {
                        let gap = dist(&a.center, &b.center);
                        if gap < a.radius + b.radius {
                            violations.push("balls must be pairwise disjoint".to_string());
                        }
                    }
                }
            }
            PotentialVariant::Sampled { radii, values } => {
                if radii.len() != values.len() {
                    violations.push("sampled radii/values length mismatch".to_string());
                }
                if radii.windows(2).any(|w| w[1] <= w[0]) {
                    violations.push("sampled radii must be strictly increasing".to_string());
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(violations))
        }
    }

    /// Analytic radial Fourier transform V̂(|k|) = ∫ V e^{-i<k,x>} dx for the
    /// centered-radial variants (real by symmetry). Used by the coupling
    /// constant and the quadratic-form witness.
    pub fn fourier_radial(&self, kn: f64) -> Result<f64, Error> {
        let d = self.dimension as i32;
        let gauss_hat = |amplitude: f64, width: f64| -> f64 {
            amplitude
                * (PI.sqrt() * width).powi(d)
                * (-(kn * kn) * width * width / 4.0).exp()
        };
        match &self.variant {
            PotentialVariant::GaussianBump { amplitude, width, center } if centered(center) => {
                Ok(gauss_hat(*amplitude, *width))
            }
            PotentialVariant::MeanZeroPair { first, second }
                if centered(&first.center) && centered(&second.center) =>
            {
                Ok(gauss_hat(first.amplitude, first.width)
                    + gauss_hat(second.amplitude, second.width))
            }
            PotentialVariant::RadialWell { height, radius, center } if centered(center) => {
                match d {
                    1 => {
                        if kn == 0.0 {
                            Ok(2.0 * height * radius)
                        } else {
                            Ok(2.0 * height * (kn * radius).sin() / kn)
                        }
                    }
                    2 => {
                        if kn == 0.0 {
                            Ok(height * PI * radius * radius)
                        } else {
                            Ok(height * 2.0 * PI * radius * bessel_j1(kn * radius) / kn)
                        }
                    }
                    _ => Err(Error::NotImplemented {
                        msg: format!("radial well Fourier transform in dimension {d}"),
                    }),
                }
            }
            _ => Err(Error::NotImplemented {
                msg: "analytic Fourier transform requires a centered radial variant".to_string(),
            }),
        }
    }
}

fn centered(c: &[f64]) -> bool {
    c.is_empty() || c.iter().all(|&v| v == 0.0)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}
