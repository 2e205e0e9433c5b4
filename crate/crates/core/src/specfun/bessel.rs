//! Bessel J0/J1 and modified Bessel I0/I1/K0/K1 for real argument.
//!
//! Small arguments use the classical power series; the alternating J/K series
//! cancel heavily at moderate argument, so those sums are accumulated in
//! double-double arithmetic, which keeps the absolute error near 1e-14 over
//! the whole series range. Large arguments use the Hankel asymptotic
//! expansions truncated at the smallest term. Branch switch points: x = 18
//! for J, x = 10 for K. Stated accuracy: absolute error <= 1e-12 on [0, 50].

use crate::error::Error;
use crate::util::dd::{self, Dd};

/// J0 by double-double power series: Σ (-1)^k (x²/4)^k / (k!)².
fn j0_series(x: f64) -> f64 {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for k in 1..400 {
        term = term.mul(q).div_f64((k * k) as f64).neg();
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-30) {
            break;
        }
    }
    sum.value()
}

/// J1 by double-double power series: (x/2) Σ (-1)^k (x²/4)^k / (k!(k+1)!).
fn j1_series(x: f64) -> f64 {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for k in 1..400 {
        term = term.mul(q).div_f64((k * (k + 1)) as f64).neg();
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-30) {
            break;
        }
    }
    sum.mul_f64(0.5 * x).value()
}

/// Hankel asymptotic evaluation of J_nu for large x.
///
/// J_nu(x) ~ sqrt(2/(pi x)) [cos(chi) P - sin(chi) Q],   chi = x - nu*pi/2 - pi/4,
/// P = Σ (-1)^k a_{2k} x^{-2k},  Q = Σ (-1)^k a_{2k+1} x^{-2k-1},
/// a_m = Π_{j=1..m} (4 nu² - (2j-1)²) / (m! 8^m).
fn j_asymptotic(nu: u32, x: f64) -> f64 {
    let four_nu2 = (4 * nu * nu) as f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0_f64; // a_m / x^m
    let mut last = f64::INFINITY;
    for m in 0..60u32 {
        if m > 0 {
            let j = (2 * m - 1) as f64;
            term *= (four_nu2 - j * j) / (8.0 * m as f64 * x);
            if term.abs() > last {
                break; // asymptotic series started diverging
            }
        }
        let k = m / 2;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        last = term.abs();
        if last < 1e-18 {
            break;
        }
    }
    let chi = x - (nu as f64) * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (chi.cos() * p - chi.sin() * q)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 18.0 {
        j0_series(x)
    } else {
        j_asymptotic(0, x)
    }
}

/// Bessel function of the first kind, order one (odd in x).
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 18.0 { j1_series(ax) } else { j_asymptotic(1, ax) };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Modified Bessel I0 (all series terms positive; plain f64 is exact enough).
pub fn bessel_i0(x: f64) -> f64 {
    i0_dd(x).value()
}

/// Modified Bessel I1.
pub fn bessel_i1(x: f64) -> f64 {
    i1_dd(x).value()
}

fn i0_dd(x: f64) -> Dd {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for k in 1..500 {
        term = term.mul(q).div_f64((k * k) as f64);
        sum = sum.add(term);
        if term.hi < 1e-34 * sum.hi {
            break;
        }
    }
    sum
}

fn i1_dd(x: f64) -> Dd {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for k in 1..500 {
        term = term.mul(q).div_f64((k * (k + 1)) as f64);
        sum = sum.add(term);
        if term.hi < 1e-34 * sum.hi {
            break;
        }
    }
    sum.mul_f64(0.5 * x)
}

/// K0 log-series (double-double; the log term cancels against the harmonic
/// sum at moderate x):
/// K0 = -(ln(x/2) + γ) I0(x) + Σ_{k>=1} (x²/4)^k / (k!)² H_k.
fn k0_series(x: f64) -> f64 {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut hsum = Dd::ZERO;
    let mut harmonic = Dd::ZERO;
    for k in 1..500 {
        term = term.mul(q).div_f64((k * k) as f64);
        harmonic = harmonic.add(Dd::from(1.0).div_f64(k as f64));
        let contrib = term.mul(harmonic);
        hsum = hsum.add(contrib);
        if contrib.hi < 1e-34 * hsum.hi.max(1.0) {
            break;
        }
    }
    // ln(x/2) + γ in double-double: an f64 log alone, multiplied by the
    // exponentially large I0, would wipe out the small K0 result.
    let log_factor = dd::ln(0.5 * x).add(dd::euler_gamma());
    hsum.add(log_factor.mul(i0_dd(x)).neg()).value()
}

/// K1 log-series:
/// K1 = (ln(x/2) + γ) I1(x) + 1/x - (x/4) Σ_{k>=0} (H_k + H_{k+1}) (x²/4)^k / (k!(k+1)!).
fn k1_series(x: f64) -> f64 {
    let q = Dd::from(x).mul_f64(x).div_f64(4.0);
    let mut term = Dd::from(1.0); // (x²/4)^k / (k!(k+1)!)
    let mut harmonic = Dd::ZERO; // H_k
    let mut hnext = Dd::from(1.0); // H_{k+1}
    let mut sum = term.mul(harmonic.add(hnext));
    for k in 1..500 {
        term = term.mul(q).div_f64((k * (k + 1)) as f64);
        harmonic = harmonic.add(Dd::from(1.0).div_f64(k as f64));
        hnext = harmonic.add(Dd::from(1.0).div_f64((k + 1) as f64));
        let contrib = term.mul(harmonic.add(hnext));
        sum = sum.add(contrib);
        if contrib.hi.abs() < 1e-34 * sum.hi.abs().max(1.0) {
            break;
        }
    }
    let log_factor = dd::ln(0.5 * x).add(dd::euler_gamma());
    let res = log_factor
        .mul(i1_dd(x))
        .add(Dd::from(1.0).div_f64(x))
        .add(sum.mul_f64(-0.25 * x));
    res.value()
}

/// K_nu asymptotic: sqrt(pi/(2x)) e^{-x} Σ b_m,
/// b_m = b_{m-1} (4 nu² - (2m-1)²) / (8 m x), truncated at the smallest term.
fn k_asymptotic(nu: u32, x: f64) -> f64 {
    let four_nu2 = (4 * nu * nu) as f64;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut last = f64::INFINITY;
    for m in 1..80u32 {
        let j = (2 * m - 1) as f64;
        term *= (four_nu2 - j * j) / (8.0 * m as f64 * x);
        if term.abs() >= last {
            break;
        }
        sum += term;
        last = term.abs();
        if last < 1e-18 {
            break;
        }
    }
    (std::f64::consts::FRAC_PI_2 / x).sqrt() * (-x).exp() * sum
}

/// Modified Bessel function of the second kind, order zero. Domain: x > 0.
pub fn bessel_k0(x: f64) -> Result<f64, Error> {
    if x <= 0.0 {
        return Err(Error::domain("bessel_k0", format!("x = {x} <= 0")));
    }
    Ok(if x <= 20.0 { k0_series(x) } else { k_asymptotic(0, x) })
}

/// Modified Bessel function of the second kind, order one. Domain: x > 0.
pub fn bessel_k1(x: f64) -> Result<f64, Error> {
    if x <= 0.0 {
        return Err(Error::domain("bessel_k1", format!("x = {x} <= 0")));
    }
    Ok(if x <= 20.0 { k1_series(x) } else { k_asymptotic(1, x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::quad;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// Independent oracle: J0(x) = (1/pi) ∫_0^pi cos(x sin t) dt.
    fn j0_oracle(x: f64) -> f64 {
        quad::integrate(|t| (x * t.sin()).cos(), 0.0, std::f64::consts::PI, 1e-13, 1e-15)
            .unwrap()
            .value
            / std::f64::consts::PI
    }

    /// Independent oracle: J1(x) = (1/pi) ∫_0^pi cos(t - x sin t) dt.
    fn j1_oracle(x: f64) -> f64 {
        quad::integrate(|t| (t - x * t.sin()).cos(), 0.0, std::f64::consts::PI, 1e-13, 1e-15)
            .unwrap()
            .value
            / std::f64::consts::PI
    }

    /// Independent oracle: K0(x) = ∫_0^∞ e^{-x cosh t} dt.
    fn k0_oracle(x: f64) -> f64 {
        // cosh t - 1 substitution keeps the integrand scaled; t range [0, 40]
        // is past double-precision underflow of the tail for x >= 0.05.
        quad::integrate(|t| (-x * t.cosh()).exp(), 0.0, 40.0, 1e-13, 1e-300).unwrap().value
    }

    /// Independent oracle: K1(x) = ∫_0^∞ e^{-x cosh t} cosh t dt.
    fn k1_oracle(x: f64) -> f64 {
        quad::integrate(|t| (-x * t.cosh()).exp() * t.cosh(), 0.0, 40.0, 1e-13, 1e-300)
            .unwrap()
            .value
    }

    #[test]
    fn j0_at_zero_is_one() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn j_matches_integral_oracle() {
        for &x in &[0.3, 1.0, 2.4048, 5.0, 8.0, 12.0, 17.9, 18.1, 25.0, 37.5, 50.0] {
            assert!(
                (bessel_j0(x) - j0_oracle(x)).abs() < 1e-12,
                "J0({x}) = {} vs oracle {}",
                bessel_j0(x),
                j0_oracle(x)
            );
            assert!(
                (bessel_j1(x) - j1_oracle(x)).abs() < 1e-12,
                "J1({x}) = {} vs oracle {}",
                bessel_j1(x),
                j1_oracle(x)
            );
        }
    }

    #[test]
    fn j_series_asymptotic_agree_in_overlap() {
        for &x in &[15.0, 16.0, 18.0, 19.0, 21.0] {
            assert!((j0_series(x) - j_asymptotic(0, x)).abs() < 1e-13);
            assert!((j1_series(x) - j_asymptotic(1, x)).abs() < 1e-13);
        }
    }

    #[test]
    fn k_matches_integral_oracle() {
        for &x in &[0.05, 0.3, 1.0, 2.0, 5.0, 10.0, 15.0, 19.9, 20.1, 35.0, 50.0] {
            let k0 = bessel_k0(x).unwrap();
            let k1 = bessel_k1(x).unwrap();
            assert!((k0 - k0_oracle(x)).abs() < 1e-12, "K0({x}) = {k0} vs {}", k0_oracle(x));
            assert!((k1 - k1_oracle(x)).abs() < 1e-12, "K1({x}) = {k1} vs {}", k1_oracle(x));
        }
    }

    #[test]
    fn k0_at_one_reference() {
        // Spec value 0.42102443824... from the integral representation.
        let k0 = bessel_k0(1.0).unwrap();
        assert!((k0 - 0.421_024_438_24).abs() < 1e-10);
        assert!((k0 - k0_oracle(1.0)).abs() < 1e-13);
    }

    #[test]
    fn k_domain_errors() {
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k0(-1.0).is_err());
        assert!(bessel_k1(0.0).is_err());
    }

    #[test]
    fn first_j0_zero() {
        let z = super::super::j0_first_zero();
        assert!((z - 2.404_825_557_695_773).abs() < 1e-12, "j0 zero = {z}");
        assert!(bessel_j0(z).abs() < 1e-13);
    }

    #[test]
    fn j_squared_sum_decreasing() {
        // J0² + J1² is strictly decreasing on (0, 10).
        let mut prev = bessel_j0(0.01).powi(2) + bessel_j1(0.01).powi(2);
        let mut x = 0.11;
        while x < 10.0 {
            let cur = bessel_j0(x).powi(2) + bessel_j1(x).powi(2);
            assert!(cur < prev, "J0²+J1² not decreasing at x = {x}");
            prev = cur;
            x += 0.1;
        }
    }

    #[test]
    fn k0_positive_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=500 {
            let x = i as f64 * 0.1;
            let k0 = bessel_k0(x).unwrap();
            let k1 = bessel_k1(x).unwrap();
            assert!(k0 > 0.0);
            assert!(k1 > 0.0, "K0' = -K1 must be negative, K1({x}) = {k1}");
            assert!(k0 < prev);
            prev = k0;
        }
    }

    #[test]
    fn tiny_argument_k() {
        // K0 ~ ln(2/x) - γ as x -> 0; exercised down to the matching floor.
        let k0 = bessel_k0(1e-12).unwrap();
        let approx = (2.0 / 1e-12f64).ln() - EULER_GAMMA;
        assert!((k0 - approx).abs() < 1e-10);
        // K1 ~ 1/x
        let k1 = bessel_k1(1e-12).unwrap();
        assert!((k1 * 1e-12 - 1.0).abs() < 1e-10);
    }
}
