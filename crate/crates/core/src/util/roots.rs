//! Scalar root finding on a bracket: plain bisection and an Illinois-damped
//! regula falsi for smooth monotone functions.

use crate::error::Error;

/// Bisection on [lo, hi]; f(lo) and f(hi) must straddle zero.
/// Stops when |f(mid)| <= f_tol or the bracket shrinks below x_tol.
pub fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> Result<f64, Error> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot {
            msg: format!("no sign change on [{lo:.6e}, {hi:.6e}]"),
        });
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() <= f_tol || (hi - lo).abs() <= x_tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Illinois variant of regula falsi; same contract as [`bisect`] but far
/// fewer evaluations when f is smooth. Falls back to the midpoint whenever
/// the secant step leaves the bracket.
pub fn illinois<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> Result<f64, Error> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot {
            msg: format!("no sign change on [{lo:.6e}, {hi:.6e}]"),
        });
    }
    let mut last_side = 0i8;
    for _ in 0..max_iter {
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !x.is_finite() || x <= lo || x >= hi {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.abs() <= f_tol || (hi - lo).abs() <= x_tol {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if last_side == -1 {
                fhi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            fhi = fx;
            if last_side == 1 {
                flo *= 0.5;
            }
            last_side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_cosine() {
        let r = bisect(|x: f64| x.cos(), 0.0, 3.0, 1e-14, 0.0, 200).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn illinois_matches_bisect() {
        let f = |x: f64| x * x * x - 2.0;
        let a = bisect(f, 0.0, 2.0, 1e-14, 0.0, 200).unwrap();
        let b = illinois(f, 0.0, 2.0, 1e-14, 0.0, 200).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - 2f64.powf(1.0 / 3.0)).abs() < 1e-13);
    }
}
