//! Small least-squares helpers for exponent fits and secular-law slopes.

/// Ordinary least squares y = intercept + slope * x.
/// Returns (slope, intercept, max |residual|).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_resid = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    (slope, intercept, max_resid)
}

/// Log-log power-law fit y ≈ c x^β over positive samples.
/// Returns (β, ln c, max log-residual).
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let xs: Vec<f64> = (1..=20).map(|i| i as f64 * 0.01).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(1.7)).collect();
        let (beta, lnc, resid) = loglog_fit(&xs, &ys);
        assert!((beta - 1.7).abs() < 1e-12);
        assert!((lnc - 3f64.ln()).abs() < 1e-12);
        assert!(resid < 1e-12);
    }
}
