//! Double-precision special functions used by the matching equations and the
//! fractional resolvent splitting: Bessel `J0`, `J1`, modified Bessel `K0`,
//! `K1`, and the constants `c1(α)`, `c2(α)`.

mod alpha;
mod bessel;

pub use alpha::{c1_alpha, c1_alpha_closed_form, c2_alpha, AlphaConstants};
pub use bessel::{bessel_i0, bessel_i1, bessel_j0, bessel_j1, bessel_k0, bessel_k1};

/// First positive zero of J0, needed as the τ-bracket of the well matching
/// equation. Computed once by bisection on the implemented J0.
pub fn j0_first_zero() -> f64 {
    use std::sync::OnceLock;
    static ZERO: OnceLock<f64> = OnceLock::new();
    *ZERO.get_or_init(|| {
        crate::util::roots::bisect(bessel_j0, 2.0, 3.0, 1e-15, 0.0, 200)
            .expect("J0 changes sign on [2, 3]")
    })
}
