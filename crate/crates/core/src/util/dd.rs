//! Minimal double-double arithmetic (~31 significant digits), used where a
//! plain f64 series loses digits to cancellation: the Bessel power series at
//! moderate argument and the K0/K1 log-series.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// two_sum when |a| >= |b| is known.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Accurate double-double addition (two two_sums plus renormalization);
    /// the cheaper one-two_sum variant loses a full eps under cancellation,
    /// which is visible wherever a huge log-series pair nearly cancels.
    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd::from(x))
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        // Residual correction: (self - q1*x) / x
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p) - e + self.lo;
        let q2 = r / x;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r1 = self.add(other.mul_f64(q1).neg());
        let q2 = r1.hi / other.hi;
        let r2 = r1.add(other.mul_f64(q2).neg());
        let q3 = r2.hi / other.hi;
        Dd::from(q1).add_f64(q2).add_f64(q3)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// ln 2 in double-double, from 2 atanh(1/3) = 2 Σ (1/3)^{2k+1}/(2k+1).
pub fn ln2() -> Dd {
    use std::sync::OnceLock;
    static LN2: OnceLock<Dd> = OnceLock::new();
    *LN2.get_or_init(|| {
        let t = Dd::from(1.0).div_f64(3.0);
        let t2 = t.mul(t);
        let mut power = t;
        let mut sum = t;
        for k in 1..40 {
            power = power.mul(t2);
            sum = sum.add(power.div_f64((2 * k + 1) as f64));
        }
        sum.mul_f64(2.0)
    })
}

/// Natural log of a positive f64 in double-double: x = 2^m y with
/// y in [1, 2), then ln y = 2 atanh((y-1)/(y+1)) with |t| <= 1/3.
pub fn ln(x: f64) -> Dd {
    assert!(x > 0.0 && x.is_finite());
    let m = x.log2().floor();
    let y = x / 2f64.powf(m); // exact: power-of-two scaling
    let t = Dd::from(y).add_f64(-1.0).div(Dd::from(y).add_f64(1.0));
    let t2 = t.mul(t);
    let mut power = t;
    let mut sum = t;
    for k in 1..40 {
        power = power.mul(t2);
        let term = power.div_f64((2 * k + 1) as f64);
        sum = sum.add(term);
        if term.hi.abs() < 1e-35 * sum.hi.abs().max(1e-30) {
            break;
        }
    }
    ln2().mul_f64(m).add(sum.mul_f64(2.0))
}

/// Euler–Mascheroni constant in double-double via Euler–Maclaurin at
/// n = 100: γ = H_n - ln n - 1/(2n) + Σ_k B_2k/(2k n^{2k}) corrections.
pub fn euler_gamma() -> Dd {
    use std::sync::OnceLock;
    static GAMMA: OnceLock<Dd> = OnceLock::new();
    *GAMMA.get_or_init(|| {
        let n = 100.0f64;
        let mut h = Dd::ZERO;
        for k in 1..=100u32 {
            h = h.add(Dd::from(1.0).div_f64(k as f64));
        }
        let n2 = n * n;
        let mut corr = Dd::from(-1.0).div_f64(2.0 * n);
        // + 1/(12 n²) - 1/(120 n⁴) + 1/(252 n⁶) - 1/(240 n⁸) + 1/(132 n^10)
        // - 691/(32760 n^12) + 1/(12 n^14)
        let coeffs: [(f64, f64); 7] = [
            (1.0, 12.0),
            (-1.0, 120.0),
            (1.0, 252.0),
            (-1.0, 240.0),
            (1.0, 132.0),
            (-691.0, 32760.0),
            (1.0, 12.0),
        ];
        let mut scale = 1.0;
        for (num, den) in coeffs {
            scale *= n2;
            corr = corr.add(Dd::from(num).div_f64(den * scale));
        }
        h.add(ln(n).neg()).add(corr)
    })
}
