//! Nonnegative magnitudes with a wide exponent, used for error radii.
//!
//! Every operation has an upward (`_up`) or downward (`_down`) rounded
//! form; the f64 result is nudged by a relative `2^-50` in the safe
//! direction, which dominates the `2^-53` rounding of the hardware op.

use std::cmp::Ordering;

const UP: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;
const DOWN: f64 = 1.0 - 1.0 / (1u64 << 50) as f64;

/// `m · 2^e` with `m ∈ [0.5, 1)` or `m = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

/// Split a positive finite f64 into `(m, e)` with `m ∈ [0.5, 1)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if e > 1023 {
        if e > 2100 {
            return if m == 0.0 { 0.0 } else { f64::INFINITY };
        }
        return ldexp(m * 2f64.powi(1000), e - 1000);
    }
    if e < -1022 {
        if e < -2200 {
            return 0.0;
        }
        return ldexp(m * 2f64.powi(-1000), e + 1000);
    }
    m * 2f64.powi(e as i32)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        assert!(m > 0.0 && m.is_finite(), "bad magnitude {m}");
        let (mm, ee) = frexp(m);
        Mag { m: mm, e: e + ee }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Mag {
        Mag { m: 0.5, e: e + 1 }
    }

    pub fn one() -> Mag {
        Mag::pow2(0)
    }

    /// An upper bound for `x ≥ 0`.
    pub fn from_f64_up(x: f64) -> Mag {
        assert!(x >= 0.0, "negative magnitude {x}");
        Mag::norm(x, 0)
    }

    pub fn from_f64_down(x: f64) -> Mag {
        Mag::from_f64_up(x.max(0.0))
    }

    /// `m·2^e` for an integer mantissa, rounded up.
    pub fn from_u64_scaled_up(m: u64, e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        Mag::norm(m as f64 * UP, e)
    }

    pub fn from_u64_scaled_down(m: u64, e: i64) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        Mag::norm(m as f64 * DOWN, e)
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * UP, self.e + o.e)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * DOWN, self.e + o.e)
    }

    pub fn div_up(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "division by zero magnitude");
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m / o.m * UP, self.e - o.e)
    }

    pub fn div_down(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "division by zero magnitude");
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m / o.m * DOWN, self.e - o.e)
    }

    pub fn add_up(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let shift = hi.e - lo.e;
        if shift > 60 {
            return Mag::norm(hi.m * UP * UP, hi.e);
        }
        Mag::norm((hi.m + ldexp(lo.m, -shift)) * UP, hi.e)
    }

    pub fn add_down(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let shift = hi.e - lo.e;
        if shift > 60 {
            return Mag::norm(hi.m * DOWN, hi.e);
        }
        Mag::norm((hi.m + ldexp(lo.m, -shift)) * DOWN, hi.e)
    }

    /// A lower bound for `max(self − o, 0)`.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self <= o {
            return Mag::ZERO;
        }
        let shift = self.e - o.e;
        if shift > 60 {
            return Mag::norm(self.m * DOWN * DOWN, self.e);
        }
        let d = self.m - ldexp(o.m, -shift) * UP;
        if d <= 0.0 {
            return Mag::ZERO;
        }
        Mag::norm(d * DOWN, self.e)
    }

    /// An upper bound for `self − o` when `self ≥ o`.
    pub fn sub_up(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        let shift = self.e - o.e;
        if shift > 60 {
            return self;
        }
        let d = self.m - ldexp(o.m, -shift) * DOWN;
        if d <= 0.0 {
            return Mag::ZERO;
        }
        Mag::norm(d * UP, self.e)
    }

    pub fn mul_2exp(self, k: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag {
                m: self.m,
                e: self.e + k,
            }
        }
    }

    pub fn sqrt_up(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 {
            (self.m, self.e)
        } else {
            (self.m * 2.0, self.e - 1)
        };
        Mag::norm(m.sqrt() * UP, e / 2)
    }

    pub fn sqrt_down(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 {
            (self.m, self.e)
        } else {
            (self.m * 2.0, self.e - 1)
        };
        Mag::norm(m.sqrt() * DOWN, e / 2)
    }

    pub fn powi_up(self, n: u32) -> Mag {
        let mut acc = Mag::one();
        for _ in 0..n {
            acc = acc.mul_up(self);
        }
        acc
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Mag) -> Mag {
        if self <= o {
            self
        } else {
            o
        }
    }

    /// Nearest f64; saturates to `inf` or `0`.
    pub fn to_f64(self) -> f64 {
        ldexp(self.m, self.e)
    }

    /// Binary exponent `e` with `self < 2^e`; `i64::MIN` for zero.
    pub fn exponent(self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.e
        }
    }

    pub fn log2(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.e as f64 + self.m.log2()
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, o: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m)?),
        })
    }
}
