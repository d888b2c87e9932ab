//! Dyadic numbers `man · 2^exp` with big-integer mantissas.
//!
//! Arithmetic is exact; `round` truncates to a bit budget and reports
//! the discarded amount as an upper-bound [`Mag`].

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Float {
    man: BigInt,
    exp: i64,
}

impl Float {
    pub fn zero() -> Float {
        Float {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Float {
        Float {
            man: n.into(),
            exp: 0,
        }
    }

    pub fn from_parts(man: BigInt, exp: i64) -> Float {
        Float { man, exp }
    }

    /// Exact conversion of a finite f64.
    pub fn from_f64(x: f64) -> Float {
        assert!(x.is_finite());
        if x == 0.0 {
            return Float::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw - 1075)
        };
        Float {
            man: BigInt::from(sign) * BigInt::from(m),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    /// Number of mantissa bits.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent `t` with `|self| < 2^t`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn neg(&self) -> Float {
        Float {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Float {
        Float {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Float {
        Float {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// Upper bound on `|self|`.
    pub fn mag_up(&self) -> Mag {
        let b = self.man.bits();
        if b == 0 {
            return Mag::ZERO;
        }
        let mag = self.man.magnitude();
        if b <= 53 {
            return Mag::from_u64_scaled_up(mag.to_u64().unwrap(), self.exp);
        }
        let shift = b - 53;
        let head = (mag >> shift).to_u64().unwrap();
        Mag::from_u64_scaled_up(head + 1, self.exp + shift as i64)
    }

    /// Lower bound on `|self|`.
    pub fn mag_down(&self) -> Mag {
        let b = self.man.bits();
        if b == 0 {
            return Mag::ZERO;
        }
        let mag = self.man.magnitude();
        if b <= 53 {
            return Mag::from_u64_scaled_down(mag.to_u64().unwrap(), self.exp);
        }
        let shift = b - 53;
        let head = (mag >> shift).to_u64().unwrap();
        Mag::from_u64_scaled_down(head, self.exp + shift as i64)
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.man.bits();
        if b == 0 {
            return 0.0;
        }
        let (head, e) = if b > 60 {
            let s = b - 60;
            ((&self.man >> s).to_f64().unwrap(), self.exp + s as i64)
        } else {
            (self.man.to_f64().unwrap(), self.exp)
        };
        if e > 2000 {
            return head.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let mut v = head;
        let mut e = e;
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
        }
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
        }
        v * 2f64.powi(e as i32)
    }

    /// Truncate to at most `prec` mantissa bits; returns the error bound.
    pub fn round(self, prec: u32) -> (Float, Mag) {
        let b = self.man.bits();
        if b <= prec as u64 {
            return (self, Mag::ZERO);
        }
        let shift = b - prec as u64;
        // Arithmetic shift floors, so the error is below one new ulp.
        let man = self.man >> shift;
        let exp = self.exp + shift as i64;
        (Float { man, exp }, Mag::pow2(exp))
    }

    fn align(a: &Float, b: &Float) -> (BigInt, BigInt, i64) {
        match a.exp.cmp(&b.exp) {
            Ordering::Equal => (a.man.clone(), b.man.clone(), a.exp),
            Ordering::Greater => (&a.man << (a.exp - b.exp) as u64, b.man.clone(), b.exp),
            Ordering::Less => (a.man.clone(), &b.man << (b.exp - a.exp) as u64, a.exp),
        }
    }

    /// Exact sum.
    pub fn add_exact(&self, o: &Float) -> Float {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (x, y, e) = Float::align(self, o);
        Float { man: x + y, exp: e }
    }

    /// Sum rounded to `prec` bits. An operand far below the other's last
    /// retained bit is folded into the error instead of being aligned.
    pub fn add(&self, o: &Float, prec: u32) -> (Float, Mag) {
        if self.is_zero() {
            return o.clone().round(prec);
        }
        if o.is_zero() {
            return self.clone().round(prec);
        }
        let (ta, tb) = (self.top(), o.top());
        let gap = prec as i64 + 4;
        if ta - tb > gap {
            let (r, err) = self.clone().round(prec);
            return (r, err.add_up(o.mag_up()));
        }
        if tb - ta > gap {
            let (r, err) = o.clone().round(prec);
            return (r, err.add_up(self.mag_up()));
        }
        self.add_exact(o).round(prec)
    }

    pub fn sub(&self, o: &Float, prec: u32) -> (Float, Mag) {
        self.add(&o.neg(), prec)
    }

    pub fn mul_exact(&self, o: &Float) -> Float {
        Float {
            man: &self.man * &o.man,
            exp: self.exp + o.exp,
        }
    }

    pub fn mul(&self, o: &Float, prec: u32) -> (Float, Mag) {
        self.mul_exact(o).round(prec)
    }

    pub fn mul_int(&self, n: i64) -> Float {
        Float {
            man: &self.man * n,
            exp: self.exp,
        }
    }

    /// Quotient with at least `prec` correct bits; error below one ulp.
    pub fn div(&self, o: &Float, prec: u32) -> (Float, Mag) {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        let shift = (prec as i64 + 2 + o.man.bits() as i64 - self.man.bits() as i64).max(0);
        let num = &self.man << shift as u64;
        let (q, _) = num.div_mod_floor(&o.man);
        let exp = self.exp - shift - o.exp;
        let (r, err) = Float { man: q, exp }.round(prec);
        (r, err.add_up(Mag::pow2(exp)))
    }

    /// Floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            &self.man >> (-self.exp) as u64
        }
    }

    /// Nearest integer (ties upward).
    pub fn round_int(&self) -> BigInt {
        self.add_exact(&Float::from_parts(BigInt::one(), -1))
            .floor()
    }

    pub fn cmp_value(&self, o: &Float) -> Ordering {
        let (x, y, _) = Float::align(self, o);
        x.cmp(&y)
    }

    /// Decimal rendering with `digits` significant digits (for reports).
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.man.is_negative();
        let log10 = self.top() as f64 * std::f64::consts::LOG10_2;
        let k = log10.floor() as i64 - digits as i64 + 1;
        // value / 10^k rounded
        let scaled = if k >= 0 {
            let p = Float::from_int(BigInt::from(10u32).pow(k as u32));
            self.abs().div(&p, digits as u32 * 4 + 16).0.round_int()
        } else {
            let p = BigInt::from(10u32).pow((-k) as u32);
            self.abs().mul_exact(&Float::from_int(p)).round_int()
        };
        let s = scaled.to_string();
        let exp10 = k + s.len() as i64 - 1;
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{exp10}")
        } else {
            format!("{sign}{head}.{tail}e{exp10}")
        }
    }
}
