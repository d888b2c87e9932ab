//! Real and complex balls: an exact dyadic center plus an upper bound on
//! the distance to the enclosed value.

use std::fmt;

use num_bigint::BigInt;

use super::float::Float;
use super::mag::Mag;

#[derive(Clone, Debug)]
pub struct RealBall {
    pub mid: Float,
    pub rad: Mag,
}

impl RealBall {
    pub fn exact(mid: Float) -> RealBall {
        RealBall {
            mid,
            rad: Mag::ZERO,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> RealBall {
        RealBall::exact(Float::from_int(n))
    }

    pub fn from_f64(x: f64) -> RealBall {
        RealBall::exact(Float::from_f64(x))
    }

    pub fn zero() -> RealBall {
        RealBall::exact(Float::zero())
    }

    pub fn mag_up(&self) -> Mag {
        self.mid.mag_up().add_up(self.rad)
    }

    pub fn mag_down(&self) -> Mag {
        self.mid.mag_down().sub_down(self.rad)
    }

    pub fn neg(&self) -> RealBall {
        RealBall {
            mid: self.mid.neg(),
            rad: self.rad,
        }
    }

    pub fn add(&self, o: &RealBall, prec: u32) -> RealBall {
        let (mid, err) = self.mid.add(&o.mid, prec);
        RealBall {
            mid,
            rad: self.rad.add_up(o.rad).add_up(err),
        }
    }

    pub fn sub(&self, o: &RealBall, prec: u32) -> RealBall {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RealBall, prec: u32) -> RealBall {
        let (mid, err) = self.mid.mul(&o.mid, prec);
        let rad = self
            .mid
            .mag_up()
            .mul_up(o.rad)
            .add_up(o.mid.mag_up().mul_up(self.rad))
            .add_up(self.rad.mul_up(o.rad))
            .add_up(err);
        RealBall { mid, rad }
    }

    pub fn mul_int(&self, n: i64, prec: u32) -> RealBall {
        let (mid, err) = self.mid.mul_int(n).round(prec);
        let k = Mag::from_f64_up(n.unsigned_abs() as f64);
        RealBall {
            mid,
            rad: self.rad.mul_up(k).add_up(err),
        }
    }

    pub fn mul_2exp(&self, k: i64) -> RealBall {
        RealBall {
            mid: self.mid.mul_2exp(k),
            rad: self.rad.mul_2exp(k),
        }
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &RealBall, prec: u32) -> Option<RealBall> {
        let den_low = o.mag_down();
        if den_low.is_zero() {
            return None;
        }
        let (mid, err) = self.mid.div(&o.mid, prec);
        // |x/y − a/b| ≤ (|x−a| + |a/b|·|y−b|) / |y|
        let q = mid.mag_up().add_up(err);
        let rad = self.rad.add_up(q.mul_up(o.rad)).div_up(den_low).add_up(err);
        Some(RealBall { mid, rad })
    }

    pub fn div_int(&self, n: i64, prec: u32) -> RealBall {
        self.div(&RealBall::from_int(n), prec)
            .expect("nonzero divisor")
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.mag_down() <= self.rad
    }

    /// Certainly greater than zero.
    pub fn is_positive(&self) -> bool {
        self.mid.sign() == num_bigint::Sign::Plus && self.mid.mag_down() > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.sign() == num_bigint::Sign::Minus && self.mid.mag_down() > self.rad
    }

    /// Lower and upper endpoints as f64 (for diagnostics).
    pub fn bounds_f64(&self) -> (f64, f64) {
        let m = self.mid.to_f64();
        let r = self.rad.to_f64();
        (m - r, m + r)
    }

    pub fn to_complex(&self) -> ComplexBall {
        ComplexBall {
            re: self.mid.clone(),
            im: Float::zero(),
            rad: self.rad,
        }
    }

    pub fn contains(&self, o: &RealBall) -> bool {
        let d = self.mid.add_exact(&o.mid.neg()).mag_up();
        d.add_up(o.rad) <= self.rad
    }

    /// Integers `n` with `|n − mid| ≤ rad`.
    pub fn integers(&self) -> (BigInt, BigInt) {
        let lo = interval_endpoint(&self.mid, self.rad, false);
        let hi = interval_endpoint(&self.mid, self.rad, true);
        (lo, hi)
    }
}

/// Ceil of `mid − rad` (upper = false) or floor of `mid + rad` (upper =
/// true), computed with the radius rounded outward.
fn interval_endpoint(mid: &Float, rad: Mag, upper: bool) -> BigInt {
    let r = mag_to_float_up(rad);
    if upper {
        mid.add_exact(&r).floor()
    } else {
        let v = mid.add_exact(&r.neg());
        let f = v.floor();
        if Float::from_int(f.clone()).cmp_value(&v).is_eq() {
            f
        } else {
            f + 1
        }
    }
}

/// An exact dyadic that is ≥ the magnitude.
pub fn mag_to_float_up(m: Mag) -> Float {
    if m.is_zero() {
        return Float::zero();
    }
    let e = m.exponent();
    // m < 2^e; 60 bits of mantissa rounded up.
    let x = m.mul_2exp(60 - e).to_f64();
    let n = x.ceil() as u64 + 1;
    Float::from_parts(BigInt::from(n), e - 60)
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:.3e}]", self.mid.to_sci(20), self.rad.to_f64())
    }
}

/// A closed disk `{z : |z − (re + i·im)| ≤ rad}`.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: Float,
    pub im: Float,
    pub rad: Mag,
}

fn hypot_up(a: Mag, b: Mag) -> Mag {
    a.mul_up(a).add_up(b.mul_up(b)).sqrt_up()
}

fn hypot_down(a: Mag, b: Mag) -> Mag {
    a.mul_down(a).add_down(b.mul_down(b)).sqrt_down()
}

impl ComplexBall {
    pub fn new(re: Float, im: Float, rad: Mag) -> ComplexBall {
        ComplexBall { re, im, rad }
    }

    pub fn zero() -> ComplexBall {
        ComplexBall::new(Float::zero(), Float::zero(), Mag::ZERO)
    }

    pub fn one() -> ComplexBall {
        ComplexBall::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> ComplexBall {
        ComplexBall::new(Float::from_int(n), Float::zero(), Mag::ZERO)
    }

    pub fn from_real_imag(re: &RealBall, im: &RealBall) -> ComplexBall {
        ComplexBall {
            re: re.mid.clone(),
            im: im.mid.clone(),
            rad: re.rad.add_up(im.rad),
        }
    }

    pub fn center_abs_up(&self) -> Mag {
        hypot_up(self.re.mag_up(), self.im.mag_up())
    }

    pub fn center_abs_down(&self) -> Mag {
        hypot_down(self.re.mag_down(), self.im.mag_down())
    }

    /// Upper bound on `|z|` over the ball.
    pub fn mag_up(&self) -> Mag {
        self.center_abs_up().add_up(self.rad)
    }

    /// Lower bound on `|z|` over the ball.
    pub fn mag_down(&self) -> Mag {
        self.center_abs_down().sub_down(self.rad)
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall::new(self.re.neg(), self.im.neg(), self.rad)
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall::new(self.re.clone(), self.im.neg(), self.rad)
    }

    pub fn real_part(&self) -> RealBall {
        RealBall {
            mid: self.re.clone(),
            rad: self.rad,
        }
    }

    pub fn imag_part(&self) -> RealBall {
        RealBall {
            mid: self.im.clone(),
            rad: self.rad,
        }
    }

    pub fn add(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        let (re, e1) = self.re.add(&o.re, prec);
        let (im, e2) = self.im.add(&o.im, prec);
        ComplexBall::new(re, im, self.rad.add_up(o.rad).add_up(e1).add_up(e2))
    }

    pub fn sub(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        let ac = self.re.mul_exact(&o.re);
        let bd = self.im.mul_exact(&o.im);
        let ad = self.re.mul_exact(&o.im);
        let bc = self.im.mul_exact(&o.re);
        let (re, e1) = ac.add(&bd.neg(), prec);
        let (im, e2) = ad.add(&bc, prec);
        let rad = self
            .center_abs_up()
            .mul_up(o.rad)
            .add_up(o.center_abs_up().mul_up(self.rad))
            .add_up(self.rad.mul_up(o.rad))
            .add_up(e1)
            .add_up(e2);
        ComplexBall::new(re, im, rad)
    }

    pub fn sqr(&self, prec: u32) -> ComplexBall {
        let a2 = self.re.mul_exact(&self.re);
        let b2 = self.im.mul_exact(&self.im);
        let ab = self.re.mul_exact(&self.im).mul_2exp(1);
        let (re, e1) = a2.add(&b2.neg(), prec);
        let (im, e2) = ab.round(prec);
        let c = self.center_abs_up();
        let rad = c
            .mul_up(self.rad)
            .mul_2exp(1)
            .add_up(self.rad.mul_up(self.rad))
            .add_up(e1)
            .add_up(e2);
        ComplexBall::new(re, im, rad)
    }

    pub fn mul_real(&self, o: &RealBall, prec: u32) -> ComplexBall {
        self.mul(&o.to_complex(), prec)
    }

    pub fn mul_int(&self, n: i64, prec: u32) -> ComplexBall {
        let (re, e1) = self.re.mul_int(n).round(prec);
        let (im, e2) = self.im.mul_int(n).round(prec);
        let k = Mag::from_f64_up(n.unsigned_abs() as f64);
        ComplexBall::new(re, im, self.rad.mul_up(k).add_up(e1).add_up(e2))
    }

    pub fn mul_2exp(&self, k: i64) -> ComplexBall {
        ComplexBall::new(
            self.re.mul_2exp(k),
            self.im.mul_2exp(k),
            self.rad.mul_2exp(k),
        )
    }

    /// `None` if the ball contains zero.
    pub fn inv(&self, prec: u32) -> Option<ComplexBall> {
        let low = self.mag_down();
        if low.is_zero() {
            return None;
        }
        // center: conj(c) / |c|², computed with prec + 8 bits
        let n = self
            .re
            .mul_exact(&self.re)
            .add_exact(&self.im.mul_exact(&self.im));
        let wp = prec + 8;
        let (re, e1) = self.re.div(&n, wp);
        let (im, e2) = self.im.neg().div(&n, wp);
        let (re, e3) = re.round(prec);
        let (im, e4) = im.round(prec);
        // |1/z − 1/c| ≤ r / (|c|·(|c| − r))
        let c_low = self.center_abs_down();
        let prop = if self.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.div_up(c_low.mul_down(low))
        };
        let rad = prop.add_up(e1).add_up(e2).add_up(e3).add_up(e4);
        Some(ComplexBall::new(re, im, rad))
    }

    pub fn div(&self, o: &ComplexBall, prec: u32) -> Option<ComplexBall> {
        Some(self.mul(&o.inv(prec + 4)?, prec))
    }

    pub fn div_int(&self, n: i64, prec: u32) -> ComplexBall {
        assert!(n != 0);
        let d = Float::from_int(n);
        let (re, e1) = self.re.div(&d, prec);
        let (im, e2) = self.im.div(&d, prec);
        let k = Mag::from_f64_down(n.unsigned_abs() as f64);
        ComplexBall::new(re, im, self.rad.div_up(k).add_up(e1).add_up(e2))
    }

    pub fn pow(&self, mut n: u32, prec: u32) -> ComplexBall {
        let mut base = self.clone();
        let mut acc = ComplexBall::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    pub fn round(&self, prec: u32) -> ComplexBall {
        let (re, e1) = self.re.clone().round(prec);
        let (im, e2) = self.im.clone().round(prec);
        ComplexBall::new(re, im, self.rad.add_up(e1).add_up(e2))
    }

    pub fn add_error(&mut self, err: Mag) {
        self.rad = self.rad.add_up(err);
    }

    /// Every point of `o` lies in `self`.
    pub fn contains(&self, o: &ComplexBall) -> bool {
        let dre = self.re.add_exact(&o.re.neg()).mag_up();
        let dim = self.im.add_exact(&o.im.neg()).mag_up();
        hypot_up(dre, dim).add_up(o.rad) <= self.rad
    }

    /// The disks are certainly disjoint.
    pub fn is_disjoint(&self, o: &ComplexBall) -> bool {
        let dre = self.re.add_exact(&o.re.neg()).mag_down();
        let dim = self.im.add_exact(&o.im.neg()).mag_down();
        hypot_down(dre, dim) > self.rad.add_up(o.rad)
    }

    pub fn contains_point(&self, re: &Float, im: &Float) -> bool {
        let dre = self.re.add_exact(&re.neg()).mag_up();
        let dim = self.im.add_exact(&im.neg()).mag_up();
        hypot_up(dre, dim) <= self.rad
    }

    pub fn contains_int(&self, n: &BigInt) -> bool {
        self.contains_point(&Float::from_int(n.clone()), &Float::zero())
    }

    /// The real integers inside the disk, as an inclusive range, or
    /// `None` if the disk misses the real axis or no integer lies inside.
    pub fn integer_range(&self) -> Option<(BigInt, BigInt)> {
        let im = self.im.mag_down();
        if im > self.rad {
            return None;
        }
        // Over-approximate by the real shadow of the disk.
        let (lo, hi) = self.real_part().integers();
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    /// Distance from the center to the nearest integer (diagnostic).
    pub fn center_int_distance(&self) -> f64 {
        let n = self.re.round_int();
        let dre = self.re.add_exact(&Float::from_int(n).neg()).to_f64();
        let dim = self.im.to_f64();
        dre.hypot(dim)
    }

    /// The unique integer in the disk, if the disk has radius < 1/2 and
    /// contains one.
    pub fn unique_integer(&self) -> Option<BigInt> {
        if self.rad >= Mag::pow2(-1) {
            return None;
        }
        let n = self.re.round_int();
        if self.contains_int(&n) {
            Some(n)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} + {}i +/- {:.3e}]",
            self.re.to_sci(20),
            self.im.to_sci(20),
            self.rad.to_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb(re: f64, im: f64, rad: f64) -> ComplexBall {
        ComplexBall::new(
            Float::from_f64(re),
            Float::from_f64(im),
            Mag::from_f64_up(rad),
        )
    }

    #[test]
    fn product_encloses_pointwise_products() {
        let a = cb(1.5, -2.0, 0.01);
        let b = cb(-0.25, 3.0, 0.02);
        let p = a.mul(&b, 64);
        for (da, db) in [(0.01, 0.02), (-0.007, 0.014), (0.0, -0.02)] {
            let x = cb(1.5 + da, -2.0, 0.0);
            let y = cb(-0.25, 3.0 + db, 0.0);
            assert!(p.contains(&x.mul(&y, 200)));
        }
    }

    #[test]
    fn inverse() {
        let a = cb(3.0, 4.0, 1e-6);
        let inv = a.inv(80).unwrap();
        assert!(inv.contains(&cb(3.0 / 25.0, -4.0 / 25.0, 0.0)));
        assert!(cb(0.0, 0.0, 1e-3).inv(64).is_none());
        let one = a.mul(&inv, 80);
        assert!(one.contains_int(&BigInt::from(1)));
    }

    #[test]
    fn integer_detection() {
        let a = cb(41.9999, 0.0, 0.001);
        assert_eq!(a.integer_range(), Some((42.into(), 42.into())));
        let b = cb(41.5, 0.0, 0.1);
        assert_eq!(b.integer_range(), None);
        let c = cb(42.0, 0.5, 0.1);
        assert_eq!(c.integer_range(), None);
        assert_eq!(
            cb(-7.0000001, 0.0, 1e-3).unique_integer(),
            Some((-7).into())
        );
    }

    #[test]
    fn disjointness() {
        assert!(cb(0.0, 0.0, 1.0).is_disjoint(&cb(3.0, 0.0, 1.0)));
        assert!(!cb(0.0, 0.0, 1.0).is_disjoint(&cb(1.5, 0.0, 1.0)));
    }

    #[test]
    fn real_division() {
        let x = RealBall::from_int(10);
        let y = RealBall {
            mid: Float::from_int(4),
            rad: Mag::from_f64_up(0.01),
        };
        let q = x.div(&y, 64).unwrap();
        let (lo, hi) = q.bounds_f64();
        assert!(lo <= 10.0 / 4.01 && hi >= 10.0 / 3.99);
        assert!(RealBall::zero().contains_zero());
        assert!(RealBall::from_int(-3).is_negative());
        assert_eq!(
            RealBall::from_f64(2.5).integers(),
            (BigInt::from(3), BigInt::from(2))
        );
    }
}
