//! Certified constants and elementary functions on balls.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use super::ball::{ComplexBall, RealBall};
use super::float::Float;
use super::mag::Mag;

/// `atan(1/x)·2^wp` in fixed point, with the error in ulps.
fn atan_inv_fixed(x: u32, wp: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * x;
    // power = floor(2^wp / x^(2k+1)); nested floors equal the exact floor
    let mut power = (BigInt::one() << wp) / x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.bits() == 0 {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    // one ulp per truncated division, one for the discarded tail
    (sum, 2 * k + 2)
}

fn compute_pi(prec: u32) -> RealBall {
    let wp = prec as u64 + 24;
    let (a, ea) = atan_inv_fixed(5, wp);
    let (b, eb) = atan_inv_fixed(239, wp);
    let man = a * 16 - b * 4;
    let err_ulps = 16 * ea + 4 * eb;
    let mid = Float::from_parts(man, -(wp as i64));
    let rad = Mag::from_u64_scaled_up(err_ulps, -(wp as i64));
    let (mid, e) = mid.round(prec + 8);
    RealBall {
        mid,
        rad: rad.add_up(e),
    }
}

static PI_CACHE: Mutex<Option<(u32, RealBall)>> = Mutex::new(None);

/// π to `prec` bits.
pub fn pi(prec: u32) -> RealBall {
    let mut guard = PI_CACHE.lock().unwrap();
    if let Some((p, ball)) = guard.as_ref() {
        if *p >= prec {
            let (mid, e) = ball.mid.clone().round(prec + 8);
            return RealBall {
                mid,
                rad: ball.rad.add_up(e),
            };
        }
    }
    let want = prec.max(256).next_power_of_two();
    let ball = compute_pi(want);
    *guard = Some((want, ball.clone()));
    drop(guard);
    pi(prec)
}

/// `√n` for a nonnegative integer, to `prec` bits.
pub fn sqrt_int(n: u64, prec: u32) -> RealBall {
    if n == 0 {
        return RealBall::zero();
    }
    let k = prec as u64 + 8;
    let s = (BigInt::from(n) << (2 * k)).sqrt();
    // s ≤ √n·2^k < s + 1
    RealBall {
        mid: Float::from_parts(s, -(k as i64)),
        rad: Mag::pow2(-(k as i64)),
    }
}

/// Complex exponential.
///
/// Scales the argument by `2^-s` until `|w| ≤ 2^-10`, sums the Taylor
/// series with a geometric remainder bound, then squares `s` times.
pub fn exp(z: &ComplexBall, prec: u32) -> ComplexBall {
    let zmag = z.mag_up();
    let s = if zmag.is_zero() {
        0
    } else {
        (zmag.exponent() + 10).max(0)
    };
    let wp = prec + 32 + s as u32;
    let w = z.mul_2exp(-s);
    let wmag = w.mag_up();
    let target = Mag::pow2(-(wp as i64) - 4);

    let mut sum = ComplexBall::one();
    let mut term = ComplexBall::one();
    let mut term_bound = Mag::one();
    let mut k = 1i64;
    loop {
        term = term.mul(&w, wp).div_int(k, wp);
        sum = sum.add(&term, wp);
        term_bound = term_bound.mul_up(wmag).div_up(Mag::from_f64_down(k as f64));
        if term_bound < target {
            break;
        }
        k += 1;
    }
    // tail Σ_{j>k} |w|^j / j! ≤ 2·|w|^{k+1}/(k+1)! since |w| ≤ 1/2
    let tail = term_bound
        .mul_up(wmag)
        .div_up(Mag::from_f64_down((k + 1) as f64))
        .mul_2exp(1);
    sum.add_error(tail);
    for _ in 0..s {
        sum = sum.sqr(wp);
    }
    sum.round(prec)
}

pub fn exp_real(x: &RealBall, prec: u32) -> RealBall {
    let e = exp(&x.to_complex(), prec);
    RealBall {
        mid: e.re,
        rad: e.rad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(400);
        let expect = "3.14159265358979323846264338327950288419716939937510";
        assert!(p.mid.to_sci(50).starts_with(&expect[..50]));
        assert!(p.rad.log2() < -390.0);
        // cached value reused at lower precision stays sound
        let q = pi(100);
        assert!(q.rad.log2() < -95.0);
        let f = RealBall::from_f64(std::f64::consts::PI);
        assert!(!q.contains(&f), "f64 π is not π");
    }

    #[test]
    fn sqrt_of_integers() {
        let r = sqrt_int(2, 200);
        let sq = r.mul(&r, 400);
        assert!(sq.contains(&RealBall::from_int(2)));
        assert_eq!(sqrt_int(49, 64).mid.round_int(), BigInt::from(7));
    }

    #[test]
    fn exp_identities() {
        // e^{iπ} = −1
        let p = pi(300);
        let z = ComplexBall::from_real_imag(&RealBall::zero(), &p);
        let e = exp(&z, 256);
        assert!(e.contains_int(&BigInt::from(-1)));
        assert!(e.rad.log2() < -240.0);
        // e^{−450}·e^{450} = 1
        let a = exp_real(&RealBall::from_int(-450), 256);
        let b = exp_real(&RealBall::from_int(450), 256);
        let one = a.mul(&b, 256);
        let (lo, hi) = one.bounds_f64();
        assert!(lo <= 1.0 && hi >= 1.0 && hi - lo < 1e-60);
    }
}
