//! The modular `j`-function at CM points.
//!
//! Values are computed as `j = E₄³ / (q·∏(1 − qⁿ)²⁴)`: the Eisenstein
//! series has coefficients `240·σ₃(n) ≤ 480·n³`, and the product is summed
//! through Euler's pentagonal series, whose coefficients are `0` or `±1`.
//! Both give simple geometric tail majorants because `|q| ≤ e^{−π√3}`
//! at every reduced CM point.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{exp, pi, sqrt_int, ComplexBall, Mag, RealBall};
use crate::error::{Error, Result};
use crate::quadforms::{Discriminant, ReducedForm};

/// Highest precision any evaluation will attempt.
pub const MAX_PRECISION: u32 = 1 << 20;

/// Guard bits carried through a single evaluation.
const GUARD: u32 = 40;

fn sigma3_table(n: usize) -> Vec<u64> {
    let mut s = vec![0u64; n + 1];
    for d in 1..=n {
        let d3 = (d as u64).pow(3);
        for m in (d..=n).step_by(d) {
            s[m] += d3;
        }
    }
    s
}

/// The nome `q = e^{2πiτ}` for `τ = (b + √Δ)/(2a)`.
pub fn nome(form: &ReducedForm, disc: Discriminant, prec: u32) -> ComplexBall {
    let wp = prec + 16;
    let p = pi(wp);
    let s = sqrt_int(disc.abs(), wp);
    // 2πiτ = −π√|Δ|/a + iπb/a
    let re = p.mul(&s, wp).neg().div_int(form.a, wp);
    let im = p.mul_int(form.b, wp).div_int(form.a, wp);
    exp(&ComplexBall::from_real_imag(&re, &im), prec)
}

/// Tail bound for `Σ_{n>N} 2n³xⁿ`, valid for `x ≤ 1/16`.
fn e4_tail(x: Mag, n: u64) -> Mag {
    let m = Mag::from_f64_up((n + 1) as f64);
    let head = m.powi_up(3).mul_up(x.powi_up(n as u32 + 1)).mul_2exp(1);
    // ratio of consecutive terms ≤ 8x ≤ 1/2
    head.mul_2exp(1)
}

/// `j(τ)` at the CM point of `form`, as a ball.
///
/// Fails with [`Error::PrecisionExhausted`] rather than returning a ball
/// wider than `2^{−prec/2}·max(1, |j|)`.
pub fn eval_j(form: &ReducedForm, disc: Discriminant, prec: u32) -> Result<ComplexBall> {
    if prec < 64 {
        return Err(Error::InvalidArgument(format!("precision {prec} < 64")));
    }
    if prec > MAX_PRECISION {
        return Err(Error::PrecisionExhausted(format!(
            "{prec} bits exceeds the cap of {MAX_PRECISION}"
        )));
    }
    if !form.is_reduced() || form.discriminant() != disc.value() {
        return Err(Error::InvalidArgument(format!(
            "{form} is not a reduced form of discriminant {disc}"
        )));
    }
    let wp = prec + GUARD;
    let q = nome(form, disc, wp);
    let x = q.mag_up();
    if x > Mag::from_f64_up(1.0 / 16.0) {
        return Err(Error::PrecisionExhausted(format!(
            "nome of {form} not separated from the unit circle"
        )));
    }

    let target = Mag::pow2(-(wp as i64) - 8);
    let mut n_terms = 1u64;
    while e4_tail(x, n_terms) > target {
        n_terms += 1;
    }
    let n = n_terms as usize;

    let mut powers = Vec::with_capacity(n + 1);
    powers.push(ComplexBall::one());
    for k in 1..=n {
        let next = powers[k - 1].mul(&q, wp);
        powers.push(next);
    }

    let sigma = sigma3_table(n);
    let mut e4_sum = ComplexBall::zero();
    for k in 1..=n {
        let t = powers[k].mul_int(sigma[k] as i64, wp);
        e4_sum = e4_sum.add(&t, wp);
    }
    let mut e4 = ComplexBall::one().add(&e4_sum.mul_int(240, wp), wp);
    e4.add_error(e4_tail(x, n_terms).mul_up(Mag::from_f64_up(240.0)));

    // Euler: ∏(1 − qⁿ) = Σ_k (−1)^k q^{k(3k−1)/2}, k ∈ ℤ
    let mut euler = ComplexBall::one();
    let mut k = 1u64;
    loop {
        let lo = k * (3 * k - 1) / 2;
        if lo as usize > n {
            break;
        }
        let hi = k * (3 * k + 1) / 2;
        let mut pair = powers[lo as usize].clone();
        if hi as usize <= n {
            pair = pair.add(&powers[hi as usize], wp);
        }
        euler = if k % 2 == 1 {
            euler.sub(&pair, wp)
        } else {
            euler.add(&pair, wp)
        };
        k += 1;
    }
    // omitted exponents are distinct and > n
    euler.add_error(x.powi_up(n_terms as u32 + 1).mul_2exp(1));

    let p2 = euler.sqr(wp);
    let p4 = p2.sqr(wp);
    let p8 = p4.sqr(wp);
    let p16 = p8.sqr(wp);
    let p24 = p16.mul(&p8, wp);
    let den = q.mul(&p24, wp);
    let num = e4.sqr(wp).mul(&e4, wp);
    let j = num.div(&den, wp).ok_or_else(|| {
        Error::PrecisionExhausted(format!("denominator of j at {form} contains 0"))
    })?;

    let scale = j.center_abs_up().max(Mag::one());
    if j.rad > scale.mul_up(Mag::pow2(-(prec as i64) / 2)) {
        return Err(Error::PrecisionExhausted(format!(
            "j at {form} only reached radius {:.3e}",
            j.rad.to_f64()
        )));
    }
    Ok(j.round(prec + 16))
}

/// Exact coefficients of `j(q) = Σ_{n≥−1} cₙ qⁿ`, kept to cross-check the
/// numerical route.
#[derive(Clone, Debug)]
pub struct JSeries {
    /// `coeffs[i]` is `c_{i−1}`.
    coeffs: Vec<BigInt>,
}

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
fn series_inv(a: &[BigInt], len: usize) -> Vec<BigInt> {
    assert!(a[0].is_one());
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for n in 1..len {
        let mut s = BigInt::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &inv[n - k];
        }
        inv[n] = -s;
    }
    inv
}

impl JSeries {
    /// Coefficients `c_{−1}, …, c_order`.
    pub fn new(order: usize) -> JSeries {
        let len = order + 2;
        let sigma = sigma3_table(len);
        let mut e4: Vec<BigInt> = (0..len).map(|k| BigInt::from(240 * sigma[k])).collect();
        e4[0] = BigInt::one();
        let mut euler = vec![BigInt::zero(); len];
        euler[0] = BigInt::one();
        for n in 1..len {
            // multiply by (1 − qⁿ)
            for k in (n..len).rev() {
                let t = euler[k - n].clone();
                euler[k] -= t;
            }
        }
        let mut p24 = vec![BigInt::zero(); len];
        p24[0] = BigInt::one();
        for _ in 0..24 {
            p24 = series_mul(&p24, &euler, len);
        }
        let e4_cubed = series_mul(&series_mul(&e4, &e4, len), &e4, len);
        let coeffs = series_mul(&e4_cubed, &series_inv(&p24, len), len);
        JSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 2
    }

    /// `c_n` for `−1 ≤ n ≤ order`.
    pub fn coeff(&self, n: i64) -> &BigInt {
        &self.coeffs[(n + 1) as usize]
    }

    /// Majorant of `Σ_{n>order} cₙ xⁿ` using `cₙ ≤ e^{4π√n} / (√2·n^{3/4})`.
    pub fn tail_bound(&self, x: f64) -> f64 {
        let mut total = 0.0;
        let mut n = self.order() as f64 + 1.0;
        loop {
            let log_term = 4.0 * std::f64::consts::PI * n.sqrt()
                - 0.5 * std::f64::consts::LN_2
                - 0.75 * n.ln()
                + n * x.ln();
            let term = log_term.exp();
            total += term;
            if term < total * 1e-18 || term == 0.0 {
                break;
            }
            n += 1.0;
        }
        total * 1.01
    }

    /// Evaluate the truncated series at `q` with the tail as extra radius.
    pub fn eval(&self, q: &ComplexBall, prec: u32) -> Option<ComplexBall> {
        let inv = q.inv(prec)?;
        let mut acc = inv;
        let mut power = ComplexBall::one();
        for n in 0..=self.order() as i64 {
            let c = ComplexBall::from_int(self.coeff(n).clone());
            acc = acc.add(&c.mul(&power, prec), prec);
            power = power.mul(q, prec);
        }
        let x = q.mag_up().to_f64();
        acc.add_error(Mag::from_f64_up(self.tail_bound(x)));
        Some(acc)
    }
}

/// Real ball containing `e^{π√|Δ|/a}`, the leading term of `|j|` at
/// forms with first coefficient `a`.
pub fn leading_exponential(disc: Discriminant, a: i64, prec: u32) -> RealBall {
    let wp = prec + 16;
    let t = pi(wp).mul(&sqrt_int(disc.abs(), wp), wp).div_int(a, wp);
    crate::arith::exp_real(&t, prec)
}
