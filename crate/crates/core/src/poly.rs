//! Dense integer polynomials, resultants and product polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial with `coeffs[k]` the coefficient of `x^k`; no trailing zeros
/// except for the zero polynomial, which is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `∏ (x − r)` for integer roots `r`.
    pub fn from_roots(roots: &[i64]) -> IntPoly {
        roots.iter().fold(IntPoly::from_i64(&[1]), |p, &r| {
            p.mul(&IntPoly::from_i64(&[-r, 1]))
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `x^m·P(t/x)` as a polynomial in `x` for fixed `t`, with `m = deg P`.
    fn homogenized_at(&self, t: &BigInt) -> Vec<BigInt> {
        // coefficient of x^{m−k} is p_k·t^k
        let m = self.degree();
        let mut out = vec![BigInt::zero(); m + 1];
        let mut tk = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            out[m - k] = c * &tk;
            tk *= t;
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Determinant by fraction-free Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Resultant of `a` (degree `n`, taken as exact) and the coefficient
/// vector `b` read with formal degree `b.len() − 1`, via the Sylvester
/// matrix. Equals `lc(a)^{m}·∏ b(αᵢ)` over the roots `αᵢ` of `a`.
pub fn resultant_formal(a: &IntPoly, b: &[BigInt]) -> BigInt {
    let n = a.degree();
    let m = b.len() - 1;
    let size = n + m;
    if size == 0 {
        return BigInt::one();
    }
    let a_desc: Vec<BigInt> = a.coeffs.iter().rev().cloned().collect();
    let b_desc: Vec<BigInt> = b.iter().rev().cloned().collect();
    let mut rows = Vec::with_capacity(size);
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        row[i..i + n + 1].clone_from_slice(&a_desc);
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        row[i..i + m + 1].clone_from_slice(&b_desc);
        rows.push(row);
    }
    determinant(rows)
}

pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    resultant_formal(a, b.coeffs())
}

/// `R(t) = Res_x(P(x), x^{deg Q}·Q(t/x))` evaluated at one integer `t`.
/// For monic `P`, `Q` this is `∏ᵢⱼ (t − pᵢqⱼ)`.
pub fn product_polynomial_at(p: &IntPoly, q: &IntPoly, t: &BigInt) -> BigInt {
    resultant_formal(p, &q.homogenized_at(t))
}

/// Monic polynomial whose roots are all products `pᵢ·qⱼ`.
///
/// The resolvent is evaluated at `t = 0, …, D` (`D = deg P·deg Q`) and
/// interpolated exactly through Newton's forward differences.
pub fn product_polynomial(p: &IntPoly, q: &IntPoly) -> IntPoly {
    assert!(
        p.is_monic() && q.is_monic(),
        "product_polynomial needs monic inputs"
    );
    assert!(
        p.degree() >= 1 && q.degree() >= 1,
        "product_polynomial needs degree ≥ 1"
    );
    let d = p.degree() * q.degree();
    let mut diffs: Vec<BigInt> = (0..=d)
        .map(|t| product_polynomial_at(p, q, &BigInt::from(t)))
        .collect();
    // diffs[k] ← Δ^k R(0)
    for k in 1..=d {
        for i in (k..=d).rev() {
            let v = &diffs[i] - &diffs[i - 1];
            diffs[i] = v;
        }
    }
    // R(t) = Σ Δ^k R(0)·t(t−1)…(t−k+1)/k!, accumulated times d!
    let mut fact = vec![BigInt::one(); d + 1];
    for k in 1..=d {
        fact[k] = &fact[k - 1] * k;
    }
    let mut acc = vec![BigInt::zero(); d + 1];
    let mut falling = vec![BigInt::one()];
    for (k, dk) in diffs.iter().enumerate() {
        if !dk.is_zero() {
            let scale = dk * (&fact[d] / &fact[k]);
            for (i, c) in falling.iter().enumerate() {
                acc[i] += c * &scale;
            }
        }
        // falling ← falling·(t − k)
        let mut next = vec![BigInt::zero(); falling.len() + 1];
        for (i, c) in falling.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * k;
        }
        falling = next;
    }
    let coeffs = acc
        .into_iter()
        .map(|c| {
            let (quot, rem) = c.div_rem(&fact[d]);
            debug_assert!(rem.is_zero());
            quot
        })
        .collect();
    let out = IntPoly::new(coeffs);
    debug_assert!(out.is_monic() && out.degree() == d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_factors() {
        let p = IntPoly::from_i64(&[-3, 1]);
        let q = IntPoly::from_i64(&[5, 1]);
        assert_eq!(product_polynomial(&p, &q), IntPoly::from_i64(&[15, 1]));
    }

    #[test]
    fn zero_root_annihilates() {
        let x = IntPoly::from_i64(&[0, 1]);
        let q = IntPoly::from_i64(&[7, -2, 1, 1]);
        assert_eq!(product_polynomial(&x, &q), IntPoly::from_i64(&[0, 0, 0, 1]));
        assert_eq!(product_polynomial(&q, &x), IntPoly::from_i64(&[0, 0, 0, 1]));
    }

    #[test]
    fn square_roots_of_two() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let expect = IntPoly::from_roots(&[2, 2, -2, -2]);
        assert_eq!(product_polynomial(&p, &p), expect);
    }

    #[test]
    fn resultant_of_linear_forms() {
        let a = IntPoly::from_roots(&[1, 2]);
        let b = IntPoly::from_roots(&[3]);
        // (1 − 3)(2 − 3)
        assert_eq!(resultant(&a, &b), BigInt::from(2));
        assert_eq!(determinant(vec![]), BigInt::one());
    }

    #[test]
    fn display() {
        assert_eq!(
            IntPoly::from_i64(&[-121287375, 191025, 1]).to_string(),
            "x^2 + 191025x - 121287375"
        );
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-x");
    }
}
