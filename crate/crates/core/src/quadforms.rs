//! Reduced positive definite binary quadratic forms.
//!
//! A singular modulus of discriminant `Δ` is addressed by a reduced form
//! `(a, b, c)` with `b² − 4ac = Δ`, `gcd(a, b, c) = 1` and either
//! `−a < b ≤ a < c` or `0 ≤ b ≤ a = c`. The number of such forms is the
//! class number `h(Δ)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A negative discriminant together with its fundamental decomposition
/// `delta = conductor² · fundamental`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Discriminant {
    delta: i64,
    fundamental: i64,
    conductor: u64,
}

impl Discriminant {
    pub fn new(delta: i64) -> Result<Self> {
        if !is_discriminant(delta) {
            return Err(Error::InvalidDiscriminant(delta));
        }
        let (fundamental, conductor) = decompose(delta);
        Ok(Discriminant {
            delta,
            fundamental,
            conductor,
        })
    }

    pub fn value(self) -> i64 {
        self.delta
    }

    pub fn abs(self) -> u64 {
        self.delta.unsigned_abs()
    }

    pub fn fundamental(self) -> i64 {
        self.fundamental
    }

    pub fn conductor(self) -> u64 {
        self.conductor
    }

    /// `h(Δ)`, by direct enumeration. Bulk callers should use
    /// [`ClassNumberTable`] instead.
    pub fn class_number(self) -> u32 {
        reduced_forms(self).len() as u32
    }

    /// Two discriminants generate the same imaginary quadratic field iff
    /// their fundamental parts agree.
    pub fn same_field(self, other: Discriminant) -> bool {
        self.fundamental == other.fundamental
    }
}

impl TryFrom<i64> for Discriminant {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        Discriminant::new(value)
    }
}

impl From<Discriminant> for i64 {
    fn from(d: Discriminant) -> i64 {
        d.delta
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.delta)
    }
}

pub fn is_discriminant(delta: i64) -> bool {
    delta < 0 && matches!(delta.rem_euclid(4), 0 | 1)
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// True for discriminants of imaginary quadratic fields.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Prime factorisation of `n` by trial division, as `(p, e)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn decompose(delta: i64) -> (i64, u64) {
    let mut f = 1u64;
    for (p, e) in factor(delta.unsigned_abs()) {
        f *= p.pow(e / 2);
    }
    let mut d = delta / (f * f) as i64;
    if !matches!(d.rem_euclid(4), 0 | 1) {
        // f is even here: pull one factor of 2 back into d.
        f /= 2;
        d *= 4;
    }
    (d, f)
}

/// `Δ = f²·D` with `D` fundamental.
pub fn fundamental_decomposition(delta: i64) -> Result<(i64, u64)> {
    let d = Discriminant::new(delta)?;
    Ok((d.fundamental, d.conductor))
}

/// A reduced form `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Ambiguous forms are the reduced representatives of classes of
    /// order dividing two.
    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.b == self.a || self.a == self.c
    }

    pub fn is_reduced(&self) -> bool {
        let ReducedForm { a, b, c } = *self;
        a > 0
            && ((-a < b && b <= a && a < c) || (0 <= b && b <= a && a == c))
            && a.gcd(&b).gcd(&c) == 1
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Reduced forms with a fixed leading coefficient, `b` ascending.
fn forms_for_leading(delta: i64, a: i64, out: &mut Vec<ReducedForm>) {
    let parity = delta.rem_euclid(2);
    let mut b = -a + 1;
    if b.rem_euclid(2) != parity {
        b += 1;
    }
    while b <= a {
        let num = b * b - delta;
        if num % (4 * a) == 0 {
            let c = num / (4 * a);
            let form = ReducedForm { a, b, c };
            if c > a || (c == a && b >= 0) {
                if a.gcd(&b).gcd(&c) == 1 {
                    out.push(form);
                }
            }
        }
        b += 2;
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `T_Δ` sorted ascending by `(a, b)`.
pub fn reduced_forms(delta: Discriminant) -> Vec<ReducedForm> {
    let d = delta.value();
    let amax = isqrt(delta.abs() / 3) as i64;
    let mut out = Vec::new();
    for a in 1..=amax {
        forms_for_leading(d, a, &mut out);
    }
    out
}

pub fn class_number(delta: Discriminant) -> u32 {
    reduced_forms(delta).len() as u32
}

/// The reduced forms of `delta` whose first coefficient is `a`.
pub fn forms_with_leading(delta: Discriminant, a: i64) -> Result<Vec<ReducedForm>> {
    if a < 1 {
        return Err(Error::InvalidArgument(format!(
            "leading coefficient {a} < 1"
        )));
    }
    let mut out = Vec::new();
    if 3 * a * a <= delta.abs() as i64 {
        forms_for_leading(delta.value(), a, &mut out);
    }
    Ok(out)
}

/// Every class of the form class group has order at most two, decided by
/// counting ambiguous reduced forms.
pub fn is_two_elementary(delta: Discriminant) -> bool {
    reduced_forms(delta).iter().all(ReducedForm::is_ambiguous)
}

/// Class numbers of every discriminant up to a cap, obtained by a single
/// sweep over reduced forms.
#[derive(Clone, Debug)]
pub struct ClassNumberTable {
    cap: u64,
    counts: Vec<u32>,
}

impl ClassNumberTable {
    pub fn scan(cap: u64) -> Self {
        let mut counts = vec![0u32; cap as usize + 1];
        let cap_i = cap as i64;
        let amax = isqrt(cap / 3) as i64;
        for a in 1..=amax {
            for b in (-a + 1)..=a {
                let g = a.gcd(&b);
                // |Δ| = 4ac − b², increasing in c.
                let c0 = if b < 0 { a + 1 } else { a };
                let cmax = (cap_i + b * b) / (4 * a);
                for c in c0..=cmax {
                    if g != 1 && g.gcd(&c) != 1 {
                        continue;
                    }
                    let n = 4 * a * c - b * b;
                    counts[n as usize] += 1;
                }
            }
        }
        ClassNumberTable { cap, counts }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `None` outside the scanned range or for non-discriminants.
    pub fn get(&self, abs_delta: u64) -> Option<u32> {
        if abs_delta > self.cap || !is_discriminant(-(abs_delta as i64)) {
            return None;
        }
        Some(self.counts[abs_delta as usize])
    }

    /// All discriminants in range with the given class number, `|Δ|`
    /// ascending.
    pub fn with_class_number(&self, h: u32) -> Vec<Discriminant> {
        self.iter()
            .filter(|&(_, hh)| hh == h)
            .map(|(d, _)| d)
            .collect()
    }

    /// `(Δ, h(Δ))` for `|Δ|` ascending.
    pub fn iter(&self) -> impl Iterator<Item = (Discriminant, u32)> + '_ {
        (3..=self.cap).filter_map(move |n| {
            let h = self.get(n)?;
            Some((Discriminant::new(-(n as i64)).ok()?, h))
        })
    }

    /// Largest `|Δ|` in range with `h(Δ) = h`.
    pub fn max_abs_with(&self, h: u32) -> Option<u64> {
        (3..=self.cap).rev().find(|&n| self.get(n) == Some(h))
    }

    /// Largest class number observed for `|Δ| ≤ limit`.
    pub fn max_class_number_upto(&self, limit: u64) -> u32 {
        (3..=limit.min(self.cap))
            .filter_map(|n| self.get(n))
            .max()
            .unwrap_or(0)
    }

    /// Smallest class number observed for `lo ≤ |Δ| ≤ cap`.
    pub fn min_class_number_from(&self, lo: u64) -> u32 {
        (lo.max(3)..=self.cap)
            .filter_map(|n| self.get(n))
            .min()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn forms(v: &[(i64, i64, i64)]) -> Vec<ReducedForm> {
        v.iter().map(|&(a, b, c)| ReducedForm { a, b, c }).collect()
    }

    #[test]
    fn small_form_lists() {
        assert_eq!(reduced_forms(disc(-3)), forms(&[(1, 1, 1)]));
        assert_eq!(reduced_forms(disc(-4)), forms(&[(1, 0, 1)]));
        assert_eq!(reduced_forms(disc(-15)), forms(&[(1, 1, 4), (2, 1, 2)]));
        assert_eq!(
            reduced_forms(disc(-23)),
            forms(&[(1, 1, 6), (2, -1, 3), (2, 1, 3)])
        );
    }

    #[test]
    fn rejects_bad_discriminants() {
        for d in [0, 5, -1, -2, -5, -6, 12] {
            assert!(Discriminant::new(d).is_err(), "{d}");
        }
    }

    #[test]
    fn decompositions() {
        assert_eq!(fundamental_decomposition(-12).unwrap(), (-3, 2));
        assert_eq!(fundamental_decomposition(-7).unwrap(), (-7, 1));
        assert_eq!(fundamental_decomposition(-60).unwrap(), (-15, 2));
        assert_eq!(fundamental_decomposition(-16).unwrap(), (-4, 2));
        assert_eq!(fundamental_decomposition(-8).unwrap(), (-8, 1));
        assert_eq!(fundamental_decomposition(-72).unwrap(), (-8, 3));
        assert_eq!(fundamental_decomposition(-4 * 49 * 3).unwrap(), (-3, 14));
    }

    #[test]
    fn leading_coefficient_filter() {
        assert_eq!(
            forms_with_leading(disc(-23), 2).unwrap(),
            forms(&[(2, -1, 3), (2, 1, 3)])
        );
        assert_eq!(
            forms_with_leading(disc(-20), 2).unwrap(),
            forms(&[(2, 2, 3)])
        );
        assert_eq!(
            forms_with_leading(disc(-4), 1).unwrap(),
            forms(&[(1, 0, 1)])
        );
        assert!(forms_with_leading(disc(-4), 0).is_err());
    }

    #[test]
    fn two_elementary() {
        assert!(is_two_elementary(disc(-15)));
        assert!(!is_two_elementary(disc(-23)));
        assert!(is_two_elementary(disc(-3)));
        assert!(is_two_elementary(disc(-84)));
    }

    #[test]
    fn table_matches_direct_enumeration() {
        let table = ClassNumberTable::scan(3000);
        for (d, h) in table.iter() {
            assert_eq!(h, class_number(d), "{d}");
        }
        assert_eq!(table.get(5), None);
        assert_eq!(table.get(4000), None);
    }
}
