//! Magnitude bounds for singular moduli and the per-case `|Δ|` cutoffs
//! they imply.
//!
//! A case compares a lower bound for `|x₁x₂x₃|`, taken with `x₁` dominant,
//! against the upper bound from a conjugate whose forms have `aᵢ ≥ mᵢ`.
//! With `d` the case's reference `|Δ|`,
//!
//! ```text
//! L(d) = 0.9994·e^{rπ√d} · min(4.4e-5, 3500(s₂d)⁻³) · min(4.4e-5, 3500(s₃d)⁻³)
//! U(d) = ∏ᵢ (e^{rᵢπ√d/mᵢ} + 2079)
//! ```
//!
//! and the cutoff is the largest integer `d` with `U(d) ≥ L(d)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{exp_real, pi, sqrt_int, RealBall};
use crate::error::{Error, Result};

/// Positive rational `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

impl Ratio {
    pub const fn new(num: u32, den: u32) -> Ratio {
        Ratio { num, den }
    }

    pub const fn int(n: u32) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub const SMALL_FLOOR: f64 = 4.4e-5;
pub const SMALL_SCALE: f64 = 3500.0;
pub const DOMINANT_FACTOR: f64 = 0.9994;
pub const WINDOW: f64 = 2079.0;

/// Lower bound for any nonzero singular modulus of discriminant `Δ`.
pub fn min_abs_lower(abs_delta: u64) -> f64 {
    let d = abs_delta as f64;
    SMALL_FLOOR.min(SMALL_SCALE / (d * d * d))
}

/// `[e^{π√|Δ|/a} − 2079, e^{π√|Δ|/a} + 2079]`.
pub fn fourier_window(abs_delta: u64, a: u64) -> (f64, f64) {
    let e = (std::f64::consts::PI * (abs_delta as f64).sqrt() / a as f64).exp();
    (e - WINDOW, e + WINDOW)
}

/// `0.9994·e^{π√|Δ|}`, asserted only for `|Δ| ≥ 23`.
pub fn dominant_lower(abs_delta: u64) -> Result<f64> {
    if abs_delta < 23 {
        return Err(Error::InvalidArgument(format!(
            "dominant lower bound needs |Δ| ≥ 23, got {abs_delta}"
        )));
    }
    Ok(DOMINANT_FACTOR * (std::f64::consts::PI * (abs_delta as f64).sqrt()).exp())
}

/// `e^{π√|Δ|/a}` as a certified ball.
pub fn window_center(abs_delta: u64, a: u64, prec: u32) -> RealBall {
    let wp = prec + 16;
    let t = pi(wp)
        .mul(&sqrt_int(abs_delta, wp), wp)
        .div_int(a as i64, wp);
    exp_real(&t, prec)
}

/// Ball form of [`fourier_window`].
pub fn fourier_window_ball(abs_delta: u64, a: u64, prec: u32) -> (RealBall, RealBall) {
    let c = window_center(abs_delta, a, prec);
    let w = RealBall::from_int(2079);
    (c.sub(&w, prec), c.add(&w, prec))
}

/// Ball form of [`min_abs_lower`]; exact rationals rounded outward.
pub fn min_abs_lower_ball(abs_delta: u64, prec: u32) -> RealBall {
    small_factor(abs_delta, Ratio::int(1), prec)
}

/// `min(4.4·10⁻⁵, 3500·(s·d)⁻³)`, choosing the branch exactly.
fn small_factor(d: u64, s: Ratio, prec: u32) -> RealBall {
    // 3500·den³/(num³·d³) ≤ 44/10⁶  ⟺  3500·10⁶·den³ ≤ 44·num³·d³
    let den3 = BigInt::from(s.den).pow(3);
    let sd3 = BigInt::from(s.num).pow(3) * BigInt::from(d).pow(3);
    let lhs = BigInt::from(3500u64 * 1_000_000) * &den3;
    let rhs = BigInt::from(44) * &sd3;
    let (num, den) = if lhs <= rhs {
        (BigInt::from(3500) * den3, sd3)
    } else {
        (BigInt::from(44), BigInt::from(1_000_000))
    };
    RealBall::from_int(num)
        .div(&RealBall::from_int(den), prec)
        .expect("positive denominator")
}

/// Parameters of one bound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCaseSpec {
    /// Dominant term `e^{rπ√d}`.
    pub r: Ratio,
    pub s2: Ratio,
    pub s3: Ratio,
    /// Upper-bound exponents `rᵢ` and leading-coefficient floors `mᵢ`.
    pub upper: [Ratio; 3],
    pub m: [u32; 3],
    /// Smallest class number at which the conjugate with `aᵢ ≥ mᵢ` exists.
    pub k: u32,
}

impl BoundCaseSpec {
    /// `r − Σ rᵢ/mᵢ`, the growth rate of `log L − log U` in units of `π√d`.
    pub fn margin(&self) -> f64 {
        self.r.to_f64()
            - self
                .upper
                .iter()
                .zip(self.m)
                .map(|(ri, mi)| ri.to_f64() / mi as f64)
                .sum::<f64>()
    }

    fn validate(&self) -> Result<()> {
        let ratios = [self.r, self.s2, self.s3].into_iter().chain(self.upper);
        for q in ratios {
            if q.num == 0 || q.den == 0 {
                return Err(Error::InvalidArgument(format!("non-positive scale {q}")));
            }
        }
        if self.m.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument(format!(
                "leading divisors {:?} must be ≥ 2",
                self.m
            )));
        }
        Ok(())
    }

    /// `(L(d), U(d))` as balls.
    pub fn evaluate(&self, d: u64, prec: u32) -> (RealBall, RealBall) {
        let wp = prec + 32;
        let base = pi(wp).mul(&sqrt_int(d, wp), wp);
        let scaled = |q: Ratio, m: u32| {
            base.mul_int(q.num as i64, wp)
                .div_int(q.den as i64 * m as i64, wp)
        };
        let dominant = RealBall::from_int(9994)
            .div(&RealBall::from_int(10_000), wp)
            .unwrap()
            .mul(&exp_real(&scaled(self.r, 1), wp), wp);
        let lower = dominant
            .mul(&small_factor(d, self.s2, wp), wp)
            .mul(&small_factor(d, self.s3, wp), wp);
        let window = RealBall::from_int(2079);
        let mut upper = RealBall::from_int(1);
        for (q, m) in self.upper.iter().zip(self.m) {
            let t = exp_real(&scaled(*q, m), wp).add(&window, wp);
            upper = upper.mul(&t, wp);
        }
        (lower, upper)
    }

    /// Whether `U(d) ≥ L(d)`, raising precision until decided.
    pub fn compatible(&self, d: u64, prec: u32) -> Result<bool> {
        let mut p = prec.max(128);
        loop {
            let (lower, upper) = self.evaluate(d, p);
            let diff = upper.sub(&lower, p);
            if diff.is_positive() {
                return Ok(true);
            }
            if diff.is_negative() {
                return Ok(false);
            }
            if p >= 1 << 14 {
                return Err(Error::PrecisionExhausted(format!(
                    "bounds indistinguishable at d = {d}"
                )));
            }
            p *= 2;
        }
    }

    /// Past this `d`, `log L − log U` is strictly increasing.
    pub fn monotone_from(&self) -> Option<u64> {
        let c = self.margin();
        if c <= 0.0 {
            return None;
        }
        // d/dd [cπ√d − 6 log d] > 0  ⟺  √d > 12/(cπ)
        let t = 12.0 / (c * std::f64::consts::PI);
        Some((t * t).ceil() as u64 + 1)
    }
}

/// Largest integer `d ≥ 1` with `U(d) ≥ L(d)`; 0 if there is none.
pub fn case_cutoff(spec: &BoundCaseSpec) -> Result<u64> {
    case_cutoff_at(spec, 128)
}

pub fn case_cutoff_at(spec: &BoundCaseSpec, prec: u32) -> Result<u64> {
    spec.validate()?;
    let d0 = spec
        .monotone_from()
        .ok_or_else(|| Error::Unbounded(format!("{spec:?}")))?;
    let mut last = 0;
    for d in 1..d0 {
        if spec.compatible(d, prec)? {
            last = d;
        }
    }
    if !spec.compatible(d0, prec)? {
        return Ok(last);
    }
    // bracket the sign change, then bisect
    let mut lo = d0;
    let mut hi = d0 * 2;
    while spec.compatible(hi, prec)? {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Unbounded(format!("{spec:?}")))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if spec.compatible(mid, prec)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// How the bound constrains a case's class-number ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutoffRow {
    pub case: &'static str,
    pub spec: BoundCaseSpec,
    /// The value recorded with the case analysis; computed values must
    /// agree to within one.
    pub expected: u64,
    /// Multiplicity with which each coordinate's conjugates occur in the
    /// Galois orbit of the triple.
    pub weights: [u32; 3],
    /// Coordinates whose discriminant admits no forms with `a = 2`.
    pub no_a2: [bool; 3],
}

impl CutoffRow {
    /// Forms with `a < mᵢ` in coordinate `i` that must be avoided, times
    /// their multiplicity, summed; the orbit must be larger for `k` to be
    /// attainable.
    pub fn excluded_conjugates(&self) -> u32 {
        (0..3)
            .map(|i| {
                let m = self.spec.m[i];
                let mut n = 1 + 2 * (m - 2);
                if self.no_a2[i] && m > 2 {
                    n -= 2;
                }
                n * self.weights[i]
            })
            .sum()
    }

    /// Orbit size at class number `k`.
    pub fn orbit_at_k(&self) -> u32 {
        self.spec.k * self.weights.iter().copied().max().unwrap()
    }

    pub fn counting_consistent(&self) -> bool {
        self.excluded_conjugates() < self.orbit_at_k()
    }
}

const fn spec(r: Ratio, s: [Ratio; 2], upper: [Ratio; 3], m: [u32; 3], k: u32) -> BoundCaseSpec {
    BoundCaseSpec {
        r,
        s2: s[0],
        s3: s[1],
        upper,
        m,
        k,
    }
}

const ONE: Ratio = Ratio::int(1);
const TWO: Ratio = Ratio::int(2);
const THREE_HALVES: Ratio = Ratio::new(3, 2);

const fn row(
    case: &'static str,
    spec: BoundCaseSpec,
    expected: u64,
    weights: [u32; 3],
    no_a2: [bool; 3],
) -> CutoffRow {
    CutoffRow {
        case,
        spec,
        expected,
        weights,
        no_a2,
    }
}

const EQ: [u32; 3] = [1, 1, 1];
const HALF: [u32; 3] = [1, 1, 2];
const NONE: [bool; 3] = [false; 3];

/// All case rows in order. Rows of one case have increasing `k`; row `i`
/// governs class numbers in `[kᵢ, kᵢ₊₁)` and the last row everything
/// above.
pub const CUTOFF_ROWS: [CutoffRow; 25] = {
    let r1 = [ONE, ONE, ONE];
    let s11 = [ONE, ONE];
    let a = [ONE, Ratio::int(4)];
    let b94 = [Ratio::new(9, 4), ONE];
    let b4 = [Ratio::int(4), ONE];
    let b9 = [Ratio::int(9), ONE];
    let b16 = [Ratio::int(16), ONE];
    let u211 = [TWO, ONE, ONE];
    let u212 = [TWO, ONE, TWO];
    let u94 = [THREE_HALVES, THREE_HALVES, ONE];
    let u4 = [TWO, TWO, ONE];
    let u9 = [Ratio::int(3), Ratio::int(3), ONE];
    let u16 = [Ratio::int(4), Ratio::int(4), ONE];
    let na = [true, false, false];
    let nb = [true, false, true];
    [
        row("1a", spec(ONE, s11, r1, [3, 3, 4], 12), 30339, EQ, NONE),
        row("1a", spec(ONE, s11, r1, [3, 4, 4], 14), 4124, EQ, NONE),
        row("1a", spec(ONE, s11, r1, [4, 4, 4], 16), 1045, EQ, NONE),
        row("1a", spec(ONE, s11, r1, [4, 4, 5], 18), 488, EQ, NONE),
        row("1a", spec(ONE, s11, r1, [4, 5, 5], 20), 334, EQ, NONE),
        row("1biiA", spec(TWO, s11, u211, [3, 2, 2], 4), 367, EQ, na),
        row("1biiA", spec(TWO, s11, u211, [3, 3, 2], 6), 163, EQ, na),
        row("1biiA", spec(TWO, s11, u211, [3, 3, 3], 8), 93, EQ, na),
        row("1biiB", spec(TWO, a, u212, [3, 2, 3], 4), 5781, EQ, nb),
        row("1biiB", spec(TWO, a, u212, [3, 3, 3], 6), 650, EQ, nb),
        row("1biiB", spec(TWO, a, u212, [4, 3, 3], 8), 192, EQ, nb),
        row("1biiB", spec(TWO, a, u212, [4, 3, 4], 10), 92, EQ, nb),
        row(
            "2bi-9/4",
            spec(THREE_HALVES, b94, u94, [3, 3, 3], 10),
            5076,
            HALF,
            NONE,
        ),
        row(
            "2bi-9/4",
            spec(THREE_HALVES, b94, u94, [4, 4, 2], 12),
            1430,
            HALF,
            NONE,
        ),
        row(
            "2bi-9/4",
            spec(THREE_HALVES, b94, u94, [4, 4, 3], 14),
            255,
            HALF,
            NONE,
        ),
        row(
            "2bi-9/4",
            spec(THREE_HALVES, b94, u94, [4, 4, 4], 16),
            164,
            HALF,
            NONE,
        ),
        row("2bi-4", spec(TWO, b4, u4, [3, 3, 3], 10), 650, HALF, NONE),
        row("2bi-4", spec(TWO, b4, u4, [3, 3, 4], 12), 317, HALF, NONE),
        row("2bi-4", spec(TWO, b4, u4, [3, 3, 5], 14), 236, HALF, NONE),
        row("2bi-4", spec(TWO, b4, u4, [3, 4, 4], 16), 129, HALF, NONE),
        row(
            "2bi-9",
            spec(Ratio::int(3), b9, u9, [3, 3, 2], 8),
            255,
            HALF,
            NONE,
        ),
        row(
            "2bi-9",
            spec(Ratio::int(3), b9, u9, [3, 4, 2], 10),
            85,
            HALF,
            NONE,
        ),
        row(
            "2bi-16",
            spec(Ratio::int(4), b16, u16, [3, 3, 2], 8),
            79,
            HALF,
            NONE,
        ),
        row(
            "2bi-16",
            spec(Ratio::int(4), b16, u16, [3, 3, 3], 10),
            52,
            HALF,
            NONE,
        ),
        row("2bii-C", spec(ONE, s11, r1, [4, 4, 5], 64), 488, HALF, NONE),
    ]
};

/// Rows belonging to one case label, in increasing `k`.
pub fn rows_for(case: &str) -> Vec<&'static CutoffRow> {
    CUTOFF_ROWS.iter().filter(|r| r.case == case).collect()
}

/// Cutoffs computed for every row, in table order.
#[derive(Clone, Debug, Serialize)]
pub struct CutoffTable {
    pub entries: Vec<CutoffEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffEntry {
    pub case: &'static str,
    pub m: [u32; 3],
    pub k: u32,
    pub cutoff: u64,
    pub expected: u64,
}

impl CutoffEntry {
    pub fn within_one(&self) -> bool {
        self.cutoff.abs_diff(self.expected) <= 1
    }
}

impl CutoffTable {
    pub fn compute() -> Result<CutoffTable> {
        Self::compute_at(128)
    }

    pub fn compute_at(prec: u32) -> Result<CutoffTable> {
        let entries = CUTOFF_ROWS
            .iter()
            .map(|row| {
                Ok(CutoffEntry {
                    case: row.case,
                    m: row.spec.m,
                    k: row.spec.k,
                    cutoff: case_cutoff_at(&row.spec, prec)?,
                    expected: row.expected,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CutoffTable { entries })
    }

    /// Bound on the reference `|Δ|` for class number `h` in `case`;
    /// `None` below the first row, where no bound applies.
    pub fn cutoff_for(&self, case: &str, h: u32) -> Option<u64> {
        self.entries
            .iter()
            .filter(|e| e.case == case && e.k <= h)
            .max_by(|a, b| a.k.cmp(&b.k))
            .map(|e| e.cutoff)
    }

    /// Smallest `k` among the case's rows.
    pub fn first_k(&self, case: &str) -> Option<u32> {
        self.entries
            .iter()
            .filter(|e| e.case == case)
            .map(|e| e.k)
            .min()
    }
}

/// Comparison helper: ordering of `U` against `L` at `d` if decidable at
/// `prec` without escalation.
pub fn compare_at(spec: &BoundCaseSpec, d: u64, prec: u32) -> Option<Ordering> {
    let (lower, upper) = spec.evaluate(d, prec);
    let diff = upper.sub(&lower, prec);
    if diff.is_positive() {
        Some(Ordering::Greater)
    } else if diff.is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}
