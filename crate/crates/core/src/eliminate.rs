//! Certification that no candidate triple has a rational product.
//!
//! If `y₁y₂y₃ = α ∈ Q` for singular moduli of discriminants `Δᵢ`, some
//! Galois conjugate sends `y₁` to the dominant modulus `x₁` of `Δ₁` and
//! keeps the product, so it suffices to treat `x₁` fixed. A rational
//! product is an algebraic integer, hence a rational integer, and its
//! absolute value is at most [`range_bound`]. Each pair `(x₂, x₃)` is
//! eliminated once its product ball `x₁x₂x₃` contains no such integer.
//! Pairs that stay ambiguous through the precision ladder go to an exact
//! test on the resolvent polynomial of the three class polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ComplexBall, RealBall};
use crate::bounds::window_center;
use crate::casegen::{CandidateTriple, CaseLabel};
use crate::classpoly::{singular_moduli, ClassPolyCache, SingularModulus};
use crate::error::{Error, Result};
use crate::poly::{product_polynomial, product_polynomial_at};
use crate::quadforms::{Discriminant, ReducedForm};

/// Headroom rungs, in bits, added on top of the size of the products.
pub const DEFAULT_LADDER: [u32; 5] = [192, 384, 768, 1536, 3072];

/// The exact tier is only attempted for resolvents up to this degree.
pub const EXACT_DEGREE_LIMIT: usize = 512;

/// At most this many integers per pair are handed to the exact tier.
pub const EXACT_INTEGER_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub rungs: Vec<u32>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            rungs: DEFAULT_LADDER.to_vec(),
        }
    }
}

impl Schedule {
    pub fn new(rungs: Vec<u32>) -> Result<Schedule> {
        if rungs.is_empty() || rungs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "precision ladder {rungs:?} must be nonempty and strictly increasing"
            )));
        }
        Ok(Schedule { rungs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Eliminated,
    RationalProductFound,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub forms: [String; 3],
    /// Decimal integer.
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub d1: i64,
    pub d2: i64,
    pub d3: i64,
    pub case: CaseLabel,
    pub status: Status,
    pub pairs_checked: u64,
    pub max_precision_bits: u32,
    /// Smallest distance from a product's center to the nearest integer.
    pub min_int_distance: f64,
    /// Pairs that reached the exact tier.
    pub exact_checks: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

/// `⌈∏ (e^{π√|Δᵢ|} + 2079)⌉`, bounding any rational product.
pub fn range_bound(c: &CandidateTriple) -> BigInt {
    let prec = 64;
    let window = RealBall::from_int(2079);
    let mut b = RealBall::from_int(1);
    for d in c.discs() {
        let term = window_center(d.abs(), 1, prec).add(&window, prec);
        b = b.mul(&term, prec);
    }
    b.integers().1 + 1
}

/// Singular moduli per discriminant, kept at the highest precision
/// requested so far.
#[derive(Default)]
pub struct ModuliCache {
    slots: Mutex<HashMap<i64, Arc<Mutex<Option<(u32, Arc<Vec<SingularModulus>>)>>>>>,
}

impl ModuliCache {
    pub fn get(&self, disc: Discriminant, prec: u32) -> Result<Arc<Vec<SingularModulus>>> {
        let slot = self
            .slots
            .lock()
            .unwrap()
            .entry(disc.value())
            .or_default()
            .clone();
        let mut guard = slot.lock().unwrap();
        if let Some((p, m)) = guard.as_ref() {
            if *p >= prec {
                return Ok(m.clone());
            }
        }
        let m = Arc::new(singular_moduli(disc, prec)?);
        *guard = Some((prec, m.clone()));
        Ok(m)
    }

    pub fn clear(&self) {
        self.slots.lock().unwrap().clear();
    }
}

fn round_up(bits: u32, step: u32) -> u32 {
    bits.div_ceil(step) * step
}

/// Working precision of the moduli at one rung.
fn working_precision(bound: &BigInt, rung: u32) -> u32 {
    round_up(bound.bits() as u32 + rung + 32, 128)
}

/// Exact test: is `n` a root of the resolvent of `H_{Δ₁}`, `H_{Δ₂}`,
/// `H_{Δ₃}`, i.e. a product of one root of each?
pub fn exact_rational_root_check(
    c: &CandidateTriple,
    n: &BigInt,
    hcp: &ClassPolyCache,
) -> Result<bool> {
    if n.abs() > range_bound(c) {
        return Err(Error::InvalidArgument(format!(
            "{n} exceeds the range bound of {c}"
        )));
    }
    let degree = (c.h1 * c.h2 * c.h3) as usize;
    if degree > EXACT_DEGREE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "resolvent of degree {degree} exceeds the exact-tier limit"
        )));
    }
    let h1 = hcp.get(c.d1)?;
    let h2 = hcp.get(c.d2)?;
    let h3 = hcp.get(c.d3)?;
    let r12 = product_polynomial(h1.poly(), h2.poly());
    Ok(product_polynomial_at(&r12, h3.poly(), n).is_zero())
}

/// Shared state for eliminating many candidates.
pub struct Eliminator {
    pub schedule: Schedule,
    pub moduli: ModuliCache,
    pub hcp: ClassPolyCache,
    /// Minimum precision to request per discriminant, so that one
    /// evaluation serves every candidate at the first rung.
    plan: HashMap<i64, u32>,
}

struct Pair {
    i2: usize,
    i3: usize,
}

impl Eliminator {
    pub fn new(schedule: Schedule, hcp: ClassPolyCache) -> Eliminator {
        Eliminator {
            schedule,
            moduli: ModuliCache::default(),
            hcp,
            plan: HashMap::new(),
        }
    }

    /// Record the first-rung precision each discriminant will need.
    pub fn plan(&mut self, candidates: &[CandidateTriple]) {
        for c in candidates {
            let p = working_precision(&range_bound(c), self.schedule.rungs[0]);
            for d in c.discs() {
                let e = self.plan.entry(d.value()).or_insert(0);
                *e = (*e).max(p);
            }
        }
    }

    fn moduli(&self, d: Discriminant, prec: u32) -> Result<Arc<Vec<SingularModulus>>> {
        let planned = self.plan.get(&d.value()).copied().unwrap_or(0);
        self.moduli.get(d, prec.max(planned))
    }

    pub fn eliminate(&self, c: &CandidateTriple) -> Result<Verdict> {
        let bound = range_bound(c);
        let [d1, d2, d3] = c.discs();
        let h2 = c.h2 as usize;
        let h3 = c.h3 as usize;

        // Index 0 is the dominant form in every list.
        let mut pending: Vec<Pair> = Vec::new();
        for i2 in 0..h2 {
            if d2 == d1 && i2 == 0 {
                continue;
            }
            for i3 in 0..h3 {
                if (d3 == d1 && i3 == 0) || (d3 == d2 && i3 == i2) {
                    continue;
                }
                pending.push(Pair { i2, i3 });
            }
        }
        let pairs_checked = pending.len() as u64;
        let mut min_dist = f64::INFINITY;
        let mut max_prec = 0;
        let mut last_products: Vec<ComplexBall> = Vec::new();

        for &rung in &self.schedule.rungs {
            if pending.is_empty() {
                break;
            }
            let prec = working_precision(&bound, rung);
            let m1 = self.moduli(d1, prec)?;
            let m2 = self.moduli(d2, prec)?;
            let m3 = self.moduli(d3, prec)?;
            max_prec = max_prec.max(prec);
            let x1 = &m1[0].value;
            let mut still = Vec::new();
            last_products.clear();
            let mut cached_i2 = usize::MAX;
            let mut x12 = ComplexBall::zero();
            for pair in pending {
                if pair.i2 != cached_i2 {
                    x12 = x1.mul(&m2[pair.i2].value, prec);
                    cached_i2 = pair.i2;
                }
                let p = x12.mul(&m3[pair.i3].value, prec);
                let dist = p.center_int_distance();
                if excludes_integers(&p, &bound) {
                    min_dist = min_dist.min(dist);
                } else {
                    still.push(pair);
                    last_products.push(p);
                }
            }
            pending = still;
        }

        let mut witnesses = Vec::new();
        let mut undecided = false;
        let exact_checks = pending.len() as u64;
        for (pair, p) in pending.iter().zip(&last_products) {
            min_dist = min_dist.min(p.center_int_distance());
            let Some((lo, hi)) = p.integer_range() else {
                continue;
            };
            let lo = lo.max(-bound.clone());
            let hi = hi.min(bound.clone());
            if &hi - &lo >= BigInt::from(EXACT_INTEGER_LIMIT) {
                undecided = true;
                continue;
            }
            let mut n = lo;
            while n <= hi {
                match exact_rational_root_check(c, &n, &self.hcp) {
                    Ok(true) => {
                        let forms = [
                            form_of(&self.moduli(d1, 0)?, 0),
                            form_of(&self.moduli(d2, 0)?, pair.i2),
                            form_of(&self.moduli(d3, 0)?, pair.i3),
                        ];
                        witnesses.push(Witness {
                            forms: forms.map(|f| f.to_string()),
                            alpha: n.to_string(),
                        });
                    }
                    Ok(false) => {}
                    Err(_) => undecided = true,
                }
                n += 1;
            }
        }

        let status = if !witnesses.is_empty() {
            Status::RationalProductFound
        } else if undecided {
            Status::Undecided
        } else {
            Status::Eliminated
        };
        Ok(Verdict {
            d1: d1.value(),
            d2: d2.value(),
            d3: d3.value(),
            case: c.case,
            status,
            pairs_checked,
            max_precision_bits: max_prec,
            min_int_distance: if min_dist.is_finite() {
                min_dist
            } else {
                f64::MAX
            },
            exact_checks,
            witnesses,
        })
    }

    /// Eliminate all candidates on a pool of `jobs` threads; verdicts come
    /// back in input order.
    pub fn eliminate_all(
        &self,
        candidates: &[CandidateTriple],
        jobs: usize,
    ) -> Result<Vec<Verdict>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| candidates.par_iter().map(|c| self.eliminate(c)).collect())
    }
}

fn form_of(m: &[SingularModulus], i: usize) -> ReducedForm {
    m[i].form
}

/// No integer `n` with `|n| ≤ bound` lies in the ball.
fn excludes_integers(p: &ComplexBall, bound: &BigInt) -> bool {
    match p.integer_range() {
        None => true,
        Some((lo, hi)) => hi < -bound.clone() || &lo > bound,
    }
}

/// One-off elimination with a private cache.
pub fn eliminate_triple(c: &CandidateTriple, schedule: &Schedule) -> Result<Verdict> {
    Eliminator::new(schedule.clone(), ClassPolyCache::in_memory()).eliminate(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Discriminant {
        Discriminant::new(v).unwrap()
    }

    fn triple(a: i64, b: i64, c: i64) -> CandidateTriple {
        CandidateTriple::canonical([d(a), d(b), d(c)], CaseLabel::OneA)
    }

    #[test]
    fn positive_control() {
        let v = eliminate_triple(&triple(-23, -23, -23), &Schedule::default()).unwrap();
        assert_eq!(v.status, Status::RationalProductFound);
        assert_eq!(v.pairs_checked, 2);
        assert!(v.witnesses.iter().all(|w| w.alpha == "-12771880859375"));
    }

    #[test]
    fn genuine_elimination() {
        let v = eliminate_triple(&triple(-39, -39, -39), &Schedule::default()).unwrap();
        assert_eq!(v.status, Status::Eliminated);
        assert_eq!(v.exact_checks, 0);
        assert_eq!(v.pairs_checked, 6);
    }

    #[test]
    fn bound_monotone() {
        let a = range_bound(&triple(-23, -23, -23));
        let b = range_bound(&triple(-31, -23, -23));
        assert!(b > a);
        assert!(a > BigInt::from(12771880859375u64));
    }

    #[test]
    fn ladder_validation() {
        assert!(Schedule::new(vec![]).is_err());
        assert!(Schedule::new(vec![192, 192]).is_err());
        assert!(Schedule::new(vec![64, 128]).is_ok());
    }
}
