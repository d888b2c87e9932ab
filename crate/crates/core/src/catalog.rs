//! Trivial triples and the catalog of their products.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::classpoly::{hilbert_class_polynomial, singular_moduli};
use crate::error::{Error, Result};
use crate::quadforms::{reduced_forms, Discriminant};

/// Every discriminant with class number at most 3 lies below this.
pub const SMALL_CLASS_NUMBER_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "all-rational")]
    AllRational,
    #[serde(rename = "rational-plus-conjugate-pair")]
    RationalPlusPair,
    #[serde(rename = "conjugate-degree-3-triple")]
    CubicTriple,
}

impl Family {
    pub fn number(self) -> u8 {
        match self {
            Family::AllRational => 1,
            Family::RationalPlusPair => 2,
            Family::CubicTriple => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A rational singular modulus with its discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalModulus {
    pub disc: i64,
    #[serde(with = "decimal")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialTriple {
    pub family: Family,
    /// Family 1: the three discriminants, by value descending. Family 2:
    /// the rational modulus followed by the degree-2 discriminant twice.
    /// Family 3: the degree-3 discriminant three times.
    pub discs: [i64; 3],
    #[serde(with = "decimal")]
    pub product: BigInt,
}

impl fmt::Display for TrivialTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.discs;
        match self.family {
            Family::AllRational => write!(f, "j({a})*j({b})*j({c})"),
            Family::RationalPlusPair => write!(f, "j({a})*N({b})"),
            Family::CubicTriple => write!(f, "N({a})"),
        }
    }
}

fn discs_with_class_number(h: u32) -> Vec<Discriminant> {
    (3..=SMALL_CLASS_NUMBER_BOUND)
        .rev()
        .filter_map(|n| Discriminant::new(-(n as i64)).ok())
        .filter(|d| reduced_forms(*d).len() as u32 == h)
        .collect()
}

/// The 13 rational singular moduli, ordered by value descending.
pub fn rational_singular_moduli() -> Result<Vec<RationalModulus>> {
    let mut out = Vec::new();
    for d in discs_with_class_number(1) {
        let h = hilbert_class_polynomial(d)?;
        out.push(RationalModulus {
            disc: d.value(),
            value: -h.constant_term(),
        });
    }
    out.sort_by(|a, b| b.value.cmp(&a.value));
    Ok(out)
}

/// Families (1), (2) and (3), in that order.
pub fn trivial_triples() -> Result<Vec<TrivialTriple>> {
    let rational: Vec<RationalModulus> = rational_singular_moduli()?
        .into_iter()
        .filter(|m| !m.value.is_zero())
        .collect();
    let mut out = Vec::new();
    let n = rational.len();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let (a, b, c) = (&rational[i], &rational[j], &rational[k]);
                out.push(TrivialTriple {
                    family: Family::AllRational,
                    discs: [a.disc, b.disc, c.disc],
                    product: &a.value * &b.value * &c.value,
                });
            }
        }
    }
    let quadratic = discs_with_class_number(2);
    for r in &rational {
        for &d in &quadratic {
            let norm = hilbert_class_polynomial(d)?.constant_term().clone();
            out.push(TrivialTriple {
                family: Family::RationalPlusPair,
                discs: [r.disc, d.value(), d.value()],
                product: &r.value * norm,
            });
        }
    }
    for d in discs_with_class_number(3) {
        let norm = hilbert_class_polynomial(d)?.constant_term().clone();
        out.push(TrivialTriple {
            family: Family::CubicTriple,
            discs: [d.value(); 3],
            product: -norm,
        });
    }
    Ok(out)
}

/// Recompute the product of a family-2 or family-3 triple from the
/// values of its conjugates and check it contains the exact product.
pub fn ball_cross_check(t: &TrivialTriple) -> Result<bool> {
    let prec = 256;
    let d = Discriminant::new(t.discs[1])?;
    let mut p = crate::arith::ComplexBall::one();
    for m in singular_moduli(d, prec)? {
        p = p.mul(&m.value, prec);
    }
    let expected = match t.family {
        Family::AllRational => return Ok(true),
        Family::RationalPlusPair => {
            let r = -hilbert_class_polynomial(Discriminant::new(t.discs[0])?)?.constant_term();
            if r.is_zero() {
                return Ok(false);
            }
            if !(&t.product % &r).is_zero() {
                return Ok(false);
            }
            &t.product / r
        }
        Family::CubicTriple => t.product.clone(),
    };
    Ok(p.contains_int(&expected))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    #[serde(with = "decimal")]
    pub product: BigInt,
    pub producers: Vec<TrivialTriple>,
}

impl CatalogEntry {
    pub fn count(&self, family: Family) -> usize {
        self.producers.iter().filter(|t| t.family == family).count()
    }

    pub fn families(&self) -> Vec<Family> {
        let mut f: Vec<Family> = self.producers.iter().map(|t| t.family).collect();
        f.dedup();
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogStats {
    pub family_counts: [usize; 3],
    pub distinct: usize,
    /// Products with at least two family-1 producers.
    pub within_family_1: usize,
    /// Products with producers in both family 1 and family 2.
    pub across_families_1_2: usize,
    /// Products with more than two producers.
    pub triple_overlaps: usize,
    /// Products with producers in other combinations than the two above.
    pub other_overlaps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

/// The distinct products of trivial triples, ascending.
pub fn product_catalog() -> Result<Catalog> {
    let triples = trivial_triples()?;
    let mut map: BTreeMap<BigInt, Vec<TrivialTriple>> = BTreeMap::new();
    for t in triples {
        if t.product.is_zero() {
            return Err(Error::InvalidArgument(format!("{t} has zero product")));
        }
        map.entry(t.product.clone()).or_default().push(t);
    }
    Ok(Catalog {
        entries: map
            .into_iter()
            .map(|(product, producers)| CatalogEntry { product, producers })
            .collect(),
    })
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stats(&self) -> CatalogStats {
        let mut family_counts = [0; 3];
        let (mut within, mut across, mut triple, mut other) = (0, 0, 0, 0);
        for e in &self.entries {
            for t in &e.producers {
                family_counts[t.family.number() as usize - 1] += 1;
            }
            let f1 = e.count(Family::AllRational);
            let f2 = e.count(Family::RationalPlusPair);
            let f3 = e.count(Family::CubicTriple);
            if f1 >= 2 {
                within += 1;
            }
            if f1 >= 1 && f2 >= 1 {
                across += 1;
            }
            if e.producers.len() > 2 {
                triple += 1;
            }
            if e.producers.len() > 1 && (f3 > 0 || f2 > 1) {
                other += 1;
            }
        }
        CatalogStats {
            family_counts,
            distinct: self.entries.len(),
            within_family_1: within,
            across_families_1_2: across,
            triple_overlaps: triple,
            other_overlaps: other,
        }
    }

    /// Columns: product, n_producers, family_list, producer_descriptions.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("product\tn_producers\tfamily_list\tproducer_descriptions\n");
        for e in &self.entries {
            let fams: Vec<String> = e.families().iter().map(|f| f.to_string()).collect();
            let descr: Vec<String> = e.producers.iter().map(|t| t.to_string()).collect();
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.product,
                e.producers.len(),
                fams.join(","),
                descr.join(";")
            ));
        }
        s
    }

    /// SHA-256 of [`Catalog::to_tsv`].
    pub fn digest(&self) -> String {
        crate::tables::sha256_hex(self.to_tsv().as_bytes())
    }

    pub fn all_nonzero(&self) -> bool {
        self.entries.iter().all(|e| !e.product.is_zero())
    }
}

/// Big integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}
