//! Candidate discriminant triples for every leaf of the case tree.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::CutoffTable;
use crate::error::{Error, Result};
use crate::quadforms::{ClassNumberTable, Discriminant};
use crate::tables::{DataTables, HMaxima};

/// Number of triples the original enumeration reports.
pub const REFERENCE_TOTAL: usize = 2888;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1a")]
    OneA,
    #[serde(rename = "1bi")]
    OneBI,
    #[serde(rename = "1biiA")]
    OneBIIA,
    #[serde(rename = "1biiB")]
    OneBIIB,
    #[serde(rename = "2bi-9/4")]
    TwoBINineQuarters,
    #[serde(rename = "2bi-4")]
    TwoBIFour,
    #[serde(rename = "2bi-9")]
    TwoBINine,
    #[serde(rename = "2bi-16")]
    TwoBISixteen,
    #[serde(rename = "2bii-A")]
    TwoBIIA,
    #[serde(rename = "2bii-B")]
    TwoBIIB,
    #[serde(rename = "2bii-C")]
    TwoBIIC,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 11] = [
        CaseLabel::OneA,
        CaseLabel::OneBI,
        CaseLabel::OneBIIA,
        CaseLabel::OneBIIB,
        CaseLabel::TwoBINineQuarters,
        CaseLabel::TwoBIFour,
        CaseLabel::TwoBINine,
        CaseLabel::TwoBISixteen,
        CaseLabel::TwoBIIA,
        CaseLabel::TwoBIIB,
        CaseLabel::TwoBIIC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::OneA => "1a",
            CaseLabel::OneBI => "1bi",
            CaseLabel::OneBIIA => "1biiA",
            CaseLabel::OneBIIB => "1biiB",
            CaseLabel::TwoBINineQuarters => "2bi-9/4",
            CaseLabel::TwoBIFour => "2bi-4",
            CaseLabel::TwoBINine => "2bi-9",
            CaseLabel::TwoBISixteen => "2bi-16",
            CaseLabel::TwoBIIA => "2bii-A",
            CaseLabel::TwoBIIB => "2bii-B",
            CaseLabel::TwoBIIC => "2bii-C",
        }
    }

    /// Cases enumerated through weaker arithmetic conditions than the
    /// field-theoretic ones that define them.
    pub fn over_approximated(self) -> bool {
        matches!(self, CaseLabel::TwoBIIA | CaseLabel::TwoBIIB)
    }

    /// `Δ₁ = c·Δ₃` with `c = num/den` for the 2(b)(i) cases.
    pub fn ratio(self) -> Option<(i64, i64)> {
        match self {
            CaseLabel::TwoBINineQuarters => Some((9, 4)),
            CaseLabel::TwoBIFour => Some((4, 1)),
            CaseLabel::TwoBINine => Some((9, 1)),
            CaseLabel::TwoBISixteen => Some((16, 1)),
            _ => None,
        }
    }

    /// `h₁ = h₂ = h₃` for the first family, `h₁ = h₂ = 2h₃` otherwise.
    pub fn doubled(self) -> bool {
        self >= CaseLabel::TwoBINineQuarters
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<CaseLabel> {
        CaseLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case label {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateTriple {
    pub d1: Discriminant,
    pub d2: Discriminant,
    pub d3: Discriminant,
    pub case: CaseLabel,
    pub h1: u32,
    pub h2: u32,
    pub h3: u32,
}

impl CandidateTriple {
    /// Orders the discriminants by class number, then `|Δ|`, both
    /// descending.
    pub fn canonical(discs: [Discriminant; 3], case: CaseLabel) -> CandidateTriple {
        let mut v: Vec<(Discriminant, u32)> =
            discs.iter().map(|&d| (d, d.class_number())).collect();
        v.sort_by_key(|&(d, h)| (Reverse(h), Reverse(d.abs())));
        CandidateTriple {
            d1: v[0].0,
            d2: v[1].0,
            d3: v[2].0,
            case,
            h1: v[0].1,
            h2: v[1].1,
            h3: v[2].1,
        }
    }

    pub fn discs(&self) -> [Discriminant; 3] {
        [self.d1, self.d2, self.d3]
    }

    pub fn key(&self) -> [i64; 3] {
        [self.d1.value(), self.d2.value(), self.d3.value()]
    }

    fn sort_key(&self) -> (CaseLabel, u64, u64, u64) {
        (self.case, self.d1.abs(), self.d2.abs(), self.d3.abs())
    }
}

impl fmt::Display for CandidateTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {}, {})", self.case, self.d1, self.d2, self.d3)
    }
}

/// All `Δ` with `h(Δ) = h`, checked complete against the maxima table.
pub fn discs_with_class_number(
    h: u32,
    scan: &ClassNumberTable,
    maxima: &HMaxima,
) -> Result<Vec<Discriminant>> {
    let needed = maxima.max_abs(h)?;
    if scan.cap() < needed {
        return Err(Error::CapTooSmall {
            h,
            cap: scan.cap(),
            needed,
        });
    }
    Ok(scan.with_class_number(h))
}

/// Whether any `|Δ| ≤ 488` has class number ≥ 128.
pub fn verify_case_emptiness_2biic() -> bool {
    ClassNumberTable::scan(488).max_class_number_upto(488) < 128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CasegenConfig {
    /// Keep only triples with `h₃` at most this.
    pub max_h3: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCount {
    /// Triples satisfying the case's conditions, before deduplication.
    pub generated: usize,
    /// Triples kept under this label.
    pub kept: usize,
    pub over_approximated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub candidates: Vec<CandidateTriple>,
    pub per_case: BTreeMap<CaseLabel, CaseCount>,
    pub reference_total: usize,
    /// `candidates.len() − reference_total`; meaningful for unfiltered runs.
    pub surplus: i64,
    pub max_h3: Option<u32>,
}

/// Inputs shared by all case enumerations.
pub struct CaseContext<'a> {
    pub tables: &'a DataTables,
    pub cutoffs: &'a CutoffTable,
    pub scan: &'a ClassNumberTable,
}

impl CaseContext<'_> {
    fn bound_label(case: CaseLabel) -> &'static str {
        match case {
            CaseLabel::OneBIIA => "1biiA",
            CaseLabel::OneBIIB => "1biiB",
            c => c.as_str(),
        }
    }

    /// Discriminants with `h ≥ h_min` admitted by the case's cutoff
    /// ladder: all of them below the first row, `|Δ| ≤ cutoff` above.
    fn ladder(&self, case: CaseLabel, h_min: u32) -> Result<Vec<Discriminant>> {
        let label = Self::bound_label(case);
        let first_k = self.cutoffs.first_k(label).unwrap_or(u32::MAX);
        for h in h_min..first_k {
            discs_with_class_number(h, self.scan, &self.tables.h_maxima)?;
        }
        let top = self
            .cutoffs
            .entries
            .iter()
            .filter(|e| e.case == label)
            .map(|e| e.cutoff)
            .max()
            .unwrap_or(0);
        if self.scan.cap() < top {
            return Err(Error::CapTooSmall {
                h: first_k,
                cap: self.scan.cap(),
                needed: top,
            });
        }
        Ok(self
            .scan
            .iter()
            .filter(|&(d, h)| {
                h >= h_min
                    && match self.cutoffs.cutoff_for(label, h) {
                        None => true,
                        Some(c) => d.abs() <= c,
                    }
            })
            .map(|(d, _)| d)
            .collect())
    }

    fn class_number(&self, d: Discriminant) -> u32 {
        self.scan.get(d.abs()).unwrap_or_else(|| d.class_number())
    }

    fn case_1a(&self) -> Result<Vec<[Discriminant; 3]>> {
        Ok(self
            .ladder(CaseLabel::OneA, 4)?
            .into_iter()
            .map(|d| [d, d, d])
            .collect())
    }

    fn case_1bi(&self) -> Vec<[Discriminant; 3]> {
        let mut out = Vec::new();
        for row in &self.tables.table_4_1 {
            let n = row.discs.len();
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let t = [row.discs[i], row.discs[j], row.discs[k]];
                        if i == k {
                            continue;
                        }
                        let f = t[0].fundamental();
                        if t.iter().all(|d| d.fundamental() == f) {
                            continue;
                        }
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    fn case_1bii(&self, case: CaseLabel) -> Result<Vec<[Discriminant; 3]>> {
        let mut out = Vec::new();
        for d in self.ladder(case, 2)? {
            if d.value().rem_euclid(8) != 1 {
                continue;
            }
            let big = Discriminant::new(4 * d.value())?;
            if self.class_number(big) != self.class_number(d) {
                continue;
            }
            out.push(match case {
                CaseLabel::OneBIIA => [big, d, d],
                _ => [big, big, d],
            });
        }
        Ok(out)
    }

    fn case_2bi(&self, case: CaseLabel) -> Result<Vec<[Discriminant; 3]>> {
        let (num, den) = case.ratio().expect("2(b)(i) case");
        let mut out = Vec::new();
        for d3 in self.ladder(case, 2)? {
            let v = d3.value() * num;
            if v % den != 0 {
                continue;
            }
            let Ok(d1) = Discriminant::new(v / den) else {
                continue;
            };
            if self.class_number(d1) == 2 * self.class_number(d3) {
                out.push([d1, d1, d3]);
            }
        }
        Ok(out)
    }

    fn case_2bii_a(&self) -> Result<Vec<[Discriminant; 3]>> {
        let mut out = Vec::new();
        for row in &self.tables.table_2_1 {
            let h1 = row.class_number;
            if h1 < 4 || h1 % 2 == 1 {
                continue;
            }
            for d3 in discs_with_class_number(h1 / 2, self.scan, &self.tables.h_maxima)? {
                if d3.fundamental() != row.disc.fundamental() {
                    out.push([row.disc, row.disc, d3]);
                }
            }
        }
        Ok(out)
    }

    fn case_2bii_b(&self) -> Result<Vec<[Discriminant; 3]>> {
        let mut out = Vec::new();
        for row in &self.tables.table_2_1 {
            let h3 = row.class_number;
            if h3 < 2 {
                continue;
            }
            for d1 in discs_with_class_number(2 * h3, self.scan, &self.tables.h_maxima)? {
                if d1.fundamental() != row.disc.fundamental() {
                    out.push([d1, d1, row.disc]);
                }
            }
        }
        Ok(out)
    }

    fn case_2bii_c(&self) -> Vec<[Discriminant; 3]> {
        // h₁ ≥ 128 with |Δ₁|, |Δ₃| ≤ 488
        self.scan
            .iter()
            .filter(|&(d, h)| h >= 128 && d.abs() <= 488)
            .flat_map(|(d1, h1)| {
                self.scan
                    .iter()
                    .filter(move |&(d3, h3)| 2 * h3 == h1 && d3.abs() <= 488)
                    .map(move |(d3, _)| [d1, d1, d3])
            })
            .collect()
    }

    pub fn enumerate(&self, case: CaseLabel) -> Result<Vec<[Discriminant; 3]>> {
        match case {
            CaseLabel::OneA => self.case_1a(),
            CaseLabel::OneBI => Ok(self.case_1bi()),
            CaseLabel::OneBIIA | CaseLabel::OneBIIB => self.case_1bii(case),
            CaseLabel::TwoBIIA => self.case_2bii_a(),
            CaseLabel::TwoBIIB => self.case_2bii_b(),
            CaseLabel::TwoBIIC => Ok(self.case_2bii_c()),
            c => self.case_2bi(c),
        }
    }

    /// Independent re-check of a triple against its case's conditions.
    pub fn satisfies(&self, t: &CandidateTriple) -> bool {
        let [d1, d2, d3] = t.discs();
        let (h1, h2, h3) = (t.h1, t.h2, t.h3);
        if h3 < 2 || h1 < h2 || h2 < h3 {
            return false;
        }
        if [d1, d2, d3]
            .iter()
            .zip([h1, h2, h3])
            .any(|(d, h)| d.class_number() != h)
        {
            return false;
        }
        let within = |label: &str, d: Discriminant, h: u32| match self.cutoffs.cutoff_for(label, h)
        {
            None => true,
            Some(c) => d.abs() <= c,
        };
        let t21 = |d: Discriminant| self.tables.is_in_table_2_1(d);
        match t.case {
            CaseLabel::OneA => d1 == d2 && d2 == d3 && h1 >= 4 && within("1a", d1, h1),
            CaseLabel::OneBI => {
                h1 == h3
                    && !(d1 == d2 && d2 == d3)
                    && !(d1.fundamental() == d2.fundamental()
                        && d2.fundamental() == d3.fundamental())
                    && self
                        .tables
                        .table_4_1
                        .iter()
                        .any(|r| [d1, d2, d3].iter().all(|d| r.discs.contains(d)))
            }
            CaseLabel::OneBIIA => {
                d1.value() == 4 * d2.value()
                    && d2 == d3
                    && d2.value().rem_euclid(8) == 1
                    && h1 == h3
                    && within("1biiA", d2, h2)
            }
            CaseLabel::OneBIIB => {
                d1 == d2
                    && d1.value() == 4 * d3.value()
                    && d3.value().rem_euclid(8) == 1
                    && h1 == h3
                    && within("1biiB", d3, h3)
            }
            CaseLabel::TwoBIIA => {
                d1 == d2 && h1 == 2 * h3 && t21(d1) && d1.fundamental() != d3.fundamental()
            }
            CaseLabel::TwoBIIB => {
                d1 == d2 && h1 == 2 * h3 && t21(d3) && d1.fundamental() != d3.fundamental()
            }
            CaseLabel::TwoBIIC => d1 == d2 && h1 >= 128 && h1 == 2 * h3,
            c => {
                let (num, den) = c.ratio().unwrap();
                d1 == d2
                    && den * d1.value() == num * d3.value()
                    && h1 == 2 * h3
                    && within(c.as_str(), d3, h3)
            }
        }
    }
}

/// The deduplicated candidate list over all cases.
pub fn generate_candidates(ctx: &CaseContext<'_>, config: CasegenConfig) -> Result<CandidateSet> {
    let mut seen: HashSet<[i64; 3]> = HashSet::new();
    let mut per_case = BTreeMap::new();
    let mut candidates = Vec::new();
    for case in CaseLabel::ALL {
        let triples = ctx.enumerate(case)?;
        let mut count = CaseCount {
            generated: triples.len(),
            kept: 0,
            over_approximated: case.over_approximated(),
        };
        for t in triples {
            let c = CandidateTriple::canonical(t, case);
            if config.max_h3.is_some_and(|m| c.h3 > m) {
                continue;
            }
            if seen.insert(c.key()) {
                count.kept += 1;
                candidates.push(c);
            }
        }
        per_case.insert(case, count);
    }
    candidates.sort_by_key(CandidateTriple::sort_key);
    Ok(CandidateSet {
        surplus: candidates.len() as i64 - REFERENCE_TOTAL as i64,
        candidates,
        per_case,
        reference_total: REFERENCE_TOTAL,
        max_h3: config.max_h3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Discriminant {
        Discriminant::new(v).unwrap()
    }

    #[test]
    fn canonical_order() {
        let t = CandidateTriple::canonical([d(-15), d(-23), d(-60)], CaseLabel::OneBI);
        assert_eq!(t.key(), [-23, -60, -15]);
        assert_eq!((t.h1, t.h2, t.h3), (3, 2, 2));
    }

    #[test]
    fn labels_roundtrip() {
        for c in CaseLabel::ALL {
            assert_eq!(c.as_str().parse::<CaseLabel>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.as_str()));
        }
        assert!("1c".parse::<CaseLabel>().is_err());
    }

    #[test]
    fn empty_case() {
        assert!(verify_case_emptiness_2biic());
    }
}
