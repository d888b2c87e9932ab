//! Bundled data tables: 2-elementary discriminants, groups of them
//! sharing a real multiquadratic field, and per-class-number maxima.
//!
//! The files are produced by [`DataTables::generate`] and checked against
//! embedded SHA-256 digests on every load.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quadforms::{factor, is_two_elementary, ClassNumberTable, Discriminant};

pub const TABLE_2_1_FILE: &str = "table-2_1.tsv";
pub const TABLE_4_1_FILE: &str = "table-4_1.tsv";
pub const H_MAXIMA_FILE: &str = "h-maxima.tsv";

pub const TABLE_2_1_SHA256: &str =
    "9d8e7210c0137fbee2b5bb3b6c073fbdc954568d9241a0b287d20ff94a65b312";
pub const TABLE_4_1_SHA256: &str =
    "982271c7c8381610545f35f02d8df6e4a163124abced22aa4569185854770f72";
pub const H_MAXIMA_SHA256: &str =
    "b5e5501d1649dcb8c29bd55672cfcc4a272784bb9d1bd8d74e855967c00abf2a";

/// Scan cap used to generate the tables.
pub const DEFAULT_SCAN_CAP: u64 = 300_000;
/// Largest class number recorded in the maxima table.
pub const MAX_TABULATED_H: u32 = 32;

/// Squarefree integers attached to the genus characters of `Δ`: `p*` for
/// each odd prime `p | Δ`, and `−1`, `2` or `−2` from the 2-part.
pub fn genus_generators(disc: Discriminant) -> Vec<i64> {
    let abs = disc.abs();
    let mut gens = Vec::new();
    for (p, _) in factor(abs) {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        gens.push(if p % 4 == 1 { p } else { -p });
    }
    if abs % 4 == 0 {
        let n = abs / 4;
        match n % 8 {
            1 | 5 | 4 => gens.push(-1),
            2 => gens.push(-2),
            6 => gens.push(2),
            0 => {
                gens.push(-1);
                gens.push(2);
            }
            _ => {}
        }
    }
    gens
}

/// A real multiquadratic field `Q(√m₁, …, √m_r)`, stored by a canonical
/// basis of positive squarefree integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RealField {
    basis: Vec<u64>,
}

impl RealField {
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// `[F : Q]`.
    pub fn degree(&self) -> u64 {
        1 << self.basis.len()
    }

    pub fn label(&self) -> String {
        if self.basis.is_empty() {
            return "1".to_string();
        }
        self.basis
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(s: &str) -> Option<RealField> {
        if s == "1" {
            return Some(RealField { basis: vec![] });
        }
        let basis = s
            .split(',')
            .map(|t| t.trim().parse().ok())
            .collect::<Option<Vec<u64>>>()?;
        Some(RealField { basis })
    }
}

/// Real subfield of the field generated by `√g` over the generators,
/// together with the rank of the whole group they generate mod squares.
pub fn genus_field(gens: &[i64]) -> (RealField, usize) {
    let mut primes: Vec<u64> = gens
        .iter()
        .flat_map(|&g| factor(g.unsigned_abs()).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes.reverse();
    // bit 0 is the sign; bit i+1 is primes[i], largest prime first
    let to_vec = |g: i64| -> u64 {
        let mut v = (g < 0) as u64;
        for (p, _) in factor(g.unsigned_abs()) {
            let i = primes.iter().position(|&q| q == p).unwrap();
            v |= 1 << (i + 1);
        }
        v
    };
    let mut rows: Vec<u64> = gens.iter().map(|&g| to_vec(g)).collect();
    // reduced row echelon form, pivots taken in column order
    let mut basis: Vec<u64> = Vec::new();
    for col in 0..=primes.len() {
        let bit = 1u64 << col;
        let Some(pos) = rows.iter().position(|r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut().chain(basis.iter_mut()) {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        basis.push(pivot);
    }
    let rank = basis.len();
    let mut positive: Vec<u64> = basis
        .into_iter()
        .filter(|v| v & 1 == 0)
        .map(|v| {
            (0..primes.len())
                .filter(|i| v & (1 << (i + 1)) != 0)
                .map(|i| primes[i])
                .product()
        })
        .collect();
    positive.sort_unstable();
    (RealField { basis: positive }, rank)
}

/// The real genus field of `Δ`; equals `Q(x)` when the class group of `Δ`
/// is 2-elementary.
pub fn real_genus_field(disc: Discriminant) -> RealField {
    genus_field(&genus_generators(disc)).0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoElementaryRow {
    pub disc: Discriminant,
    pub class_number: u32,
    pub field: RealField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualFieldRow {
    /// `|Δ|` descending.
    pub discs: Vec<Discriminant>,
    pub class_number: u32,
    pub field: RealField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HMaxRow {
    pub class_number: u32,
    pub max_abs: u64,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HMaxima {
    pub cap: u64,
    /// Every `|Δ|` in `[evidence_from, cap]` has class number at least
    /// `evidence_min_h`.
    pub evidence_from: u64,
    pub evidence_min_h: u32,
    pub rows: Vec<HMaxRow>,
}

impl HMaxima {
    pub fn max_h(&self) -> u32 {
        self.rows.last().map_or(0, |r| r.class_number)
    }

    pub fn get(&self, h: u32) -> Option<&HMaxRow> {
        self.rows.iter().find(|r| r.class_number == h)
    }

    /// Largest `|Δ|` with class number `h`, or an error if `h` is not
    /// tabulated.
    pub fn max_abs(&self, h: u32) -> Result<u64> {
        self.get(h)
            .map(|r| r.max_abs)
            .ok_or(Error::ClassNumberNotTabulated {
                h,
                max_h: self.max_h(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DataTables {
    pub table_2_1: Vec<TwoElementaryRow>,
    pub table_4_1: Vec<EqualFieldRow>,
    pub h_maxima: HMaxima,
}

/// Group 2-elementary discriminants by real field; keep fields reached
/// from at least two imaginary quadratic fields.
pub fn equal_field_rows(t21: &[TwoElementaryRow]) -> Vec<EqualFieldRow> {
    let mut groups: BTreeMap<RealField, Vec<&TwoElementaryRow>> = BTreeMap::new();
    for row in t21.iter().filter(|r| r.class_number >= 2) {
        groups.entry(row.field.clone()).or_default().push(row);
    }
    let mut out: Vec<EqualFieldRow> = groups
        .into_iter()
        .filter_map(|(field, rows)| {
            let mut fund: Vec<i64> = rows.iter().map(|r| r.disc.fundamental()).collect();
            fund.sort_unstable();
            fund.dedup();
            if fund.len() < 2 {
                return None;
            }
            let mut discs: Vec<Discriminant> = rows.iter().map(|r| r.disc).collect();
            discs.sort_by_key(|d| std::cmp::Reverse(d.abs()));
            Some(EqualFieldRow {
                discs,
                class_number: rows[0].class_number,
                field,
            })
        })
        .collect();
    out.sort_by_key(|r| (r.class_number, r.discs[0].abs()));
    out
}

impl DataTables {
    /// Compute all three tables from a class-number scan.
    pub fn generate(scan: &ClassNumberTable) -> DataTables {
        let table_2_1: Vec<TwoElementaryRow> = scan
            .iter()
            .filter(|&(d, _)| is_two_elementary(d))
            .map(|(disc, class_number)| TwoElementaryRow {
                disc,
                class_number,
                field: real_genus_field(disc),
            })
            .collect();
        let table_4_1 = equal_field_rows(&table_2_1);

        let cap = scan.cap();
        let mut rows: Vec<HMaxRow> = (1..=MAX_TABULATED_H)
            .map(|h| HMaxRow {
                class_number: h,
                max_abs: 0,
                count: 0,
            })
            .collect();
        for (d, h) in scan.iter() {
            if let Some(r) = rows.get_mut(h as usize - 1) {
                r.max_abs = d.abs();
                r.count += 1;
            }
        }
        let evidence_from = cap / 3 * 2;
        DataTables {
            table_2_1,
            table_4_1,
            h_maxima: HMaxima {
                cap,
                evidence_from,
                evidence_min_h: scan.min_class_number_from(evidence_from),
                rows,
            },
        }
    }

    pub fn render_table_2_1(&self) -> String {
        let mut s = String::from("discriminant\tclass_number\tfundamental\treal_field\n");
        for r in &self.table_2_1 {
            writeln!(
                s,
                "{}\t{}\t{}\t{}",
                r.disc,
                r.class_number,
                r.disc.fundamental(),
                r.field.label()
            )
            .unwrap();
        }
        s
    }

    pub fn render_table_4_1(&self) -> String {
        let mut s = String::from("discriminants\tclass_number\treal_field\n");
        for r in &self.table_4_1 {
            let ds: Vec<String> = r.discs.iter().map(|d| d.to_string()).collect();
            writeln!(
                s,
                "{}\t{}\t{}",
                ds.join(","),
                r.class_number,
                r.field.label()
            )
            .unwrap();
        }
        s
    }

    pub fn render_h_maxima(&self) -> String {
        let m = &self.h_maxima;
        let mut s = format!(
            "# cap {}; every |disc| in [{}, {}] has class number >= {}\n",
            m.cap, m.evidence_from, m.cap, m.evidence_min_h
        );
        s.push_str("class_number\tmax_abs_discriminant\tcount\n");
        for r in &m.rows {
            writeln!(s, "{}\t{}\t{}", r.class_number, r.max_abs, r.count).unwrap();
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in [
            (TABLE_2_1_FILE, self.render_table_2_1()),
            (TABLE_4_1_FILE, self.render_table_4_1()),
            (H_MAXIMA_FILE, self.render_h_maxima()),
        ] {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    /// Load and checksum the three files, then run [`DataTables::validate`].
    pub fn load(dir: &Path) -> Result<DataTables> {
        let t21 = read_checked(&dir.join(TABLE_2_1_FILE), TABLE_2_1_SHA256)?;
        let t41 = read_checked(&dir.join(TABLE_4_1_FILE), TABLE_4_1_SHA256)?;
        let hm = read_checked(&dir.join(H_MAXIMA_FILE), H_MAXIMA_SHA256)?;
        let tables = DataTables {
            table_2_1: parse_table_2_1(&dir.join(TABLE_2_1_FILE), &t21)?,
            table_4_1: parse_table_4_1(&dir.join(TABLE_4_1_FILE), &t41)?,
            h_maxima: parse_h_maxima(&dir.join(H_MAXIMA_FILE), &hm)?,
        };
        tables.validate(dir)?;
        Ok(tables)
    }

    /// Row-level consistency: class numbers, 2-elementarity, field labels
    /// and the grouping of the second table.
    pub fn validate(&self, dir: &Path) -> Result<()> {
        let p21 = dir.join(TABLE_2_1_FILE);
        for r in &self.table_2_1 {
            let h = r.disc.class_number();
            if h != r.class_number {
                return Err(Error::data(
                    &p21,
                    format!("h({}) is {h}, table says {}", r.disc, r.class_number),
                ));
            }
            if !is_two_elementary(r.disc) {
                return Err(Error::data(&p21, format!("{} is not 2-elementary", r.disc)));
            }
            let (field, rank) = genus_field(&genus_generators(r.disc));
            if field != r.field {
                return Err(Error::data(
                    &p21,
                    format!("field of {} is {}", r.disc, field.label()),
                ));
            }
            if 1u64 << (rank - 1) != h as u64 {
                return Err(Error::data(
                    &p21,
                    format!("{} has {rank} genus characters but h = {h}", r.disc),
                ));
            }
        }
        let p41 = dir.join(TABLE_4_1_FILE);
        if equal_field_rows(&self.table_2_1) != self.table_4_1 {
            return Err(Error::data(
                &p41,
                "rows do not match the grouping of the 2-elementary table",
            ));
        }
        let ph = dir.join(H_MAXIMA_FILE);
        let m = &self.h_maxima;
        if m.evidence_min_h <= m.max_h() {
            return Err(Error::data(
                &ph,
                "tabulated class numbers reach the scan cap",
            ));
        }
        for (i, r) in m.rows.iter().enumerate() {
            if r.class_number != i as u32 + 1 || r.max_abs >= m.evidence_from {
                return Err(Error::data(
                    &ph,
                    format!("bad row for h = {}", r.class_number),
                ));
            }
        }
        Ok(())
    }

    pub fn is_in_table_2_1(&self, disc: Discriminant) -> bool {
        self.table_2_1.iter().any(|r| r.disc == disc)
    }
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_checked(path: &Path, expected: &str) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let found = sha256_hex(&bytes);
    if found != expected {
        return Err(Error::Checksum {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            found,
        });
    }
    String::from_utf8(bytes).map_err(|_| Error::data(path, "not UTF-8"))
}

fn body_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .skip(1)
}

fn parse_disc(path: &Path, s: &str) -> Result<Discriminant> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| Error::data(path, format!("bad discriminant {s:?}")))?;
    Discriminant::new(v).map_err(|_| Error::data(path, format!("{v} is not a discriminant")))
}

fn parse_num<T: std::str::FromStr>(path: &Path, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::data(path, format!("bad number {s:?}")))
}

fn fields<'a>(path: &Path, line: &'a str, n: usize) -> Result<Vec<&'a str>> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != n {
        return Err(Error::data(path, format!("expected {n} columns: {line:?}")));
    }
    Ok(f)
}

fn parse_field(path: &Path, s: &str) -> Result<RealField> {
    RealField::parse(s).ok_or_else(|| Error::data(path, format!("bad field label {s:?}")))
}

fn parse_table_2_1(path: &Path, text: &str) -> Result<Vec<TwoElementaryRow>> {
    body_lines(text)
        .map(|line| {
            let f = fields(path, line, 4)?;
            let disc = parse_disc(path, f[0])?;
            let fund: i64 = parse_num(path, f[2])?;
            if fund != disc.fundamental() {
                return Err(Error::data(
                    path,
                    format!("fundamental part of {disc} is not {fund}"),
                ));
            }
            Ok(TwoElementaryRow {
                disc,
                class_number: parse_num(path, f[1])?,
                field: parse_field(path, f[3])?,
            })
        })
        .collect()
}

fn parse_table_4_1(path: &Path, text: &str) -> Result<Vec<EqualFieldRow>> {
    body_lines(text)
        .map(|line| {
            let f = fields(path, line, 3)?;
            let discs = f[0]
                .split(',')
                .map(|s| parse_disc(path, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(EqualFieldRow {
                discs,
                class_number: parse_num(path, f[1])?,
                field: parse_field(path, f[2])?,
            })
        })
        .collect()
}

fn parse_h_maxima(path: &Path, text: &str) -> Result<HMaxima> {
    let header = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# cap "))
        .ok_or_else(|| Error::data(path, "missing cap header"))?;
    // "<cap>; every |disc| in [<from>, <cap>] has class number >= <h>"
    let nums: Vec<u64> = header
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().unwrap())
        .collect();
    if nums.len() != 4 {
        return Err(Error::data(path, "malformed cap header"));
    }
    let rows = body_lines(text)
        .map(|line| {
            let f = fields(path, line, 3)?;
            Ok(HMaxRow {
                class_number: parse_num(path, f[0])?,
                max_abs: parse_num(path, f[1])?,
                count: parse_num(path, f[2])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HMaxima {
        cap: nums[0],
        evidence_from: nums[1],
        evidence_min_h: nums[3] as u32,
        rows,
    })
}

/// Default location of the bundled data directory.
pub fn default_data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Discriminant {
        Discriminant::new(v).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(genus_generators(d(-15)), vec![-3, 5]);
        assert_eq!(genus_generators(d(-20)), vec![5, -1]);
        assert_eq!(genus_generators(d(-24)), vec![-3, 2]);
        assert_eq!(genus_generators(d(-4 * 21)), vec![-3, -7, -1]);
        assert_eq!(genus_generators(d(-32)), vec![-1, 2]);
        assert_eq!(genus_generators(d(-3)), vec![-3]);
    }

    #[test]
    fn fields() {
        assert_eq!(real_genus_field(d(-15)).label(), "5");
        assert_eq!(real_genus_field(d(-20)).label(), "5");
        assert_eq!(real_genus_field(d(-24)).label(), "2");
        // −84: generators −3, −7, −1 span {21, 3, 7} on the positive side
        assert_eq!(real_genus_field(d(-84)).label(), "3,7");
        assert_eq!(real_genus_field(d(-84)).degree(), 4);
        assert_eq!(real_genus_field(d(-7)).label(), "1");
    }

    #[test]
    fn grouping() {
        let rows: Vec<TwoElementaryRow> = [-15, -20, -60, -24]
            .iter()
            .map(|&v| TwoElementaryRow {
                disc: d(v),
                class_number: d(v).class_number(),
                field: real_genus_field(d(v)),
            })
            .collect();
        let g = equal_field_rows(&rows);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].discs, vec![d(-60), d(-20), d(-15)]);
        assert_eq!(g[0].field.label(), "5");
    }
}
