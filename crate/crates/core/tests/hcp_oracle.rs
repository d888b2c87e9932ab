use moduli::classpoly::{compute_class_polynomial, hilbert_class_polynomial, ClassPolyCache};
use moduli::quadforms::{ClassNumberTable, Discriminant};
use num_bigint::BigInt;

fn oracle() -> Vec<(i64, u32, Vec<BigInt>)> {
    include_str!("oracle/hcp_small.tsv")
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let coeffs = cols[2].split(' ').map(|c| c.parse().unwrap()).collect();
            (cols[0].parse().unwrap(), cols[1].parse().unwrap(), coeffs)
        })
        .collect()
}

#[test]
fn oracle_covers_small_class_numbers() {
    let rows = oracle();
    let scan = ClassNumberTable::scan(10_000);
    for h in 1..=3 {
        let mut expect: Vec<i64> = scan
            .with_class_number(h)
            .iter()
            .map(|d| d.value())
            .collect();
        let mut got: Vec<i64> = rows.iter().filter(|r| r.1 == h).map(|r| r.0).collect();
        expect.sort();
        got.sort();
        assert_eq!(got, expect, "h = {h}");
    }
}

#[test]
fn matches_oracle() {
    for (d, h, coeffs) in oracle() {
        let p = hilbert_class_polynomial(Discriminant::new(d).unwrap()).unwrap();
        assert_eq!(p.degree(), h as usize);
        assert_eq!(p.coefficients_descending(), coeffs, "H for {d}");
    }
}

#[test]
fn rounding_certificate_is_below_half() {
    let p = compute_class_polynomial(Discriminant::new(-907).unwrap()).unwrap();
    let cert = p
        .rounding_certificate
        .expect("computed polynomials carry a certificate");
    assert!(cert.max_radius_log2 < -1);
}

#[test]
fn disk_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = Discriminant::new(-71).unwrap();
    let first = ClassPolyCache::with_dir(dir.path()).get(d).unwrap();
    let path = dir.path().join("hcp").join("71.txt");
    assert!(path.exists());
    let second = ClassPolyCache::with_dir(dir.path()).get(d).unwrap();
    assert_eq!(first.poly(), second.poly());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 8);
}
