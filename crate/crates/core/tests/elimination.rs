use moduli::casegen::{CandidateTriple, CaseLabel};
use moduli::classpoly::{hilbert_class_polynomial, singular_moduli, ClassPolyCache};
use moduli::eliminate::{
    eliminate_triple, exact_rational_root_check, range_bound, Schedule, Status,
};
use moduli::quadforms::Discriminant;
use num_bigint::BigInt;

fn d(v: i64) -> Discriminant {
    Discriminant::new(v).unwrap()
}

fn triple(a: i64, b: i64, c: i64, case: CaseLabel) -> CandidateTriple {
    CandidateTriple::canonical([d(a), d(b), d(c)], case)
}

#[test]
fn cubic_positive_controls() {
    for v in [-23, -31, -59, -83, -907] {
        let c = triple(v, v, v, CaseLabel::OneA);
        let verdict = eliminate_triple(&c, &Schedule::default()).unwrap();
        let alpha = -hilbert_class_polynomial(d(v)).unwrap().constant_term();
        assert_eq!(verdict.status, Status::RationalProductFound, "{v}");
        assert_eq!(verdict.pairs_checked, 2);
        assert_eq!(verdict.witnesses.len(), 2);
        assert!(verdict
            .witnesses
            .iter()
            .all(|w| w.alpha == alpha.to_string()));
        assert!(exact_rational_root_check(&c, &alpha, &ClassPolyCache::in_memory()).unwrap());
    }
}

#[test]
fn exact_check_examples() {
    let c = triple(-23, -23, -23, CaseLabel::OneA);
    let hcp = ClassPolyCache::in_memory();
    let alpha = BigInt::from(-12771880859375i64);
    assert!(exact_rational_root_check(&c, &alpha, &hcp).unwrap());
    assert!(!exact_rational_root_check(&c, &(&alpha + 1), &hcp).unwrap());
    let too_big = range_bound(&c) + 1;
    assert!(exact_rational_root_check(&c, &too_big, &hcp).is_err());
}

/// Near-integer products of all root triples, found numerically.
fn numeric_integer_products(c: &CandidateTriple) -> Vec<BigInt> {
    let prec = 512;
    let [m1, m2, m3] = c.discs().map(|x| singular_moduli(x, prec).unwrap());
    let mut out = Vec::new();
    for a in &m1 {
        for b in &m2 {
            for x in &m3 {
                let p = a.value.mul(&b.value, prec).mul(&x.value, prec);
                if p.center_int_distance() < 1e-20 {
                    out.push(p.unique_integer().unwrap());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn exact_check_agrees_with_brute_force() {
    let hcp = ClassPolyCache::in_memory();
    let cases = [
        (-23, -23, -23),
        (-15, -20, -3),
        (-15, -15, -4),
        (-24, -7, -8),
        (-31, -15, -11),
        (-23, -40, -19),
        (-35, -51, -4),
        (-59, -91, -163),
    ];
    for (a, b, x) in cases {
        let c = triple(a, b, x, CaseLabel::OneA);
        assert!(c.h1 * c.h2 * c.h3 <= 27);
        let found = numeric_integer_products(&c);
        for n in &found {
            assert!(exact_rational_root_check(&c, n, &hcp).unwrap(), "{c}: {n}");
        }
        for n in found.iter().map(|n| n + 1) {
            if !found.contains(&n) {
                assert!(
                    !exact_rational_root_check(&c, &n, &hcp).unwrap(),
                    "{c}: {n}"
                );
            }
        }
    }
}

#[test]
fn screened_gaps_are_refuted_exactly() {
    let hcp = ClassPolyCache::in_memory();
    let c = triple(-15, -20, -24, CaseLabel::OneBI);
    let prec = 256;
    let [m1, m2, m3] = c.discs().map(|x| singular_moduli(x, prec).unwrap());
    let x1 = &m1[0].value;
    for y in &m2 {
        for z in &m3 {
            let p = x1.mul(&y.value, prec).mul(&z.value, prec);
            let (re, _) = p.to_f64();
            for n in [re.floor(), re.ceil()] {
                let n = BigInt::from(n as i64);
                if !p.contains_int(&n) {
                    assert!(!exact_rational_root_check(&c, &n, &hcp).unwrap());
                }
            }
        }
    }
}

#[test]
fn genuine_candidates_are_eliminated_at_first_rung() {
    for (a, b, x, case) in [
        (-15, -20, -24, CaseLabel::OneBI),
        (-39, -56, -55, CaseLabel::OneA),
        (-84, -120, -132, CaseLabel::TwoBIIA),
    ] {
        let c = triple(a, b, x, case);
        let v = eliminate_triple(&c, &Schedule::default()).unwrap();
        assert_eq!(v.status, Status::Eliminated, "{c}");
        assert_eq!(v.exact_checks, 0);
        assert!(v.witnesses.is_empty());
    }
}

#[test]
fn verdicts_are_deterministic() {
    let c = triple(-84, -120, -132, CaseLabel::TwoBIIA);
    let a = eliminate_triple(&c, &Schedule::default()).unwrap();
    let b = eliminate_triple(&c, &Schedule::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn verdict_schema() {
    let c = triple(-23, -23, -23, CaseLabel::OneA);
    let v = eliminate_triple(&c, &Schedule::default()).unwrap();
    let json: serde_json::Value = serde_json::to_value(&v).unwrap();
    for key in [
        "d1",
        "d2",
        "d3",
        "case",
        "status",
        "pairs_checked",
        "max_precision_bits",
        "min_int_distance",
        "witnesses",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["status"], "RationalProductFound");
    assert_eq!(json["case"], "1a");
}
