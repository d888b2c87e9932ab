use moduli::catalog::{
    ball_cross_check, product_catalog, rational_singular_moduli, trivial_triples, Family,
};
use num_bigint::BigInt;

#[test]
fn rational_moduli_values() {
    let r = rational_singular_moduli().unwrap();
    let values: Vec<i64> = r.iter().map(|m| i64::try_from(&m.value).unwrap()).collect();
    assert_eq!(values.len(), 13);
    assert!(values.contains(&0));
    assert!(values.contains(&1728));
    assert!(values.contains(&-147197952000));
    assert!(values.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn family_sizes() {
    let t = trivial_triples().unwrap();
    let count = |f| t.iter().filter(|x| x.family == f).count();
    assert_eq!(count(Family::AllRational), 364);
    assert_eq!(count(Family::RationalPlusPair), 348);
    assert_eq!(count(Family::CubicTriple), 25);
}

#[test]
fn conjugate_products_match_balls() {
    for t in trivial_triples().unwrap() {
        if t.family != Family::AllRational {
            assert!(ball_cross_check(&t).unwrap(), "{t}");
        }
    }
}

#[test]
fn catalog_statistics() {
    let c = product_catalog().unwrap();
    let s = c.stats();
    assert_eq!(s.distinct, 708);
    assert_eq!(s.within_family_1, 13);
    assert_eq!(s.across_families_1_2, 16);
    assert_eq!(s.other_overlaps, 0);
    assert_eq!(364 + 348 + 25 - 13 - 16, c.len());
    assert!(c.all_nonzero());
    assert!(c.entries.windows(2).all(|w| w[0].product < w[1].product));
}

#[test]
fn shared_product_with_three_producers() {
    let c = product_catalog().unwrap();
    let multi: Vec<_> = c.entries.iter().filter(|e| e.producers.len() > 2).collect();
    assert_eq!(multi.len(), 1);
    assert_eq!(
        multi[0].product,
        "225039733506441216000".parse::<BigInt>().unwrap()
    );
    assert_eq!(multi[0].count(Family::AllRational), 2);
    assert_eq!(multi[0].count(Family::RationalPlusPair), 1);
}

#[test]
fn tsv_layout() {
    let c = product_catalog().unwrap();
    let tsv = c.to_tsv();
    let mut lines = tsv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "product\tn_producers\tfamily_list\tproducer_descriptions"
    );
    assert_eq!(lines.clone().count(), 708);
    assert!(tsv.contains("225039733506441216000\t3\t1,2\t"));
    assert_eq!(c.digest(), product_catalog().unwrap().digest());
}
