use moduli::arith::ComplexBall;
use moduli::bounds::{fourier_window_ball, min_abs_lower_ball};
use moduli::jfunc::eval_j;
use moduli::poly::{product_polynomial, IntPoly};
use moduli::quadforms::{reduced_forms, ClassNumberTable, Discriminant};
use proptest::prelude::*;

fn inflated(b: &ComplexBall) -> ComplexBall {
    let mut w = b.clone();
    w.add_error(b.rad);
    w
}

fn discriminant(max: i64) -> impl Strategy<Value = Discriminant> {
    (3..=max).prop_filter_map("not a discriminant", |n| Discriminant::new(-n).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_polynomial_roots(a in prop::collection::vec(-6i64..=6, 1..4), b in prop::collection::vec(-6i64..=6, 1..4)) {
        let products: Vec<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        let got = product_polynomial(&IntPoly::from_roots(&a), &IntPoly::from_roots(&b));
        prop_assert_eq!(got, IntPoly::from_roots(&products));
    }

    #[test]
    fn decomposition(d in discriminant(100_000)) {
        let f = d.fundamental();
        prop_assert_eq!(d.value(), f * (d.conductor() * d.conductor()) as i64);
        prop_assert!(moduli::quadforms::is_fundamental(f));
    }

    #[test]
    fn forms_are_reduced(d in discriminant(20_000)) {
        let forms = reduced_forms(d);
        prop_assert_eq!(forms[0].a, 1);
        for f in &forms {
            prop_assert!(f.is_reduced());
            prop_assert_eq!(f.discriminant(), d.value());
        }
    }

    #[test]
    fn precision_doubling(d in discriminant(2000), i in 0usize..64) {
        let forms = reduced_forms(d);
        let f = forms[i % forms.len()];
        let lo = eval_j(&f, d, 128).unwrap();
        let hi = eval_j(&f, d, 256).unwrap();
        prop_assert!(!lo.is_disjoint(&hi));
        prop_assert!(inflated(&lo).contains(&hi));
    }

    #[test]
    fn values_respect_bounds(d in discriminant(2000), i in 0usize..64) {
        let forms = reduced_forms(d);
        let f = forms[i % forms.len()];
        let v = eval_j(&f, d, 192).unwrap();
        let (wlo, whi) = fourier_window_ball(d.abs(), f.a as u64, 64);
        prop_assert!(v.mag_down().to_f64() <= whi.bounds_f64().1);
        prop_assert!(v.mag_up().to_f64() >= wlo.bounds_f64().0);
        if d.value() != -3 {
            prop_assert!(v.mag_up().to_f64() >= min_abs_lower_ball(d.abs(), 64).bounds_f64().0);
        }
    }
}

#[test]
fn scan_matches_enumeration() {
    let scan = ClassNumberTable::scan(3000);
    for (d, h) in scan.iter() {
        assert_eq!(reduced_forms(d).len() as u32, h, "{d}");
    }
}
