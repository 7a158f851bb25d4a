use mtcdef::category::gen_sl2k;
use mtcdef::CycScalar;
use proptest::prelude::*;

fn z(n: u32, e: i64) -> CycScalar {
    CycScalar::root_of_unity(n, e)
}

#[test]
fn roots_of_unity() {
    assert_eq!(&z(4, 1) * &z(4, 1), CycScalar::from_i64(4, -1));
    assert!(z(36, 0).is_one());
    assert_eq!(z(12, 13), z(12, 1));
    assert_eq!(z(12, -1), z(12, 11));
}

#[test]
fn two_cos_pi_over_nine() {
    // x = 2cos(π/9) is a root of x³ − 3x − 1
    let x = &z(36, 2) + &z(36, -2);
    let p = &(&(&x * &x) * &x) - &(&x * &CycScalar::from_i64(36, 3));
    assert_eq!(p, CycScalar::one(36));
    assert!(x.as_rational().is_none());
    assert!((x.to_float().re - 2.0 * (std::f64::consts::PI / 9.0).cos()).abs() < 1e-12);
}

#[test]
fn inverse_round_trip() {
    let x = &CycScalar::one(5) + &z(5, 1);
    let y = x.inv().unwrap();
    assert!((&x * &y).is_one());
    assert!(CycScalar::zero(5).inv().is_err());
}

#[test]
fn float_embedding() {
    let i = z(4, 1).to_float();
    assert!(i.re.abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
    assert_eq!(CycScalar::zero(7).to_float().norm(), 0.0);
    let d1 = gen_sl2k(16).qdim(1).to_float();
    assert!((d1.re - 2.0 * (std::f64::consts::PI / 18.0).cos()).abs() < 1e-9);
    assert!((d1.re - 1.96962).abs() < 1e-5);
}

#[test]
fn mixed_conductors_lift() {
    let s = &z(3, 1) + &z(4, 1);
    assert_eq!(s.conductor() % 12, 0);
    assert_eq!(&s - &z(4, 1), z(3, 1));
}

fn scalar(n: u32, coeffs: &[i64]) -> CycScalar {
    let mut acc = CycScalar::zero(n);
    for (e, &c) in coeffs.iter().enumerate() {
        acc = &acc + &(&z(n, e as i64) * &CycScalar::from_ratio(n, c, 1 + e as i64));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn field_axioms(a in proptest::collection::vec(-5i64..6, 1..8), b in proptest::collection::vec(-5i64..6, 1..8), n in prop::sample::select(vec![5u32, 8, 12, 24, 72])) {
        let x = scalar(n, &a);
        let y = scalar(n, &b);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        let fx = x.to_float();
        let fy = y.to_float();
        prop_assert!(((&x * &y).to_float() - fx * fy).norm() < 1e-6 * (1.0 + fx.norm() * fy.norm()));
    }
}
