use dwarith::{Cyclotomic64, CyclotomicValue};
use num_bigint::BigInt;
use proptest::prelude::*;

fn value(modulus: u32) -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-20i64..20, modulus as usize), 1i64..6)
}

fn big(modulus: u32, (coeffs, den): &(Vec<i64>, i64)) -> CyclotomicValue {
    CyclotomicValue::new(modulus, coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
}

fn small(modulus: u32, (coeffs, den): &(Vec<i64>, i64)) -> Cyclotomic64 {
    Cyclotomic64::new(modulus, coeffs.clone(), *den)
}

#[test]
fn fourth_roots() {
    let zeta = CyclotomicValue::zeta_pow(4, 1);
    let one = CyclotomicValue::one(4);
    assert_eq!(&zeta * &zeta, CyclotomicValue::from_int(4, -1));
    assert_eq!(&(&one + &zeta) * &(&one - &zeta), CyclotomicValue::from_int(4, 2));
    let sum = (0..4).fold(CyclotomicValue::zero(4), |acc, k| &acc + &CyclotomicValue::zeta_pow(4, k));
    assert!(sum.is_zero());
    for n in 2..=12 {
        assert_eq!(CyclotomicValue::zeta_pow(n, n as i64), CyclotomicValue::one(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(n in 2u32..13, a in value(12), b in value(12), c in value(12)) {
        let (a, b, c) = (big(n, &trim(&a, n)), big(n, &trim(&b, n)), big(n, &trim(&c, n)));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &CyclotomicValue::one(n), a.clone());
    }

    #[test]
    fn canonical_forms_are_unique(n in 2u32..13, a in value(12), shift in -30i64..30) {
        // Multiplying by ζ^k and back is the identity on canonical forms.
        let a = big(n, &trim(&a, n));
        prop_assert_eq!(a.mul_zeta_pow(shift).mul_zeta_pow(-shift), a.clone());
        prop_assert_eq!(a.mul_zeta_pow(shift), &a * &CyclotomicValue::zeta_pow(n, shift));
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn machine_and_big_integers_agree(n in 2u32..13, a in value(12), b in value(12)) {
        let (a, b) = (trim(&a, n), trim(&b, n));
        let (ba, bb) = (big(n, &a), big(n, &b));
        let (sa, sb) = (small(n, &a), small(n, &b));
        let as_big = |v: &Cyclotomic64| -> CyclotomicValue {
            CyclotomicValue::new(n, v.coeffs().iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*v.den()))
        };
        prop_assert_eq!(as_big(&(&sa + &sb)), &ba + &bb);
        prop_assert_eq!(as_big(&(&sa * &sb)), &ba * &bb);
    }
}

fn trim((coeffs, den): &(Vec<i64>, i64), n: u32) -> (Vec<i64>, i64) {
    (coeffs[..n as usize].to_vec(), *den)
}
