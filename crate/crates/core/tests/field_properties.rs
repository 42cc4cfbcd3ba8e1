mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use pretzel_fal::arith::divisors;
use pretzel_fal::exactfield::{
    cyclotomic_polynomial, evaluate_at, galois_apply, minimal_polynomial, stabilizer,
    CycloElement, CyclotomicField, RatPolynomial,
};
use pretzel_fal::tracefield::{
    build_trace_field, fields_equal, fields_equal_by_embedding, twisted_shape,
};
use proptest::prelude::*;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn element(field: &Arc<CyclotomicField>, terms: &[(i64, i64, i64)]) -> CycloElement {
    let terms: Vec<_> = terms.iter().map(|&(e, a, b)| (e, q(a, b))).collect();
    CycloElement::from_exponents(field, &terms)
}

fn modulus() -> impl Strategy<Value = u64> {
    prop_oneof![3u64..=24, Just(30), Just(36), Just(40)]
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-50i64..50, -9i64..10, 1i64..6), 1..5)
}

/// `x^N − 1` divided by the product of `Φ_d` over proper divisors `d`,
/// computed without the library's cyclotomic routine.
fn cyclotomic_oracle(n: u64, memo: &mut Vec<Option<RatPolynomial>>) -> RatPolynomial {
    if let Some(p) = &memo[n as usize] {
        return p.clone();
    }
    let mut num = RatPolynomial::monomial(q(1, 1), n as usize);
    num = &num - &RatPolynomial::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_oracle(d, memo);
            let (quot, rem) = num.div_rem(&phi_d).unwrap();
            assert!(rem.is_zero());
            num = quot;
        }
    }
    memo[n as usize] = Some(num.clone());
    num
}

#[test]
fn cyclotomic_products_and_degrees() {
    const MAX: u64 = 400;
    let mut memo = vec![None; MAX as usize + 1];
    for n in 1..=MAX {
        let phi = cyclotomic_polynomial(n);
        assert_eq!(phi.degree(), Some(common::totient_brute(n) as usize), "N = {n}");
        assert!(phi.is_monic() && phi.has_integer_coeffs());
        assert_eq!(phi, cyclotomic_oracle(n, &mut memo), "N = {n}");
        let mut prod = RatPolynomial::one();
        for d in divisors(n) {
            prod = &prod * &cyclotomic_polynomial(d);
        }
        let target = &RatPolynomial::monomial(q(1, 1), n as usize) - &RatPolynomial::one();
        assert_eq!(prod, target, "N = {n}");
    }
}

#[test]
fn spot_values() {
    assert_eq!(cyclotomic_polynomial(1), RatPolynomial::from_i64(&[-1, 1]));
    assert_eq!(cyclotomic_polynomial(4), RatPolynomial::from_i64(&[1, 0, 1]));
    assert_eq!(cyclotomic_polynomial(12), RatPolynomial::from_i64(&[1, 0, -1, 0, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiply_then_divide(n in modulus(), a in terms(), b in terms()) {
        let f = CyclotomicField::new(n).unwrap();
        let x = element(&f, &a);
        let y = element(&f, &b);
        prop_assume!(!y.is_zero());
        let back = x.try_mul(&y).unwrap().try_mul(&y.inverse().unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn galois_action_composes(n in modulus(), t in terms(), s in any::<prop::sample::Index>(), r in any::<prop::sample::Index>()) {
        let units: Vec<u64> = (1..n).filter(|&a| common::gcd(a, n) == 1).collect();
        let (a, b) = (units[s.index(units.len())], units[r.index(units.len())]);
        let f = CyclotomicField::new(n).unwrap();
        let x = element(&f, &t);
        let two_step = galois_apply(a as i64, &galois_apply(b as i64, &x).unwrap()).unwrap();
        let one_step = galois_apply((a * b % n) as i64, &x).unwrap();
        prop_assert_eq!(two_step, one_step);
    }

    #[test]
    fn minimal_polynomial_properties(n in modulus(), t in terms()) {
        let f = CyclotomicField::new(n).unwrap();
        let x = element(&f, &t);
        let p = minimal_polynomial(&x);
        prop_assert!(p.is_monic());
        prop_assert!(evaluate_at(&p, &x).is_zero());
        let stab = stabilizer(&x);
        prop_assert_eq!(
            stab.order() * p.degree().unwrap(),
            common::totient_brute(n) as usize
        );
        for a in (1..n).filter(|&a| common::gcd(a, n) == 1) {
            let y = galois_apply(a as i64, &x).unwrap();
            prop_assert_eq!(&minimal_polynomial(&y), &p);
            prop_assert_eq!(stab.contains(a), y == x);
        }
    }

    #[test]
    fn conjugate_minpoly_in_big_fields(n in prop_oneof![Just(60u64), Just(84), Just(120)], t in terms(), s in any::<prop::sample::Index>()) {
        let f = CyclotomicField::new(n).unwrap();
        let x = element(&f, &t);
        let units: Vec<u64> = (1..n).filter(|&a| common::gcd(a, n) == 1).collect();
        let a = units[s.index(units.len())];
        let y = galois_apply(a as i64, &x).unwrap();
        prop_assert_eq!(minimal_polynomial(&y), minimal_polynomial(&x));
    }

    #[test]
    fn twisted_shapes_are_in_the_field(n in 3u64..=80) {
        let d = build_trace_field(n).unwrap();
        for positive in [true, false] {
            prop_assert!(d.contains(&twisted_shape(n, positive).unwrap()).unwrap());
        }
    }

    #[test]
    fn field_equality_is_an_equivalence(a in 3u64..=60, b in 3u64..=60, c in 3u64..=60) {
        let eq = |x, y| fields_equal(x, y).unwrap();
        prop_assert!(eq(a, a));
        prop_assert_eq!(eq(a, b), eq(b, a));
        if eq(a, b) && eq(b, c) {
            prop_assert!(eq(a, c));
        }
        prop_assert_eq!(eq(a, b), common::numeric_same_field(a, b));
    }
}

#[test]
fn stabilizer_shortcut_matches_literal_embedding() {
    for m in 3..=12 {
        for n in m..=12 {
            assert_eq!(
                fields_equal(m, n).unwrap(),
                fields_equal_by_embedding(m, n).unwrap(),
                "({m}, {n})"
            );
        }
    }
}
