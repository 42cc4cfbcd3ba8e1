//! Minimal polynomials by power dependence.
//!
//! For `x = y / D` with `y` integral, the powers `1, y, y², …` are computed
//! exactly and fed to an incremental echelon form modulo large primes. The
//! first power that falls into the span of the earlier ones gives a monic
//! relation. Relations from several primes are glued by CRT until the lift
//! stabilizes, and the lifted relation is then checked exactly against the
//! integer powers. Since the lower powers stayed independent modulo the
//! prime, they are independent over ℚ, so the relation has least degree.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclo::CycloElement;
use super::poly::RatPolynomial;
use crate::arith::modp;

/// Monic minimal polynomial of `x` over ℚ.
pub fn minimal_polynomial(x: &CycloElement) -> RatPolynomial {
    let field = x.field().clone();
    let y: Vec<BigInt> = x.numerators().to_vec();
    let den = x.denominator().clone();

    let mut powers: Vec<Vec<BigInt>> = vec![one_vector(field.degree())];
    let mut lifted: Option<(Vec<BigInt>, BigInt)> = None;
    let mut degree = 0usize;

    for p in modp::primes() {
        let Some(rel) = relation_mod_p(&field, &y, &mut powers, p) else {
            continue;
        };
        let d = rel.len() - 1;
        if d < degree {
            // unlucky prime: spurious dependence among the lower powers
            continue;
        }
        if d > degree {
            degree = d;
            lifted = None;
        }
        let next = match &lifted {
            None => (rel.iter().map(|&r| symmetric(BigInt::from(r), p)).collect(), BigInt::from(p)),
            Some((coeffs, m)) => crt_step(coeffs, m, &rel, p),
        };
        let stable = lifted.as_ref().is_some_and(|(c, _)| *c == next.0);
        lifted = Some(next);
        if stable {
            let coeffs = &lifted.as_ref().unwrap().0;
            if verify_relation(coeffs, &powers) {
                return rescale(coeffs, &den);
            }
        }
    }
    unreachable!("prime supply exhausted")
}

/// `p(x)` computed exactly in the field of `x`.
pub fn evaluate_at(p: &RatPolynomial, x: &CycloElement) -> CycloElement {
    p.coeffs()
        .iter()
        .rev()
        .fold(CycloElement::zero(x.field()), |acc, c| {
            &(&acc * x) + &CycloElement::from_rational(x.field(), c)
        })
}

fn one_vector(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();
    v
}

fn reduce_mod(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn symmetric(r: BigInt, m: u64) -> BigInt {
    let m = BigInt::from(m);
    if &r * 2 > m {
        r - m
    } else {
        r
    }
}

/// Monic relation `y^d + Σ c_i y^i ≡ 0 (mod p)` of least degree, as
/// `[c_0, …, c_{d-1}, 1]`. Extends `powers` with exact powers as needed.
/// Returns `None` if the denominator would not be invertible (never for
/// integral input, kept for safety).
fn relation_mod_p(
    field: &super::cyclo::CyclotomicField,
    y: &[BigInt],
    powers: &mut Vec<Vec<BigInt>>,
    p: u64,
) -> Option<Vec<u64>> {
    // rows: (reduced vector, pivot column, combination of powers)
    let mut rows: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
    for k in 0.. {
        if k >= powers.len() {
            let next = field.mul_raw(&powers[k - 1], y);
            powers.push(next);
        }
        let mut v: Vec<u64> = powers[k].iter().map(|c| reduce_mod(c, p)).collect();
        let mut combo = vec![0u64; k + 1];
        combo[k] = 1;
        for (row, pivot, rc) in &rows {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = modp::sub(*vi, modp::mul(f, *ri, p), p);
            }
            for (ci, ri) in combo.iter_mut().zip(rc) {
                *ci = modp::sub(*ci, modp::mul(f, *ri, p), p);
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => return Some(combo),
            Some(pivot) => {
                let inv = modp::inv(v[pivot], p);
                v.iter_mut().for_each(|c| *c = modp::mul(*c, inv, p));
                combo.iter_mut().for_each(|c| *c = modp::mul(*c, inv, p));
                rows.push((v, pivot, combo));
            }
        }
        if k > field.degree() {
            return None;
        }
    }
    None
}

fn crt_step(coeffs: &[BigInt], m: &BigInt, residues: &[u64], p: u64) -> (Vec<BigInt>, BigInt) {
    let m_mod_p = reduce_mod(m, p);
    let m_inv = modp::inv(m_mod_p, p);
    let new_m = m * p;
    let half = &new_m / 2;
    let out = coeffs
        .iter()
        .zip(residues)
        .map(|(a, &r)| {
            let a_mod = reduce_mod(a, p);
            let t = modp::mul(modp::sub(r, a_mod, p), m_inv, p);
            let mut v = a + m * t;
            v = v.mod_floor(&new_m);
            if v > half {
                v -= &new_m;
            }
            v
        })
        .collect();
    (out, new_m)
}

fn verify_relation(coeffs: &[BigInt], powers: &[Vec<BigInt>]) -> bool {
    let len = powers[0].len();
    (0..len).all(|j| {
        coeffs
            .iter()
            .zip(powers)
            .fold(BigInt::zero(), |acc, (c, pw)| acc + c * &pw[j])
            .is_zero()
    })
}

/// Turns the relation for `y = D·x` into the one for `x`.
fn rescale(coeffs: &[BigInt], den: &BigInt) -> RatPolynomial {
    let d = coeffs.len() - 1;
    let out = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let scale = num_traits::pow(den.clone(), d - k);
            BigRational::new(c.clone(), scale)
        })
        .collect();
    let poly = RatPolynomial::from_coeffs(out);
    debug_assert!(poly.is_monic());
    debug_assert!(den.sign() == Sign::Plus && !den.is_negative());
    poly
}
