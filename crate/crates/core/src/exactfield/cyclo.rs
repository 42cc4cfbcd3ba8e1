use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::RatPolynomial;
use super::rational::{content_gcd, lcm_denominators, serde_rational_vec};
use super::FieldError;
use crate::arith::{divisors, euler_totient, mobius};

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree
/// first, from the Möbius product `Φ_n = Π_{d|n} (x^d - 1)^{μ(n/d)}`.
pub(crate) fn cyclotomic_coeffs(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let divs = divisors(n);
    let mut poly = vec![BigInt::one()];
    for &d in &divs {
        if mobius(n / d) == 1 {
            // multiply by (x^d - 1)
            let d = d as usize;
            let mut next = vec![BigInt::zero(); poly.len() + d];
            for (i, c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            // exact division by (x^d - 1): q[i] = q[i-d] - p[i]
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![BigInt::zero(); qlen];
            for i in 0..qlen {
                let prev = if i >= d { q[i - d].clone() } else { BigInt::zero() };
                q[i] = prev - &poly[i];
            }
            poly = q;
        }
    }
    poly
}

/// The cyclotomic polynomial `Φ_n` as a monic integer polynomial.
pub fn cyclotomic_polynomial(n: u64) -> RatPolynomial {
    RatPolynomial::from_integers(cyclotomic_coeffs(n))
}

/// The field `ℚ(ζ_N)` with the power basis `1, ζ, …, ζ^{φ(N)-1}`.
///
/// Holds the reduction data for `Φ_N`; elements share it through an `Arc`.
#[derive(Debug)]
pub struct CyclotomicField {
    modulus: u64,
    degree: usize,
    /// Nonzero non-leading terms `(j, c_j)` of `Φ_N`.
    phi_low: Vec<(usize, BigInt)>,
}

impl CyclotomicField {
    pub fn new(modulus: u64) -> Result<Arc<Self>, FieldError> {
        if modulus == 0 {
            return Err(FieldError::InvalidModulus(modulus));
        }
        let coeffs = cyclotomic_coeffs(modulus);
        let degree = coeffs.len() - 1;
        debug_assert_eq!(degree as u64, euler_totient(modulus));
        let phi_low = coeffs[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        Ok(Arc::new(Self {
            modulus,
            degree,
            phi_low,
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(N)`, the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn defining_polynomial(&self) -> RatPolynomial {
        cyclotomic_polynomial(self.modulus)
    }

    /// Reduces a cyclic buffer (exponents taken mod N) modulo `Φ_N`.
    pub(crate) fn reduce(&self, mut buf: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.modulus as usize;
        debug_assert_eq!(buf.len(), n);
        let deg = self.degree;
        for k in (deg..n).rev() {
            let c = std::mem::take(&mut buf[k]);
            if c.is_zero() {
                continue;
            }
            let base = k - deg;
            for (j, pj) in &self.phi_low {
                buf[base + j] -= &c * pj;
            }
        }
        buf.truncate(deg);
        buf
    }

    pub(crate) fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.modulus as usize;
        let mut buf = vec![BigInt::zero(); n];
        let b_nz: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for &(j, bj) in &b_nz {
                let k = (i + j) % n;
                buf[k] += ai * bj;
            }
        }
        self.reduce(buf)
    }
}

/// An element of `ℚ(ζ_N)`, stored canonically as an integer coordinate
/// vector over a positive common denominator with no common factor.
#[derive(Clone)]
pub struct CycloElement {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElement {
    fn from_parts(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree);
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        let g = content_gcd(&num).gcd(&den);
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        Self { field, num, den }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, &BigRational::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, k: i64) -> Self {
        Self::from_rational(field, &BigRational::from_integer(BigInt::from(k)))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, k: i64) -> Self {
        Self::from_exponents(field, &[(k, BigRational::one())])
    }

    /// `Σ c · ζ_N^k` over the given `(k, c)` terms, reduced modulo `Φ_N`.
    pub fn from_exponents(field: &Arc<CyclotomicField>, terms: &[(i64, BigRational)]) -> Self {
        let n = field.modulus as i64;
        let den = lcm_denominators(terms.iter().map(|(_, c)| c));
        let mut buf = vec![BigInt::zero(); n as usize];
        for (k, c) in terms {
            let scaled = (c * BigRational::from_integer(den.clone())).to_integer();
            buf[k.rem_euclid(n) as usize] += scaled;
        }
        Self::from_parts(field.clone(), field.reduce(buf), den)
    }

    /// Builds an element from a power-basis coefficient vector of length `φ(N)`.
    pub fn from_coefficients(
        field: &Arc<CyclotomicField>,
        coeffs: &[BigRational],
    ) -> Result<Self, FieldError> {
        if coeffs.len() != field.degree {
            return Err(FieldError::Parse(format!(
                "expected {} coefficients for modulus {}, got {}",
                field.degree,
                field.modulus,
                coeffs.len()
            )));
        }
        let den = lcm_denominators(coeffs);
        let num = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        Ok(Self::from_parts(field.clone(), num, den))
    }

    /// Interprets a rational polynomial in `ζ_N`, reducing modulo `Φ_N`.
    pub fn from_polynomial(field: &Arc<CyclotomicField>, p: &RatPolynomial) -> Self {
        let terms: Vec<(i64, BigRational)> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect();
        Self::from_exponents(field, &terms)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus
    }

    /// Power-basis coefficients, length `φ(N)`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub(crate) fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub(crate) fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn to_polynomial(&self) -> RatPolynomial {
        RatPolynomial::from_coeffs(self.coefficients())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// `Some(q)` when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.modulus != other.field.modulus {
            Err(FieldError::ModulusMismatch {
                left: self.field.modulus,
                right: other.field.modulus,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        let num = self.field.mul_raw(&self.num, &other.num);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.inverse()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm of the
    /// representative polynomial against `Φ_N`.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &q.recip()));
        }
        // Work with the integral numerator; rescale by the denominator at the end.
        let rep = RatPolynomial::from_integers(self.num.clone());
        let phi = self.field.defining_polynomial();
        let (g, s, _) = RatPolynomial::ext_gcd(&rep, &phi);
        debug_assert!(g.degree() == Some(0), "Φ_N is irreducible");
        let inv_num = Self::from_polynomial(&self.field, &s);
        Ok(inv_num.scale(&BigRational::from_integer(self.den.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Galois automorphism `σ_a : ζ ↦ ζ^a`, for `a` coprime to `N`.
    pub fn galois(&self, a: i64) -> Result<Self, FieldError> {
        let n = self.field.modulus;
        let a = a.rem_euclid(n as i64) as u64;
        if crate::arith::gcd(a, n) != 1 && n != 1 {
            return Err(FieldError::NotCoprime { a, modulus: n });
        }
        let nu = n as usize;
        let mut buf = vec![BigInt::zero(); nu];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                let k = ((i as u128 * a as u128) % n as u128) as usize;
                buf[k] += c;
            }
        }
        Ok(Self::from_parts(
            self.field.clone(),
            self.field.reduce(buf),
            self.den.clone(),
        ))
    }

    /// Complex conjugate, i.e. `σ_{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Re-expresses the element in `ℚ(ζ_L)` where `N | L`, via `ζ_N = ζ_L^{L/N}`.
    pub fn embed(&self, level: u64) -> Result<Self, FieldError> {
        let n = self.field.modulus;
        if level == 0 || level % n != 0 {
            return Err(FieldError::NotMultiple {
                level,
                modulus: n,
            });
        }
        if level == n {
            return Ok(self.clone());
        }
        let target = CyclotomicField::new(level)?;
        let step = level / n;
        let mut buf = vec![BigInt::zero(); level as usize];
        for (i, c) in self.num.iter().enumerate() {
            buf[(i as u64 * step) as usize] += c;
        }
        let num = target.reduce(buf);
        Ok(Self::from_parts(target, num, self.den.clone()))
    }

    /// Evaluates under the embedding `ζ_N ↦ exp(2πi/N)` in double precision.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let n = self.field.modulus as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = std::f64::consts::TAU * k as f64 / n;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.modulus == other.field.modulus && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloElement {}

impl Hash for CycloElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.modulus.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement(N={}, {})", self.field.modulus, self)
    }
}

impl fmt::Display for CycloElement {
    /// Written as a polynomial in `z = ζ_N`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial().render("z"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live in different cyclotomic fields;
        /// use the `try_` method to get an error instead.
        impl $trait for &CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                self.$checked(rhs).expect("operands must share a modulus")
            }
        }

        impl $trait for CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: CycloElement) -> CycloElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        -&self
    }
}

/// `ζ_N^k` in a freshly built `ℚ(ζ_N)`.
pub fn root_of_unity(modulus: u64, k: i64) -> Result<CycloElement, FieldError> {
    let field = CyclotomicField::new(modulus)?;
    Ok(CycloElement::root_of_unity(&field, k))
}

/// JSON form: `{"modulus": N, "coefficients": ["p/q", ...]}`.
#[derive(Serialize, Deserialize)]
struct CycloElementRepr {
    modulus: u64,
    #[serde(with = "serde_rational_vec")]
    coefficients: Vec<BigRational>,
}

impl Serialize for CycloElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloElementRepr {
            modulus: self.modulus(),
            coefficients: self.coefficients(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycloElementRepr::deserialize(d)?;
        let field = CyclotomicField::new(repr.modulus).map_err(serde::de::Error::custom)?;
        CycloElement::from_coefficients(&field, &repr.coefficients).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};

    fn field(n: u64) -> Arc<CyclotomicField> {
        CyclotomicField::new(n).unwrap()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), RatPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), RatPolynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), RatPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            RatPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
        // Φ_105 is the first with a coefficient of absolute value 2.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.degree(), Some(48));
        assert!(p105.coeffs().iter().any(|c| *c == int(-2)));
    }

    #[test]
    fn roots_of_unity() {
        let i = root_of_unity(4, 1).unwrap();
        assert_eq!(i.coefficients(), vec![int(0), int(1)]);
        assert_eq!(&i * &i, CycloElement::from_integer(i.field(), -1));
        let f12 = field(12);
        assert!(CycloElement::root_of_unity(&f12, 12).is_one());
        assert!(CycloElement::root_of_unity(&f12, 0).is_one());
        assert_eq!(
            CycloElement::root_of_unity(&f12, -1),
            CycloElement::root_of_unity(&f12, 11)
        );
    }

    #[test]
    fn level_raising_matches_root() {
        let i4 = root_of_unity(4, 1).unwrap();
        let z12_3 = root_of_unity(12, 3).unwrap();
        assert_eq!(i4.embed(12).unwrap(), z12_3);
        // ζ₁₂³ squares to -1 exactly.
        let sq = &z12_3 * &z12_3;
        assert_eq!(sq.as_rational(), Some(int(-1)));
        assert!(i4.embed(6).is_err());
    }

    #[test]
    fn square_of_real_part() {
        let f = field(12);
        let z = CycloElement::root_of_unity(&f, 1);
        let zi = CycloElement::root_of_unity(&f, -1);
        let s = &z + &zi;
        let lhs = &s * &s;
        let rhs = &(&CycloElement::root_of_unity(&f, 2) + &CycloElement::from_integer(&f, 2))
            + &CycloElement::root_of_unity(&f, -2);
        assert_eq!(lhs, rhs);
        // 2cos(π/6) = √3
        assert_eq!(lhs.as_rational(), Some(int(3)));
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let f = field(15);
        let x = CycloElement::from_exponents(&f, &[(0, rat(1, 2)), (1, int(3)), (4, rat(-2, 7))]);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(
            CycloElement::zero(&f).inverse().unwrap_err(),
            FieldError::DivisionByZero
        );
    }

    #[test]
    fn galois_action() {
        let f = field(12);
        let z = CycloElement::root_of_unity(&f, 1);
        assert_eq!(z.galois(5).unwrap(), CycloElement::root_of_unity(&f, 5));
        assert_eq!(z.galois(1).unwrap(), z);
        assert!(matches!(z.galois(3), Err(FieldError::NotCoprime { .. })));
        // σ₅ fixes ζ⁴ + ζ⁻⁴ = 2cos(2π/3) = -1
        let w = &CycloElement::root_of_unity(&f, 4) + &CycloElement::root_of_unity(&f, -4);
        assert_eq!(w.galois(5).unwrap(), w);
        assert_eq!(w.as_rational(), Some(int(-1)));
    }

    #[test]
    fn mismatched_moduli_error() {
        let a = root_of_unity(5, 1).unwrap();
        let b = root_of_unity(7, 1).unwrap();
        assert!(matches!(a.try_add(&b), Err(FieldError::ModulusMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = field(8);
        let x = CycloElement::from_exponents(&f, &[(1, rat(1, 3)), (3, int(-1))]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"modulus":8,"coefficients":["0","1/3","0","-1"]}"#);
        let back: CycloElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycloElement>(r#"{"modulus":8,"coefficients":["1"]}"#).is_err());
    }

    #[test]
    fn numeric_embedding() {
        let x = root_of_unity(8, 1).unwrap();
        let (re, im) = (&x + &x.conjugate()).to_complex_f64();
        assert!((re - 2f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
    }
}
