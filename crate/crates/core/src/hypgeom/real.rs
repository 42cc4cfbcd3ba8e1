//! Arbitrary-precision reals on top of `astro-float`.
//!
//! A [`BigReal`] carries its stated precision in bits; the underlying value
//! is kept with [`GUARD_BITS`] extra bits so that rounding in long sums stays
//! below the stated precision. Transcendental functions need a constants
//! cache, which lives in a [`RealContext`]; plain arithmetic does not.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use super::GeomError;

pub const DEFAULT_PRECISION: usize = 256;
pub const MIN_PRECISION: usize = 32;
pub const GUARD_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    bits: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        Self { v, bits }
    }

    fn work(&self) -> usize {
        self.bits + GUARD_BITS
    }

    pub fn precision(&self) -> usize {
        self.bits
    }

    pub fn from_i64(k: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(k, bits + GUARD_BITS), bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, bits + GUARD_BITS), bits)
    }

    pub fn from_bigint(k: &BigInt, bits: usize) -> Self {
        let p = bits + GUARD_BITS;
        let mut cc = Consts::new().expect("constants cache");
        Self::wrap(BigFloat::parse(&k.to_string(), Radix::Dec, p, RM, &mut cc), bits)
    }

    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        &Self::from_bigint(q.numer(), bits) / &Self::from_bigint(q.denom(), bits)
    }

    /// Parses a decimal literal such as `"0.862554627"` or `"-1.5e-3"`.
    pub fn parse(s: &str, bits: usize) -> Result<Self, GeomError> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(GeomError::Parse(s.to_string()));
        }
        let mut cc = Consts::new().expect("constants cache");
        let v = BigFloat::parse(t, Radix::Dec, bits + GUARD_BITS, RM, &mut cc);
        if v.is_nan() || v.is_inf() {
            return Err(GeomError::Parse(s.to_string()));
        }
        Ok(Self::wrap(v, bits))
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(bits + GUARD_BITS, RM).expect("precision change");
        Self::wrap(v, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.work(), RM), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.work(), RM), self.bits)
    }

    pub fn powi(&self, k: usize) -> Self {
        Self::wrap(self.v.powi(k, self.work(), RM), self.bits)
    }

    /// Multiplies by `2^k`.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let two = BigFloat::from_i64(2, 64);
        let f = if k >= 0 {
            two.powi(k as usize, self.work(), RM)
        } else {
            two.powi((-k) as usize, self.work(), RM).reciprocal(self.work(), RM)
        };
        Self::wrap(self.v.mul(&f, self.work(), RM), self.bits)
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_i64(&self) -> i64 {
        let half = BigFloat::from_f64(0.5, 64);
        let shifted = if self.v.is_negative() {
            self.v.sub(&half, self.work(), RM)
        } else {
            self.v.add(&half, self.work(), RM)
        };
        let t = shifted.int();
        BigReal::wrap(t, self.bits).to_f64() as i64
    }

    pub fn to_f64(&self) -> f64 {
        let (neg, digits, exp) = self.decimal_parts();
        if digits.is_empty() {
            return 0.0;
        }
        let s = format!("{}0.{}e{}", if neg { "-" } else { "" }, digits, exp + 1);
        s.parse().unwrap_or(f64::NAN)
    }

    /// `(negative, significant digits, decimal exponent)` with value
    /// `±d.ddd × 10^exp`. Zero gives an empty digit string.
    fn decimal_parts(&self) -> (bool, String, i64) {
        let mut cc = Consts::new().expect("constants cache");
        let s = self
            .v
            .format(Radix::Dec, RM, &mut cc)
            .expect("finite value formats");
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let (mant, exp) = match s.split_once('e') {
            Some((m, e)) => (m.to_string(), e.parse::<i64>().expect("exponent")),
            None => (s.clone(), 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((&mant, ""));
        let mut digits = format!("{int_part}{frac_part}");
        let mut exp = exp + int_part.len() as i64 - 1;
        // normalise leading zeros
        let lead = digits.chars().take_while(|&c| c == '0').count();
        if lead == digits.len() {
            return (false, String::new(), 0);
        }
        digits.drain(..lead);
        exp -= lead as i64;
        (neg, digits.trim_end_matches('0').to_string(), exp)
    }

    /// Decimal rendering with `sig` significant digits (rounded half up),
    /// fixed-point for moderate exponents and `d.ddde±x` otherwise.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        let (neg, digits, mut exp) = self.decimal_parts();
        if digits.is_empty() {
            return "0".into();
        }
        let mut d: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
        if d.len() > sig {
            let round_up = d[sig] >= 5;
            d.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        d.insert(0, 1);
                        d.truncate(sig);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if d[i] == 9 {
                        d[i] = 0;
                    } else {
                        d[i] += 1;
                        break;
                    }
                }
            }
        }
        d.resize(sig, 0);
        let ds: String = d.iter().map(|x| (x + b'0') as char).collect();
        let sign = if neg { "-" } else { "" };
        if (-6..21).contains(&exp) {
            if exp < 0 {
                format!("{sign}0.{}{}", "0".repeat((-exp - 1) as usize), ds)
            } else {
                let e = exp as usize;
                if e + 1 >= ds.len() {
                    format!("{sign}{}{}", ds, "0".repeat(e + 1 - ds.len()))
                } else {
                    format!("{sign}{}.{}", &ds[..=e], &ds[e + 1..])
                }
            }
        } else if ds.len() == 1 {
            format!("{sign}{ds}e{exp}")
        } else {
            format!("{sign}{}.{}e{exp}", &ds[..1], &ds[1..])
        }
    }

    /// Number of decimal digits supported by the stated precision.
    pub fn decimal_digits(&self) -> usize {
        decimal_digits(self.bits)
    }
}

/// `⌊bits · log₁₀ 2⌋`.
pub fn decimal_digits(bits: usize) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_decimal(30), self.bits)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.decimal_digits()))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let bits = self.bits.min(rhs.bits);
                BigReal::wrap(self.v.$method(&rhs.v, bits + GUARD_BITS, RM), bits)
            }
        }

        impl $trait for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.bits)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

/// A complex number as a pair of [`BigReal`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().min(self.im.precision())
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `|self − other|`.
    pub fn distance(&self, other: &Self) -> BigReal {
        (self - other).abs()
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        BigComplex::new(&num.re / &d, &num.im / &d)
    }
}

/// Precision plus the constants cache needed by transcendental functions.
///
/// Not shared between threads; build one per worker.
pub struct RealContext {
    bits: usize,
    cc: Consts,
    pi: BigReal,
}

impl fmt::Debug for RealContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealContext").field("bits", &self.bits).finish()
    }
}

impl RealContext {
    pub fn new(bits: usize) -> Result<Self, GeomError> {
        if bits < MIN_PRECISION {
            return Err(GeomError::PrecisionTooLow(bits));
        }
        let mut cc = Consts::new().map_err(|e| GeomError::Numeric(format!("{e:?}")))?;
        let pi = BigReal::wrap(cc.pi(bits + GUARD_BITS, RM), bits);
        Ok(Self { bits, cc, pi })
    }

    pub fn precision(&self) -> usize {
        self.bits
    }

    fn p(&self) -> usize {
        self.bits + GUARD_BITS
    }

    pub fn int(&self, k: i64) -> BigReal {
        BigReal::from_i64(k, self.bits)
    }

    pub fn ratio(&self, a: i64, b: i64) -> BigReal {
        &self.int(a) / &self.int(b)
    }

    pub fn rational(&self, q: &BigRational) -> BigReal {
        BigReal::from_rational(q, self.bits)
    }

    pub fn parse(&self, s: &str) -> Result<BigReal, GeomError> {
        BigReal::parse(s, self.bits)
    }

    pub fn pi(&self) -> BigReal {
        self.pi.clone()
    }

    /// `π·a/b`.
    pub fn pi_ratio(&self, a: i64, b: i64) -> BigReal {
        &(&self.pi * &self.int(a)) / &self.int(b)
    }

    pub fn sin(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.sin(self.p(), RM, &mut self.cc), self.bits)
    }

    pub fn cos(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.cos(self.p(), RM, &mut self.cc), self.bits)
    }

    pub fn tan(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.tan(self.p(), RM, &mut self.cc), self.bits)
    }

    /// Natural logarithm; `Err` for non-positive input.
    pub fn ln(&mut self, x: &BigReal) -> Result<BigReal, GeomError> {
        if !x.is_positive() {
            return Err(GeomError::Numeric(format!("ln of non-positive value {x:?}")));
        }
        Ok(BigReal::wrap(x.v.ln(self.p(), RM, &mut self.cc), self.bits))
    }

    pub fn exp(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.exp(self.p(), RM, &mut self.cc), self.bits)
    }

    pub fn sinh(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.sinh(self.p(), RM, &mut self.cc), self.bits)
    }

    pub fn cosh(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.v.cosh(self.p(), RM, &mut self.cc), self.bits)
    }

    /// `2^{-k}` at context precision, handy for tolerances.
    pub fn pow2(&self, k: i32) -> BigReal {
        self.int(1).mul_pow2(k)
    }

    /// `10^{-k}` at context precision.
    pub fn ten_pow_neg(&self, k: usize) -> BigReal {
        self.int(10).powi(k).recip()
    }
}
