//! Closed-form geometry of `M_n`: packing radii, tile and cusp shapes,
//! geodesic lengths, Lobachevsky volumes, and the exact Gram entry used in
//! the Vinberg test.

mod lobachevsky;
mod real;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use lobachevsky::{series_terms, tangent_numbers, truncation_bound, Lobachevsky};
pub use real::{
    decimal_digits, BigComplex, BigReal, RealContext, DEFAULT_PRECISION, GUARD_BITS,
    MIN_PRECISION,
};

use crate::exactfield::{
    format_rational, minimal_polynomial, CycloElement, CyclotomicField, FieldError, RatPolynomial,
};
use crate::tracefield::{cusp_generator, twisted_shape, TraceFieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("precision of {0} bits is below the minimum of 32")]
    PrecisionTooLow(usize),
    #[error("n = {0} is not allowed: the pretzel link needs n >= 3 to be hyperbolic")]
    NotHyperbolic(u64),
    #[error("unknown cusp kind {0:?} (expected untwisted, twisted+, twisted- or knot-circle)")]
    InvalidKind(String),
    #[error("not a decimal number: {0:?}")]
    Parse(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<TraceFieldError> for GeomError {
    fn from(e: TraceFieldError) -> Self {
        match e {
            TraceFieldError::NotHyperbolic(n) => GeomError::NotHyperbolic(n),
            TraceFieldError::Field(f) => GeomError::Field(f),
            other => GeomError::Numeric(other.to_string()),
        }
    }
}

fn check_n(n: u64) -> Result<(), GeomError> {
    if n < 3 {
        Err(GeomError::NotHyperbolic(n))
    } else {
        Ok(())
    }
}

/// Circle-packing radii for the polyhedral decomposition of `M_n`.
#[derive(Clone, Debug)]
pub struct PackingData {
    pub n: u64,
    /// `csc(π/n) + 1`
    pub white_outer: BigReal,
    /// `csc(π/n) − 1`
    pub white_inner: BigReal,
    pub unit_circles: u64,
    /// `r = tanθ(cscθ − 1)`
    pub shaded_small: BigReal,
    /// `R = tanθ(cscθ + 1)`
    pub shaded_large: BigReal,
    /// `|1/(2r) + 1/(2R) − secθ|`
    pub sec_residual: BigReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspKind {
    Untwisted,
    Twisted { positive: bool },
    KnotCircle,
}

impl FromStr for CuspKind {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self, GeomError> {
        match s {
            "untwisted" => Ok(CuspKind::Untwisted),
            "twisted+" => Ok(CuspKind::Twisted { positive: true }),
            "twisted-" => Ok(CuspKind::Twisted { positive: false }),
            "knot-circle" => Ok(CuspKind::KnotCircle),
            other => Err(GeomError::InvalidKind(other.to_string())),
        }
    }
}

impl fmt::Display for CuspKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CuspKind::Untwisted => "untwisted",
            CuspKind::Twisted { positive: true } => "twisted+",
            CuspKind::Twisted { positive: false } => "twisted-",
            CuspKind::KnotCircle => "knot-circle",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CuspShapeValue {
    pub n: u64,
    pub kind: CuspKind,
    /// Exact shape in `ℚ(ζ_N)`; absent for knot-circle cusps.
    pub exact: Option<CycloElement>,
    pub numeric: Option<BigComplex>,
    /// Knot-circle cusps only: the meridian has length exactly 2 and the
    /// longitude at least `2n`.
    pub meridian_length: Option<u64>,
    pub longitude_lower_bound: Option<u64>,
}

/// The exact entry `−2cosh ℓ(γ⁺) = −2(1+s)/(1−s)`, `s = sin²(π/n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GramEntry {
    Rational(BigRational),
    Cyclotomic(CycloElement),
}

impl GramEntry {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            GramEntry::Rational(q) => Some(q),
            GramEntry::Cyclotomic(_) => None,
        }
    }

    /// `"-10/3"` for rational entries, otherwise a polynomial in `z = ζ_n`.
    pub fn render(&self) -> String {
        match self {
            GramEntry::Rational(q) => format_rational(q),
            GramEntry::Cyclotomic(x) => x.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeodesicData {
    pub n: u64,
    /// `ℓ(γ⁺) = ln((cscθ+1)/(cscθ−1))`
    pub perpendicular_length: BigReal,
    /// `ℓ(γ) = 2ℓ(γ⁺)`
    pub closed_length: BigReal,
    pub gram_entry: GramEntry,
    /// `−2cosh ℓ(γ⁺)` evaluated numerically.
    pub gram_numeric: BigReal,
}

#[derive(Clone, Debug)]
pub struct VinbergResult {
    pub integral: bool,
    pub entry: GramEntry,
    /// Minimal polynomial of the entry.
    pub witness: RatPolynomial,
}

/// `sin²(π/n) = (2 − ζ_{2n}^2 − ζ_{2n}^{-2})/4` in `ℚ(ζ_n)`.
pub fn sin_squared_exact(n: u64) -> Result<CycloElement, GeomError> {
    check_n(n)?;
    let field = CyclotomicField::new(n)?;
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok(CycloElement::from_exponents(
        &field,
        &[(0, q(1, 2)), (1, q(-1, 4)), (-1, q(-1, 4))],
    ))
}

pub fn gram_entry_exact(n: u64) -> Result<GramEntry, GeomError> {
    let s = sin_squared_exact(n)?;
    let one = CycloElement::one(s.field());
    let num = (&one + &s).scale(&BigRational::from_integer(BigInt::from(-2)));
    let entry = num.try_div(&(&one - &s))?;
    Ok(match entry.as_rational() {
        Some(q) => GramEntry::Rational(q),
        None => GramEntry::Cyclotomic(entry),
    })
}

/// The Vinberg integrality test: the entry is an algebraic integer iff its
/// minimal polynomial has integer coefficients.
pub fn vinberg_entry_is_integral(n: u64) -> Result<VinbergResult, GeomError> {
    let entry = gram_entry_exact(n)?;
    let elem = match &entry {
        GramEntry::Rational(q) => {
            let f = CyclotomicField::new(1)?;
            CycloElement::from_rational(&f, q)
        }
        GramEntry::Cyclotomic(x) => x.clone(),
    };
    let witness = minimal_polynomial(&elem);
    Ok(VinbergResult {
        integral: witness.has_integer_coeffs(),
        entry,
        witness,
    })
}

/// Lobachevsky evaluator plus the formulas built on it.
///
/// Methods take `&mut self` because transcendental functions share one
/// constants cache; build one `Geometry` per thread.
#[derive(Debug)]
pub struct Geometry {
    lob: Lobachevsky,
}

impl Geometry {
    pub fn new(bits: usize) -> Result<Self, GeomError> {
        Ok(Self {
            lob: Lobachevsky::new(RealContext::new(bits)?),
        })
    }

    pub fn precision(&self) -> usize {
        self.lob.precision()
    }

    pub fn ctx(&mut self) -> &mut RealContext {
        self.lob.context()
    }

    pub fn lobachevsky(&mut self, theta: &BigReal) -> BigReal {
        self.lob.eval(theta)
    }

    /// `v_oct = 8𝓛(π/4)`.
    pub fn v_oct(&mut self) -> BigReal {
        &self.lob.eval_pi_ratio(1, 4) * &self.ctx().int(8)
    }

    /// Figure-eight knot complement volume `6𝓛(π/3)`.
    pub fn figure_eight_volume(&mut self) -> BigReal {
        &self.lob.eval_pi_ratio(1, 3) * &self.ctx().int(6)
    }

    /// `2𝓛(π/4)`, the limit of `f(n)`.
    pub fn f_limit(&mut self) -> BigReal {
        &self.lob.eval_pi_ratio(1, 4) * &self.ctx().int(2)
    }

    /// `f(n) = 𝓛(π/4 + π/2n) + 𝓛(π/4 − π/2n) = vol(M_n)/(8n)`.
    pub fn orbifold_volume_f(&mut self, n: u64) -> Result<BigReal, GeomError> {
        check_n(n)?;
        let n = n as i64;
        let a = self.lob.eval_pi_ratio(n + 2, 4 * n);
        let b = self.lob.eval_pi_ratio(n - 2, 4 * n);
        Ok(&a + &b)
    }

    /// `vol(M_n) = 8n(𝓛(π/4 + π/2n) + 𝓛(π/4 − π/2n))`, shared by all
    /// half-twist partners.
    pub fn volume(&mut self, n: u64) -> Result<BigReal, GeomError> {
        let f = self.orbifold_volume_f(n)?;
        Ok(&f * &self.ctx().int(8 * n as i64))
    }

    /// `f′(n) = (π/2n²) ln(sin(π/4 + π/2n) / sin(π/4 − π/2n))`.
    pub fn orbifold_volume_f_prime(&mut self, n: u64) -> Result<BigReal, GeomError> {
        check_n(n)?;
        let ni = n as i64;
        let ctx = self.ctx();
        let up = ctx.pi_ratio(ni + 2, 4 * ni);
        let down = ctx.pi_ratio(ni - 2, 4 * ni);
        let ratio = &ctx.sin(&up) / &ctx.sin(&down);
        let log = ctx.ln(&ratio)?;
        Ok(&ctx.pi_ratio(1, 2 * ni * ni) * &log)
    }

    fn theta_trig(&mut self, n: u64) -> Result<(BigReal, BigReal, BigReal), GeomError> {
        check_n(n)?;
        let ctx = self.ctx();
        let theta = ctx.pi_ratio(1, n as i64);
        let csc = ctx.sin(&theta).recip();
        let sec = ctx.cos(&theta).recip();
        let tan = ctx.tan(&theta);
        Ok((csc, sec, tan))
    }

    pub fn packing_radii(&mut self, n: u64) -> Result<PackingData, GeomError> {
        let (csc, sec, tan) = self.theta_trig(n)?;
        let one = self.ctx().int(1);
        let two = self.ctx().int(2);
        let white_outer = &csc + &one;
        let white_inner = &csc - &one;
        let shaded_small = &tan * &white_inner;
        let shaded_large = &tan * &white_outer;
        let lhs = &(&two * &shaded_small).recip() + &(&two * &shaded_large).recip();
        let sec_residual = (&lhs - &sec).abs();
        Ok(PackingData {
            n,
            white_outer,
            white_inner,
            unit_circles: n,
            shaded_small,
            shaded_large,
            sec_residual,
        })
    }

    /// `i·sec(π/n)`.
    pub fn tile_shape(&mut self, n: u64) -> Result<BigComplex, GeomError> {
        let (_, sec, _) = self.theta_trig(n)?;
        Ok(BigComplex::new(self.ctx().int(0), sec))
    }

    pub fn cusp_shape(&mut self, n: u64, kind: CuspKind) -> Result<CuspShapeValue, GeomError> {
        check_n(n)?;
        let base = CuspShapeValue {
            n,
            kind,
            exact: None,
            numeric: None,
            meridian_length: None,
            longitude_lower_bound: None,
        };
        let ctx = self.ctx();
        let theta = ctx.pi_ratio(1, n as i64);
        let c = ctx.cos(&theta);
        let zero = ctx.int(0);
        let two = ctx.int(2);
        match kind {
            CuspKind::Untwisted => Ok(CuspShapeValue {
                exact: Some(cusp_generator(n)?),
                numeric: Some(BigComplex::new(zero, &two * &c)),
                ..base
            }),
            CuspKind::Twisted { positive } => {
                // 2ci / (1 ± ci)
                let num = BigComplex::new(zero.clone(), &two * &c);
                let den = BigComplex::new(ctx.int(1), if positive { c } else { -c });
                Ok(CuspShapeValue {
                    exact: Some(twisted_shape(n, positive)?),
                    numeric: Some(&num / &den),
                    ..base
                })
            }
            CuspKind::KnotCircle => Ok(CuspShapeValue {
                meridian_length: Some(2),
                longitude_lower_bound: Some(2 * n),
                ..base
            }),
        }
    }

    pub fn geodesic_data(&mut self, n: u64) -> Result<GeodesicData, GeomError> {
        let (csc, _, _) = self.theta_trig(n)?;
        let ctx = self.ctx();
        let one = ctx.int(1);
        let ratio = &(&csc + &one) / &(&csc - &one);
        let perp = ctx.ln(&ratio)?;
        let closed = &perp * &ctx.int(2);
        let gram_numeric = -(&ctx.cosh(&perp) * &ctx.int(2));
        Ok(GeodesicData {
            n,
            perpendicular_length: perp,
            closed_length: closed,
            gram_entry: gram_entry_exact(n)?,
            gram_numeric,
        })
    }

    /// Numeric value of a cyclotomic element under `ζ_N ↦ e^{2πi/N}`. Powers
    /// of `ζ_N` come from repeated multiplication; with at most `φ(N)` steps
    /// the rounding drift stays well inside the guard bits.
    pub fn eval_cyclo(&mut self, x: &CycloElement) -> BigComplex {
        let big_n = x.modulus() as i64;
        let ctx = self.ctx();
        let angle = ctx.pi_ratio(2, big_n);
        let (zr, zi) = (ctx.cos(&angle), ctx.sin(&angle));
        let (mut pr, mut pi) = (ctx.int(1), ctx.int(0));
        let mut re = ctx.int(0);
        let mut im = ctx.int(0);
        for (k, c) in x.coefficients().iter().enumerate() {
            if k > 0 {
                let next_re = &(&pr * &zr) - &(&pi * &zi);
                pi = &(&pr * &zi) + &(&pi * &zr);
                pr = next_re;
            }
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let c = ctx.rational(c);
            re = &re + &(&c * &pr);
            im = &im + &(&c * &pi);
        }
        BigComplex::new(re, im)
    }

    pub fn eval_gram(&mut self, g: &GramEntry) -> BigReal {
        match g {
            GramEntry::Rational(q) => self.ctx().rational(q),
            GramEntry::Cyclotomic(x) => self.eval_cyclo(x).re,
        }
    }
}

/// `𝓛(θ)` at the requested precision.
pub fn lobachevsky(theta: &BigReal, bits: usize) -> Result<BigReal, GeomError> {
    Ok(Geometry::new(bits)?.lobachevsky(&theta.with_precision(bits)))
}

pub fn volume(n: u64, bits: usize) -> Result<BigReal, GeomError> {
    Geometry::new(bits)?.volume(n)
}

pub fn orbifold_volume_f(n: u64, bits: usize) -> Result<BigReal, GeomError> {
    Geometry::new(bits)?.orbifold_volume_f(n)
}
