//! Invariant trace fields `kM_n = ℚ(cos(π/n)i)`, built from the cusp shape
//! `2cos(π/n)i = ζ₄(ζ_{2n} + ζ_{2n}⁻¹)` inside `ℚ(ζ_N)`, `N = lcm(4, 2n)`.

use std::f64::consts::PI;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::arith::euler_totient;
use crate::arith::{gcd, lcm};
use crate::exactfield::{
    evaluate_at, minimal_polynomial, stabilizer, CycloElement, CyclotomicField, FieldError,
    RatPolynomial, UnitSubgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceFieldError {
    #[error("n = {0} is not allowed: the pretzel link needs n >= 3 to be hyperbolic")]
    NotHyperbolic(u64),
    #[error("descriptor for n = {n} failed verification: {reason}")]
    Invalid { n: u64, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFieldDescriptor {
    pub n: u64,
    pub conductor: u64,
    pub generator: CycloElement,
    pub min_poly: RatPolynomial,
    pub degree: usize,
    pub stabilizer: UnitSubgroup,
}

pub fn conductor(n: u64) -> u64 {
    lcm(4, 2 * n)
}

fn check_n(n: u64) -> Result<(), TraceFieldError> {
    if n < 3 {
        Err(TraceFieldError::NotHyperbolic(n))
    } else {
        Ok(())
    }
}

/// The cusp shape `2cos(π/n)i` as an element of `ℚ(ζ_N)`.
pub fn cusp_generator(n: u64) -> Result<CycloElement, TraceFieldError> {
    check_n(n)?;
    let big_n = conductor(n);
    let field = CyclotomicField::new(big_n)?;
    // ζ₄ = ζ_N^{N/4}, ζ_{2n}^{±1} = ζ_N^{±N/2n}
    let quarter = (big_n / 4) as i64;
    let step = (big_n / (2 * n)) as i64;
    let one = BigRational::from_integer(1.into());
    Ok(CycloElement::from_exponents(
        &field,
        &[(quarter + step, one.clone()), (quarter - step, one)],
    ))
}

pub fn build_trace_field(n: u64) -> Result<TraceFieldDescriptor, TraceFieldError> {
    let generator = cusp_generator(n)?;
    let min_poly = minimal_polynomial(&generator);
    let degree = min_poly.degree().unwrap_or(0);
    let stab = stabilizer(&generator);
    let desc = TraceFieldDescriptor {
        n,
        conductor: conductor(n),
        generator,
        min_poly,
        degree,
        stabilizer: stab,
    };
    if desc.degree as u64 != euler_totient(n) {
        return Err(TraceFieldError::Invalid {
            n,
            reason: format!("degree {} differs from phi(n) = {}", desc.degree, euler_totient(n)),
        });
    }
    Ok(desc)
}

impl TraceFieldDescriptor {
    /// Re-checks every stored field against the defining construction. Used
    /// when descriptors are read back from a cache.
    pub fn verify(&self) -> Result<(), TraceFieldError> {
        let fail = |reason: &str| {
            Err(TraceFieldError::Invalid {
                n: self.n,
                reason: reason.to_string(),
            })
        };
        check_n(self.n)?;
        if self.conductor != conductor(self.n) || self.generator.modulus() != self.conductor {
            return fail("conductor mismatch");
        }
        if self.generator != cusp_generator(self.n)? {
            return fail("generator is not 2cos(pi/n)i");
        }
        if !self.min_poly.is_monic() || self.min_poly.degree() != Some(self.degree) {
            return fail("minimal polynomial is not monic of the stated degree");
        }
        if self.degree as u64 != euler_totient(self.n) {
            return fail("degree differs from phi(n)");
        }
        if !evaluate_at(&self.min_poly, &self.generator).is_zero() {
            return fail("minimal polynomial does not vanish at the generator");
        }
        if self.stabilizer.modulus() != self.conductor
            || self.stabilizer.index() != self.degree as u64
        {
            return fail("stabilizer has the wrong index");
        }
        for &a in self.stabilizer.members() {
            if self.generator.galois(a as i64)? != self.generator {
                return fail("stabilizer member moves the generator");
            }
        }
        Ok(())
    }

    /// Whether `x` (at the same level) lies in this field: it must be fixed
    /// by every automorphism fixing the generator.
    pub fn contains(&self, x: &CycloElement) -> Result<bool, TraceFieldError> {
        if x.modulus() != self.conductor {
            return Err(FieldError::ModulusMismatch {
                left: self.conductor,
                right: x.modulus(),
            }
            .into());
        }
        for &a in self.stabilizer.members() {
            if x.galois(a as i64)? != *x {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Stabilizers of both generators pulled back to the common level
/// `L = lcm(N_m, N_n)`.
pub fn common_level_stabilizers(
    a: &TraceFieldDescriptor,
    b: &TraceFieldDescriptor,
) -> Result<(UnitSubgroup, UnitSubgroup), TraceFieldError> {
    let level = lcm(a.conductor, b.conductor);
    Ok((a.stabilizer.lift(level)?, b.stabilizer.lift(level)?))
}

/// Two subfields of `ℚ(ζ_L)` coincide iff their Galois stabilizers do.
///
/// The stabilizer of an element re-embedded at level `L` is the preimage of
/// its stabilizer at its own level, so the comparison walks `(ℤ/L)*` once
/// and stops at the first residue that separates the two preimages.
pub fn descriptors_equal(a: &TraceFieldDescriptor, b: &TraceFieldDescriptor) -> bool {
    if a.n == b.n {
        return true;
    }
    let level = lcm(a.conductor, b.conductor);
    let in_a = membership_table(&a.stabilizer);
    let in_b = membership_table(&b.stabilizer);
    units_lazy(level).all(|r| {
        in_a[(r % a.conductor) as usize] == in_b[(r % b.conductor) as usize]
    })
}

fn units_lazy(level: u64) -> impl Iterator<Item = u64> {
    (1..level).filter(move |&a| gcd(a, level) == 1)
}

fn membership_table(h: &UnitSubgroup) -> Vec<bool> {
    let mut t = vec![false; h.modulus() as usize];
    for &m in h.members() {
        t[m as usize] = true;
    }
    t
}

pub fn fields_equal(m: u64, n: u64) -> Result<bool, TraceFieldError> {
    check_n(m)?;
    check_n(n)?;
    if m == n {
        return Ok(true);
    }
    Ok(descriptors_equal(&build_trace_field(m)?, &build_trace_field(n)?))
}

/// Same question answered by literally re-embedding both generators in
/// `ℚ(ζ_L)` and computing their stabilizers there. Slow; meant for checking
/// [`descriptors_equal`] on small inputs.
pub fn fields_equal_by_embedding(m: u64, n: u64) -> Result<bool, TraceFieldError> {
    let gm = cusp_generator(m)?;
    let gn = cusp_generator(n)?;
    let level = lcm(gm.modulus(), gn.modulus());
    Ok(stabilizer(&gm.embed(level)?) == stabilizer(&gn.embed(level)?))
}

/// Floating-point version of the stabilizer comparison: `σ_a` sends
/// `2cos(π/n)i` to `i^a · 2cos(πa/n)`, which is compared to the original in
/// ℂ. Independent of the exact arithmetic, so it serves as a cross-check.
pub fn numeric_fields_equal(m: u64, n: u64) -> bool {
    const TOL: f64 = 1e-9;
    let level = lcm(conductor(m), conductor(n));
    let fixed = |k: u64, a: u64| -> bool {
        let g = 2.0 * (PI / k as f64).cos();
        let c = 2.0 * (PI * (a % (2 * k)) as f64 / k as f64).cos();
        // i^a · c compared against i · g
        let (re, im) = match a % 4 {
            0 => (c, 0.0),
            1 => (0.0, c),
            2 => (-c, 0.0),
            _ => (0.0, -c),
        };
        re.abs() < TOL && (im - g).abs() < TOL
    };
    units_lazy(level).all(|a| fixed(m, a) == fixed(n, a))
}

/// `φ(n) = 2`, i.e. `n ∈ {3, 4, 6}`.
pub fn is_quadratic_imaginary(n: u64) -> Result<bool, TraceFieldError> {
    check_n(n)?;
    Ok(euler_totient(n) == 2)
}

/// Checks that `kM_n` is a CM field: the generator is moved by complex
/// conjugation, its square is fixed, and the square generates a subfield of
/// half the degree.
pub fn cm_field_check(d: &TraceFieldDescriptor) -> Result<bool, TraceFieldError> {
    let g = &d.generator;
    let sq = g * g;
    let conj_moves_g = g.conjugate() != *g;
    let sq_real = sq.conjugate() == sq;
    let real_degree = minimal_polynomial(&sq).degree().unwrap_or(0);
    Ok(conj_moves_g && sq_real && 2 * real_degree == d.degree)
}

/// `g² = −2(cos(2π/n) + 1) = −(ζ_n + ζ_n⁻¹ + 2)`, checked exactly.
pub fn generator_square_identity(d: &TraceFieldDescriptor) -> Result<bool, TraceFieldError> {
    let g = &d.generator;
    let field = g.field();
    let step = (d.conductor / d.n) as i64;
    let one = BigRational::from_integer(1.into());
    let rhs = -CycloElement::from_exponents(
        field,
        &[
            (step, one.clone()),
            (-step, one),
            (0, BigRational::from_integer(2.into())),
        ],
    );
    Ok(&(g * g) == &rhs)
}

/// Twisted-crossing cusp shape `2cos(π/n)i / (1 ± cos(π/n)i)`.
pub fn twisted_shape(n: u64, positive: bool) -> Result<CycloElement, TraceFieldError> {
    let g = cusp_generator(n)?;
    let half = g.scale(&BigRational::new(1.into(), 2.into()));
    let one = CycloElement::one(g.field());
    let den = if positive { &one + &half } else { &one - &half };
    Ok(g.try_div(&den)?)
}
