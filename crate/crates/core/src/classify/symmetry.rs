//! Symmetry group orders, hidden-symmetry counts, and the volume bracket on
//! the number of hidden symmetries of `M′_n`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ClassifyError, ManifoldKind, PretzelFal};
use crate::hypgeom::{BigReal, Geometry};

/// An order or count as far as it is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymCount {
    Finite(u64),
    Infinite,
    /// Outside what is proved for this family.
    Unknown,
    /// Known to be finite, but its value is not determined here.
    Unstated,
}

impl SymCount {
    pub fn finite(self) -> Option<u64> {
        match self {
            SymCount::Finite(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for SymCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymCount::Finite(k) => write!(f, "{k}"),
            SymCount::Infinite => f.write_str("infinite"),
            SymCount::Unknown => f.write_str("unknown"),
            SymCount::Unstated => f.write_str("–"),
        }
    }
}

impl Serialize for SymCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.as_str() {
            "infinite" => SymCount::Infinite,
            "unknown" => SymCount::Unknown,
            "–" => SymCount::Unstated,
            k => SymCount::Finite(k.parse().map_err(serde::de::Error::custom)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryData {
    pub n: u64,
    pub kind: ManifoldKind,
    pub sym_plus: SymCount,
    pub sym: SymCount,
    pub hidden: SymCount,
    pub cover_degree: SymCount,
    /// `vol(M_n) = 8n·f(n)`, shared by all half-twist partners.
    pub volume: BigReal,
    /// `f(n)`, the volume of `M_n / Sym⁺(M_n)`.
    pub orientable_orbifold_volume: Option<BigReal>,
    /// `f(n)/2`, the minimal orbifold in the commensurability class.
    pub minimal_orbifold_volume: Option<BigReal>,
    pub note: String,
}

impl SymmetryData {
    /// `16n = |Sym| · hidden` when both are finite and nonzero hidden.
    pub fn cover_identity_holds(&self) -> Option<bool> {
        let cover = self.cover_degree.finite()?;
        let sym = self.sym.finite()?;
        let hidden = self.hidden.finite()?;
        Some(if hidden == 0 {
            cover == sym
        } else {
            cover == sym * hidden
        })
    }
}

pub fn symmetry_data(m: &PretzelFal, geom: &mut Geometry) -> Result<SymmetryData, ClassifyError> {
    let n = m.n();
    let f = geom.orbifold_volume_f(n)?;
    let volume = &f * &geom.ctx().int(8 * n as i64);
    let arithmetic = n == 3 || n == 4;
    let kind = m.kind();
    use SymCount::*;
    let (sym_plus, sym, hidden, cover, orbifolds, note) = match (kind, arithmetic) {
        (ManifoldKind::Other, _) => (
            Unknown,
            Unknown,
            Unknown,
            Unknown,
            false,
            "unknown: symmetry groups are established only for M_n and M'_n".to_string(),
        ),
        (_, true) => (
            Unknown,
            Unknown,
            Infinite,
            Unknown,
            false,
            format!("M_{n} is arithmetic, so its commensurator is dense and hidden symmetries are infinite"),
        ),
        (ManifoldKind::Untwisted, false) => (
            Finite(8 * n),
            Finite(16 * n),
            Finite(0),
            Finite(16 * n),
            true,
            format!("Sym(M_{n}) has order 16n and is the whole commensurator quotient; no hidden symmetries"),
        ),
        (ManifoldKind::PrimeFamily, false) => (
            Unstated,
            Finite(8),
            Finite(2 * n),
            Finite(16 * n),
            true,
            format!("Sym(M'_{n}) = (Z/2)^3; the minimal orbifold is covered with degree 16n = 8 * 2n"),
        ),
    };
    let (orientable, minimal) = if orbifolds {
        (Some(f.clone()), Some(f.mul_pow2(-1)))
    } else {
        (None, None)
    };
    Ok(SymmetryData {
        n,
        kind,
        sym_plus,
        sym,
        hidden,
        cover_degree: cover,
        volume,
        orientable_orbifold_volume: orientable,
        minimal_orbifold_volume: minimal,
        note,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenSymmetryBounds {
    pub n: u64,
    pub epsilon: BigReal,
    /// `vol(M′_n) / (8(𝓛(π/4) + ε))`
    pub lower: BigReal,
    /// `vol(M′_n) / (8(𝓛(π/4) − ε))`
    pub upper: BigReal,
    /// Whether `2n` lies in `[lower, upper]`.
    pub contains_2n: bool,
    /// Smallest `n₀ ≥ 5` with `2n` in the bracket for every `n ≥ n₀`.
    pub n0: u64,
}

fn check_epsilon(epsilon: &BigReal, geom: &mut Geometry) -> Result<BigReal, ClassifyError> {
    let l = geom.f_limit().mul_pow2(-1);
    if !epsilon.is_positive() || *epsilon >= l {
        return Err(ClassifyError::InvalidEpsilon(epsilon.to_decimal(12)));
    }
    Ok(l)
}

fn bracket(
    n: u64,
    epsilon: &BigReal,
    l: &BigReal,
    geom: &mut Geometry,
) -> Result<(BigReal, BigReal, bool), ClassifyError> {
    let ctx = geom.ctx();
    let eight = ctx.int(8);
    let two_n = ctx.int(2 * n as i64);
    let vol = geom.volume(n)?;
    let lower = &vol / &(&eight * &(l + epsilon));
    let upper = &vol / &(&eight * &(l - epsilon));
    let inside = lower <= two_n && two_n <= upper;
    Ok((lower, upper, inside))
}

/// Bracket on the hidden-symmetry count of `M′_n` from volume alone, valid
/// once `f(n)` is within `2ε` of its limit.
pub fn hidden_symmetry_bounds(
    n: u64,
    epsilon: &BigReal,
    geom: &mut Geometry,
) -> Result<HiddenSymmetryBounds, ClassifyError> {
    if n < 5 {
        return Err(ClassifyError::RangeTooSmall(n));
    }
    let l = check_epsilon(epsilon, geom)?;
    let (lower, upper, contains_2n) = bracket(n, epsilon, &l, geom)?;
    let n0 = hidden_symmetry_threshold(epsilon, geom)?;
    Ok(HiddenSymmetryBounds {
        n,
        epsilon: epsilon.clone(),
        lower,
        upper,
        contains_2n,
        n0,
    })
}

/// Smallest `n₀ ≥ 5` beyond which the bracket always contains `2n`.
///
/// Membership is equivalent to `2(𝓛(π/4) − ε) ≤ f(n) ≤ 2(𝓛(π/4) + ε)`, and
/// `f` increases to `2𝓛(π/4)`, so the predicate is monotone in `n` and a
/// doubling search followed by bisection finds the boundary.
pub fn hidden_symmetry_threshold(
    epsilon: &BigReal,
    geom: &mut Geometry,
) -> Result<u64, ClassifyError> {
    let l = check_epsilon(epsilon, geom)?;
    let holds = |n: u64, geom: &mut Geometry| -> Result<bool, ClassifyError> {
        Ok(bracket(n, epsilon, &l, geom)?.2)
    };
    let mut lo = 4;
    let mut hi = 5;
    while !holds(hi, geom)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| {
            ClassifyError::InvalidEpsilon(epsilon.to_decimal(12))
        })?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid, geom)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `vol(M)/v₀`. The minimal one-cusped orbifold volume `v₀` has no default.
pub fn max_hidden_symmetries(
    volume: &BigReal,
    v0: Option<&BigReal>,
) -> Result<BigReal, ClassifyError> {
    let v0 = v0.ok_or(ClassifyError::MissingV0)?;
    if !v0.is_positive() {
        return Err(ClassifyError::InvalidV0(v0.to_decimal(12)));
    }
    Ok(volume / v0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> Geometry {
        Geometry::new(128).unwrap()
    }

    #[test]
    fn families() {
        let mut g = geom();
        let d = symmetry_data(&PretzelFal::untwisted(7).unwrap(), &mut g).unwrap();
        assert_eq!((d.sym_plus, d.sym, d.hidden), (SymCount::Finite(56), SymCount::Finite(112), SymCount::Finite(0)));
        assert_eq!(d.cover_identity_holds(), Some(true));
        let d = symmetry_data(&PretzelFal::prime_family(7).unwrap(), &mut g).unwrap();
        assert_eq!((d.sym, d.hidden), (SymCount::Finite(8), SymCount::Finite(14)));
        assert_eq!(d.sym_plus.to_string(), "–");
        assert_eq!(d.cover_identity_holds(), Some(true));
        let d = symmetry_data(&PretzelFal::untwisted(3).unwrap(), &mut g).unwrap();
        assert_eq!(d.hidden, SymCount::Infinite);
        let d = symmetry_data(&"5:01101".parse().unwrap(), &mut g).unwrap();
        assert_eq!(d.sym, SymCount::Unknown);
        assert!(d.minimal_orbifold_volume.is_none());
    }

    #[test]
    fn symcount_serde() {
        for c in [SymCount::Finite(12), SymCount::Infinite, SymCount::Unknown, SymCount::Unstated] {
            let s = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<SymCount>(&s).unwrap(), c);
        }
    }

    #[test]
    fn bracket_at_100() {
        let mut g = geom();
        let eps = g.ctx().ratio(1, 100);
        let b = hidden_symmetry_bounds(100, &eps, &mut g).unwrap();
        assert!(b.contains_2n);
        assert!(b.n0 <= 100);
        let below = hidden_symmetry_bounds(b.n0 - 1, &eps, &mut g);
        if b.n0 > 5 {
            assert!(!below.unwrap().contains_2n);
        }
    }

    #[test]
    fn bad_epsilon() {
        let mut g = geom();
        let zero = g.ctx().int(0);
        assert!(hidden_symmetry_bounds(10, &zero, &mut g).is_err());
        let big = g.ctx().int(1);
        assert!(hidden_symmetry_bounds(10, &big, &mut g).is_err());
        let eps = g.ctx().ratio(1, 100);
        assert!(hidden_symmetry_bounds(4, &eps, &mut g).is_err());
    }

    #[test]
    fn max_hidden() {
        let mut g = geom();
        let ctx = g.ctx();
        let r = max_hidden_symmetries(&ctx.int(40), Some(&ctx.ratio(4, 100))).unwrap();
        assert_eq!(r.round_to_i64(), 1000);
        assert!(matches!(
            max_hidden_symmetries(&ctx.int(40), None),
            Err(ClassifyError::MissingV0)
        ));
        assert!(max_hidden_symmetries(&ctx.int(40), Some(&ctx.int(-1))).is_err());
        assert!(max_hidden_symmetries(&ctx.int(40), Some(&ctx.int(0))).is_err());
    }
}
