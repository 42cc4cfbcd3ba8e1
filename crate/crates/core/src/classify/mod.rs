//! Arithmeticity, commensurability and symmetry bookkeeping for `M_n` and
//! its half-twist partners.

mod arithmeticity;
mod nrtable;
mod symmetry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use arithmeticity::{
    commensurability_key, commensurable, is_arithmetic, ArithmeticityVerdict, CommensurabilityCase,
    EvidenceStatus,
    CommensurabilityResult, Evidence, EvidenceRule, Verdict,
};
pub use nrtable::{
    NeumannReidTable, NrEntry, ADMISSIBLE_D, SHORT_GEODESIC_THRESHOLD, TABLE_UPPER_LENGTH,
};
pub use symmetry::{
    hidden_symmetry_bounds, hidden_symmetry_threshold, max_hidden_symmetries, symmetry_data,
    HiddenSymmetryBounds,
    SymCount, SymmetryData,
};

use crate::crushtacean::GraphError;
use crate::hypgeom::GeomError;
use crate::tracefield::TraceFieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("n = {0} is not allowed: the pretzel link needs n >= 3 to be hyperbolic")]
    NotHyperbolic(u64),
    #[error("twist vector has length {got}, expected n = {expected}")]
    TwistLength { expected: usize, got: usize },
    #[error("twist vector must be a string of 0s and 1s, got {0:?}")]
    InvalidTwist(String),
    #[error("n = {0} is below 5, where the hidden-symmetry count is not established")]
    RangeTooSmall(u64),
    #[error("epsilon must satisfy 0 < epsilon < L(pi/4), got {0}")]
    InvalidEpsilon(String),
    #[error("constant not provided: v0, the minimal one-cusped orbifold volume, has no built-in value and must be supplied")]
    MissingV0,
    #[error("v0 must be positive, got {0}")]
    InvalidV0(String),
    #[error("Neumann-Reid table rejected: {0}")]
    NrTable(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    TraceField(#[from] TraceFieldError),
}

/// Which family a twist vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManifoldKind {
    /// `ε = 0…0`
    #[serde(rename = "M_n")]
    Untwisted,
    /// `ε = 01…1`
    #[serde(rename = "M'_n")]
    PrimeFamily,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifoldKind::Untwisted => "M_n",
            ManifoldKind::PrimeFamily => "M'_n",
            ManifoldKind::Other => "other",
        })
    }
}

/// `M_n` or one of its half-twist partners, identified by `(n, ε)`.
///
/// Distinct twist vectors are treated as distinct manifolds; no isotopy
/// deduplication is attempted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PretzelFal {
    n: u64,
    twists: Vec<bool>,
}

impl PretzelFal {
    pub fn new(n: u64, twists: Vec<bool>) -> Result<Self, ClassifyError> {
        if n < 3 {
            return Err(ClassifyError::NotHyperbolic(n));
        }
        if twists.len() as u64 != n {
            return Err(ClassifyError::TwistLength {
                expected: n as usize,
                got: twists.len(),
            });
        }
        Ok(Self { n, twists })
    }

    pub fn untwisted(n: u64) -> Result<Self, ClassifyError> {
        Self::new(n, vec![false; n as usize])
    }

    /// `M′_n`, with twist vector `(0, 1, 1, …, 1)`.
    pub fn prime_family(n: u64) -> Result<Self, ClassifyError> {
        let mut t = vec![true; n as usize];
        if let Some(first) = t.first_mut() {
            *first = false;
        }
        Self::new(n, t)
    }

    /// From a bit string such as `"01101"`; `None` means all zeros.
    pub fn from_bits(n: u64, bits: Option<&str>) -> Result<Self, ClassifyError> {
        match bits {
            None => Self::untwisted(n),
            Some(s) => Self::new(n, parse_bits(s)?),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn twists(&self) -> &[bool] {
        &self.twists
    }

    pub fn twist_string(&self) -> String {
        self.twists.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn is_prime_family(&self) -> bool {
        self.kind() == ManifoldKind::PrimeFamily
    }

    pub fn kind(&self) -> ManifoldKind {
        if self.twists.iter().all(|&b| !b) {
            ManifoldKind::Untwisted
        } else if !self.twists[0] && self.twists[1..].iter().all(|&b| b) {
            ManifoldKind::PrimeFamily
        } else {
            ManifoldKind::Other
        }
    }
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, ClassifyError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ClassifyError::InvalidTwist(s.to_string())),
        })
        .collect()
}

impl fmt::Display for PretzelFal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}({})", self.n, self.twist_string())
    }
}

impl FromStr for PretzelFal {
    type Err = ClassifyError;
    /// Parses `"n"` or `"n:εεε"`.
    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        let (n, bits) = match s.split_once(':') {
            Some((n, b)) => (n, Some(b)),
            None => (s, None),
        };
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| ClassifyError::InvalidTwist(s.to_string()))?;
        Self::from_bits(n, bits)
    }
}

#[derive(Serialize, Deserialize)]
struct PretzelRepr {
    n: u64,
    twists: String,
}

impl Serialize for PretzelFal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PretzelRepr {
            n: self.n,
            twists: self.twist_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PretzelFal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PretzelRepr::deserialize(d)?;
        Self::from_bits(r.n, Some(&r.twists)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        assert_eq!(PretzelFal::untwisted(5).unwrap().kind(), ManifoldKind::Untwisted);
        let p = PretzelFal::prime_family(5).unwrap();
        assert_eq!(p.twist_string(), "01111");
        assert!(p.is_prime_family());
        let o: PretzelFal = "5:01101".parse().unwrap();
        assert_eq!(o.kind(), ManifoldKind::Other);
        assert!("5:0110".parse::<PretzelFal>().is_err());
        assert!("5:0112x".parse::<PretzelFal>().is_err());
        assert!(PretzelFal::untwisted(2).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = PretzelFal::prime_family(4).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":4,"twists":"0111"}"#);
        assert_eq!(serde_json::from_str::<PretzelFal>(&s).unwrap(), p);
    }
}
