//! Arithmeticity verdicts with evidence chains, and the commensurability
//! decision between two pretzel links.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ClassifyError, NeumannReidTable, PretzelFal};
use super::{SHORT_GEODESIC_THRESHOLD, TABLE_UPPER_LENGTH};
use crate::arith::euler_totient;
use crate::crushtacean::{build_pretzel_crushtacean, cdw_criterion};
use crate::hypgeom::{vinberg_entry_is_integral, Geometry};
use crate::tracefield::fields_equal;

/// Significant digits used when lengths and volumes appear in evidence text.
const EVIDENCE_DIGITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Arithmetic,
    NonArithmetic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Arithmetic => "arithmetic",
            Verdict::NonArithmetic => "non-arithmetic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceRule {
    KnownArithmetic,
    DegreeRule,
    VinbergRule,
    GeodesicThreshold,
    NrTableComparison,
}

impl EvidenceRule {
    pub fn code(self) -> &'static str {
        match self {
            EvidenceRule::KnownArithmetic => "known",
            EvidenceRule::DegreeRule => "degree",
            EvidenceRule::VinbergRule => "vinberg",
            EvidenceRule::GeodesicThreshold => "geodesic",
            EvidenceRule::NrTableComparison => "nr-table",
        }
    }
}

/// How a rule application bears on the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceStatus {
    /// Settles the verdict on its own.
    Decisive,
    /// A necessary condition for the verdict holds, without settling it.
    Consistent,
    /// Independently implies the verdict, but is not load-bearing.
    Corroborates,
    /// The rule applied and said nothing either way.
    Inconclusive,
    /// The rule needs data that is not available.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub rule: EvidenceRule,
    pub status: EvidenceStatus,
    /// Verdict the rule points to, when it points anywhere.
    pub implies: Option<Verdict>,
    pub detail: String,
}

impl Evidence {
    /// Short form for tables, e.g. `degree!` or `geodesic+`.
    pub fn code(&self) -> String {
        let mark = match self.status {
            EvidenceStatus::Decisive => "!",
            EvidenceStatus::Consistent => "~",
            EvidenceStatus::Corroborates => "+",
            EvidenceStatus::Inconclusive => "?",
            EvidenceStatus::Unavailable => "-",
        };
        format!("{}{mark}", self.rule.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticityVerdict {
    pub n: u64,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

impl ArithmeticityVerdict {
    pub fn is_arithmetic(&self) -> bool {
        self.verdict == Verdict::Arithmetic
    }

    pub fn codes(&self) -> String {
        self.evidence
            .iter()
            .map(Evidence::code)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// At least one decisive rule, and no rule pointing the other way.
    pub fn is_consistent(&self) -> bool {
        let decisive = self
            .evidence
            .iter()
            .any(|e| e.status == EvidenceStatus::Decisive && e.implies == Some(self.verdict));
        let contradicted = self
            .evidence
            .iter()
            .any(|e| e.implies.is_some_and(|v| v != self.verdict));
        decisive && !contradicted
    }
}

/// Decides arithmeticity of `M_n`. The degree rule and the Vinberg test carry
/// the verdict; geodesic-length rules are attached only as corroboration.
pub fn is_arithmetic(
    n: u64,
    geom: &mut Geometry,
    table: Option<&NeumannReidTable>,
) -> Result<ArithmeticityVerdict, ClassifyError> {
    if n < 3 {
        return Err(ClassifyError::NotHyperbolic(n));
    }
    let phi = euler_totient(n);
    let mut evidence = Vec::new();

    let verdict = if phi != 2 {
        evidence.push(Evidence {
            rule: EvidenceRule::DegreeRule,
            status: EvidenceStatus::Decisive,
            implies: Some(Verdict::NonArithmetic),
            detail: format!(
                "[kM_{n}:Q] = phi({n}) = {phi}; an arithmetic link complement has an imaginary quadratic invariant trace field"
            ),
        });
        Verdict::NonArithmetic
    } else {
        evidence.push(Evidence {
            rule: EvidenceRule::DegreeRule,
            status: EvidenceStatus::Consistent,
            implies: None,
            detail: format!("[kM_{n}:Q] = phi({n}) = 2; the trace field is imaginary quadratic, so degree does not decide"),
        });
        if n == 3 || n == 4 {
            evidence.push(Evidence {
                rule: EvidenceRule::KnownArithmetic,
                status: EvidenceStatus::Decisive,
                implies: Some(Verdict::Arithmetic),
                detail: format!(
                    "M_{n} is arithmetic, as observed by Thurston; commensurable with PSL(2, O_{})",
                    if n == 3 { "1" } else { "2" }
                ),
            });
            Verdict::Arithmetic
        } else {
            let v = vinberg_entry_is_integral(n)?;
            if v.integral {
                return Err(ClassifyError::Geom(crate::hypgeom::GeomError::Numeric(format!(
                    "Gram entry {} at n = {n} is integral; no rule decides",
                    v.entry.render()
                ))));
            }
            evidence.push(Evidence {
                rule: EvidenceRule::VinbergRule,
                status: EvidenceStatus::Decisive,
                implies: Some(Verdict::NonArithmetic),
                detail: format!(
                    "Gram entry -2cosh(l) = {} with minimal polynomial {} is not an algebraic integer",
                    v.entry.render(),
                    v.witness.render("x")
                ),
            });
            Verdict::NonArithmetic
        }
    };

    if verdict == Verdict::NonArithmetic {
        geodesic_corroboration(n, geom, table, &mut evidence)?;
    }
    Ok(ArithmeticityVerdict {
        n,
        verdict,
        evidence,
    })
}

fn geodesic_corroboration(
    n: u64,
    geom: &mut Geometry,
    table: Option<&NeumannReidTable>,
    evidence: &mut Vec<Evidence>,
) -> Result<(), ClassifyError> {
    let len = geom.geodesic_data(n)?.closed_length;
    let ctx = geom.ctx();
    let short = ctx.parse(SHORT_GEODESIC_THRESHOLD)?;
    let upper = ctx.parse(TABLE_UPPER_LENGTH)?;
    let shown = len.to_decimal(EVIDENCE_DIGITS);
    if len < short {
        evidence.push(Evidence {
            rule: EvidenceRule::GeodesicThreshold,
            status: EvidenceStatus::Corroborates,
            implies: Some(Verdict::NonArithmetic),
            detail: format!(
                "closed geodesic of length {shown} < {SHORT_GEODESIC_THRESHOLD}, shorter than any in an arithmetic link complement"
            ),
        });
    } else if len <= upper {
        let e = match table {
            Some(t) if !t.is_empty() => match t.find_match(&len, ctx) {
                Some(hit) => Evidence {
                    rule: EvidenceRule::NrTableComparison,
                    status: EvidenceStatus::Inconclusive,
                    implies: None,
                    detail: format!(
                        "closed geodesic length {shown} matches tabulated {} (d = {}, {})",
                        hit.length, hit.d, hit.source
                    ),
                },
                None => Evidence {
                    rule: EvidenceRule::NrTableComparison,
                    status: EvidenceStatus::Corroborates,
                    implies: Some(Verdict::NonArithmetic),
                    detail: format!(
                        "closed geodesic length {shown} <= {TABLE_UPPER_LENGTH} is not among the {} tabulated lengths",
                        t.entries.len()
                    ),
                },
            },
            _ => Evidence {
                rule: EvidenceRule::NrTableComparison,
                status: EvidenceStatus::Unavailable,
                implies: None,
                detail: "corroboration unavailable: external table not loaded".into(),
            },
        };
        evidence.push(e);
    }
    Ok(())
}

/// Label of the commensurability class; one class per `n`.
pub fn commensurability_key(n: u64) -> String {
    format!("pretzel-{n}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommensurabilityCase {
    /// Same `n`: both cover the reflection orbifold of the shared polyhedra.
    SameReflectionOrbifold,
    /// Both non-arithmetic: minimal orbifold volumes `f(m)/2 ≠ f(n)/2`.
    DistinctOrbifoldVolumes,
    /// Both arithmetic: `ℚ(√−1) ≠ ℚ(√−2)`.
    DistinctTraceFields,
    /// Exactly one of the two is arithmetic.
    ArithmeticVersusNot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommensurabilityResult {
    pub commensurable: bool,
    pub case: CommensurabilityCase,
    pub reason: String,
}

/// `M(m, ε)` and `M(n, δ)` are commensurable iff `m = n`. The reason names
/// the case that applies, computed rather than assumed.
pub fn commensurable(
    a: &PretzelFal,
    b: &PretzelFal,
    geom: &mut Geometry,
) -> Result<CommensurabilityResult, ClassifyError> {
    let (m, n) = (a.n(), b.n());
    if m == n {
        let g = build_pretzel_crushtacean(n as usize)?;
        let ra = cdw_criterion(&g, a.twists())?;
        let rb = cdw_criterion(&g, b.twists())?;
        if !(ra.holds && rb.holds) {
            return Err(ClassifyError::Graph(crate::crushtacean::GraphError::Invalid(
                format!("involution criterion failed on the n = {n} crushtacean"),
            )));
        }
        return Ok(CommensurabilityResult {
            commensurable: true,
            case: CommensurabilityCase::SameReflectionOrbifold,
            reason: format!(
                "both are commensurable with the reflection orbifold of the n = {n} polyhedra: every green edge of the crushtacean has the required involution for {} and {}",
                a.twist_string(),
                b.twist_string()
            ),
        });
    }
    let ar_m = is_arithmetic(m, geom, None)?.is_arithmetic();
    let ar_n = is_arithmetic(n, geom, None)?.is_arithmetic();
    let (case, reason) = match (ar_m, ar_n) {
        (true, true) => {
            let same = fields_equal(m, n)?;
            if same {
                return Err(ClassifyError::Geom(crate::hypgeom::GeomError::Numeric(format!(
                    "trace fields of M_{m} and M_{n} compare equal"
                ))));
            }
            (
                CommensurabilityCase::DistinctTraceFields,
                format!("both arithmetic with different invariant trace fields kM_{m} != kM_{n}"),
            )
        }
        (false, false) => {
            let fm = geom.orbifold_volume_f(m)?;
            let fn_ = geom.orbifold_volume_f(n)?;
            if fm == fn_ {
                return Err(ClassifyError::Geom(crate::hypgeom::GeomError::Numeric(format!(
                    "f({m}) and f({n}) agree to working precision"
                ))));
            }
            (
                CommensurabilityCase::DistinctOrbifoldVolumes,
                format!(
                    "both non-arithmetic with distinct minimal orbifold volumes f({m})/2 = {} and f({n})/2 = {}",
                    fm.mul_pow2(-1).to_decimal(EVIDENCE_DIGITS),
                    fn_.mul_pow2(-1).to_decimal(EVIDENCE_DIGITS)
                ),
            )
        }
        _ => {
            let (ar, non) = if ar_m { (m, n) } else { (n, m) };
            (
                CommensurabilityCase::ArithmeticVersusNot,
                format!("M_{ar} is arithmetic and M_{non} is not"),
            )
        }
    };
    Ok(CommensurabilityResult {
        commensurable: false,
        case,
        reason,
    })
}
