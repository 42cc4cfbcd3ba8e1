//! The per-manifold report: every invariant of `M(n, ε)` gathered into one
//! serializable document. Exact values are strings, numeric values carry the
//! precision they were computed at.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{
    commensurability_key, is_arithmetic, symmetry_data, ArithmeticityVerdict, ClassifyError,
    ManifoldKind, NeumannReidTable, PretzelFal, SymCount, SymmetryData,
};
use crate::hypgeom::{decimal_digits, BigComplex, BigReal, CuspKind, Geometry};
use crate::tracefield::{build_trace_field, TraceFieldDescriptor};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A decimal value together with the binary precision behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Num {
    pub value: String,
    pub precision_bits: usize,
}

impl Num {
    pub fn new(x: &BigReal, bits: usize) -> Self {
        Self {
            value: x.to_decimal(decimal_digits(bits)),
            precision_bits: bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexNum {
    pub re: String,
    pub im: String,
    pub precision_bits: usize,
}

impl ComplexNum {
    pub fn new(z: &BigComplex, bits: usize) -> Self {
        let sig = decimal_digits(bits);
        Self {
            re: z.re.to_decimal(sig),
            im: z.im.to_decimal(sig),
            precision_bits: bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldId {
    pub n: u64,
    pub twists: String,
    pub kind: ManifoldKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspEntry {
    pub kind: String,
    /// Polynomial in `z = ζ_N`, `N` the conductor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<ComplexNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meridian_length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude_lower_bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFieldEntry {
    pub min_poly: String,
    pub degree: usize,
    pub conductor: u64,
    pub stabilizer_size: usize,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicEntry {
    pub perpendicular_length: Num,
    pub closed_length: Num,
    pub gram_entry: String,
    pub gram_numeric: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub sym_plus: SymCount,
    pub sym: SymCount,
    pub hidden: SymCount,
    pub cover_degree: SymCount,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable_orbifold_volume: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_orbifold_volume: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_identity: Option<bool>,
    pub note: String,
}

impl SymmetryEntry {
    fn new(d: &SymmetryData, bits: usize) -> Self {
        Self {
            sym_plus: d.sym_plus,
            sym: d.sym,
            hidden: d.hidden,
            cover_degree: d.cover_degree,
            orientable_orbifold_volume: d.orientable_orbifold_volume.as_ref().map(|x| Num::new(x, bits)),
            minimal_orbifold_volume: d.minimal_orbifold_volume.as_ref().map(|x| Num::new(x, bits)),
            cover_identity: d.cover_identity_holds(),
            note: d.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub precision_bits: usize,
    pub manifold: ManifoldId,
    pub cusp_shapes: Vec<CuspEntry>,
    pub trace_field: TraceFieldEntry,
    pub volume: Num,
    pub f: Num,
    pub geodesic: GeodesicEntry,
    pub arithmeticity: ArithmeticityVerdict,
    pub commensurability_key: String,
    pub symmetry: SymmetryEntry,
}

/// Cusp types present in `M(n, ε)`: crossing circles are untwisted where
/// `εᵢ = 0` and half-twisted where `εᵢ = 1` (both signs are listed, since
/// the sign depends on the orientation convention), plus the knot circles.
fn cusp_kinds(m: &PretzelFal) -> Vec<CuspKind> {
    let mut kinds = Vec::new();
    if m.twists().iter().any(|&t| !t) {
        kinds.push(CuspKind::Untwisted);
    }
    if m.twists().iter().any(|&t| t) {
        kinds.push(CuspKind::Twisted { positive: true });
        kinds.push(CuspKind::Twisted { positive: false });
    }
    kinds.push(CuspKind::KnotCircle);
    kinds
}

/// Builds the report. A descriptor from a cache may be passed in; it must
/// already have been verified.
pub fn build_report(
    m: &PretzelFal,
    geom: &mut Geometry,
    table: Option<&NeumannReidTable>,
    descriptor: Option<TraceFieldDescriptor>,
) -> Result<ReportDocument, ClassifyError> {
    let n = m.n();
    let bits = geom.precision();
    let desc = match descriptor {
        Some(d) => d,
        None => build_trace_field(n)?,
    };
    let mut cusp_shapes = Vec::new();
    for kind in cusp_kinds(m) {
        let c = geom.cusp_shape(n, kind)?;
        cusp_shapes.push(CuspEntry {
            kind: kind.to_string(),
            exact: c.exact.as_ref().map(|x| x.to_string()),
            numeric: c.numeric.as_ref().map(|z| ComplexNum::new(z, bits)),
            meridian_length: c.meridian_length,
            longitude_lower_bound: c.longitude_lower_bound,
        });
    }
    let f = geom.orbifold_volume_f(n)?;
    let volume = geom.volume(n)?;
    let g = geom.geodesic_data(n)?;
    let arithmeticity = is_arithmetic(n, geom, table)?;
    let sym = symmetry_data(m, geom)?;
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        precision_bits: bits,
        manifold: ManifoldId {
            n,
            twists: m.twist_string(),
            kind: m.kind(),
        },
        cusp_shapes,
        trace_field: TraceFieldEntry {
            min_poly: desc.min_poly.render("x"),
            degree: desc.degree,
            conductor: desc.conductor,
            stabilizer_size: desc.stabilizer.order(),
            generator: desc.generator.to_string(),
        },
        volume: Num::new(&volume, bits),
        f: Num::new(&f, bits),
        geodesic: GeodesicEntry {
            perpendicular_length: Num::new(&g.perpendicular_length, bits),
            closed_length: Num::new(&g.closed_length, bits),
            gram_entry: g.gram_entry.render(),
            gram_numeric: Num::new(&g.gram_numeric, bits),
        },
        arithmeticity,
        commensurability_key: commensurability_key(n),
        symmetry: SymmetryEntry::new(&sym, bits),
    })
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let m = &self.manifold;
        let _ = writeln!(s, "M(n = {}, twists = {})  [{}]", m.n, m.twists, m.kind);
        let _ = writeln!(s, "precision: {} bits", self.precision_bits);
        let t = &self.trace_field;
        let _ = writeln!(
            s,
            "trace field: {} (degree {}, conductor {}, stabilizer {})",
            t.min_poly, t.degree, t.conductor, t.stabilizer_size
        );
        let _ = writeln!(s, "  generator: {}", t.generator);
        let _ = writeln!(s, "cusp shapes:");
        for c in &self.cusp_shapes {
            match (&c.exact, &c.numeric) {
                (Some(e), Some(z)) => {
                    let _ = writeln!(s, "  {:<12} {}  ~ {} + {} i", c.kind, e, z.re, z.im);
                }
                _ => {
                    let _ = writeln!(
                        s,
                        "  {:<12} meridian {}, longitude >= {}",
                        c.kind,
                        c.meridian_length.unwrap_or_default(),
                        c.longitude_lower_bound.unwrap_or_default()
                    );
                }
            }
        }
        let _ = writeln!(s, "volume: {}", self.volume.value);
        let _ = writeln!(s, "f(n): {}", self.f.value);
        let g = &self.geodesic;
        let _ = writeln!(s, "closed geodesic: {}", g.closed_length.value);
        let _ = writeln!(s, "gram entry: {}  ~ {}", g.gram_entry, g.gram_numeric.value);
        let a = &self.arithmeticity;
        let _ = writeln!(s, "verdict: {}", a.verdict);
        for e in &a.evidence {
            let _ = writeln!(s, "  [{}] {}", e.code(), e.detail);
        }
        let _ = writeln!(s, "commensurability class: {}", self.commensurability_key);
        let y = &self.symmetry;
        let _ = writeln!(
            s,
            "symmetry: sym+ {}, sym {}, hidden {}, cover degree {}",
            y.sym_plus, y.sym, y.hidden, y.cover_degree
        );
        if let Some(v) = &y.minimal_orbifold_volume {
            let _ = writeln!(s, "  minimal orbifold volume: {}", v.value);
        }
        let _ = writeln!(s, "  {}", y.note);
        s
    }
}
