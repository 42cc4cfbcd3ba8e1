//! User-supplied table of admissible short geodesic lengths for arithmetic
//! link complements (Neumann–Reid). The values are external data; the crate
//! ships an empty table and never fills one in itself.

use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::hypgeom::{BigReal, RealContext};

/// Lengths below this force non-arithmeticity.
pub const SHORT_GEODESIC_THRESHOLD: &str = "0.862554627";
/// Lengths below this, in an arithmetic link complement, appear in the table.
pub const TABLE_UPPER_LENGTH: &str = "1.9248473002";
pub const ADMISSIBLE_D: [u32; 7] = [1, 2, 3, 7, 11, 15, 19];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NrEntry {
    /// Decimal string as printed in the source table.
    pub length: String,
    pub d: u32,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NeumannReidTable {
    pub entries: Vec<NrEntry>,
}

impl NeumannReidTable {
    /// Parses and validates a table: every length must be a decimal in
    /// `(0.862554627, 1.9248473002]`, every `d` admissible, every entry
    /// sourced.
    pub fn from_json(s: &str) -> Result<Self, ClassifyError> {
        let table: Self =
            serde_json::from_str(s).map_err(|e| ClassifyError::NrTable(e.to_string()))?;
        let ctx = RealContext::new(128).expect("valid precision");
        let lo = ctx.parse(SHORT_GEODESIC_THRESHOLD).expect("constant");
        let hi = ctx.parse(TABLE_UPPER_LENGTH).expect("constant");
        for (i, e) in table.entries.iter().enumerate() {
            let bad = |why: &str| ClassifyError::NrTable(format!("entry {i}: {why}"));
            let len = parse_plain_decimal(&e.length, &ctx).ok_or_else(|| bad("length is not a decimal"))?;
            if !(len > lo && len <= hi) {
                return Err(bad(&format!(
                    "length {} outside ({SHORT_GEODESIC_THRESHOLD}, {TABLE_UPPER_LENGTH}]",
                    e.length
                )));
            }
            if !ADMISSIBLE_D.contains(&e.d) {
                return Err(bad(&format!("d = {} is not one of {ADMISSIBLE_D:?}", e.d)));
            }
            if e.source.trim().is_empty() {
                return Err(bad("source is required"));
            }
        }
        Ok(table)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry whose printed length agrees with `length` to within half a unit
    /// in its last printed digit.
    pub fn find_match(&self, length: &BigReal, ctx: &RealContext) -> Option<&NrEntry> {
        self.entries.iter().find(|e| {
            let Some(v) = parse_plain_decimal(&e.length, ctx) else {
                return false;
            };
            let places = e.length.split_once('.').map_or(0, |(_, f)| f.len());
            let tol = &ctx.ten_pow_neg(places) * &ctx.ratio(1, 2);
            (&v - length).abs() <= tol
        })
    }
}

fn parse_plain_decimal(s: &str, ctx: &RealContext) -> Option<BigReal> {
    let t = s.trim();
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    let digits_ok = !int.is_empty()
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.chars().all(|c| c.is_ascii_digit());
    if !digits_ok {
        return None;
    }
    ctx.parse(t).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_loads() {
        assert!(NeumannReidTable::from_json("[]").unwrap().is_empty());
    }

    #[test]
    fn validation() {
        let ok = r#"[{"length":"1.5","d":3,"source":"test fixture"}]"#;
        assert_eq!(NeumannReidTable::from_json(ok).unwrap().entries.len(), 1);
        let low = r#"[{"length":"0.5","d":3,"source":"x"}]"#;
        assert!(NeumannReidTable::from_json(low).is_err());
        let edge = r#"[{"length":"0.862554627","d":3,"source":"x"}]"#;
        assert!(NeumannReidTable::from_json(edge).is_err());
        let top = r#"[{"length":"1.9248473002","d":3,"source":"x"}]"#;
        assert!(NeumannReidTable::from_json(top).is_ok());
        let bad_d = r#"[{"length":"1.5","d":5,"source":"x"}]"#;
        assert!(NeumannReidTable::from_json(bad_d).is_err());
        let unsourced = r#"[{"length":"1.5","d":3,"source":" "}]"#;
        assert!(NeumannReidTable::from_json(unsourced).is_err());
        let missing = r#"[{"length":"1.5","d":3}]"#;
        assert!(NeumannReidTable::from_json(missing).is_err());
        let sci = r#"[{"length":"1.5e0","d":3,"source":"x"}]"#;
        assert!(NeumannReidTable::from_json(sci).is_err());
    }

    #[test]
    fn matching_uses_printed_digits() {
        let t = NeumannReidTable::from_json(r#"[{"length":"1.50","d":1,"source":"x"}]"#).unwrap();
        let ctx = RealContext::new(128).unwrap();
        assert!(t.find_match(&ctx.parse("1.504").unwrap(), &ctx).is_some());
        assert!(t.find_match(&ctx.parse("1.506").unwrap(), &ctx).is_none());
    }
}
