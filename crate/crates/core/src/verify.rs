//! Self-verification suites: the quantitative checks behind each invariant,
//! runnable from the command line. Ranges are processed in parallel and
//! results are reported in a fixed order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::euler_totient;
use crate::classify::{
    commensurable, hidden_symmetry_bounds, hidden_symmetry_threshold, is_arithmetic,
    symmetry_data, PretzelFal, SymCount, SHORT_GEODESIC_THRESHOLD, TABLE_UPPER_LENGTH,
};
use crate::crushtacean::{
    automorphisms, build_pretzel_crushtacean, cdw_criterion, validate_forest, ForestTree,
    Orientation, SpanningForest,
};
use crate::exactfield::{BigInt, BigRational};
use crate::hypgeom::{gram_entry_exact, vinberg_entry_is_integral, Geometry, GramEntry};
use crate::tracefield::{
    build_trace_field, cm_field_check, descriptors_equal, fields_equal, fields_equal_by_embedding,
    generator_square_identity, numeric_fields_equal, TraceFieldDescriptor,
};

/// Upper end of the exact field ranges.
pub const FIELD_RANGE_MAX: u64 = 150;
/// Largest `n` for the literal re-embedding comparison.
pub const EMBEDDING_RANGE_MAX: u64 = 12;
pub const MONOTONE_RANGE_MAX: u64 = 10_000;
pub const LIMIT_N: u64 = 1_000_000;
pub const LIMIT_TOL_EXP: usize = 9;
pub const RATIO_TOL_EXP: usize = 20;
pub const IDENTITY_TOL_EXP: usize = 30;
pub const EXHAUSTIVE_CDW_MAX: usize = 10;
pub const RANDOM_CDW_MAX: usize = 30;
pub const RANDOM_CDW_SAMPLES: usize = 1000;
pub const ARITHMETIC_RANGE_MAX: u64 = 500;
pub const HIDDEN_SCAN_SPAN: u64 = 2000;
pub const SEED: u64 = 0x5eed_f41;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Fields,
    Geometry,
    Graphs,
    Symmetry,
}

impl Suite {
    pub const PARTS: [Suite; 4] = [Suite::Fields, Suite::Geometry, Suite::Graphs, Suite::Symmetry];

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Fields => "fields",
            Suite::Geometry => "geometry",
            Suite::Graphs => "graphs",
            Suite::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "fields" => Ok(Suite::Fields),
            "geometry" => Ok(Suite::Geometry),
            "graphs" => Ok(Suite::Graphs),
            "symmetry" => Ok(Suite::Symmetry),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: Vec<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub cases: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn from_checks(suite: Suite, checks: Vec<CheckResult>) -> Self {
        Self {
            suite,
            passed: checks.iter().filter(|c| c.passed).count(),
            failed: checks.iter().filter(|c| !c.passed).count(),
            cases: checks.iter().map(|c| c.cases).sum(),
            checks,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Outcome of one check body: number of cases examined and failure notes.
type Outcome = Result<(u64, Vec<String>), String>;

fn check(suite: Suite, name: &str, body: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let (cases, failures) = match body() {
        Ok(r) => r,
        Err(e) => (0, vec![e]),
    };
    CheckResult {
        suite,
        name: name.to_string(),
        passed: failures.is_empty(),
        cases,
        failures,
        millis: start.elapsed().as_millis() as u64,
    }
}

fn geom(bits: usize) -> Result<Geometry, String> {
    Geometry::new(bits).map_err(|e| e.to_string())
}

fn collect(results: Vec<Option<String>>) -> (u64, Vec<String>) {
    let cases = results.len() as u64;
    (cases, results.into_iter().flatten().collect())
}

pub fn run(suite: Suite, bits: usize) -> VerifySummary {
    let mut checks = Vec::new();
    let parts: Vec<Suite> = match suite {
        Suite::All => Suite::PARTS.to_vec(),
        s => vec![s],
    };
    for s in parts {
        checks.extend(match s {
            Suite::Fields => fields_suite(),
            Suite::Geometry => geometry_suite(bits),
            Suite::Graphs => graphs_suite(),
            Suite::Symmetry => symmetry_suite(bits),
            Suite::All => unreachable!(),
        });
    }
    VerifySummary::from_checks(suite, checks)
}

pub fn fields_suite() -> Vec<CheckResult> {
    let s = Suite::Fields;
    let mut out = Vec::new();
    out.push(check(s, "quadratic minimal polynomials", || {
        let mut fails = Vec::new();
        for (n, want) in [(3, "x^2+1"), (4, "x^2+2"), (6, "x^2+3")] {
            let d = build_trace_field(n).map_err(|e| e.to_string())?;
            let got = d.min_poly.render("x");
            if got != want {
                fails.push(format!("n = {n}: {got} != {want}"));
            }
        }
        Ok((3, fails))
    }));
    let descriptors: Vec<Result<TraceFieldDescriptor, String>> = (3..=FIELD_RANGE_MAX)
        .into_par_iter()
        .map(|n| build_trace_field(n).map_err(|e| format!("n = {n}: {e}")))
        .collect();
    out.push(check(s, "degree law", || {
        let r = descriptors
            .par_iter()
            .map(|d| match d {
                Err(e) => Some(e.clone()),
                Ok(d) => {
                    let phi = euler_totient(d.n);
                    if d.degree as u64 != phi {
                        Some(format!("n = {}: degree {} != phi = {phi}", d.n, d.degree))
                    } else if let Err(e) = d.verify() {
                        Some(e.to_string())
                    } else {
                        None
                    }
                }
            })
            .collect();
        Ok(collect(r))
    }));
    out.push(check(s, "CM structure and generator square", || {
        let r = descriptors
            .par_iter()
            .filter_map(|d| d.as_ref().ok())
            .map(|d| {
                let ok = cm_field_check(d).unwrap_or(false)
                    && generator_square_identity(d).unwrap_or(false);
                (!ok).then(|| format!("n = {}", d.n))
            })
            .collect();
        Ok(collect(r))
    }));
    out.push(check(s, "pairwise distinctness", || {
        let ds: Vec<&TraceFieldDescriptor> =
            descriptors.iter().map(|d| d.as_ref().map_err(String::clone)).collect::<Result<_, _>>()?;
        let pairs: Vec<(usize, usize)> = (0..ds.len())
            .flat_map(|i| (i + 1..ds.len()).map(move |j| (i, j)))
            .collect();
        let r = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (m, n) = (ds[i].n, ds[j].n);
                if descriptors_equal(ds[i], ds[j]) {
                    Some(format!("({m}, {n}): exact comparison says equal"))
                } else if numeric_fields_equal(m, n) {
                    Some(format!("({m}, {n}): numeric comparison disagrees"))
                } else {
                    None
                }
            })
            .collect();
        Ok(collect(r))
    }));
    out.push(check(s, "re-embedding agrees with stabilizers", || {
        let pairs: Vec<(u64, u64)> = (3..=EMBEDDING_RANGE_MAX)
            .flat_map(|m| (m..=EMBEDDING_RANGE_MAX).map(move |n| (m, n)))
            .collect();
        let r = pairs
            .par_iter()
            .map(|&(m, n)| {
                let a = fields_equal(m, n).map_err(|e| e.to_string());
                let b = fields_equal_by_embedding(m, n).map_err(|e| e.to_string());
                match (a, b) {
                    (Ok(a), Ok(b)) if a == b && a == (m == n) => None,
                    (a, b) => Some(format!("({m}, {n}): {a:?} vs {b:?}")),
                }
            })
            .collect();
        Ok(collect(r))
    }));
    out
}

pub fn geometry_suite(bits: usize) -> Vec<CheckResult> {
    let s = Suite::Geometry;
    let mut out = Vec::new();
    out.push(check(s, "volume of M_6 is 20 figure-eight volumes", || {
        let mut g = geom(bits.max(256))?;
        let v = g.volume(6).map_err(|e| e.to_string())?;
        let ratio = &v / &g.figure_eight_volume();
        let err = (&ratio - &g.ctx().int(20)).abs();
        let tol = g.ctx().ten_pow_neg(RATIO_TOL_EXP);
        Ok((1, if err < tol { vec![] } else { vec![format!("ratio {ratio}")] }))
    }));
    out.push(check(s, "f(n) increasing with limit 2L(pi/4)", || {
        let fs: Vec<Result<_, String>> = (3..=MONOTONE_RANGE_MAX)
            .into_par_iter()
            .map_init(
                || Geometry::new(bits),
                |g, n| match g {
                    Ok(g) => g.orbifold_volume_f(n).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                },
            )
            .collect();
        let fs: Vec<_> = fs.into_iter().collect::<Result<_, _>>()?;
        let mut fails = Vec::new();
        for (i, w) in fs.windows(2).enumerate() {
            if w[0] >= w[1] {
                fails.push(format!("f({}) >= f({})", i + 3, i + 4));
            }
        }
        let mut g = geom(bits)?;
        let lim = g.f_limit();
        if fs.last().is_some_and(|f| *f >= lim) {
            fails.push("f exceeds its limit".into());
        }
        let far = g.orbifold_volume_f(LIMIT_N).map_err(|e| e.to_string())?;
        if (&far - &lim).abs() >= g.ctx().ten_pow_neg(LIMIT_TOL_EXP) {
            fails.push(format!("|f({LIMIT_N}) - 2L(pi/4)| too large"));
        }
        if lim.to_decimal(6) != "0.915966" && !lim.to_decimal(7).starts_with("0.915965") {
            fails.push(format!("2L(pi/4) = {}", lim.to_decimal(10)));
        }
        Ok((fs.len() as u64 + 2, fails))
    }));
    out.push(check(s, "Lobachevsky identities", || {
        let mut g = geom(bits.max(256))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let tol = g.ctx().ten_pow_neg(IDENTITY_TOL_EXP);
        let mut fails = Vec::new();
        for _ in 0..20 {
            let t: f64 = rng.gen_range(-3.0..3.0);
            let theta = g.ctx().parse(&format!("{t:.17}")).map_err(|e| e.to_string())?;
            let pi = g.ctx().pi();
            let half_pi = g.ctx().pi_ratio(1, 2);
            let l = g.lobachevsky(&theta);
            let odd = &g.lobachevsky(&-theta.clone()) + &l;
            let per = &g.lobachevsky(&(&theta + &pi)) - &l;
            let two = g.ctx().int(2);
            let dup = &(&g.lobachevsky(&(&theta * &two)) - &(&l * &two))
                - &(&g.lobachevsky(&(&theta + &half_pi)) * &two);
            for (what, r) in [("odd", odd), ("period", per), ("duplication", dup)] {
                if r.abs() >= tol {
                    fails.push(format!("{what} at {t}: residual {}", r.to_decimal(5)));
                }
            }
        }
        Ok((60, fails))
    }));
    out.push(check(s, "Vinberg witness at n = 6", || {
        let want = GramEntry::Rational(BigRational::new(BigInt::from(-10), BigInt::from(3)));
        let e = gram_entry_exact(6).map_err(|e| e.to_string())?;
        let v = vinberg_entry_is_integral(6).map_err(|e| e.to_string())?;
        let mut fails = Vec::new();
        if e != want {
            fails.push(format!("entry {}", e.render()));
        }
        if v.integral {
            fails.push("entry reported integral".into());
        }
        Ok((2, fails))
    }));
    out.push(check(s, "geodesic thresholds", || {
        let mut g = geom(bits.max(256))?;
        let len = |g: &mut Geometry, n| g.geodesic_data(n).map(|d| d.closed_length);
        let l7 = len(&mut g, 7).map_err(|e| e.to_string())?;
        let l14 = len(&mut g, 14).map_err(|e| e.to_string())?;
        let l15 = len(&mut g, 15).map_err(|e| e.to_string())?;
        let short = g.ctx().parse(SHORT_GEODESIC_THRESHOLD).map_err(|e| e.to_string())?;
        let upper = g.ctx().parse(TABLE_UPPER_LENGTH).map_err(|e| e.to_string())?;
        let mut fails = Vec::new();
        if !(l15 < short && short < l14) {
            fails.push(format!("l(15) = {l15}, l(14) = {l14}"));
        }
        if l7 >= upper {
            fails.push(format!("l(7) = {l7}"));
        }
        Ok((3, fails))
    }));
    out.push(check(s, "circle packing tangency", || {
        let r = (3..=200u64)
            .into_par_iter()
            .map_init(
                || Geometry::new(bits),
                |g, n| {
                    let g = g.as_mut().ok()?;
                    let tol = g.ctx().ten_pow_neg(IDENTITY_TOL_EXP);
                    match g.packing_radii(n) {
                        Ok(p) if p.sec_residual < tol => None,
                        Ok(p) => Some(format!("n = {n}: residual {}", p.sec_residual)),
                        Err(e) => Some(e.to_string()),
                    }
                },
            )
            .collect();
        Ok(collect(r))
    }));
    out
}

fn bits_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

pub fn graphs_suite() -> Vec<CheckResult> {
    let s = Suite::Graphs;
    let mut out = Vec::new();
    out.push(check(s, "involution criterion, all twist vectors", || {
        let mut cases = 0;
        let mut fails = Vec::new();
        for n in 3..=EXHAUSTIVE_CDW_MAX {
            let g = build_pretzel_crushtacean(n).map_err(|e| e.to_string())?;
            let r: Vec<Option<String>> = (0..1u64 << n)
                .into_par_iter()
                .map(|mask| match cdw_criterion(&g, &bits_of(mask, n)) {
                    Ok(r) if r.holds => None,
                    Ok(_) => Some(format!("n = {n}, mask {mask:b}")),
                    Err(e) => Some(e.to_string()),
                })
                .collect();
            let (c, f) = collect(r);
            cases += c;
            fails.extend(f);
        }
        Ok((cases, fails))
    }));
    out.push(check(s, "involution criterion, random twist vectors", || {
        let mut cases = 0;
        let mut fails = Vec::new();
        for n in 3..=RANDOM_CDW_MAX {
            let g = build_pretzel_crushtacean(n).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
            let eps: Vec<Vec<bool>> = (0..RANDOM_CDW_SAMPLES)
                .map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let r: Vec<Option<String>> = eps
                .par_iter()
                .map(|e| match cdw_criterion(&g, e) {
                    Ok(r) if r.holds => None,
                    Ok(_) => Some(format!("n = {n}, twists {e:?}")),
                    Err(e) => Some(e.to_string()),
                })
                .collect();
            let (c, f) = collect(r);
            cases += c;
            fails.extend(f);
        }
        Ok((cases, fails))
    }));
    out.push(check(s, "prism automorphism counts", || {
        let mut fails = Vec::new();
        for n in 3..=8usize {
            let g = build_pretzel_crushtacean(n).map_err(|e| e.to_string())?;
            let auts = automorphisms(&g);
            let pres = auts
                .iter()
                .filter(|a| a.orientation == Orientation::Preserving)
                .count();
            if auts.len() != 4 * n || pres != 2 * n {
                fails.push(format!("n = {n}: {} total, {pres} preserving", auts.len()));
            }
        }
        Ok((6, fails))
    }));
    out.push(check(s, "edge-symmetric forest on P_5", || {
        let g = build_pretzel_crushtacean(5).map_err(|e| e.to_string())?;
        let tree = |edges: &[usize], middle| ForestTree {
            edges: edges.to_vec(),
            middle,
        };
        let f = SpanningForest {
            trees: vec![tree(&[0, 5, 10], 0), tree(&[2, 7, 12], 2), tree(&[4], 4)],
        };
        let ok = validate_forest(&g, &f).map_err(|e| e.to_string())?;
        Ok((1, if ok { vec![] } else { vec!["rejected".into()] }))
    }));
    out
}

pub fn symmetry_suite(bits: usize) -> Vec<CheckResult> {
    let s = Suite::Symmetry;
    let mut out = Vec::new();
    out.push(check(s, "arithmetic exactly at n = 3, 4", || {
        let r = (3..=ARITHMETIC_RANGE_MAX)
            .into_par_iter()
            .map_init(
                || Geometry::new(bits),
                |g, n| {
                    let g = g.as_mut().ok()?;
                    match is_arithmetic(n, g, None) {
                        Ok(v) if v.is_arithmetic() != (n == 3 || n == 4) => {
                            Some(format!("n = {n}: {:?}", v.verdict))
                        }
                        Ok(v) if !v.is_consistent() => Some(format!("n = {n}: inconsistent evidence")),
                        Ok(_) => None,
                        Err(e) => Some(format!("n = {n}: {e}")),
                    }
                },
            )
            .collect();
        Ok(collect(r))
    }));
    out.push(check(s, "symmetry accounting", || {
        let r = (5..=FIELD_RANGE_MAX)
            .into_par_iter()
            .map_init(
                || Geometry::new(bits),
                |g, n| {
                    let g = g.as_mut().ok()?;
                    let plain = PretzelFal::untwisted(n).ok()?;
                    let prime = PretzelFal::prime_family(n).ok()?;
                    let a = symmetry_data(&plain, g).ok()?;
                    let b = symmetry_data(&prime, g).ok()?;
                    use SymCount::*;
                    let ok = (a.sym_plus, a.sym, a.hidden, a.cover_degree)
                        == (Finite(8 * n), Finite(16 * n), Finite(0), Finite(16 * n))
                        && (b.sym_plus, b.sym, b.hidden) == (Unstated, Finite(8), Finite(2 * n))
                        && b.cover_identity_holds() == Some(true);
                    (!ok).then(|| format!("n = {n}"))
                },
            )
            .collect();
        Ok(collect(r))
    }));
    out.push(check(s, "hidden-symmetry bracket", || {
        let mut lo = geom(128)?;
        let mut hi = geom(256)?;
        let eps_lo = lo.ctx().ratio(1, 100);
        let eps_hi = hi.ctx().ratio(1, 100);
        let n0 = hidden_symmetry_threshold(&eps_lo, &mut lo).map_err(|e| e.to_string())?;
        let n0_hi = hidden_symmetry_threshold(&eps_hi, &mut hi).map_err(|e| e.to_string())?;
        let mut fails = Vec::new();
        if n0 != n0_hi {
            fails.push(format!("n0 = {n0} at 128 bits, {n0_hi} at 256 bits"));
        }
        let r: Vec<Option<String>> = (n0.max(5)..n0.max(5) + HIDDEN_SCAN_SPAN)
            .into_par_iter()
            .map_init(
                || Geometry::new(bits),
                |g, n| {
                    let g = g.as_mut().ok()?;
                    let eps = g.ctx().ratio(1, 100);
                    match hidden_symmetry_bounds(n, &eps, g) {
                        Ok(b) if b.contains_2n => None,
                        Ok(_) => Some(format!("n = {n}: 2n outside bracket")),
                        Err(e) => Some(e.to_string()),
                    }
                },
            )
            .collect();
        let (cases, f) = collect(r);
        fails.extend(f);
        if n0 > 5 {
            match hidden_symmetry_bounds(n0 - 1, &eps_lo, &mut lo) {
                Ok(b) if !b.contains_2n => {}
                _ => fails.push(format!("n0 - 1 = {} also satisfies the bracket", n0 - 1)),
            }
        }
        Ok((cases + 2, fails))
    }));
    out.push(check(s, "commensurability classes are the fibers of n", || {
        let mut g = geom(bits)?;
        let mut items = Vec::new();
        for n in 3..=8u64 {
            items.push(PretzelFal::untwisted(n).map_err(|e| e.to_string())?);
            items.push(PretzelFal::prime_family(n).map_err(|e| e.to_string())?);
            let alt: String = (0..n).map(|i| if i % 2 == 0 { '1' } else { '0' }).collect();
            items.push(PretzelFal::from_bits(n, Some(&alt)).map_err(|e| e.to_string())?);
        }
        let mut fails = Vec::new();
        let mut cases = 0;
        for a in &items {
            for b in &items {
                cases += 1;
                match commensurable(a, b, &mut g) {
                    Ok(r) if r.commensurable == (a.n() == b.n()) => {}
                    Ok(r) => fails.push(format!("{a} vs {b}: {}", r.reason)),
                    Err(e) => fails.push(format!("{a} vs {b}: {e}")),
                }
            }
        }
        Ok((cases, fails))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in ["all", "fields", "geometry", "graphs", "symmetry"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("other".parse::<Suite>().is_err());
    }

    #[test]
    fn graph_suite_passes() {
        let checks = graphs_suite();
        for c in &checks {
            assert!(c.passed, "{}: {:?}", c.name, c.failures);
        }
    }
}
