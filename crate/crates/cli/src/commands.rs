use std::fs;
use std::path::Path;

use pretzel_fal::cache::TraceFieldCache;
use pretzel_fal::classify::{
    commensurability_key, commensurable, hidden_symmetry_bounds, is_arithmetic,
    max_hidden_symmetries, parse_bits, ClassifyError, EvidenceRule, EvidenceStatus,
    NeumannReidTable, PretzelFal,
};
use pretzel_fal::crushtacean::{
    build_pretzel_crushtacean, cdw_criterion, validate_forest, EmbeddedGraph, SpanningForest,
};
use pretzel_fal::hypgeom::{decimal_digits, BigReal, Geometry};
use pretzel_fal::report::{build_report, Num};
use pretzel_fal::tracefield::{common_level_stabilizers, descriptors_equal, TraceFieldDescriptor};
use pretzel_fal::verify::{self, Suite};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{render_rows, Table};
use crate::{usage, Command, Failure, Format, Global};

type CmdResult = Result<String, Failure>;

pub fn dispatch(cmd: Command, g: &Global) -> CmdResult {
    match cmd {
        Command::Report {
            n,
            twists,
            nr_table,
        } => report(g, n, twists.as_deref(), nr_table.as_deref()),
        Command::Fields { table, max, equal } => match (table, max, equal) {
            (_, Some(max), None) => fields_table(g, max),
            (false, None, Some(mn)) => fields_equal(g, mn[0], mn[1]),
            _ => Err(usage("use either --table --max M or --equal M N")),
        },
        Command::Classify { range, nr_table } => classify(g, &range, nr_table.as_deref()),
        Command::Verify { suite } => verify_cmd(g, &suite),
        Command::Graph {
            file,
            pretzel,
            twists,
            forest,
        } => graph(g, file.as_deref(), pretzel, twists.as_deref(), forest.as_deref()),
        Command::Commensurable { a, b } => commensurable_cmd(g, &a, &b),
        Command::HiddenBounds { n, epsilon } => hidden_bounds(g, n, &epsilon),
        Command::MaxHidden { n, volume, v0 } => max_hidden(g, n, volume.as_deref(), v0.as_deref()),
    }
}

fn geometry(g: &Global) -> Result<Geometry, Failure> {
    Geometry::new(g.precision).map_err(usage)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn classify_failure(e: ClassifyError) -> Failure {
    match e {
        ClassifyError::MissingV0 => Failure::MissingData(e.to_string()),
        e => usage(e),
    }
}

fn open_cache(g: &Global) -> Result<Option<TraceFieldCache>, Failure> {
    match &g.cache {
        None => Ok(None),
        Some(p) => TraceFieldCache::load(p)
            .map(Some)
            .map_err(|e| Failure::Verification(format!("{}: {e}", p.display()))),
    }
}

fn close_cache(g: &Global, cache: Option<TraceFieldCache>) -> Result<(), Failure> {
    if let (Some(p), Some(c)) = (&g.cache, cache) {
        if c.is_dirty() {
            c.save(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        }
    }
    Ok(())
}

fn descriptor(
    cache: &mut Option<TraceFieldCache>,
    n: u64,
) -> Result<TraceFieldDescriptor, Failure> {
    match cache {
        Some(c) => c.get_or_build(n).map_err(usage),
        None => pretzel_fal::tracefield::build_trace_field(n).map_err(usage),
    }
}

/// Loads a table; an unreadable or invalid file is reported on stderr and
/// treated as absent.
fn load_table(path: Option<&Path>) -> Option<NeumannReidTable> {
    let path = path?;
    let loaded = fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| NeumannReidTable::from_json(&s).map_err(|e| e.to_string()));
    match loaded {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!(
                "warning: table {} not loaded ({e}); corroboration unavailable",
                path.display()
            );
            None
        }
    }
}

fn report(g: &Global, n: u64, twists: Option<&str>, table: Option<&Path>) -> CmdResult {
    let m = PretzelFal::from_bits(n, twists).map_err(usage)?;
    let mut geom = geometry(g)?;
    let table = load_table(table);
    let mut cache = open_cache(g)?;
    let desc = descriptor(&mut cache, n)?;
    let r = build_report(&m, &mut geom, table.as_ref(), Some(desc)).map_err(classify_failure)?;
    close_cache(g, cache)?;
    match g.format {
        Format::Json => Ok(to_json(&r)),
        Format::Text => Ok(r.render_text()),
        Format::Csv => Err(usage("report supports --format json or text")),
    }
}

#[derive(Serialize)]
struct FieldRow {
    n: u64,
    phi: u64,
    min_poly: String,
    conductor: u64,
    stabilizer_size: usize,
}

fn fields_table(g: &Global, max: u64) -> CmdResult {
    if max < 3 {
        return Err(usage(format!("--max must be at least 3, got {max}")));
    }
    let mut cache = open_cache(g)?;
    let built: Vec<Result<TraceFieldDescriptor, Failure>> = match &cache {
        Some(c) => (3..=max)
            .map(|n| match c.get(n) {
                Some(d) => Ok(d.clone()),
                None => pretzel_fal::tracefield::build_trace_field(n).map_err(usage),
            })
            .collect(),
        None => (3..=max)
            .into_par_iter()
            .map(|n| pretzel_fal::tracefield::build_trace_field(n).map_err(usage))
            .collect(),
    };
    let mut rows = Vec::new();
    for d in built {
        let d = d?;
        rows.push(FieldRow {
            n: d.n,
            phi: d.degree as u64,
            min_poly: d.min_poly.render("x"),
            conductor: d.conductor,
            stabilizer_size: d.stabilizer.order(),
        });
        if let Some(c) = cache.as_mut() {
            if c.get(d.n).is_none() {
                c.insert(d);
            }
        }
    }
    close_cache(g, cache)?;
    let table = Table {
        header: vec!["n", "phi", "min_poly", "conductor", "stabilizer_size"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.phi.to_string(),
                    r.min_poly.clone(),
                    r.conductor.to_string(),
                    r.stabilizer_size.to_string(),
                ]
            })
            .collect(),
    };
    render_rows(g.format, &table, &rows)
}

fn fields_equal(g: &Global, m: u64, n: u64) -> CmdResult {
    let mut cache = open_cache(g)?;
    let a = descriptor(&mut cache, m)?;
    let b = descriptor(&mut cache, n)?;
    close_cache(g, cache)?;
    let equal = descriptors_equal(&a, &b);
    let (sa, sb) = common_level_stabilizers(&a, &b).map_err(usage)?;
    match g.format {
        Format::Json => Ok(to_json(&json!({
            "m": m,
            "n": n,
            "equal": equal,
            "level": sa.modulus(),
            "stabilizer_m": sa.members(),
            "stabilizer_n": sb.members(),
        }))),
        _ => Ok(format!(
            "{equal}\nlevel {}\nstab(kM_{m}) = {:?}\nstab(kM_{n}) = {:?}\n",
            sa.modulus(),
            sa.members(),
            sb.members()
        )),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || usage(format!("range must look like A..B with 3 <= A <= B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a < 3 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct ClassifyRow {
    n: u64,
    verdict: String,
    evidence: String,
    corroboration: String,
    commensurability_key: String,
    volume: Num,
    f: Num,
}

fn corroboration(v: &pretzel_fal::classify::ArithmeticityVerdict) -> String {
    let e = v.evidence.iter().find(|e| {
        matches!(
            e.rule,
            EvidenceRule::GeodesicThreshold | EvidenceRule::NrTableComparison
        )
    });
    match e {
        None => "none".into(),
        Some(e) => match (e.rule, e.status) {
            (_, EvidenceStatus::Unavailable) => "unavailable".into(),
            (EvidenceRule::GeodesicThreshold, _) => "threshold".into(),
            (_, EvidenceStatus::Inconclusive) => "table-match".into(),
            _ => "table-absent".into(),
        },
    }
}

fn classify(g: &Global, range: &str, table: Option<&Path>) -> CmdResult {
    let (a, b) = parse_range(range)?;
    geometry(g)?;
    let table = load_table(table);
    let bits = g.precision;
    let rows: Vec<Result<ClassifyRow, Failure>> = (a..=b)
        .into_par_iter()
        .map_init(
            || Geometry::new(bits).expect("precision already validated"),
            |geom, n| {
                let v = is_arithmetic(n, geom, table.as_ref()).map_err(classify_failure)?;
                let f = geom.orbifold_volume_f(n).map_err(usage)?;
                let vol = geom.volume(n).map_err(usage)?;
                Ok(ClassifyRow {
                    n,
                    verdict: if v.is_arithmetic() {
                        "arithmetic".into()
                    } else {
                        "non-arithmetic".into()
                    },
                    evidence: v.codes(),
                    corroboration: corroboration(&v),
                    commensurability_key: commensurability_key(n),
                    volume: Num::new(&vol, bits),
                    f: Num::new(&f, bits),
                })
            },
        )
        .collect();
    let rows: Vec<ClassifyRow> = rows.into_iter().collect::<Result<_, _>>()?;
    let table = Table {
        header: vec!["n", "verdict", "evidence", "corroboration", "key", "volume", "f"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.verdict.clone(),
                    r.evidence.clone(),
                    r.corroboration.clone(),
                    r.commensurability_key.clone(),
                    r.volume.value.clone(),
                    r.f.value.clone(),
                ]
            })
            .collect(),
    };
    render_rows(g.format, &table, &rows)
}

fn verify_cmd(g: &Global, suite: &str) -> CmdResult {
    let suite: Suite = suite.parse().map_err(usage)?;
    let mut summary = verify::run(suite, g.precision.max(pretzel_fal::hypgeom::MIN_PRECISION));
    if let Some(p) = &g.cache {
        let start = std::time::Instant::now();
        let res = TraceFieldCache::load(p);
        summary.checks.push(verify::CheckResult {
            suite,
            name: "cache re-verification".into(),
            passed: res.is_ok(),
            cases: res.as_ref().map_or(0, |c| c.len() as u64),
            failures: res.err().map(|e| e.to_string()).into_iter().collect(),
            millis: start.elapsed().as_millis() as u64,
        });
        summary = verify::VerifySummary::from_checks(suite, summary.checks);
    }
    let out = match g.format {
        Format::Json => to_json(&summary),
        _ => {
            let mut s = String::new();
            for c in &summary.checks {
                s.push_str(&format!(
                    "{} [{}] {} ({} cases, {} ms)\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.cases,
                    c.millis
                ));
                for f in c.failures.iter().take(10) {
                    s.push_str(&format!("    {f}\n"));
                }
            }
            s.push_str(&format!(
                "{} passed, {} failed, {} cases\n",
                summary.passed, summary.failed, summary.cases
            ));
            s
        }
    };
    if summary.ok() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification(format!("{} check(s) failed", summary.failed)))
    }
}

fn graph(
    g: &Global,
    file: Option<&Path>,
    pretzel: Option<usize>,
    twists: Option<&str>,
    forest: Option<&Path>,
) -> CmdResult {
    let graph = match (file, pretzel) {
        (Some(p), None) => {
            let s = fs::read_to_string(p)
                .map_err(|e| Failure::MissingData(format!("{}: {e}", p.display())))?;
            EmbeddedGraph::from_json(&s).map_err(usage)?
        }
        (None, Some(n)) => {
            let graph = build_pretzel_crushtacean(n).map_err(usage)?;
            if twists.is_none() && forest.is_none() {
                return Ok(graph.to_json() + "\n");
            }
            graph
        }
        _ => return Err(usage("give exactly one of --file or --pretzel")),
    };
    let mut out = serde_json::Map::new();
    out.insert("vertices".into(), json!(graph.vertex_count()));
    out.insert("edges".into(), json!(graph.edge_count()));
    out.insert("genus".into(), json!(graph.genus()));
    let green = graph.green_edges().len();
    let bits = match twists {
        Some(t) => parse_bits(t).map_err(usage)?,
        None => vec![false; green],
    };
    let cdw = cdw_criterion(&graph, &bits).map_err(usage)?;
    out.insert("criterion_holds".into(), json!(cdw.holds));
    out.insert(
        "edges_checked".into(),
        json!(cdw
            .edges
            .iter()
            .map(|c| json!({
                "edge": c.edge,
                "twisted": c.twisted,
                "required": c.required,
                "found": c.witness.is_some(),
            }))
            .collect::<Vec<_>>()),
    );
    if let Some(fp) = forest {
        let s = fs::read_to_string(fp)
            .map_err(|e| Failure::MissingData(format!("{}: {e}", fp.display())))?;
        let f: SpanningForest = serde_json::from_str(&s).map_err(usage)?;
        let ok = validate_forest(&graph, &f).map_err(usage)?;
        out.insert("forest_edge_symmetric".into(), json!(ok));
    }
    let v = serde_json::Value::Object(out);
    match g.format {
        Format::Json => Ok(to_json(&v)),
        _ => {
            let mut s = format!(
                "criterion holds: {}\n",
                cdw.holds
            );
            for c in &cdw.edges {
                s.push_str(&format!(
                    "  edge {:>3} {} needs {:?}: {}\n",
                    c.edge,
                    if c.twisted { "twisted  " } else { "untwisted" },
                    c.required,
                    if c.witness.is_some() { "found" } else { "none" }
                ));
            }
            if let Some(f) = v.get("forest_edge_symmetric") {
                s.push_str(&format!("forest edge-symmetric: {f}\n"));
            }
            Ok(s)
        }
    }
}

fn commensurable_cmd(g: &Global, a: &str, b: &str) -> CmdResult {
    let a: PretzelFal = a.parse().map_err(usage)?;
    let b: PretzelFal = b.parse().map_err(usage)?;
    let mut geom = geometry(g)?;
    let r = commensurable(&a, &b, &mut geom).map_err(classify_failure)?;
    match g.format {
        Format::Json => Ok(to_json(&r)),
        _ => Ok(format!("{}\n{}\n", r.commensurable, r.reason)),
    }
}

fn parse_real(s: &str, bits: usize, what: &str) -> Result<BigReal, Failure> {
    BigReal::parse(s, bits).map_err(|e| usage(format!("{what}: {e}")))
}

fn hidden_bounds(g: &Global, n: u64, epsilon: &str) -> CmdResult {
    let mut geom = geometry(g)?;
    let eps = parse_real(epsilon, g.precision, "epsilon")?;
    let b = hidden_symmetry_bounds(n, &eps, &mut geom).map_err(classify_failure)?;
    let bits = g.precision;
    let v = json!({
        "n": n,
        "epsilon": epsilon,
        "lower": Num::new(&b.lower, bits),
        "upper": Num::new(&b.upper, bits),
        "hidden": 2 * n,
        "contains_2n": b.contains_2n,
        "n0": b.n0,
    });
    match g.format {
        Format::Json => Ok(to_json(&v)),
        _ => Ok(format!(
            "{} <= HS <= {}\n2n = {} inside: {}\nbracket holds for all n >= {}\n",
            b.lower.to_decimal(20),
            b.upper.to_decimal(20),
            2 * n,
            b.contains_2n,
            b.n0
        )),
    }
}

fn max_hidden(g: &Global, n: Option<u64>, volume: Option<&str>, v0: Option<&str>) -> CmdResult {
    let bits = g.precision;
    let vol = match (n, volume) {
        (Some(n), _) => geometry(g)?.volume(n).map_err(usage)?,
        (None, Some(v)) => parse_real(v, bits, "volume")?,
        (None, None) => return Err(usage("give --n or --volume")),
    };
    let v0 = v0.map(|s| parse_real(s, bits, "v0")).transpose()?;
    let bound = max_hidden_symmetries(&vol, v0.as_ref()).map_err(classify_failure)?;
    match g.format {
        Format::Json => Ok(to_json(&json!({
            "volume": Num::new(&vol, bits),
            "bound": Num::new(&bound, bits),
        }))),
        _ => Ok(format!("{}\n", bound.to_decimal(decimal_digits(bits).min(30)))),
    }
}
