//! Knot-table ingestion, the per-knot pipeline, and the classification of
//! ten-crossing knots by how their MQ index is decided.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fox::{alexander_matrix_with, alexander_polynomial_with};
use crate::indices::{
    fibered_necessary, mq_bounds, nakanishi_analysis, IndexReport, KnotFacts, Rule,
};
use crate::laurent::{default_battery, LaurentPoly, DEFAULT_MAX_FACTOR_DEGREE, DEFAULT_PRIMES};
use crate::notation::{wirtinger_presentation, KnotDiagram};
use crate::par::Exec;

/// Knots whose MQ index is one, decided only through fiberedness.
pub const FIBRATION_DECIDED: [&str; 26] = [
    "8_16", "9_29", "9_32", "10_62", "10_64", "10_79", "10_81", "10_85", "10_89", "10_94", "10_96", "10_100",
    "10_105", "10_106", "10_109", "10_110", "10_112", "10_116", "10_148", "10_149", "10_150", "10_151", "10_152",
    "10_153", "10_154", "10_158",
];

/// Knots whose MQ index is known only to lie in `[1, 2]`.
pub const OPEN: [&str; 19] = [
    "10_65", "10_66", "10_67", "10_68", "10_80", "10_83", "10_86", "10_87", "10_90", "10_92", "10_93", "10_97",
    "10_108", "10_111", "10_117", "10_120", "10_121", "10_163", "10_166",
];

#[derive(Debug, Error)]
pub enum TablesError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Record { line: usize, reason: String },
    #[error("line {line}: duplicate knot name {name:?}")]
    Duplicate { line: usize, name: String },
    #[error("unknown output format {0:?} (expected json, csv or text)")]
    Format(String),
}

/// One dataset line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotRecord {
    pub name: String,
    pub pd: String,
    #[serde(default)]
    pub fibered: Option<bool>,
    #[serde(default, rename = "u")]
    pub unknotting_number: Option<u32>,
    #[serde(default)]
    pub rank: Option<u32>,
    #[serde(default, rename = "tunnel")]
    pub tunnel_number: Option<u32>,
    #[serde(default, rename = "delta")]
    pub reference_delta: Option<String>,
    #[serde(default)]
    pub source: Option<String>,
}

impl KnotRecord {
    pub fn new(name: &str, pd: &str) -> Self {
        KnotRecord {
            name: name.to_string(),
            pd: pd.to_string(),
            fibered: None,
            unknotting_number: None,
            rank: None,
            tunnel_number: None,
            reference_delta: None,
            source: None,
        }
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<KnotRecord>, TablesError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TablesError::Io { path: path.display().to_string(), source })?;
    parse_dataset(&text)
}

/// Parses JSONL text. Blank lines and lines starting with `#` are skipped.
pub fn parse_dataset(text: &str) -> Result<Vec<KnotRecord>, TablesError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec: KnotRecord =
            serde_json::from_str(trimmed).map_err(|e| TablesError::Record { line, reason: e.to_string() })?;
        if rec.name.trim().is_empty() {
            return Err(TablesError::Record { line, reason: "empty name".into() });
        }
        rec.pd
            .parse::<KnotDiagram>()
            .map_err(|e| TablesError::Record { line, reason: format!("{}: {e}", rec.name) })?;
        if let Some(d) = &rec.reference_delta {
            d.parse::<LaurentPoly>()
                .map_err(|e| TablesError::Record { line, reason: format!("{}: {e}", rec.name) })?;
        }
        if !seen.insert(rec.name.clone()) {
            return Err(TablesError::Duplicate { line, name: rec.name });
        }
        out.push(rec);
    }
    Ok(out)
}

/// `(crossings, index)` for names of the form `c_i`.
pub fn table_position(name: &str) -> Option<(u32, u32)> {
    let (c, i) = name.split_once('_')?;
    Some((c.parse().ok()?, i.parse().ok()?))
}

fn table_key(name: &str) -> (u32, u32, String) {
    match table_position(name) {
        Some((c, i)) => (c, i, String::new()),
        None => (u32::MAX, u32::MAX, name.to_string()),
    }
}

fn sort_table_order(names: &mut [String]) {
    names.sort_by_cached_key(|n| table_key(n));
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub primes: Vec<u64>,
    pub max_factor_degree: usize,
    pub exec: Exec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { primes: DEFAULT_PRIMES.to_vec(), max_factor_degree: DEFAULT_MAX_FACTOR_DEGREE, exec: Exec::default() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RecordFailure {
    pub name: String,
    pub error: String,
}

/// Reports in table order, plus isolated failures and data-consistency
/// warnings (reference polynomial disagreement, a fibered flag on a
/// non-monic polynomial).
#[derive(Clone, Debug, Default, Serialize)]
pub struct PipelineOutput {
    pub reports: Vec<IndexReport>,
    pub failures: Vec<RecordFailure>,
    pub warnings: Vec<String>,
}

struct Analysed {
    report: IndexReport,
    warnings: Vec<String>,
}

pub fn analyse_record(rec: &KnotRecord, config: &PipelineConfig) -> Result<IndexReport, String> {
    analyse(rec, config).map(|a| a.report)
}

fn analyse(rec: &KnotRecord, config: &PipelineConfig) -> Result<Analysed, String> {
    let diagram: KnotDiagram = rec.pd.parse().map_err(|e| format!("{e}"))?;
    let presentation = wirtinger_presentation(&diagram);
    // parallelism lives at the record level; keep inner work sequential
    let inner = Exec::Sequential;
    let alex = alexander_matrix_with(&presentation, inner).map_err(|e| e.to_string())?;
    let delta = alexander_polynomial_with(&alex, inner);
    let battery = default_battery(&delta, &config.primes, config.max_factor_degree);
    let m = nakanishi_analysis(&alex, &battery, inner).map_err(|e| e.to_string())?.bounds;

    let table = table_position(&rec.name);
    let facts = KnotFacts {
        fibered: rec.fibered,
        unknotting: rec.unknotting_number,
        rank: rec.rank,
        tunnel: rec.tunnel_number,
        nontrivial: !delta.is_one() || rec.unknotting_number.is_some_and(|u| u >= 1) || table.is_some_and(|(c, _)| c >= 3),
        hint_upper: table.filter(|&(c, _)| (3..=10).contains(&c)).map(|_| 2),
    };
    let (a, rules) = mq_bounds(m, &facts).map_err(|e| e.to_string())?;

    let mut warnings = Vec::new();
    if let Some(reference) = &rec.reference_delta {
        let expected = reference.parse::<LaurentPoly>().map_err(|e| e.to_string())?.normalize_unit();
        if expected != delta {
            warnings.push(format!("{}: computed delta {delta} differs from reference {expected}", rec.name));
        }
    }
    if rec.fibered == Some(true) && !fibered_necessary(&delta) {
        warnings.push(format!("{}: flagged fibered but delta {delta} is not monic", rec.name));
    }
    Ok(Analysed { report: IndexReport::new(rec.name.clone(), delta, m, a, rec.fibered, rules), warnings })
}

/// Runs every record through diagram, presentation, Alexander module and
/// index bounds. Failures are collected per record.
pub fn run_pipeline(records: &[KnotRecord], config: &PipelineConfig) -> PipelineOutput {
    let results = config.exec.map(records, |r| (r.name.clone(), analyse(r, config)));
    let mut out = PipelineOutput::default();
    for (name, res) in results {
        match res {
            Ok(a) => {
                out.reports.push(a.report);
                out.warnings.extend(a.warnings);
            }
            Err(error) => out.failures.push(RecordFailure { name, error }),
        }
    }
    out.reports.sort_by_cached_key(|r| table_key(&r.name));
    out.failures.sort_by_cached_key(|f| table_key(&f.name));
    out
}

/// Classification of pipeline reports by the final MQ interval.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Section4Report {
    /// Tight with `a = 1`.
    pub determined_one: Vec<String>,
    /// Tight with `a = 2`.
    pub determined_two: Vec<String>,
    /// Tight with any other value.
    pub determined_other: Vec<String>,
    /// Interval not tight.
    pub open: Vec<String>,
    /// Tight only after the fibered rule applied.
    pub fibration_decided: Vec<String>,
    pub mismatches: Vec<String>,
}

/// Classifies the reports and compares against [`FIBRATION_DECIDED`] and
/// [`OPEN`]. Listed names absent from `reports` count as mismatches.
pub fn reproduce_section4(reports: &[IndexReport]) -> Section4Report {
    let mut s = Section4Report::default();
    for r in reports {
        let a = r.a_bounds();
        match a.value() {
            Some(1) => s.determined_one.push(r.name.clone()),
            Some(2) => s.determined_two.push(r.name.clone()),
            Some(_) => s.determined_other.push(r.name.clone()),
            None => s.open.push(r.name.clone()),
        }
        if a.is_tight() && r.rules.contains(&Rule::Fibered) {
            s.fibration_decided.push(r.name.clone());
        }
    }
    for v in [&mut s.determined_one, &mut s.determined_two, &mut s.determined_other, &mut s.open, &mut s.fibration_decided] {
        sort_table_order(v);
    }

    let present: BTreeSet<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    let by_name = |n: &str| reports.iter().find(|r| r.name == n);
    let fib: BTreeSet<&str> = s.fibration_decided.iter().map(String::as_str).collect();
    let open: BTreeSet<&str> = s.open.iter().map(String::as_str).collect();
    let mut mismatches = Vec::new();
    for name in FIBRATION_DECIDED {
        match by_name(name) {
            None => mismatches.push(format!("{name}: listed as decided by fibration, not in the reports")),
            Some(r) if !fib.contains(name) || r.a_bounds().value() != Some(1) => mismatches.push(format!(
                "{name}: listed as decided by fibration with a = 1, got a = {} via [{}]",
                r.a_bounds(),
                rule_tags(&r.rules)
            )),
            Some(_) => {}
        }
    }
    for name in OPEN {
        match by_name(name) {
            None => mismatches.push(format!("{name}: listed as open, not in the reports")),
            Some(r) if !open.contains(name) || r.a_bounds() != crate::indices::IndexBounds::new(1, 2) => {
                mismatches.push(format!("{name}: listed as open with a in [1, 2], got a = {}", r.a_bounds()))
            }
            Some(_) => {}
        }
    }
    for name in &s.fibration_decided {
        if !FIBRATION_DECIDED.contains(&name.as_str()) {
            mismatches.push(format!("{name}: decided by fibration but not listed"));
        }
    }
    for name in &s.open {
        if !OPEN.contains(&name.as_str()) && present.contains(name.as_str()) {
            mismatches.push(format!("{name}: open but not listed"));
        }
    }
    s.mismatches = mismatches;
    s
}

fn rule_tags(rules: &[Rule]) -> String {
    rules.iter().map(|r| r.tag()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = TablesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(TablesError::Format(other.to_string())),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn emit_reports(reports: &[IndexReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("plain data") + "\n",
        Format::Csv => csv_string(
            &["name", "delta", "m_lower", "m_upper", "a_lower", "a_upper", "fibered", "rules"],
            reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.delta.to_string(),
                        r.m_lower.to_string(),
                        opt(r.m_upper),
                        r.a_lower.to_string(),
                        opt(r.a_upper),
                        opt(r.fibered),
                        r.rules.iter().map(|x| x.tag()).collect::<Vec<_>>().join(";"),
                    ]
                })
                .collect(),
        ),
        Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
    }
}

fn wrap_names(out: &mut String, names: &[String]) {
    for chunk in names.chunks(10) {
        let _ = writeln!(out, "  {}", chunk.join(", "));
    }
}

pub fn emit_section4(s: &Section4Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(s).expect("plain data") + "\n",
        Format::Csv => {
            let mut rows = Vec::new();
            let classes = [
                ("a=1", &s.determined_one),
                ("a=2", &s.determined_two),
                ("a=other", &s.determined_other),
                ("open", &s.open),
            ];
            for (class, names) in classes {
                for n in names {
                    rows.push(vec![n.clone(), class.to_string(), s.fibration_decided.contains(n).to_string()]);
                }
            }
            rows.sort_by_cached_key(|r| table_key(&r[0]));
            csv_string(&["name", "class", "fibration_decided"], rows)
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "MQ index one, decided by fiberedness ({} knots):", s.fibration_decided.len());
            wrap_names(&mut out, &s.fibration_decided);
            let _ = writeln!(out, "MQ index open, a in [1, 2] ({} knots):", s.open.len());
            wrap_names(&mut out, &s.open);
            let _ = writeln!(
                out,
                "determined: {} with a = 1, {} with a = 2, {} other",
                s.determined_one.len(),
                s.determined_two.len(),
                s.determined_other.len()
            );
            if s.mismatches.is_empty() {
                let _ = writeln!(out, "mismatches: none");
            } else {
                let _ = writeln!(out, "mismatches ({}):", s.mismatches.len());
                for m in &s.mismatches {
                    let _ = writeln!(out, "  {m}");
                }
            }
            out
        }
    }
}
