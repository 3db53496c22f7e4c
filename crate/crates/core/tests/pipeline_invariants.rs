mod common;

use mqknot::fox::{alexander_matrix, alexander_polynomial, AlexanderData};
use mqknot::indices::{
    kpq_classify, mq_bounds, nakanishi_bounds, torus_2p_alexander, IndexBounds, IndexError, KnotFacts, Rule,
};
use mqknot::laurent::{default_battery, single, DEFAULT_MAX_FACTOR_DEGREE, DEFAULT_PRIMES};
use mqknot::notation::wirtinger_presentation;
use mqknot::tables::{
    emit_reports, emit_section4, parse_dataset, reproduce_section4, run_pipeline, Format, PipelineConfig, Section4Report, TablesError,
};
use mqknot::Exec;
use proptest::prelude::*;

#[test]
fn squeeze_examples() {
    let facts = |fibered, u| KnotFacts { fibered, unknotting: u, nontrivial: true, ..KnotFacts::default() };
    let (a, rules) = mq_bounds(IndexBounds::exact(1), &facts(Some(true), None)).unwrap();
    assert_eq!(a, IndexBounds::exact(1));
    assert_eq!(rules, vec![Rule::NakanishiLower, Rule::Fibered]);

    let (a, rules) = mq_bounds(IndexBounds::new(1, 3), &facts(Some(false), Some(1))).unwrap();
    assert_eq!(a, IndexBounds::exact(1));
    assert_eq!(rules, vec![Rule::NakanishiLower, Rule::Unknotting]);

    let hinted = KnotFacts { hint_upper: Some(2), ..facts(Some(false), Some(3)) };
    let (a, rules) = mq_bounds(IndexBounds::exact(2), &hinted).unwrap();
    assert_eq!(a, IndexBounds::exact(2));
    assert_eq!(rules, vec![Rule::NakanishiLower, Rule::Unknotting, Rule::TableHint]);

    let (a, _) = mq_bounds(IndexBounds::new(1, 2), &facts(None, Some(2))).unwrap();
    assert_eq!(a, IndexBounds::new(1, 2));

    let err = mq_bounds(IndexBounds::exact(3), &facts(Some(false), Some(1))).unwrap_err();
    assert!(matches!(err, IndexError::Inconsistent { lower: 3, upper: 1, rule: Rule::Unknotting }));
}

#[test]
fn squeeze_respects_the_nakanishi_bound() {
    for r in &common::pipeline_10().reports {
        let (m, a) = (r.m_bounds(), r.a_bounds());
        assert!(a.lower >= m.lower, "{r}");
        if r.fibered == Some(true) && m.is_tight() {
            assert_eq!(a, m, "{r}");
        }
    }
}

#[test]
fn pipeline_is_clean_on_the_shipped_table() {
    let out = common::pipeline_10();
    assert_eq!(out.reports.len(), 249);
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    assert!(out.warnings.is_empty(), "{:?}", out.warnings);
}

#[test]
fn pipeline_is_deterministic() {
    let records = &common::knots_10()[..60];
    let seq = PipelineConfig { exec: Exec::Sequential, ..PipelineConfig::default() };
    let par = PipelineConfig { exec: Exec::Parallel, ..PipelineConfig::default() };
    let a = emit_reports(&run_pipeline(records, &seq).reports, Format::Json);
    let b = emit_reports(&run_pipeline(records, &seq).reports, Format::Json);
    let c = emit_reports(&run_pipeline(records, &par).reports, Format::Json);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn battery_growth_never_lowers_the_bound() {
    let names = ["3_1", "6_1", "8_18", "9_35", "9_40", "10_65", "10_115"];
    for r in common::knots_10().iter().filter(|r| names.contains(&r.name.as_str())) {
        let a = alexander_matrix(&wirtinger_presentation(&r.pd.parse().unwrap())).unwrap();
        let delta = alexander_polynomial(&a);
        let mut last = 0;
        for k in 1..=DEFAULT_PRIMES.len() {
            let battery = default_battery(&delta, &DEFAULT_PRIMES[..k], DEFAULT_MAX_FACTOR_DEGREE);
            let m = nakanishi_bounds(&a, &battery).unwrap();
            assert!(m.lower >= last, "{} with {k} primes", r.name);
            last = m.lower;
        }
    }
}

#[test]
fn torus_sums_stay_within_the_summand_bounds() {
    let vals = [-9, -7, -5, -3, 3, 5, 7, 9];
    let single_a = |p: i64| {
        let a = AlexanderData::from_presentation(single(torus_2p_alexander(p).unwrap()));
        let delta = alexander_polynomial(&a);
        let m = nakanishi_bounds(&a, &default_battery(&delta, &DEFAULT_PRIMES, DEFAULT_MAX_FACTOR_DEGREE)).unwrap();
        let facts = KnotFacts { fibered: Some(true), nontrivial: true, ..KnotFacts::default() };
        mq_bounds(m, &facts).unwrap().0.value().unwrap()
    };
    for &p in &vals {
        for &q in &vals {
            let (ap, aq) = (single_a(p), single_a(q));
            let r = kpq_classify(p, q, &DEFAULT_PRIMES).unwrap();
            let a = r.a_bounds().value().unwrap();
            assert!(ap.max(aq) <= a && a <= ap + aq, "K({p},{q})");
        }
    }
}

fn assert_partition(s: &Section4Report, names: &[&str]) {
    let mut all: Vec<&str> = [&s.determined_one, &s.determined_two, &s.determined_other, &s.open]
        .iter()
        .flat_map(|v| v.iter().map(String::as_str))
        .collect();
    all.sort_unstable();
    let mut want = names.to_vec();
    want.sort_unstable();
    assert_eq!(all, want);
    let decided: Vec<&String> = s.determined_one.iter().chain(&s.determined_two).chain(&s.determined_other).collect();
    assert!(s.fibration_decided.iter().all(|n| decided.contains(&n)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn section4_partition_on_partial_tables(mask in prop::collection::vec(any::<bool>(), 249)) {
        let reports: Vec<_> = common::pipeline_10().reports.iter().zip(&mask).filter(|(_, k)| **k).map(|(r, _)| r.clone()).collect();
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        let s = reproduce_section4(&reports);
        assert_partition(&s, &names);
    }
}

#[test]
fn emitters() {
    let empty = Section4Report::default();
    assert_eq!(emit_section4(&empty, Format::Csv), "name,class,fibration_decided\n");
    let reports = &common::pipeline_10().reports[..3];
    let json: serde_json::Value = serde_json::from_str(&emit_reports(reports, Format::Json)).unwrap();
    let first = &json.as_array().unwrap()[0];
    for key in ["name", "delta", "m_lower", "m_upper", "a_lower", "a_upper", "fibered", "rules"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["name"], "3_1");
    assert_eq!(first["delta"], "t^2 - t + 1");
    let csv = emit_reports(reports, Format::Csv);
    assert_eq!(csv.lines().count(), 4);
    assert!("yaml".parse::<Format>().is_err());
}

#[test]
fn dataset_errors_carry_line_numbers() {
    let good = r#"{"name": "3_1", "pd": "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)"}"#;
    let dup = format!("# header\n{good}\n\n{good}\n");
    assert!(matches!(parse_dataset(&dup), Err(TablesError::Duplicate { line: 4, .. })));
    let extra = r#"{"name": "x", "pd": "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)", "colour": 1}"#;
    assert!(matches!(parse_dataset(extra), Err(TablesError::Record { line: 1, .. })));
    let bad_pd = format!("{good}\n{}", r#"{"name": "y", "pd": "X(1,2)"}"#);
    assert!(matches!(parse_dataset(&bad_pd), Err(TablesError::Record { line: 2, .. })));
}
