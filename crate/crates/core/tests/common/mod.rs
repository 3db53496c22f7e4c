#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use mqknot::tables::{load_dataset, run_pipeline, KnotRecord, PipelineConfig, PipelineOutput};

pub fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

pub fn knots_10() -> &'static [KnotRecord] {
    static RECORDS: OnceLock<Vec<KnotRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| load_dataset(data("knots_10.jsonl")).expect("shipped dataset loads"))
}

pub fn pipeline_10() -> &'static PipelineOutput {
    static OUT: OnceLock<PipelineOutput> = OnceLock::new();
    OUT.get_or_init(|| run_pipeline(knots_10(), &PipelineConfig::default()))
}

pub fn crossing_number(name: &str) -> u32 {
    mqknot::tables::table_position(name).map_or(u32::MAX, |(c, _)| c)
}
