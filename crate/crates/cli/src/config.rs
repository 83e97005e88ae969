use std::path::PathBuf;

use arith_core::kernel::System;
use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Shared settings. Each flag falls back to its environment variable, then
/// to the default shown.
#[derive(Args, Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Proof system: pp, pp+ or pa.
    #[arg(long, global = true, env = "ARITH_SYSTEM", default_value = "pp", value_parser = parse_system)]
    pub system: System,
    /// Symbol table file listing registered predicates.
    #[arg(long, global = true, env = "ARITH_TABLE")]
    pub table: Option<PathBuf>,
    /// Rounds of rule application in bounded search.
    #[arg(long, global = true, env = "ARITH_DEPTH", default_value_t = 4,
          value_parser = clap::value_parser!(u64).range(0..=6))]
    pub depth: u64,
    /// Largest numeral used when instantiating during search.
    #[arg(long, global = true, env = "ARITH_NUMERAL_CAP", default_value_t = 3,
          value_parser = clap::value_parser!(u64).range(0..=16))]
    pub numeral_cap: u64,
    /// Search bound for unguarded quantifiers during evaluation.
    #[arg(long, global = true, env = "ARITH_WITNESS_BOUND", default_value_t = 1000,
          value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    pub witness_bound: u64,
    /// Number of candidate proof codes sampled by build-gus.
    #[arg(long, global = true, env = "ARITH_SAMPLE_BOUND", default_value_t = 10_000,
          value_parser = clap::value_parser!(u64).range(0..=1_000_000))]
    pub sample_bound: u64,
    #[arg(long, global = true, env = "ARITH_FORMAT", default_value = "json")]
    pub format: Format,
    /// Seed for generated inputs.
    #[arg(long, global = true, env = "ARITH_SEED", default_value_t = 0)]
    pub seed: u64,
}
