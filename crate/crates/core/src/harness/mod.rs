//! Experiment configs, runners and report export.

mod config;
mod experiments;
mod export;
mod oracles;

pub use config::ExperimentConfig;
pub use experiments::{
    alpha_from_counts, common_elements, exp_cogrowth_sweep, exp_main_theorem, exp_sup_conjugates,
    exp_wreath_counterexample, run_experiment, sweep, CogrowthDiagnostics, CogrowthReport,
    CogrowthRow, ConjugateRow, Estimate, FolnerRow, MainTheoremReport, MainTheoremRow,
    MainTheoremSummary, Quantiles, Report, SupConjugatesReport, WreathReport, EXPERIMENTS,
};
pub use export::{export, to_csv, to_json, write_text, Format};
pub use oracles::{parse_ranges, AnyCoset, AnyOracle, OracleSpec};
