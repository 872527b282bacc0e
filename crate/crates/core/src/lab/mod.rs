//! Reproducible experiment runs: configuration, dispatch and file output.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{Experiment, ExperimentConfig, GrowthChoice};
pub use emit::{comb_drawing, emit_csv, emit_json, emit_svg, step_plot, Table};
pub use run::{output_dir, run, run_in, Check, RunReport};
