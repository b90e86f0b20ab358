//! Experiment generators, the experiment runner and the validation table.

mod experiment;
mod ladder;
mod rng;
mod sampler;
pub mod testgen;
mod validation;

pub use experiment::{
    phi_sweep, run_experiment, sweep_to_csv, ExperimentReport, Mode, Source, StageReport, SweepPoint, Timings,
    FULL_MODE_SLOW_N, ORACLE_MAX_DIM,
};
pub use ladder::{build_ladder_matrix, LadderConfig};
pub use rng::Stream;
pub use sampler::{sample_spectrum, SpectrumSampleConfig};
pub use validation::{run_validation, CheckOutcome};
