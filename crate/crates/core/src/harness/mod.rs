//! Experiment orchestration: published schedules, random schedule generation,
//! experiment files, seed batches, and plots.

pub mod batch;
pub mod plot;
pub mod presets;
pub mod schedule;
pub mod spec;

pub use batch::{create_output, run_batch, AggregateResult, BatchOptions, Series};
pub use plot::{emit_plot, render_svg};
pub use presets::{preset_schedule, PRESET_IDS};
pub use schedule::{generate_random_schedule, read_schedule, write_schedule};
pub use spec::{EnvRecipe, Experiment, ExperimentSpec, ScheduleSource};
