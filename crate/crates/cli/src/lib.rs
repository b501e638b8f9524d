//! Command-line front end for `telefid`: single points, optimizations,
//! sweeps and figure presets, written as CSV.

pub mod args;
pub mod csv_out;
pub mod error;
pub mod figures;
pub mod sweep;

pub use csv_out::{emit_csv, read_rows, ResultRow, HEADER};
pub use error::{CliError, CliResult};
pub use figures::{run_figure_preset, FigureTag};
pub use sweep::{Axis, Point, SweepSpec, Task};
