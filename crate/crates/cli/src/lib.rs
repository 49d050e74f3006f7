//! Library side of the `ltfrechet` command-line tool: dataset I/O, report
//! rendering and the subcommand implementations.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;

pub use commands::{cmd_compare, cmd_curves, cmd_fit, cmd_simulate, Grid, ModelKind, RunConfig, SimulateArgs};
pub use error::{CliError, CliResult};
pub use report::{Format, Report};
