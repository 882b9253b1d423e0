//! Problem files, reports and artifacts for the `hcomoment` command-line
//! tool.

pub mod artifact;
pub mod commands;
pub mod problem;
pub mod report;
pub mod terms;

pub use commands::{run, Command, RunOptions, RunOutput};
pub use report::{Format, Report, Status};
