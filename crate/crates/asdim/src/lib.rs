//! File formats, workspace loading, seeded instance generators and the
//! command-line interface for `asdim-core`.

pub mod cli;
pub mod convert;
pub mod error;
pub mod format;
pub mod generate;
pub mod workspace;

pub use error::{CliError, ErrorClass};
pub use workspace::Workspace;
