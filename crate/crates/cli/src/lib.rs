//! Front end for `opqm-core`: TOML scenarios in, pass/fail reports out.
//!
//! A scenario names its kind and carries a body table of the same name.
//! [`run::run`] evaluates it into a [`report::Report`]; the `opqm` binary
//! adds argument parsing, output formats and exit codes.

pub mod convert;
pub mod error;
pub mod kinds;
pub mod report;
pub mod run;
pub mod scenario;
pub mod settings;

pub use error::CliError;
pub use report::{Check, Report};
pub use run::{run, run_path, Options, Run, Verb};
pub use scenario::{Kind, Scenario};
pub use settings::Settings;
