//! One evaluator per scenario kind.

pub mod dynamics;
pub mod macrostate;
pub mod pipeline;
pub mod quantum;
pub mod sets;

use crate::report::Check;

/// Checks plus, for time evolution, the trajectory as CSV.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub csv: Option<Vec<u8>>,
}

impl Outcome {
    pub fn checks(checks: Vec<Check>) -> Self {
        Self { checks, csv: None }
    }
}
