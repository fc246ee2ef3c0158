use std::path::Path;
use std::time::Instant;

use crate::error::CliError;
use crate::kinds::{self, Outcome};
use crate::report::Report;
use crate::scenario::{Body, Scenario};
use crate::settings::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    /// Any kind.
    Check,
    /// Pipelines only; attaches the empirical tables.
    Simulate,
    /// Lindblad scenarios and macrostates with a time grid; yields a CSV.
    Evolve,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Replaces the scenario seed.
    pub seed: Option<u64>,
    /// `key=value` tolerance overrides, applied after the scenario's own.
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug)]
pub struct Run {
    pub report: Report,
    pub csv: Option<Vec<u8>>,
}

pub fn run_path(path: &Path, verb: Verb, opts: &Options) -> Result<Run, CliError> {
    run(&Scenario::load(path)?, verb, opts)
}

pub fn run(scenario: &Scenario, verb: Verb, opts: &Options) -> Result<Run, CliError> {
    let start = Instant::now();
    let settings = Settings::resolve(&scenario.tolerances, &opts.tolerances).map_err(CliError::Usage)?;
    let seed = opts.seed.or(scenario.seed).unwrap_or(0);
    let body = scenario.body()?;
    let outcome = match (verb, body) {
        (Verb::Check, Body::FiniteModel(s)) => Outcome::checks(kinds::sets::finite_model(&s, &settings.core)?),
        (Verb::Check, Body::Experiment(s)) => Outcome::checks(kinds::sets::experiment(&s, &settings.core)?),
        (Verb::Check, Body::QuantumPovm(s)) => Outcome::checks(kinds::quantum::quantum_povm(&s, seed, &settings)?),
        (Verb::Check, Body::Instrument(s)) => Outcome::checks(kinds::quantum::instrument(&s, &settings)?),
        (Verb::Check | Verb::Simulate, Body::Pipeline(s)) => {
            Outcome::checks(kinds::pipeline::pipeline(&s, seed, &settings, verb == Verb::Simulate)?)
        }
        (Verb::Check, Body::Lindblad(s)) => without_csv(kinds::dynamics::lindblad(&s, &settings)?),
        (Verb::Check, Body::Macrostate(s)) => without_csv(kinds::macrostate::macrostate(&s, &settings)?),
        (Verb::Evolve, Body::Lindblad(s)) => kinds::dynamics::lindblad(&s, &settings)?,
        (Verb::Evolve, Body::Macrostate(s)) if s.times.is_some() => kinds::macrostate::macrostate(&s, &settings)?,
        (Verb::Evolve, Body::Macrostate(_)) => {
            return Err(CliError::Usage("evolve needs a macrostate with `times`".into()))
        }
        (verb, _) => {
            return Err(CliError::Usage(format!(
                "`{}` does not apply to kind `{}`",
                match verb {
                    Verb::Simulate => "simulate",
                    Verb::Evolve => "evolve",
                    Verb::Check => "check",
                },
                scenario.kind
            )))
        }
    };
    Ok(Run {
        report: Report {
            scenario: scenario.name.clone().unwrap_or_default(),
            kind: scenario.kind.to_string(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            checks: outcome.checks,
            wall_time: start.elapsed().as_secs_f64(),
        },
        csv: outcome.csv,
    })
}

fn without_csv(o: Outcome) -> Outcome {
    Outcome::checks(o.checks)
}
