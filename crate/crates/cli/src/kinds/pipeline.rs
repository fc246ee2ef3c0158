//! `pipeline` scenarios: sample runs from Born predictions and check the
//! experiment axioms on the observed frequencies.

use opqm_core::operational::{simulate, Method, Pipeline, SubPreparation};
use serde_json::json;

use crate::convert::{povm, state};
use crate::error::{schema, CliError};
use crate::report::Check;
use crate::scenario::PipelineSpec;
use crate::settings::Settings;

pub fn build(spec: &PipelineSpec, s: &Settings) -> Result<Pipeline, CliError> {
    let preparations = spec
        .preparations
        .iter()
        .map(|p| {
            Ok(SubPreparation {
                label: p.label.clone(),
                state: state(&p.state, &s.core)?,
                weight: p.weight,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let methods = spec
        .methods
        .iter()
        .map(|m| {
            Ok(Method {
                label: m.label.clone(),
                povm: povm(&m.povm, &s.core)?,
                weight: m.weight,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if preparations.is_empty() || methods.is_empty() {
        return Err(schema("a pipeline needs at least one preparation and one method"));
    }
    Ok(Pipeline {
        source: spec.source.clone(),
        preparations,
        methods,
    })
}

/// With `tables`, the run counts and per-cell Born scores ride along on the
/// born check.
pub fn pipeline(spec: &PipelineSpec, seed: u64, s: &Settings, tables: bool) -> Result<Vec<Check>, CliError> {
    let p = build(spec, s)?;
    let sim = simulate(&p, spec.runs, seed, &s.core)?;
    let mut checks: Vec<Check> = sim.axioms.iter().map(Check::from_axiom).collect();
    let mut born = Check::from_axiom(&sim.born_report);
    if spec.runs == 0 {
        born = born.with_note("no runs: every check holds vacuously");
    }
    if tables {
        let counts: Vec<_> = sim
            .empirical
            .counts
            .iter()
            .map(|((p, m, o), n)| json!({ "preparation": p, "method": m, "outcome": o, "count": n }))
            .collect();
        born = born.with_data(json!({ "runs": sim.empirical.runs, "counts": counts, "scores": sim.born }));
    }
    checks.push(born);
    Ok(checks)
}
