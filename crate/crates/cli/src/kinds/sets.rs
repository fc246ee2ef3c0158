//! `finite-model` and `experiment` scenarios.

use opqm_core::setmodel::check_selection_axioms;
use opqm_core::statmodel::{
    check_experiment_axioms, check_statistical_axioms, decomposition_weights, mixture_transfer_check,
    mu_properties_check, quotient, trigger_table, ConditionalProbability, Quotient,
};
use opqm_core::{Experiment, Prob, Status, TableEntry, Tolerances};
use serde_json::{json, Value};

use crate::convert::model;
use crate::error::{schema, CliError};
use crate::report::Check;
use crate::scenario::{DecompositionSpec, ExperimentSpec, FiniteModelSpec, OverrideSpec, TableName};

pub fn finite_model(spec: &FiniteModelSpec, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let base = model(&spec.elements, &spec.subsets)?;
    let mut checks: Vec<Check> = check_selection_axioms(&base).iter().map(Check::from_axiom).collect();
    if spec.weights.is_none() && spec.entries.is_empty() {
        if !spec.decompositions.is_empty() {
            return Err(schema("decompositions need `weights` or `entries`"));
        }
        return Ok(checks);
    }
    let mut lambda = match &spec.weights {
        Some(w) => {
            let w = w.iter().map(|p| p.to_prob()).collect::<Result<Vec<_>, _>>()?;
            ConditionalProbability::from_measure(base, &w)?
        }
        None => ConditionalProbability::new(base, std::iter::empty())?,
    };
    for e in &spec.entries {
        lambda.set(&e.given, &e.select, TableEntry::exact(e.value.to_prob()?))?;
    }
    checks.extend(check_statistical_axioms(&lambda, tol)?.iter().map(Check::from_axiom));
    for d in &spec.decompositions {
        checks.push(decomposition(&lambda, d, tol)?);
    }
    Ok(checks)
}

fn decomposition(lambda: &ConditionalProbability, d: &DecompositionSpec, tol: &Tolerances) -> Result<Check, CliError> {
    let dec = decomposition_weights(lambda, &d.whole, &d.parts, tol)?;
    let mut check = Check::from_axiom(&dec.report);
    check.name = format!("decomposition {}", d.whole);
    Ok(check.with_data(json!({
        "parts": dec.parts,
        "weights": dec.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })))
}

pub fn experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let q = model(&spec.elements, &spec.preparations)?;
    let r = model(&spec.elements, &spec.registrations)?;
    let r0 = model(&spec.elements, &spec.methods)?;
    let weights = spec
        .weights
        .iter()
        .map(|p| p.to_prob())
        .collect::<Result<Vec<_>, _>>()?;
    let mut exp = Experiment::from_measure(q, r, r0, &weights)?;
    for o in &spec.overrides {
        apply_override(&mut exp, o)?;
    }

    let axioms = check_experiment_axioms(&exp, tol)?;
    let mut checks: Vec<Check> = axioms.iter().map(Check::from_axiom).collect();
    for d in &spec.decompositions {
        checks.push(decomposition(exp.preparations(), d, tol)?);
    }

    // ensembles and effects only make sense once the axioms hold
    let broken: Vec<String> = axioms
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.axiom.to_string())
        .collect();
    if !broken.is_empty() {
        let note = format!("skipped: {} failed", broken.join(", "));
        checks.push(Check::new("quotient", Status::Absent).with_note(note.clone()));
        for d in &spec.decompositions {
            checks.push(Check::new(format!("mixture transfer {}", d.whole), Status::Absent).with_note(note.clone()));
        }
        return Ok(checks);
    }
    let table = trigger_table(&exp)?;
    let q = quotient(&table, tol);
    checks.push(quotient_check(&q));
    checks.extend(mu_properties_check(&q, tol).iter().map(Check::from_axiom));
    for d in &spec.decompositions {
        let report = mixture_transfer_check(&exp, &d.whole, &d.parts, tol)?;
        let mut check = Check::from_axiom(&report);
        check.name = format!("mixture transfer {}", d.whole);
        checks.push(check);
    }
    Ok(checks)
}

fn apply_override(exp: &mut Experiment, o: &OverrideSpec) -> Result<(), CliError> {
    let value = TableEntry::exact(o.value.to_prob()?);
    match o.table {
        TableName::Preparations => exp.preparations_mut().set(&o.given, &o.select, value)?,
        TableName::Methods => exp.methods_mut().set(&o.given, &o.select, value)?,
        TableName::Combined => {
            let given = combined_label(exp, &o.given)?;
            let select = combined_label(exp, &o.select)?;
            exp.combined_mut().set(&given, &select, value)?
        }
    }
    Ok(())
}

fn combined_label(exp: &Experiment, label: &str) -> Result<String, CliError> {
    if exp.combined().base().get(label).is_some() {
        return Ok(label.to_string());
    }
    match label.split_once('&') {
        Some((a, b)) => Ok(exp.intersection_label(a, b)?.to_string()),
        None => Err(schema(format!(
            "`{label}` is not a combined selection; write it as `a&b`"
        ))),
    }
}

fn quotient_check(q: &Quotient) -> Check {
    let entry = |e: &TableEntry| -> Value {
        match e.value() {
            Some(Prob::Exact(_)) | None => json!(e.value().map(ToString::to_string)),
            Some(p) => json!(p.to_f64()),
        }
    };
    Check::pass("quotient")
        .with_residual(q.max_spread)
        .with_note(format!("{} ensembles, {} effects", q.ensembles.len(), q.effects.len()))
        .with_data(json!({
            "ensembles": q.ensembles.iter().map(|w| &w.members).collect::<Vec<_>>(),
            "effects": q.effects.iter().map(|f| f.members.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "mu": q.matrix.iter().map(|row| row.iter().map(entry).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "incompatible": q.incompatible,
        }))
}
