//! Empirical experiments from counted runs.
//!
//! Each run records which sub-preparation produced the system, which
//! registration method it was applied to and how that apparatus responded.
//! Runs with identical records are indistinguishable to every selection
//! procedure in the model, so the ground set is the set of observed
//! `(preparation, method, outcome)` cells, each weighted by its count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::setmodel::{FiniteModel, Subset, MAX_FAMILY};

use super::conditional::ConditionalProbability;
use super::experiment::{close_family, combined_family, Experiment};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSchema {
    pub label: String,
    pub outcomes: Vec<String>,
}

/// Declares the labels runs may use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSchema {
    /// Label of the union of all sub-preparations.
    pub source: String,
    pub preparations: Vec<String>,
    pub methods: Vec<MethodSchema>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Run {
    pub preparation: String,
    pub method: String,
    pub outcome: String,
}

/// Run counts keyed by `(preparation, method, outcome)`.
pub type Counts = BTreeMap<(String, String, String), u64>;

#[derive(Clone, Debug)]
pub struct EmpiricalExperiment {
    pub experiment: Experiment,
    pub counts: Counts,
    pub runs: usize,
}

/// Counts runs and builds the empirical `λ_Q`, `λ_R0` and `λ_S` tables
/// `N(b) / N(a)` with binomial standard errors.
///
/// `Q` holds every nonempty union of sub-preparations, `R0` the individual
/// methods, `R` the selection procedure generated by `R0` and the
/// single-outcome responses. Sets that are empty in the data are dropped.
///
/// Unions of methods are deliberately not methods. If `b0 ⊂ b0'` were both
/// in `R0` and `b ⊂ b0` a response, `b0' \ b` would be a registration
/// containing a method, hence a method, and its frequency would depend on
/// the preparation, contradicting the independence of preparation and
/// registration statistics.
pub fn frequencies_from_runs(schema: &RunSchema, runs: &[Run]) -> Result<EmpiricalExperiment, ModelError> {
    let mut counts = Counts::new();
    for run in runs {
        if !schema.preparations.contains(&run.preparation) {
            return Err(ModelError::NotFound(run.preparation.clone()));
        }
        let method = schema
            .methods
            .iter()
            .find(|m| m.label == run.method)
            .ok_or_else(|| ModelError::NotFound(run.method.clone()))?;
        if !method.outcomes.contains(&run.outcome) {
            return Err(ModelError::NotFound(format!("{}:{}", run.method, run.outcome)));
        }
        *counts
            .entry((run.preparation.clone(), run.method.clone(), run.outcome.clone()))
            .or_default() += 1;
    }

    // cells in schema order, observed ones only
    let mut cells = Vec::new();
    for (p, prep) in schema.preparations.iter().enumerate() {
        for (m, method) in schema.methods.iter().enumerate() {
            for outcome in &method.outcomes {
                let key = (prep.clone(), method.label.clone(), outcome.clone());
                if let Some(&n) = counts.get(&key) {
                    cells.push((p, m, outcome.clone(), n));
                }
            }
        }
    }
    let ground = cells.len();
    let elements: Vec<String> = cells
        .iter()
        .map(|(p, m, o, _)| format!("{}|{}|{}", schema.preparations[*p], schema.methods[*m].label, o))
        .collect();
    let weights: Vec<u64> = cells.iter().map(|c| c.3).collect();

    let n_prep = schema.preparations.len();
    if n_prep > 16 {
        return Err(ModelError::FamilyTooLarge(1 << 16));
    }
    let mut q_family = Vec::new();
    for mask in 1..(1usize << n_prep) {
        let label = if mask == (1 << n_prep) - 1 && n_prep > 1 {
            schema.source.clone()
        } else {
            (0..n_prep)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| schema.preparations[i].as_str())
                .collect::<Vec<_>>()
                .join("+")
        };
        let set = Subset::from_indices(ground, (0..ground).filter(|&c| mask >> cells[c].0 & 1 == 1));
        if !set.is_empty() {
            q_family.push((label, set));
        }
    }
    let r0_family: Vec<(String, Subset)> = schema
        .methods
        .iter()
        .enumerate()
        .map(|(m, method)| {
            (
                method.label.clone(),
                Subset::from_indices(ground, (0..ground).filter(|&c| cells[c].1 == m)),
            )
        })
        .filter(|(_, set)| !set.is_empty())
        .collect();

    let mut r_seed = r0_family.clone();
    for (m, method) in schema.methods.iter().enumerate() {
        for outcome in &method.outcomes {
            let set = Subset::from_indices(
                ground,
                (0..ground).filter(|&c| cells[c].1 == m && &cells[c].2 == outcome),
            );
            r_seed.push((format!("{}:{}", method.label, outcome), set));
        }
    }

    let q = FiniteModel::from_subsets_dedup(elements.clone(), q_family)?;
    let r0 = FiniteModel::from_subsets_dedup(elements.clone(), r0_family)?;
    let r = close_family(elements, r_seed, MAX_FAMILY)?;
    let s = combined_family(&q, &r)?;

    let experiment = Experiment::new(
        ConditionalProbability::from_counts(q, &weights)?,
        r,
        ConditionalProbability::from_counts(r0, &weights)?,
        ConditionalProbability::from_counts(s, &weights)?,
    )?;
    Ok(EmpiricalExperiment {
        experiment,
        counts,
        runs: runs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::statmodel::check_experiment_axioms;
    use crate::tolerance::Tolerances;

    fn schema() -> RunSchema {
        RunSchema {
            source: "src".into(),
            preparations: vec!["p".into(), "m".into()],
            methods: vec![MethodSchema {
                label: "Z".into(),
                outcomes: vec!["0".into(), "1".into()],
            }],
        }
    }

    fn run(p: &str, o: &str) -> Run {
        Run {
            preparation: p.into(),
            method: "Z".into(),
            outcome: o.into(),
        }
    }

    #[test]
    fn zero_runs_are_vacuous() {
        let e = frequencies_from_runs(&schema(), &[]).unwrap();
        assert_eq!(e.runs, 0);
        assert!(e.experiment.preparations().base().is_empty());
        let reports = check_experiment_axioms(&e.experiment, &Tolerances::default()).unwrap();
        assert!(reports.iter().all(|r| r.status == Status::Pass));
    }

    #[test]
    fn unknown_labels_are_rejected() {
        assert!(frequencies_from_runs(&schema(), &[run("nope", "0")]).is_err());
        assert!(frequencies_from_runs(&schema(), &[run("p", "7")]).is_err());
    }

    #[test]
    fn counts_become_ratios() {
        let runs = [run("p", "0"), run("p", "0"), run("p", "1"), run("m", "1")];
        let e = frequencies_from_runs(&schema(), &runs).unwrap();
        let q = e.experiment.preparations();
        let src = q.base().index_of_label("src").unwrap();
        let p = q.base().index_of_label("p").unwrap();
        assert_eq!(q.get(src, p).unwrap().to_f64(), Some(0.75));
        assert_eq!(e.counts[&("p".into(), "Z".into(), "0".into())], 2);
        let reports = check_experiment_axioms(&e.experiment, &Tolerances::default()).unwrap();
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }
}
