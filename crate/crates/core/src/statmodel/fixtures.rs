//! Shared test models.

use crate::prob::Prob;
use crate::setmodel::FiniteModel;

use super::experiment::Experiment;

fn model(elements: &[&str], family: &[(&str, &[usize])]) -> FiniteModel {
    let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    FiniteModel::new(
        names.clone(),
        family.iter().map(|(label, members)| {
            (
                label.to_string(),
                members.iter().map(|&i| names[i].clone()).collect::<Vec<_>>(),
            )
        }),
    )
    .unwrap()
}

pub const ELEMENTS: [&str; 6] = ["+|Z|down", "+|X|up", "+|X|down", "-|Z|up", "-|X|up", "-|X|down"];

/// System 1 of a spin singlet, selected by the partner's `z` result, then
/// measured along `z` or `x`. Weights are `μ(partner) · μ(method) · p(outcome)`.
pub fn singlet_with(weights: &[Prob]) -> Experiment {
    let q = model(
        &ELEMENTS,
        &[("a3", &[0, 1, 2, 3, 4, 5]), ("a3+", &[0, 1, 2]), ("a3-", &[3, 4, 5])],
    );
    let r = model(
        &ELEMENTS,
        &[
            ("Z", &[0, 3]),
            ("Z:up", &[3]),
            ("Z:down", &[0]),
            ("X", &[1, 2, 4, 5]),
            ("X:up", &[1, 4]),
            ("X:down", &[2, 5]),
        ],
    );
    let r0 = model(&ELEMENTS, &[("Z", &[0, 3]), ("X", &[1, 2, 4, 5])]);
    Experiment::from_measure(q, r, r0, weights).unwrap()
}

pub fn singlet_weights() -> Vec<Prob> {
    [(1, 4), (1, 8), (1, 8), (1, 4), (1, 8), (1, 8)]
        .iter()
        .map(|&(n, d)| Prob::ratio(n, d))
        .collect()
}

pub fn singlet() -> Experiment {
    singlet_with(&singlet_weights())
}
