//! Conditional probabilities, experiments and their quotients.

mod conditional;
pub mod empirical;
mod experiment;
mod trigger;

#[cfg(test)]
pub(crate) mod fixtures;

pub use conditional::{
    check_statistical_axioms, decomposition_weights, measure_on_ring, ConditionalProbability, Decomposition, Lookup,
    MeasureOnRing, TableEntry,
};
pub use empirical::{frequencies_from_runs, EmpiricalExperiment, MethodSchema, Run, RunSchema};
pub use experiment::{check_experiment_axioms, close_family, combined_family, Experiment};
pub use trigger::{
    mixture_transfer_check, mu_properties_check, quotient, trigger_table, EffectClass, EffectProcess, Ensemble,
    PreparationRow, Quotient, TriggerTable,
};
