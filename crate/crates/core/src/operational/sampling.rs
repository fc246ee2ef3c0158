//! Sampling statistical experiments from quantum predictions, and checking
//! the experiment axioms on the sampled frequencies.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, QuantumError};
use crate::hilbert::{check_dims, DensityOperator};
use crate::report::{Axiom, AxiomReport, Witness};
use crate::statmodel::{
    check_experiment_axioms, frequencies_from_runs, EmpiricalExperiment, MethodSchema, Run, RunSchema,
};
use crate::tolerance::Tolerances;

use super::povm::{povm_distribution, Povm};

fn weighted(weights: &[f64]) -> Result<WeightedIndex<f64>, QuantumError> {
    WeightedIndex::new(weights).map_err(|e| QuantumError::InvalidArgument(format!("weights {weights:?}: {e}")))
}

/// `n` i.i.d. outcome labels drawn from the distribution of `P` in `W`.
pub fn sample_runs(w: &DensityOperator, p: &Povm, n: usize, seed: u64) -> Result<Vec<String>, QuantumError> {
    let dist = weighted(&povm_distribution(w, p)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| p.outcomes()[dist.sample(&mut rng)].clone()).collect())
}

#[derive(Clone, Debug)]
pub struct SubPreparation {
    pub label: String,
    pub state: DensityOperator,
    /// Relative frequency with which the source emits this sub-preparation.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct Method {
    pub label: String,
    pub povm: Povm,
    /// Relative frequency with which this apparatus is used.
    pub weight: f64,
}

/// A source that mixes sub-preparations, measured by one of several methods
/// chosen at random per run.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub source: String,
    pub preparations: Vec<SubPreparation>,
    pub methods: Vec<Method>,
}

impl Pipeline {
    pub fn schema(&self) -> RunSchema {
        RunSchema {
            source: self.source.clone(),
            preparations: self.preparations.iter().map(|p| p.label.clone()).collect(),
            methods: self
                .methods
                .iter()
                .map(|m| MethodSchema {
                    label: m.label.clone(),
                    outcomes: m.povm.outcomes().to_vec(),
                })
                .collect(),
        }
    }

    /// `Tr(W_p F_o)` for every preparation `p` and method `m`.
    pub fn predictions(&self) -> Result<Vec<Vec<Vec<f64>>>, QuantumError> {
        if self.preparations.is_empty() {
            return Err(QuantumError::Empty("preparation list"));
        }
        if self.methods.is_empty() {
            return Err(QuantumError::Empty("method list"));
        }
        let dim = self.preparations[0].state.dim();
        self.preparations
            .iter()
            .map(|p| {
                check_dims(dim, p.state.dim())?;
                self.methods
                    .iter()
                    .map(|m| povm_distribution(&p.state, &m.povm))
                    .collect()
            })
            .collect()
    }

    /// Draws `n` runs: preparation, method and outcome in that order per run
    /// from a single generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Run>, QuantumError> {
        let predictions = self.predictions()?;
        let prep = weighted(&self.preparations.iter().map(|p| p.weight).collect::<Vec<_>>())?;
        let meth = weighted(&self.methods.iter().map(|m| m.weight).collect::<Vec<_>>())?;
        let outcome: Vec<Vec<WeightedIndex<f64>>> = predictions
            .iter()
            .map(|row| row.iter().map(|d| weighted(d)).collect())
            .collect::<Result<_, _>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n)
            .map(|_| {
                let p = prep.sample(&mut rng);
                let m = meth.sample(&mut rng);
                let o = outcome[p][m].sample(&mut rng);
                Run {
                    preparation: self.preparations[p].label.clone(),
                    method: self.methods[m].label.clone(),
                    outcome: self.methods[m].povm.outcomes()[o].clone(),
                }
            })
            .collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BornScore {
    pub preparation: String,
    pub method: String,
    pub outcome: String,
    pub predicted: f64,
    pub observed: f64,
    /// Runs with this preparation and method.
    pub trials: u64,
    pub z: f64,
}

/// `(f - p) / sqrt(p (1 - p) / n)`. For `p ∈ {0, 1}` the score is `0` on
/// an exact match and infinite otherwise.
pub fn z_score(observed: f64, predicted: f64, trials: u64) -> f64 {
    let var = predicted * (1.0 - predicted) / trials as f64;
    if var > 0.0 {
        (observed - predicted) / var.sqrt()
    } else if observed == predicted {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub empirical: EmpiricalExperiment,
    pub axioms: Vec<AxiomReport>,
    pub born: Vec<BornScore>,
    pub born_report: AxiomReport,
}

impl Simulation {
    pub fn passed(&self) -> bool {
        self.born_report.passed() && self.axioms.iter().all(AxiomReport::passed)
    }
}

/// Samples `n` runs, rebuilds the empirical experiment, checks its axioms
/// and scores the observed frequencies against the Born rule.
pub fn simulate(pipeline: &Pipeline, n: usize, seed: u64, tol: &Tolerances) -> Result<Simulation, Error> {
    let predictions = pipeline.predictions()?;
    let runs = pipeline.sample(n, seed)?;
    let empirical = frequencies_from_runs(&pipeline.schema(), &runs)?;
    let axioms = check_experiment_axioms(&empirical.experiment, tol)?;

    let mut born = Vec::new();
    for (p, prep) in pipeline.preparations.iter().enumerate() {
        for (m, method) in pipeline.methods.iter().enumerate() {
            let count = |o: &String| {
                empirical
                    .counts
                    .get(&(prep.label.clone(), method.label.clone(), o.clone()))
                    .copied()
                    .unwrap_or(0)
            };
            let trials: u64 = method.povm.outcomes().iter().map(count).sum();
            if trials == 0 {
                continue;
            }
            for (o, outcome) in method.povm.outcomes().iter().enumerate() {
                let observed = count(outcome) as f64 / trials as f64;
                let predicted = predictions[p][m][o];
                born.push(BornScore {
                    preparation: prep.label.clone(),
                    method: method.label.clone(),
                    outcome: outcome.clone(),
                    predicted,
                    observed,
                    trials,
                    z: z_score(observed, predicted, trials),
                });
            }
        }
    }
    let witnesses = born
        .iter()
        .filter(|s| s.z.is_nan() || s.z.abs() > tol.z)
        .map(|s| Witness::new([&s.preparation, &s.method, &s.outcome]))
        .collect();
    let max_z = born.iter().map(|s| s.z.abs()).fold(0.0, f64::max);
    let born_report = AxiomReport::from_witnesses(Axiom::BornRule, witnesses)
        .with_residual(max_z)
        .with_note("residual is the largest |z|");
    Ok(Simulation {
        empirical,
        axioms,
        born,
        born_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{c, ket, CVector};
    use crate::report::{find, Status};

    fn plus() -> DensityOperator {
        DensityOperator::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]))
    }

    #[test]
    fn no_runs_no_samples() {
        assert!(sample_runs(&plus(), &Povm::computational(2), 0, 1).unwrap().is_empty());
    }

    #[test]
    fn deterministic_povm_always_fires() {
        let out = sample_runs(&plus(), &Povm::trivial("yes", 2), 50, 3).unwrap();
        assert!(out.iter().all(|o| o == "yes"));
    }

    #[test]
    fn same_seed_same_runs() {
        let a = sample_runs(&plus(), &Povm::computational(2), 100, 42).unwrap();
        let b = sample_runs(&plus(), &Povm::computational(2), 100, 42).unwrap();
        let other = sample_runs(&plus(), &Povm::computational(2), 100, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, other);
    }

    #[test]
    fn binomial_concentration() {
        let n = 100_000;
        let out = sample_runs(&plus(), &Povm::computational(2), n, 1).unwrap();
        let freq = out.iter().filter(|o| *o == "0").count() as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 5.0 * 0.5 / (n as f64).sqrt());
    }

    fn pipeline() -> Pipeline {
        Pipeline {
            source: "source".into(),
            preparations: vec![
                SubPreparation {
                    label: "zero".into(),
                    state: DensityOperator::pure(&ket(2, 0)),
                    weight: 0.5,
                },
                SubPreparation {
                    label: "plus".into(),
                    state: plus(),
                    weight: 0.5,
                },
            ],
            methods: vec![
                Method {
                    label: "Z".into(),
                    povm: Povm::computational(2),
                    weight: 0.5,
                },
                Method {
                    label: "trine".into(),
                    povm: crate::operational::povm::trine(),
                    weight: 0.5,
                },
            ],
        }
    }

    #[test]
    fn empty_simulation_is_vacuous() {
        let sim = simulate(&pipeline(), 0, 0, &Tolerances::default()).unwrap();
        assert!(sim.passed());
        assert!(sim.born.is_empty());
    }

    #[test]
    fn sampled_experiment_passes() {
        let sim = simulate(&pipeline(), 20_000, 42, &Tolerances::default()).unwrap();
        assert!(sim.passed(), "{:?}", sim.axioms);
        assert_eq!(find(&sim.axioms, Axiom::A5).unwrap().status, Status::Pass);
        // |0> under Z is deterministic, so its scores are exactly zero
        let det: Vec<_> = sim
            .born
            .iter()
            .filter(|s| s.preparation == "zero" && s.method == "Z")
            .collect();
        assert!(det.iter().all(|s| s.z == 0.0));
    }

    #[test]
    fn z_scores() {
        assert_eq!(z_score(0.5, 0.5, 10), 0.0);
        assert_eq!(z_score(1.0, 1.0, 10), 0.0);
        assert!(z_score(0.9, 1.0, 10).is_infinite());
        assert!((z_score(0.6, 0.5, 100) - 2.0).abs() < 1e-12);
    }
}
