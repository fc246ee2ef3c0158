//! Scenario values to core objects.

use opqm_core::hilbert::{hermitian_part, CMatrix};
use opqm_core::operational::Povm;
use opqm_core::{DensityOperator, EffectOperator, FiniteModel, Tolerances};

use crate::error::{schema, CliError};
use crate::scenario::{matrix, vector, PovmSpec, StateSpec, SubsetSpec};

pub fn model(elements: &[String], subsets: &[SubsetSpec]) -> Result<FiniteModel, CliError> {
    Ok(FiniteModel::new(
        elements.to_vec(),
        subsets.iter().map(|s| (s.label.clone(), s.members.clone())),
    )?)
}

pub fn state(spec: &StateSpec, tol: &Tolerances) -> Result<DensityOperator, CliError> {
    match (&spec.ket, &spec.matrix, spec.mixed) {
        (Some(k), None, None) => Ok(DensityOperator::pure(&vector(k)?)),
        (None, Some(m), None) => Ok(DensityOperator::with_tolerances(matrix(m)?, tol)?),
        (None, None, Some(d)) if d > 0 => Ok(DensityOperator::maximally_mixed(d)),
        _ => Err(schema(
            "a state needs exactly one of `ket`, `matrix` or `mixed` (positive)",
        )),
    }
}

pub fn povm(spec: &PovmSpec, tol: &Tolerances) -> Result<Povm, CliError> {
    let labels = |n: usize| -> Result<Vec<String>, CliError> {
        match &spec.outcomes {
            Some(o) if o.len() == n => Ok(o.clone()),
            Some(o) => Err(schema(format!("{} outcomes for {n} effects", o.len()))),
            None => Ok((0..n).map(|k| k.to_string()).collect()),
        }
    };
    match (spec.computational, &spec.effects, &spec.basis) {
        (Some(d), None, None) if spec.outcomes.is_none() && d > 0 => Ok(Povm::computational(d)),
        (None, Some(effects), None) => {
            let ops = effects
                .iter()
                .map(|e| {
                    Ok(EffectOperator::with_tolerances(
                        hermitian_checked(matrix(e)?, tol)?,
                        tol,
                    )?)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Povm::new(labels(ops.len())?, ops)?)
        }
        (None, None, Some(basis)) => {
            let kets = basis
                .iter()
                .map(|k| vector(k).map(|v| v.normalize()))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = kets[0].len();
            if kets.iter().any(|k| k.len() != dim) {
                return Err(schema("basis kets have different lengths"));
            }
            let cols = CMatrix::from_columns(&kets);
            Ok(Povm::projective(labels(kets.len())?, &cols)?)
        }
        _ => Err(schema(
            "a POVM needs exactly one of `computational`, `effects` or `basis` (outcomes only with the last two)",
        )),
    }
}

fn hermitian_checked(m: CMatrix, tol: &Tolerances) -> Result<CMatrix, CliError> {
    let defect = opqm_core::hilbert::hermiticity_defect(&m);
    if defect > tol.hermitian {
        return Err(opqm_core::QuantumError::NotHermitian(defect).into());
    }
    Ok(hermitian_part(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Entry;

    #[test]
    fn states_need_one_form() {
        let tol = Tolerances::default();
        assert!(state(&StateSpec::default(), &tol).is_err());
        let spec = StateSpec {
            mixed: Some(3),
            ..Default::default()
        };
        assert_eq!(state(&spec, &tol).unwrap().dim(), 3);
        let spec = StateSpec {
            ket: Some(vec![Entry::Real(1.0), Entry::Real(1.0)]),
            ..Default::default()
        };
        assert!((state(&spec, &tol).unwrap().purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_povm_is_projective() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let spec = PovmSpec {
            outcomes: Some(vec!["+".into(), "-".into()]),
            basis: Some(vec![
                vec![Entry::Real(r), Entry::Real(r)],
                vec![Entry::Real(1.0), Entry::Real(-1.0)],
            ]),
            ..Default::default()
        };
        let p = povm(&spec, &Tolerances::default()).unwrap();
        assert_eq!(p.outcomes(), ["+", "-"]);
        assert!(p.is_projective(1e-12));
    }

    #[test]
    fn outcome_count_must_match() {
        let spec = PovmSpec {
            outcomes: Some(vec!["a".into()]),
            effects: Some(vec![vec![vec![Entry::Real(1.0)]], vec![vec![Entry::Real(0.0)]]]),
            ..Default::default()
        };
        assert!(povm(&spec, &Tolerances::default()).is_err());
    }
}
