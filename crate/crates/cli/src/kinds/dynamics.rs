//! `lindblad` scenarios.

use opqm_core::hilbert::trace_product;
use opqm_core::operational::{lindblad_evolve_every, LindbladModel, Trajectory};
use opqm_core::QuantumError;
use serde_json::json;

use crate::convert::state;
use crate::error::{schema, CliError};
use crate::report::Check;
use crate::scenario::{matrix, DecaySpec, LindbladSpec};
use crate::settings::Settings;

use super::Outcome;

pub fn lindblad(spec: &LindbladSpec, s: &Settings) -> Result<Outcome, CliError> {
    let h = matrix(&spec.hamiltonian)?;
    let jumps = spec
        .jumps
        .iter()
        .map(|j| Ok((matrix(&j.operator)?, j.rate)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let model = LindbladModel::new(h, jumps)?;
    let w = state(&spec.initial, &s.core)?;
    if w.dim() != model.dim() {
        return Err(schema(format!(
            "initial state has dimension {}, the generator {}",
            w.dim(),
            model.dim()
        )));
    }

    let trajectory = match lindblad_evolve_every(&model, &w, spec.time, spec.dt, spec.stride) {
        Ok(t) => t,
        Err(QuantumError::Unstable { time, reason }) => {
            let check = Check::new("stability", opqm_core::Status::Fail)
                .with_witness(format!("t={time}"))
                .with_note(format!("{reason}; reduce dt"));
            return Ok(Outcome::checks(vec![check]));
        }
        Err(e) => return Err(e.into()),
    };

    let mut checks = vec![
        Check::pass("stability").with_data(json!({ "points": trajectory.points.len() })),
        Check::bound("trace drift", trajectory.max_trace_drift(), s.drift),
        Check::bound("positivity", (-trajectory.min_eigenvalue()).max(0.0), s.core.positivity)
            .with_data(json!({ "min_eigenvalue": trajectory.min_eigenvalue() })),
    ];
    for d in &spec.decay {
        checks.push(decay(d, &trajectory, s)?);
    }
    let mut csv = Vec::new();
    trajectory
        .write_csv(&mut csv)
        .map_err(|e| schema(format!("writing trajectory: {e}")))?;
    Ok(Outcome { checks, csv: Some(csv) })
}

/// Largest gap between `⟨O⟩_t` and the declared exponential.
fn decay(d: &DecaySpec, trajectory: &Trajectory, s: &Settings) -> Result<Check, CliError> {
    let o = matrix(&d.observable)?;
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for p in &trajectory.points {
        if o.nrows() != p.state.nrows() || o.ncols() != p.state.ncols() {
            return Err(schema(format!(
                "decay `{}`: observable has the wrong dimension",
                d.label
            )));
        }
        let expected = d.asymptote + (d.initial - d.asymptote) * (-d.rate * p.time).exp();
        let gap = (trace_product(&p.state, &o).re - expected).abs();
        if gap > worst {
            worst = gap;
            at = p.time;
        }
    }
    Ok(Check::bound(format!("decay {}", d.label), worst, s.decay).with_data(json!({ "worst_time": at })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Entry, StateSpec};
    use opqm_core::Status;

    fn real(rows: &[&[f64]]) -> Vec<Vec<Entry>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Entry::Real(x)).collect())
            .collect()
    }

    fn damping(dt: f64, time: f64) -> LindbladSpec {
        LindbladSpec {
            hamiltonian: real(&[&[0.0, 0.0], &[0.0, 0.0]]),
            jumps: vec![crate::scenario::JumpSpec {
                operator: real(&[&[0.0, 1.0], &[0.0, 0.0]]),
                rate: 1.0,
            }],
            initial: StateSpec {
                ket: Some(vec![Entry::Real(0.0), Entry::Real(1.0)]),
                ..Default::default()
            },
            time,
            dt,
            stride: 10,
            decay: vec![DecaySpec {
                label: "excited".into(),
                observable: real(&[&[0.0, 0.0], &[0.0, 1.0]]),
                initial: 1.0,
                asymptote: 0.0,
                rate: 1.0,
            }],
        }
    }

    #[test]
    fn damping_matches_the_exponential() {
        let out = lindblad(&damping(1e-3, 2.0), &Settings::default()).unwrap();
        assert!(out.checks.iter().all(|c| !c.failed()), "{:?}", out.checks);
        let csv = String::from_utf8(out.csv.unwrap()).unwrap();
        assert!(csv.starts_with("time,re_0_0"));
        assert_eq!(csv.lines().count(), 1 + 201);
    }

    #[test]
    fn huge_steps_are_reported_unstable() {
        let out = lindblad(&damping(3.0, 6.0), &Settings::default()).unwrap();
        assert_eq!(out.checks.len(), 1);
        assert_eq!(out.checks[0].status, Status::Fail);
        assert!(out.csv.is_none());
    }
}
