//! `macrostate` scenarios on a truncated Fock space.

use opqm_core::hilbert::{c, CMatrix};
use opqm_core::macrostates::{
    additive_observable, entropy, fock_build, grand_canonical, hopping, liouville_evolve, reference_state,
    trace_distance, write_liouville_csv, FockSpace, ModeOperators,
};
use serde_json::json;

use crate::error::{schema, CliError};
use crate::report::Check;
use crate::scenario::{matrix, MacrostateSpec, TermSpec};
use crate::settings::Settings;

use super::Outcome;

/// Step of the central difference for `∂⟨A_j⟩/∂ζ_j`.
const FIELD_STEP: f64 = 1e-5;

fn term(t: &TermSpec, space: &FockSpace, ops: &ModeOperators) -> Result<CMatrix, CliError> {
    let set = [
        t.number.is_some(),
        t.total_number == Some(true),
        t.hopping == Some(true),
        t.one_body.is_some(),
    ];
    if set.iter().filter(|&&x| x).count() != 1 {
        return Err(schema(
            "a term needs exactly one of `number`, `total-number`, `hopping`, `one-body`",
        ));
    }
    let op = if let Some(m) = t.number {
        ops.number
            .get(m)
            .cloned()
            .ok_or_else(|| schema(format!("mode {m} out of range")))?
    } else if t.total_number == Some(true) {
        ops.total_number()
    } else if t.hopping == Some(true) {
        if space.modes() < 2 {
            return Err(schema("hopping needs two modes"));
        }
        hopping(ops, 1.0)
    } else {
        additive_observable(&matrix(t.one_body.as_ref().expect("checked above"))?, space)?
    };
    Ok(op * c(t.coefficient.unwrap_or(1.0), 0.0))
}

fn label(t: &TermSpec, i: usize) -> String {
    t.label.clone().unwrap_or_else(|| format!("a{i}"))
}

pub fn macrostate(spec: &MacrostateSpec, s: &Settings) -> Result<Outcome, CliError> {
    let (space, ops) = fock_build(spec.modes, spec.nmax)?;
    let observables = spec
        .observables
        .iter()
        .map(|t| term(t, &space, &ops))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = spec.observables.iter().enumerate().map(|(i, t)| label(t, i)).collect();
    let reference = reference_state(observables.clone(), spec.fields.clone())?;
    let w = reference.state();
    let dim = space.dim() as f64;

    let tail = space.truncation_tail(w)?;
    let s_w = entropy(w, spec.k);
    let ceiling = spec.k * dim.ln();
    let mut checks = vec![
        Check::bound("truncation tail", tail, s.truncation),
        Check::bound("entropy bounds", (-s_w).max(s_w - ceiling).max(0.0), s.numeric)
            .with_data(json!({ "entropy": s_w, "max": ceiling })),
        conjugate_variance(&observables, &spec.fields, &names, s)?,
    ];

    let h = if spec.hamiltonian.is_empty() {
        None
    } else {
        let mut h = CMatrix::zeros(space.dim(), space.dim());
        for t in &spec.hamiltonian {
            h += term(t, &space, &ops)?;
        }
        Some(h)
    };
    let need_h = || schema("`hamiltonian` is required for `grand-canonical` and `times`");

    if let Some(gc) = &spec.grand_canonical {
        let h = h.as_ref().ok_or_else(need_h)?;
        let n = ops.total_number();
        let direct = grand_canonical(h, &n, gc.beta, gc.mu)?;
        let via = reference_state(vec![h.clone(), n], vec![gc.beta, -gc.beta * gc.mu])?;
        let mut check = Check::bound("grand canonical", trace_distance(&direct.state, via.state()), s.numeric)
            .with_data(json!({ "log_partition": direct.log_partition }));
        if direct.commutator_norm > s.core.hermitian {
            check = check.with_note(format!(
                "[H, N] = {:e}: particle number is not conserved",
                direct.commutator_norm
            ));
        }
        checks.push(check);
    }

    let mut csv = None;
    if let Some(grid) = &spec.times {
        let h = h.as_ref().ok_or_else(need_h)?;
        if grid.steps == 0 || !(grid.stop.is_finite() && grid.stop >= 0.0) {
            return Err(schema("`times` needs a nonnegative stop and at least one step"));
        }
        let times: Vec<f64> = (0..=grid.steps)
            .map(|k| grid.stop * k as f64 / grid.steps as f64)
            .collect();
        let points = liouville_evolve(&reference, h, &times)?;
        let energy0 = w.expectation(h);
        let worst = |f: &dyn Fn(&opqm_core::DensityOperator) -> f64, at0: f64| {
            points.iter().map(|p| (f(&p.state) - at0).abs()).fold(0.0, f64::max)
        };
        checks.push(Check::bound(
            "energy conservation",
            worst(&|x| x.expectation(h), energy0),
            s.drift,
        ));
        checks.push(Check::bound(
            "entropy conservation",
            worst(&|x| entropy(x, spec.k), s_w),
            s.drift,
        ));
        checks.push(Check::bound(
            "trace conservation",
            worst(&|x| x.matrix().trace().re, 1.0),
            s.drift,
        ));
        let max_fit = points.iter().map(|p| p.fit_residual).fold(0.0, f64::max);
        checks.push(
            Check::pass("reference family")
                .with_residual(max_fit)
                .with_note("residual is the largest trace distance to the fitted reference state"),
        );
        let mut out = Vec::new();
        write_liouville_csv(&points, &names, &mut out).map_err(|e| schema(format!("writing trajectory: {e}")))?;
        csv = Some(out);
    }
    Ok(Outcome { checks, csv })
}

/// `∂⟨A_j⟩/∂ζ_j` is minus a variance, so it must not be positive.
fn conjugate_variance(
    observables: &[CMatrix],
    fields: &[f64],
    names: &[String],
    s: &Settings,
) -> Result<Check, CliError> {
    let mut derivatives = serde_json::Map::new();
    let mut worst: f64 = 0.0;
    for j in 0..fields.len() {
        let shifted = |d: f64| -> Result<f64, CliError> {
            let mut z = fields.to_vec();
            z[j] += d;
            Ok(reference_state(observables.to_vec(), z)?.expectations()[j])
        };
        let derivative = (shifted(FIELD_STEP)? - shifted(-FIELD_STEP)?) / (2.0 * FIELD_STEP);
        worst = worst.max(derivative);
        derivatives.insert(names[j].clone(), json!(derivative));
    }
    // central differences are accurate to about step² times the third cumulant
    Ok(
        Check::bound("conjugate variance sign", worst.max(0.0), s.numeric.max(1e-8))
            .with_data(serde_json::Value::Object(derivatives)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{GrandCanonicalSpec, TimeGrid};

    fn number(m: usize) -> TermSpec {
        TermSpec {
            number: Some(m),
            ..Default::default()
        }
    }

    fn spec() -> MacrostateSpec {
        MacrostateSpec {
            modes: 2,
            nmax: 12,
            observables: vec![TermSpec {
                label: Some("N".into()),
                total_number: Some(true),
                ..Default::default()
            }],
            fields: vec![2.5],
            k: 1.0,
            hamiltonian: vec![
                number(0),
                TermSpec {
                    coefficient: Some(1.5),
                    ..number(1)
                },
            ],
            grand_canonical: Some(GrandCanonicalSpec { beta: 2.0, mu: -0.25 }),
            times: Some(TimeGrid { stop: 1.0, steps: 4 }),
        }
    }

    #[test]
    fn cold_modes_pass() {
        let out = macrostate(&spec(), &Settings::default()).unwrap();
        assert!(out.checks.iter().all(|c| !c.failed()), "{:#?}", out.checks);
        let csv = String::from_utf8(out.csv.unwrap()).unwrap();
        assert!(csv.starts_with("t,fit_residual,N"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn hot_modes_leak_past_the_cutoff() {
        let mut hot = spec();
        hot.fields = vec![0.1];
        hot.nmax = 3;
        let out = macrostate(&hot, &Settings::default()).unwrap();
        let tail = out.checks.iter().find(|c| c.name == "truncation tail").unwrap();
        assert!(tail.failed());
    }

    #[test]
    fn terms_are_exclusive() {
        let mut bad = spec();
        bad.observables[0].number = Some(0);
        assert!(matches!(
            macrostate(&bad, &Settings::default()),
            Err(CliError::Schema(_))
        ));
    }
}
