//! `quantum-povm` and `instrument` scenarios.

use opqm_core::hilbert::{convex_mix, identity, max_abs, random, CMatrix};
use opqm_core::operational::{
    born, choi_min_eigenvalue, frame_fit, gleason_additivity_check, induced_povm, instrument_select, measurement_tree,
    povm_distribution, Instrument, Operation, Povm,
};
use opqm_core::DensityOperator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::convert::{povm, state};
use crate::error::{schema, CliError};
use crate::report::Check;
use crate::scenario::{matrix, InstrumentSpec, QuantumPovmSpec};
use crate::settings::Settings;

const CP_LIMIT: f64 = 1e-9;

fn distribution(outcomes: &[String], p: &[f64]) -> Value {
    let mut m = Map::new();
    for (o, x) in outcomes.iter().zip(p) {
        m.insert(o.clone(), json!(x));
    }
    Value::Object(m)
}

fn normalization(name: &str, effects: impl Iterator<Item = CMatrix>, dim: usize, s: &Settings) -> Check {
    let total = effects.fold(CMatrix::zeros(dim, dim), |acc, e| acc + e);
    Check::bound(name, max_abs(&(total - identity(dim))), s.numeric)
}

pub fn quantum_povm(spec: &QuantumPovmSpec, seed: u64, s: &Settings) -> Result<Vec<Check>, CliError> {
    let p = povm(&spec.povm, &s.core)?;
    let dim = p.dim();
    let labelled = spec
        .states
        .iter()
        .enumerate()
        .map(|(i, st)| {
            let w = state(st, &s.core)?;
            if w.dim() != dim {
                return Err(schema(format!("state {i} has dimension {}, the POVM {dim}", w.dim())));
            }
            Ok((st.label.clone().unwrap_or_else(|| format!("w{i}")), w))
        })
        .collect::<Result<Vec<(String, DensityOperator)>, CliError>>()?;
    if labelled.is_empty() {
        return Err(schema("at least one state is required"));
    }

    let mut checks = vec![normalization(
        "povm normalization",
        p.effects().iter().map(|e| e.matrix().clone()),
        dim,
        s,
    )];
    for (label, w) in &labelled {
        let dist = povm_distribution(w, &p)?;
        let sum: f64 = dist.iter().sum();
        checks.push(
            Check::bound(format!("distribution {label}"), (sum - 1.0).abs(), s.numeric)
                .with_data(distribution(p.outcomes(), &dist)),
        );
    }
    for (i, mix) in spec.mixtures.iter().enumerate() {
        checks.push(affinity(i, mix, &labelled, &p, s)?);
    }
    for (k, (label, w)) in labelled.iter().enumerate() {
        let g = gleason_additivity_check(w, spec.gleason_trials, seed.wrapping_add(k as u64));
        let mut check = Check::bound(format!("additivity {label}"), g.max_residual, s.numeric);
        if let Some(warn) = g.warning {
            check = check.with_note(warn);
        }
        checks.push(check);
        checks.push(recovery(label, w, seed.wrapping_add(k as u64), s)?);
    }
    Ok(checks)
}

fn affinity(
    i: usize,
    mix: &crate::scenario::MixtureSpec,
    states: &[(String, DensityOperator)],
    p: &Povm,
    s: &Settings,
) -> Result<Check, CliError> {
    if mix.states.len() != mix.weights.len() || mix.states.is_empty() {
        return Err(schema(format!(
            "mixture {i}: states and weights must be nonempty and the same length"
        )));
    }
    let parts = mix
        .states
        .iter()
        .zip(&mix.weights)
        .map(|(l, &x)| {
            states
                .iter()
                .find(|(name, _)| name == l)
                .map(|(_, w)| (x, w))
                .ok_or_else(|| schema(format!("mixture {i}: unknown state `{l}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mixed = convex_mix(&parts)?;
    let mut worst: f64 = 0.0;
    for f in p.effects() {
        let direct = born(&mixed, f)?;
        let combined: f64 = parts.iter().map(|(x, w)| x * born(w, f).unwrap_or(f64::NAN)).sum();
        worst = worst.max((direct - combined).abs());
    }
    Ok(Check::bound(
        format!("affinity {}", mix.states.join("+")),
        worst,
        s.numeric,
    ))
}

/// Rebuilds the state from Born values on `2d²` random projectors.
fn recovery(label: &str, w: &DensityOperator, seed: u64, s: &Settings) -> Result<Check, CliError> {
    let dim = w.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let samples: Vec<(CMatrix, f64)> = (0..2 * dim * dim)
        .map(|_| {
            let psi = random::pure_vector(&mut rng, dim);
            let proj = &psi * psi.adjoint();
            let value = w.expectation(&proj);
            (proj, value)
        })
        .collect();
    let fit = frame_fit(&samples, dim)?;
    let error = max_abs(&(fit.state.matrix() - w.matrix()));
    // the fit residual is the acceptance quantity, the entrywise error is context
    Ok(
        Check::bound(format!("frame fit {label}"), fit.residual, s.numeric.max(1e-8))
            .with_data(json!({ "max_entry_error": error, "rank": fit.rank })),
    )
}

pub fn instrument(spec: &InstrumentSpec, s: &Settings) -> Result<Vec<Check>, CliError> {
    let w = state(&spec.state, &s.core)?;
    let inst = match (&spec.luders, spec.operations.is_empty()) {
        (Some(p), true) => Instrument::luders(&povm(p, &s.core)?),
        (None, false) => Instrument::new(
            spec.operations
                .iter()
                .map(|o| {
                    let kraus = o.kraus.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
                    Ok((o.label.clone(), Operation::new(kraus)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?,
        )?,
        _ => return Err(schema("an instrument needs exactly one of `operations` or `luders`")),
    };
    if inst.dim() != w.dim() {
        return Err(schema(format!(
            "state has dimension {}, the instrument {}",
            w.dim(),
            inst.dim()
        )));
    }
    let dim = inst.dim();

    let mut checks = vec![normalization(
        "instrument normalization",
        inst.operations().iter().map(Operation::effect),
        dim,
        s,
    )];
    for (label, op) in inst.outcomes().iter().zip(inst.operations()) {
        let min = choi_min_eigenvalue(op);
        checks.push(
            Check::bound(format!("complete positivity {label}"), (-min).max(0.0), CP_LIMIT)
                .with_data(json!({ "min_choi_eigenvalue": min })),
        );
    }

    let povm = induced_povm(&inst);
    let mut worst: f64 = 0.0;
    for (label, f) in inst.outcomes().iter().zip(povm.effects()) {
        let (p, _) = instrument_select(&w, &inst, &[label])?;
        worst = worst.max((p - born(&w, f)?).abs());
    }
    checks.push(Check::bound("duality", worst, s.numeric));

    let tree = measurement_tree(&w, &inst, spec.depth)?;
    let total: f64 = tree.iter().map(|b| b.probability).sum();
    let branches: Vec<Value> = tree
        .iter()
        .map(|b| json!({ "outcomes": b.outcomes, "probability": b.probability }))
        .collect();
    checks.push(
        Check::bound(
            format!("measurement tree depth {}", spec.depth),
            (total - 1.0).abs(),
            s.numeric,
        )
        .with_data(Value::Array(branches)),
    );

    if !spec.select.is_empty() {
        let (p, post) = instrument_select(&w, &inst, &spec.select)?;
        let populations: Option<Vec<f64>> = post.map(|st| (0..dim).map(|i| st.matrix()[(i, i)].re).collect());
        checks.push(
            Check::pass(format!("select {}", spec.select.join(",")))
                .with_data(json!({ "probability": p, "populations": populations })),
        );
    }
    Ok(checks)
}
