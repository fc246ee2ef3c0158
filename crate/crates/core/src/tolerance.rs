use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by all checks.
///
/// `axiom` and `class_eq` apply to analytic (float) tables, exact rational
/// tables are compared exactly. Empirical entries widen the comparison to
/// `z` standard errors. The last three govern density operator and effect
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub axiom: f64,
    pub class_eq: f64,
    pub z: f64,
    pub hermitian: f64,
    pub positivity: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            axiom: 1e-9,
            class_eq: 1e-9,
            z: 5.0,
            hermitian: 1e-10,
            positivity: 1e-10,
            trace: 1e-10,
        }
    }
}

impl Tolerances {
    /// Allowed deviation for an equality involving entries with the given
    /// standard errors: `max(base, z * sqrt(sum se^2))`.
    pub fn allowed(&self, base: f64, stderrs: &[f64]) -> f64 {
        let se = stderrs.iter().map(|s| s * s).sum::<f64>().sqrt();
        base.max(self.z * se)
    }

    /// Sets a field by name, as used by `--tolerance k=v` overrides.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        let slot = match key {
            "axiom" => &mut self.axiom,
            "class_eq" => &mut self.class_eq,
            "z" => &mut self.z,
            "hermitian" => &mut self.hermitian,
            "positivity" => &mut self.positivity,
            "trace" => &mut self.trace,
            other => return Err(format!("unknown tolerance `{other}`")),
        };
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("tolerance `{key}` must be finite and nonnegative"));
        }
        *slot = value;
        Ok(())
    }
}
