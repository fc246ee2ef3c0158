use std::collections::BTreeMap;

use opqm_core::Tolerances;
use serde::Serialize;

/// Core tolerances plus the thresholds only the front end applies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Settings {
    #[serde(flatten)]
    pub core: Tolerances,
    /// Largest allowed top-occupancy population of a Gibbs-form state.
    pub truncation: f64,
    /// Largest allowed `|Tr W_t - 1|` along a trajectory.
    pub drift: f64,
    /// Normalization, duality and conservation checks.
    pub numeric: f64,
    /// Agreement with a declared exponential decay.
    pub decay: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            core: Tolerances::default(),
            truncation: 1e-8,
            drift: 1e-9,
            numeric: 1e-10,
            decay: 1e-6,
        }
    }
}

impl Settings {
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        let slot = match key {
            "truncation" => &mut self.truncation,
            "drift" => &mut self.drift,
            "numeric" => &mut self.numeric,
            "decay" => &mut self.decay,
            _ => return self.core.set(key, value),
        };
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("tolerance `{key}` must be finite and nonnegative"));
        }
        *slot = value;
        Ok(())
    }

    /// Scenario values first, then command-line overrides.
    pub fn resolve<'a>(
        scenario: &BTreeMap<String, f64>,
        overrides: impl IntoIterator<Item = &'a (String, f64)>,
    ) -> Result<Self, String> {
        let mut s = Self::default();
        for (k, v) in scenario {
            s.set(k, *v)?;
        }
        for (k, v) in overrides {
            s.set(k, *v)?;
        }
        Ok(s)
    }
}

/// Parses `key=value`.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_win() {
        let scenario = BTreeMap::from([("z".to_string(), 4.0), ("truncation".to_string(), 1e-6)]);
        let cli = [("z".to_string(), 3.0)];
        let s = Settings::resolve(&scenario, &cli).unwrap();
        assert_eq!(s.core.z, 3.0);
        assert_eq!(s.truncation, 1e-6);
        assert_eq!(s.core.axiom, 1e-9);
    }

    #[test]
    fn bad_keys_and_values() {
        assert!(Settings::default().set("nope", 1.0).is_err());
        assert!(Settings::default().set("drift", -1.0).is_err());
        assert!(parse_override("z").is_err());
        assert_eq!(parse_override("z = 2").unwrap(), ("z".to_string(), 2.0));
    }
}
