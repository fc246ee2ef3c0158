//! Reports: one record per check, rendered for people or as JSON lines.

use std::fmt::Write as _;

use opqm_core::{AxiomReport, Status};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            residual: None,
            witnesses: Vec::new(),
            note: None,
            data: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, Status::Pass)
    }

    /// Passes when `residual <= limit`; NaN fails.
    pub fn bound(name: impl Into<String>, residual: f64, limit: f64) -> Self {
        let status = if residual <= limit { Status::Pass } else { Status::Fail };
        Self::new(name, status).with_residual(residual)
    }

    pub fn from_axiom(r: &AxiomReport) -> Self {
        Self {
            name: r.axiom.to_string(),
            status: r.status,
            residual: r.max_residual,
            witnesses: r.witnesses.iter().map(ToString::to_string).collect(),
            note: r.note.clone(),
            data: None,
        }
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status.is_fail()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub kind: String,
    pub seed: u64,
    pub version: String,
    pub checks: Vec<Check>,
    /// Seconds. The only field that varies between identical runs.
    pub wall_time: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Line {
    Scenario {
        name: String,
        kind: String,
        seed: u64,
        version: String,
    },
    Check(Check),
    Summary {
        status: Status,
        checks: usize,
        failed: usize,
        wall_time: f64,
    },
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.failed()).count()
    }

    pub fn status(&self) -> Status {
        if self.failed() > 0 {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failed() > 0 {
            1
        } else {
            0
        }
    }

    /// JSON lines: a scenario record, one record per check, and a summary
    /// whose last field is the wall time.
    pub fn structured(&self) -> String {
        let mut out = String::new();
        let header = Line::Scenario {
            name: self.scenario.clone(),
            kind: self.kind.clone(),
            seed: self.seed,
            version: self.version.clone(),
        };
        push_json(&mut out, &header);
        for c in &self.checks {
            push_json(&mut out, &Line::Check(c.clone()));
        }
        push_json(
            &mut out,
            &Line::Summary {
                status: self.status(),
                checks: self.checks.len(),
                failed: self.failed(),
                wall_time: self.wall_time,
            },
        );
        out
    }

    /// Reads back either the document form or the JSON lines form.
    pub fn parse(text: &str) -> Result<Self, String> {
        if let Ok(r) = serde_json::from_str::<Report>(text) {
            return Ok(r);
        }
        let mut report: Option<Report> = None;
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let record: Line = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", n + 1))?;
            match (record, report.as_mut()) {
                (
                    Line::Scenario {
                        name,
                        kind,
                        seed,
                        version,
                    },
                    None,
                ) => {
                    report = Some(Report {
                        scenario: name,
                        kind,
                        seed,
                        version,
                        checks: Vec::new(),
                        wall_time: 0.0,
                    })
                }
                (Line::Check(c), Some(r)) => r.checks.push(c),
                (Line::Summary { wall_time, .. }, Some(r)) => r.wall_time = wall_time,
                _ => return Err(format!("line {}: unexpected record", n + 1)),
            }
        }
        report.ok_or_else(|| "no scenario record".to_string())
    }

    pub fn document(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({}), seed {}", self.scenario, self.kind, self.seed);
        for c in &self.checks {
            let _ = write!(out, "  {:<6} {}", c.status.to_string(), c.name);
            if let Some(r) = c.residual {
                let _ = write!(out, "  residual {r:.3e}");
            }
            if let Some(note) = &c.note {
                let _ = write!(out, "  [{note}]");
            }
            out.push('\n');
            for w in c.witnesses.iter().take(10) {
                let _ = writeln!(out, "           witness {w}");
            }
            if c.witnesses.len() > 10 {
                let _ = writeln!(out, "           ... {} more witnesses", c.witnesses.len() - 10);
            }
            if let Some(data) = &c.data {
                let _ = writeln!(out, "           {}", serde_json::to_string(data).expect("json"));
            }
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed, {:.3} s",
            self.status(),
            self.checks.len(),
            self.failed(),
            self.wall_time
        );
        out
    }
}

fn push_json(out: &mut String, value: &impl Serialize) {
    out.push_str(&serde_json::to_string(value).expect("records serialize"));
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            scenario: "s".into(),
            kind: "finite-model".into(),
            seed: 3,
            version: "0.0.0".into(),
            checks: vec![
                Check::pass("a").with_data(json!({"w": ["1/2"]})),
                Check::bound("b", 2.0, 1.0).with_witness("(x, y)"),
            ],
            wall_time: 0.25,
        }
    }

    #[test]
    fn lines_end_with_wall_time() {
        let text = sample().structured();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with(r#"{"record":"scenario""#));
        assert!(lines[3].ends_with(r#""wall_time":0.25}"#), "{}", lines[3]);
        assert!(lines[3].contains(r#""status":"fail""#));
    }

    #[test]
    fn both_forms_round_trip() {
        let r = sample();
        assert_eq!(Report::parse(&r.structured()).unwrap(), r);
        assert_eq!(Report::parse(&r.document()).unwrap(), r);
        assert!(Report::parse("{}").is_err());
    }

    #[test]
    fn exit_codes() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 1);
        r.checks.pop();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(Check::bound("nan", f64::NAN, 1.0).status, Status::Fail);
    }
}
