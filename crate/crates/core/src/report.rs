//! Check results shared by every layer.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifies the property a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Relative complement of nested selection procedures.
    #[serde(rename = "S 1.1")]
    S1_1,
    /// Intersection of selection procedures.
    #[serde(rename = "S 1.2")]
    S1_2,
    /// Complementary conditional probabilities sum to one.
    #[serde(rename = "S 2.1")]
    S2_1,
    /// Chain rule for nested selections.
    #[serde(rename = "S 2.2")]
    S2_2,
    /// Nonempty finer selections have nonzero probability.
    #[serde(rename = "S 2.3")]
    S2_3,
    /// `lambda(a, a) = 1`.
    #[serde(rename = "unit")]
    Unit,
    /// `lambda(a, empty) = 0`.
    #[serde(rename = "null")]
    Null,
    /// `lambda(a, b u c) = lambda(a, b) + lambda(a, c)` for disjoint `b, c`.
    #[serde(rename = "additivity")]
    Additivity,
    #[serde(rename = "ring intersection")]
    RingIntersection,
    #[serde(rename = "ring complement")]
    RingComplement,
    #[serde(rename = "ring union")]
    RingUnion,
    /// Ratio identity of the measure on a Boolean ring.
    #[serde(rename = "measure ratio")]
    MeasureRatio,
    /// Decomposition weights sum to one.
    #[serde(rename = "decomposition")]
    Decomposition,
    #[serde(rename = "A 1")]
    A1,
    #[serde(rename = "A 2")]
    A2,
    #[serde(rename = "A 3")]
    A3,
    #[serde(rename = "A 4.1")]
    A4_1,
    #[serde(rename = "A 4.2")]
    A4_2,
    #[serde(rename = "A 4.3")]
    A4_3,
    #[serde(rename = "A 5")]
    A5,
    #[serde(rename = "A 6.1")]
    A6_1,
    #[serde(rename = "A 6.2")]
    A6_2,
    /// `0 <= mu(w, f) <= 1`.
    #[serde(rename = "mu range")]
    MuRange,
    /// Distinct ensembles have distinct rows.
    #[serde(rename = "row separation")]
    RowSeparation,
    /// Distinct effects have distinct columns.
    #[serde(rename = "column separation")]
    ColumnSeparation,
    /// The all-zero effect.
    #[serde(rename = "zero effect")]
    ZeroEffect,
    /// The all-one effect.
    #[serde(rename = "unit effect")]
    UnitEffect,
    /// Rows of a mixture are the weighted rows of its parts.
    #[serde(rename = "mixture transfer")]
    MixtureTransfer,
    /// Sampled frequencies agree with `Tr(W F)`.
    #[serde(rename = "born rule")]
    BornRule,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(name(*self))
    }
}

fn name(axiom: Axiom) -> &'static str {
    use Axiom::*;
    match axiom {
        S1_1 => "S 1.1",
        S1_2 => "S 1.2",
        S2_1 => "S 2.1",
        S2_2 => "S 2.2",
        S2_3 => "S 2.3",
        Unit => "unit",
        Null => "null",
        Additivity => "additivity",
        RingIntersection => "ring intersection",
        RingComplement => "ring complement",
        RingUnion => "ring union",
        MeasureRatio => "measure ratio",
        Decomposition => "decomposition",
        A1 => "A 1",
        A2 => "A 2",
        A3 => "A 3",
        A4_1 => "A 4.1",
        A4_2 => "A 4.2",
        A4_3 => "A 4.3",
        A5 => "A 5",
        A6_1 => "A 6.1",
        A6_2 => "A 6.2",
        MuRange => "mu range",
        RowSeparation => "row separation",
        ColumnSeparation => "column separation",
        ZeroEffect => "zero effect",
        UnitEffect => "unit effect",
        MixtureTransfer => "mixture transfer",
        BornRule => "born rule",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The checked object does not exist in the model. Not a failure.
    Absent,
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Absent => "ABSENT",
        })
    }
}

/// A tuple of subset labels that violates an axiom.
///
/// `via` names the underlying axiom when the report aggregates several
/// (e.g. an `A 1` failure caused by `S 2.1` on the preparation family).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub via: Option<Axiom>,
    pub labels: Vec<String>,
}

impl Witness {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Self {
            via: None,
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn via(mut self, axiom: Axiom) -> Self {
        self.via.get_or_insert(axiom);
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(via) = self.via {
            write!(f, "{via}: ")?;
        }
        write!(f, "({})", self.labels.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// Largest deviation seen over all checked tuples, when numeric.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl AxiomReport {
    /// Builds a pass/fail report from a witness list, sorted for stable
    /// output.
    pub fn from_witnesses(axiom: Axiom, mut witnesses: Vec<Witness>) -> Self {
        witnesses.sort();
        witnesses.dedup();
        let status = if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            axiom,
            status,
            witnesses,
            max_residual: None,
            note: None,
        }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.max_residual = Some(residual);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        !self.status.is_fail()
    }

    /// Folds several reports into one under a new axiom tag, tagging each
    /// witness with the axiom it came from.
    pub fn aggregate(axiom: Axiom, parts: &[AxiomReport]) -> Self {
        let witnesses = parts
            .iter()
            .flat_map(|r| r.witnesses.iter().cloned().map(|w| w.via(r.axiom)))
            .collect();
        let residual = parts
            .iter()
            .filter_map(|r| r.max_residual)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
        let mut report = Self::from_witnesses(axiom, witnesses);
        report.max_residual = residual;
        report
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.status, self.axiom)?;
        if let Some(r) = self.max_residual {
            write!(f, " (max residual {r:e})")?;
        }
        for w in &self.witnesses {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Finds the report for `axiom` in a list.
pub fn find(reports: &[AxiomReport], axiom: Axiom) -> Option<&AxiomReport> {
    reports.iter().find(|r| r.axiom == axiom)
}
