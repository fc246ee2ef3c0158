//! Scenario files: one TOML document with a `kind`, an optional `seed` and
//! `[tolerances]`, and a body table named after the kind.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use opqm_core::hilbert::{CMatrix, CVector};
use opqm_core::Prob;
use serde::{Deserialize, Serialize};

use crate::error::{schema, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    FiniteModel,
    Experiment,
    QuantumPovm,
    Instrument,
    Lindblad,
    Macrostate,
    Pipeline,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::FiniteModel => "finite-model",
            Kind::Experiment => "experiment",
            Kind::QuantumPovm => "quantum-povm",
            Kind::Instrument => "instrument",
            Kind::Lindblad => "lindblad",
            Kind::Macrostate => "macrostate",
            Kind::Pipeline => "pipeline",
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Scenario {
    pub kind: Kind,
    /// Defaults to the file stem.
    pub name: Option<String>,
    pub description: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub finite_model: Option<FiniteModelSpec>,
    pub experiment: Option<ExperimentSpec>,
    pub quantum_povm: Option<QuantumPovmSpec>,
    pub instrument: Option<InstrumentSpec>,
    pub lindblad: Option<LindbladSpec>,
    pub macrostate: Option<MacrostateSpec>,
    pub pipeline: Option<PipelineSpec>,
}

/// A scenario whose body matches its kind.
#[derive(Clone, Debug)]
pub enum Body {
    FiniteModel(FiniteModelSpec),
    Experiment(ExperimentSpec),
    QuantumPovm(QuantumPovmSpec),
    Instrument(InstrumentSpec),
    Lindblad(LindbladSpec),
    Macrostate(MacrostateSpec),
    Pipeline(PipelineSpec),
}

impl Scenario {
    pub fn parse(source: &str, path: &Path) -> Result<Self, CliError> {
        toml::from_str(source).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |span| line_column(source, span.start));
            CliError::Parse {
                path: path.to_path_buf(),
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let source = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut scenario = Self::parse(&source, path)?;
        if scenario.name.is_none() {
            scenario.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(scenario)
    }

    /// Takes the body for `kind`, rejecting bodies for other kinds.
    pub fn body(&self) -> Result<Body, CliError> {
        let present: Vec<&str> = [
            ("finite-model", self.finite_model.is_some()),
            ("experiment", self.experiment.is_some()),
            ("quantum-povm", self.quantum_povm.is_some()),
            ("instrument", self.instrument.is_some()),
            ("lindblad", self.lindblad.is_some()),
            ("macrostate", self.macrostate.is_some()),
            ("pipeline", self.pipeline.is_some()),
        ]
        .iter()
        .filter(|(_, p)| *p)
        .map(|(k, _)| *k)
        .collect();
        let kind = self.kind.to_string();
        if let Some(other) = present.iter().find(|k| **k != kind) {
            return Err(schema(format!(
                "kind is `{kind}` but the scenario has a `[{other}]` table"
            )));
        }
        let missing = || schema(format!("kind `{kind}` needs a `[{kind}]` table"));
        Ok(match self.kind {
            Kind::FiniteModel => Body::FiniteModel(self.finite_model.clone().ok_or_else(missing)?),
            Kind::Experiment => Body::Experiment(self.experiment.clone().ok_or_else(missing)?),
            Kind::QuantumPovm => Body::QuantumPovm(self.quantum_povm.clone().ok_or_else(missing)?),
            Kind::Instrument => Body::Instrument(self.instrument.clone().ok_or_else(missing)?),
            Kind::Lindblad => Body::Lindblad(self.lindblad.clone().ok_or_else(missing)?),
            Kind::Macrostate => Body::Macrostate(self.macrostate.clone().ok_or_else(missing)?),
            Kind::Pipeline => Body::Pipeline(self.pipeline.clone().ok_or_else(missing)?),
        })
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

// ---- shared value types -------------------------------------------------

/// A probability written as `"3/8"` (exact) or as a number.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ProbSpec {
    Text(String),
    Number(f64),
}

impl ProbSpec {
    pub fn to_prob(&self) -> Result<Prob, CliError> {
        match self {
            ProbSpec::Text(s) => Ok(s.parse()?),
            ProbSpec::Number(x) => Ok(Prob::Approx(*x)),
        }
    }
}

/// A real number or `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Rows of entries.
pub type MatrixSpec = Vec<Vec<Entry>>;

pub fn matrix(rows: &MatrixSpec) -> Result<CMatrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(schema("empty matrix"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(schema("matrix rows have different lengths"));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| rows[i][j].value()))
}

pub fn vector(entries: &[Entry]) -> Result<CVector, CliError> {
    if entries.is_empty() {
        return Err(schema("empty vector"));
    }
    let v = CVector::from_iterator(entries.len(), entries.iter().map(|e| e.value()));
    if v.norm() == 0.0 {
        return Err(schema("zero vector"));
    }
    Ok(v)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetSpec {
    pub label: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub given: String,
    pub select: String,
    pub value: ProbSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSpec {
    pub whole: String,
    pub parts: Vec<String>,
}

/// Exactly one of `ket`, `matrix` or `mixed` (the maximally mixed state of
/// that dimension).
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub label: Option<String>,
    pub ket: Option<Vec<Entry>>,
    pub matrix: Option<MatrixSpec>,
    pub mixed: Option<usize>,
}

/// Exactly one of `computational = d`, `effects` (with `outcomes`) or
/// `basis` (kets, with `outcomes`).
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmSpec {
    pub computational: Option<usize>,
    pub outcomes: Option<Vec<String>>,
    pub effects: Option<Vec<MatrixSpec>>,
    pub basis: Option<Vec<Vec<Entry>>>,
}

// ---- kind bodies ----------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteModelSpec {
    pub elements: Vec<String>,
    pub subsets: Vec<SubsetSpec>,
    /// Element weights of an additive measure; builds the whole table.
    pub weights: Option<Vec<ProbSpec>>,
    /// Explicit entries, applied after `weights`.
    #[serde(default)]
    pub entries: Vec<EntrySpec>,
    #[serde(default)]
    pub decompositions: Vec<DecompositionSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableName {
    Preparations,
    Methods,
    Combined,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideSpec {
    pub table: TableName,
    /// For `combined`, either a label of `S` or `a&b` with `a` in `Q` and
    /// `b` in `R`.
    pub given: String,
    pub select: String,
    pub value: ProbSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub elements: Vec<String>,
    pub preparations: Vec<SubsetSpec>,
    pub registrations: Vec<SubsetSpec>,
    pub methods: Vec<SubsetSpec>,
    pub weights: Vec<ProbSpec>,
    #[serde(default)]
    pub overrides: Vec<OverrideSpec>,
    #[serde(default)]
    pub decompositions: Vec<DecompositionSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    pub states: Vec<String>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct QuantumPovmSpec {
    pub states: Vec<StateSpec>,
    pub povm: PovmSpec,
    #[serde(default)]
    pub mixtures: Vec<MixtureSpec>,
    /// Random orthogonal resolutions per state for the additivity check.
    #[serde(default = "default_gleason_trials")]
    pub gleason_trials: usize,
}

fn default_gleason_trials() -> usize {
    100
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    pub label: String,
    pub kraus: Vec<MatrixSpec>,
}

/// Either explicit operations or the Lüders instrument of a POVM.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentSpec {
    pub state: StateSpec,
    #[serde(default)]
    pub operations: Vec<OperationSpec>,
    pub luders: Option<PovmSpec>,
    /// Outcome subset `M` whose probability `Tr M(M)[W]` and conditional
    /// state are reported.
    #[serde(default)]
    pub select: Vec<String>,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_depth() -> usize {
    2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub operator: MatrixSpec,
    pub rate: f64,
}

/// `⟨observable⟩(t) = final + (initial - final) e^{-rate t}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySpec {
    pub label: String,
    pub observable: MatrixSpec,
    pub initial: f64,
    #[serde(default, rename = "final")]
    pub asymptote: f64,
    pub rate: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladSpec {
    pub hamiltonian: MatrixSpec,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
    pub initial: StateSpec,
    pub time: f64,
    pub dt: f64,
    /// Record every `stride`-th step.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub decay: Vec<DecaySpec>,
}

fn default_stride() -> usize {
    1
}

/// One operator on the Fock space. Exactly one of the operator fields is
/// set; `coefficient` scales it.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TermSpec {
    pub label: Option<String>,
    pub coefficient: Option<f64>,
    /// `a†_m a_m`
    pub number: Option<usize>,
    pub total_number: Option<bool>,
    /// `a†_0 a_1 + a†_1 a_0`
    pub hopping: Option<bool>,
    /// Second-quantized lift of a modes x modes matrix.
    pub one_body: Option<MatrixSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrandCanonicalSpec {
    pub beta: f64,
    #[serde(default)]
    pub mu: f64,
}

/// Evenly spaced `steps + 1` times from `0` to `stop`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub stop: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MacrostateSpec {
    pub modes: usize,
    pub nmax: usize,
    pub observables: Vec<TermSpec>,
    pub fields: Vec<f64>,
    /// Boltzmann-like constant of the entropy.
    #[serde(default = "default_k")]
    pub k: f64,
    /// Sum of terms; needed for `grand-canonical` and evolution.
    #[serde(default)]
    pub hamiltonian: Vec<TermSpec>,
    pub grand_canonical: Option<GrandCanonicalSpec>,
    pub times: Option<TimeGrid>,
}

fn default_k() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubPreparationSpec {
    pub label: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    pub state: StateSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub label: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    pub povm: PovmSpec,
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub runs: usize,
    #[serde(default = "default_source")]
    pub source: String,
    pub preparations: Vec<SubPreparationSpec>,
    pub methods: Vec<MethodSpec>,
}

fn default_source() -> String {
    "source".into()
}
