use std::fmt;

use serde::Serialize;

use crate::error::ModelError;
use crate::prob::Prob;
use crate::report::{Axiom, AxiomReport, Status, Witness};
use crate::setmodel::Subset;
use crate::tolerance::Tolerances;

use super::conditional::{check_partition, Residuals, TableEntry};
use super::experiment::{usable_combined, Experiment};

/// An apparatus `b0 ∈ R0` together with a response `b ∈ R`, `b ⊆ b0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EffectProcess {
    pub method: String,
    pub response: String,
}

impl fmt::Display for EffectProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.method, self.response)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreparationRow {
    pub label: String,
    /// The preparation as a set, when known; used to flag incompatible
    /// members of one ensemble.
    pub set: Option<Subset>,
}

/// `μ(a, g) = λ_S(a ∩ b0, a ∩ b)` over preparations and effect processes.
#[derive(Clone, Debug, PartialEq)]
pub struct TriggerTable {
    pub preparations: Vec<PreparationRow>,
    pub processes: Vec<EffectProcess>,
    /// `values[row][column]`
    pub values: Vec<Vec<TableEntry>>,
}

impl TriggerTable {
    pub fn row_of(&self, label: &str) -> Option<usize> {
        self.preparations.iter().position(|p| p.label == label)
    }

    pub fn column_of(&self, method: &str, response: &str) -> Option<usize> {
        self.processes
            .iter()
            .position(|g| g.method == method && g.response == response)
    }

    pub fn get(&self, label: &str, method: &str, response: &str) -> Option<&TableEntry> {
        Some(&self.values[self.row_of(label)?][self.column_of(method, response)?])
    }
}

/// Builds the trigger table. Entries whose conditioning set `a ∩ b0` is
/// empty are undefined.
pub fn trigger_table(exp: &Experiment) -> Result<TriggerTable, ModelError> {
    let q = exp.preparations().base();
    let r = exp.registrations();
    let r0 = exp.methods().base();

    let mut processes = Vec::new();
    let mut pairs = Vec::new();
    for b0 in r0.family().iter().filter(|b0| !b0.set.is_empty()) {
        for b in r.family().iter().filter(|b| b.set.is_subset(&b0.set)) {
            processes.push(EffectProcess {
                method: b0.label.clone(),
                response: b.label.clone(),
            });
            pairs.push((&b0.set, &b.set));
        }
    }

    let mut values = Vec::with_capacity(q.len());
    for a in q.family() {
        let mut row = Vec::with_capacity(pairs.len());
        for (b0, b) in &pairs {
            let c = a.set.intersection(b0);
            if c.is_empty() {
                row.push(TableEntry::Undefined);
                continue;
            }
            let entry = match usable_combined(exp, &c, &a.set.intersection(b))? {
                Some((value, stderr)) => TableEntry::Value { value, stderr },
                None => TableEntry::Undefined,
            };
            row.push(entry);
        }
        values.push(row);
    }
    Ok(TriggerTable {
        preparations: q
            .family()
            .iter()
            .map(|a| PreparationRow {
                label: a.label.clone(),
                set: Some(a.set.clone()),
            })
            .collect(),
        processes,
        values,
    })
}

/// An equivalence class of preparations: a state.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub id: usize,
    pub members: Vec<String>,
}

/// An equivalence class of effect processes: an effect.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectClass {
    pub id: usize,
    pub members: Vec<EffectProcess>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub ensembles: Vec<Ensemble>,
    pub effects: Vec<EffectClass>,
    /// `matrix[w][f]`, taken from the first member of each class.
    pub matrix: Vec<Vec<TableEntry>>,
    /// Ensemble index of each trigger-table row.
    pub row_class: Vec<usize>,
    /// Effect index of each trigger-table column.
    pub column_class: Vec<usize>,
    /// Largest `|μ(a, g) - μ(w, f)|` over all members.
    pub max_spread: f64,
    /// Disjoint preparation pairs that landed in the same ensemble.
    pub incompatible: Vec<(String, String)>,
}

impl Quotient {
    /// The quotient matrix as a trigger table, rows `w0, w1, ...` and
    /// columns `(f, f0)`, `(f, f1)`, ...
    pub fn as_table(&self) -> TriggerTable {
        TriggerTable {
            preparations: self
                .ensembles
                .iter()
                .map(|w| PreparationRow {
                    label: format!("w{}", w.id),
                    set: None,
                })
                .collect(),
            processes: self
                .effects
                .iter()
                .map(|f| EffectProcess {
                    method: "f".into(),
                    response: format!("f{}", f.id),
                })
                .collect(),
            values: self.matrix.clone(),
        }
    }

    pub fn ensemble_of(&self, row: usize) -> &Ensemble {
        &self.ensembles[self.row_class[row]]
    }
}

/// Groups rows with matching `μ` rows into ensembles and columns with
/// matching columns into effects. Rows are compared to the first member of
/// each existing class in table order.
pub fn quotient(table: &TriggerTable, tol: &Tolerances) -> Quotient {
    let rows = table.values.len();
    let cols = table.processes.len();
    let row_eq =
        |i: usize, j: usize| (0..cols).all(|c| table.values[i][c].matches(&table.values[j][c], tol.class_eq, tol));
    let col_eq =
        |i: usize, j: usize| (0..rows).all(|r| table.values[r][i].matches(&table.values[r][j], tol.class_eq, tol));
    let (row_class, row_reps) = classify(rows, row_eq);
    let (column_class, col_reps) = classify(cols, col_eq);

    let ensembles: Vec<Ensemble> = row_reps
        .iter()
        .enumerate()
        .map(|(id, _)| Ensemble {
            id,
            members: (0..rows)
                .filter(|&r| row_class[r] == id)
                .map(|r| table.preparations[r].label.clone())
                .collect(),
        })
        .collect();
    let effects: Vec<EffectClass> = col_reps
        .iter()
        .enumerate()
        .map(|(id, _)| EffectClass {
            id,
            members: (0..cols)
                .filter(|&c| column_class[c] == id)
                .map(|c| table.processes[c].clone())
                .collect(),
        })
        .collect();
    let matrix: Vec<Vec<TableEntry>> = row_reps
        .iter()
        .map(|&r| col_reps.iter().map(|&c| table.values[r][c].clone()).collect())
        .collect();

    let mut max_spread: f64 = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            if let (Some(x), Some(y)) = (
                table.values[r][c].value(),
                matrix[row_class[r]][column_class[c]].value(),
            ) {
                max_spread = max_spread.max(x.distance(y));
            }
        }
    }

    let mut incompatible = Vec::new();
    for i in 0..rows {
        for j in (i + 1)..rows {
            if row_class[i] != row_class[j] {
                continue;
            }
            if let (Some(a), Some(b)) = (&table.preparations[i].set, &table.preparations[j].set) {
                if a.is_disjoint(b) {
                    incompatible.push((table.preparations[i].label.clone(), table.preparations[j].label.clone()));
                }
            }
        }
    }

    Quotient {
        ensembles,
        effects,
        matrix,
        row_class,
        column_class,
        max_spread,
        incompatible,
    }
}

fn classify(n: usize, eq: impl Fn(usize, usize) -> bool) -> (Vec<usize>, Vec<usize>) {
    let mut class = Vec::with_capacity(n);
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        match reps.iter().position(|&r| eq(r, i)) {
            Some(k) => class.push(k),
            None => {
                class.push(reps.len());
                reps.push(i);
            }
        }
    }
    (class, reps)
}

/// Properties of `μ(w, f)`: range, row and column separation, and presence
/// of the zero and unit effects (reported `Absent` when no effect process
/// realizes them).
pub fn mu_properties_check(q: &Quotient, tol: &Tolerances) -> Vec<AxiomReport> {
    let mut range = Vec::new();
    for (w, row) in q.matrix.iter().enumerate() {
        for (f, entry) in row.iter().enumerate() {
            if let Some(v) = entry.value() {
                if !v.in_unit_interval() {
                    range.push(Witness::new([format!("w{w}"), format!("f{f}")]));
                }
            }
        }
    }
    let cols = q.effects.len();
    let rows = q.ensembles.len();
    let mut row_sep = Vec::new();
    for i in 0..rows {
        for j in (i + 1)..rows {
            if (0..cols).all(|f| q.matrix[i][f].matches(&q.matrix[j][f], tol.class_eq, tol)) {
                row_sep.push(Witness::new([format!("w{i}"), format!("w{j}")]));
            }
        }
    }
    let mut col_sep = Vec::new();
    for i in 0..cols {
        for j in (i + 1)..cols {
            if (0..rows).all(|w| q.matrix[w][i].matches(&q.matrix[w][j], tol.class_eq, tol)) {
                col_sep.push(Witness::new([format!("f{i}"), format!("f{j}")]));
            }
        }
    }

    let constant_columns = |target: &Prob| -> Vec<usize> {
        (0..cols)
            .filter(|&f| {
                rows > 0
                    && (0..rows).all(|w| {
                        matches!(&q.matrix[w][f], TableEntry::Value { value, stderr }
                            if value.close(target, tol.allowed(tol.class_eq, &[*stderr])))
                    })
            })
            .collect()
    };
    let special = |axiom: Axiom, found: Vec<usize>| -> AxiomReport {
        match found.len() {
            0 => AxiomReport {
                axiom,
                status: Status::Absent,
                witnesses: Vec::new(),
                max_residual: None,
                note: Some("not realized by any effect process".into()),
            },
            1 => AxiomReport::from_witnesses(axiom, Vec::new()).with_note(format!("f{}", found[0])),
            _ => AxiomReport::from_witnesses(axiom, vec![Witness::new(found.iter().map(|f| format!("f{f}")))]),
        }
    };

    vec![
        AxiomReport::from_witnesses(Axiom::MuRange, range),
        AxiomReport::from_witnesses(Axiom::RowSeparation, row_sep),
        AxiomReport::from_witnesses(Axiom::ColumnSeparation, col_sep),
        special(Axiom::ZeroEffect, constant_columns(&Prob::zero())),
        special(Axiom::UnitEffect, constant_columns(&Prob::one())),
    ]
}

/// Verifies that the ensemble of `whole` is the `λ_Q(whole, part)`-weighted
/// combination of the ensembles of its parts, effect by effect.
pub fn mixture_transfer_check<S: AsRef<str>>(
    exp: &Experiment,
    whole: &str,
    parts: &[S],
    tol: &Tolerances,
) -> Result<AxiomReport, ModelError> {
    let lambda_q = exp.preparations();
    let q = lambda_q.base();
    let a = q.require(whole)?.set.clone();
    let sets = parts
        .iter()
        .map(|p| q.require(p.as_ref()).map(|s| s.set.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    check_partition(q, &a, whole, &sets, parts)?;
    if sets.iter().any(Subset::is_empty) {
        return Err(ModelError::Precondition("decomposition parts must be nonempty".into()));
    }

    let mut weights = Vec::with_capacity(parts.len());
    for (p, set) in parts.iter().zip(&sets) {
        let w = lambda_q
            .lookup(&a, set)
            .usable()
            .ok_or_else(|| ModelError::Incomplete {
                given: whole.into(),
                select: p.as_ref().into(),
            })?;
        weights.push(w);
    }

    let table = trigger_table(exp)?;
    let quotient = quotient(&table, tol);
    let class_row = |label: &str| -> &Vec<TableEntry> {
        let r = table.row_of(label).expect("preparation has a row");
        &quotient.matrix[quotient.row_class[r]]
    };
    let whole_row = class_row(whole);
    let part_rows: Vec<&Vec<TableEntry>> = parts.iter().map(|p| class_row(p.as_ref())).collect();

    let mut residuals = Residuals::default();
    for (f, effect) in quotient.effects.iter().enumerate() {
        let Some((target, se_target)) = usable_entry(&whole_row[f]) else {
            continue;
        };
        let mut combo = Prob::zero();
        let mut se2 = se_target * se_target;
        let mut defined = true;
        for ((w, se_w), row) in weights.iter().zip(&part_rows) {
            match usable_entry(&row[f]) {
                Some((mu, se_mu)) => {
                    combo = &combo + &(w * &mu);
                    se2 += (w.to_f64() * se_mu).powi(2) + (mu.to_f64() * se_w).powi(2);
                }
                None => defined = false,
            }
        }
        if !defined {
            continue;
        }
        residuals.check(&target, &combo, tol.allowed(tol.axiom, &[se2.sqrt()]), || {
            Witness::new([whole.to_string(), effect.members[0].to_string()])
        });
    }
    Ok(residuals.into_report(Axiom::MixtureTransfer))
}

fn usable_entry(entry: &TableEntry) -> Option<(Prob, f64)> {
    match entry {
        TableEntry::Value { value, stderr } => Some((value.clone(), *stderr)),
        TableEntry::Undefined => None,
    }
}
