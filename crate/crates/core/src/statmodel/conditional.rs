use std::collections::BTreeMap;

use crate::error::ModelError;
use crate::prob::Prob;
use crate::report::{Axiom, AxiomReport, Witness};
use crate::setmodel::{FiniteModel, Subset};
use crate::tolerance::Tolerances;

/// One cell of a conditional-probability table.
#[derive(Clone, Debug, PartialEq)]
pub enum TableEntry {
    /// A probability with its standard error (zero for analytic values).
    Value { value: Prob, stderr: f64 },
    /// No data: an empirical entry whose conditioning set was never observed.
    Undefined,
}

impl TableEntry {
    pub fn exact(value: Prob) -> Self {
        TableEntry::Value { value, stderr: 0.0 }
    }

    pub fn value(&self) -> Option<&Prob> {
        match self {
            TableEntry::Value { value, .. } => Some(value),
            TableEntry::Undefined => None,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            TableEntry::Value { stderr, .. } => *stderr,
            TableEntry::Undefined => 0.0,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.value().map(Prob::to_f64)
    }

    /// Equality used for class membership and axiom equalities.
    pub fn matches(&self, other: &TableEntry, base: f64, tol: &Tolerances) -> bool {
        match (self, other) {
            (TableEntry::Undefined, TableEntry::Undefined) => true,
            (TableEntry::Value { value: x, stderr: sx }, TableEntry::Value { value: y, stderr: sy }) => {
                x.close(y, tol.allowed(base, &[*sx, *sy]))
            }
            _ => false,
        }
    }
}

/// Result of looking a pair up by extension.
#[derive(Clone, Debug, PartialEq)]
pub enum Lookup<'a> {
    Value(&'a Prob, f64),
    /// `λ(a, ∅) = 0` for an empty set absent from the family.
    ImplicitZero,
    Undefined,
    Missing,
    OutsideDomain,
}

impl Lookup<'_> {
    /// Value and standard error if the entry is usable in a check.
    pub fn usable(&self) -> Option<(Prob, f64)> {
        match self {
            Lookup::Value(p, se) => Some(((*p).clone(), *se)),
            Lookup::ImplicitZero => Some((Prob::zero(), 0.0)),
            _ => None,
        }
    }
}

/// A conditional-probability function `λ(a, b)` on the pairs
/// `T = {(a, b) | a, b ∈ S, b ⊆ a, a ≠ ∅}` of a finite model.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalProbability {
    base: FiniteModel,
    table: BTreeMap<(usize, usize), TableEntry>,
}

impl ConditionalProbability {
    /// Builds a table keyed by `(given, select)` labels.
    pub fn new(
        base: FiniteModel,
        entries: impl IntoIterator<Item = ((String, String), TableEntry)>,
    ) -> Result<Self, ModelError> {
        let mut lambda = ConditionalProbability {
            base,
            table: BTreeMap::new(),
        };
        for ((given, select), entry) in entries {
            lambda.set(&given, &select, entry)?;
        }
        Ok(lambda)
    }

    /// `λ(a, b) = m(b) / m(a)` for an additive measure given by element
    /// weights. Fails if a nonempty family member has zero measure.
    pub fn from_measure(base: FiniteModel, weights: &[Prob]) -> Result<Self, ModelError> {
        if weights.len() != base.ground() {
            return Err(ModelError::GroundSetMismatch);
        }
        let measure: Vec<Prob> = base
            .family()
            .iter()
            .map(|s| s.set.indices().map(|i| weights[i].clone()).sum())
            .collect();
        let mut table = BTreeMap::new();
        for (i, a) in base.family().iter().enumerate() {
            if a.set.is_empty() {
                continue;
            }
            if measure[i].is_zero() {
                return Err(ModelError::ZeroMeasure(a.label.clone()));
            }
            for (j, b) in base.family().iter().enumerate() {
                if b.set.is_subset(&a.set) {
                    table.insert((i, j), TableEntry::exact(&measure[j] / &measure[i]));
                }
            }
        }
        let lambda = ConditionalProbability { base, table };
        lambda.validate_values()?;
        Ok(lambda)
    }

    /// Empirical `λ(a, b) = N(b) / N(a)` from per-element counts, with
    /// binomial standard errors. Entries with `N(a) = 0` are undefined.
    pub fn from_counts(base: FiniteModel, counts: &[u64]) -> Result<Self, ModelError> {
        if counts.len() != base.ground() {
            return Err(ModelError::GroundSetMismatch);
        }
        let totals: Vec<u64> = base
            .family()
            .iter()
            .map(|s| s.set.indices().map(|i| counts[i]).sum())
            .collect();
        let mut table = BTreeMap::new();
        for (i, a) in base.family().iter().enumerate() {
            if a.set.is_empty() {
                continue;
            }
            for (j, b) in base.family().iter().enumerate() {
                if !b.set.is_subset(&a.set) {
                    continue;
                }
                let entry = if totals[i] == 0 {
                    TableEntry::Undefined
                } else {
                    let n = totals[i] as f64;
                    let p = totals[j] as f64 / n;
                    TableEntry::Value {
                        value: Prob::Approx(p),
                        stderr: (p * (1.0 - p) / n).sqrt(),
                    }
                };
                table.insert((i, j), entry);
            }
        }
        Ok(ConditionalProbability { base, table })
    }

    fn validate_values(&self) -> Result<(), ModelError> {
        for (&(i, j), entry) in &self.table {
            if let Some(v) = entry.value() {
                if !v.in_unit_interval() {
                    return Err(ModelError::OutOfRange {
                        given: self.base.label(i).into(),
                        select: self.base.label(j).into(),
                        value: v.to_f64(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &FiniteModel {
        &self.base
    }

    /// Sets `λ(given, select)`, checking the pair is in the domain and the
    /// value is in `[0, 1]`.
    pub fn set(&mut self, given: &str, select: &str, entry: TableEntry) -> Result<(), ModelError> {
        let i = self
            .base
            .index_of_label(given)
            .ok_or_else(|| ModelError::NotFound(given.into()))?;
        let j = self
            .base
            .index_of_label(select)
            .ok_or_else(|| ModelError::NotFound(select.into()))?;
        self.set_index(i, j, entry)
    }

    pub fn set_index(&mut self, i: usize, j: usize, entry: TableEntry) -> Result<(), ModelError> {
        let (a, b) = (self.base.set(i), self.base.set(j));
        if a.is_empty() || !b.is_subset(a) {
            return Err(ModelError::OutsideDomain {
                given: self.base.label(i).into(),
                select: self.base.label(j).into(),
            });
        }
        if let Some(v) = entry.value() {
            if !v.in_unit_interval() {
                return Err(ModelError::OutOfRange {
                    given: self.base.label(i).into(),
                    select: self.base.label(j).into(),
                    value: v.to_f64(),
                });
            }
        }
        self.table.insert((i, j), entry);
        Ok(())
    }

    pub fn get(&self, given: usize, select: usize) -> Option<&TableEntry> {
        self.table.get(&(given, select))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &TableEntry)> {
        self.table.iter().map(|(k, v)| (*k, v))
    }

    /// Looks `λ(a, b)` up by extension.
    pub fn lookup(&self, a: &Subset, b: &Subset) -> Lookup<'_> {
        if a.is_empty() || !b.is_subset(a) {
            return Lookup::OutsideDomain;
        }
        let Some(i) = self.base.index_of(a) else {
            return Lookup::OutsideDomain;
        };
        let Some(j) = self.base.index_of(b) else {
            return if b.is_empty() {
                Lookup::ImplicitZero
            } else {
                Lookup::OutsideDomain
            };
        };
        match self.table.get(&(i, j)) {
            Some(TableEntry::Value { value, stderr }) => Lookup::Value(value, *stderr),
            Some(TableEntry::Undefined) => Lookup::Undefined,
            None => Lookup::Missing,
        }
    }

    /// Pairs of the domain without an entry.
    pub fn missing(&self) -> Vec<(usize, usize)> {
        let family = self.base.family();
        let mut out = Vec::new();
        for (i, a) in family.iter().enumerate() {
            if a.set.is_empty() {
                continue;
            }
            for (j, b) in family.iter().enumerate() {
                if b.set.is_subset(&a.set) && !self.table.contains_key(&(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn require_complete(&self) -> Result<(), ModelError> {
        match self.missing().first() {
            Some(&(i, j)) => Err(ModelError::Incomplete {
                given: self.base.label(i).into(),
                select: self.base.label(j).into(),
            }),
            None => Ok(()),
        }
    }

    fn usable(&self, i: usize, j: usize) -> Option<(&Prob, f64)> {
        match self.table.get(&(i, j))? {
            TableEntry::Value { value, stderr } => Some((value, *stderr)),
            TableEntry::Undefined => None,
        }
    }
}

/// Checks S 2.1, S 2.2, S 2.3 and the derived facts `λ(a, a) = 1`,
/// `λ(a, ∅) = 0` and finite additivity, in that order.
///
/// Undefined (empirical, no data) entries are skipped; a missing entry is an
/// incomplete-model error.
pub fn check_statistical_axioms(
    lambda: &ConditionalProbability,
    tol: &Tolerances,
) -> Result<Vec<AxiomReport>, ModelError> {
    lambda.require_complete()?;
    let model = lambda.base();
    let family = model.family();
    let n = family.len();
    let label = |i: usize| family[i].label.as_str();

    let mut s21 = Residuals::default();
    let mut s22 = Residuals::default();
    let mut s23 = Vec::new();
    let mut unit = Residuals::default();
    let mut null = Residuals::default();
    let mut additivity = Residuals::default();

    // below[i]: members contained in member i
    let below: Vec<Vec<usize>> = family
        .iter()
        .map(|a| (0..n).filter(|&j| family[j].set.is_subset(&a.set)).collect())
        .collect();
    let one = Prob::one();
    let zero = Prob::zero();

    for i in 0..n {
        let a = &family[i].set;
        if a.is_empty() {
            continue;
        }
        if let Some((v, se)) = lambda.usable(i, i) {
            unit.check(v, &one, tol.allowed(tol.axiom, &[se]), || Witness::new([label(i)]));
        }
        for (jj, &j) in below[i].iter().enumerate() {
            let b = &family[j].set;
            if b.is_empty() {
                if let Some((v, se)) = lambda.usable(i, j) {
                    null.check(v, &zero, tol.allowed(tol.axiom, &[se]), || {
                        Witness::new([label(i), label(j)])
                    });
                }
                continue;
            }
            let ab = lambda.usable(i, j);
            if let Some((v, _)) = ab {
                if v.is_zero() {
                    s23.push(Witness::new([label(i), label(j)]));
                }
            }
            // chain a ⊇ b ⊇ c
            if let Some((ab, se_ab)) = ab {
                for &k in &below[j] {
                    let (Some((ac, se_ac)), Some((bc, se_bc))) = (lambda.usable(i, k), lambda.usable(j, k)) else {
                        continue;
                    };
                    let product = ab * bc;
                    let se_product = (bc.to_f64() * se_ab).hypot(ab.to_f64() * se_bc);
                    s22.check(ac, &product, tol.allowed(tol.axiom, &[se_ac, se_product]), || {
                        Witness::new([label(i), label(j), label(k)])
                    });
                }
            }
            // disjoint b, c inside a
            for &k in &below[i][jj + 1..] {
                let c = &family[k].set;
                if !b.is_disjoint(c) {
                    continue;
                }
                let union = b.union(c);
                // S 2.1 on the union u = b ∪ c
                if let Some(u) = model.index_of(&union) {
                    if u == i {
                        if let (Some((x, sx)), Some((y, sy))) = (lambda.usable(u, j), lambda.usable(u, k)) {
                            let (first, second) = ordered(label(j), label(k));
                            s21.check(&(x + y), &one, tol.allowed(tol.axiom, &[sx, sy]), || {
                                Witness::new([first, second])
                            });
                        }
                    }
                    if c.is_empty() {
                        continue;
                    }
                    if let (Some((whole, sw)), Some((x, sx)), Some((y, sy))) =
                        (lambda.usable(i, u), lambda.usable(i, j), lambda.usable(i, k))
                    {
                        let (first, second) = ordered(label(j), label(k));
                        additivity.check(whole, &(x + y), tol.allowed(tol.axiom, &[sw, sx, sy]), || {
                            Witness::new([label(i), first, second])
                        });
                    }
                }
            }
        }
    }

    Ok(vec![
        s21.into_report(Axiom::S2_1),
        s22.into_report(Axiom::S2_2),
        AxiomReport::from_witnesses(Axiom::S2_3, s23),
        unit.into_report(Axiom::Unit),
        null.into_report(Axiom::Null),
        additivity.into_report(Axiom::Additivity),
    ])
}

fn ordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Collects witnesses and the largest residual of a family of equalities.
#[derive(Default)]
pub(crate) struct Residuals {
    witnesses: Vec<Witness>,
    max: f64,
    checked: bool,
}

impl Residuals {
    pub(crate) fn check(&mut self, lhs: &Prob, rhs: &Prob, allowed: f64, witness: impl FnOnce() -> Witness) {
        self.checked = true;
        let d = lhs.distance(rhs);
        self.max = self.max.max(d);
        if !lhs.close(rhs, allowed) {
            self.witnesses.push(witness());
        }
    }

    pub(crate) fn into_report(self, axiom: Axiom) -> AxiomReport {
        let report = AxiomReport::from_witnesses(axiom, self.witnesses);
        if self.checked {
            report.with_residual(self.max)
        } else {
            report
        }
    }
}

/// The additive measure `μ(b) = λ(a, b)` on the Boolean ring `S(a)`.
#[derive(Clone, Debug)]
pub struct MeasureOnRing {
    pub unit: String,
    /// `(label, μ)` for each member of `S(a)`, in family order.
    pub measure: Vec<(String, Prob)>,
    /// Verifies `λ(a1, a2) = μ(a2) / μ(a1)` for `a ⊇ a1 ⊇ a2`.
    pub report: AxiomReport,
}

impl MeasureOnRing {
    pub fn get(&self, label: &str) -> Option<&Prob> {
        self.measure.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }
}

pub fn measure_on_ring(
    lambda: &ConditionalProbability,
    unit: &str,
    tol: &Tolerances,
) -> Result<MeasureOnRing, ModelError> {
    let model = lambda.base();
    let a_idx = model
        .index_of_label(unit)
        .ok_or_else(|| ModelError::NotFound(unit.into()))?;
    let a = model.set(a_idx).clone();
    let members: Vec<usize> = (0..model.len()).filter(|&i| model.set(i).is_subset(&a)).collect();

    let mut measure = Vec::with_capacity(members.len());
    let mut by_index = BTreeMap::new();
    for &i in &members {
        match lambda.lookup(&a, model.set(i)) {
            Lookup::Value(p, se) => {
                by_index.insert(i, (p.clone(), se));
                measure.push((model.label(i).to_string(), p.clone()));
            }
            Lookup::Undefined => {}
            _ => {
                return Err(ModelError::Incomplete {
                    given: unit.into(),
                    select: model.label(i).into(),
                })
            }
        }
    }

    let mut ratios = Residuals::default();
    for &i in &members {
        let Some((mu_i, se_i)) = by_index.get(&i) else { continue };
        let a1 = model.set(i);
        if a1.is_empty() {
            continue;
        }
        for &j in &members {
            if j == i || !model.set(j).is_subset(a1) {
                continue;
            }
            let Some((mu_j, se_j)) = by_index.get(&j) else { continue };
            let Some((direct, se_d)) = lambda.usable(i, j) else {
                continue;
            };
            if mu_i.is_zero() {
                return Err(ModelError::ZeroMeasure(model.label(i).into()));
            }
            let ratio = mu_j / mu_i;
            let se_ratio = se_i.hypot(*se_j) / mu_i.to_f64();
            ratios.check(direct, &ratio, tol.allowed(tol.axiom, &[se_d, se_ratio]), || {
                Witness::new([model.label(i), model.label(j)])
            });
        }
    }
    Ok(MeasureOnRing {
        unit: unit.into(),
        measure,
        report: ratios.into_report(Axiom::MeasureRatio),
    })
}

/// Weights `λ(a, b_i)` of a decomposition of `a` into disjoint parts.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub whole: String,
    pub parts: Vec<String>,
    pub weights: Vec<Prob>,
    /// Checks `Σ weights = 1`.
    pub report: AxiomReport,
}

pub fn decomposition_weights<S: AsRef<str>>(
    lambda: &ConditionalProbability,
    whole: &str,
    parts: &[S],
    tol: &Tolerances,
) -> Result<Decomposition, ModelError> {
    let model = lambda.base();
    let a = model.require(whole)?.set.clone();
    let sets = parts
        .iter()
        .map(|p| model.require(p.as_ref()).map(|s| s.set.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    check_partition(model, &a, whole, &sets, parts)?;

    let mut weights = Vec::with_capacity(parts.len());
    let mut stderrs = Vec::with_capacity(parts.len());
    for (p, set) in parts.iter().zip(&sets) {
        let (w, se) = lambda.lookup(&a, set).usable().ok_or_else(|| ModelError::Incomplete {
            given: whole.into(),
            select: p.as_ref().into(),
        })?;
        weights.push(w);
        stderrs.push(se);
    }
    let mut sum = Residuals::default();
    let total: Prob = weights.iter().cloned().sum();
    sum.check(&total, &Prob::one(), tol.allowed(tol.axiom, &stderrs), || {
        Witness::new(std::iter::once(whole).chain(parts.iter().map(AsRef::as_ref)))
    });
    Ok(Decomposition {
        whole: whole.into(),
        parts: parts.iter().map(|p| p.as_ref().to_string()).collect(),
        weights,
        report: sum.into_report(Axiom::Decomposition),
    })
}

/// Parts must be pairwise disjoint and cover `whole` exactly.
pub(crate) fn check_partition<S: AsRef<str>>(
    model: &FiniteModel,
    whole: &Subset,
    whole_label: &str,
    sets: &[Subset],
    labels: &[S],
) -> Result<(), ModelError> {
    if sets.is_empty() {
        return Err(ModelError::Precondition(format!(
            "empty decomposition of `{whole_label}`"
        )));
    }
    let mut covered = Subset::empty(model.ground());
    for (set, label) in sets.iter().zip(labels) {
        if !covered.is_disjoint(set) {
            return Err(ModelError::Precondition(format!(
                "part `{}` overlaps earlier parts of `{whole_label}`",
                label.as_ref()
            )));
        }
        covered = covered.union(set);
    }
    if &covered != whole {
        return Err(ModelError::Precondition(format!("parts do not cover `{whole_label}`")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn power_set(n: usize) -> FiniteModel {
        let elems = (0..n).map(|i| format!("x{i}")).collect();
        let family = (0..1usize << n).map(|mask| {
            (
                format!("s{mask}"),
                Subset::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)),
            )
        });
        FiniteModel::from_subsets(elems, family).unwrap()
    }

    #[test]
    fn measure_table_passes_everything() {
        let weights = [Prob::ratio(1, 2), Prob::ratio(1, 3), Prob::ratio(1, 6)];
        let lambda = ConditionalProbability::from_measure(power_set(3), &weights).unwrap();
        let reports = check_statistical_axioms(&lambda, &Tolerances::default()).unwrap();
        assert_eq!(reports.len(), 6);
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{r}");
        }
        // exact arithmetic: residuals are exactly zero
        assert!(reports.iter().filter_map(|r| r.max_residual).all(|x| x == 0.0));
    }

    #[test]
    fn unit_entries_are_one() {
        let lambda =
            ConditionalProbability::from_measure(power_set(2), &[Prob::ratio(1, 4), Prob::ratio(3, 4)]).unwrap();
        for i in 1..4 {
            assert_eq!(lambda.get(i, i).unwrap().value().unwrap(), &Prob::one());
        }
    }

    #[test]
    fn complementary_probabilities_must_sum_to_one() {
        let model = FiniteModel::new(
            vec!["x".into(), "y".into()],
            [
                ("a".to_string(), vec!["x", "y"]),
                ("b1".to_string(), vec!["x"]),
                ("b2".to_string(), vec!["y"]),
            ],
        )
        .unwrap();
        let mut lambda = ConditionalProbability::from_measure(model, &[Prob::ratio(1, 2), Prob::ratio(1, 2)]).unwrap();
        lambda.set("a", "b1", TableEntry::exact(Prob::ratio(3, 5))).unwrap();
        lambda.set("a", "b2", TableEntry::exact(Prob::ratio(3, 5))).unwrap();
        let reports = check_statistical_axioms(&lambda, &Tolerances::default()).unwrap();
        assert_eq!(reports[0].axiom, Axiom::S2_1);
        assert_eq!(reports[0].status, Status::Fail);
        assert_eq!(reports[0].witnesses, vec![Witness::new(["b1", "b2"])]);
    }

    #[test]
    fn domain_is_enforced() {
        let model = power_set(2);
        let mut lambda = ConditionalProbability::from_measure(model, &[Prob::ratio(1, 2), Prob::ratio(1, 2)]).unwrap();
        // s1 = {x0} does not contain s2 = {x1}
        assert!(matches!(
            lambda.set("s1", "s2", TableEntry::exact(Prob::zero())),
            Err(ModelError::OutsideDomain { .. })
        ));
        // conditioning on the empty set
        assert!(matches!(
            lambda.set("s0", "s0", TableEntry::exact(Prob::zero())),
            Err(ModelError::OutsideDomain { .. })
        ));
        assert!(matches!(
            lambda.set("s3", "s1", TableEntry::exact(Prob::ratio(3, 2))),
            Err(ModelError::OutOfRange { .. })
        ));
    }

    #[test]
    fn incomplete_tables_are_errors() {
        let model = power_set(1);
        let lambda = ConditionalProbability::new(model, []).unwrap();
        assert!(matches!(
            check_statistical_axioms(&lambda, &Tolerances::default()),
            Err(ModelError::Incomplete { .. })
        ));
    }

    #[test]
    fn ratio_identity_on_nested_triple() {
        let weights = [
            Prob::ratio(1, 10),
            Prob::ratio(2, 10),
            Prob::ratio(3, 10),
            Prob::ratio(4, 10),
        ];
        let lambda = ConditionalProbability::from_measure(power_set(4), &weights).unwrap();
        let mu = measure_on_ring(&lambda, "s15", &Tolerances::default()).unwrap();
        assert_eq!(mu.report.status, Status::Pass);
        assert_eq!(mu.get("s15"), Some(&Prob::one()));
        // a1 = {x1,x2,x3} (mask 14), a2 = {x3} (mask 8): λ = 4/9
        assert_eq!(lambda.get(14, 8).unwrap().value().unwrap(), &Prob::ratio(4, 9));
        assert_eq!(mu.get("s8").unwrap() / mu.get("s14").unwrap(), Prob::ratio(4, 9));
    }

    #[test]
    fn counting_measure_splits_evenly() {
        let weights = vec![Prob::ratio(1, 8); 8];
        let lambda = ConditionalProbability::from_measure(power_set(3), &weights[..3]).unwrap();
        // whole set split into itself
        let d = decomposition_weights(&lambda, "s7", &["s7"], &Tolerances::default()).unwrap();
        assert_eq!(d.weights, vec![Prob::one()]);

        let n = 8;
        let elems = (0..n).map(|i| format!("x{i}")).collect();
        let family = vec![
            ("all".to_string(), Subset::full(n)),
            ("q0".to_string(), Subset::from_indices(n, [0, 1])),
            ("q1".to_string(), Subset::from_indices(n, [2, 3])),
            ("q2".to_string(), Subset::from_indices(n, [4, 5])),
            ("q3".to_string(), Subset::from_indices(n, [6, 7])),
        ];
        let model = FiniteModel::from_subsets(elems, family).unwrap();
        let lambda = ConditionalProbability::from_measure(model, &weights).unwrap();
        let d = decomposition_weights(&lambda, "all", &["q0", "q1", "q2", "q3"], &Tolerances::default()).unwrap();
        assert_eq!(d.weights, vec![Prob::ratio(1, 4); 4]);
        assert_eq!(d.report.status, Status::Pass);

        let err = decomposition_weights(&lambda, "all", &["q0", "q1"], &Tolerances::default()).unwrap_err();
        assert!(matches!(err, ModelError::Precondition(_)));
    }

    #[test]
    fn zero_measure_is_rejected() {
        let err = ConditionalProbability::from_measure(power_set(2), &[Prob::zero(), Prob::one()]).unwrap_err();
        assert!(matches!(err, ModelError::ZeroMeasure(_)));
    }

    #[test]
    fn empirical_bernoulli_is_within_five_sigma() {
        let n: u64 = 10_000;
        let heads = 5_030;
        let model = FiniteModel::new(
            vec!["h".into(), "t".into()],
            [("all".to_string(), vec!["h", "t"]), ("h".to_string(), vec!["h"])],
        )
        .unwrap();
        let lambda = ConditionalProbability::from_counts(model, &[heads, n - heads]).unwrap();
        let p = lambda.get(0, 1).unwrap().to_f64().unwrap();
        let bound = 5.0 * (0.25 * n as f64).sqrt() / n as f64;
        assert!((p - 0.5).abs() <= bound);
    }
}
