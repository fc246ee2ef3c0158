use std::collections::{HashSet, VecDeque};

use crate::error::ModelError;
use crate::prob::Prob;
use crate::report::{Axiom, AxiomReport, Witness};
use crate::setmodel::{check_selection_axioms, FiniteModel, Subset, MAX_FAMILY};
use crate::tolerance::Tolerances;

use super::conditional::{check_statistical_axioms, ConditionalProbability, Lookup, Residuals};

/// Closes a seed family under nonempty intersections and nonempty relative
/// complements of nested pairs. Empty sets are never added. Generated
/// members are labelled `[x]&[y]` and `[y]\[x]`.
pub fn close_family(elements: Vec<String>, seed: Vec<(String, Subset)>, cap: usize) -> Result<FiniteModel, ModelError> {
    let mut members: Vec<(String, Subset)> = Vec::new();
    let mut seen: HashSet<Subset> = HashSet::new();
    let mut queue = VecDeque::new();
    for (label, set) in seed {
        if !set.is_empty() && seen.insert(set.clone()) {
            members.push((label, set));
            queue.push_back(members.len() - 1);
        }
    }
    let mut labels: HashSet<String> = members.iter().map(|(l, _)| l.clone()).collect();
    while let Some(i) = queue.pop_front() {
        // pair the new member with every member known so far
        let mut found = Vec::new();
        {
            let (li, si) = &members[i];
            for (j, (lj, sj)) in members.iter().enumerate() {
                if i == j {
                    continue;
                }
                let meet = si.intersection(sj);
                if !meet.is_empty() && !seen.contains(&meet) {
                    found.push((format!("[{li}]&[{lj}]"), meet));
                }
                if si.is_subset(sj) {
                    found.push((format!("[{lj}]\\[{li}]"), sj.difference(si)));
                }
                if sj.is_subset(si) {
                    found.push((format!("[{li}]\\[{lj}]"), si.difference(sj)));
                }
            }
        }
        for (mut label, set) in found {
            if set.is_empty() || seen.contains(&set) {
                continue;
            }
            if members.len() >= cap {
                return Err(ModelError::FamilyTooLarge(cap));
            }
            while labels.contains(&label) {
                label.push('\'');
            }
            labels.insert(label.clone());
            seen.insert(set.clone());
            members.push((label, set));
            queue.push_back(members.len() - 1);
        }
    }
    FiniteModel::from_subsets(elements, members)
}

/// The smallest selection procedure containing every nonempty `a ∩ b` with
/// `a ∈ Q`, `b ∈ R`. Seed members are labelled `a&b`.
pub fn combined_family(q: &FiniteModel, r: &FiniteModel) -> Result<FiniteModel, ModelError> {
    if q.elements() != r.elements() {
        return Err(ModelError::GroundSetMismatch);
    }
    let mut seed = Vec::new();
    for a in q.family() {
        for b in r.family() {
            seed.push((format!("{}&{}", a.label, b.label), a.set.intersection(&b.set)));
        }
    }
    close_family(q.elements().to_vec(), seed, MAX_FAMILY)
}

/// Preparation procedures `Q`, registration procedures `R`, registration
/// methods `R0` and the combined family `S`, each with its statistics.
///
/// There is deliberately no table on `R`: outcome-conditioned registration
/// selections carry no reproducible frequencies on their own.
#[derive(Clone, Debug)]
pub struct Experiment {
    preparations: ConditionalProbability,
    registrations: FiniteModel,
    methods: ConditionalProbability,
    combined: ConditionalProbability,
}

impl Experiment {
    /// `combined` must be defined on [`combined_family`] of `Q` and `R`
    /// (same extensions; labels may differ).
    pub fn new(
        preparations: ConditionalProbability,
        registrations: FiniteModel,
        methods: ConditionalProbability,
        combined: ConditionalProbability,
    ) -> Result<Self, ModelError> {
        let ground = preparations.base().elements();
        if registrations.elements() != ground
            || methods.base().elements() != ground
            || combined.base().elements() != ground
        {
            return Err(ModelError::GroundSetMismatch);
        }
        let expected = combined_family(preparations.base(), &registrations)?;
        let got = combined.base();
        if expected.len() != got.len() || expected.family().iter().any(|s| got.index_of(&s.set).is_none()) {
            return Err(ModelError::Precondition(
                "combined table is not defined on the family generated by Q and R".into(),
            ));
        }
        Ok(Self {
            preparations,
            registrations,
            methods,
            combined,
        })
    }

    /// All three tables from one additive measure on the ground set.
    pub fn from_measure(q: FiniteModel, r: FiniteModel, r0: FiniteModel, weights: &[Prob]) -> Result<Self, ModelError> {
        let s = combined_family(&q, &r)?;
        Self::new(
            ConditionalProbability::from_measure(q, weights)?,
            r,
            ConditionalProbability::from_measure(r0, weights)?,
            ConditionalProbability::from_measure(s, weights)?,
        )
    }

    pub fn preparations(&self) -> &ConditionalProbability {
        &self.preparations
    }

    pub fn registrations(&self) -> &FiniteModel {
        &self.registrations
    }

    pub fn methods(&self) -> &ConditionalProbability {
        &self.methods
    }

    pub fn combined(&self) -> &ConditionalProbability {
        &self.combined
    }

    pub fn preparations_mut(&mut self) -> &mut ConditionalProbability {
        &mut self.preparations
    }

    pub fn methods_mut(&mut self) -> &mut ConditionalProbability {
        &mut self.methods
    }

    pub fn combined_mut(&mut self) -> &mut ConditionalProbability {
        &mut self.combined
    }

    /// Label in `S` of `a ∩ b` for `a` in `Q` and `b` in `R`. Generated
    /// labels depend on closure order, so look sets up by extension.
    pub fn intersection_label(&self, a: &str, b: &str) -> Result<&str, ModelError> {
        let set = self
            .preparations
            .base()
            .require(a)?
            .set
            .intersection(&self.registrations.require(b)?.set);
        let s = self.combined.base();
        s.index_of(&set)
            .map(|i| s.label(i))
            .ok_or_else(|| ModelError::NotFound(format!("{a}&{b}")))
    }
}

/// Checks A 1 through A 6.2, one report each, in order.
///
/// A 1, A 3 and A 5 aggregate the selection and statistical axioms of `Q`,
/// `R0` and `S`; their witnesses carry the underlying axiom.
pub fn check_experiment_axioms(exp: &Experiment, tol: &Tolerances) -> Result<Vec<AxiomReport>, ModelError> {
    let q = exp.preparations.base();
    let r = &exp.registrations;
    let r0 = exp.methods.base();

    let statistical = |lambda: &ConditionalProbability| -> Result<Vec<AxiomReport>, ModelError> {
        let mut reports = check_selection_axioms(lambda.base());
        reports.extend(check_statistical_axioms(lambda, tol)?);
        Ok(reports)
    };

    let a1 = AxiomReport::aggregate(Axiom::A1, &statistical(&exp.preparations)?);
    let a2 = AxiomReport::aggregate(Axiom::A2, &check_selection_axioms(r));
    let a3 = AxiomReport::aggregate(Axiom::A3, &statistical(&exp.methods)?);

    let mut a41 = Vec::new();
    let mut a42 = Vec::new();
    let mut a43 = Vec::new();
    for b0 in r0.family() {
        if r.index_of(&b0.set).is_none() {
            a41.push(Witness::new([&b0.label]));
        }
    }
    for b in r.family() {
        if r0.index_of(&b.set).is_none() {
            // an empty method would force every registration into R0
            for b0 in r0.family().iter().filter(|b0| !b0.set.is_empty()) {
                if b0.set.is_subset(&b.set) {
                    a42.push(Witness::new([&b.label, &b0.label]));
                }
            }
        }
        if !r0.family().iter().any(|b0| b.set.is_subset(&b0.set)) {
            a43.push(Witness::new([&b.label]));
        }
    }

    let a5 = AxiomReport::aggregate(Axiom::A5, &statistical(&exp.combined)?);

    let mut a61 = Residuals::default();
    let mut a62 = Residuals::default();
    for a in q.family() {
        for b0 in r0.family() {
            let c = a.set.intersection(&b0.set);
            // a method outside R has no row in S; A 4.1 already reports it
            if c.is_empty() || !exp.combined.base().admits(&c) {
                continue;
            }
            for a_fine in q.family().iter().filter(|x| x.set.is_subset(&a.set)) {
                let Some((expected, se_q)) = usable(&exp.preparations, &a.set, &a_fine.set, &a.label, &a_fine.label)?
                else {
                    continue;
                };
                let c_fine = a_fine.set.intersection(&b0.set);
                if !exp.combined.base().admits(&c_fine) {
                    continue;
                }
                let Some((got, se_s)) = usable_combined(exp, &c, &c_fine)? else {
                    continue;
                };
                a61.check(&got, &expected, tol.allowed(tol.axiom, &[se_q, se_s]), || {
                    Witness::new([&a.label, &a_fine.label, &b0.label])
                });
            }
            for b0_fine in r0.family().iter().filter(|x| x.set.is_subset(&b0.set)) {
                let Some((expected, se_r)) = usable(&exp.methods, &b0.set, &b0_fine.set, &b0.label, &b0_fine.label)?
                else {
                    continue;
                };
                let c_fine = a.set.intersection(&b0_fine.set);
                if !exp.combined.base().admits(&c_fine) {
                    continue;
                }
                let Some((got, se_s)) = usable_combined(exp, &c, &c_fine)? else {
                    continue;
                };
                a62.check(&got, &expected, tol.allowed(tol.axiom, &[se_r, se_s]), || {
                    Witness::new([&a.label, &b0.label, &b0_fine.label])
                });
            }
        }
    }

    Ok(vec![
        a1,
        a2,
        a3,
        AxiomReport::from_witnesses(Axiom::A4_1, a41),
        AxiomReport::from_witnesses(Axiom::A4_2, a42),
        AxiomReport::from_witnesses(Axiom::A4_3, a43),
        a5,
        a61.into_report(Axiom::A6_1),
        a62.into_report(Axiom::A6_2),
    ])
}

fn usable(
    lambda: &ConditionalProbability,
    a: &Subset,
    b: &Subset,
    la: &str,
    lb: &str,
) -> Result<Option<(Prob, f64)>, ModelError> {
    match lambda.lookup(a, b) {
        Lookup::Missing => Err(ModelError::Incomplete {
            given: la.into(),
            select: lb.into(),
        }),
        other => Ok(other.usable()),
    }
}

pub(crate) fn usable_combined(
    exp: &Experiment,
    c: &Subset,
    c_fine: &Subset,
) -> Result<Option<(Prob, f64)>, ModelError> {
    let s = exp.combined.base();
    match exp.combined.lookup(c, c_fine) {
        Lookup::Missing | Lookup::OutsideDomain => Err(ModelError::Incomplete {
            given: s.describe(c),
            select: s.describe(c_fine),
        }),
        other => Ok(other.usable()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{find, Status};
    use crate::statmodel::fixtures::{singlet, singlet_with, ELEMENTS};
    use crate::statmodel::TableEntry;

    fn status(reports: &[AxiomReport], axiom: Axiom) -> Status {
        find(reports, axiom).unwrap().status
    }

    #[test]
    fn singlet_satisfies_every_axiom() {
        let reports = check_experiment_axioms(&singlet(), &Tolerances::default()).unwrap();
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn combined_family_is_closed() {
        let exp = singlet();
        let s = exp.combined().base();
        assert!(check_selection_axioms(s).iter().all(AxiomReport::passed));
        // a3+ ∩ Z is the single element +|Z|down
        let c = s.require(exp.intersection_label("a3+", "Z").unwrap()).unwrap();
        assert_eq!(s.element_names(&c.set), vec![ELEMENTS[0]]);
    }

    #[test]
    fn method_choice_depending_on_preparation_breaks_a61() {
        // partner + picks Z three times as often as partner -
        let w: Vec<Prob> = [(3, 8), (1, 16), (1, 16), (1, 8), (3, 16), (3, 16)]
            .iter()
            .map(|&(n, d)| Prob::ratio(n, d))
            .collect();
        let reports = check_experiment_axioms(&singlet_with(&w), &Tolerances::default()).unwrap();
        let a61 = find(&reports, Axiom::A6_1).unwrap();
        assert_eq!(a61.status, Status::Fail);
        assert!(a61.witnesses.contains(&Witness::new(["a3", "a3+", "Z"])));
        assert_eq!(status(&reports, Axiom::A5), Status::Pass);
        assert_eq!(status(&reports, Axiom::A6_2), Status::Pass);
    }

    #[test]
    fn method_missing_from_registrations_breaks_a41() {
        let exp = singlet();
        let r = exp.registrations().restrict(|s| s.label != "X");
        let s = combined_family(exp.preparations().base(), &r).unwrap();
        let weights = crate::statmodel::fixtures::singlet_weights();
        let planted = Experiment::new(
            exp.preparations().clone(),
            r,
            exp.methods().clone(),
            ConditionalProbability::from_measure(s, &weights).unwrap(),
        )
        .unwrap();
        let reports = check_experiment_axioms(&planted, &Tolerances::default()).unwrap();
        assert_eq!(
            find(&reports, Axiom::A4_1).unwrap().witnesses,
            vec![Witness::new(["X"])]
        );
    }

    #[test]
    fn mismatched_combined_family_is_rejected() {
        let exp = singlet();
        let wrong = exp.preparations().clone();
        assert!(Experiment::new(
            exp.preparations().clone(),
            exp.registrations().clone(),
            exp.methods().clone(),
            wrong
        )
        .is_err());
    }

    #[test]
    fn overridden_combined_entry_is_reported() {
        let mut exp = singlet();
        let given = exp.intersection_label("a3", "Z").unwrap().to_string();
        let select = exp.intersection_label("a3+", "Z").unwrap().to_string();
        exp.combined_mut()
            .set(&given, &select, TableEntry::exact(Prob::ratio(3, 4)))
            .unwrap();
        let reports = check_experiment_axioms(&exp, &Tolerances::default()).unwrap();
        assert_eq!(status(&reports, Axiom::A6_1), Status::Fail);
        assert_eq!(status(&reports, Axiom::A5), Status::Fail);
    }
}
