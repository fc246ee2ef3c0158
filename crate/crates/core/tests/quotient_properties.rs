use opqm_core::report::{find, Axiom};
use opqm_core::statmodel::{
    check_experiment_axioms, combined_family, mixture_transfer_check, quotient, trigger_table, EffectProcess,
    PreparationRow, TriggerTable,
};
use opqm_core::{Experiment, FiniteModel, Prob, Subset, TableEntry, Tolerances};
use proptest::prelude::*;

/// A trigger table with entries drawn from a five-value grid so that
/// coincident rows and columns are common.
fn tables() -> impl Strategy<Value = TriggerTable> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(0i64..=4, cols), rows).prop_map(move |grid| TriggerTable {
            preparations: (0..rows)
                .map(|r| PreparationRow {
                    label: format!("a{r}"),
                    set: None,
                })
                .collect(),
            processes: (0..cols)
                .map(|c| EffectProcess {
                    method: "m".into(),
                    response: format!("b{c}"),
                })
                .collect(),
            values: grid
                .iter()
                .map(|row| row.iter().map(|&k| TableEntry::exact(Prob::ratio(k, 4))).collect())
                .collect(),
        })
    })
}

/// Class ids by first occurrence under exact equality.
fn brute_force<T: PartialEq>(items: &[T]) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match reps.iter().position(|&r| items[r] == *x) {
            Some(k) => k,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        })
        .collect()
}

fn columns(t: &TriggerTable) -> Vec<Vec<TableEntry>> {
    (0..t.processes.len())
        .map(|c| t.values.iter().map(|row| row[c].clone()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn classes_match_pairwise_comparison(t in tables()) {
        let q = quotient(&t, &Tolerances::default());
        prop_assert_eq!(&q.row_class, &brute_force(&t.values));
        prop_assert_eq!(&q.column_class, &brute_force(&columns(&t)));
        prop_assert_eq!(q.max_spread, 0.0);
    }

    #[test]
    fn quotient_is_idempotent(t in tables()) {
        let tol = Tolerances::default();
        let q = quotient(&t, &tol);
        let qq = quotient(&q.as_table(), &tol);
        prop_assert_eq!(&qq.matrix, &q.matrix);
        prop_assert_eq!(qq.ensembles.len(), q.ensembles.len());
        prop_assert_eq!(qq.effects.len(), q.effects.len());
    }

    #[test]
    fn every_entry_equals_its_class_entry(t in tables()) {
        let q = quotient(&t, &Tolerances::default());
        for (r, row) in t.values.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                prop_assert_eq!(entry, &q.matrix[q.row_class[r]][q.column_class[c]]);
            }
        }
    }
}

/// Sub-preparations x methods x outcomes with product weights
/// `p(prep) v(method) P(outcome | prep, method)`. When `coupled`, the method
/// frequency depends on the preparation.
fn product_experiment(preps: &[i64], methods: &[i64], outcomes: &[Vec<Vec<i64>>], coupled: Option<i64>) -> Experiment {
    let mut elements = Vec::new();
    let mut weights = Vec::new();
    let mut cells = Vec::new();
    let ptotal: i64 = preps.iter().sum();
    let vtotal: i64 = methods.iter().sum();
    for (p, &wp) in preps.iter().enumerate() {
        for (m, &vm) in methods.iter().enumerate() {
            let vm = match coupled {
                Some(extra) if p == 0 && m == 0 => vm + extra,
                _ => vm,
            };
            let vtotal = match coupled {
                Some(extra) if p == 0 => vtotal + extra,
                _ => vtotal,
            };
            let ototal: i64 = outcomes[p][m].iter().sum();
            for (o, &k) in outcomes[p][m].iter().enumerate() {
                elements.push(format!("{p}|{m}|{o}"));
                let w = &(&Prob::ratio(wp, ptotal) * &Prob::ratio(vm, vtotal)) * &Prob::ratio(k, ototal);
                weights.push(w);
                cells.push((p, m, o));
            }
        }
    }
    let n = elements.len();
    let select = |f: &dyn Fn(&(usize, usize, usize)) -> bool| Subset::from_indices(n, (0..n).filter(|&i| f(&cells[i])));
    // every union of sub-preparations; the full one is the source
    let full = (1usize << preps.len()) - 1;
    let q: Vec<(String, Subset)> = (1..=full)
        .map(|mask| {
            let label = if mask == full {
                "source".to_string()
            } else {
                (0..preps.len())
                    .filter(|p| mask >> p & 1 == 1)
                    .map(|p| format!("p{p}"))
                    .collect::<Vec<_>>()
                    .join("+")
            };
            (label, select(&|c| mask >> c.0 & 1 == 1))
        })
        .collect();
    let r0: Vec<(String, Subset)> = (0..methods.len())
        .map(|m| (format!("m{m}"), select(&|c| c.1 == m)))
        .collect();
    let mut r = r0.clone();
    for (m, responses) in outcomes[0].iter().enumerate() {
        for o in 0..responses.len() {
            r.push((format!("m{m}:{o}"), select(&|c| c.1 == m && c.2 == o)));
        }
        // complements of single responses keep R closed
        for o in 0..responses.len() {
            r.push((format!("m{m}:not{o}"), select(&|c| c.1 == m && c.2 != o)));
        }
    }
    let q = FiniteModel::from_subsets_dedup(elements.clone(), q).unwrap();
    let r = opqm_core::statmodel::close_family(elements.clone(), r, 1 << 12).unwrap();
    let r0 = FiniteModel::from_subsets(elements, r0).unwrap();
    combined_family(&q, &r).unwrap();
    Experiment::from_measure(q, r, r0, &weights).unwrap()
}

fn shapes() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<Vec<Vec<i64>>>)> {
    (2usize..=3, 1usize..=2, 2usize..=3).prop_flat_map(|(np, nm, no)| {
        (
            prop::collection::vec(1i64..6, np),
            prop::collection::vec(1i64..6, nm),
            prop::collection::vec(prop::collection::vec(prop::collection::vec(1i64..6, no), nm), np),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_experiments_satisfy_the_axioms_and_transfer_mixtures((p, m, o) in shapes()) {
        let exp = product_experiment(&p, &m, &o, None);
        let tol = Tolerances::default();
        for r in check_experiment_axioms(&exp, &tol).unwrap() {
            prop_assert!(r.passed(), "{}", r);
        }
        let parts: Vec<String> = (0..p.len()).map(|i| format!("p{i}")).collect();
        let transfer = mixture_transfer_check(&exp, "source", &parts, &tol).unwrap();
        prop_assert!(transfer.passed(), "{}", transfer);
        prop_assert_eq!(transfer.max_residual.unwrap_or(0.0), 0.0);
        let table = trigger_table(&exp).unwrap();
        prop_assert!(table.values.iter().flatten().all(|e| e.value().is_none_or(Prob::is_exact)));
    }

    #[test]
    fn preparation_dependent_method_choice_is_caught(
        (p, m, o) in shapes().prop_filter("two methods", |s| s.1.len() == 2),
        extra in 1i64..5,
    ) {
        let exp = product_experiment(&p, &m, &o, Some(extra));
        let reports = check_experiment_axioms(&exp, &Tolerances::default()).unwrap();
        prop_assert!(!find(&reports, Axiom::A6_1).unwrap().passed());
    }
}
