//! Fixtures shared by the benchmarks.

use opqm_core::setmodel::FiniteModel;
use opqm_core::statmodel::close_family;
use opqm_core::{Experiment, Prob, Subset};

/// Registration seed of a product experiment: each method, each single
/// response and each response complement. Elements are `p|m|o` cells.
pub fn registration_seed(preps: usize, methods: usize, outcomes: usize) -> (Vec<String>, Vec<(String, Subset)>) {
    let cells: Vec<(usize, usize, usize)> = (0..preps)
        .flat_map(|p| (0..methods).flat_map(move |m| (0..outcomes).map(move |o| (p, m, o))))
        .collect();
    let elements = cells.iter().map(|(p, m, o)| format!("{p}|{m}|{o}")).collect();
    let n = cells.len();
    let select = |f: &dyn Fn(&(usize, usize, usize)) -> bool| Subset::from_indices(n, (0..n).filter(|&i| f(&cells[i])));
    let mut seed = Vec::new();
    for m in 0..methods {
        seed.push((format!("m{m}"), select(&|c| c.1 == m)));
        for o in 0..outcomes {
            seed.push((format!("m{m}:{o}"), select(&|c| c.1 == m && c.2 == o)));
            seed.push((format!("m{m}:not{o}"), select(&|c| c.1 == m && c.2 != o)));
        }
    }
    (elements, seed)
}

/// Uniform product experiment: every union of sub-preparations in `Q`,
/// one method per apparatus in `R0`.
pub fn product_experiment(preps: usize, methods: usize, outcomes: usize) -> Experiment {
    let (elements, seed) = registration_seed(preps, methods, outcomes);
    let n = elements.len();
    let block = methods * outcomes;
    let full = (1usize << preps) - 1;
    let q = (1..=full)
        .map(|mask| {
            let label = if mask == full {
                "source".to_string()
            } else {
                format!("q{mask}")
            };
            (
                label,
                Subset::from_indices(n, (0..n).filter(|i| mask >> (i / block) & 1 == 1)),
            )
        })
        .collect::<Vec<_>>();
    let r0: Vec<(String, Subset)> = seed.iter().filter(|(l, _)| !l.contains(':')).cloned().collect();
    let q = FiniteModel::from_subsets(elements.clone(), q).expect("distinct unions");
    let r = close_family(elements.clone(), seed, 1 << 12).expect("small family");
    let r0 = FiniteModel::from_subsets(elements, r0).expect("distinct methods");
    let weights = vec![Prob::ratio(1, n as i64); n];
    Experiment::from_measure(q, r, r0, &weights).expect("uniform measure")
}
