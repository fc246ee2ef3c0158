//! Finite selection-procedure structures.
//!
//! A [`FiniteModel`] is a ground set `M` with a family of labelled subsets.
//! Subsets are compared by extension; two labels with the same extension are
//! rejected at construction. The empty set may appear in the family but is
//! never required: whenever an axiom asks for a set that turns out to be
//! empty, the requirement is considered met.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::ModelError;
use crate::report::{Axiom, AxiomReport, Witness};

pub const MAX_ELEMENTS: usize = 1 << 16;
pub const MAX_FAMILY: usize = 1 << 20;

/// A subset of the ground set, as a bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(FixedBitSet);

impl Subset {
    pub fn empty(ground: usize) -> Self {
        Subset(FixedBitSet::with_capacity(ground))
    }

    pub fn full(ground: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(ground);
        bits.insert_range(..);
        Subset(bits)
    }

    pub fn from_indices(ground: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(ground);
        bits.extend(indices);
        Subset(bits)
    }

    /// Size of the ground set this subset lives in.
    pub fn ground(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(index)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        Subset(bits)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        Subset(bits)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut bits = self.0.clone();
        bits.difference_with(&other.0);
        Subset(bits)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// `a` is finer than `b` when `a ⊆ b`.
pub fn is_finer(a: &Subset, b: &Subset) -> bool {
    a.is_subset(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubset {
    pub label: String,
    pub set: Subset,
}

/// A ground set and a family of labelled subsets.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    elements: Vec<String>,
    family: Vec<NamedSubset>,
    by_label: HashMap<String, usize>,
    by_extension: HashMap<Subset, usize>,
}

impl PartialEq for FiniteModel {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.family == other.family
    }
}

impl FiniteModel {
    /// Builds a model from element names and `(label, members)` pairs.
    pub fn new<S: AsRef<str>>(
        elements: Vec<String>,
        family: impl IntoIterator<Item = (String, Vec<S>)>,
    ) -> Result<Self, ModelError> {
        let index = element_index(&elements)?;
        let family = family
            .into_iter()
            .map(|(label, members)| {
                let mut set = Subset::empty(elements.len());
                for m in members {
                    let i = index.get(m.as_ref()).ok_or_else(|| ModelError::UnknownElement {
                        subset: label.clone(),
                        element: m.as_ref().to_string(),
                    })?;
                    set.0.insert(*i);
                }
                Ok((label, set))
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Self::from_subsets(elements, family)
    }

    /// Builds a model from subsets already expressed over element indices.
    pub fn from_subsets(
        elements: Vec<String>,
        family: impl IntoIterator<Item = (String, Subset)>,
    ) -> Result<Self, ModelError> {
        element_index(&elements)?;
        let mut model = FiniteModel {
            elements,
            family: Vec::new(),
            by_label: HashMap::new(),
            by_extension: HashMap::new(),
        };
        for (label, set) in family {
            model.push(label, set)?;
        }
        Ok(model)
    }

    /// Like [`from_subsets`](Self::from_subsets) but silently drops a subset
    /// whose extension is already present. Used for generated families.
    pub fn from_subsets_dedup(
        elements: Vec<String>,
        family: impl IntoIterator<Item = (String, Subset)>,
    ) -> Result<Self, ModelError> {
        let mut model = Self::from_subsets(elements, std::iter::empty())?;
        for (label, set) in family {
            if !model.by_extension.contains_key(&set) {
                model.push(label, set)?;
            }
        }
        Ok(model)
    }

    fn push(&mut self, label: String, set: Subset) -> Result<(), ModelError> {
        if set.ground() != self.elements.len() {
            return Err(ModelError::GroundSetMismatch);
        }
        if self.by_label.contains_key(&label) {
            return Err(ModelError::DuplicateLabel(label));
        }
        if let Some(&first) = self.by_extension.get(&set) {
            return Err(ModelError::DuplicateExtension {
                first: self.family[first].label.clone(),
                second: label,
            });
        }
        if self.family.len() >= MAX_FAMILY {
            return Err(ModelError::FamilyTooLarge(MAX_FAMILY));
        }
        let idx = self.family.len();
        self.by_label.insert(label.clone(), idx);
        self.by_extension.insert(set.clone(), idx);
        self.family.push(NamedSubset { label, set });
        Ok(())
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn ground(&self) -> usize {
        self.elements.len()
    }

    pub fn family(&self) -> &[NamedSubset] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&NamedSubset> {
        self.by_label.get(label).map(|&i| &self.family[i])
    }

    pub fn require(&self, label: &str) -> Result<&NamedSubset, ModelError> {
        self.get(label).ok_or_else(|| ModelError::NotFound(label.to_string()))
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn index_of(&self, set: &Subset) -> Option<usize> {
        self.by_extension.get(set).copied()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.family[index].label
    }

    pub fn set(&self, index: usize) -> &Subset {
        &self.family[index].set
    }

    /// Whether `set` is in the family, counting the empty set as always
    /// present.
    pub fn admits(&self, set: &Subset) -> bool {
        set.is_empty() || self.by_extension.contains_key(set)
    }

    /// Subset of the ground set with the named elements.
    pub fn subset_of<S: AsRef<str>>(&self, members: &[S]) -> Result<Subset, ModelError> {
        let mut set = Subset::empty(self.ground());
        for m in members {
            let i = self
                .elements
                .iter()
                .position(|e| e == m.as_ref())
                .ok_or_else(|| ModelError::UnknownElement {
                    subset: "<literal>".into(),
                    element: m.as_ref().to_string(),
                })?;
            set.0.insert(i);
        }
        Ok(set)
    }

    pub fn element_names(&self, set: &Subset) -> Vec<&str> {
        set.indices().map(|i| self.elements[i].as_str()).collect()
    }

    /// Label for `set` if it is in the family, `∅` for the empty set and a
    /// brace literal otherwise.
    pub fn describe(&self, set: &Subset) -> String {
        if let Some(i) = self.index_of(set) {
            return self.family[i].label.clone();
        }
        if set.is_empty() {
            return "∅".into();
        }
        format!("{{{}}}", self.element_names(set).join(","))
    }

    /// The sub-family of members satisfying `keep`, on the same ground set.
    pub fn restrict(&self, mut keep: impl FnMut(&NamedSubset) -> bool) -> FiniteModel {
        let family = self
            .family
            .iter()
            .filter(|s| keep(s))
            .map(|s| (s.label.clone(), s.set.clone()));
        Self::from_subsets(self.elements.clone(), family).expect("sub-family of a valid model")
    }
}

fn element_index(elements: &[String]) -> Result<HashMap<&str, usize>, ModelError> {
    if elements.len() > MAX_ELEMENTS {
        return Err(ModelError::GroundSetTooLarge(elements.len(), MAX_ELEMENTS));
    }
    let mut index = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(ModelError::DuplicateElement(e.clone()));
        }
    }
    Ok(index)
}

/// Checks S 1.1 (relative complements of nested pairs) and S 1.2
/// (intersections). Returns one report per axiom, S 1.1 first.
///
/// S 1.1 witnesses are `(a, b)` with `a ⊂ b` and `b \ a` missing; pairs with
/// `a = b` are skipped since they would only demand the empty set.
pub fn check_selection_axioms(model: &FiniteModel) -> Vec<AxiomReport> {
    let family = model.family();
    let mut complement = Vec::new();
    let mut intersection = Vec::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if i != j && a.set.is_subset(&b.set) && !model.admits(&b.set.difference(&a.set)) {
                complement.push(Witness::new([&a.label, &b.label]));
            }
            if i < j && !model.admits(&a.set.intersection(&b.set)) {
                let (x, y) = ordered(&a.label, &b.label);
                intersection.push(Witness::new([x, y]));
            }
        }
    }
    vec![
        AxiomReport::from_witnesses(Axiom::S1_1, complement),
        AxiomReport::from_witnesses(Axiom::S1_2, intersection),
    ]
}

fn ordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The family `S(a) = {b ∈ S | b ⊆ a}` together with its closure reports.
#[derive(Clone, Debug)]
pub struct BooleanRing {
    pub unit: String,
    pub ring: FiniteModel,
    /// Closure under intersection, complement relative to the unit, and
    /// union, in that order.
    pub reports: Vec<AxiomReport>,
}

impl BooleanRing {
    pub fn is_closed(&self) -> bool {
        self.reports.iter().all(AxiomReport::passed)
    }
}

/// Extracts `S(a)` and verifies it is closed under the ring operations.
pub fn boolean_ring(model: &FiniteModel, unit: &str) -> Result<BooleanRing, ModelError> {
    let a = model.require(unit)?.set.clone();
    let ring = model.restrict(|s| s.set.is_subset(&a));
    let family = ring.family();
    let mut meet = Vec::new();
    let mut complement = Vec::new();
    let mut join = Vec::new();
    for (i, b) in family.iter().enumerate() {
        if !ring.admits(&a.difference(&b.set)) {
            complement.push(Witness::new([&b.label]));
        }
        for c in &family[i + 1..] {
            let (x, y) = ordered(&b.label, &c.label);
            if !ring.admits(&b.set.intersection(&c.set)) {
                meet.push(Witness::new([x, y]));
            }
            if !ring.admits(&b.set.union(&c.set)) {
                join.push(Witness::new([x, y]));
            }
        }
    }
    Ok(BooleanRing {
        unit: unit.to_string(),
        ring,
        reports: vec![
            AxiomReport::from_witnesses(Axiom::RingIntersection, meet),
            AxiomReport::from_witnesses(Axiom::RingComplement, complement),
            AxiomReport::from_witnesses(Axiom::RingUnion, join),
        ],
    })
}

/// Smallest member of the family containing both `a` and `b`; ties go to the
/// lexicographically first label.
pub fn are_coexistent<'m>(a: &Subset, b: &Subset, model: &'m FiniteModel) -> Option<&'m NamedSubset> {
    let both = a.union(b);
    model
        .family()
        .iter()
        .filter(|c| both.is_subset(&c.set))
        .min_by(|x, y| x.set.count().cmp(&y.set.count()).then_with(|| x.label.cmp(&y.label)))
}
