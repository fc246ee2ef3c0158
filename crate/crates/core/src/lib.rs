//! Operational quantum statistics.
//!
//! The crate has two halves joined by a sampling bridge:
//!
//! * [`setmodel`] and [`statmodel`] implement finite selection-procedure
//!   structures, the statistical axioms on conditional-probability tables,
//!   the preparation/registration experiment axioms and the quotient to
//!   ensembles and effects.
//! * [`hilbert`], [`operational`] and [`macrostates`] implement density
//!   operators, effects, POVMs, instruments, complete positivity, unitary and
//!   Lindblad dynamics, truncated Fock spaces and Gibbs-form reference states.
//!
//! [`statmodel::empirical`] turns sampled quantum runs back into an
//! [`statmodel::Experiment`] so that the axioms can be checked on data.

pub mod error;
pub mod hilbert;
pub mod macrostates;
pub mod operational;
pub mod prob;
pub mod report;
pub mod setmodel;
pub mod statmodel;
pub mod tolerance;

pub use error::{ModelError, QuantumError};
pub use hilbert::{CMatrix, DensityOperator, EffectOperator, SpectralDecomposition};
pub use prob::Prob;
pub use report::{Axiom, AxiomReport, Status, Witness};
pub use setmodel::{FiniteModel, Subset};
pub use statmodel::{ConditionalProbability, Experiment, TableEntry, TriggerTable};
pub use tolerance::Tolerances;
