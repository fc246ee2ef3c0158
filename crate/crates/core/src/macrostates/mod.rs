//! Truncated second quantization: Fock spaces, Gibbs-form macrostates,
//! entropy, multi-type states and Liouville-von Neumann evolution.

pub mod entropy;
pub mod fock;
pub mod gibbs;
pub mod liouville;

pub use entropy::{entropy, multitype_mu, type_registration, MultiTypeState};
pub use fock::{additive_observable, fock_build, FockSpace, ModeOperators};
pub use gibbs::{
    fit_fields, gibbs_form, grand_canonical, reference_state, trace_distance, FieldFit, GrandCanonical,
    ReferenceMacrostate,
};
pub use liouville::{hopping, liouville_evolve, write_liouville_csv, LiouvillePoint};
