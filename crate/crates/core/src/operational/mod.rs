//! POVMs, instruments, complete positivity, closed and open dynamics, and
//! sampling of statistical experiments from the Born rule.

pub mod channel;
pub mod dynamics;
pub mod gleason;
pub mod instrument;
pub mod povm;
pub mod sampling;

pub use channel::{choi, choi_min_eigenvalue, is_cp, SuperOperator, TransposeMap};
pub use dynamics::{
    lindblad_evolve, lindblad_evolve_every, unitary_evolve, LindbladModel, Trajectory, TrajectoryPoint,
};
pub use gleason::{frame_fit, gleason_additivity_check, FrameFit, GleasonCheck};
pub use instrument::{
    amplitude_damping, apply_operation, induced_povm, instrument_select, measurement_tree, Branch, Instrument,
    Operation,
};
pub use povm::{born, povm_distribution, Povm};
pub use sampling::{sample_runs, simulate, BornScore, Method, Pipeline, Simulation, SubPreparation};
