//! Exact small-width quantum simulation: statevectors, Haar brickwork
//! ensembles, and density matrices under local depolarizing noise.

pub mod circuit;
pub mod density;
pub mod haar;
pub mod statevector;

pub use circuit::{unitarity_defect, Circuit, CliffordGate, Gate, C64};
pub use density::{
    noisy_output_distribution, noisy_state, von_neumann_entropy, DensityMatrix, NoiseKind, NoiseSpec,
    MAX_DENSITY_WIDTH,
};
pub use haar::{
    brickwork_ensemble, ensemble_member, haar_moment_diagnostic, haar_unitary, moment_diagnostic_of,
    random_brickwork, MomentDiagnostic,
};
pub use statevector::{output_distribution, run_statevector, StateVector};
