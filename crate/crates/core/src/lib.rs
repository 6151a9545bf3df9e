//! Executable quantum foundations: density operators, the Born rule,
//! linearity and no-signaling tests for evolution maps, and the
//! Mach–Zehnder/EPR and GHZ scenario engines.
//!
//! All operators are small dense complex matrices ([`ComplexMatrix`]).
//! Composite systems use the convention that the leftmost tensor factor is
//! subsystem 0 and carries the slowest index.

pub mod born;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod scenarios;
pub mod standard;
pub mod state;

pub use born::{
    born_probability, compound_probability, gleason_reconstruct, measure_distribution, Observable,
    ProbabilityMeasure, ProjectorFamily,
};
pub use channels::{
    apply, check_linearity, dilate, reduced_dynamics, signaling_test, DynamicsMap, KrausChannel,
    LinearityReport, SignalingReport,
};
pub use error::{QfError, Result};
pub use linalg::{
    eigh, hermitian_eig, kron_all, ComplexMatrix, ComplexVector, EigOptions, SpectralPair, C64,
};
pub use rng::SplitMix64;
pub use state::{
    from_pure, hjw_ensemble, is_pure, mix, purify, DensityOperator, Ensemble, PureState,
};

/// Default numerical tolerances. Functions with a `_with` variant accept
/// overrides.
pub mod tol {
    /// `‖A − A†‖_max` accepted as Hermitian.
    pub const HERMITIAN: f64 = 1e-10;
    /// `|tr ρ − 1|` accepted for a density operator.
    pub const TRACE: f64 = 1e-10;
    /// Most negative eigenvalue accepted for a density operator.
    pub const POSITIVITY: f64 = 1e-10;
    /// `| ‖ψ‖ − 1 |` accepted for a pure state.
    pub const NORM: f64 = 1e-10;
    /// `|Σ q − 1|` accepted for ensemble weights.
    pub const WEIGHT_SUM: f64 = 1e-10;
    /// `‖ρ² − ρ‖_max` below which a state counts as pure.
    pub const IDEMPOTENCE: f64 = 1e-9;
    /// `‖P² − P‖_max` and `‖P − P†‖_max` accepted for a projector.
    pub const PROJECTOR: f64 = 1e-10;
    /// `‖U†U − I‖_max` accepted for a unitary.
    pub const UNITARY: f64 = 1e-9;
    /// `‖Σ K†K − I‖_max` accepted for a Kraus channel.
    pub const KRAUS_COMPLETENESS: f64 = 1e-9;
    /// Eigenvalues closer than this share a spectral projector.
    pub const DEGENERACY: f64 = 1e-8;
    /// Jacobi stopping threshold on the off-diagonal Frobenius norm.
    pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;
    /// Probability slack tolerated outside `[0, 1]` before clamping.
    pub const PROBABILITY: f64 = 1e-10;
}
