//! The two bipartite/tripartite thought experiments as runnable engines,
//! plus the one-parameter family of inertial boosts.
//!
//! Conditional states after a left-party measurement use the projective
//! update `(P ⊗ I) ρ (P ⊗ I) / p` followed by a partial trace. It is used here
//! purely as the calculational rule for conditional probabilities.

mod boost;
mod ghz;
mod mach_zehnder;

pub use boost::{boost_matrix, composed_speed, general_boost, BoostEvent, Eta};
pub use ghz::{
    ghz_conditional_table, ghz_event_probabilities, ghz_joint_products, ghz_state, lhv_search,
    run_ghz, xxx_distribution, ChainConditional, GhzReport, LhvAssignment, LhvSearch, GHZ_EVENTS,
};
pub use mach_zehnder::{
    fringe_visibility, mz_port_distribution, run_mach_zehnder, uniform_phase_grid, Conditioning,
    LeftAxis, MachZehnderConfig, MachZehnderReport,
};

use crate::born::{born_probability, measure_distribution, Observable};
use crate::error::{QfError, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::state::DensityOperator;

/// Projector onto `(|z+ z−⟩ − |z− z+⟩)/√2`.
pub fn singlet_state() -> DensityOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = ComplexVector::from_real(&[0.0, h, -h, 0.0]).unwrap();
    DensityOperator::from_vector(&v).unwrap()
}

fn split_dims(rho: &DensityOperator, left_dim: usize) -> Result<usize> {
    if left_dim == 0 || rho.dim() % left_dim != 0 {
        return Err(QfError::DimensionMismatch {
            expected: rho.dim(),
            found: left_dim,
        });
    }
    Ok(rho.dim() / left_dim)
}

/// Unnormalized right-party operator `tr_L[(P ⊗ I) ρ (P ⊗ I)]`.
fn right_branch(rho: &DensityOperator, left_projector: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dl = left_projector.dim();
    let dr = split_dims(rho, dl)?;
    let lifted = left_projector.kron(&ComplexMatrix::identity(dr));
    rho.matrix()
        .conjugate_by(&lifted)?
        .partial_trace(&[dl, dr], &[1])
}

/// Probability of the left outcome and the right party's state given it.
pub fn conditional_right_state(
    rho: &DensityOperator,
    left_projector: &ComplexMatrix,
) -> Result<(f64, DensityOperator)> {
    let dl = left_projector.dim();
    let dr = split_dims(rho, dl)?;
    let lifted = left_projector.kron(&ComplexMatrix::identity(dr));
    let p = born_probability(rho, &lifted)?;
    if p < NULL_EVENT {
        return Err(QfError::NullConditioningEvent { probability: p });
    }
    let branch = right_branch(rho, left_projector)?;
    Ok((p, DensityOperator::new(branch.scale_real(1.0 / p))?))
}

/// Right party's state after the left party measures `left` and the outcome
/// is not recorded.
pub fn outcome_averaged_right_state(
    rho: &DensityOperator,
    left: &Observable,
) -> Result<DensityOperator> {
    let dr = split_dims(rho, left.dim())?;
    let mut acc = ComplexMatrix::zeros(dr);
    for pair in left.spectrum() {
        acc = acc.add(&right_branch(rho, &pair.projector)?)?;
    }
    DensityOperator::new(acc)
}

/// Conditioning events with probability below this are rejected.
pub const NULL_EVENT: f64 = 1e-12;

/// Largest total-variation distance between the right party's marginal
/// distributions of `right` across the left party's measurement choices.
///
/// Zero means the left choice is invisible on the right.
pub fn no_signaling_check(
    rho: &DensityOperator,
    left_observables: &[Observable],
    right_observable: &Observable,
) -> Result<f64> {
    let Some(first) = left_observables.first() else {
        return Err(QfError::InvalidConfig("no left observables".into()));
    };
    let dl = first.dim();
    if let Some(bad) = left_observables.iter().find(|o| o.dim() != dl) {
        return Err(QfError::DimensionMismatch {
            expected: dl,
            found: bad.dim(),
        });
    }
    if dl * right_observable.dim() != rho.dim() {
        return Err(QfError::DimensionMismatch {
            expected: rho.dim(),
            found: dl * right_observable.dim(),
        });
    }
    let marginals = left_observables
        .iter()
        .map(|left| {
            let state = outcome_averaged_right_state(rho, left)?;
            measure_distribution(&state, right_observable)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, a) in marginals.iter().enumerate() {
        for b in &marginals[i + 1..] {
            let tv = 0.5
                * a.outcomes
                    .iter()
                    .zip(&b.outcomes)
                    .map(|((_, p), (_, q))| (p - q).abs())
                    .sum::<f64>();
            worst = worst.max(tv);
        }
    }
    Ok(worst)
}
