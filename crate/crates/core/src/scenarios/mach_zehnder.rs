//! Singlet pairs: the left particle meets a Stern–Gerlach magnet along z or
//! x, the right particle enters a Mach–Zehnder interferometer.
//!
//! The first beam splitter maps spin to path, `|z±⟩ → (|upper⟩ ± |lower⟩)/√2`,
//! which also sends `|x+⟩ → |upper⟩` and `|x−⟩ → |lower⟩`. After it the path
//! carries all coherence and the spin factor is dropped. The upper arm picks
//! up a phase `e^{iφ}`, a balanced beam splitter recombines the arms, and the
//! two output ports are read. Sweeping `φ` stands in for sweeping position on
//! a screen.

use std::f64::consts::PI;

use super::{conditional_right_state, outcome_averaged_right_state, singlet_state};
use crate::born::{born_probability, Observable};
use crate::error::{QfError, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::standard::{hadamard, Axis};
use crate::state::DensityOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftAxis {
    Z,
    X,
}

impl LeftAxis {
    pub fn axis(self) -> Axis {
        match self {
            LeftAxis::Z => Axis::Z,
            LeftAxis::X => Axis::X,
        }
    }

    pub fn name(self) -> &'static str {
        self.axis().name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// Left outcome not recorded.
    Marginal,
    OnLeftPlus,
    OnLeftMinus,
}

impl Conditioning {
    pub fn name(self) -> &'static str {
        match self {
            Conditioning::Marginal => "marginal",
            Conditioning::OnLeftPlus => "on_left_plus",
            Conditioning::OnLeftMinus => "on_left_minus",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MachZehnderConfig {
    left_axis: LeftAxis,
    phase_grid: Vec<f64>,
    conditioning: Conditioning,
}

impl MachZehnderConfig {
    /// The grid must be non-empty, strictly increasing and inside `[0, 2π)`.
    pub fn new(
        left_axis: LeftAxis,
        phase_grid: Vec<f64>,
        conditioning: Conditioning,
    ) -> Result<Self> {
        if phase_grid.is_empty() {
            return Err(QfError::InvalidConfig("empty phase grid".into()));
        }
        if phase_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QfError::InvalidConfig(
                "phase grid not strictly increasing".into(),
            ));
        }
        if phase_grid.iter().any(|p| !(0.0..2.0 * PI).contains(p)) {
            return Err(QfError::InvalidConfig("phase outside [0, 2π)".into()));
        }
        Ok(Self {
            left_axis,
            phase_grid,
            conditioning,
        })
    }

    pub fn left_axis(&self) -> LeftAxis {
        self.left_axis
    }

    pub fn phase_grid(&self) -> &[f64] {
        &self.phase_grid
    }

    pub fn conditioning(&self) -> Conditioning {
        self.conditioning
    }
}

/// `2πk/n` for `k = 0..n`.
pub fn uniform_phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[derive(Debug, Clone)]
pub struct MachZehnderReport {
    pub left_axis: LeftAxis,
    pub conditioning: Conditioning,
    /// Spin state of the right particle as it enters the interferometer.
    pub right_state: DensityOperator,
    pub phases: Vec<f64>,
    pub port0: Vec<f64>,
    pub port1: Vec<f64>,
    pub visibility: f64,
}

/// `(max − min)/(max + min)` over the sweep; zero for an all-zero sweep.
pub fn fringe_visibility(port0: &[f64]) -> f64 {
    let max = port0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = port0.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

fn interferometer(phase: f64) -> ComplexMatrix {
    let shift = ComplexMatrix::new(
        2,
        vec![
            C64::from_polar(1.0, phase),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ],
    )
    .unwrap();
    // spin→path transfer and the recombiner are both the Hadamard matrix
    let h = hadamard();
    h.matmul(&shift).unwrap().matmul(&h).unwrap()
}

/// Detection probabilities at the two output ports for a spin state entering
/// the interferometer with relative arm phase `phase`.
pub fn mz_port_distribution(input_spin_state: &DensityOperator, phase: f64) -> Result<(f64, f64)> {
    if input_spin_state.dim() != 2 {
        return Err(QfError::DimensionMismatch {
            expected: 2,
            found: input_spin_state.dim(),
        });
    }
    let out = DensityOperator::new(
        input_spin_state
            .matrix()
            .conjugate_by(&interferometer(phase))?,
    )?;
    let p0 = born_probability(&out, &ComplexVector::basis(2, 0).outer())?;
    let p1 = born_probability(&out, &ComplexVector::basis(2, 1).outer())?;
    Ok((p0, p1))
}

pub fn run_mach_zehnder(config: &MachZehnderConfig) -> Result<MachZehnderReport> {
    let pair = singlet_state();
    let axis = config.left_axis.axis();
    let right_state = match config.conditioning {
        Conditioning::Marginal => {
            outcome_averaged_right_state(&pair, &Observable::new(axis.pauli())?)?
        }
        Conditioning::OnLeftPlus => conditional_right_state(&pair, &axis.projector(true))?.1,
        Conditioning::OnLeftMinus => conditional_right_state(&pair, &axis.projector(false))?.1,
    };
    let (port0, port1): (Vec<f64>, Vec<f64>) = config
        .phase_grid
        .iter()
        .map(|&phi| mz_port_distribution(&right_state, phi))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let visibility = fringe_visibility(&port0);
    Ok(MachZehnderReport {
        left_axis: config.left_axis,
        conditioning: config.conditioning,
        right_state,
        phases: config.phase_grid.clone(),
        port0,
        port1,
        visibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(axis: Axis, plus: bool) -> DensityOperator {
        DensityOperator::from_vector(&axis.eigenstate(plus)).unwrap()
    }

    #[test]
    fn z_plus_gives_full_fringes() {
        for phi in uniform_phase_grid(16) {
            let (p0, p1) = mz_port_distribution(&pure(Axis::Z, true), phi).unwrap();
            assert!((p0 - (phi / 2.0).cos().powi(2)).abs() < 1e-14);
            assert!((p0 + p1 - 1.0).abs() < 1e-14);
            let (q0, _) = mz_port_distribution(&pure(Axis::Z, false), phi).unwrap();
            assert!((q0 - (phi / 2.0).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn single_arm_and_mixed_inputs_are_flat() {
        for phi in uniform_phase_grid(16) {
            for state in [
                pure(Axis::X, true),
                pure(Axis::X, false),
                DensityOperator::maximally_mixed(2),
            ] {
                let (p0, p1) = mz_port_distribution(&state, phi).unwrap();
                assert!((p0 - 0.5).abs() < 1e-14);
                assert!((p1 - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wrong_dimension() {
        assert!(mz_port_distribution(&DensityOperator::maximally_mixed(3), 0.0).is_err());
    }

    #[test]
    fn config_validation() {
        use Conditioning::Marginal;
        assert!(MachZehnderConfig::new(LeftAxis::Z, vec![], Marginal).is_err());
        assert!(MachZehnderConfig::new(LeftAxis::Z, vec![0.5, 0.5], Marginal).is_err());
        assert!(MachZehnderConfig::new(LeftAxis::Z, vec![1.0, 0.5], Marginal).is_err());
        assert!(MachZehnderConfig::new(LeftAxis::Z, vec![-0.1], Marginal).is_err());
        assert!(MachZehnderConfig::new(LeftAxis::Z, vec![2.0 * PI], Marginal).is_err());
        assert!(MachZehnderConfig::new(LeftAxis::Z, uniform_phase_grid(4), Marginal).is_ok());
    }

    #[test]
    fn scenario_visibilities() {
        let grid = uniform_phase_grid(64);
        let run = |axis, cond| {
            run_mach_zehnder(&MachZehnderConfig::new(axis, grid.clone(), cond).unwrap()).unwrap()
        };
        let mz = run(LeftAxis::Z, Conditioning::Marginal);
        let mx = run(LeftAxis::X, Conditioning::Marginal);
        assert!(mz.visibility.abs() < 1e-10);
        assert!(mx.visibility.abs() < 1e-10);
        for (a, b) in mz.port0.iter().zip(&mx.port0) {
            assert!((a - b).abs() < 1e-10);
        }
        let cz = run(LeftAxis::Z, Conditioning::OnLeftPlus);
        assert!((cz.visibility - 1.0).abs() < 1e-9);
        assert!(
            cz.right_state
                .matrix()
                .max_abs_diff(pure(Axis::Z, false).matrix())
                < 1e-12
        );
        let cx = run(LeftAxis::X, Conditioning::OnLeftMinus);
        assert!(cx.visibility.abs() < 1e-10);
    }

    #[test]
    fn visibility_edge_cases() {
        assert_eq!(fringe_visibility(&[0.0, 0.0]), 0.0);
        assert_eq!(fringe_visibility(&[0.5]), 0.0);
        assert!((fringe_visibility(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
    }
}
