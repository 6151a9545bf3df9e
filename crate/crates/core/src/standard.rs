//! Fixed operators and states used throughout: Pauli matrices, the spin
//! eigenstates along z, x and y, and a few two-qubit gates.
//!
//! Spin convention: `|z+⟩ = |0⟩`, `|z−⟩ = |1⟩`, `|x±⟩ = (|z+⟩ ± |z−⟩)/√2`,
//! `|y±⟩ = (|z+⟩ ± i|z−⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{ComplexMatrix, ComplexVector, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[1.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(
        2,
        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    )
    .unwrap()
}

/// Two-qubit swap.
pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| {
        let swapped = (i % 2) * 2 + i / 2;
        if swapped == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Spin measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }

    /// Eigenvector of the axis Pauli with eigenvalue `+1` (`plus`) or `−1`.
    pub fn eigenstate(self, plus: bool) -> ComplexVector {
        let s = if plus { 1.0 } else { -1.0 };
        let h = FRAC_1_SQRT_2;
        let entries = match self {
            Axis::Z if plus => vec![c(1.0, 0.0), c(0.0, 0.0)],
            Axis::Z => vec![c(0.0, 0.0), c(1.0, 0.0)],
            Axis::X => vec![c(h, 0.0), c(s * h, 0.0)],
            Axis::Y => vec![c(h, 0.0), c(0.0, s * h)],
        };
        ComplexVector::new(entries).unwrap()
    }

    pub fn projector(self, plus: bool) -> ComplexMatrix {
        self.eigenstate(plus).outer()
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// `op` acting on qubit `position` of an `n`-qubit register, identity elsewhere.
pub fn embed_qubit_op(op: &ComplexMatrix, position: usize, n_qubits: usize) -> ComplexMatrix {
    assert!(position < n_qubits);
    let id = ComplexMatrix::identity(2);
    (0..n_qubits)
        .map(|k| if k == position { op } else { &id })
        .fold(None::<ComplexMatrix>, |acc, m| match acc {
            None => Some(m.clone()),
            Some(a) => Some(a.kron(m)),
        })
        .unwrap()
}
