//! Density operators, pure states and ensembles.
//!
//! States are validated once, at construction; every other function may rely
//! on the invariants holding.

use crate::error::{QfError, Result};
use crate::linalg::{eigh, ComplexMatrix, ComplexVector, C64};
use crate::rng::{random_unit_vector, SplitMix64};
use crate::tol;

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(QfError::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > tol::TRACE {
            return Err(QfError::TraceNotUnit { trace: trace.re });
        }
        let min_eigenvalue = eigh(&matrix)?.values.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol::POSITIVITY {
            return Err(QfError::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// `|v⟩⟨v|` for a unit vector; a non-normalized vector is an error.
    pub fn from_vector(v: &ComplexVector) -> Result<Self> {
        Ok(from_pure(&PureState::new(v.clone())?))
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let m = &self.matrix;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (m.get(i, j) * m.get(j, i)).re;
            }
        }
        s
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Reduced state on the `keep` subsystems of a composite with factor
    /// dimensions `dims`.
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
        DensityOperator::new(self.matrix.partial_trace(dims, keep)?)
    }
}

/// Unit vector in a finite Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: ComplexVector,
}

impl PureState {
    pub fn new(vector: ComplexVector) -> Result<Self> {
        let norm = vector.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(QfError::NotNormalized { norm });
        }
        Ok(Self { vector })
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn from_pure(psi: &PureState) -> DensityOperator {
    DensityOperator {
        matrix: psi.vector.outer(),
    }
}

/// Probability-weighted collection of states sharing one dimension.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, DensityOperator)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(QfError::InvalidEnsemble("no members".into()));
        };
        let dim = first.dim();
        if let Some((_, bad)) = members.iter().find(|(_, s)| s.dim() != dim) {
            return Err(QfError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if let Some((w, _)) = members.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
            return Err(QfError::InvalidEnsemble(format!("invalid weight {w}")));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > tol::WEIGHT_SUM {
            return Err(QfError::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Ensemble of pure states.
    pub fn from_pure_states(members: Vec<(f64, ComplexVector)>) -> Result<Self> {
        let members = members
            .into_iter()
            .map(|(w, v)| Ok((w, DensityOperator::from_vector(&v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    /// Replaces the members at `indices` by their normalized weighted average
    /// carrying their combined weight. The merged member takes the position
    /// of the smallest index.
    pub fn merge_members(&self, indices: &[usize]) -> Result<Ensemble> {
        if indices.is_empty() || indices.iter().any(|&i| i >= self.members.len()) {
            return Err(QfError::InvalidEnsemble("invalid member indices".into()));
        }
        let weight: f64 = indices.iter().map(|&i| self.members[i].0).sum();
        if weight <= 0.0 {
            return Err(QfError::InvalidEnsemble("merged weight is zero".into()));
        }
        let mut acc = ComplexMatrix::zeros(self.dim());
        for &i in indices {
            let (w, s) = &self.members[i];
            acc = acc.add(&s.matrix.scale_real(w / weight))?;
        }
        let merged = DensityOperator::new(acc)?;
        let first = *indices.iter().min().unwrap();
        let mut members = Vec::with_capacity(self.members.len());
        for (i, m) in self.members.iter().enumerate() {
            if i == first {
                members.push((weight, merged.clone()));
            } else if !indices.contains(&i) {
                members.push(m.clone());
            }
        }
        Ensemble::new(members)
    }
}

/// `Σ q_k ρ_k`.
pub fn mix(e: &Ensemble) -> Result<DensityOperator> {
    let mut acc = ComplexMatrix::zeros(e.dim());
    for (w, s) in &e.members {
        acc = acc.add(&s.matrix.scale_real(*w))?;
    }
    DensityOperator::new(acc)
}

/// True iff `‖ρ² − ρ‖_max ≤ 1e-9`.
pub fn is_pure(rho: &DensityOperator) -> bool {
    is_pure_with(rho, tol::IDEMPOTENCE)
}

pub fn is_pure_with(rho: &DensityOperator, tolerance: f64) -> bool {
    let sq = rho.matrix.matmul(&rho.matrix).expect("square");
    sq.max_abs_diff(&rho.matrix) <= tolerance
}

/// Eigenvalues at or below this are dropped from canonical decompositions.
const ZERO_EIGENVALUE: f64 = 1e-12;

/// Canonical unnormalized family `√λ_k |v_k⟩` over the nonzero spectrum,
/// ordered by descending eigenvalue.
fn canonical_family(rho: &DensityOperator) -> Result<Vec<ComplexVector>> {
    let e = eigh(&rho.matrix)?;
    Ok(e.values
        .iter()
        .zip(e.vectors)
        .filter(|(&l, _)| l > ZERO_EIGENVALUE)
        .map(|(&l, v)| v.scale(C64::new(l.sqrt(), 0.0)))
        .collect())
}

/// Purification on `H ⊗ H_aux` with `dim(H_aux) = dim(H)`:
/// `Σ_k √λ_k |v_k⟩ ⊗ |k⟩`. Tracing out the second factor returns `rho`.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    let d = rho.dim();
    let mut acc = ComplexVector::zeros(d * d);
    for (k, v) in canonical_family(rho)?.iter().enumerate() {
        acc = acc.add(&v.kron(&ComplexVector::basis(d, k)))?;
    }
    // dropped near-zero eigenvalues shift the norm by at most ~1e-12
    PureState::new(acc.normalized()?)
}

/// Ensemble realizing `rho` obtained by mixing the canonical eigen-family
/// with the `m x m` unitary `mixing`:
/// `|φ̃_j⟩ = Σ_k U_jk √λ_k |v_k⟩`, weight `‖φ̃_j‖²`, state `φ̃_j/‖φ̃_j‖`.
/// Members with (numerically) zero weight are dropped.
pub fn hjw_ensemble(rho: &DensityOperator, mixing: &ComplexMatrix) -> Result<Ensemble> {
    let deviation = mixing.unitarity_deviation();
    if deviation > tol::UNITARY {
        return Err(QfError::NotUnitary { deviation });
    }
    let family = canonical_family(rho)?;
    let m = mixing.dim();
    if m < family.len() {
        return Err(QfError::InvalidEnsemble(format!(
            "mixing dimension {m} is below rank {}",
            family.len()
        )));
    }
    let d = rho.dim();
    let mut raw = Vec::with_capacity(m);
    for j in 0..m {
        let mut phi = ComplexVector::zeros(d);
        for (k, psi) in family.iter().enumerate() {
            phi = phi.add(&psi.scale(mixing.get(j, k)))?;
        }
        let w = phi.norm().powi(2);
        if w > ZERO_EIGENVALUE {
            raw.push((w, phi));
        }
    }
    let total: f64 = raw.iter().map(|(w, _)| w).sum();
    let members = raw
        .into_iter()
        .map(|(w, phi)| Ok((w / total, DensityOperator::from_vector(&phi.normalized()?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(members)
}

/// Haar-random pure state.
pub fn random_pure_state(dim: usize, rng: &mut SplitMix64) -> DensityOperator {
    DensityOperator {
        matrix: random_unit_vector(dim, rng).outer(),
    }
}

/// Mixture `w ρ₁ + (1 − w) ρ₂` of two random pure states, `w` uniform in
/// `[0, 1)`. Draw order: `ρ₁`, `ρ₂`, then `w`.
pub fn random_mixed_state(dim: usize, rng: &mut SplitMix64) -> DensityOperator {
    let a = random_pure_state(dim, rng);
    let b = random_pure_state(dim, rng);
    let w = rng.next_f64();
    let m = a
        .matrix
        .scale_real(w)
        .add(&b.matrix.scale_real(1.0 - w))
        .unwrap();
    DensityOperator { matrix: m }
}
