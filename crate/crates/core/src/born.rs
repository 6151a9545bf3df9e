//! Observables, the trace rule `Pr = tr(ρP)`, compound probabilities over
//! ensembles, and reconstruction of a density operator from the values a
//! probability measure assigns to an informationally complete projector
//! family (linear-inversion tomography).

use std::f64::consts::PI;

use crate::error::{QfError, Result};
use crate::linalg::{eigh, hermitian_eig, ComplexMatrix, ComplexVector, SpectralPair, C64};
use crate::standard::Axis;
use crate::state::{DensityOperator, Ensemble};
use crate::tol;

/// Hermitian operator together with its grouped spectral decomposition.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Vec<SpectralPair>,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectrum = hermitian_eig(&matrix)?;
        Ok(Self { matrix, spectrum })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &[SpectralPair] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Spectral projector for the eigenvalue nearest `value`, if any lies
    /// within the degeneracy tolerance.
    pub fn projector_for(&self, value: f64) -> Option<&ComplexMatrix> {
        self.spectrum
            .iter()
            .find(|p| (p.eigenvalue - value).abs() <= tol::DEGENERACY)
            .map(|p| &p.projector)
    }
}

/// Outcome distribution: eigenvalue labels with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    pub outcomes: Vec<(f64, f64)>,
}

impl ProbabilityMeasure {
    pub fn probability_of(&self, label: f64) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|(l, _)| (l - label).abs() <= tol::DEGENERACY)
            .map(|&(_, p)| p)
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|(_, p)| p).sum()
    }

    /// Expectation value `Σ label · probability`.
    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|(l, p)| l * p).sum()
    }
}

fn check_projector(p: &ComplexMatrix) -> Result<()> {
    let deviation = p.projector_deviation();
    if deviation > tol::PROJECTOR {
        return Err(QfError::NotProjector { deviation });
    }
    Ok(())
}

/// `tr(AB)` without forming the product.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a.get(i, j) * b.get(j, i);
        }
    }
    s
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `tr(ρP)` for a projector `P`, clamped to `[0, 1]`.
pub fn born_probability(rho: &DensityOperator, p: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(QfError::DimensionMismatch {
            expected: rho.dim(),
            found: p.dim(),
        });
    }
    check_projector(p)?;
    let t = trace_of_product(rho.matrix(), p);
    debug_assert!(t.im.abs() <= tol::PROBABILITY, "imaginary part {}", t.im);
    debug_assert!(
        (-tol::PROBABILITY..=1.0 + tol::PROBABILITY).contains(&t.re),
        "probability {}",
        t.re
    );
    Ok(clamp_probability(t.re))
}

/// Probability of every eigenvalue of `a` in state `rho`.
pub fn measure_distribution(rho: &DensityOperator, a: &Observable) -> Result<ProbabilityMeasure> {
    if rho.dim() != a.dim() {
        return Err(QfError::DimensionMismatch {
            expected: rho.dim(),
            found: a.dim(),
        });
    }
    let outcomes = a
        .spectrum
        .iter()
        .map(|pair| Ok((pair.eigenvalue, born_probability(rho, &pair.projector)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbabilityMeasure { outcomes })
}

/// `Σ_k q_k tr(ρ_k P)`, the probability computed member by member.
pub fn compound_probability(e: &Ensemble, p: &ComplexMatrix) -> Result<f64> {
    let mut total = 0.0;
    for (w, s) in e.members() {
        total += w * born_probability(s, p)?;
    }
    Ok(clamp_probability(total))
}

/// A list of orthogonal projectors on one space.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    dim: usize,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectorFamily {
    pub fn new(dim: usize, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(QfError::EmptyDimension);
        }
        for p in &projectors {
            if p.dim() != dim {
                return Err(QfError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            check_projector(p)?;
        }
        Ok(Self { dim, projectors })
    }

    fn from_vectors(dim: usize, vectors: impl IntoIterator<Item = ComplexVector>) -> Self {
        Self::new(dim, vectors.into_iter().map(|v| v.outer()).collect())
            .expect("rank-1 projectors of unit vectors")
    }

    /// The six qubit projectors onto `|x±⟩, |y±⟩, |z±⟩`.
    pub fn pauli() -> Self {
        Self::from_vectors(
            2,
            [Axis::X, Axis::Y, Axis::Z]
                .into_iter()
                .flat_map(|a| [a.eigenstate(true), a.eigenstate(false)]),
        )
    }

    /// Computational basis plus the `p` quadratic-phase bases
    /// `(1/√p) Σ_j ω^(a j² + k j) |j⟩`, a complete set of `p + 1` mutually
    /// unbiased bases for an odd prime `p`.
    pub fn mutually_unbiased(p: usize) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(QfError::InvalidConfig(format!(
                "mutually unbiased family needs an odd prime dimension, got {p}"
            )));
        }
        let norm = 1.0 / (p as f64).sqrt();
        let mut vectors: Vec<ComplexVector> = (0..p).map(|k| ComplexVector::basis(p, k)).collect();
        for a in 0..p {
            for k in 0..p {
                let entries = (0..p)
                    .map(|j| {
                        let exponent = (a * j * j + k * j) % p;
                        C64::from_polar(norm, 2.0 * PI * exponent as f64 / p as f64)
                    })
                    .collect();
                vectors.push(ComplexVector::new(entries).unwrap());
            }
        }
        Ok(Self::from_vectors(p, vectors))
    }

    /// `d²` rank-one projectors: `|j⟩`, `(|j⟩ + |k⟩)/√2` and
    /// `(|j⟩ + i|k⟩)/√2` for `j < k`. Informationally complete in any
    /// dimension.
    pub fn pairwise_superpositions(dim: usize) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut vectors: Vec<ComplexVector> =
            (0..dim).map(|k| ComplexVector::basis(dim, k)).collect();
        for j in 0..dim {
            for k in (j + 1)..dim {
                for phase in [C64::new(h, 0.0), C64::new(0.0, h)] {
                    let mut e = vec![C64::new(0.0, 0.0); dim];
                    e[j] = C64::new(h, 0.0);
                    e[k] = phase;
                    vectors.push(ComplexVector::new(e).unwrap());
                }
            }
        }
        Self::from_vectors(dim, vectors)
    }

    /// Default informationally complete family: Pauli eigenprojectors for
    /// `d = 2`, mutually unbiased bases for odd primes, pairwise
    /// superpositions otherwise.
    pub fn informationally_complete(dim: usize) -> Self {
        match dim {
            2 => Self::pauli(),
            d if d >= 3 && is_prime(d) => Self::mutually_unbiased(d).unwrap(),
            d => Self::pairwise_superpositions(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// Values of the state's measure on each member.
    pub fn measure(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        self.projectors
            .iter()
            .map(|p| born_probability(rho, p))
            .collect()
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Orthonormal (Hilbert–Schmidt) basis of the Hermitian `d x d` matrices:
/// `I/√d`, the normalized diagonal generalized Gell-Mann matrices, and the
/// symmetric and antisymmetric off-diagonal pairs scaled by `1/√2`.
pub fn hermitian_basis(dim: usize) -> Vec<ComplexMatrix> {
    let zero = C64::new(0.0, 0.0);
    let mut basis = vec![ComplexMatrix::identity(dim).scale_real(1.0 / (dim as f64).sqrt())];
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..dim)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        basis.push(ComplexMatrix::from_diagonal(&diag));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..dim {
        for k in (j + 1)..dim {
            basis.push(ComplexMatrix::from_fn(dim, |r, c| {
                if (r, c) == (j, k) || (r, c) == (k, j) {
                    C64::new(h, 0.0)
                } else {
                    zero
                }
            }));
            basis.push(ComplexMatrix::from_fn(dim, |r, c| {
                if (r, c) == (j, k) {
                    C64::new(0.0, -h)
                } else if (r, c) == (k, j) {
                    C64::new(0.0, h)
                } else {
                    zero
                }
            }));
        }
    }
    basis
}

/// Relative eigenvalue floor of the normal matrix below which a direction
/// counts as unmeasured.
const RANK_TOL: f64 = 1e-10;
/// Largest residual accepted when fitting the measure values.
const RESIDUAL_TOL: f64 = 1e-6;
/// Eigenvalues of the fitted operator down to this are treated as noise and
/// clamped to zero.
const CLAMP_TOL: f64 = 1e-8;

/// Finds the unique operator `T` with `tr(T P_i) = values[i]` for every member
/// of an informationally complete family and returns it as a density operator.
///
/// `T` is expanded in [`hermitian_basis`]; the coefficients solve the normal
/// equations of the real linear system by spectral pseudo-inversion.
pub fn gleason_reconstruct(
    family: &ProjectorFamily,
    values: &[f64],
    dim: usize,
) -> Result<DensityOperator> {
    if family.dim() != dim {
        return Err(QfError::DimensionMismatch {
            expected: dim,
            found: family.dim(),
        });
    }
    if values.len() != family.len() {
        return Err(QfError::DimensionMismatch {
            expected: family.len(),
            found: values.len(),
        });
    }
    let basis = hermitian_basis(dim);
    let n_basis = basis.len();
    let design: Vec<Vec<f64>> = family
        .projectors()
        .iter()
        .map(|p| basis.iter().map(|b| trace_of_product(b, p).re).collect())
        .collect();

    let normal = ComplexMatrix::from_fn(n_basis, |a, b| {
        C64::new(design.iter().map(|row| row[a] * row[b]).sum(), 0.0)
    });
    let rhs: Vec<f64> = (0..n_basis)
        .map(|a| design.iter().zip(values).map(|(row, v)| row[a] * v).sum())
        .collect();

    let decomposition = eigh(&normal)?;
    let largest = decomposition.values.first().copied().unwrap_or(0.0);
    let rank = decomposition
        .values
        .iter()
        .filter(|&&mu| mu > RANK_TOL * largest.max(f64::MIN_POSITIVE))
        .count();
    if rank < n_basis {
        return Err(QfError::NotInformationallyComplete {
            rank,
            required: n_basis,
        });
    }

    let mut coefficients = vec![0.0; n_basis];
    for (mu, u) in decomposition.values.iter().zip(&decomposition.vectors) {
        let projection: C64 = (0..n_basis).map(|a| u[a].conj() * rhs[a]).sum();
        for (a, coeff) in coefficients.iter_mut().enumerate() {
            *coeff += (u[a] * projection).re / mu;
        }
    }

    let residual = design
        .iter()
        .zip(values)
        .map(|(row, v)| {
            (row.iter()
                .zip(&coefficients)
                .map(|(x, c)| x * c)
                .sum::<f64>()
                - v)
                .abs()
        })
        .fold(0.0, f64::max);
    if residual > RESIDUAL_TOL {
        return Err(QfError::MeasureNotRepresentable { residual });
    }

    let fitted = basis
        .iter()
        .zip(&coefficients)
        .fold(ComplexMatrix::zeros(dim), |acc, (b, c)| {
            acc.add(&b.scale_real(*c)).expect("same dimension")
        });
    let trace = fitted.trace().re;
    if (trace - 1.0).abs() > RESIDUAL_TOL {
        return Err(QfError::MeasureNotRepresentable {
            residual: (trace - 1.0).abs(),
        });
    }

    let spectrum = eigh(&fitted)?;
    let min_eigenvalue = spectrum.values.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -CLAMP_TOL {
        return Err(QfError::NotPositive { min_eigenvalue });
    }
    let operator = if min_eigenvalue < 0.0 {
        let clamped = spectrum.values.iter().zip(&spectrum.vectors).fold(
            ComplexMatrix::zeros(dim),
            |acc, (&l, v)| {
                acc.add(&v.outer().scale_real(l.max(0.0)))
                    .expect("same dimension")
            },
        );
        let t = clamped.trace().re;
        clamped.scale_real(1.0 / t)
    } else {
        fitted.scale_real(1.0 / trace)
    };
    DensityOperator::new(operator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{pauli_x, pauli_z};
    use crate::state::from_pure;
    use crate::PureState;

    fn z_plus() -> DensityOperator {
        DensityOperator::from_vector(&Axis::Z.eigenstate(true)).unwrap()
    }

    #[test]
    fn born_matches_overlap() {
        // |⟨x+|z+⟩|² = 1/2
        let p = born_probability(&z_plus(), &Axis::X.projector(true)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let psi = ComplexVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rho = from_pure(&PureState::new(psi.clone()).unwrap());
        let a = Axis::Y.eigenstate(true);
        let overlap = a.inner(&psi).unwrap().norm_sqr();
        assert!((born_probability(&rho, &a.outer()).unwrap() - overlap).abs() < 1e-15);
    }

    #[test]
    fn born_on_maximally_mixed() {
        let rho = DensityOperator::maximally_mixed(3);
        let p = born_probability(&rho, &ComplexVector::basis(3, 1).outer()).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn born_errors() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            born_probability(&rho, &ComplexMatrix::identity(3)),
            Err(QfError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            born_probability(&rho, &pauli_x()),
            Err(QfError::NotProjector { .. })
        ));
    }

    #[test]
    fn distributions() {
        let z = Observable::new(pauli_z()).unwrap();
        let d = measure_distribution(&z_plus(), &z).unwrap();
        assert_eq!(d.outcomes, vec![(1.0, 1.0), (-1.0, 0.0)]);
        let x = Observable::new(pauli_x()).unwrap();
        let d = measure_distribution(&z_plus(), &x).unwrap();
        assert!((d.probability_of(1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((d.probability_of(-1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!(measure_distribution(&DensityOperator::maximally_mixed(3), &x).is_err());
    }

    #[test]
    fn compound_examples() {
        let e = Ensemble::new(vec![(1.0, z_plus())]).unwrap();
        let p = Axis::X.projector(true);
        assert_eq!(
            compound_probability(&e, &p).unwrap(),
            born_probability(&z_plus(), &p).unwrap()
        );
        let e = Ensemble::from_pure_states(vec![
            (0.5, Axis::Z.eigenstate(true)),
            (0.5, Axis::Z.eigenstate(false)),
        ])
        .unwrap();
        assert!((compound_probability(&e, &p).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hermitian_basis_is_orthonormal() {
        for d in 1..=4 {
            let b = hermitian_basis(d);
            assert_eq!(b.len(), d * d);
            for (i, x) in b.iter().enumerate() {
                assert!(x.is_hermitian(0.0));
                for (j, y) in b.iter().enumerate() {
                    let ip = trace_of_product(x, y);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (ip - C64::new(expected, 0.0)).norm() < 1e-14,
                        "d={d} {i} {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn mub_family_is_unbiased() {
        let f = ProjectorFamily::mutually_unbiased(3).unwrap();
        assert_eq!(f.len(), 12);
        // members of different bases overlap with tr(P Q) = 1/3
        let p = &f.projectors()[0];
        let q = &f.projectors()[3];
        assert!((trace_of_product(p, q).re - 1.0 / 3.0).abs() < 1e-14);
        assert!(ProjectorFamily::mutually_unbiased(4).is_err());
        assert!(ProjectorFamily::mutually_unbiased(2).is_err());
    }

    #[test]
    fn reconstruct_qubit_examples() {
        let family = ProjectorFamily::pauli();
        let rho = gleason_reconstruct(&family, &[0.5; 6], 2).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-14
        );

        let values = family.measure(&z_plus()).unwrap();
        let rho = gleason_reconstruct(&family, &values, 2).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0]))
                < 1e-12
        );
    }

    #[test]
    fn reconstruct_rejects_incomplete_family() {
        let family =
            ProjectorFamily::new(2, vec![Axis::Z.projector(true), Axis::Z.projector(false)])
                .unwrap();
        let err = gleason_reconstruct(&family, &[1.0, 0.0], 2).unwrap_err();
        assert!(matches!(
            err,
            QfError::NotInformationallyComplete {
                rank: 2,
                required: 4
            }
        ));
    }

    #[test]
    fn reconstruct_rejects_inconsistent_values() {
        // probabilities of complementary projectors must sum to one
        let family = ProjectorFamily::pauli();
        let err = gleason_reconstruct(&family, &[0.9, 0.9, 0.5, 0.5, 0.5, 0.5], 2).unwrap_err();
        assert!(matches!(err, QfError::MeasureNotRepresentable { .. }));
        let err = gleason_reconstruct(&family, &[1.0; 6], 2).unwrap_err();
        assert!(matches!(err, QfError::MeasureNotRepresentable { .. }));
    }

    #[test]
    fn reconstruct_rejects_non_positive_measure() {
        // Bloch vector of length √3 is outside the ball
        let v = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let err = gleason_reconstruct(&ProjectorFamily::pauli(), &v, 2).unwrap_err();
        assert!(matches!(err, QfError::NotPositive { .. }));
    }

    #[test]
    fn reconstruct_clamps_tiny_negative_eigenvalues() {
        // pure state measure nudged by 1e-9 off the Bloch sphere
        let eps = 1e-9;
        let v = [0.5, 0.5, 0.5, 0.5, 1.0 + eps, -eps];
        let rho = gleason_reconstruct(&ProjectorFamily::pauli(), &v, 2).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0]))
                < 1e-8
        );
    }

    #[test]
    fn reconstruct_dimension_errors() {
        let family = ProjectorFamily::pauli();
        assert!(matches!(
            gleason_reconstruct(&family, &[0.5; 6], 3),
            Err(QfError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            gleason_reconstruct(&family, &[0.5; 5], 2),
            Err(QfError::DimensionMismatch { .. })
        ));
    }
}
