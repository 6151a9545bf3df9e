//! Dense complex linear algebra for small operators.
//!
//! Everything here is sized for the handful of qubits the scenarios need
//! (dimension 8 at most in practice, a few dozen at the outside). Matrices are
//! square, stored row-major, and immutable once built.
//!
//! Tensor products follow one fixed convention: the leftmost factor is
//! subsystem 0 and carries the slowest-varying index, so
//! `kron(a, b)[(i*db + k, j*db + l)] = a[(i, j)] * b[(k, l)]`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{QfError, Result};
use crate::tol;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_finite(entries: &[C64]) -> Result<()> {
    match entries
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(index) => Err(QfError::NonFinite { index }),
        None => Ok(()),
    }
}

/// A column vector of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(QfError::EmptyDimension);
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut entries = vec![ZERO; dim];
        entries[k] = ONE;
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            entries: vec![ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(QfError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(QfError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn kron(&self, other: &ComplexVector) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Self { entries }
    }

    /// Explicit renormalization; errors on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(QfError::NotNormalized { norm: 0.0 });
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// `|self⟩⟨self|`.
    pub fn outer(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut data = Vec::with_capacity(d * d);
        for a in &self.entries {
            for b in &self.entries {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix { dim: d, data }
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(QfError::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(QfError::WrongEntryCount {
                expected: dim * dim,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Panics if `f` produces a non-finite entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim >= 1);
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        check_finite(&data).expect("from_fn produced a non-finite entry");
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(QfError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(ComplexMatrix { dim: n, data })
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim {
            return Err(QfError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let n = self.dim;
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v.entries[j]).sum())
            .collect();
        Ok(ComplexVector { entries })
    }

    /// `U self U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> ComplexMatrix {
        self.scale(C64::new(c, 0.0))
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(other)?;
        Ok(ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(other)?;
        Ok(ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Kronecker product; `self` is the slow index.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut data = vec![ZERO; n * n];
        for i in 0..da {
            for j in 0..da {
                let a = self.data[i * da + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * n + j * db + l] = a * other.data[k * db + l];
                    }
                }
            }
        }
        ComplexMatrix { dim: n, data }
    }

    /// Max-norm distance; `f64::INFINITY` when the dimensions differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A − A†‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("same dimension");
        gram.max_abs_diff(&Self::identity(self.dim))
    }

    /// `max(‖P − P†‖_max, ‖P² − P‖_max)`.
    pub fn projector_deviation(&self) -> f64 {
        let sq = self.matmul(self).expect("same dimension");
        self.hermitian_deviation().max(sq.max_abs_diff(self))
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5
        })
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.dim).map(|i| self.data[i * self.dim + j]).collect(),
        }
    }

    /// Reduces onto the subsystems listed in `keep`, tracing out the rest.
    ///
    /// `dims` lists the factor dimensions (slowest first) and must multiply to
    /// `self.dim()`. Kept subsystems appear in the output in their original
    /// order regardless of the order given in `keep`.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(QfError::InvalidSubsystems(
                "subsystem dimensions must be positive".into(),
            ));
        }
        let total: usize = dims.iter().product();
        if total != self.dim {
            return Err(QfError::DimensionMismatch {
                expected: self.dim,
                found: total,
            });
        }
        if keep.is_empty() {
            return Err(QfError::InvalidSubsystems("keep set is empty".into()));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(QfError::InvalidSubsystems(
                "duplicate subsystem index".into(),
            ));
        }
        if let Some(&bad) = kept.iter().find(|&&s| s >= dims.len()) {
            return Err(QfError::InvalidSubsystems(format!(
                "subsystem {bad} out of range for {} factors",
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();

        let mut strides = vec![1usize; dims.len()];
        for s in (0..dims.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        let kept_offsets = subsystem_offsets(&kept, dims, &strides);
        let traced_offsets = subsystem_offsets(&traced, dims, &strides);

        let n = self.dim;
        let out_dim = kept_offsets.len();
        let mut data = vec![ZERO; out_dim * out_dim];
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                data[r * out_dim + c] = traced_offsets
                    .iter()
                    .map(|&t| self.data[(ro + t) * n + co + t])
                    .sum();
            }
        }
        Ok(ComplexMatrix { dim: out_dim, data })
    }
}

/// Flat-index offsets of every joint basis state of `subsystems`, enumerated
/// with the first listed subsystem varying slowest.
fn subsystem_offsets(subsystems: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &s in subsystems {
        offsets = offsets
            .iter()
            .flat_map(|&o| (0..dims[s]).map(move |k| o + k * strides[s]))
            .collect();
    }
    offsets
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})[", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of a sequence of matrices, leftmost slowest.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold((*first).clone(), |acc, m| acc.kron(m))
}

/// One eigenvalue with the orthogonal projector onto its eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
}

impl SpectralPair {
    /// Rank of the eigenspace, read off the projector trace.
    pub fn multiplicity(&self) -> usize {
        self.projector.trace().re.round() as usize
    }
}

/// Eigenvalues (descending) with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

#[derive(Debug, Clone, Copy)]
pub struct EigOptions {
    /// Maximum `‖A − A†‖_max` accepted as Hermitian.
    pub hermitian_tol: f64,
    /// Eigenvalues closer than this share one projector.
    pub degeneracy_tol: f64,
    /// Off-diagonal Frobenius norm (relative to `max(1, ‖A‖_F)`) at which the
    /// Jacobi sweeps stop.
    pub convergence_tol: f64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            hermitian_tol: tol::HERMITIAN,
            degeneracy_tol: tol::DEGENERACY,
            convergence_tol: tol::JACOBI_OFF_DIAGONAL,
        }
    }
}

const MAX_SWEEPS: usize = 100;

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Values come back sorted descending.
pub fn eigh(a: &ComplexMatrix) -> Result<Eigh> {
    eigh_with(a, &EigOptions::default())
}

pub fn eigh_with(a: &ComplexMatrix, opts: &EigOptions) -> Result<Eigh> {
    let deviation = a.hermitian_deviation();
    if deviation > opts.hermitian_tol {
        return Err(QfError::NotHermitian { deviation });
    }
    let n = a.dim;
    let mut m = a.hermitian_part().data;
    let mut v = ComplexMatrix::identity(n).data;
    let threshold = opts.convergence_tol * a.frobenius_norm().max(1.0);

    let off_norm = |m: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&m) < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[p * n + q];
                let abs_b = b.norm();
                if abs_b < f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let phase = (b / abs_b).conj();
                let theta = (aqq - app) / (2.0 * abs_b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, e^{-i arg b}) · [[c, s], [-s, c]]
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = phase * (-s);
                let g11 = phase * c;

                for k in 0..n {
                    let (mp, mq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = mp * g00 + mq * g10;
                    m[k * n + q] = mp * g01 + mq * g11;
                    let (vp, vq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = vp * g00 + vq * g10;
                    v[k * n + q] = vp * g01 + vq * g11;
                }
                for k in 0..n {
                    let (mp, mq) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = g00.conj() * mp + g10.conj() * mq;
                    m[q * n + k] = g01.conj() * mp + g11.conj() * mq;
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
                m[p * n + p].im = 0.0;
                m[q * n + q].im = 0.0;
            }
        }
    }
    if !converged && off_norm(&m) >= threshold {
        return Err(QfError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].re.total_cmp(&m[i * n + i].re));
    let values = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors = order
        .iter()
        .map(|&j| ComplexVector {
            entries: (0..n).map(|i| v[i * n + j]).collect(),
        })
        .collect();
    Ok(Eigh { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, descending, with multiplicity.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.values)
}

/// Spectral decomposition with degenerate eigenvalues merged.
///
/// Pairs are sorted by descending eigenvalue; the projectors are complete and
/// mutually orthogonal.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<Vec<SpectralPair>> {
    hermitian_eig_with(a, &EigOptions::default())
}

pub fn hermitian_eig_with(a: &ComplexMatrix, opts: &EigOptions) -> Result<Vec<SpectralPair>> {
    let Eigh { values, vectors } = eigh_with(a, opts)?;
    let n = a.dim;
    let mut pairs: Vec<SpectralPair> = Vec::new();
    let mut group: Vec<usize> = Vec::new();

    let mut flush = |group: &mut Vec<usize>| {
        if group.is_empty() {
            return;
        }
        let mean = group.iter().map(|&k| values[k]).sum::<f64>() / group.len() as f64;
        let mut projector = ComplexMatrix::zeros(n);
        for &k in group.iter() {
            projector = projector.add(&vectors[k].outer()).expect("same dimension");
        }
        pairs.push(SpectralPair {
            eigenvalue: mean,
            projector,
        });
        group.clear();
    };

    for k in 0..values.len() {
        if let Some(&head) = group.first() {
            if (values[head] - values[k]).abs() > opts.degeneracy_tol {
                flush(&mut group);
            }
        }
        group.push(k);
    }
    flush(&mut group);
    Ok(pairs)
}

/// Rebuilds `Σ λ_k P_k`.
pub fn reconstruct(pairs: &[SpectralPair]) -> ComplexMatrix {
    let n = pairs[0].projector.dim();
    pairs.iter().fold(ComplexMatrix::zeros(n), |acc, p| {
        acc.add(&p.projector.scale_real(p.eigenvalue))
            .expect("same dimension")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{pauli_x, pauli_y, pauli_z};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(ComplexMatrix::new(0, vec![]), Err(QfError::EmptyDimension));
        assert!(matches!(
            ComplexMatrix::new(2, vec![ONE; 3]),
            Err(QfError::WrongEntryCount { .. })
        ));
        assert_eq!(
            ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(QfError::NonFinite { index: 0 })
        );
        assert!(ComplexVector::new(vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn matmul_identity_and_paulis() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
        assert!(pauli_x().matmul(&pauli_x()).unwrap().max_abs_diff(&i2) == 0.0);
        // σx·σy = [[0,1],[1,0]]·[[0,-i],[i,0]] = [[i,0],[0,-i]] = i·σz
        let expected = ComplexMatrix::new(2, vec![c(0.0, 1.0), ZERO, ZERO, c(0.0, -1.0)]).unwrap();
        assert_eq!(pauli_x().matmul(&pauli_y()).unwrap(), expected);
        assert_eq!(expected, pauli_z().scale(c(0.0, 1.0)));
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let err = ComplexMatrix::identity(2).matmul(&ComplexMatrix::identity(3));
        assert_eq!(
            err,
            Err(QfError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn adjoint_and_trace() {
        assert_eq!(
            ComplexMatrix::identity(2).adjoint(),
            ComplexMatrix::identity(2)
        );
        assert_eq!(pauli_y().adjoint(), pauli_y());
        assert_eq!(ComplexMatrix::identity(4).trace(), c(4.0, 0.0));
        let psi = ComplexVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!((psi.outer().trace() - ONE).norm() < 1e-15);
    }

    #[test]
    fn kron_basics() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        // σz⊗I on |z+⟩⊗|z−⟩ = |0⟩⊗|1⟩ = e_1 gives +e_1
        let zi = pauli_z().kron(&i2);
        let v = ComplexVector::basis(2, 0).kron(&ComplexVector::basis(2, 1));
        assert_eq!(v, ComplexVector::basis(4, 1));
        assert_eq!(zi.mul_vec(&v).unwrap(), v);
        let x = pauli_x().kron(&pauli_y());
        assert!((x.trace() - pauli_x().trace() * pauli_y().trace()).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0), c(4.0, 0.0)])
            .unwrap();
        let b =
            ComplexMatrix::new(3, (0..9).map(|k| c(k as f64, 0.5 * k as f64)).collect()).unwrap();
        let ab = a.kron(&b);
        let left = ab.partial_trace(&[2, 3], &[0]).unwrap();
        assert!(left.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let right = ab.partial_trace(&[2, 3], &[1]).unwrap();
        assert!(right.max_abs_diff(&b.scale(a.trace())) < 1e-12);
        assert_eq!(ab.partial_trace(&[2, 3], &[0, 1]).unwrap(), ab);
        assert_eq!(ab.partial_trace(&[2, 3], &[1, 0]).unwrap(), ab);
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        // Hand expansion: the singlet projector has 1/2 at (1,1), (2,2) and
        // -1/2 at (1,2), (2,1); tracing either factor leaves diag(1/2, 1/2).
        let mut data = vec![ZERO; 16];
        data[5] = c(0.5, 0.0);
        data[10] = c(0.5, 0.0);
        data[6] = c(-0.5, 0.0);
        data[9] = c(-0.5, 0.0);
        let singlet = ComplexMatrix::new(4, data).unwrap();
        let half = ComplexMatrix::from_diagonal(&[0.5, 0.5]);
        assert!(
            singlet
                .partial_trace(&[2, 2], &[0])
                .unwrap()
                .max_abs_diff(&half)
                < 1e-15
        );
        assert!(
            singlet
                .partial_trace(&[2, 2], &[1])
                .unwrap()
                .max_abs_diff(&half)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            m.partial_trace(&[2, 3], &[0]),
            Err(QfError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            m.partial_trace(&[2, 2], &[]),
            Err(QfError::InvalidSubsystems(_))
        ));
        assert!(matches!(
            m.partial_trace(&[2, 2], &[2]),
            Err(QfError::InvalidSubsystems(_))
        ));
        assert!(matches!(
            m.partial_trace(&[2, 2], &[0, 0]),
            Err(QfError::InvalidSubsystems(_))
        ));
        assert!(matches!(
            m.partial_trace(&[4, 0], &[0]),
            Err(QfError::InvalidSubsystems(_))
        ));
    }

    #[test]
    fn partial_trace_middle_factor() {
        let a = pauli_x();
        let b = ComplexMatrix::from_diagonal(&[0.25, 0.75]);
        let cm = pauli_z().add(&ComplexMatrix::identity(2)).unwrap();
        let abc = kron_all(&[&a, &b, &cm]);
        let kept = abc.partial_trace(&[2, 2, 2], &[0, 2]).unwrap();
        assert!(kept.max_abs_diff(&a.kron(&cm)) < 1e-15);
        let mid = abc.partial_trace(&[2, 2, 2], &[1]).unwrap();
        assert!(mid.max_abs_diff(&b.scale(a.trace() * cm.trace())) < 1e-15);
    }

    #[test]
    fn eig_of_sigma_z_and_identity() {
        let pairs = hermitian_eig(&pauli_z()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].eigenvalue - 1.0).abs() < 1e-15);
        assert!((pairs[1].eigenvalue + 1.0).abs() < 1e-15);
        assert!(
            pairs[0]
                .projector
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0]))
                < 1e-15
        );
        assert!(
            pairs[1]
                .projector
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.0, 1.0]))
                < 1e-15
        );

        let pairs = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].multiplicity(), 2);
        assert!(pairs[0].projector.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn eig_of_sigma_x() {
        // closed form: |x±⟩⟨x±| = [[1/2, ±1/2], [±1/2, 1/2]]
        let pairs = hermitian_eig(&pauli_x()).unwrap();
        let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let minus = ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!((pairs[0].eigenvalue - 1.0).abs() < 1e-14);
        assert!((pairs[1].eigenvalue + 1.0).abs() < 1e-14);
        assert!(pairs[0].projector.max_abs_diff(&plus) < 1e-14);
        assert!(pairs[1].projector.max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn eig_of_sigma_y_has_complex_eigenvectors() {
        // |y±⟩⟨y±| = [[1/2, ∓i/2], [±i/2, 1/2]]
        let pairs = hermitian_eig(&pauli_y()).unwrap();
        let plus = ComplexMatrix::new(2, vec![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)])
            .unwrap();
        assert!(pairs[0].projector.max_abs_diff(&plus) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eig(&m),
            Err(QfError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_merges_only_within_tolerance() {
        let m = ComplexMatrix::from_diagonal(&[1.0, 1.0 + 1e-9, 1.0 + 1e-6]);
        let pairs = hermitian_eig(&m).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].multiplicity(), 1);
        assert_eq!(pairs[1].multiplicity(), 2);
    }
}
