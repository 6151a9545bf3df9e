//! Evolution maps on density operators.
//!
//! Three representations live here: Kraus channels, the reduced map of a
//! unitary acting on system plus ancilla, and [`DynamicsMap`], an opaque rule
//! that may be nonlinear. The opaque form exists so convex linearity can be
//! *measured* ([`check_linearity`]) rather than assumed, and so that equal-
//! average ensembles can be probed for signaling ([`signaling_test`]).

use std::fmt;
use std::sync::Arc;

use crate::error::{QfError, Result};
use crate::linalg::{eigenvalues, ComplexMatrix, C64};
use crate::rng::{random_unitary, SplitMix64};
use crate::standard::{pauli_x, pauli_y, pauli_z};
use crate::state::{
    hjw_ensemble, mix, random_mixed_state, random_pure_state, DensityOperator, Ensemble,
};
use crate::tol;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(QfError::InvalidChannel("no Kraus operators".into()));
        };
        let d = first.dim();
        if let Some(bad) = kraus.iter().find(|k| k.dim() != d) {
            return Err(QfError::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let ch = Self { kraus };
        let deviation = ch.completeness_deviation();
        if deviation > tol::KRAUS_COMPLETENESS {
            return Err(QfError::InvalidChannel(format!(
                "Σ K†K deviates from identity by {deviation:e}"
            )));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `{√(1−p) I, √p σx}`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QfError::InvalidChannel(format!("flip probability {p}")));
        }
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
            pauli_x().scale_real(p.sqrt()),
        ])
    }

    /// `{√(1−3p/4) I, √(p/4) σx, √(p/4) σy, √(p/4) σz}`, i.e.
    /// `ρ ↦ (1−p) ρ + p I/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=4.0 / 3.0).contains(&p) {
            return Err(QfError::InvalidChannel(format!(
                "depolarizing strength {p}"
            )));
        }
        let s = (p / 4.0).sqrt();
        Self::new(vec![
            ComplexMatrix::identity(2).scale_real((1.0 - 3.0 * p / 4.0).sqrt()),
            pauli_x().scale_real(s),
            pauli_y().scale_real(s),
            pauli_z().scale_real(s),
        ])
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(QfError::InvalidChannel(format!("damping rate {gamma}")));
        }
        Self::new(vec![
            ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()])?,
            ComplexMatrix::from_real(2, &[0.0, gamma.sqrt(), 0.0, 0.0])?,
        ])
    }

    /// Channel with `n_kraus` operators read off the first `dim` columns of a
    /// random unitary on `dim · n_kraus`.
    pub fn random(dim: usize, n_kraus: usize, rng: &mut SplitMix64) -> Self {
        let u = random_unitary(dim * n_kraus, rng);
        let kraus = (0..n_kraus)
            .map(|k| ComplexMatrix::from_fn(dim, |i, j| u.get(i * n_kraus + k, j)))
            .collect();
        Self::new(kraus).expect("columns of a unitary form an isometry")
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_deviation(&self) -> f64 {
        let d = self.dim();
        let sum = self.kraus.iter().fold(ComplexMatrix::zeros(d), |acc, k| {
            acc.add(&k.adjoint().matmul(k).expect("same dimension"))
                .expect("same dimension")
        });
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim() {
            return Err(QfError::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        self.kraus
            .iter()
            .try_fold(ComplexMatrix::zeros(self.dim()), |acc, k| {
                acc.add(&rho.conjugate_by(k)?)
            })
    }
}

/// `Σ K ρ K†`.
pub fn apply(ch: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::new(ch.apply_matrix(rho.matrix())?)
}

/// Stinespring isometry `V = Σ_k K_k ⊗ |k⟩` from the system (dimension `d`)
/// into system ⊗ ancilla (dimension `d · m`), stored as a `(d·m) x d` array.
#[derive(Debug, Clone)]
pub struct Isometry {
    sys_dim: usize,
    aux_dim: usize,
    data: Vec<C64>,
}

impl Isometry {
    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn rows(&self) -> usize {
        self.sys_dim * self.aux_dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.sys_dim + col]
    }

    /// `V†V`, which equals the identity on the system.
    pub fn gram(&self) -> ComplexMatrix {
        let rows = self.rows();
        ComplexMatrix::from_fn(self.sys_dim, |i, j| {
            (0..rows)
                .map(|r| self.get(r, i).conj() * self.get(r, j))
                .sum()
        })
    }

    /// `V ρ V†` on system ⊗ ancilla.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.sys_dim;
        if rho.dim() != d {
            return Err(QfError::DimensionMismatch {
                expected: d,
                found: rho.dim(),
            });
        }
        let rows = self.rows();
        let mut v_rho = vec![C64::new(0.0, 0.0); rows * d];
        for r in 0..rows {
            for j in 0..d {
                v_rho[r * d + j] = (0..d).map(|k| self.get(r, k) * rho.get(k, j)).sum();
            }
        }
        Ok(ComplexMatrix::from_fn(rows, |r, s| {
            (0..d)
                .map(|j| v_rho[r * d + j] * self.get(s, j).conj())
                .sum()
        }))
    }

    /// `tr_aux(V ρ V†)`.
    pub fn reduced(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let global = self.conjugate(rho.matrix())?;
        DensityOperator::new(global.partial_trace(&[self.sys_dim, self.aux_dim], &[0])?)
    }
}

pub fn dilate(ch: &KrausChannel) -> Isometry {
    let d = ch.dim();
    let m = ch.kraus.len();
    let mut data = vec![C64::new(0.0, 0.0); d * m * d];
    for (k, op) in ch.kraus.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                data[(i * m + k) * d + j] = op.get(i, j);
            }
        }
    }
    Isometry {
        sys_dim: d,
        aux_dim: m,
        data,
    }
}

type Rule = dyn Fn(&DensityOperator) -> Result<ComplexMatrix> + Send + Sync;

/// An evaluation rule `ρ ↦ Φ(ρ)` with a label. Rules must be pure functions;
/// every output is re-validated as a density operator.
#[derive(Clone)]
pub struct DynamicsMap {
    label: String,
    rule: Arc<Rule>,
}

impl DynamicsMap {
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(&DensityOperator) -> Result<ComplexMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn from_channel(label: impl Into<String>, ch: KrausChannel) -> Self {
        Self::new(label, move |rho| ch.apply_matrix(rho.matrix()))
    }

    pub fn identity() -> Self {
        Self::new("identity", |rho| Ok(rho.matrix().clone()))
    }

    /// `ρ ↦ ρ² / tr(ρ²)`: fixes every pure state but is not convex-linear.
    pub fn purity_normalizer() -> Self {
        Self::new("nonlinear normalizer rho^2/tr(rho^2)", |rho| {
            let sq = rho.matrix().matmul(rho.matrix())?;
            let t = sq.trace().re;
            Ok(sq.scale_real(1.0 / t))
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new((self.rule)(rho)?)
    }
}

impl fmt::Debug for DynamicsMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DynamicsMap")
            .field("label", &self.label)
            .finish()
    }
}

/// `ρ ↦ tr_aux[U (ρ ⊗ σ_aux) U†]` with the system as the first factor.
pub fn reduced_dynamics(
    global_unitary: &ComplexMatrix,
    aux_state: &DensityOperator,
) -> Result<DynamicsMap> {
    let deviation = global_unitary.unitarity_deviation();
    if deviation > tol::UNITARY {
        return Err(QfError::NotUnitary { deviation });
    }
    let m = aux_state.dim();
    let total = global_unitary.dim();
    if total % m != 0 {
        return Err(QfError::DimensionMismatch {
            expected: m,
            found: total,
        });
    }
    let d = total / m;
    let u = global_unitary.clone();
    let aux = aux_state.matrix().clone();
    Ok(DynamicsMap::new(
        format!("reduced dynamics (system {d}, ancilla {m})"),
        move |rho| {
            if rho.dim() != d {
                return Err(QfError::DimensionMismatch {
                    expected: d,
                    found: rho.dim(),
                });
            }
            rho.matrix()
                .kron(&aux)
                .conjugate_by(&u)?
                .partial_trace(&[d, m], &[0])
        },
    ))
}

/// Half the sum of absolute eigenvalues of `a − b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.sub(b)?.hermitian_part();
    Ok(0.5 * eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearityVerdict {
    Linear,
    Nonlinear,
}

/// Kind of states combined in each linearity trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialMembers {
    /// Two Haar-random pure states.
    Pure,
    /// Two random mixtures of pure states.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct LinearityReport {
    pub label: String,
    pub dim: usize,
    pub trials: usize,
    pub members: TrialMembers,
    /// Largest `‖Φ(q ρ₁ + (1−q) ρ₂) − q Φ(ρ₁) − (1−q) Φ(ρ₂)‖_max` seen.
    pub max_deviation: f64,
    pub threshold: f64,
    pub verdict: LinearityVerdict,
}

#[derive(Debug, Clone, Copy)]
pub struct LinearityOptions {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub members: TrialMembers,
    pub threshold: f64,
}

impl LinearityOptions {
    pub fn new(dim: usize, trials: usize, seed: u64) -> Self {
        Self {
            dim,
            trials,
            seed,
            members: TrialMembers::Pure,
            threshold: LINEARITY_THRESHOLD,
        }
    }

    pub fn members(mut self, members: TrialMembers) -> Self {
        self.members = members;
        self
    }
}

/// Deviation at or below which a map is reported linear.
pub const LINEARITY_THRESHOLD: f64 = 1e-10;

/// Convex-linearity probe on random pairs of pure states.
///
/// Trial `i` draws from [`SplitMix64::substream`]`(seed, i)`: `ρ₁`, then
/// `ρ₂`, then `q` uniform in `[0, 1)`. The report is therefore independent of
/// trial evaluation order.
pub fn check_linearity(
    map: &DynamicsMap,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<LinearityReport> {
    check_linearity_with(map, &LinearityOptions::new(dim, trials, seed))
}

pub fn check_linearity_with(map: &DynamicsMap, opts: &LinearityOptions) -> Result<LinearityReport> {
    if opts.trials == 0 {
        return Err(QfError::InvalidConfig("trials must be at least 1".into()));
    }
    if opts.dim == 0 {
        return Err(QfError::EmptyDimension);
    }
    let mut max_deviation = 0.0f64;
    for trial in 0..opts.trials {
        let mut rng = SplitMix64::substream(opts.seed, trial as u64);
        let draw = |rng: &mut SplitMix64| match opts.members {
            TrialMembers::Pure => random_pure_state(opts.dim, rng),
            TrialMembers::Mixed => random_mixed_state(opts.dim, rng),
        };
        let rho1 = draw(&mut rng);
        let rho2 = draw(&mut rng);
        let q = rng.next_f64();

        let combined = rho1
            .matrix()
            .scale_real(q)
            .add(&rho2.matrix().scale_real(1.0 - q))?;
        let lhs = map.evaluate(&DensityOperator::new(combined)?)?;
        let rhs = map
            .evaluate(&rho1)?
            .matrix()
            .scale_real(q)
            .add(&map.evaluate(&rho2)?.matrix().scale_real(1.0 - q))?;
        max_deviation = max_deviation.max(lhs.matrix().max_abs_diff(&rhs));
    }
    let verdict = if max_deviation <= opts.threshold {
        LinearityVerdict::Linear
    } else {
        LinearityVerdict::Nonlinear
    };
    Ok(LinearityReport {
        label: map.label().to_owned(),
        dim: opts.dim,
        trials: opts.trials,
        members: opts.members,
        max_deviation,
        threshold: opts.threshold,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalingVerdict {
    NoSignaling,
    Signaling,
}

#[derive(Debug, Clone)]
pub struct SignalingReport {
    pub ensemble_a: Ensemble,
    pub ensemble_b: Ensemble,
    /// Trace distance between the member-wise evolved averages.
    pub distance: f64,
    pub verdict: SignalingVerdict,
}

/// Largest average-state mismatch accepted for two ensembles, and the largest
/// evolved distance still reported as no-signaling.
pub const SIGNALING_TOL: f64 = 1e-9;

/// Evolves two ensembles with the same average state member by member and
/// measures how far apart the resulting averages are.
///
/// A remote party steering which of the two ensembles is "really" present
/// could only signal if this distance is nonzero.
pub fn signaling_test(
    map: &DynamicsMap,
    ensemble_a: &Ensemble,
    ensemble_b: &Ensemble,
) -> Result<SignalingReport> {
    if ensemble_a.dim() != ensemble_b.dim() {
        return Err(QfError::DimensionMismatch {
            expected: ensemble_a.dim(),
            found: ensemble_b.dim(),
        });
    }
    let deviation = mix(ensemble_a)?
        .matrix()
        .max_abs_diff(mix(ensemble_b)?.matrix());
    if deviation > SIGNALING_TOL {
        return Err(QfError::EnsemblesDistinguishable { deviation });
    }
    let evolve = |e: &Ensemble| -> Result<ComplexMatrix> {
        e.members()
            .iter()
            .try_fold(ComplexMatrix::zeros(e.dim()), |acc, (w, s)| {
                acc.add(&map.evaluate(s)?.matrix().scale_real(*w))
            })
    };
    let distance = trace_distance(&evolve(ensemble_a)?, &evolve(ensemble_b)?)?;
    let verdict = if distance <= SIGNALING_TOL {
        SignalingVerdict::NoSignaling
    } else {
        SignalingVerdict::Signaling
    };
    Ok(SignalingReport {
        ensemble_a: ensemble_a.clone(),
        ensemble_b: ensemble_b.clone(),
        distance,
        verdict,
    })
}

/// The two eigen-decompositions of `I/2`: `{½|z+⟩, ½|z−⟩}` and `{½|x+⟩, ½|x−⟩}`.
pub fn maximally_mixed_z_x_pair() -> (Ensemble, Ensemble) {
    let half = DensityOperator::maximally_mixed(2);
    let z = hjw_ensemble(&half, &ComplexMatrix::identity(2)).expect("identity mixing");
    let x = hjw_ensemble(&half, &crate::standard::hadamard()).expect("Hadamard mixing");
    (z, x)
}

/// Equal-average pair on which a map that fixes pure states but is not
/// convex-linear leaks information.
///
/// Both ensembles average to `I/2`. The first is the `z` eigen-ensemble. The
/// second comes from mixing the eigen-family with a 3x3 unitary that splits
/// `½|z−⟩` into two quarters, `{½|z+⟩, ¼|z−⟩, ¼|z−⟩}`, and then merging the
/// first two members into the mixed state `diag(2/3, 1/3)` with weight 3/4.
/// Pure-member ensembles cannot serve: such a map leaves each member alone.
pub fn nonlinear_witness_pair() -> Result<(Ensemble, Ensemble)> {
    let half = DensityOperator::maximally_mixed(2);
    let z = hjw_ensemble(&half, &ComplexMatrix::identity(2))?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let split = ComplexMatrix::from_real(3, &[1.0, 0.0, 0.0, 0.0, h, -h, 0.0, h, h])?;
    let fine = hjw_ensemble(&half, &split)?;
    let coarse = fine.merge_members(&[0, 1])?;
    Ok((z, coarse))
}

/// `n` pairs of ensembles sharing a random average state of dimension `dim`,
/// each ensemble produced by mixing with an independent random unitary of
/// size `dim + 1`.
pub fn random_hjw_pairs(dim: usize, n: usize, seed: u64) -> Result<Vec<(Ensemble, Ensemble)>> {
    (0..n)
        .map(|i| {
            let mut rng = SplitMix64::substream(seed, i as u64);
            let rho = random_mixed_state(dim, &mut rng);
            let u = random_unitary(dim + 1, &mut rng);
            let v = random_unitary(dim + 1, &mut rng);
            Ok((hjw_ensemble(&rho, &u)?, hjw_ensemble(&rho, &v)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{swap, Axis};

    fn z(plus: bool) -> DensityOperator {
        DensityOperator::from_vector(&Axis::Z.eigenstate(plus)).unwrap()
    }

    #[test]
    fn kraus_validation() {
        assert!(KrausChannel::new(vec![]).is_err());
        let not_tp = vec![ComplexMatrix::identity(2).scale_real(0.5)];
        assert!(matches!(
            KrausChannel::new(not_tp),
            Err(QfError::InvalidChannel(_))
        ));
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(
            KrausChannel::new(mixed),
            Err(QfError::DimensionMismatch { .. })
        ));
        assert!(KrausChannel::bit_flip(1.5).is_err());
        assert!(KrausChannel::depolarizing(-0.1).is_err());
    }

    #[test]
    fn apply_examples() {
        let rho = z(true);
        assert_eq!(apply(&KrausChannel::identity(2), &rho).unwrap(), rho);
        let out = apply(&KrausChannel::depolarizing(1.0).unwrap(), &rho).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-15
        );
        let out = apply(&KrausChannel::bit_flip(1.0).unwrap(), &rho).unwrap();
        assert!(out.matrix().max_abs_diff(z(false).matrix()) < 1e-15);
        assert!(matches!(
            apply(&KrausChannel::identity(3), &rho),
            Err(QfError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn depolarizing_closed_form() {
        let mut rng = SplitMix64::new(9);
        for p in [0.0, 0.25, 0.75, 1.0] {
            let ch = KrausChannel::depolarizing(p).unwrap();
            let rho = random_mixed_state(2, &mut rng);
            let expected = rho
                .matrix()
                .scale_real(1.0 - p)
                .add(&ComplexMatrix::identity(2).scale_real(p / 2.0))
                .unwrap();
            assert!(apply(&ch, &rho).unwrap().matrix().max_abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn dilate_identity() {
        let v = dilate(&KrausChannel::identity(2));
        assert_eq!(v.aux_dim(), 1);
        assert!(v.gram().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let rho = random_mixed_state(2, &mut SplitMix64::new(1));
        assert!(v.reduced(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn dilate_round_trips() {
        let mut rng = SplitMix64::new(17);
        let flip = KrausChannel::bit_flip(0.5).unwrap();
        let v = dilate(&flip);
        assert!(v.gram().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let rho = random_mixed_state(2, &mut rng);
            let a = v.reduced(&rho).unwrap();
            let b = apply(&flip, &rho).unwrap();
            worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
        }
        assert!(worst <= 1e-9, "{worst}");

        let dep = KrausChannel::depolarizing(0.75).unwrap();
        let out = dilate(&dep).reduced(&z(true)).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[1.0 - 0.75 / 2.0, 0.75 / 2.0]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn reduced_dynamics_examples() {
        let ancilla = z(true);
        let id = reduced_dynamics(&ComplexMatrix::identity(4), &ancilla).unwrap();
        let rho = random_mixed_state(2, &mut SplitMix64::new(2));
        assert!(
            id.evaluate(&rho)
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix())
                < 1e-14
        );

        let sw = reduced_dynamics(&swap(), &ancilla).unwrap();
        assert!(
            sw.evaluate(&rho)
                .unwrap()
                .matrix()
                .max_abs_diff(ancilla.matrix())
                < 1e-14
        );

        let bad = ComplexMatrix::from_diagonal(&[1.0, 1.0, 1.0, 0.5]);
        assert!(matches!(
            reduced_dynamics(&bad, &ancilla),
            Err(QfError::NotUnitary { .. })
        ));
        let odd = ComplexMatrix::identity(3);
        assert!(matches!(
            reduced_dynamics(&odd, &ancilla),
            Err(QfError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn linearity_of_identity_is_exact() {
        let r = check_linearity(&DynamicsMap::identity(), 3, 20, 0).unwrap();
        assert_eq!(r.verdict, LinearityVerdict::Linear);
        assert!(r.max_deviation < 1e-15);
    }

    #[test]
    fn linearity_of_kraus_and_normalizer() {
        let ch = DynamicsMap::from_channel("dep", KrausChannel::depolarizing(0.4).unwrap());
        let r = check_linearity(&ch, 2, 100, 0).unwrap();
        assert_eq!(r.verdict, LinearityVerdict::Linear);
        assert!(r.max_deviation <= 1e-10);

        let r = check_linearity(&DynamicsMap::purity_normalizer(), 2, 100, 0).unwrap();
        assert_eq!(r.verdict, LinearityVerdict::Nonlinear);
        assert!(r.max_deviation > 0.01, "{}", r.max_deviation);
    }

    #[test]
    fn normalizer_ties_on_orthogonal_pair() {
        // ½|z+⟩⟨z+| + ½|z−⟩⟨z−| = I/2 is a fixed point, as are the members
        let map = DynamicsMap::purity_normalizer();
        let out = map.evaluate(&DensityOperator::maximally_mixed(2)).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                < 1e-15
        );
    }

    #[test]
    fn linearity_is_seed_deterministic() {
        let map = DynamicsMap::purity_normalizer();
        let a = check_linearity(&map, 3, 10, 42).unwrap();
        let b = check_linearity(&map, 3, 10, 42).unwrap();
        assert_eq!(a.max_deviation.to_bits(), b.max_deviation.to_bits());
        let c = check_linearity(&map, 3, 10, 43).unwrap();
        assert_ne!(a.max_deviation.to_bits(), c.max_deviation.to_bits());
        assert!(check_linearity(&map, 3, 0, 42).is_err());
    }

    #[test]
    fn signaling_examples() {
        let (zs, xs) = maximally_mixed_z_x_pair();
        let ch = DynamicsMap::from_channel("amp", KrausChannel::amplitude_damping(0.3).unwrap());
        let r = signaling_test(&ch, &zs, &xs).unwrap();
        assert!(r.distance <= 1e-10);
        assert_eq!(r.verdict, SignalingVerdict::NoSignaling);

        let r = signaling_test(&DynamicsMap::purity_normalizer(), &zs, &xs).unwrap();
        assert!(r.distance <= 1e-12);

        let (a, b) = nonlinear_witness_pair().unwrap();
        let r = signaling_test(&DynamicsMap::identity(), &a, &b).unwrap();
        assert!(r.distance <= 1e-12);
        // normalizer sends diag(2/3,1/3) to diag(0.8,0.2), so the second
        // average becomes diag(0.6, 0.4): trace distance 0.1
        let r = signaling_test(&DynamicsMap::purity_normalizer(), &a, &b).unwrap();
        assert!((r.distance - 0.1).abs() < 1e-12, "{}", r.distance);
        assert_eq!(r.verdict, SignalingVerdict::Signaling);
    }

    #[test]
    fn signaling_requires_equal_averages() {
        let a = Ensemble::new(vec![(1.0, z(true))]).unwrap();
        let b = Ensemble::new(vec![(1.0, z(false))]).unwrap();
        assert!(matches!(
            signaling_test(&DynamicsMap::identity(), &a, &b),
            Err(QfError::EnsemblesDistinguishable { .. })
        ));
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        assert!((trace_distance(z(true).matrix(), z(false).matrix()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_channel_is_trace_preserving() {
        let mut rng = SplitMix64::new(23);
        for d in 2..=4 {
            let ch = KrausChannel::random(d, 3, &mut rng);
            assert!(ch.completeness_deviation() < 1e-12);
        }
    }
}
