//! Three spin-½ particles in `(|z+z+z+⟩ − |z−z−z−⟩)/√2`.
//!
//! The pairwise products `σy⁽ʲ⁾σy⁽ᵏ⁾` commute, so their joint outcomes can be
//! read from products of spectral projectors. Each `σx⁽ⁱ⁾` commutes with the
//! product on the other two particles, which makes every conditional in the
//! chains a ratio of two commuting-projector probabilities.

use std::fmt;

use crate::born::{born_probability, measure_distribution, Observable, ProbabilityMeasure};
use crate::error::{QfError, Result};
use crate::linalg::{kron_all, ComplexMatrix, ComplexVector};
use crate::standard::{embed_qubit_op, pauli_x, pauli_y};
use crate::state::DensityOperator;

use super::NULL_EVENT;

pub fn ghz_state() -> DensityOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = [0.0; 8];
    amplitudes[0] = h;
    amplitudes[7] = -h;
    DensityOperator::from_vector(&ComplexVector::from_real(&amplitudes).unwrap()).unwrap()
}

/// Particle pairs in the order the products are listed: (1,2), (1,3), (2,3),
/// zero-based.
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Sign patterns of `(σy¹σy², σy¹σy³, σy²σy³)` defining the events S₁..S₄.
pub const GHZ_EVENTS: [[i8; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

fn pair_observable(j: usize, k: usize) -> Result<Observable> {
    let y = pauli_y();
    Observable::new(embed_qubit_op(&y, j, 3).matmul(&embed_qubit_op(&y, k, 3))?)
}

fn spectral_projector(obs: &Observable, value: i8) -> Result<ComplexMatrix> {
    obs.projector_for(f64::from(value))
        .cloned()
        .ok_or_else(|| QfError::InvalidConfig(format!("eigenvalue {value} absent")))
}

fn pair_projector(pair: usize, value: i8) -> Result<ComplexMatrix> {
    let (j, k) = PAIRS[pair];
    spectral_projector(&pair_observable(j, k)?, value)
}

fn joint_pair_projector(signs: [i8; 3]) -> Result<ComplexMatrix> {
    let mut p = pair_projector(0, signs[0])?;
    for (pair, &s) in signs.iter().enumerate().skip(1) {
        p = p.matmul(&pair_projector(pair, s)?)?;
    }
    Ok(p)
}

/// Joint distribution of the three pairwise `σy·σy` products over all eight
/// sign patterns, in the order `(+,+,+), (+,+,−), …, (−,−,−)`.
pub fn ghz_joint_products() -> Result<Vec<([i8; 3], f64)>> {
    let rho = ghz_state();
    let mut out = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let signs = [0, 1, 2].map(|b| if bits >> (2 - b) & 1 == 0 { 1i8 } else { -1 });
        out.push((
            signs,
            born_probability(&rho, &joint_pair_projector(signs)?)?,
        ));
    }
    Ok(out)
}

/// `P[S₁], …, P[S₄]`.
pub fn ghz_event_probabilities() -> Result<[f64; 4]> {
    let joint = ghz_joint_products()?;
    let mut out = [0.0; 4];
    for (slot, event) in out.iter_mut().zip(GHZ_EVENTS) {
        *slot = joint
            .iter()
            .find(|(s, _)| *s == event)
            .map(|&(_, p)| p)
            .expect("every event is one of the eight patterns");
    }
    Ok(out)
}

/// One link of an implication chain:
/// `P(σx⁽ⁱ⁾ = v | σy⁽ʲ⁾σy⁽ᵏ⁾ = v)`, indices zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConditional {
    /// Index into [`GHZ_EVENTS`].
    pub event: usize,
    pub particle: usize,
    pub value: i8,
    pub pair: (usize, usize),
    pub pair_value: i8,
    pub probability: f64,
}

impl fmt::Display for ChainConditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: i8| if v > 0 { "+1" } else { "-1" };
        write!(
            f,
            "S{}: P(x{}={} | y{}y{}={})",
            self.event + 1,
            self.particle + 1,
            sign(self.value),
            self.pair.0 + 1,
            self.pair.1 + 1,
            sign(self.pair_value)
        )
    }
}

/// `tr(ρ A B) / tr(ρ B)` for commuting projectors `A`, `B`.
fn conditional(
    rho: &DensityOperator,
    target: &ComplexMatrix,
    given: &ComplexMatrix,
) -> Result<f64> {
    let marginal = born_probability(rho, given)?;
    if marginal < NULL_EVENT {
        return Err(QfError::NullConditioningEvent {
            probability: marginal,
        });
    }
    let joint = born_probability(rho, &target.matmul(given)?)?;
    Ok(joint / marginal)
}

/// The twelve conditionals of the four chains. For event `S` with products
/// `(s₁₂, s₁₃, s₂₃)` the chain reads
/// `σx¹ = s₂₃ | σy²σy³ = s₂₃`, `σx² = s₁₃ | σy¹σy³ = s₁₃`,
/// `σx³ = s₁₂ | σy¹σy² = s₁₂`.
pub fn ghz_conditional_table() -> Result<Vec<ChainConditional>> {
    let rho = ghz_state();
    let x = pauli_x();
    let mut table = Vec::with_capacity(12);
    for (event, signs) in GHZ_EVENTS.iter().enumerate() {
        for particle in 0..3 {
            // the pair not containing `particle`
            let pair_index = 2 - particle;
            let pair = PAIRS[pair_index];
            let value = signs[pair_index];
            let target =
                spectral_projector(&Observable::new(embed_qubit_op(&x, particle, 3))?, value)?;
            let given = pair_projector(pair_index, value)?;
            table.push(ChainConditional {
                event,
                particle,
                value,
                pair,
                pair_value: value,
                probability: conditional(&rho, &target, &given)?,
            });
        }
    }
    Ok(table)
}

/// Distribution of `σx ⊗ σx ⊗ σx`.
pub fn xxx_distribution() -> Result<ProbabilityMeasure> {
    let x = pauli_x();
    measure_distribution(&ghz_state(), &Observable::new(kron_all(&[&x, &x, &x]))?)
}

/// Pre-assigned ±1 values for `σx` and `σy` on each of the three particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LhvAssignment {
    pub x: [i8; 3],
    pub y: [i8; 3],
}

impl LhvAssignment {
    /// Decodes `index` in `0..64`: bits 5..3 give `x₁ x₂ x₃`, bits 2..0 give
    /// `y₁ y₂ y₃`, a set bit meaning −1.
    pub fn from_index(index: u8) -> Self {
        assert!(index < 64);
        let sign = |bit: u8| if index >> bit & 1 == 1 { -1 } else { 1 };
        Self {
            x: [sign(5), sign(4), sign(3)],
            y: [sign(2), sign(1), sign(0)],
        }
    }

    /// Element-of-reality constraints from the chains:
    /// `x_i = y_j · y_k` for each particle `i` with `{j, k}` the other two.
    pub fn satisfies_chains(&self) -> bool {
        (0..3).all(|i| {
            let (j, k) = PAIRS[2 - i];
            self.x[i] == self.y[j] * self.y[k]
        })
    }

    pub fn x_product(&self) -> i8 {
        self.x.iter().product()
    }

    /// The quantum certainty `σx¹σx²σx³ = −1`.
    pub fn satisfies_quantum(&self) -> bool {
        self.x_product() == -1
    }
}

impl fmt::Display for LhvAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: i8| if v > 0 { '+' } else { '-' };
        write!(
            f,
            "x=({}{}{}) y=({}{}{})",
            s(self.x[0]),
            s(self.x[1]),
            s(self.x[2]),
            s(self.y[0]),
            s(self.y[1]),
            s(self.y[2])
        )
    }
}

#[derive(Debug, Clone)]
pub struct LhvSearch {
    /// Assignments meeting the chain constraints and the quantum constraint.
    pub satisfying: usize,
    pub total: usize,
    /// Assignments meeting the chain constraints alone.
    pub chain_only: usize,
    /// `σx` product of every chain-only survivor.
    pub chain_only_products: Vec<i8>,
    /// Assignments meeting the quantum constraint alone.
    pub quantum_only: usize,
    pub log: Vec<String>,
}

/// Exhaustive search over all 64 deterministic assignments.
pub fn lhv_search() -> LhvSearch {
    let all: Vec<LhvAssignment> = (0..64).map(LhvAssignment::from_index).collect();
    let chain: Vec<&LhvAssignment> = all.iter().filter(|a| a.satisfies_chains()).collect();
    let satisfying = chain.iter().filter(|a| a.satisfies_quantum()).count();
    let quantum_only = all.iter().filter(|a| a.satisfies_quantum()).count();

    let mut log = vec![format!(
        "{} assignments; chain + quantum constraints: {satisfying} satisfy",
        all.len()
    )];
    log.push(format!("chain constraints only: {} survive", chain.len()));
    for a in &chain {
        log.push(format!("  {a} -> x1*x2*x3 = {:+}", a.x_product()));
    }
    log.push(format!("quantum constraint only: {quantum_only} survive"));

    LhvSearch {
        satisfying,
        total: all.len(),
        chain_only: chain.len(),
        chain_only_products: chain.iter().map(|a| a.x_product()).collect(),
        quantum_only,
        log,
    }
}

#[derive(Debug, Clone)]
pub struct GhzReport {
    pub event_set_probs: [f64; 4],
    /// Total probability of the four odd sign patterns.
    pub odd_pattern_probability: f64,
    pub conditional_table: Vec<ChainConditional>,
    pub xxx_distribution: ProbabilityMeasure,
    pub lhv: LhvSearch,
}

pub fn run_ghz() -> Result<GhzReport> {
    let joint = ghz_joint_products()?;
    let odd_pattern_probability = joint
        .iter()
        .filter(|(s, _)| s.iter().product::<i8>() < 0)
        .map(|(_, p)| p)
        .sum();
    Ok(GhzReport {
        event_set_probs: ghz_event_probabilities()?,
        odd_pattern_probability,
        conditional_table: ghz_conditional_table()?,
        xxx_distribution: xxx_distribution()?,
        lhv: lhv_search(),
    })
}
