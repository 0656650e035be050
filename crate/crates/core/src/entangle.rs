//! Entangled states, Schmidt-rank detection, the singlet EPR experiment and
//! the no-cloning witness.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::gates::{Axis, Observable};
use crate::linalg::{self, Matrix};
use crate::measure::{self, ProjectiveMeasurement};
use crate::rng::Rng;
use crate::statevec::{inner, StateVector};
use crate::{Error, Result};

/// Default singular-value cutoff for [`schmidt_rank`].
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

/// Split of a register into two non-empty complementary sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: &[usize], n_qubits: usize) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != side_a.len() {
            return Err(Error::invalid("bipartition lists a qubit twice"));
        }
        if let Some(&q) = a.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::IndexOutOfRange {
                index: q,
                bound: n_qubits,
            });
        }
        let b: Vec<usize> = (0..n_qubits).filter(|q| !a.contains(q)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::invalid(
                "both sides of a bipartition must be non-empty",
            ));
        }
        Ok(Bipartition {
            n_qubits,
            side_a: a,
            side_b: b,
        })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// `(|01⟩ − |10⟩)/√2`, the total-spin-zero state.
pub fn singlet() -> StateVector {
    let r = FRAC_1_SQRT_2;
    StateVector::from_raw_unchecked(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(-r, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// Uniform-magnitude state `2^{−n/2} Σ_i e^{iφ_i}|i⟩` with `φ_0 = 0` and
/// `phases = [φ_1, …, φ_{2^n−1}]`.
pub fn max_entangled(n_qubits: usize, phases: &[f64]) -> Result<StateVector> {
    let dim = 1usize << n_qubits;
    if phases.len() != dim - 1 {
        return Err(Error::DimensionMismatch {
            expected: dim - 1,
            found: phases.len(),
        });
    }
    let mag = 1.0 / libm::sqrt(dim as f64);
    let amps = core::iter::once(0.0)
        .chain(phases.iter().copied())
        .map(|phi| Complex64::from_polar(mag, phi))
        .collect();
    Ok(StateVector::from_raw_unchecked(n_qubits, amps))
}

/// The amplitudes reshaped to a `2^|A| × 2^|B|` matrix.
fn reshape(state: &StateVector, cut: &Bipartition) -> Result<Matrix> {
    if state.n_qubits() != cut.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: cut.n_qubits,
            found: state.n_qubits(),
        });
    }
    let n = cut.n_qubits;
    let gather = |index: usize, side: &[usize]| {
        side.iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
    };
    let mut m = Matrix::zeros(1 << cut.side_a.len(), 1 << cut.side_b.len());
    for (index, amp) in state.amplitudes().iter().enumerate() {
        m[(gather(index, &cut.side_a), gather(index, &cut.side_b))] = *amp;
    }
    Ok(m)
}

/// Schmidt coefficients across `cut`, descending.
pub fn schmidt_coefficients(state: &StateVector, cut: &Bipartition) -> Result<Vec<f64>> {
    Ok(linalg::singular_values(&reshape(state, cut)?))
}

/// Number of Schmidt coefficients above `tol`; 1 exactly for product states.
pub fn schmidt_rank(state: &StateVector, cut: &Bipartition, tol: f64) -> Result<usize> {
    Ok(schmidt_coefficients(state, cut)?
        .into_iter()
        .filter(|&s| s > tol)
        .count())
}

fn spin_in_xz(angle: f64) -> Observable {
    Observable::spin(Axis::in_xz_plane(angle))
}

/// `⟨(n̂_a·σ) ⊗ (n̂_b·σ)⟩` on the singlet, with both axes in the x–z plane at
/// the given angles from `ẑ`.
pub fn epr_correlation(angle_a: f64, angle_b: f64) -> f64 {
    let joint = linalg::kron(spin_in_xz(angle_a).matrix(), spin_in_xz(angle_b).matrix());
    let joint = Observable::new(joint).expect("tensor product of Hermitian matrices");
    measure::expectation(&singlet(), &joint).expect("4-dimensional")
}

/// Joint outcome probabilities indexed `[outcome_a][outcome_b]` with index 0
/// for `+1` and 1 for `−1`.
pub type JointDistribution = [[f64; 2]; 2];

fn outcome_index(eigenvalue: f64) -> usize {
    if eigenvalue > 0.0 {
        0
    } else {
        1
    }
}

fn sign_of(index: usize) -> f64 {
    if index == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Local projectors `P_±` for a spin measurement, `+1` first.
fn spin_projectors(angle: f64) -> [Matrix; 2] {
    let m = ProjectiveMeasurement::new(&spin_in_xz(angle));
    let mut out = [Matrix::zeros(2, 2), Matrix::zeros(2, 2)];
    for space in m.eigenspaces() {
        out[outcome_index(space.eigenvalue)] = space.projector();
    }
    out
}

/// `p(s, t) = ‖(P_s(a) ⊗ P_t(b)) ψ‖²` on the singlet.
pub fn epr_joint_distribution(angle_a: f64, angle_b: f64) -> JointDistribution {
    let pa = spin_projectors(angle_a);
    let pb = spin_projectors(angle_b);
    let psi = nalgebra::DVector::from_column_slice(singlet().amplitudes());
    let mut dist = [[0.0; 2]; 2];
    for (s, proj_a) in pa.iter().enumerate() {
        for (t, proj_b) in pb.iter().enumerate() {
            dist[s][t] = (linalg::kron(proj_a, proj_b) * &psi).norm_squared();
        }
    }
    dist
}

/// Which observer measures first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// Joint distribution when the two spins are measured one after the other
/// with collapse in between: `p(first) · p(second | collapsed state)`.
pub fn sequential_joint_distribution(
    angle_a: f64,
    angle_b: f64,
    first: Party,
) -> JointDistribution {
    let local_a = spin_in_xz(angle_a).on_qubit(0, 2).expect("2 qubits");
    let local_b = spin_in_xz(angle_b).on_qubit(1, 2).expect("2 qubits");
    let (m1, m2) = match first {
        Party::A => (
            ProjectiveMeasurement::new(&local_a),
            ProjectiveMeasurement::new(&local_b),
        ),
        Party::B => (
            ProjectiveMeasurement::new(&local_b),
            ProjectiveMeasurement::new(&local_a),
        ),
    };
    let psi = singlet();
    let mut dist = [[0.0; 2]; 2];
    for k1 in 0..m1.eigenspaces().len() {
        let Some(o1) = m1.project(&psi, k1).expect("dims") else {
            continue;
        };
        for (e2, p2) in m2.distribution(&o1.post_state).expect("dims") {
            let (i1, i2) = (outcome_index(o1.eigenvalue), outcome_index(e2));
            let (ia, ib) = match first {
                Party::A => (i1, i2),
                Party::B => (i2, i1),
            };
            dist[ia][ib] += o1.probability * p2;
        }
    }
    dist
}

/// Tallies of one EPR run at fixed angles.
#[derive(Debug, Clone, PartialEq)]
pub struct EprRecord {
    pub angle_a: f64,
    pub angle_b: f64,
    pub shots: u64,
    /// `counts[i][j]`: outcome index `i` for A and `j` for B (0 ↔ +1).
    pub counts: [[u64; 2]; 2],
}

impl EprRecord {
    pub fn n_pp(&self) -> u64 {
        self.counts[0][0]
    }
    pub fn n_pm(&self) -> u64 {
        self.counts[0][1]
    }
    pub fn n_mp(&self) -> u64 {
        self.counts[1][0]
    }
    pub fn n_mm(&self) -> u64 {
        self.counts[1][1]
    }

    /// Mean of `s_a · s_b` over the shots.
    pub fn empirical_correlation(&self) -> f64 {
        let same = (self.n_pp() + self.n_mm()) as f64;
        let diff = (self.n_pm() + self.n_mp()) as f64;
        (same - diff) / self.shots as f64
    }

    /// Fraction of shots in which B observed `+1`.
    pub fn marginal_b_plus(&self) -> f64 {
        (self.n_pp() + self.n_mp()) as f64 / self.shots as f64
    }

    /// Fraction of shots in which A observed `+1`.
    pub fn marginal_a_plus(&self) -> f64 {
        (self.n_pp() + self.n_pm()) as f64 / self.shots as f64
    }
}

/// One shot of the delayed-choice experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprShot {
    pub angle_a: f64,
    pub angle_b: f64,
    pub outcome_a: i8,
    pub outcome_b: i8,
}

/// Runs one shot per entry of `schedule_a`. Each shot prepares a fresh
/// singlet, then picks A's axis from the schedule, measures qubit 0 along it
/// (collapsing the pair) and finally measures qubit 1 along `angle_b`.
pub fn epr_shots(schedule_a: &[f64], angle_b: f64, rng: &mut Rng) -> Vec<EprShot> {
    let local_b =
        ProjectiveMeasurement::new(&spin_in_xz(angle_b).on_qubit(1, 2).expect("2 qubits"));
    let mut cached: Option<(f64, ProjectiveMeasurement)> = None;
    let mut shots = Vec::with_capacity(schedule_a.len());
    for &angle_a in schedule_a {
        let psi = singlet();
        let reuse = matches!(&cached, Some((a, _)) if a.to_bits() == angle_a.to_bits());
        if !reuse {
            let local_a = spin_in_xz(angle_a).on_qubit(0, 2).expect("2 qubits");
            cached = Some((angle_a, ProjectiveMeasurement::new(&local_a)));
        }
        let measure_a = &cached.as_ref().expect("just set").1;
        let first = measure_a.sample(&psi, rng).expect("dims");
        let second = local_b.sample(&first.post_state, rng).expect("dims");
        shots.push(EprShot {
            angle_a,
            angle_b,
            outcome_a: sign_of(outcome_index(first.eigenvalue)) as i8,
            outcome_b: sign_of(outcome_index(second.eigenvalue)) as i8,
        });
    }
    shots
}

/// `shots` repetitions at fixed angles, tallied.
pub fn epr_sample(angle_a: f64, angle_b: f64, shots: u64, rng: &mut Rng) -> Result<EprRecord> {
    if shots == 0 {
        return Err(Error::invalid("shot count must be positive"));
    }
    let schedule = vec![angle_a; shots as usize];
    let mut counts = [[0u64; 2]; 2];
    for shot in epr_shots(&schedule, angle_b, rng) {
        let i = usize::from(shot.outcome_a < 0);
        let j = usize::from(shot.outcome_b < 0);
        counts[i][j] += 1;
    }
    Ok(EprRecord {
        angle_a,
        angle_b,
        shots,
        counts,
    })
}

/// `1 − |⟨ψ⊗ψ|C(ψ)⟩|²` for the linear map `C: |0⟩ → |00⟩, |1⟩ → |11⟩`.
/// Zero only when `C` happens to copy `ψ`, i.e. for basis states.
pub fn no_cloning_witness(state: &StateVector) -> Result<f64> {
    if state.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.dim(),
        });
    }
    let (alpha, beta) = (state.amplitude(0), state.amplitude(1));
    let zero = Complex64::new(0.0, 0.0);
    let cloned = StateVector::from_raw_unchecked(2, vec![alpha, zero, zero, beta]);
    let copy = state.tensor(state);
    let overlap = inner(&copy, &cloned)?;
    Ok(1.0 - overlap.norm_sqr())
}
