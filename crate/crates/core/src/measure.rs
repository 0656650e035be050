//! Expectation values, uncertainties, projective measurement with collapse,
//! and mixed states.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::gates::Observable;
use crate::linalg::{self, HermitianEigen, Matrix, ZERO};
use crate::rng::Rng;
use crate::statevec::StateVector;
use crate::{Error, Result};

/// Eigenvalues closer than this are merged into one outcome.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
/// Tolerance on `Tr ρ = 1` and on `Σ p_k = 1`.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Smallest eigenvalue accepted for a density matrix.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

fn check_dims(state: &StateVector, a: &Observable) -> Result<()> {
    if state.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: state.dim(),
        });
    }
    Ok(())
}

fn as_vector(state: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

fn apply(a: &Observable, state: &StateVector) -> DVector<Complex64> {
    a.matrix() * as_vector(state)
}

/// `⟨ψ|A|ψ⟩` (real for Hermitian `A`).
pub fn expectation(state: &StateVector, a: &Observable) -> Result<f64> {
    check_dims(state, a)?;
    let value = as_vector(state).dotc(&apply(a, state));
    debug_assert!(
        value.im.abs() < 1e-10,
        "⟨A⟩ has imaginary part {}",
        value.im
    );
    Ok(value.re)
}

/// `ΔA = √⟨(A − ⟨A⟩)²⟩`, evaluated as `‖(A − ⟨A⟩)ψ‖`.
pub fn uncertainty(state: &StateVector, a: &Observable) -> Result<f64> {
    check_dims(state, a)?;
    let psi = as_vector(state);
    let a_psi = a.matrix() * &psi;
    let mean = psi.dotc(&a_psi).re;
    Ok((a_psi - psi * Complex64::from(mean)).norm())
}

/// Both sides of `ΔA·ΔB ≥ ½|⟨[A, B]⟩|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyBound {
    /// `ΔA·ΔB`.
    pub lhs: f64,
    /// `½|⟨AB − BA⟩|`.
    pub rhs: f64,
}

impl UncertaintyBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs >= self.rhs - tol
    }
}

pub fn uncertainty_bound(
    state: &StateVector,
    a: &Observable,
    b: &Observable,
) -> Result<UncertaintyBound> {
    check_dims(state, a)?;
    check_dims(state, b)?;
    let psi = as_vector(state);
    let a_psi = a.matrix() * &psi;
    let b_psi = b.matrix() * &psi;
    let mean_a = psi.dotc(&a_psi).re;
    let mean_b = psi.dotc(&b_psi).re;
    let da = (&a_psi - &psi * Complex64::from(mean_a)).norm();
    let db = (&b_psi - &psi * Complex64::from(mean_b)).norm();
    // ⟨AB⟩ − ⟨BA⟩ = ⟨Aψ|Bψ⟩ − conj(⟨Aψ|Bψ⟩) = 2i·Im⟨Aψ|Bψ⟩.
    let rhs = a_psi.dotc(&b_psi).im.abs();
    Ok(UncertaintyBound { lhs: da * db, rhs })
}

/// One distinct eigenvalue and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    /// `dim × multiplicity`, orthonormal columns.
    pub basis: Matrix,
}

impl Eigenspace {
    /// `P_a = Σ |a_k⟩⟨a_k|`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// Spectral decomposition of an observable with degenerate eigenvalues
/// merged (tolerance [`DEGENERACY_TOLERANCE`]), eigenvalues ascending.
pub fn spectral_decomposition(a: &Observable) -> Vec<Eigenspace> {
    let HermitianEigen { values, vectors } = a.eigen();
    let mut spaces = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[start] <= DEGENERACY_TOLERANCE {
            end += 1;
        }
        let eigenvalue = values[start..end].iter().sum::<f64>() / (end - start) as f64;
        spaces.push(Eigenspace {
            eigenvalue,
            basis: vectors.columns(start, end - start).into_owned(),
        });
        start = end;
    }
    spaces
}

/// Result of one projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub eigenvalue: f64,
    /// `‖P_a ψ‖²` for the observed eigenvalue.
    pub probability: f64,
    /// `P_a ψ / ‖P_a ψ‖`.
    pub post_state: StateVector,
}

/// A projective measurement with its eigenspaces precomputed, for repeated
/// sampling.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    dim: usize,
    spaces: Vec<Eigenspace>,
}

impl ProjectiveMeasurement {
    pub fn new(a: &Observable) -> Self {
        ProjectiveMeasurement {
            dim: a.dim(),
            spaces: spectral_decomposition(a),
        }
    }

    pub fn eigenspaces(&self) -> &[Eigenspace] {
        &self.spaces
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(())
    }

    /// `(eigenvalue, ‖P_a ψ‖²)` for every distinct eigenvalue.
    pub fn distribution(&self, state: &StateVector) -> Result<Vec<(f64, f64)>> {
        self.check(state)?;
        let psi = as_vector(state);
        Ok(self
            .spaces
            .iter()
            .map(|s| (s.eigenvalue, (s.basis.adjoint() * &psi).norm_squared()))
            .collect())
    }

    /// Collapses `state` onto eigenspace `k`; `None` if the overlap is zero.
    pub fn project(&self, state: &StateVector, k: usize) -> Result<Option<MeasurementOutcome>> {
        self.check(state)?;
        let space = &self.spaces[k];
        let coords = space.basis.adjoint() * as_vector(state);
        let probability = coords.norm_squared();
        if probability == 0.0 {
            return Ok(None);
        }
        let projected = &space.basis * coords / Complex64::from(libm::sqrt(probability));
        let post_state =
            StateVector::from_raw_unchecked(state.n_qubits(), projected.iter().copied().collect());
        Ok(Some(MeasurementOutcome {
            eigenvalue: space.eigenvalue,
            probability,
            post_state,
        }))
    }

    /// Samples an eigenvalue by the Born rule and collapses the state.
    pub fn sample(&self, state: &StateVector, rng: &mut Rng) -> Result<MeasurementOutcome> {
        let dist = self.distribution(state)?;
        let total: f64 = dist.iter().map(|(_, p)| p).sum();
        let u = rng.uniform() * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (k, (_, p)) in dist.iter().enumerate() {
            if *p <= 0.0 {
                continue;
            }
            chosen = Some(k);
            acc += p;
            if u < acc {
                break;
            }
        }
        let k = chosen.ok_or(Error::NotNormalized { norm: 0.0 })?;
        Ok(self
            .project(state, k)?
            .expect("sampled outcome has non-zero weight"))
    }
}

/// Measures `a` on `state`, sampling with `rng`.
pub fn measure_projective(
    state: &StateVector,
    a: &Observable,
    rng: &mut Rng,
) -> Result<MeasurementOutcome> {
    check_dims(state, a)?;
    ProjectiveMeasurement::new(a).sample(state, rng)
}

/// Measures a single-qubit observable on `target` (identity elsewhere).
pub fn measure_qubit(
    state: &StateVector,
    single: &Observable,
    target: usize,
    rng: &mut Rng,
) -> Result<MeasurementOutcome> {
    let full = single.on_qubit(target, state.n_qubits())?;
    measure_projective(state, &full, rng)
}

/// Marginal probabilities of the listed qubits in the computational basis.
/// Outcome index bit order follows `qubits` (first entry most significant).
pub fn marginal_probabilities(state: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    for (k, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, bound: n });
        }
        if qubits[..k].contains(&q) {
            return Err(Error::invalid(alloc::format!("qubit {q} listed twice")));
        }
    }
    let mut marginal = vec![0.0; 1 << qubits.len()];
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let outcome = qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1));
        marginal[outcome] += amp.norm_sqr();
    }
    Ok(marginal)
}

/// Draws `shots` independent computational-basis outcomes of `qubits`.
pub fn sample_computational(
    state: &StateVector,
    qubits: &[usize],
    shots: usize,
    rng: &mut Rng,
) -> Result<Vec<usize>> {
    let marginal = marginal_probabilities(state, qubits)?;
    let mut cumulative = Vec::with_capacity(marginal.len());
    let mut acc = 0.0;
    for p in &marginal {
        acc += p;
        cumulative.push(acc);
    }
    let last_nonzero = marginal.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    Ok((0..shots)
        .map(|_| {
            let u = rng.uniform() * acc;
            // First outcome whose cumulative weight exceeds u; it always has
            // non-zero weight unless u rounds up to the total.
            cumulative.partition_point(|&c| c <= u).min(last_nonzero)
        })
        .collect())
}

/// Mixed state `ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        linalg::qubits_for_dim(matrix.nrows()).ok_or(Error::NotPowerOfTwo(matrix.nrows()))?;
        let deviation = linalg::hermitian_deviation(&matrix);
        if deviation > 1e-12 || deviation.is_nan() {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidProbabilities { total: tr });
        }
        let min = HermitianEigen::new(&matrix).values[0];
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::invalid(alloc::format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        DensityMatrix { matrix }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let psi = as_vector(state);
        DensityMatrix {
            matrix: &psi * psi.adjoint(),
        }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        DensityMatrix {
            matrix: linalg::identity(dim) / Complex64::from(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianEigen::new(&self.matrix).values
    }

    pub fn eigen(&self) -> HermitianEigen {
        HermitianEigen::new(&self.matrix)
    }
}

/// Builds `ρ` from an ensemble of pure states and probabilities.
pub fn density_from_ensemble(members: &[(f64, StateVector)]) -> Result<DensityMatrix> {
    let first = members
        .first()
        .ok_or_else(|| Error::invalid("ensemble must not be empty"))?;
    let dim = first.1.dim();
    let mut total = 0.0;
    for (p, state) in members {
        if !(*p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidProbabilities { total: *p });
        }
        if state.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: state.dim(),
            });
        }
        total += p;
    }
    if (total - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::InvalidProbabilities { total });
    }
    let mut rho = Matrix::zeros(dim, dim);
    for (p, state) in members {
        let psi = as_vector(state);
        rho += (&psi * psi.adjoint()) * Complex64::from(*p);
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}

fn check_rho(rho: &DensityMatrix, a: &Observable) -> Result<()> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `Re Tr(ρA)`.
pub fn expectation_density(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    check_rho(rho, a)?;
    let (r, m) = (rho.matrix(), a.matrix());
    let dim = rho.dim();
    let mut acc = ZERO;
    for i in 0..dim {
        for j in 0..dim {
            acc += r[(i, j)] * m[(j, i)];
        }
    }
    Ok(acc.re)
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // ρ Hermitian ⇒ Tr(ρ²) = Σ_ij |ρ_ij|².
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// Damps every off-diagonal entry by `1 − λ`; the diagonal is untouched.
pub fn dephase(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::invalid(alloc::format!(
            "dephasing strength {lambda} outside [0, 1]"
        )));
    }
    let keep = Complex64::from(1.0 - lambda);
    let mut m = rho.matrix().clone();
    let dim = m.nrows();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                m[(i, j)] *= keep;
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// `λ = 1 − exp(−t/T₂)` for elapsed time `t` and coherence time `T₂`.
pub fn dephasing_strength(elapsed: f64, coherence_time: f64) -> Result<f64> {
    if !(coherence_time > 0.0) || !(elapsed >= 0.0) {
        return Err(Error::invalid(
            "coherence time must be positive and elapsed time non-negative",
        ));
    }
    Ok(1.0 - libm::exp(-elapsed / coherence_time))
}

/// Reduced state on the qubits in `keep` (output ordered by ascending qubit).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(Error::invalid("partial trace must keep at least one qubit"));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::invalid(alloc::format!(
                "qubit {} listed twice",
                w[0]
            )));
        }
    }
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: q, bound: n });
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let place = |bits: usize, qubits: &[usize]| -> usize {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .map(|(pos, &q)| ((bits >> (k - 1 - pos)) & 1) << (n - 1 - q))
            .sum()
    };
    let kept_dim = 1usize << kept.len();
    let traced_dim = 1usize << traced.len();
    let kept_index: Vec<usize> = (0..kept_dim).map(|b| place(b, &kept)).collect();
    let traced_index: Vec<usize> = (0..traced_dim).map(|b| place(b, &traced)).collect();
    let m = rho.matrix();
    let mut out = Matrix::zeros(kept_dim, kept_dim);
    for (a, &ia) in kept_index.iter().enumerate() {
        for (b, &ib) in kept_index.iter().enumerate() {
            out[(a, b)] = traced_index.iter().map(|&t| m[(ia | t, ib | t)]).sum();
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Pauli;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap()
    }

    fn zero() -> StateVector {
        StateVector::basis(1, 0).unwrap()
    }

    fn one() -> StateVector {
        StateVector::basis(1, 1).unwrap()
    }

    fn sx() -> Observable {
        Observable::pauli(Pauli::X)
    }
    fn sy() -> Observable {
        Observable::pauli(Pauli::Y)
    }
    fn sz() -> Observable {
        Observable::pauli(Pauli::Z)
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(&zero(), &sz()).unwrap(), 1.0);
        assert_eq!(expectation(&zero(), &sx()).unwrap(), 0.0);
        assert!((expectation(&plus(), &sx()).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation(&StateVector::zero(2), &sx()).is_err());
    }

    #[test]
    fn uncertainty_examples() {
        assert_eq!(uncertainty(&zero(), &sz()).unwrap(), 0.0);
        assert!((uncertainty(&zero(), &sx()).unwrap() - 1.0).abs() < 1e-15);
        assert!((uncertainty(&plus(), &sz()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uncertainty_bound_examples() {
        let b = uncertainty_bound(&zero(), &sx(), &sy()).unwrap();
        assert!((b.lhs - 1.0).abs() < 1e-12 && (b.rhs - 1.0).abs() < 1e-12);
        let b = uncertainty_bound(&zero(), &sz(), &sz()).unwrap();
        assert_eq!((b.lhs, b.rhs), (0.0, 0.0));
    }

    #[test]
    fn projective_examples() {
        let m = ProjectiveMeasurement::new(&sz());
        let dist = m.distribution(&plus()).unwrap();
        assert_eq!(dist.len(), 2);
        assert!((dist[0].0 + 1.0).abs() < 1e-15 && (dist[0].1 - 0.5).abs() < 1e-15);
        assert!((dist[1].0 - 1.0).abs() < 1e-15 && (dist[1].1 - 0.5).abs() < 1e-15);

        let mut rng = Rng::new(1);
        let out = measure_projective(&zero(), &sz(), &mut rng).unwrap();
        assert!((out.eigenvalue - 1.0).abs() < 1e-15);
        assert!((out.probability - 1.0).abs() < 1e-15);
        assert!(out.post_state.max_abs_diff(&zero()) < 1e-15);
    }

    #[test]
    fn collapse_is_idempotent() {
        let mut rng = Rng::new(5);
        let a = Observable::spin(crate::gates::Axis::normalized(1., 2., -1.).unwrap());
        let m = ProjectiveMeasurement::new(&a);
        for _ in 0..20 {
            let psi = StateVector::haar_random(1, &mut rng);
            let first = m.sample(&psi, &mut rng).unwrap();
            let again = m.distribution(&first.post_state).unwrap();
            let p_same = again
                .iter()
                .find(|(e, _)| (e - first.eigenvalue).abs() < 1e-9)
                .unwrap()
                .1;
            assert!((p_same - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_eigenvalues_merge() {
        // σ_z ⊗ I has eigenvalues −1, −1, +1, +1.
        let zi = sz().on_qubit(0, 2).unwrap();
        let spaces = spectral_decomposition(&zi);
        assert_eq!(spaces.len(), 2);
        assert_eq!(spaces[0].multiplicity(), 2);
        let sum = spaces[0].projector() + spaces[1].projector();
        assert!(linalg::max_abs_diff(&sum, &linalg::identity(4)) < 1e-10);
    }

    #[test]
    fn ensemble_examples() {
        let rho = density_from_ensemble(&[(1.0, zero())]).unwrap();
        assert_eq!(
            rho.matrix(),
            &linalg::from_rows(2, &[c(1.), c(0.), c(0.), c(0.)])
        );
        let mixed = density_from_ensemble(&[(0.5, zero()), (0.5, one())]).unwrap();
        assert_eq!(mixed, DensityMatrix::maximally_mixed(1));
        let p = density_from_ensemble(&[(1.0, plus())]).unwrap();
        assert!(p.matrix().iter().all(|z| (z - c(0.5)).norm() < 1e-15));

        assert!(density_from_ensemble(&[(0.7, zero()), (0.7, one())]).is_err());
        assert!(density_from_ensemble(&[(-0.5, zero()), (1.5, one())]).is_err());
        assert!(density_from_ensemble(&[]).is_err());
    }

    #[test]
    fn density_expectation_and_purity() {
        let mixed = DensityMatrix::maximally_mixed(1);
        assert_eq!(expectation_density(&mixed, &sz()).unwrap(), 0.0);
        assert_eq!(
            expectation_density(&DensityMatrix::pure(&zero()), &sz()).unwrap(),
            1.0
        );
        assert_eq!(purity(&DensityMatrix::pure(&zero())), 1.0);
        assert_eq!(purity(&mixed), 0.5);
        assert_eq!(purity(&DensityMatrix::maximally_mixed(2)), 0.25);
    }

    #[test]
    fn dephase_examples() {
        let rho = DensityMatrix::pure(&plus());
        assert_eq!(dephase(&rho, 0.0).unwrap(), rho);
        let full = dephase(&rho, 1.0).unwrap();
        assert!(
            linalg::max_abs_diff(full.matrix(), DensityMatrix::maximally_mixed(1).matrix()) < 1e-15
        );
        let half = dephase(&rho, 0.5).unwrap();
        let expected = linalg::from_rows(2, &[c(0.5), c(0.25), c(0.25), c(0.5)]);
        assert!(linalg::max_abs_diff(half.matrix(), &expected) < 1e-15);
        assert!(dephase(&rho, 1.5).is_err());
        assert!(dephase(&rho, -0.1).is_err());
        assert!(DensityMatrix::new(half.matrix().clone()).is_ok());
    }

    #[test]
    fn dephasing_strength_from_coherence_time() {
        assert_eq!(dephasing_strength(0.0, 1.0).unwrap(), 0.0);
        assert!((dephasing_strength(2.0, 2.0).unwrap() - (1.0 - libm::exp(-1.0))).abs() < 1e-15);
        assert!(dephasing_strength(1.0, 0.0).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let product = DensityMatrix::pure(&zero().tensor(&one()));
        let reduced = partial_trace(&product, &[0]).unwrap();
        assert_eq!(reduced, DensityMatrix::pure(&zero()));
        let reduced = partial_trace(&product, &[1]).unwrap();
        assert_eq!(reduced, DensityMatrix::pure(&one()));
        assert_eq!(partial_trace(&product, &[0, 1]).unwrap(), product);
        assert!(partial_trace(&product, &[]).is_err());
        assert!(partial_trace(&product, &[2]).is_err());
        assert!(partial_trace(&product, &[1, 1]).is_err());
    }

    #[test]
    fn density_validation() {
        let bad_trace = linalg::from_rows(2, &[c(1.), c(0.), c(0.), c(1.)]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidProbabilities { .. })
        ));
        let negative = linalg::from_rows(2, &[c(1.5), c(0.), c(0.), c(-0.5)]);
        assert!(DensityMatrix::new(negative).is_err());
    }

    #[test]
    fn computational_sampling_respects_support() {
        let bell =
            StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.), c(0.), c(FRAC_1_SQRT_2)])
                .unwrap();
        let mut rng = Rng::new(3);
        let shots = sample_computational(&bell, &[0, 1], 2000, &mut rng).unwrap();
        assert!(shots.iter().all(|&s| s == 0 || s == 3));
        let ones = shots.iter().filter(|&&s| s == 3).count();
        assert!(ones > 900 && ones < 1100);
        let marginal = marginal_probabilities(&bell, &[1]).unwrap();
        assert!((marginal[0] - 0.5).abs() < 1e-15);
        assert!(marginal_probabilities(&bell, &[0, 0]).is_err());
    }
}
