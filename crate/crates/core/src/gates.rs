//! Unitary gates: Pauli algebra, axis–angle rotations, Hamiltonian
//! evolution, and in-place strided application to state vectors.
//!
//! Single-qubit gates are applied over amplitude pairs `(i, i + stride)`
//! with `stride = 2^(n−1−target)`; a `2^n × 2^n` operator is never built.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{self, HermitianEigen, Matrix, I, ONE, ZERO};
use crate::rng::Rng;
use crate::statevec::StateVector;
use crate::{Error, Result};

/// Construction tolerance on `U†U = I`.
pub const UNITARY_TOLERANCE: f64 = 1e-10;
/// Construction tolerance on `A = A†`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Haar-random probes added to the basis states by [`default_probes`].
pub const DEFAULT_RANDOM_PROBES: usize = 64;

#[cfg(feature = "parallel")]
const PARALLEL_MIN_DIM: usize = 1 << 14;

fn check_square_power_of_two(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    linalg::qubits_for_dim(m.nrows()).ok_or(Error::NotPowerOfTwo(m.nrows()))
}

/// Dense unitary on `dim = 2^k` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: Matrix,
}

impl Unitary {
    pub fn new(matrix: Matrix) -> Result<Self> {
        check_square_power_of_two(&matrix)?;
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = linalg::unitary_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        debug_assert!(linalg::unitary_deviation(&matrix) < 1e-8);
        Unitary { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Unitary {
            matrix: linalg::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dagger(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }
}

/// Hermitian operator representing a measurable quantity or a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: Matrix,
}

impl Observable {
    pub fn new(matrix: Matrix) -> Result<Self> {
        check_square_power_of_two(&matrix)?;
        let deviation = linalg::hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOLERANCE || deviation.is_nan() {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Observable { matrix })
    }

    pub fn pauli(which: Pauli) -> Self {
        Observable {
            matrix: which.matrix(),
        }
    }

    /// Spin component along `axis`: `n̂·σ`.
    pub fn spin(axis: Axis) -> Self {
        let m = Pauli::X.matrix() * Complex64::from(axis.nx)
            + Pauli::Y.matrix() * Complex64::from(axis.ny)
            + Pauli::Z.matrix() * Complex64::from(axis.nz);
        Observable { matrix: m }
    }

    /// Embeds a single-qubit observable at `target` of an `n_qubits` register
    /// (identity elsewhere).
    pub fn on_qubit(&self, target: usize, n_qubits: usize) -> Result<Observable> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        if target >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: target,
                bound: n_qubits,
            });
        }
        let left = linalg::identity(1 << target);
        let right = linalg::identity(1 << (n_qubits - 1 - target));
        let m = linalg::kron(&linalg::kron(&left, &self.matrix), &right);
        Ok(Observable { matrix: m })
    }

    pub fn zero(dim: usize) -> Self {
        Observable {
            matrix: Matrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn eigen(&self) -> HermitianEigen {
        HermitianEigen::new(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix {
        let entries = match self {
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        linalg::from_rows(2, &entries)
    }
}

/// The Pauli matrix `σ_which` as a gate.
pub fn pauli(which: Pauli) -> Unitary {
    Unitary {
        matrix: which.matrix(),
    }
}

/// Unit rotation axis `n̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
}

impl Axis {
    pub const X: Axis = Axis {
        nx: 1.0,
        ny: 0.0,
        nz: 0.0,
    };
    pub const Y: Axis = Axis {
        nx: 0.0,
        ny: 1.0,
        nz: 0.0,
    };
    pub const Z: Axis = Axis {
        nx: 0.0,
        ny: 0.0,
        nz: 1.0,
    };
    /// `(x̂ + ẑ)/√2`, the Hadamard axis.
    pub const XZ: Axis = Axis {
        nx: FRAC_1_SQRT_2,
        ny: 0.0,
        nz: FRAC_1_SQRT_2,
    };

    /// Accepts only vectors of unit length (to 1e-12).
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let len2 = nx * nx + ny * ny + nz * nz;
        if !len2.is_finite() || (len2 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(alloc::format!(
                "axis ({nx}, {ny}, {nz}) is not a unit vector"
            )));
        }
        Ok(Axis { nx, ny, nz })
    }

    /// Rescales any non-zero vector to unit length.
    pub fn normalized(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let len = libm::sqrt(nx * nx + ny * ny + nz * nz);
        if len == 0.0 || !len.is_finite() {
            return Err(Error::invalid("axis must be a non-zero finite vector"));
        }
        Ok(Axis {
            nx: nx / len,
            ny: ny / len,
            nz: nz / len,
        })
    }

    /// Axis in the x–z plane at `angle` from `ẑ` towards `x̂`.
    pub fn in_xz_plane(angle: f64) -> Self {
        Axis {
            nx: libm::sin(angle),
            ny: 0.0,
            nz: libm::cos(angle),
        }
    }
}

/// `U_θ = cos(θ/2) I + i sin(θ/2) n̂·σ`.
pub fn rotation_gate(axis: Axis, theta: f64) -> Unitary {
    let c = libm::cos(theta / 2.0);
    let s = libm::sin(theta / 2.0);
    // i·s·(n̂·σ) written out entrywise.
    let m00 = Complex64::new(c, s * axis.nz);
    let m11 = Complex64::new(c, -s * axis.nz);
    let m01 = Complex64::new(s * axis.ny, s * axis.nx);
    let m10 = Complex64::new(-s * axis.ny, s * axis.nx);
    Unitary {
        matrix: linalg::from_rows(2, &[m00, m01, m10, m11]),
    }
}

/// `exp(−i·h·t/ħ)` via the eigendecomposition of `h`.
pub fn evolve(h: &Observable, t: f64, hbar: f64) -> Result<Unitary> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::invalid("hbar must be positive and finite"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let eig = h.eigen();
    let u = eig.map(|lambda| Complex64::from_polar(1.0, -lambda * t / hbar));
    Ok(Unitary::from_matrix_unchecked(u))
}

/// Matrix product `u·v` (apply `v` first).
pub fn compose(u: &Unitary, v: &Unitary) -> Result<Unitary> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(Unitary::from_matrix_unchecked(&u.matrix * &v.matrix))
}

fn check_qubit(qubit: usize, n_qubits: usize) -> Result<()> {
    if qubit >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            bound: n_qubits,
        });
    }
    Ok(())
}

fn check_single(gate: &Unitary) -> Result<[Complex64; 4]> {
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: gate.dim(),
        });
    }
    let m = &gate.matrix;
    Ok([m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
}

#[inline(always)]
fn mix(g: &[Complex64; 4], lo: &mut Complex64, hi: &mut Complex64) {
    let (a, b) = (*lo, *hi);
    *lo = g[0] * a + g[1] * b;
    *hi = g[2] * a + g[3] * b;
}

fn apply_pairs(amps: &mut [Complex64], stride: usize, g: &[Complex64; 4]) {
    #[cfg(feature = "parallel")]
    if amps.len() >= PARALLEL_MIN_DIM {
        use rayon::prelude::*;
        if amps.len() / (2 * stride) >= rayon::current_num_threads() {
            amps.par_chunks_mut(2 * stride).for_each(|chunk| {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.iter_mut().zip(hi).for_each(|(l, h)| mix(g, l, h));
            });
        } else {
            for chunk in amps.chunks_mut(2 * stride) {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .for_each(|(l, h)| mix(g, l, h));
            }
        }
        return;
    }
    for chunk in amps.chunks_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        lo.iter_mut().zip(hi).for_each(|(l, h)| mix(g, l, h));
    }
}

/// Applies a 2×2 gate to `target` in place.
pub fn apply_single(state: &mut StateVector, gate: &Unitary, target: usize) -> Result<()> {
    let n = state.n_qubits();
    check_qubit(target, n)?;
    let g = check_single(gate)?;
    let stride = 1usize << (n - 1 - target);
    apply_pairs(state.amplitudes_mut(), stride, &g);
    Ok(())
}

/// Applies a 2×2 gate to `target` on the subspace where `control` is 1.
pub fn apply_controlled(
    state: &mut StateVector,
    gate: &Unitary,
    control: usize,
    target: usize,
) -> Result<()> {
    let n = state.n_qubits();
    check_qubit(control, n)?;
    check_qubit(target, n)?;
    if control == target {
        return Err(Error::invalid("control and target must differ"));
    }
    let g = check_single(gate)?;
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    let amps = state.amplitudes_mut();
    if tbit < cbit {
        // Upper half of each 2·cbit block has the control bit set.
        for block in amps.chunks_mut(2 * cbit) {
            apply_pairs(&mut block[cbit..], tbit, &g);
        }
    } else {
        for block in amps.chunks_mut(2 * tbit) {
            let (lo, hi) = block.split_at_mut(tbit);
            for (j, (l, h)) in lo.iter_mut().zip(hi).enumerate() {
                if j & cbit != 0 {
                    mix(&g, l, h);
                }
            }
        }
    }
    Ok(())
}

/// Distance between a target unitary and its approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximationError {
    /// `max_ψ |⟨ψ|(U−V)|ψ⟩|²` over the supplied probes.
    pub probe_max: f64,
    /// `‖U−V‖²` (largest singular value squared), which bounds the probe
    /// metric for every normalized state.
    pub spectral_bound: f64,
}

/// Compares `u` and `v` on `probes` and via the spectral norm of `u − v`.
pub fn approximation_error(
    u: &Unitary,
    v: &Unitary,
    probes: &[StateVector],
) -> Result<ApproximationError> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let diff = &u.matrix - &v.matrix;
    let mut probe_max = 0.0f64;
    for psi in probes {
        if psi.dim() != u.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: psi.dim(),
            });
        }
        let amps = psi.amplitudes();
        let mut acc = ZERO;
        for (row, bra) in amps.iter().enumerate() {
            let mut d_psi = ZERO;
            for (col, ket) in amps.iter().enumerate() {
                d_psi += diff[(row, col)] * ket;
            }
            acc += bra.conj() * d_psi;
        }
        probe_max = probe_max.max(acc.norm_sqr());
    }
    let sigma = linalg::spectral_norm(&diff);
    Ok(ApproximationError {
        probe_max,
        spectral_bound: sigma * sigma,
    })
}

/// The `2^n` basis states followed by [`DEFAULT_RANDOM_PROBES`] Haar-random
/// states drawn from `seed`.
pub fn default_probes(n_qubits: usize, seed: u64) -> Vec<StateVector> {
    let mut probes: Vec<StateVector> = (0..1usize << n_qubits)
        .map(|i| StateVector::basis(n_qubits, i).expect("in range"))
        .collect();
    let mut rng = Rng::new(seed);
    probes.extend((0..DEFAULT_RANDOM_PROBES).map(|_| StateVector::haar_random(n_qubits, &mut rng)));
    probes
}
