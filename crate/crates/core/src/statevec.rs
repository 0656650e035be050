//! Pure states of an N-qubit register as dense amplitude vectors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::rng::Rng;
use crate::{Error, Result};

/// Complex transition amplitude `⟨B|A⟩`.
pub type Amplitude = Complex64;

/// Tolerance on `Σ|β_i|² = 1` for a valid state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Inputs whose norm is within this distance of 1 are silently rescaled;
/// anything further off is rejected.
pub const RENORMALIZE_WINDOW: f64 = 1e-6;

/// Index of a computational basis state `|i₁i₂…i_N⟩`.
///
/// Qubit 0 is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(usize);

impl BasisIndex {
    pub fn new(value: usize, n_qubits: usize) -> Result<Self> {
        let bound = 1usize << n_qubits;
        if value >= bound {
            return Err(Error::IndexOutOfRange {
                index: value,
                bound,
            });
        }
        Ok(BasisIndex(value))
    }

    pub fn value(self) -> usize {
        self.0
    }

    /// Label `i_k` of `qubit` within an `n_qubits` register.
    pub fn bit(self, qubit: usize, n_qubits: usize) -> u8 {
        ((self.0 >> (n_qubits - 1 - qubit)) & 1) as u8
    }

    /// The binary string `i₁i₂…i_N`.
    pub fn label(self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|q| if self.bit(q, n_qubits) == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parses a binary label such as `"0110"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut value = 0usize;
        for ch in label.chars() {
            value = (value << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::invalid(alloc::format!("bad basis label {label:?}"))),
                };
        }
        Ok(BasisIndex(value))
    }
}

/// Normalized amplitude vector over the `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Amplitude>,
}

/// Euclidean norm `√(Σ|a_i|²)` of a raw amplitude slice.
pub fn norm(amplitudes: &[Amplitude]) -> f64 {
    libm::sqrt(amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>())
}

/// `Σ_i conj(bra_i)·ket_i`.
pub fn inner(bra: &StateVector, ket: &StateVector) -> Result<Amplitude> {
    if bra.n_qubits != ket.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: bra.dim(),
            found: ket.dim(),
        });
    }
    Ok(bra
        .amplitudes
        .iter()
        .zip(&ket.amplitudes)
        .map(|(b, k)| b.conj() * k)
        .sum())
}

impl StateVector {
    /// The product basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let index = BasisIndex::new(index, n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index.value()] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("index 0 is always in range")
    }

    /// Validates and wraps raw amplitudes. Length must be a power of two and
    /// the norm within [`RENORMALIZE_WINDOW`] of 1; small drift is rescaled.
    pub fn from_amplitudes(amplitudes: Vec<Amplitude>) -> Result<Self> {
        let n_qubits = crate::linalg::qubits_for_dim(amplitudes.len())
            .ok_or(Error::NotPowerOfTwo(amplitudes.len()))?;
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > RENORMALIZE_WINDOW {
            return Err(Error::NotNormalized { norm: n });
        }
        let mut state = StateVector {
            n_qubits,
            amplitudes,
        };
        if n != 1.0 {
            state.scale(1.0 / n);
        }
        Ok(state)
    }

    /// Rescales an arbitrary non-zero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Amplitude>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        let scaled = amplitudes.into_iter().map(|a| a / n).collect();
        Self::from_amplitudes(scaled)
    }

    /// Single qubit at polar angle `theta` and azimuth `phi` on the Bloch
    /// sphere: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        let half = theta / 2.0;
        let alpha = Complex64::new(libm::cos(half), 0.0);
        let beta = Complex64::from_polar(libm::sin(half), phi);
        StateVector {
            n_qubits: 1,
            amplitudes: vec![alpha, beta],
        }
    }

    /// Haar-random pure state (normalized complex Gaussian vector).
    pub fn haar_random(n_qubits: usize, rng: &mut Rng) -> Self {
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.normal(), rng.normal()))
            .collect();
        Self::normalized(amps).expect("Gaussian vector is non-zero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amplitudes
    }

    pub(crate) fn from_raw_unchecked(n_qubits: usize, amplitudes: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `a ⊗ b`: amplitude `i·2^{b.n} + j` is `a_i b_j`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// `⟨self|ket⟩`.
    pub fn inner(&self, ket: &StateVector) -> Result<Amplitude> {
        inner(self, ket)
    }

    /// Born-rule probabilities `|β_i|²` in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Elementwise distance `max_i |a_i − b_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
