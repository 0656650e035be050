#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical kernels for small-scale quantum simulation.
//!
//! Everything in this crate is pure computation over `alloc` collections:
//! state vectors and gates ([`statevec`], [`gates`]), measurement and mixed
//! states ([`measure`]), entanglement experiments ([`entangle`]), a lattice
//! path-integral engine ([`pathint`]) and closed-form physical limits
//! ([`infolimits`]). File formats, the CLI and anything touching the OS
//! live in the companion `qpath` crate.
//!
//! Conventions used throughout:
//!
//! * basis state `|0⟩` is amplitude index 0;
//! * qubit 0 is the most significant bit of a basis index, so the label
//!   `i₁i₂…i_N` reads left to right as qubit 0, 1, …, N−1;
//! * path amplitudes use `exp(iS/ħ)`, with `ħ = h/2π`.

extern crate alloc;

mod error;
pub mod linalg;
pub mod rng;

pub mod entangle;
pub mod gates;
pub mod infolimits;
pub mod measure;
pub mod pathint;
pub mod statevec;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rng::Rng;
pub use statevec::{Amplitude, BasisIndex, StateVector};
