#![allow(dead_code)]

use qpath_core::gates::{Axis, Observable};
use qpath_core::linalg::{self, Matrix};
use qpath_core::{Complex64, Rng, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_axis(rng: &mut Rng) -> Axis {
    loop {
        let (x, y, z) = (rng.normal(), rng.normal(), rng.normal());
        if let Ok(axis) = Axis::normalized(x, y, z) {
            return axis;
        }
    }
}

/// Random Hermitian matrix with Gaussian entries, wrapped as an observable.
pub fn random_hermitian(dim: usize, rng: &mut Rng) -> Observable {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = c(rng.normal(), 0.0);
        for j in i + 1..dim {
            let z = c(rng.normal(), rng.normal());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Observable::new(m).expect("constructed Hermitian")
}

pub fn column(state: &StateVector) -> Matrix {
    Matrix::from_column_slice(state.dim(), 1, state.amplitudes())
}

pub fn state_from_column(m: &Matrix) -> StateVector {
    StateVector::normalized(m.iter().copied().collect()).unwrap()
}

/// `I ⊗ … ⊗ U ⊗ … ⊗ I` with `U` on `target` (qubit 0 leftmost).
pub fn dense_embedding(u: &Matrix, target: usize, n: usize) -> Matrix {
    let mut out = linalg::identity(1);
    for q in 0..n {
        let factor = if q == target {
            u.clone()
        } else {
            linalg::identity(2)
        };
        out = linalg::kron(&out, &factor);
    }
    out
}

/// Dense controlled-U built basis state by basis state.
pub fn dense_controlled(u: &Matrix, control: usize, target: usize, n: usize) -> Matrix {
    let dim = 1 << n;
    let cbit = 1 << (n - 1 - control);
    let tbit = 1 << (n - 1 - target);
    let mut out = Matrix::zeros(dim, dim);
    for col in 0..dim {
        if col & cbit == 0 {
            out[(col, col)] = c(1.0, 0.0);
            continue;
        }
        let t_in = usize::from(col & tbit != 0);
        for t_out in 0..2 {
            let row = (col & !tbit) | if t_out == 1 { tbit } else { 0 };
            out[(row, col)] += u[(t_out, t_in)];
        }
    }
    out
}
