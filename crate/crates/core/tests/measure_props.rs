mod common;

use common::{c, random_hermitian};
use proptest::prelude::*;
use qpath_core::entangle::singlet;
use qpath_core::gates::{Observable, Pauli};
use qpath_core::linalg::{self, Matrix};
use qpath_core::measure::{
    density_from_ensemble, dephase, expectation, partial_trace, purity, spectral_decomposition,
    uncertainty, uncertainty_bound, DensityMatrix, ProjectiveMeasurement,
};
use qpath_core::{Rng, StateVector};

fn random_ensemble(n: usize, members: usize, rng: &mut Rng) -> DensityMatrix {
    let weights: Vec<f64> = (0..members).map(|_| rng.uniform() + 0.01).collect();
    let total: f64 = weights.iter().sum();
    let ensemble: Vec<(f64, StateVector)> = weights
        .iter()
        .map(|w| (w / total, StateVector::haar_random(n, rng)))
        .collect();
    density_from_ensemble(&ensemble).unwrap()
}

fn trace_re(m: &Matrix) -> f64 {
    linalg::trace(m).re
}

#[test]
fn projectors_are_complete() {
    let mut rng = Rng::new(1);
    let mut observables: Vec<Observable> = (1..=3)
        .map(|k| random_hermitian(1 << k, &mut rng))
        .collect();
    // Degenerate spectra must group into a single projector per eigenvalue.
    for q in 0..3 {
        observables.push(Observable::pauli(Pauli::Z).on_qubit(q, 3).unwrap());
    }
    observables.push(Observable::zero(4));
    for a in observables {
        let spaces = spectral_decomposition(&a);
        let mut sum = Matrix::zeros(a.dim(), a.dim());
        for s in &spaces {
            sum += s.projector();
        }
        assert!(linalg::max_abs_diff(&sum, &linalg::identity(a.dim())) < 1e-10);
    }
    let z = Observable::pauli(Pauli::Z).on_qubit(1, 3).unwrap();
    assert_eq!(spectral_decomposition(&z).len(), 2);
    assert!(spectral_decomposition(&z)
        .iter()
        .all(|s| s.multiplicity() == 4));
}

#[test]
fn collapse_is_idempotent() {
    let mut rng = Rng::new(2);
    for _ in 0..50 {
        let a = random_hermitian(4, &mut rng);
        let m = ProjectiveMeasurement::new(&a);
        let psi = StateVector::haar_random(2, &mut rng);
        let first = m.sample(&psi, &mut rng).unwrap();
        let dist = m.distribution(&first.post_state).unwrap();
        let p_same: f64 = dist
            .iter()
            .filter(|(value, _)| (value - first.eigenvalue).abs() < 1e-9)
            .map(|(_, p)| p)
            .sum();
        assert!(p_same > 1.0 - 1e-10);
        let second = m.sample(&first.post_state, &mut rng).unwrap();
        assert_eq!(second.eigenvalue, first.eigenvalue);
    }
}

#[test]
fn uncertainty_relation_on_random_triples() {
    let mut rng = Rng::new(4);
    for _ in 0..200 {
        let n = 1 + (rng.next_u64() % 3) as usize;
        let psi = StateVector::haar_random(n, &mut rng);
        let a = random_hermitian(1 << n, &mut rng);
        let b = random_hermitian(1 << n, &mut rng);
        let bound = uncertainty_bound(&psi, &a, &b).unwrap();
        assert!(bound.lhs >= bound.rhs - 1e-12, "{bound:?}");
        // Oracle: ½|⟨[A,B]⟩| from the dense commutator.
        let comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
        let v = common::column(&psi);
        let value = (v.adjoint() * comm * v)[(0, 0)];
        assert!((bound.rhs - 0.5 * value.norm()).abs() < 1e-10);
        let spread = uncertainty(&psi, &a).unwrap() * uncertainty(&psi, &b).unwrap();
        assert!((bound.lhs - spread).abs() < 1e-10);
    }
}

#[test]
fn uncertainty_saturates_for_x_y_on_zero() {
    let psi = StateVector::zero(1);
    let bound = uncertainty_bound(
        &psi,
        &Observable::pauli(Pauli::X),
        &Observable::pauli(Pauli::Y),
    )
    .unwrap();
    assert!((bound.lhs - 1.0).abs() < 1e-12);
    assert!((bound.rhs - 1.0).abs() < 1e-12);
}

#[test]
fn ensemble_matches_direct_sum() {
    let mut rng = Rng::new(6);
    let members: Vec<(f64, StateVector)> = (0..4)
        .map(|k| (0.1 * (k + 1) as f64, StateVector::haar_random(2, &mut rng)))
        .collect();
    let rho = density_from_ensemble(&members).unwrap();
    let mut direct = Matrix::zeros(4, 4);
    for (p, psi) in &members {
        let v = common::column(psi);
        direct += (&v * v.adjoint()) * c(*p, 0.0);
    }
    assert!(linalg::max_abs_diff(rho.matrix(), &direct) < 1e-12);
    let a = random_hermitian(4, &mut rng);
    let weighted: f64 = members
        .iter()
        .map(|(p, psi)| p * expectation(psi, &a).unwrap())
        .sum();
    let via_rho = qpath_core::measure::expectation_density(&rho, &a).unwrap();
    assert!((weighted - via_rho).abs() < 1e-12);
}

#[test]
fn singlet_reduction_is_half_pure() {
    let rho = DensityMatrix::pure(&singlet());
    for keep in [[0], [1]] {
        let reduced = partial_trace(&rho, &keep).unwrap();
        assert!(
            linalg::max_abs_diff(reduced.matrix(), &(linalg::identity(2) * c(0.5, 0.0))) < 1e-12
        );
        assert!((purity(&reduced) - 0.5).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn dephasing_composes_as_a_semigroup(seed in any::<u64>(), l1 in 0.0f64..=1.0, l2 in 0.0f64..=1.0) {
        let mut rng = Rng::new(seed);
        let rho = random_ensemble(2, 3, &mut rng);
        let twice = dephase(&dephase(&rho, l1).unwrap(), l2).unwrap();
        let once = dephase(&rho, 1.0 - (1.0 - l1) * (1.0 - l2)).unwrap();
        prop_assert!(linalg::max_abs_diff(twice.matrix(), once.matrix()) < 1e-12);
    }

    #[test]
    fn channels_preserve_trace(seed in any::<u64>(), lambda in 0.0f64..=1.0, n in 1usize..=4, mask in 1u32..16) {
        let mut rng = Rng::new(seed);
        let rho = random_ensemble(n, 3, &mut rng);
        let out = dephase(&rho, lambda).unwrap();
        prop_assert!((trace_re(out.matrix()) - 1.0).abs() < 1e-10);
        let keep: Vec<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
        prop_assume!(!keep.is_empty());
        let reduced = partial_trace(&rho, &keep).unwrap();
        prop_assert_eq!(reduced.n_qubits(), keep.len());
        prop_assert!((trace_re(reduced.matrix()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purity_is_one_exactly_for_rank_one(seed in any::<u64>(), n in 1usize..=3, members in 1usize..=4) {
        let mut rng = Rng::new(seed);
        let rho = random_ensemble(n, members, &mut rng);
        let p = purity(&rho);
        prop_assert!(p <= 1.0 + 1e-12);
        // Rank-1 reconstruction from the top eigenvector.
        let eig = rho.eigen();
        let top = eig.vectors.column(rho.dim() - 1).into_owned();
        let rank_one = &top * top.adjoint();
        let residual = linalg::max_abs_diff(rho.matrix(), &rank_one);
        if members == 1 {
            prop_assert!((p - 1.0).abs() < 1e-10);
            prop_assert!(residual < 1e-8);
        } else if p < 1.0 - 1e-6 {
            prop_assert!(residual > 1e-8);
        }
    }
}
