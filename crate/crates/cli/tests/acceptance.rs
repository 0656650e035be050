//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use qpath::app::interior_contrast;
use qpath::circuit::{CircuitProgram, Gate, Instruction};
use qpath_core::entangle::{epr_correlation, epr_sample, singlet};
use qpath_core::gates::{apply_single, compose, rotation_gate, Axis, Observable, Pauli};
use qpath_core::infolimits::{self, CODATA_2018};
use qpath_core::linalg::{self, Matrix};
use qpath_core::measure::{
    density_from_ensemble, dephase, partial_trace, purity, uncertainty_bound, DensityMatrix,
};
use qpath_core::pathint::{
    classical_concentration, propagate, DoubleSlit, PathLattice, WavePacket,
};
use qpath_core::{Complex64, Rng, StateVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_axis(rng: &mut Rng) -> Axis {
    loop {
        if let Ok(a) = Axis::normalized(rng.normal(), rng.normal(), rng.normal()) {
            return a;
        }
    }
}

fn random_hermitian(dim: usize, rng: &mut Rng) -> Observable {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = c(rng.normal(), 0.0);
        for j in i + 1..dim {
            let z = c(rng.normal(), rng.normal());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Observable::new(m).unwrap()
}

fn pick(rng: &mut Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn random_gate(rng: &mut Rng, n_qubits: usize) -> Instruction {
    let theta = rng.angle() * 2.0 - 2.0 * PI;
    let two = n_qubits > 1;
    let gate = match pick(rng, if two { 11 } else { 9 }) {
        0 => Gate::I,
        1 => Gate::X,
        2 => Gate::Y,
        3 => Gate::Z,
        4 => Gate::H,
        5 => Gate::RX(theta),
        6 => Gate::RY(theta),
        7 => Gate::RZ(theta),
        8 => {
            let a = random_axis(rng);
            Gate::R {
                n: [a.nx, a.ny, a.nz],
                theta,
            }
        }
        9 => Gate::CNOT,
        _ => {
            let a = random_axis(rng);
            Gate::CU {
                n: [a.nx, a.ny, a.nz],
                theta,
            }
        }
    };
    let operands = if gate.arity() == 2 {
        let control = pick(rng, n_qubits);
        let target = (control + 1 + pick(rng, n_qubits - 1)) % n_qubits;
        vec![control, target]
    } else {
        vec![pick(rng, n_qubits)]
    };
    Instruction { gate, operands }
}

fn criterion_1() -> Outcome {
    let mut rng = Rng::new(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n_qubits = 1 + pick(&mut rng, 10);
        let n_gates = 1 + pick(&mut rng, 50);
        let program = CircuitProgram {
            n_qubits,
            instructions: (0..n_gates)
                .map(|_| random_gate(&mut rng, n_qubits))
                .collect(),
            measurement: None,
        };
        let state = program.final_state().map_err(|e| e.to_string())?;
        worst = worst.max((state.norm() - 1.0).abs());
    }
    ensure(
        worst < 1e-12,
        format!("1000 random circuits, max |‖ψ‖ − 1| = {worst:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let sigma = |k: usize| Pauli::ALL[k].matrix();
    let eps = |a: usize, b: usize, k: usize| -> f64 {
        match (a, b, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    let mut exact = 0;
    for a in 0..3 {
        for b in 0..3 {
            let mut expected = if a == b {
                linalg::identity(2)
            } else {
                Matrix::zeros(2, 2)
            };
            for k in 0..3 {
                expected += sigma(k) * c(0.0, eps(a, b, k));
            }
            exact += usize::from(sigma(a) * sigma(b) == expected);
        }
    }
    let mut rng = Rng::new(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let axis = random_axis(&mut rng);
        let (t1, t2) = (rng.angle(), rng.angle());
        let lhs = compose(&rotation_gate(axis, t1), &rotation_gate(axis, t2)).unwrap();
        worst = worst.max(linalg::max_abs_diff(
            lhs.matrix(),
            rotation_gate(axis, t1 + t2).matrix(),
        ));
    }
    ensure(
        exact == 9 && worst < 1e-12,
        format!("{exact}/9 Pauli products exact, rotation group law max deviation {worst:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = Rng::new(3);
    let mut worst: f64 = 0.0;
    for n in 1..=4usize {
        for target in 0..n {
            for _ in 0..25 {
                let psi = StateVector::haar_random(n, &mut rng);
                let gate = rotation_gate(random_axis(&mut rng), rng.angle());
                let mut strided = psi.clone();
                apply_single(&mut strided, &gate, target).unwrap();
                // I ⊗ … ⊗ U ⊗ … ⊗ I assembled entry by entry.
                let dim = 1 << n;
                let shift = n - 1 - target;
                let mut dense = Matrix::zeros(dim, dim);
                for row in 0..dim {
                    for col in 0..dim {
                        if row & !(1 << shift) == col & !(1 << shift) {
                            dense[(row, col)] =
                                gate.matrix()[((row >> shift) & 1, (col >> shift) & 1)];
                        }
                    }
                }
                let v = Matrix::from_column_slice(dim, 1, psi.amplitudes());
                let out = dense * v;
                for (a, b) in strided.amplitudes().iter().zip(out.iter()) {
                    worst = worst.max((a - b).norm());
                }
            }
        }
    }
    ensure(
        worst < 1e-12,
        format!("strided vs dense embedding, n ≤ 4, max deviation {worst:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = Rng::new(4);
    let mut violations = 0;
    for _ in 0..200 {
        let n = 1 + pick(&mut rng, 3);
        let psi = StateVector::haar_random(n, &mut rng);
        let a = random_hermitian(1 << n, &mut rng);
        let b = random_hermitian(1 << n, &mut rng);
        let bound = uncertainty_bound(&psi, &a, &b).unwrap();
        if bound.lhs < bound.rhs - 1e-12 {
            violations += 1;
        }
    }
    let sat = uncertainty_bound(
        &StateVector::zero(1),
        &Observable::pauli(Pauli::X),
        &Observable::pauli(Pauli::Y),
    )
    .unwrap();
    let saturated = (sat.lhs - 1.0).abs() < 1e-12 && (sat.rhs - 1.0).abs() < 1e-12;
    ensure(
        violations == 0 && saturated,
        format!(
            "{violations}/200 violations, (|0⟩, σx, σy) gives ({:.15}, {:.15})",
            sat.lhs, sat.rhs
        ),
    )
}

fn criterion_5() -> Outcome {
    // Brute-force 4×4 oracle: ⟨ψ|A⊗B|ψ⟩ for the singlet.
    let spin = |t: f64| {
        linalg::from_rows(
            2,
            &[
                c(t.cos(), 0.0),
                c(t.sin(), 0.0),
                c(t.sin(), 0.0),
                c(-t.cos(), 0.0),
            ],
        )
    };
    let psi = Matrix::from_column_slice(4, 1, singlet().amplitudes());
    let grid: Vec<f64> = (0..17).map(|k| k as f64 * PI / 8.0 - PI).collect();
    let mut worst: f64 = 0.0;
    for &a in &grid {
        for &b in &grid {
            let oracle = (psi.adjoint() * linalg::kron(&spin(a), &spin(b)) * &psi)[(0, 0)].re;
            worst = worst
                .max((epr_correlation(a, b) - oracle).abs())
                .max((oracle + (a - b).cos()).abs());
        }
    }
    let shots = 100_000u64;
    let root = Rng::new(5);
    let mut worst_z: f64 = 0.0;
    for (k, (a, b)) in [(0.0, 0.0), (0.0, PI / 4.0), (PI / 3.0, -PI / 6.0)]
        .into_iter()
        .enumerate()
    {
        let r = epr_sample(a, b, shots, &mut root.substream(k as u64)).unwrap();
        let e = epr_correlation(a, b);
        let se = ((1.0 - e * e) / shots as f64)
            .sqrt()
            .max(1.0 / shots as f64);
        worst_z = worst_z.max((r.empirical_correlation() - e).abs() / se);
    }
    let b = PI / 5.0;
    let mut worst_signal: f64 = 0.0;
    for (k, a) in [0.0, PI / 4.0, PI / 2.0].into_iter().enumerate() {
        let r = epr_sample(a, b, shots, &mut root.substream(100 + k as u64)).unwrap();
        let se = (0.25 / shots as f64).sqrt();
        worst_signal = worst_signal.max((r.marginal_b_plus() - 0.5).abs() / se);
    }
    ensure(
        worst < 1e-10 && worst_z <= 5.0 && worst_signal <= 5.0,
        format!(
            "grid deviation {worst:.2e}, sampled correlations within {worst_z:.2}σ, B marginals within {worst_signal:.2}σ"
        ),
    )
}

/// Direct sum over every path, one slice constant per step.
fn enumerate(lat: &PathLattice, source: usize, end: usize) -> Complex64 {
    let (n, slices) = (lat.n_sites(), lat.n_slices());
    let n0 = c(0.0, 2.0 * PI * lat.hbar() * lat.dt() / lat.mass())
        .sqrt()
        .inv();
    let mut total = c(0.0, 0.0);
    for code in 0..n.pow(slices as u32 - 1) {
        let mut sites = vec![source];
        let mut rest = code;
        for _ in 1..slices {
            sites.push(rest % n);
            rest /= n;
        }
        sites.push(end);
        let s: f64 = sites
            .windows(2)
            .map(|w| {
                let v = (w[1] as f64 - w[0] as f64) * lat.dx() / lat.dt();
                (0.5 * lat.mass() * v * v - lat.potential()[w[0]]) * lat.dt()
            })
            .sum();
        total += Complex64::from_polar(1.0, s / lat.hbar());
    }
    total * n0.powi(slices as i32) * lat.dx().powi(slices as i32 - 1)
}

fn criterion_6() -> Outcome {
    let mut rng = Rng::new(6);
    let mut worst: f64 = 0.0;
    for n_sites in 2..=5usize {
        for n_slices in 1..=5 {
            let lat = PathLattice::new(n_slices, n_sites, 0.3 + rng.uniform(), 0.3 + rng.uniform())
                .unwrap()
                .with_mass(0.5 + rng.uniform())
                .unwrap()
                .with_hbar(0.5 + rng.uniform())
                .unwrap()
                .with_potential((0..n_sites).map(|_| rng.normal()).collect())
                .unwrap();
            for source in 0..n_sites {
                let field = propagate(&lat, source).unwrap();
                for end in 0..n_sites {
                    let oracle = enumerate(&lat, source, end);
                    worst =
                        worst.max((field.values()[end] - oracle).norm() / oracle.norm().max(1.0));
                }
            }
        }
    }
    // Free propagator on the fine reference lattice.
    let start = Instant::now();
    let (n, center, dx, dt) = (16001usize, 8000usize, 0.5, 1600.0);
    let lat = PathLattice::new(2, n, dx, dt).unwrap();
    let field = propagate(&lat, center).unwrap();
    let t = 2.0 * dt;
    let prefactor = c(0.0, 2.0 * PI * t).sqrt().inv();
    let half = n / 20;
    let mut free_err: f64 = 0.0;
    for site in center - half..=center + half {
        let x = (site as f64 - center as f64) * dx;
        let exact = prefactor * Complex64::from_polar(1.0, x * x / (2.0 * t));
        free_err = free_err.max((field.values()[site] - exact).norm() / exact.norm());
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(
        worst < 1e-10 && free_err < 0.01 && elapsed <= 60.0,
        format!(
            "enumeration deviation {worst:.2e}; free propagator max relative error {:.3}% over central 10% ({elapsed:.1} s)",
            free_err * 100.0
        ),
    )
}

fn local_maxima(v: &[f64], lo: usize, hi: usize) -> Vec<usize> {
    (lo.max(1)..hi.min(v.len() - 1))
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
        .collect()
}

fn criterion_7() -> Outcome {
    let setup = DoubleSlit::reference();
    let plain = setup.intensity(0.0).unwrap();
    let lat = setup.lattice.clone().with_charge(1.0).unwrap();
    let flux = PI * lat.hbar() * lat.light_speed() / lat.charge();
    let shifted = DoubleSlit {
        lattice: lat,
        ..setup.clone()
    }
    .intensity_with_flux(flux)
    .unwrap();
    let center = setup.source;
    let contrast = interior_contrast(&plain).unwrap_or(f64::INFINITY);
    let (lo, hi) = (center - 60, center + 60);
    let peaks0 = local_maxima(&plain, lo, hi);
    let peaks1 = local_maxima(&shifted, lo, hi);
    let half_fringe = 20.0;
    let matched = |from: &[usize], to: &[usize]| {
        from.iter().all(|&p| {
            to.iter()
                .any(|&q| ((q as f64 - p as f64).abs() - half_fringe).abs() <= 1.0)
        })
    };
    let nulls_swapped = shifted[center] < 0.01 * shifted.iter().copied().fold(0.0, f64::max)
        && plain[center + 20] < 0.01 * plain[center];
    let ok = contrast < 0.01
        && !peaks0.is_empty()
        && matched(&peaks0, &peaks1)
        && matched(&peaks1, &peaks0)
        && nulls_swapped;
    ensure(
        ok,
        format!(
            "interior min/max {contrast:.2e}; maxima at {peaks0:?} move to {peaks1:?} under AB phase π"
        ),
    )
}

fn criterion_8() -> Outcome {
    let lattice = PathLattice::new(3, 401, 1.0, 1.0).unwrap();
    let packet = WavePacket {
        center: 200,
        width: 4.0,
        momentum: 0.0,
    };
    let hbars = [5120.0, 1280.0, 320.0, 80.0, 20.0];
    let sweep = classical_concentration(&lattice, &packet, 3, &hbars).map_err(|e| e.to_string())?;
    let fractions: Vec<f64> = sweep.iter().map(|s| s.fraction).collect();
    let monotone = fractions.windows(2).all(|w| w[1] >= w[0] - 1e-3);
    ensure(
        monotone,
        format!(
            "fractions within ±3 sites for ħ = {hbars:?}: [{}]",
            fractions
                .iter()
                .map(|f| format!("{f:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = Rng::new(9);
    let mut trace_err: f64 = 0.0;
    let mut semigroup: f64 = 0.0;
    for _ in 0..50 {
        let n = 1 + pick(&mut rng, 3);
        let members: Vec<(f64, StateVector)> = (0..3)
            .map(|_| (1.0 / 3.0, StateVector::haar_random(n, &mut rng)))
            .collect();
        let rho = density_from_ensemble(&members).unwrap();
        let (l1, l2) = (rng.uniform(), rng.uniform());
        let once = dephase(&rho, l1).unwrap();
        trace_err = trace_err.max((once.trace() - 1.0).abs());
        let twice = dephase(&once, l2).unwrap();
        let combined = dephase(&rho, 1.0 - (1.0 - l1) * (1.0 - l2)).unwrap();
        semigroup = semigroup.max(linalg::max_abs_diff(twice.matrix(), combined.matrix()));
        let reduced = partial_trace(&rho, &[pick(&mut rng, n)]).unwrap();
        trace_err = trace_err.max((reduced.trace() - 1.0).abs());
    }
    let singlet_rho = DensityMatrix::pure(&singlet());
    let p = purity(&partial_trace(&singlet_rho, &[0]).unwrap());
    ensure(
        trace_err < 1e-10 && (p - 0.5).abs() < 1e-12 && semigroup < 1e-12,
        format!("trace drift {trace_err:.2e}, singlet reduced purity {p:.15}, semigroup deviation {semigroup:.2e}"),
    )
}

fn criterion_10() -> Outcome {
    let sun = 1.98892e30;
    let golden = [
        (
            "R_S(M_sun)",
            infolimits::schwarzschild_radius(sun).unwrap(),
            2.954e3,
        ),
        (
            "T_H(M_sun)",
            infolimits::hawking_temperature(sun).unwrap(),
            6.17e-8,
        ),
        (
            "Landauer(300 K)",
            infolimits::landauer_heat(300.0, 1.0).unwrap(),
            2.871e-21,
        ),
        (
            "capacity(3 kHz, S/N 1e3)",
            infolimits::channel_capacity(3000.0, 1000.0, 1.0).unwrap(),
            2.991e4,
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, value, expected) in golden {
        let rel = (value - expected).abs() / expected;
        worst = worst.max(rel);
        parts.push(format!("{name}={value:.4e}"));
    }
    let mut identity: f64 = 0.0;
    for m in [1.0, 1e12, sun, 1e40] {
        let r = CODATA_2018.schwarzschild_radius(m).unwrap();
        let direct = 3.0 * m / (4.0 * PI * r * r * r);
        identity = identity.max((CODATA_2018.collapse_density(m).unwrap() - direct).abs() / direct);
    }
    ensure(
        worst < 1e-2 && identity < 1e-10,
        format!(
            "{}; worst relative error {worst:.1e}; density identity {identity:.1e}",
            parts.join(", ")
        ),
    )
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qpath");
    let tmp = std::env::temp_dir().join(format!("qpath-acceptance-{}", std::process::id()));
    let circuit = tmp.join("ghz.circ");
    std::fs::create_dir_all(&tmp).map_err(|e| e.to_string())?;
    std::fs::write(
        &circuit,
        "QUBITS 3\nH 0\nRY 1 0.7\nCNOT 0 2\nMEASURE Z all SHOTS=5000 SEED=2024\n",
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = tmp.join(format!("run{run}"));
        for args in [
            vec!["circuit".to_string(), circuit.display().to_string()],
            [
                "epr",
                "--angle-a",
                "0,0.5",
                "--angle-b",
                "1",
                "--shots",
                "2000",
                "--seed",
                "77",
            ]
            .map(String::from)
            .to_vec(),
        ] {
            let status = Command::new(bin)
                .args(&args)
                .arg("--out-dir")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(String::from_utf8_lossy(&status.stderr).into_owned());
            }
        }
        let shots = std::fs::read(out.join("shots.csv")).map_err(|e| e.to_string())?;
        let epr = std::fs::read(out.join("epr.csv")).map_err(|e| e.to_string())?;
        outputs.push((shots, epr));
    }
    let _ = std::fs::remove_dir_all(&tmp);
    let identical = outputs[0] == outputs[1];
    ensure(
        identical && !outputs[0].0.is_empty(),
        format!(
            "two runs, shots.csv ({} bytes) and epr.csv ({} bytes) byte-identical: {identical}",
            outputs[0].0.len(),
            outputs[0].1.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("unitarity of random circuits", criterion_1),
        ("Pauli algebra and rotation group law", criterion_2),
        ("strided gates equal dense embedding", criterion_3),
        ("uncertainty relation", criterion_4),
        ("EPR correlations and no-signaling", criterion_5),
        ("path enumeration and free propagator", criterion_6),
        ("double slit and AB phase", criterion_7),
        ("classical limit concentration", criterion_8),
        ("density-operator channels", criterion_9),
        ("limits golden values", criterion_10),
        ("reproducible shot records", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]",
                k + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {detail} [{secs:.1} s]",
                    k + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
