//! Plain-text circuit files.
//!
//! ```text
//! # Bell pair
//! QUBITS 2
//! H 0
//! CNOT 0 1
//! MEASURE Z all SHOTS=1000 SEED=1
//! ```
//!
//! One instruction per line: the gate name, its qubit operands, then its
//! real parameters. Parameters may instead follow the name in parentheses
//! (`RX(pi/2) 0`). Angles accept `pi` forms such as `-3*pi/4`. `MEASURE`
//! takes a Pauli basis, `all` or a comma-separated qubit list, and
//! `SHOTS=`/`SEED=` in any order; it must be the last instruction.

use std::f64::consts::PI;
use std::fmt;

use qpath_core::gates::{
    apply_controlled, apply_single, pauli, rotation_gate, Axis, Pauli, Unitary,
};
use qpath_core::measure::sample_computational;
use qpath_core::{Rng, StateVector};

/// Largest register a circuit file may declare.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    /// π rotation about `(x̂ + ẑ)/√2`: the Hadamard matrix times `i`.
    H,
    RX(f64),
    RY(f64),
    RZ(f64),
    /// Rotation by `theta` about the (normalized) axis `n`.
    R {
        n: [f64; 3],
        theta: f64,
    },
    CNOT,
    /// Controlled rotation by `theta` about `n`.
    CU {
        n: [f64; 3],
        theta: f64,
    },
}

const GATE_NAMES: [&str; 11] = ["I", "X", "Y", "Z", "H", "RX", "RY", "RZ", "R", "CNOT", "CU"];

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::I => "I",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::RX(_) => "RX",
            Gate::RY(_) => "RY",
            Gate::RZ(_) => "RZ",
            Gate::R { .. } => "R",
            Gate::CNOT => "CNOT",
            Gate::CU { .. } => "CU",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::CNOT | Gate::CU { .. } => 2,
            _ => 1,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::RX(t) | Gate::RY(t) | Gate::RZ(t) => vec![t],
            Gate::R { n, theta } | Gate::CU { n, theta } => vec![n[0], n[1], n[2], theta],
            _ => Vec::new(),
        }
    }

    fn param_count(name: &str) -> Option<usize> {
        match name {
            "I" | "X" | "Y" | "Z" | "H" | "CNOT" => Some(0),
            "RX" | "RY" | "RZ" => Some(1),
            "R" | "CU" => Some(4),
            _ => None,
        }
    }

    fn build(name: &str, p: &[f64]) -> Result<Gate, String> {
        let axis = |p: &[f64]| -> Result<[f64; 3], String> {
            let n = [p[0], p[1], p[2]];
            Axis::normalized(n[0], n[1], n[2]).map_err(|e| format!("bad rotation axis: {e}"))?;
            Ok(n)
        };
        Ok(match name {
            "I" => Gate::I,
            "X" => Gate::X,
            "Y" => Gate::Y,
            "Z" => Gate::Z,
            "H" => Gate::H,
            "CNOT" => Gate::CNOT,
            "RX" => Gate::RX(p[0]),
            "RY" => Gate::RY(p[0]),
            "RZ" => Gate::RZ(p[0]),
            "R" => Gate::R {
                n: axis(p)?,
                theta: p[3],
            },
            "CU" => Gate::CU {
                n: axis(p)?,
                theta: p[3],
            },
            _ => unreachable!("name checked against the registry"),
        })
    }

    /// The single-qubit unitary this gate applies (to the target, for
    /// controlled gates).
    pub fn unitary(&self) -> Unitary {
        let axis = |n: [f64; 3]| Axis::normalized(n[0], n[1], n[2]).expect("validated on parse");
        match *self {
            Gate::I => Unitary::identity(2),
            Gate::X | Gate::CNOT => pauli(Pauli::X),
            Gate::Y => pauli(Pauli::Y),
            Gate::Z => pauli(Pauli::Z),
            Gate::H => rotation_gate(Axis::XZ, PI),
            Gate::RX(t) => rotation_gate(Axis::X, t),
            Gate::RY(t) => rotation_gate(Axis::Y, t),
            Gate::RZ(t) => rotation_gate(Axis::Z, t),
            Gate::R { n, theta } | Gate::CU { n, theta } => rotation_gate(axis(n), theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub operands: Vec<usize>,
}

/// Which qubits a `MEASURE` line reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QubitSelection {
    All,
    List(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub basis: Pauli,
    pub qubits: QubitSelection,
    pub shots: usize,
    pub seed: u64,
}

impl Measurement {
    pub fn qubits(&self, n_qubits: usize) -> Vec<usize> {
        match &self.qubits {
            QubitSelection::All => (0..n_qubits).collect(),
            QubitSelection::List(q) => q.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitProgram {
    pub n_qubits: usize,
    pub instructions: Vec<Instruction>,
    pub measurement: Option<Measurement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses a real number or a multiple of `pi` (`pi`, `-pi/2`, `3*pi/4`,
/// `0.5pi`).
pub fn parse_real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let bad = || format!("invalid number '{t}'");
    let Some(at) = t.find("pi") else {
        let v: f64 = t.parse().map_err(|_| bad())?;
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    };
    let (head, tail) = (t[..at].trim_end_matches('*').trim(), t[at + 2..].trim());
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        None => return Err(bad()),
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
    };
    let v = factor * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_qubit(token: &str, n_qubits: usize) -> Result<usize, String> {
    let q: usize = token
        .parse()
        .map_err(|_| format!("invalid qubit index '{token}'"))?;
    if q >= n_qubits {
        return Err(format!("qubit {q} out of range for {n_qubits} qubits"));
    }
    Ok(q)
}

fn parse_measure(tokens: &[&str], n_qubits: usize) -> Result<Measurement, String> {
    let basis = match tokens.first().copied() {
        Some("X") => Pauli::X,
        Some("Y") => Pauli::Y,
        Some("Z") => Pauli::Z,
        Some(other) => return Err(format!("unknown measurement basis '{other}'")),
        None => return Err("MEASURE needs a basis (X, Y or Z)".into()),
    };
    let qubits = match tokens.get(1).copied() {
        Some("all") => QubitSelection::All,
        Some(list) if !list.contains('=') => {
            let qs = list
                .split(',')
                .map(|t| parse_qubit(t.trim(), n_qubits))
                .collect::<Result<Vec<_>, _>>()?;
            for (k, q) in qs.iter().enumerate() {
                if qs[..k].contains(q) {
                    return Err(format!("qubit {q} measured twice"));
                }
            }
            QubitSelection::List(qs)
        }
        _ => return Err("MEASURE needs 'all' or a qubit list".into()),
    };
    let (mut shots, mut seed) = (None, None);
    for kv in &tokens[2..] {
        match kv.split_once('=') {
            Some(("SHOTS", v)) if shots.is_none() => {
                shots = Some(
                    v.parse::<usize>()
                        .map_err(|_| format!("invalid shot count '{v}'"))?,
                )
            }
            Some(("SEED", v)) if seed.is_none() => {
                seed = Some(
                    v.parse::<u64>()
                        .map_err(|_| format!("invalid seed '{v}'"))?,
                )
            }
            _ => return Err(format!("unexpected MEASURE argument '{kv}'")),
        }
    }
    let shots = shots.ok_or("MEASURE needs SHOTS=k")?;
    if shots == 0 {
        return Err("SHOTS must be at least 1".into());
    }
    Ok(Measurement {
        basis,
        qubits,
        shots,
        seed: seed.ok_or("MEASURE needs SEED=s")?,
    })
}

fn parse_instruction(line: &str, n_qubits: usize) -> Result<Instruction, String> {
    let (name, paren, rest) = match (line.find('('), line.find(char::is_whitespace)) {
        (Some(open), ws) if ws.is_none_or(|w| open < w) => {
            let close = line.find(')').ok_or("unclosed '('")?;
            if close < open {
                return Err("unbalanced parentheses".into());
            }
            let params = line[open + 1..close]
                .split(',')
                .map(parse_real)
                .collect::<Result<Vec<_>, _>>()?;
            (&line[..open], Some(params), &line[close + 1..])
        }
        (_, Some(w)) => (&line[..w], None, &line[w..]),
        (_, None) => (line, None, ""),
    };
    let expected = Gate::param_count(name)
        .ok_or_else(|| format!("unknown gate '{name}' (known: {})", GATE_NAMES.join(", ")))?;
    let arity = if matches!(name, "CNOT" | "CU") { 2 } else { 1 };
    let tokens: Vec<&str> = rest
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.len() < arity {
        return Err(format!(
            "{name} takes {arity} qubit operand(s), got {}",
            tokens.len()
        ));
    }
    let operands = tokens[..arity]
        .iter()
        .map(|t| parse_qubit(t, n_qubits))
        .collect::<Result<Vec<_>, _>>()?;
    if arity == 2 && operands[0] == operands[1] {
        return Err(format!("{name} control and target must differ"));
    }
    let trailing = &tokens[arity..];
    let params = match paren {
        Some(p) if trailing.is_empty() => p,
        Some(_) => return Err("parameters given twice".into()),
        None => trailing
            .iter()
            .map(|t| parse_real(t))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if params.len() != expected {
        if params.len() > expected && expected == 0 {
            return Err(format!(
                "{name} takes {arity} qubit operand(s), got {}",
                tokens.len()
            ));
        }
        return Err(format!(
            "{name} takes {expected} parameter(s), got {}",
            params.len()
        ));
    }
    Ok(Instruction {
        gate: Gate::build(name, &params)?,
        operands,
    })
}

/// Parses a circuit file; errors name the offending 1-based line.
pub fn parse_circuit(text: &str) -> Result<CircuitProgram, ParseError> {
    let mut n_qubits = None;
    let mut instructions = Vec::new();
    let mut measurement: Option<Measurement> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let err = |message: String| ParseError {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "QUBITS" {
            if n_qubits.is_some() {
                return Err(err("QUBITS declared twice".into()));
            }
            let n: usize = match tokens.as_slice() {
                [_, n] => n
                    .parse()
                    .map_err(|_| err(format!("invalid qubit count '{n}'")))?,
                _ => return Err(err("expected 'QUBITS n'".into())),
            };
            if n == 0 || n > MAX_QUBITS {
                return Err(err(format!(
                    "qubit count must be between 1 and {MAX_QUBITS}"
                )));
            }
            n_qubits = Some(n);
            continue;
        }
        let n = n_qubits.ok_or_else(|| err("QUBITS must come before any instruction".into()))?;
        if measurement.is_some() {
            return Err(err("nothing may follow MEASURE".into()));
        }
        if tokens[0] == "MEASURE" {
            measurement = Some(parse_measure(&tokens[1..], n).map_err(err)?);
        } else {
            instructions.push(parse_instruction(line, n).map_err(err)?);
        }
    }
    let n_qubits = n_qubits.ok_or(ParseError {
        line: last_line.max(1),
        message: "missing QUBITS declaration".into(),
    })?;
    Ok(CircuitProgram {
        n_qubits,
        instructions,
        measurement,
    })
}

impl fmt::Display for CircuitProgram {
    /// Canonical text form; parsing it yields an identical program.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n_qubits)?;
        for ins in &self.instructions {
            write!(f, "{}", ins.gate.name())?;
            for q in &ins.operands {
                write!(f, " {q}")?;
            }
            for p in ins.gate.params() {
                write!(f, " {p:?}")?;
            }
            writeln!(f)?;
        }
        if let Some(m) = &self.measurement {
            let basis = match m.basis {
                Pauli::X => "X",
                Pauli::Y => "Y",
                Pauli::Z => "Z",
            };
            let qubits = match &m.qubits {
                QubitSelection::All => "all".to_string(),
                QubitSelection::List(q) => q
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            };
            writeln!(
                f,
                "MEASURE {basis} {qubits} SHOTS={} SEED={}",
                m.shots, m.seed
            )?;
        }
        Ok(())
    }
}

/// One recorded measurement shot.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    /// Product of the per-qubit ±1 eigenvalues.
    pub eigenvalue: f64,
    /// Outcome bits of the measured qubits, in measurement order.
    pub bits: String,
}

impl CircuitProgram {
    /// Applies every gate to `|0…0⟩`.
    pub fn final_state(&self) -> qpath_core::Result<StateVector> {
        let mut state = StateVector::zero(self.n_qubits);
        for ins in &self.instructions {
            let u = ins.gate.unitary();
            match *ins.operands.as_slice() {
                [t] => apply_single(&mut state, &u, t)?,
                [c, t] => apply_controlled(&mut state, &u, c, t)?,
                _ => unreachable!("arity checked on parse"),
            }
        }
        Ok(state)
    }

    /// Samples the `MEASURE` directive on `state`; shots are drawn in order
    /// from one stream seeded with the directive's seed.
    pub fn sample(&self, state: &StateVector) -> qpath_core::Result<Vec<Shot>> {
        let Some(m) = &self.measurement else {
            return Ok(Vec::new());
        };
        let qubits = m.qubits(self.n_qubits);
        let mut rotated = state.clone();
        for &q in &qubits {
            // Map the basis eigenvector for +1 onto |0⟩.
            match m.basis {
                Pauli::Z => {}
                Pauli::X => apply_single(&mut rotated, &Gate::H.unitary(), q)?,
                Pauli::Y => {
                    apply_single(&mut rotated, &Gate::RZ(PI / 2.0).unitary(), q)?;
                    apply_single(&mut rotated, &Gate::H.unitary(), q)?;
                }
            }
        }
        let mut rng = Rng::new(m.seed);
        let outcomes = sample_computational(&rotated, &qubits, m.shots, &mut rng)?;
        let k = qubits.len();
        Ok(outcomes
            .into_iter()
            .map(|o| {
                let bits: String = (0..k)
                    .map(|b| if o >> (k - 1 - b) & 1 == 1 { '1' } else { '0' })
                    .collect();
                let parity = o.count_ones() % 2;
                Shot {
                    eigenvalue: if parity == 0 { 1.0 } else { -1.0 },
                    bits,
                }
            })
            .collect())
    }
}

/// Names accepted in circuit files.
pub fn gate_names() -> &'static [&'static str] {
    &GATE_NAMES
}
