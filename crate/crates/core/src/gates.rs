//! Gates, circuits, and their lowering to pulse sequences.
//!
//! Gates are defined by their ideal matrices. Each lowering rule is a pulse
//! sequence whose unitary equals the ideal matrix up to a global phase; the
//! phase is reported by [`lower_gate_traced`] rather than normalized away.
//!
//! Qubit 0 is the most significant bit of a basis-state index.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt::degrees;
use crate::operator::{
    c, check_index, check_spins, embed, equal_up_to_global_phase, rotation_2x2, Matrix, Unitary,
};
use crate::product::Decomposition;
use crate::pulse::{expand_composite_z, parse_qubit, strip_comment, PulseEvent, PulseSequence, NEG_Y, X, Y};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Not,
    V,
    Vdag,
    /// Hadamard.
    H,
    /// Pseudo-Hadamard `h = (1/√2)[[1, 1], [-1, 1]]`.
    PseudoH,
    PseudoHdag,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `diag(1, 1, 1, e^{iφ})` on (control, target).
    CPhase(f64),
    Cnot,
    Cv,
    Cvdag,
    Toffoli,
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        use GateKind::*;
        match self {
            Not | V | Vdag | H | PseudoH | PseudoHdag | Rx(_) | Ry(_) | Rz(_) => 1,
            CPhase(_) | Cnot | Cv | Cvdag | Swap => 2,
            Toffoli => 3,
        }
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            Not => "not",
            V => "v",
            Vdag => "vdag",
            H => "hadamard",
            PseudoH => "h",
            PseudoHdag => "hd",
            Rx(_) => "rx",
            Ry(_) => "ry",
            Rz(_) => "rz",
            CPhase(_) => "cphase",
            Cnot => "cnot",
            Cv => "cv",
            Cvdag => "cvdag",
            Toffoli => "toffoli",
            Swap => "swap",
        }
    }

    pub fn angle(self) -> Option<f64> {
        match self {
            GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) | GateKind::CPhase(a) => Some(a),
            _ => None,
        }
    }

    fn from_name(name: &str, angle: Option<f64>) -> Option<GateKind> {
        use GateKind::*;
        Some(match (name, angle) {
            ("not", None) => Not,
            ("v", None) => V,
            ("vdag", None) => Vdag,
            ("hadamard", None) => H,
            ("h", None) => PseudoH,
            ("hd", None) => PseudoHdag,
            ("rx", Some(a)) => Rx(a),
            ("ry", Some(a)) => Ry(a),
            ("rz", Some(a)) => Rz(a),
            ("cphase", Some(a)) => CPhase(a),
            ("cnot", None) => Cnot,
            ("cv", None) => Cv,
            ("cvdag", None) => Cvdag,
            ("toffoli", None) => Toffoli,
            ("swap", None) => Swap,
            _ => return None,
        })
    }

    fn takes_angle(name: &str) -> bool {
        matches!(name, "rx" | "ry" | "rz" | "cphase")
    }

    /// One representative of every kind, with fixed angles for the rotations.
    #[rustfmt::skip]
    pub fn representatives() -> Vec<GateKind> {
        use GateKind::*;
        vec![
            Not, V, Vdag, H, PseudoH, PseudoHdag,
            Rx(PI / 3.0), Ry(-0.7), Rz(1.9),
            CPhase(PI), CPhase(FRAC_PI_2), CPhase(-2.3),
            Cnot, Cv, Cvdag, Toffoli, Swap,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self> {
        let gate = Gate { kind, qubits };
        gate.check_shape()?;
        Ok(gate)
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.kind.arity();
        let distinct = self.qubits.iter().enumerate().all(|(i, q)| !self.qubits[..i].contains(q));
        if self.qubits.len() != k || !distinct {
            return Err(Error::BadOperands { gate: self.kind.name().into(), expected: k });
        }
        Ok(())
    }

    fn validate(&self, n: usize) -> Result<()> {
        self.check_shape()?;
        for &q in &self.qubits {
            check_index(q, n)?;
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for q in &self.qubits {
            write!(f, " q{q}")?;
        }
        if let Some(a) = self.kind.angle() {
            write!(f, " {}", degrees(a))?;
        }
        Ok(())
    }
}

/// Ordered gate list over `n` qubits, first gate first in time.
///
/// `expect` optionally names a different gate list whose product is the
/// intended whole-circuit unitary; verification then checks the circuit against
/// it instead of against its own gates.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    expect: Option<Vec<Gate>>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(Circuit { n, gates: Vec::new(), expect: None })
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Self::new(n)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn push_expect(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.expect.get_or_insert_with(Vec::new).push(g);
        Ok(())
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn expect(&self) -> Option<&[Gate]> {
        self.expect.as_deref()
    }

    /// Product of the ideal matrices of `expect` if given, else of the gates.
    pub fn ideal_unitary(&self) -> Result<Unitary> {
        let gates = self.expect.as_deref().unwrap_or(&self.gates);
        gates.iter().try_fold(Unitary::identity(self.n)?, |acc, g| acc.then(&gate_matrix(g, self.n)?))
    }
}

fn m2(entries: [Complex64; 4]) -> Matrix {
    Matrix::from_row_slice(2, 2, &entries)
}

fn not_matrix() -> Matrix {
    m2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

fn v_matrix() -> Matrix {
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    m2([p, m, m, p])
}

/// `[[I, 0], [0, block]]` for a 2x2 block on the second qubit.
fn controlled(block: &Matrix) -> Matrix {
    let mut out = Matrix::identity(4, 4);
    out.view_mut((2, 2), (2, 2)).copy_from(block);
    out
}

fn local_matrix(kind: GateKind) -> Matrix {
    let r = FRAC_1_SQRT_2;
    match kind {
        GateKind::Not => not_matrix(),
        GateKind::V => v_matrix(),
        GateKind::Vdag => v_matrix().adjoint(),
        GateKind::H => m2([c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]),
        GateKind::PseudoH => m2([c(r, 0.0), c(r, 0.0), c(-r, 0.0), c(r, 0.0)]),
        GateKind::PseudoHdag => m2([c(r, 0.0), c(-r, 0.0), c(r, 0.0), c(r, 0.0)]),
        GateKind::Rx(a) => rotation_2x2(X, a),
        GateKind::Ry(a) => rotation_2x2(Y, a),
        GateKind::Rz(a) => rotation_2x2([0.0, 0.0, 1.0], a),
        GateKind::CPhase(phi) => {
            let mut m = Matrix::identity(4, 4);
            m[(3, 3)] = Complex64::from_polar(1.0, phi);
            m
        }
        GateKind::Cnot => controlled(&not_matrix()),
        GateKind::Cv => controlled(&v_matrix()),
        GateKind::Cvdag => controlled(&v_matrix().adjoint()),
        GateKind::Toffoli => {
            let mut m = Matrix::identity(8, 8);
            m[(6, 6)] = c(0.0, 0.0);
            m[(7, 7)] = c(0.0, 0.0);
            m[(6, 7)] = c(1.0, 0.0);
            m[(7, 6)] = c(1.0, 0.0);
            m
        }
        GateKind::Swap => {
            let mut m = Matrix::zeros(4, 4);
            for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[(i, j)] = c(1.0, 0.0);
            }
            m
        }
    }
}

/// Ideal matrix of `g` embedded in an `n`-qubit space.
pub fn gate_matrix(g: &Gate, n: usize) -> Result<Unitary> {
    check_spins(n)?;
    g.validate(n)?;
    Ok(Unitary::from_raw(n, embed(&local_matrix(g.kind), &g.qubits, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HadamardStyle {
    /// One off-resonance π pulse about `(x + z)/√2`.
    #[default]
    Tilted,
    /// `45°y · 180°x · 45°(−y)`.
    Sandwich,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZRealization {
    #[default]
    ZRot,
    /// Every z rotation replaced by its three-pulse composite.
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompileOptions {
    pub hadamard: HadamardStyle,
    pub z: ZRealization,
}

/// Time order of the pseudo-Hadamard pair around a controlled phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichOrder {
    /// `h`, phase, `h⁻¹`: reproduces the controlled gate.
    Verified,
    /// `h⁻¹`, phase, `h`: leaves a conditional sign, e.g. `diag(I, −X)` for π.
    Reversed,
}

fn pseudo_h(t: usize) -> PulseEvent {
    PulseEvent::rf(t, Y, -FRAC_PI_2)
}

fn pseudo_h_dag(t: usize) -> PulseEvent {
    PulseEvent::rf(t, Y, FRAC_PI_2)
}

fn cphase_events(ctl: usize, tgt: usize, phi: f64) -> [PulseEvent; 3] {
    [
        PulseEvent::zrot(ctl, phi / 2.0),
        PulseEvent::zrot(tgt, phi / 2.0),
        PulseEvent::coupling(ctl, tgt, -phi / 2.0),
    ]
}

/// Controlled gate built as a pseudo-Hadamard sandwich around `CPHASE(φ)`.
pub fn controlled_phase_sandwich(ctl: usize, tgt: usize, phi: f64, order: SandwichOrder) -> Vec<PulseEvent> {
    let (first, last) = match order {
        SandwichOrder::Verified => (pseudo_h(tgt), pseudo_h_dag(tgt)),
        SandwichOrder::Reversed => (pseudo_h_dag(tgt), pseudo_h(tgt)),
    };
    let mut events = vec![first];
    events.extend(cphase_events(ctl, tgt, phi));
    events.push(last);
    events
}

fn lower_events(kind: GateKind, q: &[usize], opts: &CompileOptions, out: &mut Vec<PulseEvent>) {
    use GateKind::*;
    let cnot = |a: usize, b: usize, out: &mut Vec<PulseEvent>| {
        out.extend(controlled_phase_sandwich(a, b, PI, SandwichOrder::Verified))
    };
    match kind {
        Not => out.push(PulseEvent::rf(q[0], X, PI)),
        V => out.push(PulseEvent::rf(q[0], X, FRAC_PI_2)),
        Vdag => out.push(PulseEvent::rf(q[0], X, -FRAC_PI_2)),
        H => match opts.hadamard {
            HadamardStyle::Tilted => out.push(PulseEvent::rf(q[0], [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2], PI)),
            HadamardStyle::Sandwich => out.extend([
                PulseEvent::rf(q[0], Y, FRAC_PI_4),
                PulseEvent::rf(q[0], X, PI),
                PulseEvent::rf(q[0], NEG_Y, FRAC_PI_4),
            ]),
        },
        PseudoH => out.push(pseudo_h(q[0])),
        PseudoHdag => out.push(pseudo_h_dag(q[0])),
        Rx(a) => out.push(PulseEvent::rf(q[0], X, a)),
        Ry(a) => out.push(PulseEvent::rf(q[0], Y, a)),
        Rz(a) => out.push(PulseEvent::zrot(q[0], a)),
        CPhase(phi) => out.extend(cphase_events(q[0], q[1], phi)),
        Cnot => cnot(q[0], q[1], out),
        Cv => out.extend(controlled_phase_sandwich(q[0], q[1], FRAC_PI_2, SandwichOrder::Verified)),
        Cvdag => out.extend(controlled_phase_sandwich(q[0], q[1], -FRAC_PI_2, SandwichOrder::Verified)),
        Toffoli => {
            let (a, b, t) = (q[0], q[1], q[2]);
            lower_events(Cv, &[b, t], opts, out);
            cnot(a, b, out);
            lower_events(Cvdag, &[b, t], opts, out);
            cnot(a, b, out);
            lower_events(Cv, &[a, t], opts, out);
        }
        Swap => {
            cnot(q[0], q[1], out);
            cnot(q[1], q[0], out);
            cnot(q[0], q[1], out);
        }
    }
}

fn finish(seq: PulseSequence, opts: &CompileOptions) -> PulseSequence {
    match opts.z {
        ZRealization::ZRot => seq,
        ZRealization::Composite => expand_composite_z(&seq),
    }
}

/// Pulse sequence for one gate on an `n`-qubit register.
pub fn lower_gate(g: &Gate, n: usize, opts: &CompileOptions) -> Result<PulseSequence> {
    g.validate(n)?;
    let mut events = Vec::new();
    lower_events(g.kind, &g.qubits, opts, &mut events);
    Ok(finish(PulseSequence::from_events(n, events)?, opts))
}

/// A lowered gate with the global phase relating its pulses to its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweredGate {
    pub gate: Gate,
    pub sequence: PulseSequence,
    /// φ with `sequence_unitary = e^{iφ} · gate_matrix`.
    pub global_phase: f64,
}

pub fn lower_gate_traced(g: &Gate, n: usize, opts: &CompileOptions) -> Result<LoweredGate> {
    let sequence = lower_gate(g, n, opts)?;
    let m = equal_up_to_global_phase(
        &crate::pulse::sequence_unitary(&sequence)?,
        &gate_matrix(g, n)?,
        crate::verify::DEFAULT_TOL,
    )?;
    Ok(LoweredGate { gate: g.clone(), sequence, global_phase: m.phase })
}

/// Pulses realizing `exp(−i Σ θ_t B_t)` for longitudinal terms of weight ≤ 2.
///
/// The `½E` term only contributes a global phase and is dropped. Weight-3 and
/// higher z strings have no coupling Hamiltonian to drive them.
pub fn lower_longitudinal(angles: &Decomposition, opts: &CompileOptions) -> Result<PulseSequence> {
    let n = angles.spins();
    let mut events = Vec::new();
    for (term, theta) in angles.iter() {
        if !term.is_longitudinal() {
            return Err(Error::BadTerm(term.to_string()));
        }
        if theta == 0.0 {
            continue;
        }
        let spins = term.active_spins();
        match spins[..] {
            [] => {}
            [k] => events.push(PulseEvent::zrot(k, theta)),
            [a, b] => events.push(PulseEvent::coupling(a, b, theta)),
            _ => return Err(Error::NoDirectHamiltonian { term: term.to_string(), weight: spins.len() }),
        }
    }
    Ok(finish(PulseSequence::from_events(n, events)?, opts))
}

pub fn compile_circuit(circuit: &Circuit, opts: &CompileOptions) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new(circuit.n)?;
    for g in &circuit.gates {
        seq.append(&lower_gate(g, circuit.n, opts)?)?;
    }
    Ok(seq)
}

pub fn compile_circuit_traced(circuit: &Circuit, opts: &CompileOptions) -> Result<Vec<LoweredGate>> {
    circuit.gates.iter().map(|g| lower_gate_traced(g, circuit.n, opts)).collect()
}

fn parse_gate(toks: &[&str]) -> std::result::Result<Gate, String> {
    let name = toks[0];
    let (qtoks, angle) = if GateKind::takes_angle(name) {
        let (last, rest) = toks[1..].split_last().ok_or_else(|| format!("'{name}' needs an angle"))?;
        let deg: f64 = last.parse().map_err(|_| format!("bad angle '{last}'"))?;
        if !deg.is_finite() {
            return Err(format!("bad angle '{last}'"));
        }
        (rest, Some(deg.to_radians()))
    } else {
        (&toks[1..], None)
    };
    let kind = GateKind::from_name(name, angle).ok_or_else(|| format!("unknown gate '{name}'"))?;
    let qubits = qtoks.iter().map(|t| parse_qubit(t)).collect::<std::result::Result<Vec<_>, _>>()?;
    Gate::new(kind, qubits).map_err(|e| e.to_string())
}

/// Parses the circuit text format: a `qubits <n>` header, then one gate per
/// line (`cnot q0 q1`, `rx q0 60`, ...). Lines starting with `expect` name the
/// intended whole-circuit gates.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |reason: String| Error::Parse { line: line_no, reason };
        match circuit.as_mut() {
            None => {
                if toks.len() != 2 || toks[0] != "qubits" {
                    return Err(err("expected header 'qubits <n>'".into()));
                }
                let n: usize = toks[1].parse().map_err(|_| err(format!("bad qubit count '{}'", toks[1])))?;
                circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
            }
            Some(cir) => {
                let (is_expect, gate_toks) = match toks[0] {
                    "expect" if toks.len() > 1 => (true, &toks[1..]),
                    "expect" => return Err(err("'expect' needs a gate".into())),
                    _ => (false, &toks[..]),
                };
                let gate = parse_gate(gate_toks).map_err(err)?;
                let pushed = if is_expect { cir.push_expect(gate) } else { cir.push(gate) };
                pushed.map_err(|e| err(e.to_string()))?;
            }
        }
    }
    circuit.ok_or(Error::Parse { line: 0, reason: "missing 'qubits <n>' header".into() })
}

pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n);
    for g in &circuit.gates {
        out.push_str(&format!("{g}\n"));
    }
    for g in circuit.expect.iter().flatten() {
        out.push_str(&format!("expect {g}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{fidelity, max_abs_diff};
    use crate::pulse::sequence_unitary;

    fn gate(kind: GateKind, qubits: &[usize]) -> Gate {
        Gate::new(kind, qubits.to_vec()).unwrap()
    }

    #[test]
    fn printed_one_qubit_matrices() {
        let r = FRAC_1_SQRT_2;
        let not = gate_matrix(&gate(GateKind::Not, &[0]), 1).unwrap();
        assert_eq!(not.matrix(), &not_matrix());
        let h = gate_matrix(&gate(GateKind::PseudoH, &[0]), 1).unwrap();
        assert!(max_abs_diff(h.matrix(), &m2([c(r, 0.0), c(r, 0.0), c(-r, 0.0), c(r, 0.0)])) < 1e-15);
        let v = gate_matrix(&gate(GateKind::V, &[0]), 1).unwrap();
        assert!(max_abs_diff(&(v.matrix() * v.matrix()), &not_matrix()) < 1e-15);
    }

    #[test]
    fn cphase_and_embedding() {
        let g = gate(GateKind::CPhase(0.3), &[0, 1]);
        let u = gate_matrix(&g, 2).unwrap();
        assert!((u.matrix()[(3, 3)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        // control on the less significant qubit: CNOT(1, 0) maps |01> <-> |11>
        let u = gate_matrix(&gate(GateKind::Cnot, &[1, 0]), 2).unwrap();
        assert_eq!(u.matrix()[(3, 1)], c(1.0, 0.0));
        assert_eq!(u.matrix()[(2, 2)], c(1.0, 0.0));
    }

    #[test]
    fn operands_are_validated() {
        assert!(Gate::new(GateKind::Cnot, vec![0, 0]).is_err());
        assert!(Gate::new(GateKind::Not, vec![0, 1]).is_err());
        let g = gate(GateKind::Cnot, &[0, 2]);
        assert_eq!(gate_matrix(&g, 2), Err(Error::SpinIndex { index: 2, n: 2 }));
        assert!(lower_gate(&g, 2, &CompileOptions::default()).is_err());
    }

    #[test]
    fn not_lowering_phase() {
        let lowered = lower_gate_traced(&gate(GateKind::Not, &[0]), 1, &CompileOptions::default()).unwrap();
        assert_eq!(lowered.sequence.events(), &[PulseEvent::rf(0, X, PI)]);
        assert!((lowered.global_phase + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn cnot_lowering_shape_and_phase() {
        let lowered =
            lower_gate_traced(&gate(GateKind::Cnot, &[0, 1]), 2, &CompileOptions::default()).unwrap();
        assert_eq!(lowered.sequence.len(), 5);
        assert_eq!(lowered.sequence.events()[0], PulseEvent::rf(1, Y, -FRAC_PI_2));
        assert!((lowered.global_phase + FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn reversed_sandwich_is_conditional_sign() {
        let seq = PulseSequence::from_events(2, controlled_phase_sandwich(0, 1, PI, SandwichOrder::Reversed))
            .unwrap();
        let u = sequence_unitary(&seq).unwrap();
        let mut minus_x = Matrix::identity(4, 4);
        minus_x.view_mut((2, 2), (2, 2)).copy_from(&(-not_matrix()));
        let m = crate::operator::phase_match(u.matrix(), &minus_x, 1e-10).unwrap();
        assert!(m.equivalent);
        let cnot = gate_matrix(&gate(GateKind::Cnot, &[0, 1]), 2).unwrap();
        assert!(fidelity(&u, &cnot).unwrap() < 1e-12);
    }

    #[test]
    fn ccz_has_no_direct_lowering() {
        let mut ccz = Matrix::identity(8, 8);
        ccz[(7, 7)] = c(-1.0, 0.0);
        let angles = crate::product::decompose_diagonal_phase(&Unitary::new(ccz).unwrap()).unwrap();
        match lower_longitudinal(&angles, &CompileOptions::default()) {
            Err(Error::NoDirectHamiltonian { term, weight }) => {
                assert_eq!(term, "4IzRzSz");
                assert_eq!(weight, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_spin_phase_lowers_through_decomposition() {
        let target = gate_matrix(&gate(GateKind::CPhase(1.2), &[0, 1]), 2).unwrap();
        let angles = crate::product::decompose_diagonal_phase(&target).unwrap();
        let seq = lower_longitudinal(&angles, &CompileOptions::default()).unwrap();
        assert!(seq.len() <= 3);
        let f = fidelity(&sequence_unitary(&seq).unwrap(), &target).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_examples() {
        let c1 = parse_circuit("qubits 2\ncnot q0 q1").unwrap();
        assert_eq!(c1.qubits(), 2);
        assert_eq!(c1.gates(), &[gate(GateKind::Cnot, &[0, 1])]);

        let c2 = parse_circuit("qubits 1\nrx q0 60").unwrap();
        match c2.gates()[0].kind {
            GateKind::Rx(a) => assert!((a - PI / 3.0).abs() < 1e-15),
            other => panic!("{other:?}"),
        }

        let c3 = parse_circuit("qubits 3\ntoffoli q0 q1 q2").unwrap();
        assert_eq!(c3.gates()[0].kind, GateKind::Toffoli);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("cnot q0 q1", 1),
            ("qubits 2\nfoo q0", 2),
            ("qubits 2\n# c\ncnot q0 q0", 3),
            ("qubits 2\nrx q0", 2),
            ("qubits 2\nrx q0 abc", 2),
            ("qubits 2\nnot q5", 2),
            ("qubits 2\nexpect", 2),
            ("qubits 0", 1),
        ];
        for (text, line) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn circuit_text_round_trip() {
        let text = "qubits 3\nnot q0\nv q1\nvdag q2\nhadamard q0\nh q1\nhd q2\nrx q0 60\nry q1 -22.5\nrz q2 12.25\ncphase q0 q2 90\ncnot q1 q0\ncv q0 q1\ncvdag q2 q1\ntoffoli q2 q0 q1\nswap q0 q2\nexpect toffoli q0 q1 q2\n";
        let circuit = parse_circuit(text).unwrap();
        assert_eq!(serialize_circuit(&circuit), text);
        assert_eq!(parse_circuit(&serialize_circuit(&circuit)).unwrap(), circuit);
    }

    #[test]
    fn expect_overrides_ideal() {
        let circuit = parse_circuit("qubits 2\nnot q0\nexpect cnot q0 q1\n").unwrap();
        let cnot = gate_matrix(&gate(GateKind::Cnot, &[0, 1]), 2).unwrap();
        assert_eq!(circuit.ideal_unitary().unwrap(), cnot);
    }
}
