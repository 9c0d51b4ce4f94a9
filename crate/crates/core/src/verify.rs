//! Verification of compiled pulse sequences against ideal gate matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{compile_circuit, gate_matrix, lower_gate, Circuit, CompileOptions, Gate};
use crate::operator::{equal_up_to_global_phase, fidelity, Unitary};
use crate::pulse::sequence_unitary;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub fidelity: f64,
    pub equivalent: bool,
    /// φ with `compiled ≈ e^{iφ} · ideal`, radians in `(-π, π]`.
    pub global_phase: f64,
    /// Max entry deviation after removing the global phase.
    pub max_deviation: f64,
}

/// Compares a synthesized unitary against its ideal.
///
/// Both the fidelity test (`F ≥ 1 − tol`) and the entry-wise test
/// (`max |U − e^{iφ}V| ≤ tol`) are run; a disagreement is an error.
pub fn compare(id: &str, compiled: &Unitary, ideal: &Unitary, tol: f64) -> Result<VerificationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadTolerance(tol));
    }
    let f = fidelity(compiled, ideal)?;
    let m = equal_up_to_global_phase(compiled, ideal, tol)?;
    let by_fidelity = f >= 1.0 - tol;
    if by_fidelity != m.equivalent {
        return Err(Error::InconsistentMetrics { fidelity: f, max_deviation: m.max_deviation });
    }
    Ok(VerificationReport {
        id: id.to_string(),
        fidelity: f,
        equivalent: m.equivalent,
        global_phase: m.phase,
        max_deviation: m.max_deviation,
    })
}

/// Lowers one gate and checks it against its ideal matrix.
pub fn verify_gate(g: &Gate, n: usize, opts: &CompileOptions, tol: f64) -> Result<VerificationReport> {
    let seq = lower_gate(g, n, opts)?;
    compare(&g.to_string(), &sequence_unitary(&seq)?, &gate_matrix(g, n)?, tol)
}

/// Compiles a whole circuit and checks it against [`Circuit::ideal_unitary`].
pub fn verify_circuit(circuit: &Circuit, opts: &CompileOptions, tol: f64) -> Result<VerificationReport> {
    let seq = compile_circuit(circuit, opts)?;
    compare("circuit", &sequence_unitary(&seq)?, &circuit.ideal_unitary()?, tol)
}

/// Per-gate reports followed by the whole-circuit report.
pub fn verify_compilation(
    circuit: &Circuit,
    opts: &CompileOptions,
    tol: f64,
) -> Result<Vec<VerificationReport>> {
    let mut reports = circuit
        .gates()
        .iter()
        .map(|g| verify_gate(g, circuit.qubits(), opts, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.push(verify_circuit(circuit, opts, tol)?);
    Ok(reports)
}

const TOFFOLI_SUPPORT: [(usize, usize); 8] = [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 7), (7, 6)];

/// True iff `|U_ij| > tol` exactly on the Toffoli permutation pattern and
/// `≤ tol` elsewhere. Moduli on the pattern need not be equal.
pub fn approximate_toffoli_pattern(u: &crate::operator::Matrix, tol: f64) -> Result<bool> {
    if u.nrows() != 8 || u.ncols() != 8 {
        return Err(Error::DimensionMismatch(u.nrows(), 8));
    }
    Ok((0..8).all(|i| {
        (0..8).all(|j| {
            let on_pattern = TOFFOLI_SUPPORT.contains(&(i, j));
            (u[(i, j)].norm() > tol) == on_pattern
        })
    }))
}
