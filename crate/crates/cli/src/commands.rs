use num_complex::Complex64;
use serde_json::Value;

use nmrgate::gates::{compile_circuit_traced, parse_circuit, LoweredGate};
use nmrgate::pulse::{expand_composite_z, CouplingTable};
use nmrgate::sim::{apply_sequence, pseudo_pure_temporal, pure_state, thermal_state, DeviationMatrix};
use nmrgate::verify::verify_compilation;
use nmrgate::{CompileOptions, Error, Matrix};

use crate::report;
use crate::Format;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or out-of-contract input: exit 2.
    Input(String),
    /// A verification could not be trusted: exit 1.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentMetrics { .. } => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: 0 }
    }
}

fn lower_all(
    text: &str,
    opts: CompileOptions,
    expand_z: bool,
) -> Result<(usize, Vec<LoweredGate>), CliError> {
    let circuit = parse_circuit(text)?;
    let mut lowered = compile_circuit_traced(&circuit, &opts)?;
    if expand_z {
        for g in &mut lowered {
            g.sequence = expand_composite_z(&g.sequence);
        }
    }
    Ok((circuit.qubits(), lowered))
}

pub fn compile(
    text: &str,
    opts: CompileOptions,
    expand_z: bool,
    couplings: Option<&str>,
    format: Format,
) -> Result<Outcome, CliError> {
    let (n, lowered) = lower_all(text, opts, expand_z)?;
    let table = couplings.map(CouplingTable::parse).transpose()?;
    Ok(Outcome::ok(report::compile(n, &lowered, table.as_ref(), format)))
}

pub fn initial_state(selector: &str, n: usize) -> Result<DeviationMatrix, CliError> {
    let state = match selector {
        "thermal" => thermal_state(n)?,
        "pseudopure" => pseudo_pure_temporal(n)?,
        other => {
            let bits = other
                .strip_prefix("ket:")
                .ok_or_else(|| CliError::Input(format!("unknown initial state '{other}'")))?;
            if bits.len() != n {
                return Err(CliError::Input(format!(
                    "initial state '{other}' has {} qubits, circuit has {n}",
                    bits.len()
                )));
            }
            pure_state(bits)?
        }
    };
    Ok(state)
}

pub fn simulate(text: &str, opts: CompileOptions, init: &str, format: Format) -> Result<Outcome, CliError> {
    let circuit = parse_circuit(text)?;
    let n = circuit.qubits();
    let start = initial_state(init, n)?;
    let seq = nmrgate::compile_circuit(&circuit, &opts)?;
    let end = apply_sequence(&start, &seq)?;
    Ok(Outcome::ok(report::state(init, &end, format)))
}

pub fn verify(text: &str, opts: CompileOptions, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let circuit = parse_circuit(text)?;
    let reports = verify_compilation(&circuit, &opts, tol)?;
    let all_ok = reports.iter().all(|r| r.equivalent);
    Ok(Outcome { output: report::verification(&reports, format), code: if all_ok { 0 } else { 1 } })
}

fn entry(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(x) => Some(Complex64::new(x.as_f64()?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            Some(Complex64::new(parts[0].as_f64()?, parts[1].as_f64()?))
        }
        _ => None,
    }
}

/// Reads a square matrix given as JSON rows; entries are numbers or `[re, im]`.
pub fn parse_matrix(text: &str) -> Result<Matrix, CliError> {
    let bad = |why: &str| CliError::Input(format!("matrix input: {why}"));
    let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let rows = value.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    let dim = rows.len();
    let mut m = Matrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == dim).ok_or_else(|| bad("matrix must be square"))?;
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = entry(v).ok_or_else(|| bad("entries must be numbers or [re, im] pairs"))?;
        }
    }
    Ok(m)
}

pub fn decompose(
    matrix: Option<&str>,
    init: Option<&str>,
    spins: usize,
    orders: bool,
    format: Format,
) -> Result<Outcome, CliError> {
    let (m, n) = match (matrix, init) {
        (Some(text), None) => {
            let m = parse_matrix(text)?;
            let n = nmrgate::product::spins_of(&m)?;
            (m, n)
        }
        (None, Some(sel)) => {
            let n = sel.strip_prefix("ket:").map_or(spins, str::len);
            (initial_state(sel, n)?.matrix().clone(), n)
        }
        _ => return Err(CliError::Input("decompose takes exactly one of a matrix file or --init".into())),
    };
    let d = nmrgate::decompose(&m, n)?;
    let histogram = orders.then(|| nmrgate::coherence_orders(&d));
    Ok(Outcome::ok(report::decomposition(&d, histogram.as_ref(), format)))
}
