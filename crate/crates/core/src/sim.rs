//! Density-matrix states and their evolution under pulse sequences.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::operator::{
    c, check_index, check_spins, is_hermitian, Axis, Matrix, SpinOperator, Unitary, STRUCTURE_TOL,
};
use crate::product::{decompose, element_order, spins_of, Decomposition};
use crate::pulse::{PulseEvent, PulseSequence};

/// Whether a state is a trace-one density matrix or a traceless deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Normalized,
    Deviation,
}

impl StateKind {
    pub fn label(self) -> &'static str {
        match self {
            StateKind::Normalized => "normalized",
            StateKind::Deviation => "deviation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationMatrix {
    n: usize,
    kind: StateKind,
    rho: Matrix,
}

impl DeviationMatrix {
    /// Checks Hermiticity and that the trace matches `kind`, both to 1e-12.
    pub fn new(rho: Matrix, kind: StateKind) -> Result<Self> {
        let n = spins_of(&rho)?;
        is_hermitian(&rho, STRUCTURE_TOL).map_err(Error::NotHermitian)?;
        let want = match kind {
            StateKind::Normalized => 1.0,
            StateKind::Deviation => 0.0,
        };
        let tr = rho.trace();
        if (tr - c(want, 0.0)).norm() > STRUCTURE_TOL {
            return Err(Error::BadTrace { want, got: tr.re });
        }
        Ok(DeviationMatrix { n, kind, rho })
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rho
    }

    /// Diagonal entries (basis populations), real parts.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.rho.nrows()).map(|i| self.rho[(i, i)].re).collect()
    }

    pub fn decomposition(&self) -> Decomposition {
        decompose(&self.rho, self.n).expect("state invariants guarantee a Hermitian 2^n matrix")
    }
}

/// A normalized pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: nalgebra::DVector<num_complex::Complex64>,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<num_complex::Complex64>) -> Result<Self> {
        spins_for_len(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotUnitary((norm - 1.0).abs()));
        }
        Ok(PureStateVector { amplitudes: nalgebra::DVector::from_vec(amplitudes) })
    }

    /// Computational basis state from a bit string such as `"01"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        if check_spins(n).is_err() || !bits.chars().all(|ch| ch == '0' || ch == '1') {
            return Err(Error::BadBitString(bits.to_string()));
        }
        let index = usize::from_str_radix(bits, 2).map_err(|_| Error::BadBitString(bits.to_string()))?;
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &[num_complex::Complex64] {
        self.amplitudes.as_slice()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DeviationMatrix {
        let rho = &self.amplitudes * self.amplitudes.adjoint();
        let n = spins_for_len(self.amplitudes.len()).expect("validated on construction");
        DeviationMatrix { n, kind: StateKind::Normalized, rho }
    }
}

fn spins_for_len(len: usize) -> Result<usize> {
    crate::operator::spins_for_dim(len)
}

/// Thermal deviation `Σ_k Iz(k)`.
pub fn thermal_state(n: usize) -> Result<DeviationMatrix> {
    check_spins(n)?;
    let dim = 1 << n;
    let rho = (0..n)
        .fold(Matrix::zeros(dim, dim), |acc, k| acc + SpinOperator { spin: k, axis: Axis::Z, n }.matrix());
    Ok(DeviationMatrix { n, kind: StateKind::Deviation, rho })
}

pub fn pure_state(bits: &str) -> Result<DeviationMatrix> {
    Ok(PureStateVector::basis(bits)?.density())
}

fn permutation_unitary(perm: &[usize]) -> Unitary {
    let dim = perm.len();
    let mut m = Matrix::zeros(dim, dim);
    for (from, &to) in perm.iter().enumerate() {
        m[(to, from)] = c(1.0, 0.0);
    }
    Unitary::from_raw(crate::operator::spins_for_dim(dim).expect("power of two"), m)
}

/// Pseudo-pure `|00⟩` deviation by temporal averaging of three experiments.
///
/// Each experiment permutes the thermal populations of `|01⟩, |10⟩, |11⟩`
/// cyclically; the average is `(4|00⟩⟨00| − E)/3 = diag(1, −⅓, −⅓, −⅓)`.
pub fn pseudo_pure_temporal(n: usize) -> Result<DeviationMatrix> {
    if n != 2 {
        return Err(Error::UnsupportedSpinCount(n));
    }
    let thermal = thermal_state(2)?;
    let cycles = [[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    let runs: Vec<Matrix> =
        cycles.iter().map(|p| permutation_unitary(p).conjugate(thermal.matrix())).collect();
    let sum = runs.iter().fold(Matrix::zeros(4, 4), |acc, r| acc + r);
    let rho = sum.map(|z| c(z.re / 3.0, z.im / 3.0));
    Ok(DeviationMatrix { n: 2, kind: StateKind::Deviation, rho })
}

/// Keeps only matrix elements whose net coherence order is in `allowed`.
pub fn crush(rho: &DeviationMatrix, allowed: &BTreeSet<i32>) -> Result<DeviationMatrix> {
    if !allowed.contains(&0) {
        return Err(Error::CrushWithoutZeroOrder);
    }
    let dim = rho.rho.nrows();
    let filtered = Matrix::from_fn(dim, dim, |a, b| {
        if allowed.contains(&element_order(a, b)) {
            rho.rho[(a, b)]
        } else {
            c(0.0, 0.0)
        }
    });
    Ok(DeviationMatrix { n: rho.n, kind: rho.kind, rho: filtered })
}

/// Applies each event in time order: `ρ ↦ UρU†` for unitary events, the
/// coherence filter for crushers.
pub fn apply_sequence(rho: &DeviationMatrix, seq: &PulseSequence) -> Result<DeviationMatrix> {
    if seq.spins() != rho.n {
        return Err(Error::DimensionMismatch(1 << rho.n, 1 << seq.spins()));
    }
    seq.events().iter().try_fold(rho.clone(), |state, e| match e {
        PulseEvent::Crush { orders } => crush(&state, orders),
        unitary => apply_unitary(&state, &unitary.unitary(seq.spins())?),
    })
}

pub fn apply_unitary(rho: &DeviationMatrix, u: &Unitary) -> Result<DeviationMatrix> {
    if u.spins() != rho.n {
        return Err(Error::DimensionMismatch(1 << rho.n, u.dim()));
    }
    Ok(DeviationMatrix { n: rho.n, kind: rho.kind, rho: u.conjugate(&rho.rho) })
}

/// `(⟨Ix⟩, ⟨Iy⟩, ⟨Iz⟩)` for one spin, as `tr(ρ·I_a)`.
pub fn magnetization(rho: &DeviationMatrix, spin: usize) -> Result<[f64; 3]> {
    check_index(spin, rho.n)?;
    let mut out = [0.0; 3];
    for (slot, axis) in out.iter_mut().zip(Axis::ALL) {
        let op = SpinOperator { spin, axis, n: rho.n }.matrix();
        *slot = (&rho.rho * op).trace().re;
    }
    Ok(out)
}
