//! Dense complex operator algebra for up to four spin-1/2 nuclei.
//!
//! Spin 0 is the most significant bit of a basis-state index, so operators on
//! spin `k` are embedded as `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` in slot `k`.
//! Every propagator follows `U = exp(-iθG)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

pub const MAX_SPINS: usize = 4;

/// Tolerance used when validating unitarity and Hermiticity of inputs.
pub const STRUCTURE_TOL: f64 = 1e-12;

const AXIS_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn check_spins(n: usize) -> Result<()> {
    if (1..=MAX_SPINS).contains(&n) {
        Ok(())
    } else {
        Err(Error::SpinCount(n))
    }
}

pub(crate) fn check_index(index: usize, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::SpinIndex { index, n })
    }
}

/// Spin count for a square matrix of dimension `dim`, if `dim = 2^n` with `1 <= n <= 4`.
pub fn spins_for_dim(dim: usize) -> Result<usize> {
    (1..=MAX_SPINS).find(|&n| 1 << n == dim).ok_or(Error::BadDimension(dim))
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &Matrix, tol: f64) -> std::result::Result<(), f64> {
    let dev = max_abs_diff(m, &m.adjoint());
    if dev <= tol {
        Ok(())
    } else {
        Err(dev)
    }
}

/// Cartesian axis of a spin operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Pauli matrix for this axis (without the factor 1/2).
    pub fn pauli(self) -> Matrix {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match self {
            Axis::X => Matrix::from_row_slice(2, 2, &[z, o, o, z]),
            Axis::Y => Matrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
            Axis::Z => Matrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    pub fn unit_vector(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Embeds a 2x2 operator on `spin` within an `n`-spin space.
pub fn embed_single(op: &Matrix, spin: usize, n: usize) -> Matrix {
    let id = Matrix::identity(2, 2);
    let mut out = Matrix::identity(1, 1);
    for k in 0..n {
        out = out.kronecker(if k == spin { op } else { &id });
    }
    out
}

/// Embeds a `2^k x 2^k` operator acting on `operands` (in operand order, first
/// operand most significant) into an `n`-spin space.
pub fn embed(op: &Matrix, operands: &[usize], n: usize) -> Matrix {
    let dim = 1usize << n;
    let k = operands.len();
    debug_assert_eq!(op.nrows(), 1 << k);
    let sub_index =
        |state: usize| operands.iter().fold(0usize, |acc, &q| (acc << 1) | ((state >> (n - 1 - q)) & 1));
    let mask: usize = operands.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    Matrix::from_fn(dim, dim, |row, col| {
        if row & !mask != col & !mask {
            c(0.0, 0.0)
        } else {
            op[(sub_index(row), sub_index(col))]
        }
    })
}

/// A single-spin angular momentum operator `I_axis` on spin `spin` of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinOperator {
    pub spin: usize,
    pub axis: Axis,
    pub n: usize,
}

impl SpinOperator {
    pub fn new(spin: usize, axis: Axis, n: usize) -> Result<Self> {
        check_spins(n)?;
        check_index(spin, n)?;
        Ok(SpinOperator { spin, axis, n })
    }

    pub fn matrix(&self) -> Matrix {
        embed_single(&(self.axis.pauli() * c(0.5, 0.0)), self.spin, self.n)
    }
}

/// A dense unitary on `n` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    n: usize,
    mat: Matrix,
}

impl Unitary {
    /// Wraps a matrix after checking that it is square, `2^n`-dimensional and
    /// unitary to within [`STRUCTURE_TOL`] per entry.
    pub fn new(mat: Matrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        let n = spins_for_dim(mat.nrows())?;
        let dev = max_abs_diff(&(mat.adjoint() * &mat), &Matrix::identity(mat.nrows(), mat.ncols()));
        if dev > STRUCTURE_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Unitary { n, mat })
    }

    pub(crate) fn from_raw(n: usize, mat: Matrix) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n);
        Unitary { n, mat }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(Unitary::from_raw(n, Matrix::identity(1 << n, 1 << n)))
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary::from_raw(self.n, self.mat.adjoint())
    }

    /// `self` followed in time by `later`, i.e. the product `later · self`.
    pub fn then(&self, later: &Unitary) -> Result<Unitary> {
        if self.dim() != later.dim() {
            return Err(Error::DimensionMismatch(self.dim(), later.dim()));
        }
        Ok(Unitary::from_raw(self.n, &later.mat * &self.mat))
    }

    /// `e^{iφ} · self`.
    pub fn with_phase(&self, phase: f64) -> Unitary {
        Unitary::from_raw(self.n, &self.mat * Complex64::from_polar(1.0, phase))
    }

    /// Conjugates an operator: `U · op · U†`.
    pub fn conjugate(&self, op: &Matrix) -> Matrix {
        &self.mat * op * self.mat.adjoint()
    }
}

fn unit_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > AXIS_TOL {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(axis)
}

/// Single-spin rotation `exp(-iθ (a·σ)/2)` as a 2x2 matrix.
pub(crate) fn rotation_2x2(axis: [f64; 3], angle: f64) -> Matrix {
    let (s, co) = (angle / 2.0).sin_cos();
    let [ax, ay, az] = axis;
    // cos(θ/2)·1 - i sin(θ/2)(ax σx + ay σy + az σz)
    Matrix::from_row_slice(2, 2, &[c(co, -s * az), c(-s * ay, -s * ax), c(s * ay, -s * ax), c(co, s * az)])
}

/// `exp(-i·angle·(axis·(Ix, Iy, Iz)))` on `spin` of an `n`-spin system.
pub fn rotation_unitary(spin: usize, axis: [f64; 3], angle: f64, n: usize) -> Result<Unitary> {
    check_spins(n)?;
    check_index(spin, n)?;
    let axis = unit_axis(axis)?;
    Ok(Unitary::from_raw(n, embed_single(&rotation_2x2(axis, angle), spin, n)))
}

/// `exp(-i·angle·2IzSz)` on the spin pair, identity elsewhere.
pub fn coupling_unitary(pair: (usize, usize), angle: f64, n: usize) -> Result<Unitary> {
    check_spins(n)?;
    let (a, b) = pair;
    check_index(a, n)?;
    check_index(b, n)?;
    if a == b {
        return Err(Error::SamePair(a));
    }
    let dim = 1 << n;
    let diag = (0..dim).map(|state| {
        let za = (state >> (n - 1 - a)) & 1;
        let zb = (state >> (n - 1 - b)) & 1;
        // 2IzSz eigenvalue is +1/2 for parallel spins, -1/2 otherwise
        let eig = if za == zb { 0.5 } else { -0.5 };
        Complex64::from_polar(1.0, -angle * eig)
    });
    Ok(Unitary::from_raw(n, Matrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, diag))))
}

/// `exp(-i·angle·Iz)` on one spin. Diagonal, so built directly.
pub fn z_rotation_unitary(spin: usize, angle: f64, n: usize) -> Result<Unitary> {
    rotation_unitary(spin, Axis::Z.unit_vector(), angle, n)
}

/// Outcome of a global-phase comparison `U ≟ e^{iφ}V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub equivalent: bool,
    /// φ in `(-π, π]`, extracted from the largest-magnitude entry of `V`.
    pub phase: f64,
    /// `max |U - e^{iφ}V|` over entries.
    pub max_deviation: f64,
}

impl PhaseMatch {
    pub fn global_phase(&self) -> Option<f64> {
        self.equivalent.then_some(self.phase)
    }
}

/// Tests whether `u = e^{iφ} v` entry-wise to `tol` for some φ.
pub fn equal_up_to_global_phase(u: &Unitary, v: &Unitary, tol: f64) -> Result<PhaseMatch> {
    phase_match(u.matrix(), v.matrix(), tol)
}

pub(crate) fn phase_match(u: &Matrix, v: &Matrix, tol: f64) -> Result<PhaseMatch> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch(u.nrows(), v.nrows()));
    }
    // first maximal entry in row-major order
    let mut best = (0usize, 0usize, -1.0f64);
    for i in 0..v.nrows() {
        for j in 0..v.ncols() {
            let m = v[(i, j)].norm();
            if m > best.2 {
                best = (i, j, m);
            }
        }
    }
    let (i, j, _) = best;
    let ratio = u[(i, j)] / v[(i, j)];
    let phase = if ratio.norm() == 0.0 { 0.0 } else { wrap_angle(ratio.arg()) };
    let max_deviation = max_abs_diff(u, &(v * Complex64::from_polar(1.0, phase)));
    Ok(PhaseMatch { equivalent: max_deviation <= tol, phase, max_deviation })
}

/// Gate fidelity `|tr(U†V)| / dim`.
pub fn fidelity(u: &Unitary, v: &Unitary) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let tr = (u.matrix().adjoint() * v.matrix()).trace();
    Ok((tr.norm() / u.dim() as f64).min(1.0))
}
