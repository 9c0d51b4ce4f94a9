//! Product-operator basis for spin-1/2 systems.
//!
//! A term is a per-spin list of factors from `{E, x, y, z}`. With `k` non-identity
//! factors its matrix is `2^{k-1} ⊗ (σ/2 or 1)`, except the all-identity term which
//! is fixed at `E/2` for every spin count. Every term then satisfies
//! `tr(B²) = 2^{n-2}` and distinct terms are trace-orthogonal, so a coefficient is
//! a single scaled trace.
//!
//! Note that for `n > 2` the `½E` coefficient is not `tr(ρ)`; recomposition is the
//! ground truth.
//!
//! Spins are lettered `I, S, R, T` by index. Names list the letters alphabetically,
//! so the three-spin z string on spins 0, 1, 2 reads `4IzRzSz`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    c, check_spins, is_hermitian, spins_for_dim, wrap_angle, Axis, Matrix, Unitary, STRUCTURE_TOL,
};

pub const SPIN_LETTERS: [char; 4] = ['I', 'S', 'R', 'T'];

/// One per-spin factor of a product operator. Ordering is `E < x < y < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    E,
    X,
    Y,
    Z,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::E, Factor::X, Factor::Y, Factor::Z];

    pub fn axis(self) -> Option<Axis> {
        match self {
            Factor::E => None,
            Factor::X => Some(Axis::X),
            Factor::Y => Some(Axis::Y),
            Factor::Z => Some(Axis::Z),
        }
    }

    fn matrix(self) -> Matrix {
        match self.axis() {
            None => Matrix::identity(2, 2),
            Some(a) => a.pauli() * c(0.5, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductOperatorTerm {
    factors: Vec<Factor>,
}

impl ProductOperatorTerm {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        check_spins(factors.len())?;
        Ok(ProductOperatorTerm { factors })
    }

    /// The `½E` term of an `n`-spin basis.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Factor::E; n])
    }

    /// Parses a display name such as `2IzSz` or `½E` for an `n`-spin basis.
    pub fn parse(name: &str, n: usize) -> Result<Self> {
        check_spins(n)?;
        let bad = || Error::BadTerm(name.to_string());
        let trimmed = name.trim();
        if trimmed == "½E" || trimmed == "E/2" {
            return Self::identity(n);
        }
        let digits: String = trimmed.chars().take_while(|ch| ch.is_ascii_digit()).collect();
        let rest: Vec<char> = trimmed[digits.len()..].chars().collect();
        if rest.is_empty() || !rest.len().is_multiple_of(2) {
            return Err(bad());
        }
        let mut factors = vec![Factor::E; n];
        for pair in rest.chunks(2) {
            let spin = SPIN_LETTERS.iter().position(|&l| l == pair[0]).ok_or_else(bad)?;
            if spin >= n {
                return Err(Error::TermMismatch { term: name.to_string(), n });
            }
            let factor = match pair[1] {
                'x' => Factor::X,
                'y' => Factor::Y,
                'z' => Factor::Z,
                _ => return Err(bad()),
            };
            if factors[spin] != Factor::E {
                return Err(bad());
            }
            factors[spin] = factor;
        }
        let term = ProductOperatorTerm { factors };
        let expected_prefix = term.prefix();
        if digits != expected_prefix && !(digits.is_empty() && expected_prefix.is_empty()) {
            return Err(bad());
        }
        Ok(term)
    }

    pub fn spins(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|f| **f != Factor::E).count()
    }

    /// True if every factor is `E` or `z`.
    pub fn is_longitudinal(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::E | Factor::Z))
    }

    /// Spins carrying a non-identity factor, ascending.
    pub fn active_spins(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&k| self.factors[k] != Factor::E).collect()
    }

    fn scale(&self) -> f64 {
        match self.weight() {
            0 => 0.5,
            k => (1u32 << (k - 1)) as f64,
        }
    }

    fn prefix(&self) -> String {
        match self.weight() {
            0 | 1 => String::new(),
            k => (1u32 << (k - 1)).to_string(),
        }
    }

    pub fn matrix(&self) -> Matrix {
        let m = self.factors.iter().fold(Matrix::identity(1, 1), |acc, f| acc.kronecker(&f.matrix()));
        m * c(self.scale(), 0.0)
    }

    /// Diagonal of the matrix for a longitudinal term, as real numbers.
    fn diagonal(&self) -> Vec<f64> {
        let n = self.spins();
        let scale = self.scale();
        (0..1usize << n)
            .map(|state| {
                self.factors.iter().enumerate().fold(scale, |acc, (k, f)| match f {
                    Factor::Z if (state >> (n - 1 - k)) & 1 == 1 => -acc * 0.5,
                    Factor::Z => acc * 0.5,
                    _ => acc,
                })
            })
            .collect()
    }
}

impl fmt::Display for ProductOperatorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight() == 0 {
            return f.write_str("½E");
        }
        let mut parts: Vec<(char, char)> = self
            .factors
            .iter()
            .enumerate()
            .filter_map(|(k, fac)| fac.axis().map(|a| (SPIN_LETTERS[k], a.letter())))
            .collect();
        parts.sort();
        f.write_str(&self.prefix())?;
        for (letter, axis) in parts {
            write!(f, "{letter}{axis}")?;
        }
        Ok(())
    }
}

/// All `4^n` terms, lexicographic in `(E, x, y, z)` with spin 0 most significant.
pub fn basis_terms(n: usize) -> Result<Vec<ProductOperatorTerm>> {
    check_spins(n)?;
    Ok((0..1usize << (2 * n))
        .map(|i| ProductOperatorTerm {
            factors: (0..n).map(|k| Factor::ALL[(i >> (2 * (n - 1 - k))) & 3]).collect(),
        })
        .collect())
}

/// The `2^n` longitudinal (E/z only) terms in basis order.
pub fn longitudinal_terms(n: usize) -> Result<Vec<ProductOperatorTerm>> {
    Ok(basis_terms(n)?.into_iter().filter(|t| t.is_longitudinal()).collect())
}

fn norm_factor(n: usize) -> f64 {
    2f64.powi(n as i32 - 2)
}

/// Real coefficients over product-operator terms of an `n`-spin basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    n: usize,
    coefficients: BTreeMap<ProductOperatorTerm, f64>,
}

impl Decomposition {
    pub fn new(n: usize) -> Result<Self> {
        check_spins(n)?;
        Ok(Decomposition { n, coefficients: BTreeMap::new() })
    }

    /// Builds a decomposition from `(name, coefficient)` pairs; repeated names add.
    pub fn from_named<'a, I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut d = Self::new(n)?;
        for (name, coef) in terms {
            d.add(ProductOperatorTerm::parse(name, n)?, coef)?;
        }
        Ok(d)
    }

    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, term: ProductOperatorTerm, coef: f64) -> Result<()> {
        if term.spins() != self.n {
            return Err(Error::TermMismatch { term: term.to_string(), n: self.n });
        }
        *self.coefficients.entry(term).or_insert(0.0) += coef;
        Ok(())
    }

    pub fn coefficient(&self, term: &ProductOperatorTerm) -> f64 {
        self.coefficients.get(term).copied().unwrap_or(0.0)
    }

    /// Coefficient by display name; unknown or absent terms read as zero.
    pub fn get(&self, name: &str) -> f64 {
        ProductOperatorTerm::parse(name, self.n).map(|t| self.coefficient(&t)).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProductOperatorTerm, f64)> {
        self.coefficients.iter().map(|(t, v)| (t, *v))
    }

    /// Terms whose coefficient magnitude exceeds `tol`, in basis order.
    pub fn significant(&self, tol: f64) -> Vec<(&ProductOperatorTerm, f64)> {
        self.iter().filter(|(_, v)| v.abs() > tol).collect()
    }

    pub fn scaled(&self, factor: f64) -> Decomposition {
        Decomposition {
            n: self.n,
            coefficients: self.coefficients.iter().map(|(t, v)| (t.clone(), v * factor)).collect(),
        }
    }
}

/// Coefficients `c_t = tr(B_t ρ) / 2^{n-2}` of a Hermitian matrix.
pub fn decompose(rho: &Matrix, n: usize) -> Result<Decomposition> {
    check_spins(n)?;
    if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
        return Err(Error::DimensionMismatch(rho.nrows(), 1 << n));
    }
    is_hermitian(rho, STRUCTURE_TOL).map_err(Error::NotHermitian)?;
    let norm = norm_factor(n);
    let mut d = Decomposition::new(n)?;
    for term in basis_terms(n)? {
        let b = term.matrix();
        // tr(Bρ) = Σ_ij B_ij ρ_ji
        let tr: Complex64 = b.iter().zip(rho.transpose().iter()).map(|(x, y)| x * y).sum();
        let coef = tr.re / norm;
        if coef != 0.0 {
            d.coefficients.insert(term, coef);
        }
    }
    Ok(d)
}

/// `Σ c_t B_t`.
pub fn recompose(d: &Decomposition) -> Matrix {
    let dim = 1 << d.n;
    d.iter().fold(Matrix::zeros(dim, dim), |acc, (t, v)| acc + t.matrix() * c(v, 0.0))
}

/// Net coherence order of the element `⟨a|ρ|b⟩`: the change in the number of
/// spins in `|1⟩`, `popcount(b) - popcount(a)`.
pub fn element_order(a: usize, b: usize) -> i32 {
    b.count_ones() as i32 - a.count_ones() as i32
}

/// Squared Frobenius weight of the traceless part of `recompose(d)` per net
/// coherence order. Orders with (numerically) zero weight are omitted.
pub fn coherence_orders(d: &Decomposition) -> BTreeMap<i32, f64> {
    coherence_orders_of(&recompose(d))
}

pub(crate) fn coherence_orders_of(rho: &Matrix) -> BTreeMap<i32, f64> {
    let dim = rho.nrows();
    let shift = rho.trace() / c(dim as f64, 0.0);
    let mut out = BTreeMap::new();
    for a in 0..dim {
        for b in 0..dim {
            let mut v = rho[(a, b)];
            if a == b {
                v -= shift;
            }
            *out.entry(element_order(a, b)).or_insert(0.0) += v.norm_sqr();
        }
    }
    out.retain(|_, w| *w > 1e-24);
    out
}

/// Angles `θ_t` over longitudinal terms with `U = exp(-i Σ θ_t B_t)`.
///
/// Each diagonal entry is read as `U_jj = exp(-iλ_j)` with `λ_j ∈ (-π, π]`.
pub fn decompose_diagonal_phase(u: &Unitary) -> Result<Decomposition> {
    let m = u.matrix();
    let n = u.spins();
    let dim = m.nrows();
    let mut off = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                off = off.max(m[(i, j)].norm());
            }
        }
    }
    if off > STRUCTURE_TOL {
        return Err(Error::NotDiagonal(off));
    }
    let mut lambda = Vec::with_capacity(dim);
    for j in 0..dim {
        let z = m[(j, j)];
        if (z.norm() - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotUnimodular { index: j, modulus: z.norm() });
        }
        lambda.push(wrap_angle(-z.arg()));
    }
    let norm = norm_factor(n);
    let mut d = Decomposition::new(n)?;
    for term in longitudinal_terms(n)? {
        let theta: f64 = term.diagonal().iter().zip(&lambda).map(|(b, l)| b * l).sum::<f64>() / norm;
        if theta != 0.0 {
            d.coefficients.insert(term, theta);
        }
    }
    Ok(d)
}

/// `exp(-i Σ θ_t B_t)` for a decomposition over longitudinal terms.
pub fn exponentiate_longitudinal(angles: &Decomposition) -> Result<Unitary> {
    let n = angles.spins();
    let mut phase = vec![0.0f64; 1 << n];
    for (term, theta) in angles.iter() {
        if !term.is_longitudinal() {
            return Err(Error::BadTerm(term.to_string()));
        }
        for (p, b) in phase.iter_mut().zip(term.diagonal()) {
            *p += theta * b;
        }
    }
    let diag =
        nalgebra::DVector::from_iterator(phase.len(), phase.iter().map(|p| Complex64::from_polar(1.0, -p)));
    Ok(Unitary::from_raw(n, Matrix::from_diagonal(&diag)))
}

/// Spin count of a square matrix, for callers holding raw matrices.
pub fn spins_of(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    spins_for_dim(m.nrows())
}
