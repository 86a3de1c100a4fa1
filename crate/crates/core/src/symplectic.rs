//! Symplectic linear algebra on phase space with ordering `z = (p1, q1, ..., pN, qN)`.
//!
//! The symplectic form is `Ω = ⊕ [[0, -1], [1, 0]]`, fixed by `[q, p] = iħ`
//! with momentum listed first. Every other module takes Ω from here.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest eigenvalue accepted relative to the largest before a matrix is
/// treated as not positive definite.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Relative asymmetry tolerated in matrices that are supposed to be symmetric.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Default tolerance used when validating symplectic matrices.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// Phase space of `n_modes` canonical pairs with Planck constant `hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpace {
    n_modes: usize,
    hbar: f64,
}

impl PhaseSpace {
    pub fn new(n_modes: usize, hbar: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Dimension(
                "phase space needs at least one mode".into(),
            ));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { n_modes, hbar })
    }

    /// Phase space with `hbar = 1`.
    pub fn with_modes(n_modes: usize) -> Result<Self> {
        Self::new(n_modes, 1.0)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Matrix dimension `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    /// Number of independent second moments, `N(2N + 1)`.
    pub fn moment_count(&self) -> usize {
        self.n_modes * (2 * self.n_modes + 1)
    }

    pub fn omega(&self) -> DMatrix<f64> {
        standard_form(self.n_modes)
    }

    /// Index of `p_k` (0-based mode `k`).
    pub fn p(k: usize) -> usize {
        2 * k
    }

    /// Index of `q_k` (0-based mode `k`).
    pub fn q(k: usize) -> usize {
        2 * k + 1
    }
}

/// The standard symplectic form for `n_modes` modes.
pub fn standard_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = -1.0;
        omega[(2 * k + 1, 2 * k)] = 1.0;
    }
    omega
}

fn modes_of(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "phase-space matrices need even order, got {}",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

/// `max |MᵀΩM - Ω|`; the quantity compared against the tolerance in [`is_symplectic`].
pub fn symplectic_residual(m: &DMatrix<f64>) -> Result<f64> {
    let n = modes_of(m)?;
    let omega = standard_form(n);
    Ok((m.transpose() * &omega * m - omega).amax())
}

pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(m)? <= tol)
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>) -> Result<usize> {
    let n = modes_of(m)?;
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Shape(format!(
            "matrix is not symmetric (max asymmetry {asym:.3e})"
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Shape("matrix has non-finite entries".into()));
    }
    Ok(n)
}

/// Symmetric square root of a positive-definite matrix, rejecting matrices
/// whose spectrum falls below [`DEGENERACY_FLOOR`].
fn spd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if max.is_nan() || max <= 0.0 || min < DEGENERACY_FLOOR * max {
        return Err(Error::not_pd(format!(
            "eigenvalue range [{min:.3e}, {max:.3e}] below the degeneracy floor"
        )));
    }
    let roots = eig.eigenvalues.map(f64::sqrt);
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.transpose())
}

/// Hermitian matrix `i·M^{1/2} Ω M^{1/2}`; its spectrum is `±λ_k`.
fn hermitian_pencil(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<Complex64>)> {
    let n = check_symmetric(m)?;
    let root = spd_sqrt(m)?;
    let k = &root * standard_form(n) * &root;
    let k = (&k - k.transpose()) * 0.5;
    let h = k.map(|x| Complex64::new(0.0, x));
    Ok((root, h))
}

/// A matrix satisfying `ΣᵀΩΣ = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(DMatrix<f64>);

impl SymplecticMatrix {
    /// Validates `m` against [`SYMPLECTIC_TOL`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(m, SYMPLECTIC_TOL)
    }

    pub fn with_tolerance(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let res = symplectic_residual(&m)?;
        if res > tol {
            return Err(Error::Constraint(format!(
                "matrix is not symplectic (residual {res:.3e})"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: DMatrix<f64>) -> Self {
        Self(m)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self(DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Exact inverse `Σ⁻¹ = -Ω Σᵀ Ω`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let omega = standard_form(self.n_modes());
        Self(-(&omega * self.0.transpose() * &omega))
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        Self(self.0.transpose())
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        Self(&self.0 * &other.0)
    }

    /// Embeds a single-mode (2×2) symplectic matrix acting on `mode`.
    pub fn embed(single: &SymplecticMatrix, mode: usize, n_modes: usize) -> SymplecticMatrix {
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m.view_mut((2 * mode, 2 * mode), (2, 2))
            .copy_from(&single.0);
        Self(m)
    }

    /// Block-diagonal direct sum of single-mode factors.
    pub fn direct_sum(blocks: &[SymplecticMatrix]) -> SymplecticMatrix {
        let dim: usize = blocks.iter().map(|b| b.0.nrows()).sum();
        let mut m = DMatrix::zeros(dim, dim);
        let mut at = 0;
        for b in blocks {
            let d = b.0.nrows();
            m.view_mut((at, at), (d, d)).copy_from(&b.0);
            at += d;
        }
        Self(m)
    }
}

/// Symplectic diagonalisation `M = Σᵀ D Σ`.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    pub sigma: SymplecticMatrix,
    /// Symplectic eigenvalues, descending.
    pub sympl_eigs: Vec<f64>,
}

impl WilliamsonResult {
    /// `D = diag(λ1, λ1, ..., λN, λN)`.
    pub fn diagonal(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&doubled(&self.sympl_eigs))
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let s = self.sigma.matrix();
        s.transpose() * self.diagonal() * s
    }
}

/// `(x1, x1, x2, x2, ...)` as a vector of length `2N`.
pub(crate) fn doubled(values: &[f64]) -> DVector<f64> {
    DVector::from_iterator(2 * values.len(), values.iter().flat_map(|&x| [x, x]))
}

/// Williamson decomposition of a symmetric positive-definite matrix.
///
/// With `K = M^{1/2} Ω M^{1/2}` and an orthogonal `O` bringing `K` to the
/// canonical form `⊕ λ_k [[0, -1], [1, 0]]`, the matrix
/// `Σ = D^{-1/2} Oᵀ M^{1/2}` is symplectic and satisfies `ΣᵀDΣ = M`.
/// The canonical pairs are read off the positive-spectrum eigenvectors
/// `a + ib` of the Hermitian matrix `iK`, which give `Ka = λb, Kb = -λa`.
pub fn williamson(m: &DMatrix<f64>) -> Result<WilliamsonResult> {
    let n = m.nrows() / 2;
    let (root, h) = hermitian_pencil(m)?;
    let eig = h.symmetric_eigen();

    let mut pairs: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(i, &l)| (l, i))
        .collect();
    if pairs.len() != n {
        return Err(Error::not_pd(format!(
            "expected {n} positive symplectic eigenvalues, found {}",
            pairs.len()
        )));
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let dim = 2 * n;
    let mut o = DMatrix::zeros(dim, dim);
    let sqrt2 = std::f64::consts::SQRT_2;
    for (k, &(_, idx)) in pairs.iter().enumerate() {
        let z = eig.eigenvectors.column(idx);
        for r in 0..dim {
            o[(r, 2 * k)] = sqrt2 * z[r].re;
            o[(r, 2 * k + 1)] = sqrt2 * z[r].im;
        }
    }

    let sympl_eigs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let inv_sqrt_d = doubled(&sympl_eigs).map(|x| 1.0 / x.sqrt());
    let sigma = DMatrix::from_diagonal(&inv_sqrt_d) * o.transpose() * root;

    Ok(WilliamsonResult {
        sigma: SymplecticMatrix::new_unchecked(sigma),
        sympl_eigs,
    })
}

/// Symplectic eigenvalues (descending) without assembling Σ.
pub fn symplectic_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows() / 2;
    let (_, h) = hermitian_pencil(m)?;
    let mut eigs: Vec<f64> = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > 0.0)
        .collect();
    if eigs.len() != n {
        return Err(Error::not_pd(format!(
            "expected {n} positive symplectic eigenvalues, found {}",
            eigs.len()
        )));
    }
    eigs.sort_by(|a, b| b.total_cmp(a));
    Ok(eigs)
}

/// Shear `G_b = [[1, 0], [b, 1]]` and squeezer `S_γ = diag(e^{-γ}, e^{γ})`.
pub fn single_mode_factors(b: f64, gamma: f64) -> (SymplecticMatrix, SymplecticMatrix) {
    let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, b, 1.0]);
    let s = DMatrix::from_row_slice(2, 2, &[(-gamma).exp(), 0.0, 0.0, gamma.exp()]);
    (
        SymplecticMatrix::new_unchecked(g),
        SymplecticMatrix::new_unchecked(s),
    )
}

/// Single-mode phase-space rotation by `theta`.
pub fn rotation(theta: f64) -> SymplecticMatrix {
    let (s, c) = theta.sin_cos();
    SymplecticMatrix::new_unchecked(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// Passive two-mode mixer acting identically on the momentum and position
/// quadratures of modes `i` and `j`.
pub fn beam_splitter(theta: f64, i: usize, j: usize, n_modes: usize) -> SymplecticMatrix {
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for off in 0..2 {
        let (a, b) = (2 * i + off, 2 * j + off);
        m[(a, a)] = c;
        m[(a, b)] = s;
        m[(b, a)] = -s;
        m[(b, b)] = c;
    }
    SymplecticMatrix::new_unchecked(m)
}

/// Covariance transform `Σ C Σᵀ`.
pub fn apply_congruence(sigma: &SymplecticMatrix, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let s = sigma.matrix();
    if c.nrows() != s.nrows() || c.ncols() != s.ncols() {
        return Err(Error::Dimension(format!(
            "symplectic matrix is {}x{} but covariance is {}x{}",
            s.nrows(),
            s.ncols(),
            c.nrows(),
            c.ncols()
        )));
    }
    let out = s * c * s.transpose();
    Ok((&out + out.transpose()) * 0.5)
}
