//! Covariance matrices of second moments and the single-mode `(u, v, w)` coordinates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::{self, PhaseSpace};

/// Default absolute admissibility tolerance, in units of ħ.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// Symmetric matrix of second moments `c_{μν}` in the `(p1, q1, ..., pN, qN)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    space: PhaseSpace,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a symmetric matrix. Admissibility is not required here; test it
    /// with [`CovarianceMatrix::is_admissible`].
    pub fn new(space: PhaseSpace, entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != space.dim() || entries.ncols() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} modes need a {d}x{d} matrix, got {}x{}",
                space.n_modes(),
                entries.nrows(),
                entries.ncols(),
                d = space.dim()
            )));
        }
        symplectic::check_symmetric(&entries)?;
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self { space, entries })
    }

    /// `(ħ/2)·I`, the vacuum.
    pub fn vacuum(space: PhaseSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            entries: DMatrix::identity(d, d) * (space.hbar() / 2.0),
        }
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn n_modes(&self) -> usize {
        self.space.n_modes()
    }

    pub fn hbar(&self) -> f64 {
        self.space.hbar()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    /// Δ²p_k (0-based mode index).
    pub fn variance_p(&self, k: usize) -> f64 {
        self.entries[(2 * k, 2 * k)]
    }

    /// Δ²q_k.
    pub fn variance_q(&self, k: usize) -> f64 {
        self.entries[(2 * k + 1, 2 * k + 1)]
    }

    /// Local covariance `C_{p_k q_k}`.
    pub fn covariance_pq(&self, k: usize) -> f64 {
        self.entries[(2 * k, 2 * k + 1)]
    }

    pub fn cross(&self, mu: usize, nu: usize) -> f64 {
        self.entries[(mu, nu)]
    }

    /// The 2×2 block of mode `k` as a single-mode covariance.
    pub fn mode_block(&self, k: usize) -> CovarianceMatrix {
        let space = PhaseSpace::new(1, self.hbar()).expect("valid hbar");
        CovarianceMatrix {
            space,
            entries: self.entries.view((2 * k, 2 * k), (2, 2)).into_owned(),
        }
    }

    /// Variance `aᵀCa` of the linear combination `aᵀẑ`.
    pub fn quadratic_form(&self, a: &DVector<f64>) -> f64 {
        (a.transpose() * &self.entries * a)[(0, 0)]
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic::symplectic_eigenvalues(&self.entries)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(*self
            .symplectic_eigenvalues()?
            .last()
            .expect("at least one mode"))
    }

    /// `C + iħΩ/2 ≥ 0`, tested as `min λ_k ≥ ħ/2 - tol`.
    pub fn is_admissible(&self, tol: f64) -> Result<bool> {
        Ok(self.min_symplectic_eigenvalue()? >= self.hbar() / 2.0 - tol)
    }

    /// Every symplectic eigenvalue equals ħ/2 within `tol`.
    pub fn is_pure_gaussian(&self, tol: f64) -> Result<bool> {
        let half = self.hbar() / 2.0;
        Ok(self
            .symplectic_eigenvalues()?
            .iter()
            .all(|&l| (l - half).abs() <= tol))
    }

    /// `det(C + iħΩ/2) = 0` within `tol`, i.e. the smallest symplectic
    /// eigenvalue sits at ħ/2.
    pub fn on_boundary(&self, tol: f64) -> Result<bool> {
        Ok((self.min_symplectic_eigenvalue()? - self.hbar() / 2.0).abs() <= tol)
    }

    /// Errors with [`Error::Inadmissible`] unless the matrix is admissible at `tol`.
    pub fn require_admissible(&self, tol: f64) -> Result<()> {
        let min_eig = self.min_symplectic_eigenvalue()?;
        if min_eig < self.hbar() / 2.0 - tol {
            return Err(Error::Inadmissible {
                min_eig,
                half_hbar: self.hbar() / 2.0,
            });
        }
        Ok(())
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }
}

/// Occupation numbers `n_1..n_N` of a product of number states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantumNumbers(Vec<u32>);

impl QuantumNumbers {
    pub fn new(n: Vec<u32>) -> Self {
        Self(n)
    }

    pub fn ground(n_modes: usize) -> Self {
        Self(vec![0; n_modes])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ħ·(n_1 + ½, n_1 + ½, ..., n_N + ½, n_N + ½)` as a diagonal matrix.
    pub fn n_matrix(&self, hbar: f64) -> DMatrix<f64> {
        let levels: Vec<f64> = self.0.iter().map(|&n| hbar * (n as f64 + 0.5)).collect();
        DMatrix::from_diagonal(&symplectic::doubled(&levels))
    }
}

pub fn number_state_covariance(space: PhaseSpace, qn: &QuantumNumbers) -> Result<CovarianceMatrix> {
    if qn.len() != space.n_modes() {
        return Err(Error::Arity {
            expected: space.n_modes(),
            got: qn.len(),
        });
    }
    Ok(CovarianceMatrix {
        space,
        entries: qn.n_matrix(space.hbar()),
    })
}

/// Single-mode moments `u = (x+y)/2`, `v = (x-y)/2`, `w = C_pq`, with
/// `x = Δ²p`, `y = Δ²q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTriple {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl MomentTriple {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        Self { u, v, w }
    }

    /// Both variances positive.
    pub fn is_valid(&self) -> bool {
        self.u > 0.0 && self.u > self.v.abs()
    }

    /// The Lorentz-type invariant `u² - v² - w² = det C`.
    pub fn interval(&self) -> f64 {
        self.u * self.u - self.v * self.v - self.w * self.w
    }

    pub fn x(&self) -> f64 {
        self.u + self.v
    }

    pub fn y(&self) -> f64 {
        self.u - self.v
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }
}

/// Energy-like level `e_n = (n + ½)ħ`.
pub fn sheet_level(n: u32, hbar: f64) -> f64 {
    (n as f64 + 0.5) * hbar
}

/// Moments of the squeezed number state `|n⟩` with squeezing `rho` along direction `theta`.
pub fn squeezed_number_triple(n: u32, rho: f64, theta: f64, hbar: f64) -> MomentTriple {
    let e = sheet_level(n, hbar);
    let (s, c) = theta.sin_cos();
    MomentTriple {
        u: e * rho.cosh(),
        v: e * rho.sinh() * c,
        w: e * rho.sinh() * s,
    }
}

pub fn triple_from_covariance(c: &CovarianceMatrix) -> Result<MomentTriple> {
    if c.n_modes() != 1 {
        return Err(Error::Arity {
            expected: 1,
            got: c.n_modes(),
        });
    }
    let (x, y) = (c.variance_p(0), c.variance_q(0));
    Ok(MomentTriple {
        u: 0.5 * (x + y),
        v: 0.5 * (x - y),
        w: c.covariance_pq(0),
    })
}

pub fn covariance_from_triple(t: &MomentTriple, hbar: f64) -> Result<CovarianceMatrix> {
    if !t.is_valid() {
        return Err(Error::Domain(format!(
            "triple ({}, {}, {}) does not give positive variances",
            t.u, t.v, t.w
        )));
    }
    let space = PhaseSpace::new(1, hbar)?;
    Ok(CovarianceMatrix {
        space,
        entries: DMatrix::from_row_slice(2, 2, &[t.x(), t.w, t.w, t.y()]),
    })
}

/// Literal position/momentum variance `(1 - t)(M + ½)ħ` attached to the
/// superposition `√t|0⟩ + √(1-t)|M⟩`.
///
/// The expression omits the `t·ħ/2` contribution of `|0⟩`, so it drops below
/// ħ/2 for `t` close to 1; inputs are capped at `t ≤ 1 - 1/(2M+1)` where the
/// value is exactly ħ/2. See [`superposition_0m_variance_full`] for the
/// complete expression.
pub fn superposition_0m_variance(m: u32, t: f64, hbar: f64) -> Result<f64> {
    check_superposition(m, t)?;
    let cap = 1.0 - 1.0 / (2.0 * m as f64 + 1.0);
    if t > cap + 1e-15 {
        return Err(Error::Domain(format!(
            "t = {t} exceeds 1 - 1/(2M+1) = {cap}, where the variance falls below hbar/2"
        )));
    }
    Ok((1.0 - t) * (m as f64 + 0.5) * hbar)
}

/// Variance `t·ħ/2 + (1 - t)(M + ½)ħ` of `√t|0⟩ + √(1-t)|M⟩`.
pub fn superposition_0m_variance_full(m: u32, t: f64, hbar: f64) -> Result<f64> {
    check_superposition(m, t)?;
    Ok(t * 0.5 * hbar + (1.0 - t) * (m as f64 + 0.5) * hbar)
}

fn check_superposition(m: u32, t: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("M must be at least 2, got {m}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(())
}

/// Two-mode squeezed vacuum with squeezing `r`; `q1 - q2` and `p1 + p2`
/// are squeezed for `r > 0`.
pub fn two_mode_squeezed_covariance(r: f64, hbar: f64) -> Result<CovarianceMatrix> {
    let space = PhaseSpace::new(2, hbar)?;
    let ch = 0.5 * hbar * (2.0 * r).cosh();
    let sh = 0.5 * hbar * (2.0 * r).sinh();
    let mut m = DMatrix::identity(4, 4) * ch;
    m[(0, 2)] = -sh;
    m[(2, 0)] = -sh;
    m[(1, 3)] = sh;
    m[(3, 1)] = sh;
    Ok(CovarianceMatrix { space, entries: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{
        apply_congruence, beam_splitter, rotation, single_mode_factors, SymplecticMatrix,
    };

    fn space(n: usize, hbar: f64) -> PhaseSpace {
        PhaseSpace::new(n, hbar).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        for n in 1..4 {
            let vac = CovarianceMatrix::vacuum(space(n, 1.3));
            assert!(vac.is_admissible(ADMISSIBILITY_TOL).unwrap());
            assert!(vac.is_pure_gaussian(ADMISSIBILITY_TOL).unwrap());
            assert!(vac.on_boundary(ADMISSIBILITY_TOL).unwrap());
        }
        let hbar = 1.0;
        let low =
            CovarianceMatrix::new(space(1, hbar), DMatrix::identity(2, 2) * (hbar / 4.0)).unwrap();
        assert!(!low.is_admissible(ADMISSIBILITY_TOL).unwrap());
        assert!(low.require_admissible(ADMISSIBILITY_TOL).is_err());

        let e = std::f64::consts::E;
        let thermal = CovarianceMatrix::new(
            space(1, hbar),
            DMatrix::from_diagonal(&DVector::from_vec(vec![hbar / e, hbar * e])),
        )
        .unwrap();
        assert!((thermal.min_symplectic_eigenvalue().unwrap() - hbar).abs() < 1e-12);
        assert!(thermal.is_admissible(ADMISSIBILITY_TOL).unwrap());
        assert!(!thermal.on_boundary(ADMISSIBILITY_TOL).unwrap());
    }

    #[test]
    fn number_states() {
        let hbar = 2.0;
        let one = number_state_covariance(space(1, hbar), &QuantumNumbers::new(vec![1])).unwrap();
        assert_eq!(one.variance_p(0), 1.5 * hbar);
        assert_eq!(one.variance_q(0), 1.5 * hbar);
        assert!(one.is_admissible(ADMISSIBILITY_TOL).unwrap());
        assert!(!one.is_pure_gaussian(ADMISSIBILITY_TOL).unwrap());

        let ground = number_state_covariance(space(3, hbar), &QuantumNumbers::ground(3)).unwrap();
        assert_eq!(ground, CovarianceMatrix::vacuum(space(3, hbar)));

        let qn = QuantumNumbers::new(vec![2, 0, 5]);
        let c = number_state_covariance(space(3, hbar), &qn).unwrap();
        let expected: f64 = [2.5f64, 0.5, 5.5]
            .iter()
            .map(|x| (x * hbar).powi(2))
            .product();
        assert!((c.determinant() - expected).abs() <= 1e-12 * expected);

        assert!(matches!(
            number_state_covariance(space(2, hbar), &qn),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let hbar = 1.0;
        let (g, s) = single_mode_factors(0.7, -0.4);
        let sym = SymplecticMatrix::direct_sum(&[s.compose(&g), rotation(0.3)])
            .compose(&beam_splitter(1.2, 0, 1, 2));
        let c = apply_congruence(&sym, &(DMatrix::identity(4, 4) * (hbar / 2.0))).unwrap();
        let c = CovarianceMatrix::new(space(2, hbar), c).unwrap();
        assert!(c.is_pure_gaussian(1e-10).unwrap());
    }

    #[test]
    fn squeezed_triples() {
        let hbar = 1.0;
        let t = squeezed_number_triple(0, 0.0, 0.3, hbar);
        assert_eq!((t.u, t.v, t.w), (0.5, 0.0, 0.0));
        for (rho, theta) in [(0.1, 0.2), (1.5, -2.0), (3.0, 4.0)] {
            let t = squeezed_number_triple(2, rho, theta, hbar);
            let e = 2.5 * hbar;
            assert!((t.interval() - e * e).abs() <= 1e-12 * e * e);
        }
        let t = squeezed_number_triple(0, 2f64.ln(), 0.0, hbar);
        assert!((t.u - 5.0 / 8.0).abs() < 1e-15);
        assert!((t.v - 3.0 / 8.0).abs() < 1e-15);
        assert_eq!(t.w, 0.0);
    }

    #[test]
    fn triple_conversions() {
        let hbar = 1.0;
        let vac = CovarianceMatrix::vacuum(space(1, hbar));
        assert_eq!(
            triple_from_covariance(&vac).unwrap(),
            MomentTriple::new(0.5, 0.0, 0.0)
        );
        let c = covariance_from_triple(&MomentTriple::new(2.5, -1.5, 0.0), hbar).unwrap();
        assert_eq!(c.variance_p(0), 1.0);
        assert_eq!(c.variance_q(0), 4.0);
        assert!(covariance_from_triple(&MomentTriple::new(1.0, 2.0, 0.0), hbar).is_err());
        assert!(matches!(
            triple_from_covariance(&CovarianceMatrix::vacuum(space(2, hbar))),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn superposition_variances() {
        let hbar = 1.0;
        assert!((superposition_0m_variance(2, 0.0, hbar).unwrap() - 2.5).abs() < 1e-15);
        assert!((superposition_0m_variance(2, 0.8, hbar).unwrap() - 0.5).abs() < 1e-15);
        assert!(superposition_0m_variance(2, 0.9, hbar).is_err());
        assert!(superposition_0m_variance(2, 1.0, hbar).is_err());
        assert!(superposition_0m_variance(1, 0.1, hbar).is_err());
        assert!(superposition_0m_variance(3, -0.1, hbar).is_err());
        assert!((superposition_0m_variance_full(2, 1.0, hbar).unwrap() - 0.5).abs() < 1e-15);
        assert!((superposition_0m_variance_full(4, 0.5, hbar).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn two_mode_squeezed() {
        let hbar = 1.0;
        let c0 = two_mode_squeezed_covariance(0.0, hbar).unwrap();
        assert_eq!(c0, CovarianceMatrix::vacuum(space(2, hbar)));
        for r in [0.1, 0.5, 1.0, 2.0] {
            let c = two_mode_squeezed_covariance(r, hbar).unwrap();
            assert!(c.is_pure_gaussian(1e-9).unwrap());
        }
        let c = two_mode_squeezed_covariance(1.0, hbar).unwrap();
        let minus_q = DVector::from_vec(vec![0.0, 1.0, 0.0, -1.0]);
        let plus_p = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
        let lhs = c.quadratic_form(&minus_q) + c.quadratic_form(&plus_p);
        assert!((lhs - 0.2706705664732254).abs() < 1e-12);
        assert!((lhs - 2.0 * hbar * (-2.0f64).exp()).abs() < 1e-14);
    }
}
