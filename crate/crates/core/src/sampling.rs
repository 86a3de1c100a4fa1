//! Parameterised pure Gaussian states and random test matrices.
//!
//! A pure Gaussian covariance is `C = Σ (ħ/2) Σᵀ` with
//! `Σ = phases · mixers · squeezers`: one squeezer per mode, a triangular
//! network of beam splitters each preceded by a phase on its second mode, and
//! a final phase per mode. That covers every pure Gaussian state with
//! `N² + N` parameters.

use nalgebra::DMatrix;
use rand::Rng;

use crate::covariance::CovarianceMatrix;
use crate::symplectic::{
    beam_splitter, rotation, single_mode_factors, PhaseSpace, SymplecticMatrix,
};

/// Layout of the circuit parameter vector for `n_modes` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianCircuit {
    n_modes: usize,
    product_only: bool,
}

impl GaussianCircuit {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            product_only: false,
        }
    }

    /// Circuit without mixers: covers exactly the pure product Gaussian states.
    pub fn product(n_modes: usize) -> Self {
        Self {
            n_modes,
            product_only: true,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    fn n_pairs(&self) -> usize {
        if self.product_only {
            0
        } else {
            self.n_modes * (self.n_modes - 1) / 2
        }
    }

    pub fn n_params(&self) -> usize {
        2 * self.n_modes + 2 * self.n_pairs()
    }

    /// True for parameters that are squeezing strengths; the rest are angles.
    pub fn is_squeeze(&self, idx: usize) -> bool {
        idx < self.n_modes
    }

    pub fn symplectic(&self, params: &[f64]) -> SymplecticMatrix {
        assert_eq!(params.len(), self.n_params(), "parameter vector length");
        let n = self.n_modes;
        let squeezers: Vec<SymplecticMatrix> = params[..n]
            .iter()
            .map(|&r| single_mode_factors(0.0, r).1)
            .collect();
        let mut sigma = SymplecticMatrix::direct_sum(&squeezers);

        let mut at = n;
        if !self.product_only {
            for i in 0..n {
                for j in (i + 1)..n {
                    let phase = SymplecticMatrix::embed(&rotation(params[at]), j, n);
                    let mix = beam_splitter(params[at + 1], i, j, n);
                    sigma = mix.compose(&phase).compose(&sigma);
                    at += 2;
                }
            }
        }
        let phases: Vec<SymplecticMatrix> =
            params[at..at + n].iter().map(|&t| rotation(t)).collect();
        SymplecticMatrix::direct_sum(&phases).compose(&sigma)
    }

    pub fn covariance(&self, params: &[f64], hbar: f64) -> CovarianceMatrix {
        let s = self.symplectic(params);
        let m = s.matrix() * s.matrix().transpose() * (hbar / 2.0);
        let m = (&m + m.transpose()) * 0.5;
        let space = PhaseSpace::new(self.n_modes, hbar).expect("valid phase space");
        CovarianceMatrix::new(space, m).expect("symmetric by construction")
    }

    /// Uniform random parameters: squeezing in `[-max_squeeze, max_squeeze]`,
    /// angles in `[0, 2π)`.
    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R, max_squeeze: f64) -> Vec<f64> {
        (0..self.n_params())
            .map(|i| {
                if self.is_squeeze(i) {
                    rng.random_range(-max_squeeze..=max_squeeze)
                } else {
                    rng.random_range(0.0..std::f64::consts::TAU)
                }
            })
            .collect()
    }
}

pub fn random_symplectic<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    max_squeeze: f64,
) -> SymplecticMatrix {
    let circuit = GaussianCircuit::new(n_modes);
    let params = circuit.random_params(rng, max_squeeze);
    // A random shear per mode makes the result non-orthogonal in a second way.
    let shears: Vec<SymplecticMatrix> = (0..n_modes)
        .map(|_| single_mode_factors(rng.random_range(-1.0..1.0), 0.0).0)
        .collect();
    SymplecticMatrix::direct_sum(&shears).compose(&circuit.symplectic(&params))
}

pub fn random_pure_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    space: PhaseSpace,
    max_squeeze: f64,
) -> CovarianceMatrix {
    let circuit = GaussianCircuit::new(space.n_modes());
    let params = circuit.random_params(rng, max_squeeze);
    circuit.covariance(&params, space.hbar())
}

pub fn random_product_pure_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    space: PhaseSpace,
    max_squeeze: f64,
) -> CovarianceMatrix {
    let circuit = GaussianCircuit::product(space.n_modes());
    let params = circuit.random_params(rng, max_squeeze);
    circuit.covariance(&params, space.hbar())
}

/// `Σ diag(s_k) Σᵀ` with random symplectic eigenvalues `s_k ∈ [ħ/2, max_level·ħ]`.
pub fn random_admissible_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    space: PhaseSpace,
    max_squeeze: f64,
    max_level: f64,
) -> CovarianceMatrix {
    let hbar = space.hbar();
    let levels: Vec<f64> = (0..space.n_modes())
        .map(|_| rng.random_range(0.5 * hbar..=max_level * hbar))
        .collect();
    let d = DMatrix::from_diagonal(&crate::symplectic::doubled(&levels));
    let s = random_symplectic(rng, space.n_modes(), max_squeeze);
    let m = s.matrix() * d * s.matrix().transpose();
    CovarianceMatrix::new(space, (&m + m.transpose()) * 0.5).expect("symmetric by construction")
}

/// Random symmetric positive-definite matrix `AᵀA + δI` with entries of order one.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let m = a.transpose() * a + DMatrix::identity(dim, dim) * rng.random_range(0.05..1.0);
    (&m + m.transpose()) * 0.5
}
