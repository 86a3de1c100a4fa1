//! Uncertainty functionals of second moments and their extremal states.
//!
//! A functional `f(c_{μν})` is extremal in a pure state when
//! `C = Σ⁻¹ N Σ⁻ᵀ`, where `F = ΣᵀDΣ` is the Williamson form of the gradient
//! matrix `F(C)` and `N = ħ·diag(n_k + ½, n_k + ½)`. Since `F` generally
//! depends on `C`, the conditions are solved as a damped fixed point.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covariance::{number_state_covariance, CovarianceMatrix, QuantumNumbers};
use crate::error::{Error, Result};
use crate::sampling::GaussianCircuit;
use crate::symplectic::{self, PhaseSpace};

type EvalFn = dyn Fn(&DMatrix<f64>) -> f64 + Send + Sync;
type GradFn = dyn Fn(&DMatrix<f64>) -> MomentGradient + Send + Sync;

/// Partial derivatives `∂f/∂c_{μν}` (μ ≤ ν) stored as a symmetric matrix:
/// entries `(μ, ν)` and `(ν, μ)` both hold the derivative with respect to
/// the single independent moment `c_{μν}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentGradient(pub DMatrix<f64>);

impl MomentGradient {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// Sets `∂f/∂c_{μν}`, mirroring across the diagonal.
    pub fn set(&mut self, mu: usize, nu: usize, value: f64) {
        self.0[(mu, nu)] = value;
        self.0[(nu, mu)] = value;
    }

    pub fn add(&mut self, mu: usize, nu: usize, value: f64) {
        self.0[(mu, nu)] += value;
        if mu != nu {
            self.0[(nu, mu)] += value;
        }
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.0[(mu, nu)]
    }

    /// The `N(2N+1)` independent partials in row-major upper-triangular order.
    pub fn to_vec(&self) -> Vec<f64> {
        let d = self.0.nrows();
        (0..d)
            .flat_map(|mu| (mu..d).map(move |nu| (mu, nu)))
            .map(|(mu, nu)| self.0[(mu, nu)])
            .collect()
    }
}

/// A scalar function of the second moments, with an optional analytic gradient.
///
/// Without an analytic gradient, central finite differences with step
/// `1e-6·max(ħ, max|c_{μν}|)` are used.
#[derive(Clone)]
pub struct UncertaintyFunctional {
    space: PhaseSpace,
    label: String,
    eval: Arc<EvalFn>,
    grad: Option<Arc<GradFn>>,
}

impl fmt::Debug for UncertaintyFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UncertaintyFunctional")
            .field("label", &self.label)
            .field("n_modes", &self.space.n_modes())
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

impl UncertaintyFunctional {
    pub fn new<E>(space: PhaseSpace, label: impl Into<String>, eval: E) -> Self
    where
        E: Fn(&DMatrix<f64>) -> f64 + Send + Sync + 'static,
    {
        Self {
            space,
            label: label.into(),
            eval: Arc::new(eval),
            grad: None,
        }
    }

    pub fn with_gradient<G>(mut self, grad: G) -> Self
    where
        G: Fn(&DMatrix<f64>) -> MomentGradient + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    /// Linear functional `Σ_{μ≤ν} g_{μν} c_{μν}` with constant gradient `g`.
    pub fn linear(
        space: PhaseSpace,
        label: impl Into<String>,
        coefficients: MomentGradient,
    ) -> Self {
        let g = coefficients.clone();
        let dim = space.dim();
        Self::new(space, label, move |c| {
            let mut acc = 0.0;
            for mu in 0..dim {
                for nu in mu..dim {
                    acc += g.0[(mu, nu)] * c[(mu, nu)];
                }
            }
            acc
        })
        .with_gradient(move |_| coefficients.clone())
    }

    /// Sum of single-mode functionals, each applied to its own 2×2 block.
    pub fn sum_of_modes(
        label: impl Into<String>,
        hbar: f64,
        per_mode: Vec<UncertaintyFunctional>,
    ) -> Result<Self> {
        if per_mode.iter().any(|f| f.space.n_modes() != 1) {
            return Err(Error::Arity {
                expected: 1,
                got: per_mode
                    .iter()
                    .map(|f| f.space.n_modes())
                    .max()
                    .unwrap_or(0),
            });
        }
        let space = PhaseSpace::new(per_mode.len(), hbar)?;
        let eval_modes = per_mode.clone();
        let f = Self::new(space, label, move |c| {
            eval_modes
                .iter()
                .enumerate()
                .map(|(k, f)| (f.eval)(&c.view((2 * k, 2 * k), (2, 2)).into_owned()))
                .sum()
        });
        Ok(f.with_gradient(move |c| {
            let mut g = MomentGradient::zeros(c.nrows());
            for (k, f) in per_mode.iter().enumerate() {
                let block = c.view((2 * k, 2 * k), (2, 2)).into_owned();
                let gk = f.gradient_matrix(&block);
                g.0.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&gk.0);
            }
            g
        }))
    }

    /// `α·f` for a positive (or any) constant `α`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let inner = self.clone();
        let eval = move |c: &DMatrix<f64>| alpha * (inner.eval)(c);
        let mut out = Self::new(self.space, format!("{alpha}*({})", self.label), eval);
        if self.grad.is_some() {
            let inner = self.clone();
            out = out.with_gradient(move |c| MomentGradient(inner.gradient_matrix(c).0 * alpha));
        }
        out
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn evaluate(&self, c: &CovarianceMatrix) -> f64 {
        (self.eval)(c.matrix())
    }

    pub fn evaluate_matrix(&self, c: &DMatrix<f64>) -> f64 {
        (self.eval)(c)
    }

    pub fn gradient(&self, c: &CovarianceMatrix) -> MomentGradient {
        self.gradient_matrix(c.matrix())
    }

    fn gradient_matrix(&self, c: &DMatrix<f64>) -> MomentGradient {
        match &self.grad {
            Some(g) => g(c),
            None => self.finite_difference_gradient_matrix(c),
        }
    }

    /// Central finite-difference gradient, independent of any analytic gradient.
    pub fn finite_difference_gradient(&self, c: &CovarianceMatrix) -> MomentGradient {
        self.finite_difference_gradient_matrix(c.matrix())
    }

    fn finite_difference_gradient_matrix(&self, c: &DMatrix<f64>) -> MomentGradient {
        let dim = c.nrows();
        let h = 1e-6 * self.space.hbar().max(c.amax());
        let mut g = MomentGradient::zeros(dim);
        let mut work = c.clone();
        for mu in 0..dim {
            for nu in mu..dim {
                let orig = work[(mu, nu)];
                let bump = |delta: f64, m: &mut DMatrix<f64>| {
                    m[(mu, nu)] = orig + delta;
                    m[(nu, mu)] = orig + delta;
                    (self.eval)(m)
                };
                let plus = bump(h, &mut work);
                let minus = bump(-h, &mut work);
                work[(mu, nu)] = orig;
                work[(nu, mu)] = orig;
                g.set(mu, nu, (plus - minus) / (2.0 * h));
            }
        }
        g
    }
}

/// Relative disagreement between the gradient in use and central finite differences.
pub fn gradient_check(f: &UncertaintyFunctional, c: &CovarianceMatrix) -> f64 {
    let a = f.gradient(c).0;
    let fd = f.finite_difference_gradient(c).0;
    let scale = a.amax().max(fd.amax()).max(f64::MIN_POSITIVE);
    (a - fd).amax() / scale
}

/// Symmetric matrix of partials: `F_{μμ} = f_{c_μμ}`, `F_{μν} = f_{c_μν} / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FMatrix(pub DMatrix<f64>);

impl FMatrix {
    pub fn from_gradient(g: &MomentGradient) -> Self {
        let dim = g.0.nrows();
        Self(DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                g.0[(i, j)]
            } else {
                0.5 * g.0[(i, j)]
            }
        }))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Block-diagonal part: the 2×2 local blocks of every mode.
    pub fn local_blocks(&self) -> Vec<DMatrix<f64>> {
        (0..self.0.nrows() / 2)
            .map(|k| self.0.view((2 * k, 2 * k), (2, 2)).into_owned())
            .collect()
    }
}

pub fn f_matrix(f: &UncertaintyFunctional, c: &CovarianceMatrix) -> Result<FMatrix> {
    if c.n_modes() != f.space().n_modes() {
        return Err(Error::Arity {
            expected: f.space().n_modes(),
            got: c.n_modes(),
        });
    }
    let g = f.gradient(c);
    if g.0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!(
            "gradient of '{}' is not finite at the given covariance",
            f.label()
        )));
    }
    Ok(FMatrix::from_gradient(&g))
}

/// Fixed-point iteration settings.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Initial damping `α` in `C ← (1-α)C + α·Σ⁻¹NΣ⁻ᵀ`.
    pub damping: f64,
    /// Times `α` may be halved within one step while the residual fails to drop.
    pub max_halvings: u32,
    /// Relative convergence threshold on `‖C - Σ⁻¹NΣ⁻ᵀ‖_F / ‖C‖_F`.
    pub tol: f64,
    pub max_iter: usize,
    /// Starting covariance; defaults to the number-state covariance of `qn`.
    pub init: Option<CovarianceMatrix>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            damping: 0.5,
            max_halvings: 6,
            tol: 1e-10,
            max_iter: 500,
            init: None,
        }
    }
}

/// Outcome of [`minimize`]'s optional excited-state scan.
#[derive(Debug, Clone)]
pub struct ExcitedCheck {
    pub qn: QuantumNumbers,
    pub value: Option<f64>,
    /// `value > ground value` (None when the excited solve failed).
    pub larger: Option<bool>,
}

/// An extremal covariance matrix with its diagnostics.
#[derive(Debug, Clone)]
pub struct ExtremumResult {
    pub covariance: CovarianceMatrix,
    pub value: f64,
    pub qn: QuantumNumbers,
    /// `‖C - Σ⁻¹NΣ⁻ᵀ‖_F` at the returned `C`.
    pub residual: f64,
    pub iterations: usize,
    /// Gradient matrix at the returned `C` (block-diagonal part only for
    /// product-state solutions).
    pub f_matrix: FMatrix,
    /// Symplectic eigenvalues of `f_matrix`, descending.
    pub f_sympl_eigs: Vec<f64>,
    pub excited: Vec<ExcitedCheck>,
}

impl ExtremumResult {
    /// `Tr(C F)`.
    pub fn trace_cf(&self) -> f64 {
        (self.covariance.matrix() * self.f_matrix.matrix()).trace()
    }

    /// `Tr(D N)` with `D` the Williamson form of `F` and `N` from `qn`.
    pub fn trace_dn(&self) -> f64 {
        let hbar = self.covariance.hbar();
        self.f_sympl_eigs
            .iter()
            .zip(self.qn.as_slice())
            .map(|(l, &n)| 2.0 * l * hbar * (n as f64 + 0.5))
            .sum()
    }

    /// `|Tr(CF) - Tr(DN)| / |Tr(CF)|`.
    pub fn trace_identity_gap(&self) -> f64 {
        let cf = self.trace_cf();
        (cf - self.trace_dn()).abs() / cf.abs().max(f64::MIN_POSITIVE)
    }
}

fn with_matrix(err: Error, c: &DMatrix<f64>) -> Error {
    match err {
        Error::NotPositiveDefinite { reason, .. } => Error::NotPositiveDefinite {
            reason: format!("gradient matrix F lost definiteness: {reason}"),
            matrix: Some(Box::new(c.clone())),
        },
        other => other,
    }
}

/// A damped step counts as progress only below this fraction of the old residual.
const SUFFICIENT_DECREASE: f64 = 0.9;

/// One evaluation of a consistency map at `C`: the map's image and diagnostics.
struct MapStep {
    target: DMatrix<f64>,
    f: FMatrix,
    f_eigs: Vec<f64>,
}

/// Damped fixed-point driver shared by the general and product solvers.
fn iterate<M>(
    f: &UncertaintyFunctional,
    qn: &QuantumNumbers,
    opts: &SolverOptions,
    mut map: M,
) -> Result<ExtremumResult>
where
    M: FnMut(&DMatrix<f64>) -> Result<MapStep>,
{
    let space = f.space();
    if qn.len() != space.n_modes() {
        return Err(Error::Arity {
            expected: space.n_modes(),
            got: qn.len(),
        });
    }
    let init = match &opts.init {
        Some(c) => {
            if c.n_modes() != space.n_modes() {
                return Err(Error::Arity {
                    expected: space.n_modes(),
                    got: c.n_modes(),
                });
            }
            c.matrix().clone()
        }
        None => number_state_covariance(space, qn)?.into_matrix(),
    };

    let mut c = init;
    let mut step = map(&c).map_err(|e| with_matrix(e, &c))?;
    let mut residual = (&c - &step.target).norm();

    for iter in 0..=opts.max_iter {
        if residual <= opts.tol * c.norm() {
            // The map's image is often a better fixed point than C itself.
            let image = step.target.clone();
            if let Ok(next) = map(&image) {
                let next_res = (&image - &next.target).norm();
                if next_res <= residual {
                    c = image;
                    step = next;
                    residual = next_res;
                }
            }
            let covariance = CovarianceMatrix::new(space, c)?;
            return Ok(ExtremumResult {
                value: f.evaluate(&covariance),
                covariance,
                qn: qn.clone(),
                residual,
                iterations: iter,
                f_matrix: step.f,
                f_sympl_eigs: step.f_eigs,
                excited: Vec::new(),
            });
        }
        if iter == opts.max_iter {
            break;
        }
        // First trial with sufficient decrease, else the best one seen.
        let mut best: Option<(DMatrix<f64>, MapStep, f64)> = None;
        let mut last_err = None;
        let mut alpha = opts.damping;
        for _ in 0..=opts.max_halvings {
            let trial = &c * (1.0 - alpha) + &step.target * alpha;
            let trial = (&trial + trial.transpose()) * 0.5;
            alpha *= 0.5;
            match map(&trial) {
                Ok(next) => {
                    let next_res = (&trial - &next.target).norm();
                    let enough = next_res <= SUFFICIENT_DECREASE * residual;
                    if best.as_ref().is_none_or(|b| next_res < b.2) {
                        best = Some((trial, next, next_res));
                    }
                    if enough {
                        break;
                    }
                }
                Err(e @ Error::NotPositiveDefinite { .. }) => last_err = Some((e, trial)),
                Err(e) => return Err(with_matrix(e, &trial)),
            }
        }
        match best {
            Some((trial, next, next_res)) => {
                c = trial;
                step = next;
                residual = next_res;
            }
            None => {
                let (e, trial) = last_err.expect("every trial either succeeds or fails");
                return Err(with_matrix(e, &trial));
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Solves `C = Σ(F(C))⁻¹ N Σ(F(C))⁻ᵀ` for the occupation numbers `qn`.
pub fn solve_consistency(
    f: &UncertaintyFunctional,
    qn: &QuantumNumbers,
    opts: &SolverOptions,
) -> Result<ExtremumResult> {
    let space = f.space();
    let n = qn.n_matrix(space.hbar());
    iterate(f, qn, opts, |c| {
        let cov = CovarianceMatrix::new(space, c.clone())?;
        let fm = f_matrix(f, &cov)?;
        let w = symplectic::williamson(fm.matrix())?;
        let inv = w.sigma.inverse();
        let target = inv.matrix() * &n * inv.matrix().transpose();
        Ok(MapStep {
            target: (&target + target.transpose()) * 0.5,
            f: fm,
            f_eigs: w.sympl_eigs,
        })
    })
}

/// Single-mode consistency map: `C = ħ(n + ½)·√det F·F⁻¹`.
fn single_mode_target(fk: &DMatrix<f64>, level: f64) -> Result<(DMatrix<f64>, f64)> {
    let det = fk[(0, 0)] * fk[(1, 1)] - fk[(0, 1)] * fk[(1, 0)];
    if !(det > 0.0 && fk[(0, 0)] > 0.0) {
        return Err(Error::not_pd(format!(
            "local gradient block has det {det:.3e}, f_x {:.3e}",
            fk[(0, 0)]
        )));
    }
    let root = det.sqrt();
    let adj = DMatrix::from_row_slice(2, 2, &[fk[(1, 1)], -fk[(0, 1)], -fk[(1, 0)], fk[(0, 0)]]);
    // √det F · F⁻¹ = adj(F) / √det F
    Ok((adj * (level / root), root))
}

/// Consistency conditions restricted to product states: each mode satisfies
/// `F_k C_k / √det F_k = ħ(n_k + ½)·I` with `F_k` the local gradient block.
///
/// `f` may depend on any moments; it is only ever evaluated on
/// block-diagonal covariances, so cross-mode moments are zero.
pub fn solve_consistency_product(
    f: &UncertaintyFunctional,
    qn: &QuantumNumbers,
    opts: &SolverOptions,
) -> Result<ExtremumResult> {
    let space = f.space();
    let hbar = space.hbar();
    let mut opts = opts.clone();
    if let Some(init) = &opts.init {
        let mut block = DMatrix::zeros(space.dim(), space.dim());
        for k in 0..init.n_modes().min(space.n_modes()) {
            block
                .view_mut((2 * k, 2 * k), (2, 2))
                .copy_from(&init.matrix().view((2 * k, 2 * k), (2, 2)));
        }
        opts.init = Some(CovarianceMatrix::new(init.space(), block)?);
    }
    let levels: Vec<f64> = qn
        .as_slice()
        .iter()
        .map(|&n| hbar * (n as f64 + 0.5))
        .collect();
    iterate(f, qn, &opts, |c| {
        let cov = CovarianceMatrix::new(space, c.clone())?;
        let full = f_matrix(f, &cov)?;
        let mut local = DMatrix::zeros(space.dim(), space.dim());
        let mut target = DMatrix::zeros(space.dim(), space.dim());
        let mut eigs = Vec::with_capacity(space.n_modes());
        for (k, fk) in full.local_blocks().into_iter().enumerate() {
            let (tk, root) = single_mode_target(&fk, levels[k])?;
            target.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&tk);
            local.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&fk);
            eigs.push(root);
        }
        // Keep (D, N) paired mode by mode: the trace identity needs λ_k with n_k.
        Ok(MapStep {
            target,
            f: FMatrix(local),
            f_eigs: eigs,
        })
    })
}

/// Single-mode consistency conditions `F·C/√det F = ħ(n + ½)·I`, solved
/// through the closed form without a Williamson decomposition.
pub fn solve_consistency_n1(
    f: &UncertaintyFunctional,
    n: u32,
    opts: &SolverOptions,
) -> Result<ExtremumResult> {
    if f.space().n_modes() != 1 {
        return Err(Error::Arity {
            expected: 1,
            got: f.space().n_modes(),
        });
    }
    solve_consistency_product(f, &QuantumNumbers::new(vec![n]), opts)
}

/// `‖F·C/√det F - ħ(n + ½)·I‖_max` for a single mode.
pub fn n1_condition_residual(
    f: &UncertaintyFunctional,
    c: &CovarianceMatrix,
    n: u32,
) -> Result<f64> {
    let fm = f_matrix(f, c)?;
    let det = fm.0.determinant();
    if det <= 0.0 {
        return Err(Error::not_pd("single-mode F is not positive definite"));
    }
    let lhs = fm.matrix() * c.matrix() / det.sqrt();
    let rhs = DMatrix::identity(2, 2) * (c.hbar() * (n as f64 + 0.5));
    Ok((lhs - rhs).amax())
}

#[derive(Debug, Clone, Default)]
pub struct MinimizeOptions {
    pub solver: SolverOptions,
    /// Also solve every `qn` with a single `n_k = 1` and record whether the
    /// value grows.
    pub check_excited: bool,
}

/// Lower bound from the ground-state solution `qn = (0, ..., 0)`.
pub fn minimize(f: &UncertaintyFunctional, opts: &MinimizeOptions) -> Result<ExtremumResult> {
    minimize_with(f, opts, solve_consistency)
}

/// [`minimize`] over product states only.
pub fn minimize_product(
    f: &UncertaintyFunctional,
    opts: &MinimizeOptions,
) -> Result<ExtremumResult> {
    minimize_with(f, opts, solve_consistency_product)
}

fn minimize_with<S>(
    f: &UncertaintyFunctional,
    opts: &MinimizeOptions,
    solve: S,
) -> Result<ExtremumResult>
where
    S: Fn(&UncertaintyFunctional, &QuantumNumbers, &SolverOptions) -> Result<ExtremumResult>,
{
    let n = f.space().n_modes();
    let mut ground = solve(f, &QuantumNumbers::ground(n), &opts.solver)?;
    if opts.check_excited {
        let mut excited_opts = opts.solver.clone();
        excited_opts.init = None;
        for k in 0..n {
            let mut levels = vec![0; n];
            levels[k] = 1;
            let qn = QuantumNumbers::new(levels);
            let value = solve(f, &qn, &excited_opts).ok().map(|r| r.value);
            ground.excited.push(ExcitedCheck {
                larger: value.map(|v| v > ground.value),
                qn,
                value,
            });
        }
    }
    Ok(ground)
}

/// Random-restart search settings for [`brute_force_minimize`].
#[derive(Debug, Clone)]
pub struct BruteForceOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Restrict the search to pure product states.
    pub product_only: bool,
    /// Initial squeezing range `[-s, s]` of each restart.
    pub max_squeeze: f64,
    /// Squeezing is confined to `[-b, b]` during the search.
    pub squeeze_bound: f64,
    pub max_sweeps: usize,
    /// Coordinate steps below this end the local search.
    pub min_step: f64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 0,
            product_only: false,
            max_squeeze: 1.0,
            squeeze_bound: 6.0,
            max_sweeps: 4000,
            min_step: 1e-10,
        }
    }
}

impl BruteForceOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            ..Self::default()
        }
    }
}

/// Moves smaller than this fraction of the current value are rounding noise.
const NOISE_FLOOR: f64 = 1e-12;

/// Box-constrained coordinate descent with per-coordinate adaptive steps.
fn coordinate_descent<F: Fn(&[f64]) -> f64>(
    objective: F,
    mut x: Vec<f64>,
    bounds: &[(f64, f64)],
    opts: &BruteForceOptions,
) -> (f64, Vec<f64>) {
    let score = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best = score(&x);
    let mut steps = vec![0.25; x.len()];
    for _ in 0..opts.max_sweeps {
        let mut moved = false;
        for i in 0..x.len() {
            let orig = x[i];
            let (lo, hi) = bounds[i];
            let mut improved = false;
            for dir in [1.0, -1.0] {
                let cand = (orig + dir * steps[i]).clamp(lo, hi);
                if cand == orig {
                    continue;
                }
                x[i] = cand;
                let v = score(&x);
                if v < best - NOISE_FLOOR * best.abs() {
                    best = v;
                    steps[i] *= 2.0 * dir;
                    improved = true;
                    break;
                }
            }
            if improved {
                moved = true;
            } else {
                x[i] = orig;
                steps[i] *= 0.5;
            }
        }
        if !moved && steps.iter().all(|s| s.abs() < opts.min_step) {
            break;
        }
        for s in steps.iter_mut() {
            *s = s.clamp(-4.0, 4.0);
        }
    }
    (best, x)
}

/// Independent numerical oracle: minimises `f` over pure Gaussian
/// covariances `Σ(ħ/2)Σᵀ` by random restarts plus coordinate descent over
/// the circuit parameters of Σ. Deterministic for a given seed.
pub fn brute_force_minimize(
    f: &UncertaintyFunctional,
    opts: &BruteForceOptions,
) -> (f64, CovarianceMatrix) {
    let space = f.space();
    let circuit = if opts.product_only {
        GaussianCircuit::product(space.n_modes())
    } else {
        GaussianCircuit::new(space.n_modes())
    };
    let hbar = space.hbar();
    let bounds: Vec<(f64, f64)> = (0..circuit.n_params())
        .map(|i| {
            if circuit.is_squeeze(i) {
                (-opts.squeeze_bound, opts.squeeze_bound)
            } else {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
        })
        .collect();
    let runs: Vec<(f64, usize, Vec<f64>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let start = circuit.random_params(&mut rng, opts.max_squeeze);
            let objective = |p: &[f64]| {
                let s = circuit.symplectic(p);
                let m = s.matrix() * s.matrix().transpose() * (hbar / 2.0);
                f.evaluate_matrix(&((&m + m.transpose()) * 0.5))
            };
            let (v, x) = coordinate_descent(objective, start, &bounds, opts);
            (v, i, x)
        })
        .collect();
    let (value, _, params) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one restart");
    (value, circuit.covariance(&params, hbar))
}
