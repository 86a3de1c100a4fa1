//! Geometry of the set of admissible second moments.
//!
//! For one mode the moments `(u, v, w)` of [`MomentTriple`] satisfy
//! `u² - v² - w² ≥ e₀²`, `u > 0`, with `e_n = (n + ½)ħ`. Squeezed number
//! states `|n⟩` sweep out the sheet `u² - v² - w² = e_n²`.

use nalgebra::DMatrix;

use crate::covariance::{
    sheet_level, superposition_0m_variance_full, CovarianceMatrix, MomentTriple, ADMISSIBILITY_TOL,
};
use crate::error::{Error, Result};
use crate::symplectic::{doubled, williamson, SymplecticMatrix};

/// Relative width of the boundary band used by [`classify`].
pub const BOUNDARY_TOL: f64 = 1e-8;

const MAX_RETRIES: usize = 8;

/// Upper sheet `u² - v² - w² = e_n²`, `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidSheet {
    pub n: u32,
    pub e_n: f64,
}

impl HyperboloidSheet {
    pub fn new(n: u32, hbar: f64) -> Self {
        Self {
            n,
            e_n: sheet_level(n, hbar),
        }
    }

    /// `u` on the sheet above `(v, w)`.
    pub fn u_at(&self, v: f64, w: f64) -> f64 {
        (self.e_n * self.e_n + v * v + w * w).sqrt()
    }

    pub fn triple(&self, rho: f64, theta: f64) -> MomentTriple {
        let (s, c) = theta.sin_cos();
        MomentTriple::new(
            self.e_n * rho.cosh(),
            self.e_n * rho.sinh() * c,
            self.e_n * rho.sinh() * s,
        )
    }

    /// `|u² - v² - w² - e_n²|`, or infinity for `u ≤ 0`.
    pub fn residual(&self, t: &MomentTriple) -> f64 {
        if t.u <= 0.0 {
            return f64::INFINITY;
        }
        (t.interval() - self.e_n * self.e_n).abs()
    }

    /// Points `(u, v)` of the `w = 0` cross-section, `steps + 1` samples of `v`
    /// evenly spaced on `[-vmax, vmax]`.
    pub fn slice(&self, vmax: f64, steps: usize) -> Vec<(f64, f64)> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|i| {
                let v = if i == steps {
                    vmax
                } else {
                    -vmax + 2.0 * vmax * i as f64 / steps as f64
                };
                (self.u_at(v, 0.0), v)
            })
            .collect()
    }
}

/// `u > 0` and `u² - v² - w² ≥ e₀² - tol`.
pub fn region_contains(t: &MomentTriple, tol: f64, hbar: f64) -> bool {
    let e0 = sheet_level(0, hbar);
    t.u > 0.0 && t.interval() >= e0 * e0 - tol
}

/// The sheet containing `t` to within `tol`, if any.
pub fn sheet_of(t: &MomentTriple, tol: f64, hbar: f64) -> Option<u32> {
    if t.u <= 0.0 || t.interval() <= 0.0 {
        return None;
    }
    let guess = (t.interval().sqrt() / hbar - 0.5).round();
    if guess < 0.0 || guess > u32::MAX as f64 {
        return None;
    }
    let n = guess as u32;
    (HyperboloidSheet::new(n, hbar).residual(t) <= tol).then_some(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Three-way split with a boundary band of relative width [`BOUNDARY_TOL`].
pub fn classify(t: &MomentTriple, hbar: f64) -> Location {
    let e0sq = sheet_level(0, hbar).powi(2);
    if t.u <= 0.0 {
        return Location::Outside;
    }
    let margin = (t.interval() - e0sq) / e0sq;
    if margin > BOUNDARY_TOL {
        Location::Interior
    } else if margin >= -BOUNDARY_TOL {
        Location::Boundary
    } else {
        Location::Outside
    }
}

/// `(ρ, θ)` with `squeezed_number_triple(0, ρ, θ) ≈ t` for a triple on sheet 0.
pub fn boundary_coordinates(t: &MomentTriple, hbar: f64) -> (f64, f64) {
    let e0 = sheet_level(0, hbar);
    let r = t.v.hypot(t.w);
    ((r / e0).asinh(), t.w.atan2(t.v))
}

/// `target = t0·psi + (1 - t0)·phi` with `phi`, `psi` on sheet 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexDecomposition {
    pub phi: MomentTriple,
    pub psi: MomentTriple,
    pub t0: f64,
}

impl ConvexDecomposition {
    pub fn mixture(&self) -> MomentTriple {
        let (a, b, t) = (self.phi, self.psi, self.t0);
        MomentTriple::new(
            t * b.u + (1.0 - t) * a.u,
            t * b.v + (1.0 - t) * a.v,
            t * b.w + (1.0 - t) * a.w,
        )
    }
}

/// Writes an interior triple as a mixture of two boundary triples.
///
/// Works in the plane spanned by the `u` axis and the target, rotated so the
/// target sits at `(u, r, 0)`, `r ≥ 0`. `phi` is the sheet-0 point at
/// hyperbolic parameter `atanh(r/u) + 1 + |angle_seed|` on the `-r` side, and
/// `psi` is the second crossing of the line from `phi` through the target. On
/// the `u` axis the plane's orientation is `angle_seed` itself. If the chord
/// is not space-like the parameter of `phi` grows by one, at most 8 times.
pub fn convex_decompose(
    target: &MomentTriple,
    angle_seed: f64,
    hbar: f64,
) -> Result<ConvexDecomposition> {
    match classify(target, hbar) {
        Location::Boundary => {
            return Err(Error::Degenerate(format!(
                "boundary point ({}, {}, {}) is not a proper mixture",
                target.u, target.v, target.w
            )))
        }
        Location::Outside => {
            return Err(Error::Domain(format!(
                "({}, {}, {}) lies outside the uncertainty region",
                target.u, target.v, target.w
            )))
        }
        Location::Interior => {}
    }
    let e0 = sheet_level(0, hbar);
    let r = target.v.hypot(target.w);
    let beta = if r > 1e-14 * target.u {
        target.w.atan2(target.v)
    } else {
        angle_seed
    };
    let (sb, cb) = beta.sin_cos();
    let to_triple = |u: f64, r: f64| MomentTriple::new(u, r * cb, r * sb);
    // ⟨a, b⟩ = a_u b_u - a_r b_r
    let mink = |a: (f64, f64), b: (f64, f64)| a.0 * b.0 - a.1 * b.1;

    let xi = (target.u, r);
    let mut rho_phi = (r / target.u).atanh() + 1.0 + angle_seed.abs();
    for _ in 0..MAX_RETRIES {
        let phi = (e0 * rho_phi.cosh(), -e0 * rho_phi.sinh());
        let d = (xi.0 - phi.0, xi.1 - phi.1);
        let dd = mink(d, d);
        // second root of ⟨phi + s d, phi + s d⟩ = e₀²; the first is s = 0
        let s = -2.0 * mink(phi, d) / dd;
        if dd < 0.0 && s.is_finite() && s >= 1.0 {
            let psi_r = phi.1 + s * d.1;
            let psi = (e0.hypot(psi_r), psi_r);
            let t0 = (xi.0 - phi.0) / (psi.0 - phi.0);
            if (0.0..=1.0).contains(&t0) {
                return Ok(ConvexDecomposition {
                    phi: to_triple(phi.0, phi.1),
                    psi: to_triple(psi.0, psi.1),
                    t0,
                });
            }
        }
        rho_phi += 1.0;
    }
    Err(Error::NoConvergence {
        iterations: MAX_RETRIES,
        residual: f64::NAN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    pub det: f64,
    pub bound: f64,
    pub det_ok: bool,
    pub admissible: bool,
}

/// Checks `det(tC1 + (1-t)C2) ≥ (ħ/2)^{2N}` for two minimal-determinant inputs.
pub fn convexity_check(
    c1: &CovarianceMatrix,
    c2: &CovarianceMatrix,
    t: f64,
) -> Result<ConvexityReport> {
    if c1.space() != c2.space() {
        return Err(Error::Arity {
            expected: c1.n_modes(),
            got: c2.n_modes(),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("mixing weight {t} outside [0, 1]")));
    }
    let bound = (c1.hbar() / 2.0).powi(2 * c1.n_modes() as i32);
    for (i, c) in [c1, c2].into_iter().enumerate() {
        let rel = (c.determinant() - bound).abs() / bound;
        if rel > BOUNDARY_TOL {
            return Err(Error::Domain(format!(
                "input {} has det {:.6e}, not the minimum {bound:.6e}",
                i + 1,
                c.determinant()
            )));
        }
    }
    let mix = CovarianceMatrix::new(c1.space(), c1.matrix() * t + c2.matrix() * (1.0 - t))?;
    let det = mix.determinant();
    Ok(ConvexityReport {
        det,
        bound,
        det_ok: det >= bound * (1.0 - 1e-10),
        admissible: mix.is_admissible(ADMISSIBILITY_TOL * c1.hbar())?,
    })
}

/// Per-mode mixing weights of `√t|0⟩ + √(1-t)|M⟩` matching the symplectic
/// spectrum of a target, plus the symplectic map back to the target.
#[derive(Debug, Clone)]
pub struct HoleWitness {
    pub m: u32,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    /// `target = sigma⁻¹ · diag(s) · sigma⁻ᵀ`.
    pub sigma: SymplecticMatrix,
    pub hbar: f64,
}

impl HoleWitness {
    /// `t_k ħ/2 + (1 - t_k)(M + ½)ħ` per mode.
    pub fn superposition_variances(&self) -> Result<Vec<f64>> {
        self.t
            .iter()
            .map(|&t| superposition_0m_variance_full(self.m, t, self.hbar))
            .collect()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let inv = self.sigma.inverse();
        let d = DMatrix::from_diagonal(&doubled(&self.s));
        inv.matrix() * d * inv.matrix().transpose()
    }
}

pub fn hole_witness(target: &CovarianceMatrix) -> Result<HoleWitness> {
    let hbar = target.hbar();
    target.require_admissible(ADMISSIBILITY_TOL * hbar)?;
    let (s, sigma) = match normal_form_levels(target.matrix()) {
        Some(s) => (s, SymplecticMatrix::identity(target.n_modes())),
        None => {
            let w = williamson(target.matrix())?;
            (w.sympl_eigs, w.sigma.transpose().inverse())
        }
    };
    let s_max = s.iter().cloned().fold(0.0, f64::max);
    let m = ((s_max / hbar - 0.5).ceil().max(2.0)) as u32;
    let top = (m as f64 + 0.5) * hbar;
    let t = s
        .iter()
        .map(|&s| ((top - s) / (m as f64 * hbar)).clamp(0.0, 1.0))
        .collect();
    Ok(HoleWitness {
        m,
        t,
        s,
        sigma,
        hbar,
    })
}

/// Levels of a matrix already of the form `diag(s₁, s₁, …, s_N, s_N)`.
fn normal_form_levels(m: &DMatrix<f64>) -> Option<Vec<f64>> {
    let scale = m.amax();
    let tol = 1e-14 * scale;
    let off = m
        .iter()
        .enumerate()
        .any(|(i, &x)| i % (m.nrows() + 1) != 0 && x.abs() > tol);
    if off {
        return None;
    }
    (0..m.nrows() / 2)
        .map(|k| {
            let (a, b) = (m[(2 * k, 2 * k)], m[(2 * k + 1, 2 * k + 1)]);
            ((a - b).abs() <= tol).then_some(0.5 * (a + b))
        })
        .collect()
}
