//! Named uncertainty inequalities, EPR-type operators and entanglement verdicts.

use nalgebra::{DMatrix, DVector};

use crate::covariance::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::functional::{
    minimize, minimize_product, ExtremumResult, MinimizeOptions, MomentGradient,
    UncertaintyFunctional,
};
use crate::symplectic::PhaseSpace;

/// Default verdict tolerance, in units of ħ.
pub const VERDICT_TOL: f64 = 1e-9;

/// Which consistency conditions produce an entry's solved bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveRoute {
    /// Full consistency conditions; the solution is the global bound.
    General,
    /// Product-state conditions; the solution is the separable bound.
    Product,
}

/// Identifier of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InequalityKind {
    DetRs,
    RobDof,
    ProdRs,
    FactHeis,
    MixedProd,
    CorIneq,
    FourEpr,
    Duan,
    TripleSep,
    SumHeis,
    CrossHeis,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 11] = [
        InequalityKind::DetRs,
        InequalityKind::RobDof,
        InequalityKind::ProdRs,
        InequalityKind::FactHeis,
        InequalityKind::MixedProd,
        InequalityKind::CorIneq,
        InequalityKind::FourEpr,
        InequalityKind::Duan,
        InequalityKind::TripleSep,
        InequalityKind::SumHeis,
        InequalityKind::CrossHeis,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InequalityKind::DetRs => "detrs",
            InequalityKind::RobDof => "robdof",
            InequalityKind::ProdRs => "prodrs",
            InequalityKind::FactHeis => "factheis",
            InequalityKind::MixedProd => "mixedprod",
            InequalityKind::CorIneq => "corineq",
            InequalityKind::FourEpr => "fourepr",
            InequalityKind::Duan => "duan",
            InequalityKind::TripleSep => "triplesep",
            InequalityKind::SumHeis => "sumheis",
            InequalityKind::CrossHeis => "crossheis",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// An inequality `lhs(C) ≥ bound`, optionally with a larger bound that holds
/// for separable states only.
#[derive(Debug, Clone)]
pub struct InequalitySpec {
    pub kind: InequalityKind,
    pub label: String,
    pub functional: UncertaintyFunctional,
    pub bound: f64,
    pub separable_bound: Option<f64>,
    pub params: Vec<(&'static str, f64)>,
    pub route: SolveRoute,
}

/// Result of checking one inequality on one covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub lhs: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

impl InequalitySpec {
    pub fn arity(&self) -> usize {
        self.functional.space().n_modes()
    }

    pub fn hbar(&self) -> f64 {
        self.functional.space().hbar()
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| *n == name).map(|p| p.1)
    }

    /// The bound the entry's consistency conditions reproduce.
    pub fn solved_bound(&self) -> f64 {
        match self.route {
            SolveRoute::General => self.bound,
            SolveRoute::Product => self.separable_bound.unwrap_or(self.bound),
        }
    }

    /// Runs the consistency solver matching [`SolveRoute`].
    pub fn solve(&self, opts: &MinimizeOptions) -> Result<ExtremumResult> {
        match self.route {
            SolveRoute::General => minimize(&self.functional, opts),
            SolveRoute::Product => minimize_product(&self.functional, opts),
        }
    }

    pub fn evaluate(&self, c: &CovarianceMatrix, tol: f64) -> Result<Evaluation> {
        self.check_arity(c)?;
        let lhs = self.functional.evaluate(c);
        let margin = lhs - self.bound;
        Ok(Evaluation {
            lhs,
            bound: self.bound,
            satisfied: margin >= -tol,
            margin,
        })
    }

    fn check_arity(&self, c: &CovarianceMatrix) -> Result<()> {
        if c.n_modes() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: c.n_modes(),
            });
        }
        Ok(())
    }
}

/// Variance `aᵀCa` of the operator `aᵀẑ`.
pub fn epr_variance(coeffs: &DVector<f64>, c: &CovarianceMatrix) -> Result<f64> {
    if coeffs.len() != c.space().dim() {
        return Err(Error::Dimension(format!(
            "coefficient vector has length {}, expected {}",
            coeffs.len(),
            c.space().dim()
        )));
    }
    Ok(c.quadratic_form(coeffs))
}

/// Coefficients of `u_i = α_i p1 + β_i p2` and `v_i = γ_i q1 - δ_i q2`, i = 1, 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprOperatorSet {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    pub delta: [f64; 2],
}

impl EprOperatorSet {
    /// Phase-space coefficient vectors of `u_1, u_2`.
    pub fn u_vectors(&self) -> [DVector<f64>; 2] {
        [0, 1].map(|i| DVector::from_vec(vec![self.alpha[i], 0.0, self.beta[i], 0.0]))
    }

    /// Phase-space coefficient vectors of `v_1, v_2`.
    pub fn v_vectors(&self) -> [DVector<f64>; 2] {
        [0, 1].map(|i| DVector::from_vec(vec![0.0, self.gamma[i], 0.0, -self.delta[i]]))
    }

    pub fn vectors(&self) -> Vec<DVector<f64>> {
        let [u1, u2] = self.u_vectors();
        let [v1, v2] = self.v_vectors();
        vec![u1, v1, u2, v2]
    }

    /// Residuals of `α·α = γ·γ = a`, `β·β = δ·δ = b`, `α·β = γ·δ = c/2`.
    pub fn constraint_residuals(&self, a: f64, b: f64, c: f64) -> [f64; 6] {
        let dot = |x: [f64; 2], y: [f64; 2]| x[0] * y[0] + x[1] * y[1];
        [
            dot(self.alpha, self.alpha) - a,
            dot(self.gamma, self.gamma) - a,
            dot(self.beta, self.beta) - b,
            dot(self.delta, self.delta) - b,
            dot(self.alpha, self.beta) - c / 2.0,
            dot(self.gamma, self.delta) - c / 2.0,
        ]
    }

    /// `Σ Δ²` of all four operators.
    pub fn total_variance(&self, c: &CovarianceMatrix) -> Result<f64> {
        self.vectors().iter().map(|v| epr_variance(v, c)).sum()
    }
}

/// One representative operator set for `(a, b, c)`:
/// `α = γ = (√a, 0)`, `β = δ = (c/(2√a), √(b - c²/(4a)))`.
pub fn epr_from_abc(a: f64, b: f64, c: f64) -> Result<EprOperatorSet> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Constraint(format!(
            "need a, b > 0, got a = {a}, b = {b}"
        )));
    }
    let slack = 4.0 * a * b - c * c;
    if slack < -1e-12 * 4.0 * a * b {
        return Err(Error::Constraint(format!(
            "need 4ab >= c^2, got 4ab - c^2 = {slack:.3e}"
        )));
    }
    let sa = a.sqrt();
    let b1 = c / (2.0 * sa);
    let b2 = (b - b1 * b1).max(0.0).sqrt();
    Ok(EprOperatorSet {
        alpha: [sa, 0.0],
        beta: [b1, b2],
        gamma: [sa, 0.0],
        delta: [b1, b2],
    })
}

/// Linear functional `Σ_i Δ²(a_iᵀẑ)`.
fn quadratic_sum(
    space: PhaseSpace,
    label: &str,
    vectors: &[DVector<f64>],
) -> UncertaintyFunctional {
    let dim = space.dim();
    let mut a = DMatrix::zeros(dim, dim);
    for v in vectors {
        a += v * v.transpose();
    }
    let mut g = MomentGradient::zeros(dim);
    for mu in 0..dim {
        g.set(mu, mu, a[(mu, mu)]);
        for nu in (mu + 1)..dim {
            g.set(mu, nu, 2.0 * a[(mu, nu)]);
        }
    }
    UncertaintyFunctional::linear(space, label, g)
}

fn space(n: usize, hbar: f64) -> Result<PhaseSpace> {
    PhaseSpace::new(n, hbar)
}

/// `det C ≥ (ħ/2)^{2N}`.
pub fn det_rs(space: PhaseSpace) -> InequalitySpec {
    let f = UncertaintyFunctional::new(space, "det C", |c| c.determinant()).with_gradient(|c| {
        let det = c.determinant();
        let inv = c
            .clone()
            .try_inverse()
            .unwrap_or_else(|| DMatrix::from_element(c.nrows(), c.ncols(), f64::NAN));
        let dim = c.nrows();
        let mut g = MomentGradient::zeros(dim);
        for mu in 0..dim {
            g.set(mu, mu, det * inv[(mu, mu)]);
            for nu in (mu + 1)..dim {
                g.set(mu, nu, 2.0 * det * inv[(mu, nu)]);
            }
        }
        g
    });
    InequalitySpec {
        kind: InequalityKind::DetRs,
        label: format!("det C >= (hbar/2)^{}", 2 * space.n_modes()),
        functional: f,
        bound: (space.hbar() / 2.0).powi(2 * space.n_modes() as i32),
        separable_bound: None,
        params: vec![("n_modes", space.n_modes() as f64)],
        route: SolveRoute::General,
    }
}

fn local(c: &DMatrix<f64>, k: usize) -> (f64, f64, f64) {
    (
        c[(2 * k, 2 * k)],
        c[(2 * k + 1, 2 * k + 1)],
        c[(2 * k, 2 * k + 1)],
    )
}

fn set_local(g: &mut MomentGradient, k: usize, fx: f64, fy: f64, fw: f64) {
    g.set(2 * k, 2 * k, fx);
    g.set(2 * k + 1, 2 * k + 1, fy);
    g.set(2 * k, 2 * k + 1, fw);
}

/// `(x1 y1 - w1²)(x2 y2 - w2²) ≥ (ħ/2)⁴`.
pub fn robdof(hbar: f64) -> Result<InequalitySpec> {
    let f = UncertaintyFunctional::new(space(2, hbar)?, "(x1 y1 - w1^2)(x2 y2 - w2^2)", |c| {
        let (x1, y1, w1) = local(c, 0);
        let (x2, y2, w2) = local(c, 1);
        (x1 * y1 - w1 * w1) * (x2 * y2 - w2 * w2)
    })
    .with_gradient(|c| {
        let (x1, y1, w1) = local(c, 0);
        let (x2, y2, w2) = local(c, 1);
        let (d1, d2) = (x1 * y1 - w1 * w1, x2 * y2 - w2 * w2);
        let mut g = MomentGradient::zeros(4);
        set_local(&mut g, 0, y1 * d2, x1 * d2, -2.0 * w1 * d2);
        set_local(&mut g, 1, y2 * d1, x2 * d1, -2.0 * w2 * d1);
        g
    });
    Ok(InequalitySpec {
        kind: InequalityKind::RobDof,
        label: "(Dp1^2 Dq1^2 - C_p1q1^2)(Dp2^2 Dq2^2 - C_p2q2^2) >= (hbar/2)^4".into(),
        functional: f,
        bound: (hbar / 2.0).powi(4),
        separable_bound: None,
        params: vec![],
        route: SolveRoute::General,
    })
}

/// `x1 y1 x2 y2 - w1² w2² ≥ (ħ/2)⁴`.
pub fn prod_rs(hbar: f64) -> Result<InequalitySpec> {
    let f = UncertaintyFunctional::new(space(2, hbar)?, "x1 y1 x2 y2 - w1^2 w2^2", |c| {
        let (x1, y1, w1) = local(c, 0);
        let (x2, y2, w2) = local(c, 1);
        x1 * y1 * x2 * y2 - w1 * w1 * w2 * w2
    })
    .with_gradient(|c| {
        let (x1, y1, w1) = local(c, 0);
        let (x2, y2, w2) = local(c, 1);
        let mut g = MomentGradient::zeros(4);
        set_local(&mut g, 0, y1 * x2 * y2, x1 * x2 * y2, -2.0 * w1 * w2 * w2);
        set_local(&mut g, 1, x1 * y1 * y2, x1 * y1 * x2, -2.0 * w2 * w1 * w1);
        g
    });
    Ok(InequalitySpec {
        kind: InequalityKind::ProdRs,
        label: "Dp1^2 Dq1^2 Dp2^2 Dq2^2 - C_p1q1^2 C_p2q2^2 >= (hbar/2)^4".into(),
        functional: f,
        bound: (hbar / 2.0).powi(4),
        separable_bound: None,
        params: vec![],
        route: SolveRoute::General,
    })
}

/// `Δp1 Δq1 Δp2 Δq2 ≥ (ħ/2)²`.
pub fn fact_heis(hbar: f64) -> Result<InequalitySpec> {
    let f = UncertaintyFunctional::new(space(2, hbar)?, "Dp1 Dq1 Dp2 Dq2", |c| {
        (c[(0, 0)] * c[(1, 1)] * c[(2, 2)] * c[(3, 3)]).sqrt()
    })
    .with_gradient(|c| {
        let (x1, y1, _) = local(c, 0);
        let (x2, y2, _) = local(c, 1);
        let v = (x1 * y1 * x2 * y2).sqrt();
        let mut g = MomentGradient::zeros(4);
        set_local(&mut g, 0, 0.5 * v / x1, 0.5 * v / y1, 0.0);
        set_local(&mut g, 1, 0.5 * v / x2, 0.5 * v / y2, 0.0);
        g
    });
    Ok(InequalitySpec {
        kind: InequalityKind::FactHeis,
        label: "Dp1 Dq1 Dp2 Dq2 >= (hbar/2)^2".into(),
        functional: f,
        bound: (hbar / 2.0).powi(2),
        separable_bound: None,
        params: vec![],
        route: SolveRoute::General,
    })
}

/// `a (x1 y2)ⁿ + b (x2 y1)ⁿ ≥ 2√(ab) (ħ/2)^{2n}` for `a, b, n > 0`.
pub fn mixed_product(a: f64, b: f64, n: f64, hbar: f64) -> Result<InequalitySpec> {
    if !(a > 0.0 && b > 0.0 && n > 0.0) {
        return Err(Error::Constraint(format!(
            "need a, b, n > 0, got ({a}, {b}, {n})"
        )));
    }
    let f = UncertaintyFunctional::new(space(2, hbar)?, "a (x1 y2)^n + b (x2 y1)^n", move |c| {
        a * (c[(0, 0)] * c[(3, 3)]).powf(n) + b * (c[(2, 2)] * c[(1, 1)]).powf(n)
    })
    .with_gradient(move |c| {
        let (x1, y1, _) = local(c, 0);
        let (x2, y2, _) = local(c, 1);
        let s = a * n * (x1 * y2).powf(n - 1.0);
        let t = b * n * (x2 * y1).powf(n - 1.0);
        let mut g = MomentGradient::zeros(4);
        set_local(&mut g, 0, s * y2, t * x2, 0.0);
        set_local(&mut g, 1, t * y1, s * x1, 0.0);
        g
    });
    Ok(InequalitySpec {
        kind: InequalityKind::MixedProd,
        label: format!("{a} (Dp1^2 Dq2^2)^{n} + {b} (Dp2^2 Dq1^2)^{n} >= 2 sqrt(ab) (hbar/2)^(2n)"),
        functional: f,
        bound: 2.0 * (a * b).sqrt() * (hbar / 2.0).powf(2.0 * n),
        separable_bound: None,
        params: vec![("a", a), ("b", b), ("n", n)],
        route: SolveRoute::General,
    })
}

/// `a(Δ²p1 + Δ²q1) + b(Δ²p2 + Δ²q2) + c(C_p1p2 - C_q1q2) ≥ ħ√((a+b)² - c²)`,
/// with the separable bound `(a+b)ħ`. Needs `a, b > 0` and `4ab > c²`.
pub fn corineq(a: f64, b: f64, c: f64, hbar: f64) -> Result<InequalitySpec> {
    if !(a > 0.0 && b > 0.0 && 4.0 * a * b > c * c) {
        return Err(Error::Constraint(format!(
            "need a, b > 0 and 4ab > c^2, got ({a}, {b}, {c})"
        )));
    }
    let mut g = MomentGradient::zeros(4);
    g.set(0, 0, a);
    g.set(1, 1, a);
    g.set(2, 2, b);
    g.set(3, 3, b);
    g.set(0, 2, c);
    g.set(1, 3, -c);
    Ok(InequalitySpec {
        kind: InequalityKind::CorIneq,
        label: format!(
            "{a}(Dp1^2+Dq1^2) + {b}(Dp2^2+Dq2^2) + {c}(C_p1p2 - C_q1q2) >= hbar sqrt((a+b)^2-c^2)"
        ),
        functional: UncertaintyFunctional::linear(space(2, hbar)?, "corineq", g),
        bound: hbar * ((a + b) * (a + b) - c * c).sqrt(),
        separable_bound: Some((a + b) * hbar),
        params: vec![("a", a), ("b", b), ("c", c)],
        route: SolveRoute::General,
    })
}

/// Sum of the variances of the four EPR-type operators built by [`epr_from_abc`].
/// Admits the limit `c² = 4ab`, where the global bound reaches zero.
pub fn four_epr(a: f64, b: f64, c: f64, hbar: f64) -> Result<InequalitySpec> {
    let set = epr_from_abc(a, b, c)?;
    let root = ((a + b) * (a + b) - c * c).max(0.0).sqrt();
    Ok(InequalitySpec {
        kind: InequalityKind::FourEpr,
        label: format!(
            "Du1^2 + Dv1^2 + Du2^2 + Dv2^2 (a={a}, b={b}, c={c}) >= hbar sqrt((a+b)^2-c^2)"
        ),
        functional: quadratic_sum(space(2, hbar)?, "four-epr", &set.vectors()),
        bound: hbar * root,
        separable_bound: Some((a + b) * hbar),
        params: vec![("a", a), ("b", b), ("c", c)],
        route: SolveRoute::General,
    })
}

/// `Δ²(√a p1 + √b p2) + Δ²(√a q1 - √b q2)`: the `c = 2√(ab)` limit of [`four_epr`].
pub fn duan(a: f64, b: f64, hbar: f64) -> Result<InequalitySpec> {
    let mut spec = four_epr(a, b, 2.0 * (a * b).sqrt(), hbar)?;
    spec.kind = InequalityKind::Duan;
    spec.label =
        format!("D^2(sqrt(a) p1 + sqrt(b) p2) + D^2(sqrt(a) q1 - sqrt(b) q2) (a={a}, b={b})");
    spec.bound = 0.0;
    spec.params = vec![("a", a), ("b", b)];
    Ok(spec)
}

/// Three-mode EPR sum `Δ²(q1+p2+q3) + Δ²(q2+p3+q1) + Δ²(q3+p1+q2)`:
/// bounded by zero in general and by `3√2 ħ` on separable states.
pub fn triple_sep(hbar: f64) -> Result<InequalitySpec> {
    let (p, q) = (PhaseSpace::p, PhaseSpace::q);
    let op = |idx: [usize; 3]| {
        let mut v = DVector::zeros(6);
        for i in idx {
            v[i] += 1.0;
        }
        v
    };
    let vectors = [
        op([q(0), p(1), q(2)]),
        op([q(1), p(2), q(0)]),
        op([q(2), p(0), q(1)]),
    ];
    Ok(InequalitySpec {
        kind: InequalityKind::TripleSep,
        label: "Du1^2 + Du2^2 + Du3^2 >= 3 sqrt(2) hbar (separable)".into(),
        functional: quadratic_sum(space(3, hbar)?, "triple-epr", &vectors),
        bound: 0.0,
        separable_bound: Some(3.0 * 2f64.sqrt() * hbar),
        params: vec![],
        route: SolveRoute::Product,
    })
}

/// `Δp1 Δq1 + Δp2 Δq2 ≥ ħ`.
pub fn sum_heis(hbar: f64) -> Result<InequalitySpec> {
    let f = UncertaintyFunctional::new(space(2, hbar)?, "Dp1 Dq1 + Dp2 Dq2", |c| {
        (c[(0, 0)] * c[(1, 1)]).sqrt() + (c[(2, 2)] * c[(3, 3)]).sqrt()
    })
    .with_gradient(|c| {
        let mut g = MomentGradient::zeros(4);
        for k in 0..2 {
            let (x, y, _) = local(c, k);
            let r = (x * y).sqrt();
            set_local(&mut g, k, 0.5 * y / r, 0.5 * x / r, 0.0);
        }
        g
    });
    Ok(InequalitySpec {
        kind: InequalityKind::SumHeis,
        label: "Dp1 Dq1 + Dp2 Dq2 >= hbar".into(),
        functional: f,
        bound: hbar,
        separable_bound: None,
        params: vec![],
        route: SolveRoute::General,
    })
}

/// `Δp1 Δq2 + Δp2 Δq1 ≥ ħ`.
pub fn cross_heis(hbar: f64) -> Result<InequalitySpec> {
    let mut spec = mixed_product(1.0, 1.0, 0.5, hbar)?;
    spec.kind = InequalityKind::CrossHeis;
    spec.label = "Dp1 Dq2 + Dp2 Dq1 >= hbar".into();
    spec.params = vec![];
    Ok(spec)
}

/// Parameters for [`build`]; unset values take the catalog defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct CatalogParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub n: Option<f64>,
    pub n_modes: Option<usize>,
}

/// Builds any catalog entry by kind.
///
/// Defaults: `corineq`/`fourepr` use `(a, b, c) = (1, 1, 1)`, `mixedprod`
/// uses `(a, b, n) = (2, 1, 1)`, `duan` uses `a = b = 1`, `detrs` two modes.
pub fn build(kind: InequalityKind, hbar: f64, params: CatalogParams) -> Result<InequalitySpec> {
    let a = params.a.unwrap_or(1.0);
    let b = params.b.unwrap_or(1.0);
    let c = params.c.unwrap_or(1.0);
    match kind {
        InequalityKind::DetRs => Ok(det_rs(space(params.n_modes.unwrap_or(2), hbar)?)),
        InequalityKind::RobDof => robdof(hbar),
        InequalityKind::ProdRs => prod_rs(hbar),
        InequalityKind::FactHeis => fact_heis(hbar),
        InequalityKind::MixedProd => {
            mixed_product(params.a.unwrap_or(2.0), b, params.n.unwrap_or(1.0), hbar)
        }
        InequalityKind::CorIneq => corineq(a, b, c, hbar),
        InequalityKind::FourEpr => four_epr(a, b, c, hbar),
        InequalityKind::Duan => duan(a, b, hbar),
        InequalityKind::TripleSep => triple_sep(hbar),
        InequalityKind::SumHeis => sum_heis(hbar),
        InequalityKind::CrossHeis => cross_heis(hbar),
    }
}

/// All catalog entries of arity `space.n_modes()`, at default parameters.
pub fn catalog(space: PhaseSpace) -> Vec<InequalitySpec> {
    let params = CatalogParams {
        n_modes: Some(space.n_modes()),
        ..CatalogParams::default()
    };
    InequalityKind::ALL
        .into_iter()
        .filter_map(|k| build(k, space.hbar(), params).ok())
        .filter(|s| s.arity() == space.n_modes())
        .collect()
}

/// `Entangled` iff `lhs(C)` falls below the separable bound by more than
/// `tol·ħ`. Unphysical input is rejected.
pub fn detect_entanglement(
    c: &CovarianceMatrix,
    spec: &InequalitySpec,
    tol: f64,
) -> Result<Verdict> {
    spec.check_arity(c)?;
    let sep = spec
        .separable_bound
        .ok_or_else(|| Error::Domain(format!("'{}' has no separable bound", spec.kind.name())))?;
    c.require_admissible(crate::covariance::ADMISSIBILITY_TOL * c.hbar())?;
    let lhs = spec.functional.evaluate(c);
    Ok(if lhs < sep - tol * c.hbar() {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    })
}
