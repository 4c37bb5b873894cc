//! Problem definitions and their discretization.
//!
//! A [`ProblemSpec`] describes `J[y] = ∫_a^b F(x, y, D^α y, I^β y) dx` with the
//! boundary condition `I^{1-α} y(b) = y_b`. The Leitmann family
//! `F = (g D^{1-β} y + g' I^β y + h')²` has a closed-form global minimizer whose
//! optimal value is `A²(b-a)`; [`ExampleKind`] registers the built-in members.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fracbasis::{boundary_row, BasisError, BasisSpec, BasisTable};
use crate::quadrature::{QuadratureError, QuadratureRule};

pub type Integrand = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const DEFAULT_QUAD_COUNT: usize = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("g vanishes or changes sign near x = {0}")]
    GVanishes(f64),
    #[error("{0}")]
    Mismatch(String),
    #[error("integrand is not finite at quadrature node {node} (x = {x})")]
    Integrand { node: usize, x: f64 },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// `∫_a^b F(x, y, D^α y, I^β y) dx → min` subject to `I^{1-α} y(b) = y_b`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub y_b: f64,
    pub integrand: Integrand,
    pub quad_count: usize,
    leitmann: Option<LeitmannFamily>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("y_b", &self.y_b)
            .field("quad_count", &self.quad_count)
            .field("leitmann", &self.leitmann.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(
        alpha: f64,
        beta: f64,
        a: f64,
        b: f64,
        y_b: f64,
        integrand: Integrand,
    ) -> Result<Self, ProblemError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ProblemError::Invalid(format!(
                "alpha = {alpha} must lie in (0, 1]"
            )));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(ProblemError::Invalid(format!(
                "beta = {beta} must lie in [0, 1)"
            )));
        }
        check_interval(a, b)?;
        if !y_b.is_finite() {
            return Err(ProblemError::Invalid(
                "boundary value must be finite".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            a,
            b,
            y_b,
            integrand,
            quad_count: DEFAULT_QUAD_COUNT,
            leitmann: None,
        })
    }

    pub fn with_quad_count(mut self, quad_count: usize) -> Self {
        self.quad_count = quad_count;
        self
    }

    /// The Leitmann data this problem was built from, if any.
    pub fn leitmann(&self) -> Option<&LeitmannFamily> {
        self.leitmann.as_ref()
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), ProblemError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(ProblemError::Invalid(format!(
            "interval [{a}, {b}] requires a < b"
        )));
    }
    Ok(())
}

/// `(g D^{1-β} y + g' I^β y + h')²` on `[a, b]` with `I^β y(b) = ε`.
#[derive(Clone)]
pub struct LeitmannFamily {
    pub g: ScalarFn,
    pub h: ScalarFn,
    pub gp: ScalarFn,
    pub hp: ScalarFn,
    pub beta_l: f64,
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
}

impl fmt::Debug for LeitmannFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LeitmannFamily")
            .field("beta_l", &self.beta_l)
            .field("epsilon", &self.epsilon)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish_non_exhaustive()
    }
}

const G_SAMPLES: usize = 1024;

impl LeitmannFamily {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g: ScalarFn,
        h: ScalarFn,
        gp: ScalarFn,
        hp: ScalarFn,
        beta_l: f64,
        epsilon: f64,
        a: f64,
        b: f64,
    ) -> Result<Self, ProblemError> {
        if !(0.0..1.0).contains(&beta_l) {
            return Err(ProblemError::Invalid(format!(
                "beta = {beta_l} must lie in [0, 1)"
            )));
        }
        check_interval(a, b)?;
        if !epsilon.is_finite() {
            return Err(ProblemError::Invalid("epsilon must be finite".into()));
        }
        // Sampled check of the nonvanishing hypothesis on g.
        let sign = g(a).signum();
        for k in 0..=G_SAMPLES {
            let x = a + (b - a) * k as f64 / G_SAMPLES as f64;
            let v = g(x);
            if !v.is_finite() || v == 0.0 || v.signum() != sign {
                return Err(ProblemError::GVanishes(x));
            }
        }
        Ok(Self {
            g,
            h,
            gp,
            hp,
            beta_l,
            epsilon,
            a,
            b,
        })
    }
}

/// Constants of the closed-form minimizer `y = D^β[(Ax + C - h)/g]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeitmannConstants {
    pub a_const: f64,
    pub c_const: f64,
}

pub fn leitmann_constants(fam: &LeitmannFamily) -> LeitmannConstants {
    let (a, b) = (fam.a, fam.b);
    let gb = (fam.g)(b);
    let (ha, hb) = ((fam.h)(a), (fam.h)(b));
    LeitmannConstants {
        a_const: (gb * fam.epsilon + hb - ha) / (b - a),
        c_const: (b * ha - a * hb - a * gb * fam.epsilon) / (b - a),
    }
}

/// Optimal value `A²(b-a)` of a Leitmann problem.
pub fn leitmann_optimum(fam: &LeitmannFamily) -> f64 {
    let k = leitmann_constants(fam);
    k.a_const * k.a_const * (fam.b - fam.a)
}

pub fn leitmann_to_problem(fam: &LeitmannFamily) -> ProblemSpec {
    let (g, gp, hp) = (fam.g.clone(), fam.gp.clone(), fam.hp.clone());
    let integrand: Integrand = Arc::new(move |x, _y, dy, iy| {
        let r = g(x) * dy + gp(x) * iy + hp(x);
        r * r
    });
    ProblemSpec {
        alpha: 1.0 - fam.beta_l,
        beta: fam.beta_l,
        a: fam.a,
        b: fam.b,
        y_b: fam.epsilon,
        integrand,
        quad_count: DEFAULT_QUAD_COUNT,
        leitmann: Some(fam.clone()),
    }
}

/// Built-in Leitmann problems on `[0, 1]` (plus the `g = 1, h = 0` case on a
/// general interval). `p` is the exponent in `g = 1/(1 + x^p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleKind {
    /// `g = h = 1/(1+x^p)`.
    Ex1 { alpha: f64, p: f64, epsilon: f64 },
    /// `g = h = e^{-νx}`.
    Ex2 { alpha: f64, nu: f64, epsilon: f64 },
    /// `g = h = 1/(1 + sin x)`.
    Ex3 { alpha: f64, epsilon: f64 },
    /// `g = 1/(1+x^p)`, `h = e^{-νx}`.
    Ex4 {
        alpha: f64,
        p: f64,
        nu: f64,
        epsilon: f64,
    },
    /// `g = 1/(1 + sin x)`, `h = cos x`.
    Ex5 { alpha: f64, epsilon: f64 },
    /// `g = 1`, `h = 0`: minimize `∫ (D^α y)²`.
    Remark3 {
        alpha: f64,
        a: f64,
        b: f64,
        epsilon: f64,
    },
}

pub const EXAMPLE_NAMES: [&str; 6] = ["ex1", "ex2", "ex3", "ex4", "ex5", "remark3"];

impl ExampleKind {
    /// Reference parameter set of each example.
    pub fn figure(name: &str) -> Option<Self> {
        Some(match name {
            "ex1" => Self::Ex1 {
                alpha: 0.5,
                p: 5.0,
                epsilon: 1.0,
            },
            "ex2" => Self::Ex2 {
                alpha: 0.5,
                nu: 1.0,
                epsilon: -1.0,
            },
            "ex3" => Self::Ex3 {
                alpha: 0.75,
                epsilon: 1.0,
            },
            "ex4" => Self::Ex4 {
                alpha: 0.5,
                p: 6.0,
                nu: 1.0,
                epsilon: 1.0,
            },
            "ex5" => Self::Ex5 {
                alpha: 0.75,
                epsilon: 0.0,
            },
            "remark3" => Self::Remark3 {
                alpha: 0.5,
                a: 0.0,
                b: 1.0,
                epsilon: 1.0,
            },
            _ => return None,
        })
    }

    pub fn all_figures() -> Vec<Self> {
        EXAMPLE_NAMES
            .iter()
            .filter_map(|n| Self::figure(n))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ex1 { .. } => "ex1",
            Self::Ex2 { .. } => "ex2",
            Self::Ex3 { .. } => "ex3",
            Self::Ex4 { .. } => "ex4",
            Self::Ex5 { .. } => "ex5",
            Self::Remark3 { .. } => "remark3",
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Ex1 { alpha, .. }
            | Self::Ex2 { alpha, .. }
            | Self::Ex3 { alpha, .. }
            | Self::Ex4 { alpha, .. }
            | Self::Ex5 { alpha, .. }
            | Self::Remark3 { alpha, .. } => alpha,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match *self {
            Self::Ex1 { epsilon, .. }
            | Self::Ex2 { epsilon, .. }
            | Self::Ex3 { epsilon, .. }
            | Self::Ex4 { epsilon, .. }
            | Self::Ex5 { epsilon, .. }
            | Self::Remark3 { epsilon, .. } => epsilon,
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        match *self {
            Self::Remark3 { a, b, .. } => (a, b),
            _ => (0.0, 1.0),
        }
    }

    pub fn family(&self) -> Result<LeitmannFamily, ProblemError> {
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ProblemError::Invalid(format!(
                "alpha = {alpha} must lie in (0, 1]"
            )));
        }
        let (a, b) = self.interval();
        let beta_l = 1.0 - alpha;
        let (g, gp, h, hp): (ScalarFn, ScalarFn, ScalarFn, ScalarFn) = match *self {
            Self::Ex1 { p, .. } => {
                let (g, gp) = rational_power(p)?;
                (g.clone(), gp.clone(), g, gp)
            }
            Self::Ex2 { nu, .. } => {
                let (g, gp) = decaying_exp(nu);
                (g.clone(), gp.clone(), g, gp)
            }
            Self::Ex3 { .. } => {
                let (g, gp) = reciprocal_sine();
                (g.clone(), gp.clone(), g, gp)
            }
            Self::Ex4 { p, nu, .. } => {
                let (g, gp) = rational_power(p)?;
                let (h, hp) = decaying_exp(nu);
                (g, gp, h, hp)
            }
            Self::Ex5 { .. } => {
                let (g, gp) = reciprocal_sine();
                (g, gp, Arc::new(f64::cos), Arc::new(|x: f64| -x.sin()))
            }
            Self::Remark3 { .. } => (
                Arc::new(|_| 1.0),
                Arc::new(|_| 0.0),
                Arc::new(|_| 0.0),
                Arc::new(|_| 0.0),
            ),
        };
        LeitmannFamily::new(g, h, gp, hp, beta_l, self.epsilon(), a, b)
    }

    pub fn problem(&self) -> Result<ProblemSpec, ProblemError> {
        Ok(leitmann_to_problem(&self.family()?))
    }
}

fn rational_power(p: f64) -> Result<(ScalarFn, ScalarFn), ProblemError> {
    if !(p >= 1.0) {
        return Err(ProblemError::Invalid(format!(
            "exponent p = {p} must be at least 1"
        )));
    }
    let g: ScalarFn = Arc::new(move |x: f64| 1.0 / (1.0 + x.powf(p)));
    let gp: ScalarFn = Arc::new(move |x: f64| {
        let d = 1.0 + x.powf(p);
        -p * x.powf(p - 1.0) / (d * d)
    });
    Ok((g, gp))
}

fn decaying_exp(nu: f64) -> (ScalarFn, ScalarFn) {
    (
        Arc::new(move |x: f64| (-nu * x).exp()),
        Arc::new(move |x: f64| -nu * (-nu * x).exp()),
    )
}

fn reciprocal_sine() -> (ScalarFn, ScalarFn) {
    (
        Arc::new(|x: f64| 1.0 / (1.0 + x.sin())),
        Arc::new(|x: f64| {
            let d = 1.0 + x.sin();
            -x.cos() / (d * d)
        }),
    )
}

/// Boundary constraint `row · c = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub row: Vec<f64>,
    pub rhs: f64,
}

impl Constraint {
    pub fn residual(&self, c: &[f64]) -> f64 {
        let v: f64 = self.row.iter().zip(c).map(|(r, x)| r * x).sum();
        (v - self.rhs).abs()
    }
}

fn check_compatible(spec: &ProblemSpec, basis: &BasisSpec) -> Result<(), ProblemError> {
    if basis.a != spec.a || basis.b != spec.b {
        return Err(ProblemError::Mismatch(format!(
            "basis interval [{}, {}] differs from problem interval [{}, {}]",
            basis.a, basis.b, spec.a, spec.b
        )));
    }
    if basis.alpha != spec.alpha {
        return Err(ProblemError::Mismatch(format!(
            "basis order {} differs from problem order {}",
            basis.alpha, spec.alpha
        )));
    }
    Ok(())
}

fn check_rule(spec: &ProblemSpec, rule: &QuadratureRule) -> Result<(), ProblemError> {
    if rule.interval() != (spec.a, spec.b) {
        return Err(ProblemError::Mismatch(format!(
            "quadrature rule lives on {:?}, problem on [{}, {}]",
            rule.interval(),
            spec.a,
            spec.b
        )));
    }
    Ok(())
}

pub fn constraint(spec: &ProblemSpec, basis: &BasisSpec) -> Result<Constraint, ProblemError> {
    check_compatible(spec, basis)?;
    Ok(Constraint {
        row: boundary_row(basis),
        rhs: spec.y_b,
    })
}

/// The quadrature-discretized functional `c ↦ Σ_j ω_j F(ξ_j, y_n, D^α y_n, I^β y_n)`.
#[derive(Clone)]
pub struct Objective {
    table: BasisTable,
    weights: Vec<f64>,
    integrand: Integrand,
    identity_integral: bool,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("spec", self.table.spec())
            .field("nodes", &self.weights.len())
            .finish_non_exhaustive()
    }
}

impl Objective {
    pub fn dimension(&self) -> usize {
        self.table.spec().len()
    }

    pub fn eval(&self, c: &[f64]) -> Result<f64, ProblemError> {
        if c.len() != self.dimension() {
            return Err(BasisError::Length {
                got: c.len(),
                expected: self.dimension(),
            }
            .into());
        }
        let mut total = 0.0;
        for (j, (&x, &w)) in self.table.points().iter().zip(&self.weights).enumerate() {
            let (y, dy, iy) = self.table.eval(c, j);
            let iy = if self.identity_integral { y } else { iy };
            let f = (self.integrand)(x, y, dy, iy);
            if !f.is_finite() {
                return Err(ProblemError::Integrand { node: j, x });
            }
            total += w * f;
        }
        Ok(total)
    }
}

pub fn assemble_objective(
    spec: &ProblemSpec,
    basis: &BasisSpec,
    rule: &QuadratureRule,
) -> Result<Objective, ProblemError> {
    check_compatible(spec, basis)?;
    check_rule(spec, rule)?;
    let table = BasisTable::new(*basis, rule.nodes(), spec.alpha, spec.beta)?;
    Ok(Objective {
        table,
        weights: rule.weights().to_vec(),
        integrand: spec.integrand.clone(),
        identity_integral: spec.beta == 0.0,
    })
}

/// Weighted affine residuals `L_j(c) = m_j · c + d_j` with objective `Σ ω_j L_j(c)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineResiduals {
    /// Row-major, `weights.len()` rows of `dim` entries.
    pub matrix: Vec<f64>,
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
    pub dim: usize,
}

impl AffineResiduals {
    pub fn row(&self, j: usize) -> &[f64] {
        &self.matrix[j * self.dim..(j + 1) * self.dim]
    }

    pub fn objective(&self, c: &[f64]) -> f64 {
        (0..self.weights.len())
            .map(|j| {
                let r: f64 =
                    self.row(j).iter().zip(c).map(|(m, x)| m * x).sum::<f64>() + self.offsets[j];
                self.weights[j] * r * r
            })
            .sum()
    }
}

/// The residual form of a Leitmann problem; `None` for general integrands.
pub fn affine_residuals(
    spec: &ProblemSpec,
    basis: &BasisSpec,
    rule: &QuadratureRule,
) -> Result<Option<AffineResiduals>, ProblemError> {
    let Some(fam) = spec.leitmann.as_ref() else {
        return Ok(None);
    };
    check_compatible(spec, basis)?;
    check_rule(spec, rule)?;
    let table = BasisTable::new(*basis, rule.nodes(), spec.alpha, spec.beta)?;
    let dim = basis.len();
    let mut matrix = Vec::with_capacity(dim * rule.len());
    let mut offsets = Vec::with_capacity(rule.len());
    for (j, &x) in rule.nodes().iter().enumerate() {
        let (g, gp) = ((fam.g)(x), (fam.gp)(x));
        let irow = if spec.beta == 0.0 {
            table.value_row(j)
        } else {
            table.integral_row(j)
        };
        matrix.extend(
            table
                .deriv_row(j)
                .iter()
                .zip(irow)
                .map(|(d, i)| g * d + gp * i),
        );
        let d = (fam.hp)(x);
        if !(g.is_finite() && gp.is_finite() && d.is_finite()) {
            return Err(ProblemError::Integrand { node: j, x });
        }
        offsets.push(d);
    }
    Ok(Some(AffineResiduals {
        matrix,
        offsets,
        weights: rule.weights().to_vec(),
        dim,
    }))
}
