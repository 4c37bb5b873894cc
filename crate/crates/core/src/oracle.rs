//! Independent ground truth.
//!
//! Two kinds of oracle live here:
//!
//! - Term-wise fractional operators on the basis. Each basis element is
//!   expanded into powers `(x-a)^{m+α}` and the monomial rule
//!   `D^β (x-a)^γ = Γ(γ+1)/Γ(γ+1-β) (x-a)^{γ-β}` is applied term by term. No
//!   Jacobi-image formula is involved.
//! - Closed-form minimizers of the built-in Leitmann problems, written as sums
//!   of generalized power series in `t = x - a`. Values use the standard
//!   closed forms (Mittag–Leffler functions where they appear), while the
//!   boundary and optimal-value checks operate on the series term by term.

use thiserror::Error;

use crate::fracbasis::BasisSpec;
use crate::problem::{leitmann_constants, ExampleKind, ProblemError};
use crate::quadrature::{map_to_interval, QuadratureError, QuadratureRule};
use crate::specfun::{
    factorial, gamma, gamma_ratio, mittag_leffler, pochhammer, rgamma, SpecfunError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("monomial expansion limited to degree 12, got {0}")]
    Degree(usize),
    #[error("point {x} outside ({a}, {b}]")]
    Domain { x: f64, a: f64, b: f64 },
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub const MAX_ORACLE_DEGREE: usize = 12;

/// `(coefficient, exponent)` pairs with `φ_k(x) = Σ coef (x-a)^exp`.
fn monomial_expansion(spec: &BasisSpec, k: usize) -> Vec<(f64, f64)> {
    let alpha = spec.alpha;
    let width = spec.b - spec.a;
    (0..=k)
        .map(|m| {
            let sign = if (k - m).is_multiple_of(2) { 1.0 } else { -1.0 };
            let c = sign * pochhammer(1.0 + alpha, k + m)
                / (factorial(m) * factorial(k - m) * pochhammer(1.0 + alpha, m))
                / width.powi(m as i32);
            (c, m as f64 + alpha)
        })
        .collect()
}

fn termwise(spec: &BasisSpec, k: usize, x: f64, shift: f64) -> Result<f64, OracleError> {
    if k > MAX_ORACLE_DEGREE {
        return Err(OracleError::Degree(k));
    }
    if !(x > spec.a && x <= spec.b) {
        return Err(OracleError::Domain {
            x,
            a: spec.a,
            b: spec.b,
        });
    }
    let s = x - spec.a;
    monomial_expansion(spec, k)
        .into_iter()
        .map(|(c, e)| Ok(c * gamma_ratio(e + 1.0, e + 1.0 + shift)? * s.powf(e + shift)))
        .sum()
}

/// `D^β φ_k(x)` by the monomial rule applied to the power expansion of `φ_k`.
pub fn termwise_frac_deriv_oracle(
    spec: &BasisSpec,
    k: usize,
    x: f64,
    beta: f64,
) -> Result<f64, OracleError> {
    termwise(spec, k, x, -beta)
}

/// `I^β φ_k(x)` by the monomial rule applied to the power expansion of `φ_k`.
pub fn termwise_frac_integral_oracle(
    spec: &BasisSpec,
    k: usize,
    x: f64,
    beta: f64,
) -> Result<f64, OracleError> {
    termwise(spec, k, x, beta)
}

const SERIES_CAP: usize = 500;
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

/// One printed piece of a closed-form minimizer, in `t = x - a`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    /// `coef · t^exp`.
    Power { coef: f64, exp: f64 },
    /// `coef · t^shift · E_{a,b}(scale · t^step)`.
    MittagLeffler {
        coef: f64,
        shift: f64,
        a: f64,
        b: f64,
        scale: f64,
        step: f64,
    },
    /// `coef · Σ_k w_k t^{e0 + step k}` with a named weight sequence.
    Series {
        coef: f64,
        e0: f64,
        step: f64,
        weight: Weight,
    },
}

/// Weight sequences of the bespoke sums.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Weight {
    /// `(k+1) ν^{k+α} / Γ(k+α+1)`.
    LinearExp { alpha: f64, nu: f64 },
    /// `(2k+2)(-1)^k / Γ(2k+α+2)`.
    OddSine { alpha: f64 },
    /// `Γ(k+p+1)(-1)^k ν^k / (Γ(k+p+α) k!)`.
    ShiftedExp { alpha: f64, p: f64, nu: f64 },
}

impl Weight {
    fn at(&self, k: usize) -> Result<f64, SpecfunError> {
        let kf = k as f64;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(match *self {
            Self::LinearExp { alpha, nu } => {
                (kf + 1.0) * nu.powf(kf + alpha) * rgamma(kf + alpha + 1.0)
            }
            Self::OddSine { alpha } => (2.0 * kf + 2.0) * sign * rgamma(2.0 * kf + alpha + 2.0),
            Self::ShiftedExp { alpha, p, nu } => {
                sign * nu.powi(k as i32)
                    * gamma_ratio(kf + p + 1.0, kf + p + alpha)?
                    * rgamma(kf + 1.0)
            }
        })
    }
}

impl Piece {
    /// `k`-th power-series term `(weight, exponent)`; `None` once exhausted.
    fn term(&self, k: usize) -> Result<Option<(f64, f64)>, SpecfunError> {
        Ok(match *self {
            Self::Power { coef, exp } => (k == 0).then_some((coef, exp)),
            Self::MittagLeffler {
                coef,
                shift,
                a,
                b,
                scale,
                step,
            } => {
                let kf = k as f64;
                let w = if scale == 0.0 {
                    if k == 0 {
                        rgamma(b)
                    } else {
                        0.0
                    }
                } else {
                    scale.powi(k as i32) * rgamma(a * kf + b)
                };
                Some((coef * w, shift + step * kf))
            }
            Self::Series {
                coef,
                e0,
                step,
                weight,
            } => Some((coef * weight.at(k)?, e0 + step * k as f64)),
        })
    }

    fn is_finite_sum(&self) -> bool {
        matches!(self, Self::Power { .. })
    }
}

/// `Σ_k Γ(e_k+1)/Γ(e_k+1+shift) w_k t^{e_k+shift}`, i.e. `I^{shift}` (or
/// `D^{-shift}` for negative shifts) applied term by term.
fn apply_termwise(piece: &Piece, t: f64, shift: f64, tol: f64) -> Result<f64, OracleError> {
    let mut sum = 0.0;
    let mut small = 0;
    for k in 0..SERIES_CAP {
        let Some((w, e)) = piece.term(k)? else {
            return Ok(sum);
        };
        let term = if w == 0.0 {
            0.0
        } else {
            w * gamma_ratio(e + 1.0, e + 1.0 + shift)? * t.powf(e + shift)
        };
        sum += term;
        if piece.is_finite_sum() {
            continue;
        }
        if term.abs() <= tol * sum.abs() || term == 0.0 {
            small += 1;
            if small >= 2 && k >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(OracleError::NonConvergence(SERIES_CAP))
}

fn eval_piece(piece: &Piece, t: f64, tol: f64) -> Result<f64, OracleError> {
    match *piece {
        Piece::Power { coef, exp } => Ok(coef * t.powf(exp)),
        Piece::MittagLeffler {
            coef,
            shift,
            a,
            b,
            scale,
            step,
        } => Ok(coef * t.powf(shift) * mittag_leffler(a, b, scale * t.powf(step))?),
        Piece::Series { .. } => apply_termwise(piece, t, 0.0, tol),
    }
}

/// A built-in problem together with its closed-form minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub kind: ExampleKind,
    pub series_tol: f64,
}

impl ExactSolution {
    pub fn new(kind: ExampleKind) -> Self {
        Self {
            kind,
            series_tol: DEFAULT_SERIES_TOL,
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        use Piece::*;
        let g = |x: f64| gamma(x).unwrap_or(f64::NAN);
        match self.kind {
            ExampleKind::Ex1 { alpha, p, epsilon } => {
                let a = 0.5 * (1.0 + epsilon) - 1.0;
                vec![
                    Power {
                        coef: a * g(p + 2.0) / g(p + alpha + 1.0),
                        exp: p + alpha,
                    },
                    Power {
                        coef: a / g(alpha + 1.0),
                        exp: alpha,
                    },
                    Power {
                        coef: g(p + 1.0) / g(alpha + p),
                        exp: p + alpha - 1.0,
                    },
                ]
            }
            ExampleKind::Ex2 { alpha, nu, epsilon } => {
                let a = (-nu).exp() * (1.0 + epsilon) - 1.0;
                vec![
                    Series {
                        coef: a * nu.powf(-alpha),
                        e0: alpha,
                        step: 1.0,
                        weight: Weight::LinearExp { alpha, nu },
                    },
                    MittagLeffler {
                        coef: 1.0,
                        shift: alpha - 1.0,
                        a: 1.0,
                        b: alpha,
                        scale: nu,
                        step: 1.0,
                    },
                    Power {
                        coef: -1.0 / g(alpha),
                        exp: alpha - 1.0,
                    },
                ]
            }
            ExampleKind::Ex3 { alpha, epsilon } => {
                let a = (epsilon + 1.0) / (1.0 + 1f64.sin()) - 1.0;
                vec![
                    Series {
                        coef: a,
                        e0: alpha + 1.0,
                        step: 2.0,
                        weight: Weight::OddSine { alpha },
                    },
                    Power {
                        coef: a / g(1.0 + alpha),
                        exp: alpha,
                    },
                    MittagLeffler {
                        coef: 1.0,
                        shift: alpha,
                        a: 2.0,
                        b: alpha + 1.0,
                        scale: -1.0,
                        step: 2.0,
                    },
                ]
            }
            ExampleKind::Ex4 {
                alpha,
                p,
                nu,
                epsilon,
            } => {
                let a = 0.5 * epsilon + (-nu).exp() - 1.0;
                vec![
                    Power {
                        coef: a * g(p + 2.0) / g(p + alpha + 1.0),
                        exp: p + alpha,
                    },
                    Power {
                        coef: a / g(alpha + 1.0),
                        exp: alpha,
                    },
                    Power {
                        coef: 1.0 / g(alpha),
                        exp: alpha - 1.0,
                    },
                    Power {
                        coef: g(p + 1.0) / g(alpha + p),
                        exp: p + alpha - 1.0,
                    },
                    MittagLeffler {
                        coef: -1.0,
                        shift: alpha - 1.0,
                        a: 1.0,
                        b: alpha,
                        scale: -nu,
                        step: 1.0,
                    },
                    Series {
                        coef: -1.0,
                        e0: p + alpha - 1.0,
                        step: 1.0,
                        weight: Weight::ShiftedExp { alpha, p, nu },
                    },
                ]
            }
            ExampleKind::Ex5 { alpha, epsilon } => {
                let a = epsilon / (1.0 + 1f64.sin()) + 1f64.cos() - 1.0;
                let ml = |coef: f64, shift: f64, b: f64, scale: f64| MittagLeffler {
                    coef,
                    shift,
                    a: 2.0,
                    b,
                    scale,
                    step: 2.0,
                };
                vec![
                    Series {
                        coef: a,
                        e0: alpha + 1.0,
                        step: 2.0,
                        weight: Weight::OddSine { alpha },
                    },
                    Power {
                        coef: a / g(1.0 + alpha),
                        exp: alpha,
                    },
                    Power {
                        coef: 1.0 / g(alpha),
                        exp: alpha - 1.0,
                    },
                    ml(1.0, alpha, 1.0 + alpha, -1.0),
                    ml(-1.0, alpha, 1.0 + alpha, -4.0),
                    ml(-1.0, alpha - 1.0, alpha, -1.0),
                ]
            }
            ExampleKind::Remark3 {
                alpha,
                a,
                b,
                epsilon,
            } => vec![Power {
                coef: epsilon / ((b - a) * g(1.0 + alpha)),
                exp: alpha,
            }],
        }
    }

    fn check_point(&self, x: f64) -> Result<f64, OracleError> {
        let (a, b) = self.kind.interval();
        if !(x > a && x <= b) {
            return Err(OracleError::Domain { x, a, b });
        }
        Ok(x - a)
    }

    /// `y_exact(x)` for `x ∈ (a, b]`.
    pub fn eval(&self, x: f64) -> Result<f64, OracleError> {
        let t = self.check_point(x)?;
        self.pieces()
            .iter()
            .map(|p| eval_piece(p, t, self.series_tol))
            .sum()
    }

    /// `D^α y_exact(x)`, term by term on the series.
    pub fn frac_deriv(&self, x: f64) -> Result<f64, OracleError> {
        let t = self.check_point(x)?;
        let alpha = self.kind.alpha();
        self.pieces()
            .iter()
            .map(|p| apply_termwise(p, t, -alpha, self.series_tol))
            .sum()
    }

    /// `I^{1-α} y_exact(x)`, term by term on the series.
    pub fn frac_integral(&self, x: f64) -> Result<f64, OracleError> {
        let t = self.check_point(x)?;
        let order = 1.0 - self.kind.alpha();
        self.pieces()
            .iter()
            .map(|p| apply_termwise(p, t, order, self.series_tol))
            .sum()
    }
}

pub fn exact_eval(sol: &ExactSolution, x: f64) -> Result<f64, OracleError> {
    sol.eval(x)
}

/// `|I^{1-α} y_exact(b) - ε|`.
pub fn exact_boundary_check(sol: &ExactSolution) -> Result<f64, OracleError> {
    let (_, b) = sol.kind.interval();
    Ok((sol.frac_integral(b)? - sol.kind.epsilon()).abs())
}

/// `|J[y_exact] - A²(b-a)|`, with `D^α y` and `I^{1-α} y` taken term by term
/// from the closed form.
pub fn verify_exact(sol: &ExactSolution, rule: &QuadratureRule) -> Result<f64, OracleError> {
    let fam = sol.kind.family()?;
    let (a, b) = sol.kind.interval();
    let rule = if rule.interval() == (a, b) {
        rule.clone()
    } else {
        map_to_interval(rule, a, b)?
    };
    let mut j = 0.0;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let r = (fam.g)(x) * sol.frac_deriv(x)? + (fam.gp)(x) * sol.frac_integral(x)? + (fam.hp)(x);
        j += w * r * r;
    }
    let k = leitmann_constants(&fam);
    Ok((j - k.a_const * k.a_const * (b - a)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre_on;
    use crate::specfun::{jacobi_eval, JacobiIndex};

    #[test]
    fn deriv_oracle_examples() {
        let s = BasisSpec::new(0.5, 0.0, 1.0, 3).unwrap();
        let v = termwise_frac_deriv_oracle(&s, 0, 0.3, 0.5).unwrap();
        assert!((v - gamma(1.5).unwrap()).abs() < 1e-15);

        // k = 1, β = α: Γ(α+2) P_1^{(α,0)}(2x-1).
        let alpha = 0.5;
        for x in [0.05, 0.2, 0.37, 0.5, 0.66, 0.81, 0.93, 1.0] {
            let o = termwise_frac_deriv_oracle(&s, 1, x, alpha).unwrap();
            let p = jacobi_eval(JacobiIndex::new(alpha, 0.0, 1).unwrap(), 2.0 * x - 1.0).unwrap();
            let expect = gamma(alpha + 2.0).unwrap() * p;
            assert!((o - expect).abs() <= 1e-10 * expect.abs().max(1.0));
        }
        let at_b = termwise_frac_deriv_oracle(&s, 3, 1.0, 0.5).unwrap();
        assert!(at_b.is_finite());
        assert!(matches!(
            termwise_frac_deriv_oracle(&s, 13, 0.5, 0.5),
            Err(OracleError::Degree(13))
        ));
        assert!(termwise_frac_deriv_oracle(&s, 1, 0.0, 0.5).is_err());
    }

    fn remark3(epsilon: f64) -> ExactSolution {
        ExactSolution::new(ExampleKind::Remark3 {
            alpha: 0.5,
            a: 0.0,
            b: 1.0,
            epsilon,
        })
    }

    #[test]
    fn remark3_closed_form() {
        let v = exact_eval(&remark3(1.0), 1.0).unwrap();
        assert!((v - 1.0 / gamma(1.5).unwrap()).abs() < 1e-15);
        assert_eq!(exact_eval(&remark3(0.0), 0.4).unwrap(), 0.0);
        assert!(exact_boundary_check(&remark3(1.0)).unwrap() <= 1e-12);
        assert!(exact_eval(&remark3(1.0), 0.0).is_err());
    }

    #[test]
    fn linear_exp_series_matches_mittag_leffler_form() {
        // (k+1)/Γ(k+α+1) = 1/Γ(k+α) + (1-α)/Γ(k+α+1), so the sum equals
        // z^α [E_{1,α}(z) + (1-α) E_{1,α+1}(z)] with z = νx.
        let (alpha, nu) = (0.5, 1.0);
        let piece = Piece::Series {
            coef: 1.0,
            e0: alpha,
            step: 1.0,
            weight: Weight::LinearExp { alpha, nu },
        };
        for i in 1..=20 {
            let x = i as f64 / 20.0;
            let series = eval_piece(&piece, x, 1e-15).unwrap();
            let z = nu * x;
            let ml = z.powf(alpha)
                * (mittag_leffler(1.0, alpha, z).unwrap()
                    + (1.0 - alpha) * mittag_leffler(1.0, alpha + 1.0, z).unwrap());
            assert!(
                (series - ml).abs() <= 1e-12 * ml.abs(),
                "x = {x}: {series} vs {ml}"
            );
        }
    }

    #[test]
    fn ex1_boundary_and_objective() {
        let sol = ExactSolution::new(ExampleKind::figure("ex1").unwrap());
        assert!(exact_boundary_check(&sol).unwrap() <= 1e-12);
        let rule = gauss_legendre_on(40, 0.0, 1.0).unwrap();
        assert!(verify_exact(&sol, &rule).unwrap() <= 1e-7);
        assert!(sol.eval(0.5).unwrap().is_finite());
    }

    #[test]
    fn figure_solutions_self_verify() {
        let rule = gauss_legendre_on(40, 0.0, 1.0).unwrap();
        for kind in ExampleKind::all_figures() {
            let sol = ExactSolution::new(kind);
            let bc = exact_boundary_check(&sol).unwrap();
            let vj = verify_exact(&sol, &rule).unwrap();
            assert!(bc <= 1e-7, "{}: boundary deviation {bc:e}", kind.name());
            assert!(vj <= 1e-6, "{}: objective deviation {vj:e}", kind.name());
        }
    }
}
