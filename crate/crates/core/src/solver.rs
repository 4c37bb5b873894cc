//! One-call driver: basis, quadrature, objective, constraint, solve.

use std::time::Duration;

use crate::fracbasis::{eval_y, BasisError, BasisSpec};
use crate::optimizer::{solve_lls, solve_qn, QnOptions, SolveReport};
use crate::problem::{affine_residuals, assemble_objective, constraint, ProblemError, ProblemSpec};
use crate::quadrature::gauss_legendre_on;
use crate::Error;

/// Which optimizer to use. `Auto` picks least squares for Leitmann problems
/// and quasi-Newton otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathChoice {
    #[default]
    Auto,
    LeastSquares,
    QuasiNewton,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub basis: BasisSpec,
    pub report: SolveReport,
    pub elapsed: Duration,
}

impl Solution {
    /// `y_n(x)` for the solved coefficients.
    pub fn eval(&self, x: f64) -> Result<f64, BasisError> {
        eval_y(&self.basis, &self.report.coefficients, x)
    }
}

// No clock on bare wasm32; solves there report zero elapsed time.
#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
fn stopwatch() -> impl FnOnce() -> Duration {
    let start = std::time::Instant::now();
    move || start.elapsed()
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
fn stopwatch() -> impl FnOnce() -> Duration {
    || Duration::ZERO
}

pub fn solve_problem(spec: &ProblemSpec, n: usize, path: PathChoice) -> Result<Solution, Error> {
    let elapsed = stopwatch();
    let basis = BasisSpec::new(spec.alpha, spec.a, spec.b, n)?;
    let rule = gauss_legendre_on(spec.quad_count, spec.a, spec.b)?;
    let cons = constraint(spec, &basis)?;
    let use_lls = match path {
        PathChoice::Auto => spec.leitmann().is_some(),
        PathChoice::LeastSquares => true,
        PathChoice::QuasiNewton => false,
    };
    let report = if use_lls {
        let res = affine_residuals(spec, &basis, &rule)?.ok_or_else(|| {
            ProblemError::Invalid("least-squares path needs a Leitmann-family problem".into())
        })?;
        solve_lls(&res, &cons)?
    } else {
        let objective = assemble_objective(spec, &basis, &rule)?;
        let f = |c: &[f64]| objective.eval(c);
        solve_qn(&f, &cons, None, QnOptions::default())?
    };
    Ok(Solution {
        basis,
        report,
        elapsed: elapsed(),
    })
}
