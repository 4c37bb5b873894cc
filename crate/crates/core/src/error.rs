use thiserror::Error;

use crate::fracbasis::BasisError;
use crate::optimizer::SolveError;
use crate::oracle::OracleError;
use crate::problem::ProblemError;
use crate::quadrature::QuadratureError;
use crate::specfun::SpecfunError;

/// Any failure surfaced by the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
