//! Direct-method solver for Riemann–Liouville fractional variational problems.
//!
//! The unknown trajectory is expanded in the fractional Jacobi basis
//! `(x-a)^α P_i^{(0,α)}(2(x-a)/(b-a) - 1)`, whose Riemann–Liouville derivative
//! and integral images are again (scaled) Jacobi polynomials. The functional is
//! then approximated by Gauss–Legendre quadrature and minimized over the
//! coefficients subject to the single linear boundary constraint.
//!
//! Module map:
//!
//! - [`specfun`]: gamma, Pochhammer, Jacobi polynomials, Mittag–Leffler.
//! - [`quadrature`]: Gauss–Legendre rules on arbitrary intervals.
//! - [`fracbasis`]: the basis and its exact fractional images.
//! - [`problem`]: problem definitions, the Leitmann family, objective assembly.
//! - [`optimizer`]: constrained least squares and quasi-Newton paths.
//! - [`oracle`]: independent term-wise operators and closed-form minimizers.
//! - [`solver`]: one-call driver tying the pieces together.
//! - [`suite`]: identity/verification suites shared by the CLI and tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < y)` guards also reject NaN.

pub mod fracbasis;
pub mod optimizer;
pub mod oracle;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod suite;

mod error;

pub use error::Error;
pub use fracbasis::{BasisSpec, CoefficientVector};
pub use optimizer::{SolvePath, SolveReport};
pub use oracle::ExactSolution;
pub use problem::{ExampleKind, LeitmannConstants, LeitmannFamily, ProblemSpec};
pub use quadrature::QuadratureRule;
pub use solver::{solve_problem, PathChoice, Solution};
