//! Identity and self-verification suites.
//!
//! Each suite sweeps a fixed grid, records the worst deviation and compares it
//! with its tolerance. The CLI `verify` command prints these as a table.

use crate::fracbasis::{
    boundary_row, eval_frac_deriv, eval_frac_integral, BasisSpec, CoefficientVector,
};
use crate::oracle::{
    exact_boundary_check, termwise_frac_deriv_oracle, termwise_frac_integral_oracle, verify_exact,
    ExactSolution,
};
use crate::problem::ExampleKind;
use crate::quadrature::gauss_legendre_on;
use crate::specfun::{jacobi_eval, jacobi_eval_explicit, JacobiIndex};
use crate::Error;

pub const IMAGE_ALPHAS: [f64; 4] = [0.3, 0.5, 0.75, 1.0];
pub const IMAGE_BETAS: [f64; 4] = [0.1, 0.25, 0.5, 0.9];
pub const IMAGE_MAX_DEGREE: usize = 8;
pub const IMAGE_POINTS: usize = 50;
pub const IMAGE_INTERVALS: [(f64, f64); 2] = [(0.0, 1.0), (1.0, 3.0)];
pub const IMAGE_TOL: f64 = 1e-9;
pub const JACOBI_TOL: f64 = 1e-9;
pub const QUAD_TOL: f64 = 1e-13;
pub const BOUNDARY_ROW_TOL: f64 = 1e-11;
pub const EXACT_BOUNDARY_TOL: f64 = 1e-7;
pub const EXACT_OBJECTIVE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tol: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }
}

/// Debug knobs for sensitivity checks of the suites themselves.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteOptions {
    /// Relative perturbation applied to the Γ-ratio of the derivative images.
    pub perturb_gamma_ratio: f64,
}

/// Deviation measure shared by the identity suites: `|u - v| / max(1, |v|)`.
pub fn scaled_deviation(u: f64, v: f64) -> f64 {
    (u - v).abs() / v.abs().max(1.0)
}

/// Interior points `a + 0.01(b-a) + j·0.99(b-a)/(count-1)`, ending at `b`.
fn sweep_points(a: f64, b: f64, count: usize) -> impl Iterator<Item = f64> {
    let lo = a + 0.01 * (b - a);
    (0..count).map(move |j| {
        if j + 1 == count {
            b
        } else {
            lo + (b - lo) * j as f64 / (count - 1) as f64
        }
    })
}

fn unit(len: usize, k: usize) -> CoefficientVector {
    let mut c = CoefficientVector::zeros(len);
    c.0[k] = 1.0;
    c
}

/// Jacobi-image derivative formula against the term-wise monomial oracle.
pub fn frac_deriv_identity(opts: SuiteOptions) -> Result<SuiteResult, Error> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &(a, b) in &IMAGE_INTERVALS {
        for &alpha in &IMAGE_ALPHAS {
            let spec = BasisSpec::new(alpha, a, b, IMAGE_MAX_DEGREE)?;
            for &beta in &IMAGE_BETAS {
                for k in 0..=IMAGE_MAX_DEGREE {
                    let c = unit(spec.len(), k);
                    for x in sweep_points(a, b, IMAGE_POINTS) {
                        let image =
                            eval_frac_deriv(&spec, &c, x, beta)? * (1.0 + opts.perturb_gamma_ratio);
                        let oracle = termwise_frac_deriv_oracle(&spec, k, x, beta)?;
                        worst = worst.max(scaled_deviation(image, oracle));
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "fractional derivative images vs monomial oracle".into(),
        cases,
        worst,
        tol: IMAGE_TOL,
    })
}

/// Jacobi-image integral formula against the term-wise monomial oracle.
pub fn frac_integral_identity() -> Result<SuiteResult, Error> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &(a, b) in &IMAGE_INTERVALS {
        for &alpha in &IMAGE_ALPHAS {
            let spec = BasisSpec::new(alpha, a, b, IMAGE_MAX_DEGREE)?;
            for &beta in &IMAGE_BETAS {
                for k in 0..=IMAGE_MAX_DEGREE {
                    let c = unit(spec.len(), k);
                    for x in sweep_points(a, b, IMAGE_POINTS) {
                        let image = eval_frac_integral(&spec, &c, x, beta)?;
                        let oracle = termwise_frac_integral_oracle(&spec, k, x, beta)?;
                        worst = worst.max(scaled_deviation(image, oracle));
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "fractional integral images vs monomial oracle".into(),
        cases,
        worst,
        tol: IMAGE_TOL,
    })
}

/// Three-term recurrence against the explicit alternating sum, 200
/// pseudo-random `t` per index pair and degree.
pub fn jacobi_identity() -> Result<SuiteResult, Error> {
    let indices = [-0.9, -0.5, 0.0, 0.3, 1.0, 2.5, 3.0];
    let mut seed = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &p in &indices {
        for &q in &indices {
            for n in 0..=15 {
                let idx = JacobiIndex::new(p, q, n)?;
                for _ in 0..200 {
                    let t = next();
                    let r = jacobi_eval(idx, t)?;
                    let e = jacobi_eval_explicit(idx, t);
                    worst = worst.max(scaled_deviation(r, e));
                    cases += 1;
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "Jacobi recurrence vs explicit sum".into(),
        cases,
        worst,
        tol: JACOBI_TOL,
    })
}

/// Mapped Gauss–Legendre rules on `[0, 1]` against `∫ x^m = 1/(m+1)`.
pub fn quadrature_exactness() -> Result<SuiteResult, Error> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for count in [2, 4, 8, 16, 32] {
        let rule = gauss_legendre_on(count, 0.0, 1.0)?;
        for m in 0..2 * count {
            let q = rule.integrate(|x| x.powi(m as i32));
            worst = worst.max((q - 1.0 / (m as f64 + 1.0)).abs());
            cases += 1;
        }
    }
    Ok(SuiteResult {
        name: "Gauss-Legendre monomial exactness".into(),
        cases,
        worst,
        tol: QUAD_TOL,
    })
}

/// Boundary row against the integral image evaluated at `b`, for random
/// coefficient vectors.
pub fn boundary_row_identity() -> Result<SuiteResult, Error> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for &(a, b) in &IMAGE_INTERVALS {
        for &alpha in &[0.1, 0.3, 0.5, 0.75, 0.95] {
            let spec = BasisSpec::new(alpha, a, b, 10)?;
            let row = boundary_row(&spec);
            for _ in 0..20 {
                let c = CoefficientVector((0..spec.len()).map(|_| next()).collect());
                let dot: f64 = row.iter().zip(c.as_slice()).map(|(r, x)| r * x).sum();
                let image = eval_frac_integral(&spec, &c, b, 1.0 - alpha)?;
                worst = worst.max((dot - image).abs() / image.abs().max(f64::MIN_POSITIVE));
                cases += 1;
            }
        }
    }
    Ok(SuiteResult {
        name: "boundary row vs integral image at b".into(),
        cases,
        worst,
        tol: BOUNDARY_ROW_TOL,
    })
}

/// `I^{1-α} y_exact(b) = ε` for every built-in minimizer.
pub fn exact_boundary_suite() -> Result<Vec<SuiteResult>, Error> {
    ExampleKind::all_figures()
        .into_iter()
        .map(|kind| {
            let worst = exact_boundary_check(&ExactSolution::new(kind))?;
            Ok(SuiteResult {
                name: format!("{} closed form: boundary condition", kind.name()),
                cases: 1,
                worst,
                tol: EXACT_BOUNDARY_TOL,
            })
        })
        .collect()
}

/// `J[y_exact] = A²(b-a)` for every built-in minimizer.
pub fn exact_objective_suite(quad_count: usize) -> Result<Vec<SuiteResult>, Error> {
    ExampleKind::all_figures()
        .into_iter()
        .map(|kind| {
            let (a, b) = kind.interval();
            let rule = gauss_legendre_on(quad_count, a, b)?;
            let worst = verify_exact(&ExactSolution::new(kind), &rule)?;
            Ok(SuiteResult {
                name: format!("{} closed form: optimal value A^2(b-a)", kind.name()),
                cases: 1,
                worst,
                tol: EXACT_OBJECTIVE_TOL,
            })
        })
        .collect()
}

pub fn run_all(opts: SuiteOptions) -> Result<Vec<SuiteResult>, Error> {
    let mut out = vec![
        jacobi_identity()?,
        quadrature_exactness()?,
        frac_deriv_identity(opts)?,
        frac_integral_identity()?,
        boundary_row_identity()?,
    ];
    out.extend(exact_boundary_suite()?);
    out.extend(exact_objective_suite(crate::problem::DEFAULT_QUAD_COUNT)?);
    Ok(out)
}
