//! WebAssembly bindings for the static demo page in `static/`.
//!
//! Every export returns a JSON string; the `*_json` functions are the native
//! equivalents used by the tests.

use fracvar::fracbasis::{
    basis_element, eval_frac_deriv, eval_frac_integral, BasisSpec, CoefficientVector,
};
use fracvar::oracle::ExactSolution;
use fracvar::problem::{leitmann_optimum, ExampleKind};
use fracvar::{solve_problem, PathChoice};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_DEGREE: usize = 20;
pub const MAX_GRID: usize = 2000;

/// Figure parameters of `name` with `alpha` and `epsilon` replaced.
pub fn example(name: &str, alpha: f64, epsilon: f64) -> Result<ExampleKind, String> {
    let base = ExampleKind::figure(name).ok_or_else(|| format!("unknown example `{name}`"))?;
    Ok(match base {
        ExampleKind::Ex1 { p, .. } => ExampleKind::Ex1 { alpha, p, epsilon },
        ExampleKind::Ex2 { nu, .. } => ExampleKind::Ex2 { alpha, nu, epsilon },
        ExampleKind::Ex3 { .. } => ExampleKind::Ex3 { alpha, epsilon },
        ExampleKind::Ex4 { p, nu, .. } => ExampleKind::Ex4 {
            alpha,
            p,
            nu,
            epsilon,
        },
        ExampleKind::Ex5 { .. } => ExampleKind::Ex5 { alpha, epsilon },
        ExampleKind::Remark3 { a, b, .. } => ExampleKind::Remark3 {
            alpha,
            a,
            b,
            epsilon,
        },
    })
}

fn check_sizes(n: usize, grid: usize) -> Result<(), String> {
    if n > MAX_DEGREE {
        return Err(format!("degree {n} exceeds {MAX_DEGREE}"));
    }
    if grid == 0 || grid > MAX_GRID {
        return Err(format!("grid must lie in 1..={MAX_GRID}"));
    }
    Ok(())
}

fn grid_points(a: f64, b: f64, grid: usize) -> Vec<f64> {
    (1..=grid)
        .map(|j| {
            if j == grid {
                b
            } else {
                a + j as f64 * (b - a) / grid as f64
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SolveCurves {
    pub x: Vec<f64>,
    pub y_n: Vec<f64>,
    pub y_exact: Vec<f64>,
    pub error: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub objective: f64,
    pub target: f64,
    pub max_error: f64,
}

pub fn solve_curves(
    name: &str,
    alpha: f64,
    epsilon: f64,
    n: usize,
    grid: usize,
) -> Result<SolveCurves, String> {
    check_sizes(n, grid)?;
    let kind = example(name, alpha, epsilon)?;
    let family = kind.family().map_err(|e| e.to_string())?;
    let spec = kind.problem().map_err(|e| e.to_string())?;
    let sol = solve_problem(&spec, n, PathChoice::Auto).map_err(|e| e.to_string())?;
    let exact = ExactSolution::new(kind);
    let (a, b) = kind.interval();
    let x = grid_points(a, b, grid);
    let mut out = SolveCurves {
        y_n: Vec::with_capacity(grid),
        y_exact: Vec::with_capacity(grid),
        error: Vec::with_capacity(grid),
        coefficients: sol.report.coefficients.0.clone(),
        objective: sol.report.objective_value,
        target: leitmann_optimum(&family),
        max_error: 0.0,
        x: Vec::new(),
    };
    for &xj in &x {
        let y = sol.eval(xj).map_err(|e| e.to_string())?;
        let ye = exact.eval(xj).map_err(|e| e.to_string())?;
        out.y_n.push(y);
        out.y_exact.push(ye);
        out.error.push(y - ye);
        out.max_error = out.max_error.max((y - ye).abs());
    }
    out.x = x;
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct BasisCurves {
    pub x: Vec<f64>,
    /// `phi[k][j]`, `deriv[k][j]`, `integral[k][j]` for `k = 0..=degree`.
    pub phi: Vec<Vec<f64>>,
    pub deriv: Vec<Vec<f64>>,
    pub integral: Vec<Vec<f64>>,
}

/// Basis functions on `[0, 1]` with their order-`beta` derivative and
/// integral images.
pub fn basis_curves(
    alpha: f64,
    beta: f64,
    degree: usize,
    grid: usize,
) -> Result<BasisCurves, String> {
    check_sizes(degree, grid)?;
    let spec = BasisSpec::new(alpha, 0.0, 1.0, degree).map_err(|e| e.to_string())?;
    let x = grid_points(0.0, 1.0, grid);
    let mut out = BasisCurves {
        x: Vec::new(),
        phi: Vec::new(),
        deriv: Vec::new(),
        integral: Vec::new(),
    };
    for k in 0..=degree {
        let mut c = CoefficientVector::zeros(spec.len());
        c.0[k] = 1.0;
        let mut phi = Vec::with_capacity(grid);
        let mut deriv = Vec::with_capacity(grid);
        let mut integral = Vec::with_capacity(grid);
        for &xj in &x {
            phi.push(basis_element(&spec, k, xj).map_err(|e| e.to_string())?);
            deriv.push(eval_frac_deriv(&spec, &c, xj, beta).map_err(|e| e.to_string())?);
            integral.push(eval_frac_integral(&spec, &c, xj, beta).map_err(|e| e.to_string())?);
        }
        out.phi.push(phi);
        out.deriv.push(deriv);
        out.integral.push(integral);
    }
    out.x = x;
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub max_error: f64,
    pub objective: f64,
    pub gap: f64,
}

pub fn convergence_rows(
    name: &str,
    alpha: f64,
    epsilon: f64,
    max_n: usize,
) -> Result<Vec<ConvergenceRow>, String> {
    (0..=max_n)
        .map(|n| {
            let s = solve_curves(name, alpha, epsilon, n, 200)?;
            Ok(ConvergenceRow {
                n,
                max_error: s.max_error,
                objective: s.objective,
                gap: s.objective - s.target,
            })
        })
        .collect()
}

fn to_json<T: Serialize>(v: Result<T, String>) -> Result<String, String> {
    v.map(|v| serde_json::to_string(&v).expect("serializable"))
}

pub fn solve_json(
    name: &str,
    alpha: f64,
    epsilon: f64,
    n: usize,
    grid: usize,
) -> Result<String, String> {
    to_json(solve_curves(name, alpha, epsilon, n, grid))
}

pub fn basis_json(alpha: f64, beta: f64, degree: usize, grid: usize) -> Result<String, String> {
    to_json(basis_curves(alpha, beta, degree, grid))
}

pub fn convergence_json(
    name: &str,
    alpha: f64,
    epsilon: f64,
    max_n: usize,
) -> Result<String, String> {
    to_json(convergence_rows(name, alpha, epsilon, max_n))
}

/// Solves a built-in example; JSON with `x`, `y_n`, `y_exact`, `error`.
#[wasm_bindgen(js_name = solveExample)]
pub fn solve_example(
    name: &str,
    alpha: f64,
    epsilon: f64,
    n: usize,
    grid: usize,
) -> Result<String, JsError> {
    solve_json(name, alpha, epsilon, n, grid).map_err(|e| JsError::new(&e))
}

/// Basis functions and their fractional images on `[0, 1]`.
#[wasm_bindgen(js_name = basisImages)]
pub fn basis_images(alpha: f64, beta: f64, degree: usize, grid: usize) -> Result<String, JsError> {
    basis_json(alpha, beta, degree, grid).map_err(|e| JsError::new(&e))
}

/// Max error and objective gap for `n = 0..=max_n`.
#[wasm_bindgen(js_name = convergenceTable)]
pub fn convergence_table(
    name: &str,
    alpha: f64,
    epsilon: f64,
    max_n: usize,
) -> Result<String, JsError> {
    convergence_json(name, alpha, epsilon, max_n).map_err(|e| JsError::new(&e))
}
