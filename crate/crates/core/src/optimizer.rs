//! Minimization over the coefficients subject to one linear equality.
//!
//! Two paths:
//!
//! - [`solve_lls`] for objectives that are sums of squared affine residuals
//!   (every Leitmann problem). One coefficient is eliminated through the
//!   constraint and the reduced normal equations are solved directly.
//! - [`solve_qn`] for general integrands: BFGS with central finite-difference
//!   gradients on an orthonormal null-space parameterization of the feasible
//!   set.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::fracbasis::CoefficientVector;
use crate::problem::{AffineResiduals, Constraint, ProblemError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("constraint row is zero")]
    ZeroConstraint,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("reduced normal matrix is numerically singular (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("objective is not finite at the initial point")]
    InitialPoint,
    #[error(transparent)]
    Objective(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    LinearLeastSquares,
    QuasiNewton,
}

impl SolvePath {
    pub fn label(&self) -> &'static str {
        match self {
            Self::LinearLeastSquares => "linear-least-squares",
            Self::QuasiNewton => "quasi-newton",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub coefficients: CoefficientVector,
    pub objective_value: f64,
    pub constraint_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub path: SolvePath,
}

pub const SINGULAR_CONDITION: f64 = 1e14;

/// Index of the largest-magnitude entry; the lowest index wins ties.
fn pivot_index(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in row.iter().enumerate() {
        if v.abs() > row[best].abs() {
            best = i;
        }
    }
    best
}

/// Exact minimizer of `Σ_j ω_j (m_j·c + d_j)²` subject to `row·c = rhs`.
pub fn solve_lls(res: &AffineResiduals, cons: &Constraint) -> Result<SolveReport, SolveError> {
    let dim = res.dim;
    if cons.row.len() != dim {
        return Err(SolveError::Dimension(format!(
            "constraint has {} entries, residuals {}",
            cons.row.len(),
            dim
        )));
    }
    let p = pivot_index(&cons.row);
    let rp = cons.row[p];
    if rp == 0.0 {
        return Err(SolveError::ZeroConstraint);
    }
    let m = res.weights.len();
    // Particular point: c_p = rhs / r_p, zeros elsewhere.
    let mut c0 = vec![0.0; dim];
    c0[p] = cons.rhs / rp;
    let free: Vec<usize> = (0..dim).filter(|&i| i != p).collect();

    let mut coeffs = c0.clone();
    if !free.is_empty() {
        // Weighted reduced system B z + f, B = W^{1/2} M E.
        let mut bmat = DMatrix::<f64>::zeros(m, free.len());
        let mut fvec = DVector::<f64>::zeros(m);
        for j in 0..m {
            let sw = res.weights[j].sqrt();
            let row = res.row(j);
            for (col, &i) in free.iter().enumerate() {
                bmat[(j, col)] = sw * (row[i] - row[p] * cons.row[i] / rp);
            }
            fvec[j] = sw * (row[p] * c0[p] + res.offsets[j]);
        }
        let normal = bmat.transpose() * &bmat;
        let rhs = -(bmat.transpose() * &fvec);
        let eig = normal.clone().symmetric_eigen();
        let (lo, hi) = eig
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
                (lo.min(v), hi.max(v.abs()))
            });
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if condition > SINGULAR_CONDITION {
            return Err(SolveError::Singular { condition });
        }
        let chol = normal
            .cholesky()
            .ok_or(SolveError::Singular { condition })?;
        let z = chol.solve(&rhs);
        for (col, &i) in free.iter().enumerate() {
            coeffs[i] = z[col];
        }
        let tail: f64 = free.iter().map(|&i| cons.row[i] * coeffs[i]).sum();
        coeffs[p] = (cons.rhs - tail) / rp;
    }
    Ok(SolveReport {
        objective_value: res.objective(&coeffs),
        constraint_residual: cons.residual(&coeffs),
        coefficients: CoefficientVector(coeffs),
        iterations: 1,
        converged: true,
        path: SolvePath::LinearLeastSquares,
    })
}

/// Gradient of the reduced quadratic at a point, for optimality checks.
pub fn reduced_gradient_norm(res: &AffineResiduals, cons: &Constraint, c: &[f64]) -> f64 {
    let basis = null_space(&cons.row);
    let dim = res.dim;
    let mut grad_c = vec![0.0; dim];
    for j in 0..res.weights.len() {
        let row = res.row(j);
        let r: f64 = row.iter().zip(c).map(|(a, b)| a * b).sum::<f64>() + res.offsets[j];
        for i in 0..dim {
            grad_c[i] += 2.0 * res.weights[j] * r * row[i];
        }
    }
    basis
        .iter()
        .map(|col| {
            col.iter()
                .zip(&grad_c)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

/// Orthonormal basis of `{v : row·v = 0}` by modified Gram–Schmidt.
pub fn null_space(row: &[f64]) -> Vec<Vec<f64>> {
    let dim = row.len();
    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = vec![row.iter().map(|v| v / norm).collect()];
    let skip = pivot_index(row);
    for i in (0..dim).filter(|&i| i != skip) {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        basis.push(v);
    }
    basis.remove(0);
    basis
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QnOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    pub fd_step: f64,
}

impl Default for QnOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            grad_tol: 1e-9,
            fd_step: 1e-6,
        }
    }
}

struct Reduced<'a, F> {
    objective: &'a F,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl<F> Reduced<'_, F>
where
    F: Fn(&[f64]) -> Result<f64, ProblemError>,
{
    fn lift(&self, z: &[f64]) -> Vec<f64> {
        let mut c = self.origin.clone();
        for (col, &zk) in self.basis.iter().zip(z) {
            c.iter_mut().zip(col).for_each(|(ci, v)| *ci += zk * v);
        }
        c
    }

    fn value(&self, z: &[f64]) -> Result<f64, ProblemError> {
        (self.objective)(&self.lift(z))
    }

    fn gradient(&self, z: &[f64], step: f64) -> Result<Vec<f64>, ProblemError> {
        let mut g = vec![0.0; z.len()];
        let mut w = z.to_vec();
        for i in 0..z.len() {
            let h = step * z[i].abs().max(1.0);
            w[i] = z[i] + h;
            let fp = self.value(&w)?;
            w[i] = z[i] - h;
            let fm = self.value(&w)?;
            w[i] = z[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        Ok(g)
    }
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Trial {
    t: f64,
    f: f64,
    g: Vec<f64>,
}

const WOLFE_C1: f64 = 1e-4;
const WOLFE_C2: f64 = 0.9;

/// Strong-Wolfe line search along `d` from `z`.
fn line_search<F>(
    red: &Reduced<'_, F>,
    z: &[f64],
    d: &[f64],
    f0: f64,
    slope0: f64,
    step: f64,
) -> Option<Trial>
where
    F: Fn(&[f64]) -> Result<f64, ProblemError>,
{
    let at = |t: f64| -> Option<(f64, Vec<f64>)> {
        let w: Vec<f64> = z.iter().zip(d).map(|(a, b)| a + t * b).collect();
        let f = red.value(&w).ok().filter(|f| f.is_finite())?;
        let g = red.gradient(&w, step).ok()?;
        Some((f, g))
    };
    // Values within a few ulps of f0 count as no increase; near the optimum
    // the curvature test on the slope decides.
    let noise = 16.0 * f64::EPSILON * f0.abs();
    let mut lo = (0.0, f0, slope0);
    let mut hi: Option<(f64, f64)> = None;
    let mut t = 1.0;
    for _ in 0..60 {
        match at(t) {
            None => hi = Some((t, f64::INFINITY)),
            Some((f, g)) => {
                let slope = dotv(&g, d);
                if f > f0 + WOLFE_C1 * t * slope0 + noise || f > lo.1 + noise {
                    hi = Some((t, f));
                } else if slope.abs() <= -WOLFE_C2 * slope0 {
                    return Some(Trial { t, f, g });
                } else {
                    let flip = match hi {
                        None => slope >= 0.0,
                        Some((th, _)) => slope * (th - lo.0) >= 0.0,
                    };
                    if flip {
                        hi = Some((lo.0, lo.1));
                    }
                    lo = (t, f, slope);
                }
            }
        }
        t = match hi {
            None => 2.0 * t,
            Some((th, fh)) => {
                let (a, b) = if lo.0 < th { (lo.0, th) } else { (th, lo.0) };
                if b - a < 1e-14 * b.abs().max(1.0) {
                    break;
                }
                // Minimizer of the quadratic through (lo, f_lo, slope_lo) and
                // the bracket end, safeguarded towards bisection.
                let span = th - lo.0;
                let denom = 2.0 * (fh - lo.1 - lo.2 * span);
                let cand = if fh.is_finite() && denom > 0.0 {
                    lo.0 - lo.2 * span * span / denom
                } else {
                    f64::NAN
                };
                let margin = 0.1 * (b - a);
                if cand.is_finite() && cand > a + margin && cand < b - margin {
                    cand
                } else {
                    0.5 * (a + b)
                }
            }
        };
    }
    // Accept the best sufficient-decrease point even without curvature.
    if lo.0 > 0.0 {
        let w: Vec<f64> = z.iter().zip(d).map(|(a, b)| a + lo.0 * b).collect();
        let g = red.gradient(&w, step).ok()?;
        return Some(Trial {
            t: lo.0,
            f: lo.1,
            g,
        });
    }
    None
}

/// BFGS on the null-space parameterization `c = c_p + N z`,
/// `c_p = rhs · row / (row·row)`.
///
/// `init`, when given, is projected onto the feasible set to produce the
/// starting `z`; otherwise `z = 0` (the minimum-norm feasible point).
pub fn solve_qn<F>(
    objective: &F,
    cons: &Constraint,
    init: Option<&CoefficientVector>,
    opts: QnOptions,
) -> Result<SolveReport, SolveError>
where
    F: Fn(&[f64]) -> Result<f64, ProblemError>,
{
    let row = &cons.row;
    let rr = dotv(row, row);
    if rr == 0.0 {
        return Err(SolveError::ZeroConstraint);
    }
    let origin: Vec<f64> = row.iter().map(|r| cons.rhs * r / rr).collect();
    let basis = null_space(row);
    let nz = basis.len();
    let red = Reduced {
        objective,
        origin,
        basis,
    };
    let mut z = match init {
        Some(c) => {
            if c.len() != row.len() {
                return Err(SolveError::Dimension(format!(
                    "initial point has {} entries, expected {}",
                    c.len(),
                    row.len()
                )));
            }
            red.basis
                .iter()
                .map(|col| dotv(col, c.as_slice()))
                .collect()
        }
        None => vec![0.0; nz],
    };

    let mut f = red.value(&z)?;
    if !f.is_finite() {
        return Err(SolveError::InitialPoint);
    }
    let finish = |z: &[f64], f: f64, iterations: usize, converged: bool| {
        let c = red.lift(z);
        SolveReport {
            objective_value: f,
            constraint_residual: cons.residual(&c),
            coefficients: CoefficientVector(c),
            iterations,
            converged,
            path: SolvePath::QuasiNewton,
        }
    };
    if nz == 0 {
        return Ok(finish(&z, f, 0, true));
    }

    let mut g = red.gradient(&z, opts.fd_step)?;
    let mut hinv = DMatrix::<f64>::identity(nz, nz);
    let mut scaled = false;
    for iter in 0..opts.max_iter {
        if inf_norm(&g) <= opts.grad_tol {
            return Ok(finish(&z, f, iter, true));
        }
        let gv = DVector::from_column_slice(&g);
        let mut d: Vec<f64> = (-(&hinv * &gv)).iter().copied().collect();
        let mut slope = dotv(&g, &d);
        if !(slope < 0.0) {
            hinv = DMatrix::identity(nz, nz);
            d = g.iter().map(|x| -x).collect();
            slope = dotv(&g, &d);
        }
        let Some(trial) = line_search(&red, &z, &d, f, slope, opts.fd_step) else {
            return Ok(finish(&z, f, iter, false));
        };
        let s: Vec<f64> = d.iter().map(|x| trial.t * x).collect();
        let y: Vec<f64> = trial.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        z.iter_mut().zip(&s).for_each(|(zi, si)| *zi += si);
        f = trial.f;
        g = trial.g;
        let sy = dotv(&s, &y);
        if sy > 1e-300 {
            if !scaled {
                hinv *= sy / dotv(&y, &y);
                scaled = true;
            }
            let sv = DVector::from_column_slice(&s);
            let yv = DVector::from_column_slice(&y);
            let rho = 1.0 / sy;
            let eye = DMatrix::<f64>::identity(nz, nz);
            let left = &eye - rho * &sv * yv.transpose();
            let right = &eye - rho * &yv * sv.transpose();
            hinv = &left * &hinv * &right + rho * &sv * sv.transpose();
        }
    }
    let converged = inf_norm(&g) <= opts.grad_tol;
    Ok(finish(&z, f, opts.max_iter, converged))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_quadratic() -> (AffineResiduals, Constraint) {
        // (c0 - 2)², c0 = 3.
        (
            AffineResiduals {
                matrix: vec![1.0],
                offsets: vec![-2.0],
                weights: vec![1.0],
                dim: 1,
            },
            Constraint {
                row: vec![1.0],
                rhs: 3.0,
            },
        )
    }

    #[test]
    fn lls_single_variable() {
        let (res, cons) = single_quadratic();
        let r = solve_lls(&res, &cons).unwrap();
        assert_eq!(r.coefficients.0, vec![3.0]);
        assert_eq!(r.objective_value, 1.0);
        assert_eq!(r.path, SolvePath::LinearLeastSquares);
    }

    fn random_problem(dim: usize, m: usize, seed: u64) -> (AffineResiduals, Constraint) {
        // Small LCG keeps the test dependency-free and deterministic.
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let matrix = (0..dim * m).map(|_| next()).collect();
        let offsets = (0..m).map(|_| next()).collect();
        let weights = (0..m).map(|_| 0.5 + next().abs()).collect();
        let row = (0..dim).map(|_| next()).collect();
        (
            AffineResiduals {
                matrix,
                offsets,
                weights,
                dim,
            },
            Constraint { row, rhs: next() },
        )
    }

    #[test]
    fn lls_feasible_and_stationary() {
        for seed in 1..20 {
            let (res, cons) = random_problem(5, 12, seed);
            let r = solve_lls(&res, &cons).unwrap();
            assert!(r.constraint_residual <= 1e-12);
            let g = reduced_gradient_norm(&res, &cons, r.coefficients.as_slice());
            assert!(g <= 1e-10, "seed {seed}: {g}");
        }
    }

    #[test]
    fn qn_matches_lls_on_quadratics() {
        for seed in 1..10 {
            let (res, cons) = random_problem(4, 10, seed);
            let lls = solve_lls(&res, &cons).unwrap();
            let obj = |c: &[f64]| Ok(res.objective(c));
            let qn = solve_qn(&obj, &cons, None, QnOptions::default()).unwrap();
            assert!(qn.converged, "seed {seed}");
            for (a, b) in lls.coefficients.0.iter().zip(&qn.coefficients.0) {
                assert!((a - b).abs() <= 1e-7, "seed {seed}: {a} vs {b}");
            }
            assert!(qn.constraint_residual <= 1e-10 * cons.rhs.abs().max(1.0));
        }
    }

    #[test]
    fn qn_single_variable_feasible_only() {
        let (res, cons) = single_quadratic();
        let obj = |c: &[f64]| Ok(res.objective(c));
        let r = solve_qn(&obj, &cons, None, QnOptions::default()).unwrap();
        assert_eq!(r.coefficients.0, vec![3.0]);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn qn_constant_objective() {
        let cons = Constraint {
            row: vec![1.0, 2.0, -1.0],
            rhs: 2.0,
        };
        let obj = |_: &[f64]| Ok(4.0);
        let init = CoefficientVector(vec![5.0, -1.0, 0.5]);
        let r = solve_qn(&obj, &cons, Some(&init), QnOptions::default()).unwrap();
        assert!(r.iterations <= 1);
        assert!(r.converged);
        assert!(r.constraint_residual <= 1e-12);
        // Projection keeps the null-space component of the start.
        let shift: Vec<f64> = r
            .coefficients
            .0
            .iter()
            .zip(&init.0)
            .map(|(a, b)| a - b)
            .collect();
        let norm = (cons.row.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let along: f64 = shift.iter().zip(&cons.row).map(|(a, b)| a * b / norm).sum();
        let total = shift.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((along.abs() - total).abs() < 1e-12);
    }

    #[test]
    fn null_space_is_orthonormal() {
        let row = [0.3, -1.2, 0.7, 2.0, 0.01];
        let ns = null_space(&row);
        assert_eq!(ns.len(), 4);
        for (i, u) in ns.iter().enumerate() {
            assert!(dotv(u, &row).abs() < 1e-14);
            for (j, v) in ns.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dotv(u, v) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        let (res, _) = single_quadratic();
        let zero = Constraint {
            row: vec![0.0],
            rhs: 1.0,
        };
        assert_eq!(solve_lls(&res, &zero), Err(SolveError::ZeroConstraint));
        // Two identical columns: reduced normal matrix is singular.
        let res = AffineResiduals {
            matrix: vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
            offsets: vec![0.0, 1.0],
            weights: vec![1.0, 1.0],
            dim: 3,
        };
        let cons = Constraint {
            row: vec![0.0, 0.0, 1.0],
            rhs: 1.0,
        };
        assert!(matches!(
            solve_lls(&res, &cons),
            Err(SolveError::Singular { .. })
        ));
    }

    #[test]
    fn pivot_prefers_lowest_index_on_ties() {
        assert_eq!(pivot_index(&[1.0, -3.0, 3.0]), 1);
        assert_eq!(pivot_index(&[0.0, 0.0]), 0);
    }
}
