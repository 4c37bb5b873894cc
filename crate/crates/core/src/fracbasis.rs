//! The fractional Jacobi basis `φ_i(x) = (x-a)^α P_i^{(0,α)}(2(x-a)/(b-a) - 1)`
//! and its closed-form Riemann–Liouville images.
//!
//! For `0 < β` the derivative image is
//! `D^β φ_i = Γ(i+α+1)/Γ(i+α-β+1) (x-a)^{α-β} P_i^{(β,α-β)}(t)`,
//! and replacing `β` by `-β` gives the fractional integral
//! `I^β φ_i = Γ(i+α+1)/Γ(i+α+β+1) (x-a)^{α+β} P_i^{(-β,α+β)}(t)`.

use thiserror::Error;

use crate::specfun::{gamma_ratio, jacobi_at_one, jacobi_sequence, JacobiIndex, SpecfunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("basis order alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("invalid interval [{a}, {b}]")]
    Interval { a: f64, b: f64 },
    #[error("point {x} lies outside [{a}, {b}]")]
    Domain { x: f64, a: f64, b: f64 },
    #[error("basis index {index} exceeds degree {degree}")]
    Index { index: usize, degree: usize },
    #[error("coefficient vector has length {got}, basis needs {expected}")]
    Length { got: usize, expected: usize },
    #[error("operator order {0} out of range")]
    Order(f64),
    #[error("D^{beta} of the basis is singular at x = a when beta > alpha = {alpha}")]
    Singular { alpha: f64, beta: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Order, interval and truncation degree of the basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl BasisSpec {
    pub fn new(alpha: f64, a: f64, b: f64, n: usize) -> Result<Self, BasisError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(BasisError::Alpha(alpha));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(BasisError::Interval { a, b });
        }
        Ok(Self { alpha, a, b, n })
    }

    /// Number of basis functions, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same order and interval, different degree.
    pub fn with_degree(&self, n: usize) -> Self {
        Self { n, ..*self }
    }

    fn check_len(&self, c: &CoefficientVector) -> Result<(), BasisError> {
        if c.len() != self.len() {
            return Err(BasisError::Length {
                got: c.len(),
                expected: self.len(),
            });
        }
        Ok(())
    }

    /// Validated local coordinates `(x - a, t)` for a point of `[a, b]`.
    fn locate(&self, x: f64) -> Result<Point, BasisError> {
        let width = self.b - self.a;
        let slack = 1e-12 * width;
        if !(x >= self.a - slack && x <= self.b + slack) {
            return Err(BasisError::Domain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        let x = x.clamp(self.a, self.b);
        let s = x - self.a;
        let t = if x == self.b {
            1.0
        } else {
            2.0 * s / width - 1.0
        };
        Ok(Point {
            s,
            t,
            at_end: x == self.b,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    s: f64,
    t: f64,
    at_end: bool,
}

/// Coefficients `c_0 .. c_n` of a basis expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub Vec<f64>);

impl CoefficientVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for CoefficientVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Jacobi values `P_0..P_n` at a point, using the closed-form endpoint value
/// at `t = 1`.
fn jacobi_values(a_idx: f64, b_idx: f64, p: Point, out: &mut [f64]) {
    if p.at_end {
        for (k, v) in out.iter_mut().enumerate() {
            *v = jacobi_at_one(JacobiIndex {
                a_idx,
                b_idx,
                degree: k,
            });
        }
    } else {
        jacobi_sequence(a_idx, b_idx, p.t, out);
    }
}

/// Values of the basis functions at `x`.
fn basis_row(spec: &BasisSpec, p: Point, out: &mut [f64]) {
    jacobi_values(0.0, spec.alpha, p, out);
    let w = p.s.powf(spec.alpha);
    out.iter_mut().for_each(|v| *v *= w);
}

/// Images `D^beta φ_i(x)` for all `i`.
fn deriv_row(spec: &BasisSpec, p: Point, beta: f64, out: &mut [f64]) -> Result<(), BasisError> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(BasisError::Order(beta));
    }
    let alpha = spec.alpha;
    let expo = alpha - beta;
    let w = if expo == 0.0 {
        1.0
    } else if p.s == 0.0 {
        if expo < 0.0 {
            return Err(BasisError::Singular { alpha, beta });
        }
        0.0
    } else {
        p.s.powf(expo)
    };
    jacobi_values(beta, expo, p, out);
    for (i, v) in out.iter_mut().enumerate() {
        let i = i as f64;
        *v *= w * gamma_ratio(i + alpha + 1.0, i + expo + 1.0)?;
    }
    Ok(())
}

/// Images `I^beta φ_i(x)` for all `i`; `beta = 0` is the identity.
fn integral_row(spec: &BasisSpec, p: Point, beta: f64, out: &mut [f64]) -> Result<(), BasisError> {
    if !(0.0..1.0).contains(&beta) {
        return Err(BasisError::Order(beta));
    }
    let alpha = spec.alpha;
    let expo = alpha + beta;
    let w = p.s.powf(expo);
    jacobi_values(-beta, expo, p, out);
    for (i, v) in out.iter_mut().enumerate() {
        let i = i as f64;
        *v *= w * gamma_ratio(i + alpha + 1.0, i + expo + 1.0)?;
    }
    Ok(())
}

fn dot(c: &CoefficientVector, row: &[f64]) -> f64 {
    c.0.iter().zip(row).map(|(a, b)| a * b).sum()
}

/// `φ_i(x)`.
pub fn basis_element(spec: &BasisSpec, i: usize, x: f64) -> Result<f64, BasisError> {
    if i > spec.n {
        return Err(BasisError::Index {
            index: i,
            degree: spec.n,
        });
    }
    let p = spec.locate(x)?;
    let mut row = vec![0.0; i + 1];
    basis_row(spec, p, &mut row);
    Ok(row[i])
}

/// `y_n(x) = Σ c_i φ_i(x)`.
pub fn eval_y(spec: &BasisSpec, c: &CoefficientVector, x: f64) -> Result<f64, BasisError> {
    spec.check_len(c)?;
    let p = spec.locate(x)?;
    let mut row = vec![0.0; spec.len()];
    basis_row(spec, p, &mut row);
    Ok(dot(c, &row))
}

/// `D^beta y_n(x)` for `0 < beta <= 1`.
///
/// At `x = a` the limit is finite when `beta <= alpha`; for `beta > alpha`
/// the image blows up like `(x-a)^{alpha-beta}` and a domain error is
/// returned.
pub fn eval_frac_deriv(
    spec: &BasisSpec,
    c: &CoefficientVector,
    x: f64,
    beta: f64,
) -> Result<f64, BasisError> {
    spec.check_len(c)?;
    let p = spec.locate(x)?;
    let mut row = vec![0.0; spec.len()];
    deriv_row(spec, p, beta, &mut row)?;
    Ok(dot(c, &row))
}

/// `I^beta y_n(x)` for `0 <= beta < 1`.
pub fn eval_frac_integral(
    spec: &BasisSpec,
    c: &CoefficientVector,
    x: f64,
    beta: f64,
) -> Result<f64, BasisError> {
    spec.check_len(c)?;
    let p = spec.locate(x)?;
    let mut row = vec![0.0; spec.len()];
    integral_row(spec, p, beta, &mut row)?;
    Ok(dot(c, &row))
}

/// Row `r` with `r · c = I^{1-α} y_n(b)`:
/// `r_i = (b-a) Γ(i+α+1) (α)_i / (Γ(i+2) i!)`.
pub fn boundary_row(spec: &BasisSpec) -> Vec<f64> {
    let alpha = spec.alpha;
    (0..spec.len())
        .map(|i| {
            let endpoint = jacobi_at_one(JacobiIndex {
                a_idx: alpha - 1.0,
                b_idx: 1.0,
                degree: i,
            });
            let ratio = gamma_ratio(i as f64 + alpha + 1.0, i as f64 + 2.0).unwrap_or(f64::NAN);
            (spec.b - spec.a) * ratio * endpoint
        })
        .collect()
}

/// Basis values and operator images tabulated at a fixed set of points.
///
/// Each table is stored row-major, one row of `n + 1` entries per point.
#[derive(Debug, Clone)]
pub struct BasisTable {
    spec: BasisSpec,
    points: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    integrals: Vec<f64>,
    deriv_order: f64,
    integral_order: f64,
}

impl BasisTable {
    pub fn new(
        spec: BasisSpec,
        points: &[f64],
        deriv_order: f64,
        integral_order: f64,
    ) -> Result<Self, BasisError> {
        let width = spec.len();
        let mut values = vec![0.0; width * points.len()];
        let mut derivs = vec![0.0; width * points.len()];
        let mut integrals = vec![0.0; width * points.len()];
        for (j, &x) in points.iter().enumerate() {
            let p = spec.locate(x)?;
            let range = j * width..(j + 1) * width;
            basis_row(&spec, p, &mut values[range.clone()]);
            deriv_row(&spec, p, deriv_order, &mut derivs[range.clone()])?;
            integral_row(&spec, p, integral_order, &mut integrals[range])?;
        }
        Ok(Self {
            spec,
            points: points.to_vec(),
            values,
            derivs,
            integrals,
            deriv_order,
            integral_order,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn deriv_order(&self) -> f64 {
        self.deriv_order
    }

    pub fn integral_order(&self) -> f64 {
        self.integral_order
    }

    pub fn value_row(&self, j: usize) -> &[f64] {
        let w = self.spec.len();
        &self.values[j * w..(j + 1) * w]
    }

    pub fn deriv_row(&self, j: usize) -> &[f64] {
        let w = self.spec.len();
        &self.derivs[j * w..(j + 1) * w]
    }

    pub fn integral_row(&self, j: usize) -> &[f64] {
        let w = self.spec.len();
        &self.integrals[j * w..(j + 1) * w]
    }

    /// `(y_n, D y_n, I y_n)` at point `j`.
    pub fn eval(&self, c: &[f64], j: usize) -> (f64, f64, f64) {
        let d = |row: &[f64]| c.iter().zip(row).map(|(a, b)| a * b).sum::<f64>();
        (
            d(self.value_row(j)),
            d(self.deriv_row(j)),
            d(self.integral_row(j)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    fn spec(alpha: f64, a: f64, b: f64, n: usize) -> BasisSpec {
        BasisSpec::new(alpha, a, b, n).unwrap()
    }

    #[test]
    fn basis_element_examples() {
        let s = spec(0.5, 0.0, 1.0, 3);
        assert!((basis_element(&s, 0, 0.25).unwrap() - 0.5).abs() < 1e-15);
        for i in 0..=3 {
            assert_eq!(basis_element(&s, i, 0.0).unwrap(), 0.0);
        }
        assert!((basis_element(&s, 2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            basis_element(&s, 4, 0.5),
            Err(BasisError::Index { .. })
        ));
        assert!(matches!(
            basis_element(&s, 0, 1.5),
            Err(BasisError::Domain { .. })
        ));
    }

    #[test]
    fn eval_y_examples() {
        let s = spec(0.5, 0.0, 1.0, 2);
        assert_eq!(eval_y(&s, &CoefficientVector::zeros(3), 0.4).unwrap(), 0.0);
        let s0 = spec(0.5, 0.0, 1.0, 0);
        assert!((eval_y(&s0, &vec![2.0].into(), 0.25).unwrap() - 1.0).abs() < 1e-15);
        let s1 = spec(0.5, 0.0, 1.0, 1);
        assert!((eval_y(&s1, &vec![1.0, 1.0].into(), 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            eval_y(&s1, &vec![1.0].into(), 0.5),
            Err(BasisError::Length { .. })
        ));
    }

    #[test]
    fn frac_deriv_constant_image() {
        let s = spec(0.5, 0.0, 1.0, 0);
        let v = eval_frac_deriv(&s, &vec![1.0].into(), 0.7, 0.5).unwrap();
        assert!((v - gamma(1.5).unwrap()).abs() < 1e-15);
        let z = eval_frac_deriv(
            &spec(0.5, 0.0, 1.0, 3),
            &CoefficientVector::zeros(4),
            0.3,
            0.2,
        )
        .unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn frac_deriv_at_left_end() {
        let s = spec(0.5, 0.0, 1.0, 2);
        let c: CoefficientVector = vec![1.0, -0.5, 0.25].into();
        // beta == alpha: finite polynomial limit.
        let at_a = eval_frac_deriv(&s, &c, 0.0, 0.5).unwrap();
        let near = eval_frac_deriv(&s, &c, 1e-12, 0.5).unwrap();
        assert!((at_a - near).abs() < 1e-9);
        // beta < alpha: vanishes.
        assert_eq!(eval_frac_deriv(&s, &c, 0.0, 0.3).unwrap(), 0.0);
        // beta > alpha: singular.
        assert!(matches!(
            eval_frac_deriv(&s, &c, 0.0, 0.8),
            Err(BasisError::Singular { .. })
        ));
        assert!(matches!(
            eval_frac_deriv(&s, &c, 0.5, 1.2),
            Err(BasisError::Order(_))
        ));
    }

    #[test]
    fn frac_integral_examples() {
        let s = spec(0.6, 0.0, 1.0, 2);
        let c: CoefficientVector = vec![0.3, -1.0, 2.0].into();
        assert_eq!(eval_frac_integral(&s, &c, 0.0, 0.25).unwrap(), 0.0);
        let s0 = spec(0.5, 0.0, 1.0, 0);
        let v = eval_frac_integral(&s0, &vec![1.0].into(), 1.0, 0.5).unwrap();
        assert!((v - gamma(1.5).unwrap() / gamma(2.0).unwrap()).abs() < 1e-15);
        // Order zero is the identity.
        let y = eval_y(&s, &c, 0.45).unwrap();
        assert!((eval_frac_integral(&s, &c, 0.45, 0.0).unwrap() - y).abs() < 1e-14);
        assert!(matches!(
            eval_frac_integral(&s, &c, 0.5, 1.0),
            Err(BasisError::Order(_))
        ));
    }

    #[test]
    fn boundary_row_examples() {
        let r = boundary_row(&spec(0.5, 0.0, 1.0, 0));
        assert!((r[0] - gamma(1.5).unwrap()).abs() < 1e-15);
        let r = boundary_row(&spec(1.0, 0.0, 1.0, 5));
        assert!(r.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let r = boundary_row(&spec(0.5, 0.0, 2.0, 1));
        assert!((r[0] - 2.0 * gamma(1.5).unwrap()).abs() < 1e-14);
        assert!((r[1] - gamma(2.5).unwrap() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn table_matches_pointwise() {
        let s = spec(0.7, 1.0, 3.0, 5);
        let pts = [1.2, 1.9, 2.5, 3.0];
        let t = BasisTable::new(s, &pts, 0.7, 0.3).unwrap();
        let c: CoefficientVector = vec![0.1, -0.4, 0.9, 0.2, -0.3, 0.05].into();
        for (j, &x) in pts.iter().enumerate() {
            let (y, d, i) = t.eval(c.as_slice(), j);
            assert_eq!(y, eval_y(&s, &c, x).unwrap());
            assert_eq!(d, eval_frac_deriv(&s, &c, x, 0.7).unwrap());
            assert_eq!(i, eval_frac_integral(&s, &c, x, 0.3).unwrap());
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            BasisSpec::new(0.0, 0.0, 1.0, 2),
            Err(BasisError::Alpha(_))
        ));
        assert!(matches!(
            BasisSpec::new(1.1, 0.0, 1.0, 2),
            Err(BasisError::Alpha(_))
        ));
        assert!(matches!(
            BasisSpec::new(0.5, 1.0, 1.0, 2),
            Err(BasisError::Interval { .. })
        ));
    }
}
