//! Gauss–Legendre quadrature on arbitrary finite intervals.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("node count must lie in 1..=256, got {0}")]
    Count(usize),
    #[error("Newton iteration for root {root} did not converge")]
    NoConvergence { root: usize },
    #[error("invalid interval [{a}, {b}]")]
    Interval { a: f64, b: f64 },
}

pub const MAX_COUNT: usize = 256;
const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

/// Nodes and positive weights of an interpolatory rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ ω_j f(ξ_j)`, summed in ascending node order.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre `P_n(x)` and `P_n'(x)` by the Bonnet recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `count`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots of `P_count` are found by Newton iteration from Chebyshev-like
/// initial guesses; only the non-negative half is computed and mirrored, so
/// the rule is exactly symmetric.
pub fn gauss_legendre(count: usize) -> Result<QuadratureRule, QuadratureError> {
    if count == 0 || count > MAX_COUNT {
        return Err(QuadratureError::Count(count));
    }
    let n = count;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Root i counted from the right end.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadratureError::NoConvergence { root: i });
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let hi = n - 1 - i;
        nodes[hi] = x;
        nodes[i] = -x;
        weights[hi] = w;
        weights[i] = w;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (-1.0, 1.0),
    })
}

/// Affinely maps `rule` from its own interval onto `[a, b]`.
pub fn map_to_interval(
    rule: &QuadratureRule,
    a: f64,
    b: f64,
) -> Result<QuadratureRule, QuadratureError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::Interval { a, b });
    }
    let (c, d) = rule.interval;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let scale = (b - a) / (d - c);
    let nodes = rule
        .nodes
        .iter()
        .map(|&x| {
            let t = (2.0 * x - (c + d)) / (d - c);
            mid + half * t
        })
        .collect();
    let weights = rule.weights.iter().map(|&w| w * scale).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (a, b),
    })
}

/// Convenience: `count`-point Gauss–Legendre rule directly on `[a, b]`.
pub fn gauss_legendre_on(count: usize, a: f64, b: f64) -> Result<QuadratureRule, QuadratureError> {
    map_to_interval(&gauss_legendre(count)?, a, b)
}
