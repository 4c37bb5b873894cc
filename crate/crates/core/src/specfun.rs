//! Scalar special functions: gamma, Pochhammer, Jacobi polynomials and the
//! two-parameter Mittag–Leffler function.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("gamma overflows at {0}")]
    Overflow(f64),
    #[error("Jacobi indices must exceed -1, got ({a_idx}, {b_idx})")]
    JacobiIndex { a_idx: f64, b_idx: f64 },
    #[error("argument {0} lies outside [-1, 1]")]
    Domain(f64),
    #[error("Mittag-Leffler parameters out of range: a = {a}, x = {x}")]
    MittagLefflerDomain { a: f64, x: f64 },
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
}

/// Largest argument for which `Γ(x)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut s = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    s
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

// Lanczos approximation for x >= 0.5. The power is split in two halves so
// that arguments up to the overflow threshold stay finite.
fn gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(z)
}

/// The gamma function.
///
/// Uses a 15-term Lanczos approximation (`g = 607/128`) for `x >= 0.5` and
/// the reflection formula below that. Relative error is a few ulps on
/// `(0, 170]`.
pub fn gamma(x: f64) -> Result<f64, SpecfunError> {
    if is_nonpositive_integer(x) {
        return Err(SpecfunError::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(SpecfunError::Overflow(x));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        return Ok(factorial(x as usize - 1));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        let g = gamma_lanczos(1.0 - x);
        let value = PI / (s * g);
        if !value.is_finite() {
            return Err(SpecfunError::Overflow(x));
        }
        return Ok(value);
    }
    Ok(gamma_lanczos(x))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps us on the Lanczos branch.
        return ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Reciprocal gamma `1/Γ(x)`, an entire function: zero at the poles of Γ,
/// finite (possibly underflowing to zero) for large arguments.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 170.0 {
        return (-ln_gamma(x)).exp();
    }
    if x < -170.0 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π; Γ(1-x) is astronomically large here.
        let s = (PI * x).sin();
        return s / PI * ln_gamma(1.0 - x).exp();
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// `Γ(x)/Γ(y)`, robust for large arguments. Returns zero when `y` is a pole.
pub fn gamma_ratio(x: f64, y: f64) -> Result<f64, SpecfunError> {
    if is_nonpositive_integer(y) {
        return Ok(0.0);
    }
    if x <= 170.0 && y <= 170.0 {
        return Ok(gamma(x)? * rgamma(y));
    }
    if x > 0.0 && y > 0.0 {
        return Ok((ln_gamma(x) - ln_gamma(y)).exp());
    }
    Err(SpecfunError::Overflow(x.max(y)))
}

/// Rising factorial `(a)_i = a(a+1)...(a+i-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, i: usize) -> f64 {
    if i <= 30 || a <= 0.0 {
        return (0..i).fold(1.0, |acc, k| acc * (a + k as f64));
    }
    gamma_ratio(a + i as f64, a).unwrap_or_else(|_| (0..i).fold(1.0, |acc, k| acc * (a + k as f64)))
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Indices and degree of a Jacobi polynomial `P_n^{(a_idx, b_idx)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    pub a_idx: f64,
    pub b_idx: f64,
    pub degree: usize,
}

impl JacobiIndex {
    pub fn new(a_idx: f64, b_idx: f64, degree: usize) -> Result<Self, SpecfunError> {
        if !(a_idx > -1.0 && b_idx > -1.0) {
            return Err(SpecfunError::JacobiIndex { a_idx, b_idx });
        }
        Ok(Self {
            a_idx,
            b_idx,
            degree,
        })
    }
}

const JACOBI_DOMAIN_SLACK: f64 = 1e-12;

/// Evaluates `P_0 .. P_{out.len()-1}` at `t` by the three-term recurrence.
///
/// Indices are not validated; callers go through [`JacobiIndex`] or know
/// their indices exceed -1.
pub fn jacobi_sequence(a_idx: f64, b_idx: f64, t: f64, out: &mut [f64]) {
    let Some(first) = out.first_mut() else {
        return;
    };
    *first = 1.0;
    if out.len() == 1 {
        return;
    }
    let (a, b) = (a_idx, b_idx);
    out[1] = 0.5 * ((a + b + 2.0) * t + (a - b));
    for n in 2..out.len() {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let denom = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
        let c2 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        out[n] = (c1 * out[n - 1] - c2 * out[n - 2]) / denom;
    }
}

/// `P_n^{(a_idx, b_idx)}(t)` by the three-term recurrence.
pub fn jacobi_eval(idx: JacobiIndex, t: f64) -> Result<f64, SpecfunError> {
    if !(t.abs() <= 1.0 + JACOBI_DOMAIN_SLACK) {
        return Err(SpecfunError::Domain(t));
    }
    let t = t.clamp(-1.0, 1.0);
    let mut seq = vec![0.0; idx.degree + 1];
    jacobi_sequence(idx.a_idx, idx.b_idx, t, &mut seq);
    Ok(seq[idx.degree])
}

/// The explicit alternating sum in powers of `(t+1)/2`.
///
/// Slow; kept as a cross-check on [`jacobi_eval`].
pub fn jacobi_eval_explicit(idx: JacobiIndex, t: f64) -> f64 {
    // The alternating sum cancels by many orders of magnitude near t = 1, so
    // it is carried in double-double arithmetic.
    let n = idx.degree;
    let (a, b) = (idx.a_idx, idx.b_idx);
    let u = Dd::sum(t, 1.0).scale(0.5);
    let poch =
        |x: f64, k: usize| (0..k).fold(Dd::from(1.0), |acc, j| acc.mul(Dd::sum(x, j as f64)));
    let fact = |k: usize| (1..=k).fold(Dd::from(1.0), |acc, j| acc.mul(Dd::from(j as f64)));
    let lead = poch(1.0 + b, n).div(poch(1.0 + a + b, n));
    let mut total = Dd::from(0.0);
    let mut uk = Dd::from(1.0);
    for k in 0..=n {
        let num = poch(1.0 + a + b, n + k);
        let den = fact(k).mul(fact(n - k)).mul(poch(1.0 + b, k));
        let term = lead.mul(num).div(den).mul(uk);
        total = if (n - k).is_multiple_of(2) {
            total.add(term)
        } else {
            total.sub(term)
        };
        uk = uk.mul(u);
    }
    total.hi + total.lo
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        Dd {
            hi: s,
            lo: (a - (s - v)) + (b - v),
        }
    }

    fn sum(a: f64, b: f64) -> Dd {
        Dd::two_sum(a, b)
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let r = Dd::renorm(s.hi, s.lo + t.hi);
        Dd::renorm(r.hi, r.lo + t.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from(k))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2).add(Dd::from(q3))
    }
}

/// Endpoint value `P_n^{(a_idx, b_idx)}(1) = (a_idx+1)_n / n!`.
pub fn jacobi_at_one(idx: JacobiIndex) -> f64 {
    (1..=idx.degree).fold(1.0, |acc, k| acc * (idx.a_idx + k as f64) / k as f64)
}

const ML_MAX_TERMS: usize = 500;
const ML_TOL: f64 = 1e-16;

/// Two-parameter Mittag–Leffler function `E_{a,b}(x) = Σ x^k / Γ(ak + b)`.
///
/// Direct series; intended for `|x| <= 100`, `a > 0`.
pub fn mittag_leffler(a: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    if !(a > 0.0 && x.abs() <= 100.0) {
        return Err(SpecfunError::MittagLefflerDomain { a, x });
    }
    if x == 0.0 {
        return Ok(rgamma(b));
    }
    let ln_abs_x = x.abs().ln();
    let mut sum = 0.0;
    let mut xk: f64 = 1.0;
    for k in 0..ML_MAX_TERMS {
        let z = a * k as f64 + b;
        let term = if z <= 160.0 && xk.is_finite() {
            xk * rgamma(z)
        } else {
            let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * (k as f64 * ln_abs_x - ln_gamma(z)).exp()
        };
        sum += term;
        xk *= x;
        // Past the peak of the terms once Γ(z + a)/Γ(z) ~ z^a exceeds |x|.
        let decreasing = z >= 1.0 && z.powf(a) > x.abs();
        if decreasing && term.abs() <= ML_TOL * (1.0 + sum.abs()) {
            return Ok(sum);
        }
    }
    Err(SpecfunError::NonConvergence {
        terms: ML_MAX_TERMS,
    })
}
