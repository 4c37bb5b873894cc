use fracvar::fracbasis::{
    boundary_row, eval_frac_deriv, eval_frac_integral, eval_y, BasisSpec, CoefficientVector,
};
use fracvar::problem::{assemble_objective, ExampleKind};
use fracvar::quadrature::gauss_legendre_on;
use fracvar::specfun::{gamma, jacobi_at_one, jacobi_eval, pochhammer, JacobiIndex};
use proptest::prelude::*;

fn rel(u: f64, v: f64) -> f64 {
    (u - v).abs() / v.abs().max(f64::MIN_POSITIVE)
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, len)
}

proptest! {
    #[test]
    fn jacobi_reflection(n in 0usize..=10, p in -0.99f64..3.0, q in -0.99f64..3.0, t in -1.0f64..1.0) {
        let lhs = jacobi_eval(JacobiIndex::new(p, q, n).unwrap(), -t).unwrap();
        let rhs = jacobi_eval(JacobiIndex::new(q, p, n).unwrap(), t).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((lhs - sign * rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn jacobi_endpoint(n in 0usize..=15, p in -0.99f64..3.0, q in -0.99f64..3.0) {
        let idx = JacobiIndex::new(p, q, n).unwrap();
        prop_assert!(rel(jacobi_at_one(idx), jacobi_eval(idx, 1.0).unwrap()) <= 1e-10);
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        prop_assert!(rel(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap()) <= 1e-12);
    }

    #[test]
    fn pochhammer_is_gamma_ratio(a in 0.05f64..20.0, i in 0usize..40) {
        let ratio = gamma(a + i as f64).unwrap() / gamma(a).unwrap();
        prop_assert!(rel(pochhammer(a, i), ratio) <= 1e-11);
    }

    #[test]
    fn evaluators_are_linear(
        alpha in 0.05f64..=1.0,
        beta in 0.05f64..0.95,
        c1 in coeffs(6),
        c2 in coeffs(6),
        s in -3.0f64..3.0,
        u in 0.02f64..=1.0,
    ) {
        let spec = BasisSpec::new(alpha, 0.0, 2.0, 5).unwrap();
        let x = 2.0 * u;
        let mix = CoefficientVector(c1.iter().zip(&c2).map(|(a, b)| a + s * b).collect());
        let (c1, c2) = (CoefficientVector(c1), CoefficientVector(c2));
        type Eval = fn(&BasisSpec, &CoefficientVector, f64, f64) -> f64;
        let evals: [Eval; 3] = [
            |sp, c, x, _| eval_y(sp, c, x).unwrap(),
            |sp, c, x, b| eval_frac_deriv(sp, c, x, b).unwrap(),
            |sp, c, x, b| eval_frac_integral(sp, c, x, b).unwrap(),
        ];
        for f in evals {
            let lhs = f(&spec, &mix, x, beta);
            let rhs = f(&spec, &c1, x, beta) + s * f(&spec, &c2, x, beta);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs().max(rhs.abs())));
        }
    }

    #[test]
    fn boundary_row_matches_integral_image(alpha in 0.01f64..0.99, c in coeffs(9)) {
        let spec = BasisSpec::new(alpha, 1.0, 3.0, 8).unwrap();
        let c = CoefficientVector(c);
        let dot: f64 = boundary_row(&spec).iter().zip(c.as_slice()).map(|(r, x)| r * x).sum();
        let image = eval_frac_integral(&spec, &c, 3.0, 1.0 - alpha).unwrap();
        prop_assert!((dot - image).abs() <= 1e-11 * image.abs().max(1e-300));
    }

    #[test]
    fn leitmann_objectives_are_nonnegative_quadratics(
        which in 0usize..5,
        c1 in coeffs(5),
        dir in coeffs(5),
        h in 0.05f64..1.0,
    ) {
        let kind = ExampleKind::all_figures()[which];
        let spec = kind.problem().unwrap();
        let basis = BasisSpec::new(spec.alpha, spec.a, spec.b, 4).unwrap();
        let rule = gauss_legendre_on(spec.quad_count, spec.a, spec.b).unwrap();
        let obj = assemble_objective(&spec, &basis, &rule).unwrap();
        let at = |k: f64| {
            let c: Vec<f64> = c1.iter().zip(&dir).map(|(a, d)| a + k * h * d).collect();
            obj.eval(&c).unwrap()
        };
        let (f0, f1, f2, f3) = (at(0.0), at(1.0), at(2.0), at(3.0));
        prop_assert!(f0 >= 0.0 && f1 >= 0.0);
        let d1 = f2 - 2.0 * f1 + f0;
        let d2 = f3 - 2.0 * f2 + f1;
        let scale = f0.abs().max(f1).max(f2).max(f3).max(1e-300);
        prop_assert!((d1 - d2).abs() <= 1e-8 * scale, "{d1} vs {d2}");
    }
}

/// With β = α the image of the basis is a polynomial of degree n in x.
#[test]
fn derivative_of_order_alpha_is_polynomial() {
    let quad = gauss_legendre_on(20, -1.0, 1.0).unwrap();
    for &alpha in &[0.25, 0.5, 0.8, 1.0] {
        let n = 6;
        let spec = BasisSpec::new(alpha, 1.0, 3.0, n).unwrap();
        let c = CoefficientVector((0..=n).map(|i| 1.0 / (1.0 + i as f64)).collect());
        // Interpolate on n+1 Chebyshev points, compare on a fine grid.
        let cheb: Vec<f64> = (0..=n)
            .map(|j| 2.0 - ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n + 2) as f64).cos())
            .collect();
        let vals: Vec<f64> = cheb
            .iter()
            .map(|&x| eval_frac_deriv(&spec, &c, x, alpha).unwrap())
            .collect();
        let lagrange = |x: f64| {
            (0..=n)
                .map(|j| {
                    let w: f64 = (0..=n)
                        .filter(|&m| m != j)
                        .map(|m| (x - cheb[m]) / (cheb[j] - cheb[m]))
                        .product();
                    vals[j] * w
                })
                .sum::<f64>()
        };
        let mut worst = 0.0f64;
        for &t in quad.nodes().iter().chain([-1.0, 1.0].iter()) {
            let x = 2.0 + t;
            let v = eval_frac_deriv(&spec, &c, x, alpha).unwrap();
            worst = worst.max((lagrange(x) - v).abs() / v.abs().max(1.0));
        }
        assert!(worst <= 1e-10, "alpha {alpha}: {worst:e}");
    }
}
