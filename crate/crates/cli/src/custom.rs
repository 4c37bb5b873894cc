//! User-supplied `g`, `h`, `g'`, `h'` for a custom Leitmann problem.

use std::sync::Arc;

use exmex::prelude::*;
use fracvar::problem::ScalarFn;

/// Parses an expression in the single variable `x`, e.g. `1/(1+x^5)`,
/// `exp(-2*x)`, `cos(x)`.
pub fn scalar_fn(name: &str, src: &str) -> Result<ScalarFn, String> {
    let expr = exmex::parse::<f64>(src).map_err(|e| format!("{name} = `{src}`: {e}"))?;
    let vars = expr.var_names();
    if vars.iter().any(|v| v != "x") {
        return Err(format!(
            "{name} = `{src}`: only the variable x is allowed, found {}",
            vars.join(", ")
        ));
    }
    let uses_x = !vars.is_empty();
    Ok(Arc::new(move |x: f64| {
        let args: &[f64] = if uses_x { &[x] } else { &[] };
        expr.eval(args).unwrap_or(f64::NAN)
    }))
}
