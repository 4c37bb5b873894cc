//! Run configuration: a flat `key = value` file overlaid by command-line
//! flags, then validated into a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use fracvar::problem::{ExampleKind, LeitmannFamily, DEFAULT_QUAD_COUNT, EXAMPLE_NAMES};
use fracvar::PathChoice;

use crate::custom::scalar_fn;
use crate::CliError;

pub const DEFAULT_DEGREES: [usize; 2] = [3, 6];
pub const DEFAULT_GRID: usize = 200;
pub const MAX_QUAD: usize = 256;

const NUMERIC_KEYS: [&str; 7] = ["alpha", "beta_order", "p", "nu", "epsilon", "a", "b"];
const EXPR_KEYS: [&str; 4] = ["g", "h", "gp", "hp"];
const OTHER_KEYS: [&str; 7] = [
    "problem", "degrees", "quad", "grid", "out", "solver", "timing",
];

/// Raw settings keyed by normalized name (`beta-order` becomes `beta_order`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

fn known(key: &str) -> bool {
    NUMERIC_KEYS.contains(&key) || EXPR_KEYS.contains(&key) || OTHER_KEYS.contains(&key)
}

impl Settings {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!(
                    "config line {}: expected key = value, got `{line}`",
                    lineno + 1
                ))
            })?;
            out.set(k, v.trim())
                .map_err(|e| CliError::Validation(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(out)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = normalize(key);
        if !known(&key) {
            return Err(format!("unknown key `{key}`"));
        }
        self.0.insert(key, value.trim().to_string());
        Ok(())
    }

    /// Entries of `other` replace those of `self`.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        let x: f64 = v
            .parse()
            .map_err(|_| CliError::Validation(format!("{key} = `{v}` is not a number")))?;
        if !x.is_finite() {
            return Err(CliError::Validation(format!("{key} must be finite")));
        }
        Ok(Some(x))
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                CliError::Validation(format!("{key} = `{v}` is not a nonnegative integer"))
            }),
        }
    }
}

/// A user-defined Leitmann problem; the expression sources are kept for the
/// report.
#[derive(Debug, Clone)]
pub struct CustomProblem {
    pub family: LeitmannFamily,
    pub sources: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum ProblemChoice {
    Builtin(ExampleKind),
    Custom(CustomProblem),
}

impl ProblemChoice {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemChoice::Builtin(k) => k.name(),
            ProblemChoice::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemChoice,
    pub degrees: Vec<usize>,
    pub quad_count: usize,
    pub grid_points: usize,
    pub output_path: Option<PathBuf>,
    pub solver: PathChoice,
    /// When false, reported solve times are written as zero so that output
    /// files are byte-reproducible.
    pub timing: bool,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let name = s.get("problem").unwrap_or("ex1");
        let problem = match name {
            "custom" => ProblemChoice::Custom(custom_problem(s)?),
            _ if EXAMPLE_NAMES.contains(&name) => ProblemChoice::Builtin(builtin_problem(name, s)?),
            _ => {
                return Err(CliError::Validation(format!(
                    "unknown problem `{name}`, expected one of {} or custom",
                    EXAMPLE_NAMES.join(", ")
                )))
            }
        };
        let degrees = match s.get("degrees") {
            None => DEFAULT_DEGREES.to_vec(),
            Some(v) => parse_degrees(v)?,
        };
        let quad_count = s.count("quad", DEFAULT_QUAD_COUNT)?;
        if !(1..=MAX_QUAD).contains(&quad_count) {
            return Err(CliError::Validation(format!(
                "quad = {quad_count} must lie in 1..={MAX_QUAD}"
            )));
        }
        let grid_points = s.count("grid", DEFAULT_GRID)?;
        if grid_points == 0 {
            return Err(CliError::Validation("grid must be at least 1".into()));
        }
        let solver = match s.get("solver").unwrap_or("auto") {
            "auto" => PathChoice::Auto,
            "lls" => PathChoice::LeastSquares,
            "qn" => PathChoice::QuasiNewton,
            other => {
                return Err(CliError::Validation(format!(
                    "solver = `{other}`, expected auto, lls or qn"
                )))
            }
        };
        let timing = match s.get("timing").unwrap_or("on") {
            "on" | "true" | "1" => true,
            "off" | "false" | "0" => false,
            other => {
                return Err(CliError::Validation(format!(
                    "timing = `{other}`, expected on or off"
                )))
            }
        };
        Ok(RunConfig {
            problem,
            degrees,
            quad_count,
            grid_points,
            output_path: s.get("out").map(PathBuf::from),
            solver,
            timing,
        })
    }
}

/// `3,6` or `0, 1, 2`. Whitespace is ignored; the list must be nonempty.
pub fn parse_degrees(v: &str) -> Result<Vec<usize>, CliError> {
    let items: Vec<&str> = v
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::Validation(
            "degrees must list at least one degree".into(),
        ));
    }
    items
        .iter()
        .map(|x| {
            x.parse().map_err(|_| {
                CliError::Validation(format!("degree `{x}` is not a nonnegative integer"))
            })
        })
        .collect()
}

/// `alpha` and `beta_order` describe the same split `alpha + beta = 1`.
fn resolve_alpha(s: &Settings, default: Option<f64>) -> Result<f64, CliError> {
    let alpha = s.real("alpha")?;
    let beta = s.real("beta_order")?;
    let value = match (alpha, beta) {
        (Some(a), Some(b)) => {
            if (a + b - 1.0).abs() > 1e-12 {
                return Err(CliError::Validation(format!(
                    "alpha = {a} and beta-order = {b} must sum to 1"
                )));
            }
            a
        }
        (Some(a), None) => a,
        (None, Some(b)) => 1.0 - b,
        (None, None) => default
            .ok_or_else(|| CliError::Validation("alpha (or beta-order) is required".into()))?,
    };
    if !(value > 0.0 && value <= 1.0) {
        return Err(CliError::Validation(format!(
            "alpha = {value} must lie in (0, 1]"
        )));
    }
    Ok(value)
}

fn reject_unused(s: &Settings, problem: &str, allowed: &[&str]) -> Result<(), CliError> {
    for key in NUMERIC_KEYS.iter().chain(EXPR_KEYS.iter()) {
        if s.get(key).is_some() && !allowed.contains(key) {
            return Err(CliError::Validation(format!(
                "parameter {key} does not apply to {problem}"
            )));
        }
    }
    Ok(())
}

fn builtin_problem(name: &str, s: &Settings) -> Result<ExampleKind, CliError> {
    let base = ExampleKind::figure(name).expect("listed example");
    let allowed: &[&str] = match base {
        ExampleKind::Ex1 { .. } => &["alpha", "beta_order", "p", "epsilon"],
        ExampleKind::Ex2 { .. } => &["alpha", "beta_order", "nu", "epsilon"],
        ExampleKind::Ex3 { .. } | ExampleKind::Ex5 { .. } => &["alpha", "beta_order", "epsilon"],
        ExampleKind::Ex4 { .. } => &["alpha", "beta_order", "p", "nu", "epsilon"],
        ExampleKind::Remark3 { .. } => &["alpha", "beta_order", "epsilon", "a", "b"],
    };
    reject_unused(s, name, allowed)?;
    let alpha = resolve_alpha(s, Some(base.alpha()))?;
    let epsilon = s.real("epsilon")?.unwrap_or(base.epsilon());
    let kind = match base {
        ExampleKind::Ex1 { p, .. } => ExampleKind::Ex1 {
            alpha,
            p: s.real("p")?.unwrap_or(p),
            epsilon,
        },
        ExampleKind::Ex2 { nu, .. } => ExampleKind::Ex2 {
            alpha,
            nu: s.real("nu")?.unwrap_or(nu),
            epsilon,
        },
        ExampleKind::Ex3 { .. } => ExampleKind::Ex3 { alpha, epsilon },
        ExampleKind::Ex4 { p, nu, .. } => ExampleKind::Ex4 {
            alpha,
            p: s.real("p")?.unwrap_or(p),
            nu: s.real("nu")?.unwrap_or(nu),
            epsilon,
        },
        ExampleKind::Ex5 { .. } => ExampleKind::Ex5 { alpha, epsilon },
        ExampleKind::Remark3 { a, b, .. } => ExampleKind::Remark3 {
            alpha,
            a: s.real("a")?.unwrap_or(a),
            b: s.real("b")?.unwrap_or(b),
            epsilon,
        },
    };
    // Surfaces bad p, nu or interval now rather than at solve time.
    kind.family()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(kind)
}

fn custom_problem(s: &Settings) -> Result<CustomProblem, CliError> {
    reject_unused(
        s,
        "custom",
        &[
            "alpha",
            "beta_order",
            "epsilon",
            "a",
            "b",
            "g",
            "h",
            "gp",
            "hp",
        ],
    )?;
    let alpha = resolve_alpha(s, None)?;
    let epsilon = s
        .real("epsilon")?
        .ok_or_else(|| CliError::Validation("custom problems need epsilon".into()))?;
    let a = s.real("a")?.unwrap_or(0.0);
    let b = s.real("b")?.unwrap_or(1.0);
    let mut sources = BTreeMap::new();
    let mut expr = |key: &str| {
        let src = s
            .get(key)
            .ok_or_else(|| CliError::Validation(format!("custom problems need {key}")))?;
        sources.insert(key.to_string(), src.to_string());
        scalar_fn(key, src).map_err(CliError::Validation)
    };
    let (g, h, gp, hp) = (expr("g")?, expr("h")?, expr("gp")?, expr("hp")?);
    let family = LeitmannFamily::new(g, h, gp, hp, 1.0 - alpha, epsilon, a, b)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(CustomProblem { family, sources })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.set(k, v).unwrap();
        }
        s
    }

    #[test]
    fn file_format() {
        let s =
            Settings::parse("# comment\nproblem = ex2\n\nbeta-order=0.5  # trailing\n").unwrap();
        assert_eq!(s.get("problem"), Some("ex2"));
        assert_eq!(s.get("beta_order"), Some("0.5"));
        assert!(Settings::parse("nonsense").is_err());
        assert!(Settings::parse("colour = red").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let mut s = Settings::parse("problem = ex1\nalpha = 0.3").unwrap();
        s.overlay(&settings(&[("alpha", "0.6")]));
        let cfg = RunConfig::from_settings(&s).unwrap();
        let ProblemChoice::Builtin(ExampleKind::Ex1 { alpha, p, epsilon }) = cfg.problem else {
            panic!("expected ex1");
        };
        assert_eq!((alpha, p, epsilon), (0.6, 5.0, 1.0));
    }

    #[test]
    fn defaults_follow_the_figures() {
        let cfg = RunConfig::from_settings(&settings(&[("problem", "ex4")])).unwrap();
        assert_eq!(cfg.degrees, vec![3, 6]);
        assert_eq!(cfg.quad_count, 40);
        assert_eq!(cfg.grid_points, 200);
        assert!(cfg.timing);
        assert!(
            matches!(cfg.problem, ProblemChoice::Builtin(k) if k == ExampleKind::figure("ex4").unwrap())
        );
    }

    #[test]
    fn validation_errors() {
        let bad = [
            vec![("problem", "ex9")],
            vec![("problem", "ex1"), ("nu", "2")],
            vec![("problem", "remark3"), ("a", "1"), ("b", "1")],
            vec![("degrees", "")],
            vec![("degrees", "3,-1")],
            vec![("alpha", "0.4"), ("beta_order", "0.5")],
            vec![("alpha", "1.5")],
            vec![("quad", "0")],
            vec![("grid", "0")],
            vec![("solver", "newton")],
            vec![("problem", "custom"), ("alpha", "0.5"), ("epsilon", "1")],
        ];
        for pairs in bad {
            let err = RunConfig::from_settings(&settings(&pairs)).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{pairs:?}");
        }
    }

    #[test]
    fn beta_order_sets_alpha() {
        let cfg =
            RunConfig::from_settings(&settings(&[("problem", "ex3"), ("beta_order", "0.75")]))
                .unwrap();
        let ProblemChoice::Builtin(kind) = cfg.problem else {
            panic!()
        };
        assert_eq!(kind.alpha(), 0.25);
    }

    #[test]
    fn custom_problem_from_expressions() {
        let s = settings(&[
            ("problem", "custom"),
            ("alpha", "0.5"),
            ("epsilon", "1"),
            ("g", "1/(1+x^5)"),
            ("h", "1/(1+x^5)"),
            ("gp", "-5*x^4/(1+x^5)^2"),
            ("hp", "-5*x^4/(1+x^5)^2"),
        ]);
        let cfg = RunConfig::from_settings(&s).unwrap();
        let ProblemChoice::Custom(c) = cfg.problem else {
            panic!()
        };
        assert_eq!(c.sources["g"], "1/(1+x^5)");
        assert!(((c.family.g)(1.0) - 0.5).abs() < 1e-15);
        let vanishing = settings(&[
            ("problem", "custom"),
            ("alpha", "0.5"),
            ("epsilon", "1"),
            ("g", "x - 0.5"),
            ("h", "0"),
            ("gp", "1"),
            ("hp", "0"),
        ]);
        assert_eq!(
            RunConfig::from_settings(&vanishing)
                .unwrap_err()
                .exit_code(),
            1
        );
    }
}
