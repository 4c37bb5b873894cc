//! The three subcommands and their output files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use fracvar::oracle::ExactSolution;
use fracvar::problem::{leitmann_optimum, leitmann_to_problem, ExampleKind, ProblemSpec};
use fracvar::suite::{run_all, SuiteOptions, SuiteResult};
use fracvar::{solve_problem, Solution};
use serde::Serialize;

use crate::config::{ProblemChoice, RunConfig};
use crate::CliError;

pub const SOLUTION_HEADER: &str = "x,y_n,y_exact,error";
pub const CONVERGENCE_HEADER: &str =
    "n,max_interior_error,objective_value,objective_gap,solve_time_ms";
pub const DEFAULT_OUT_DIR: &str = "fracvar-out";

const GRID_NOTE: &str = "grid x_j = a + j(b-a)/N for j = 1..N; x = a is excluded because the exact solutions are singular there";

/// A configured problem ready to solve.
pub struct Prepared {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub exact: Option<ExactSolution>,
    /// Optimal value `A²(b-a)`.
    pub target: f64,
    pub parameters: BTreeMap<String, f64>,
    pub expressions: BTreeMap<String, String>,
}

fn kind_parameters(kind: &ExampleKind) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    let (a, b) = kind.interval();
    m.insert("alpha".into(), kind.alpha());
    m.insert("epsilon".into(), kind.epsilon());
    m.insert("a".into(), a);
    m.insert("b".into(), b);
    match *kind {
        ExampleKind::Ex1 { p, .. } => {
            m.insert("p".into(), p);
        }
        ExampleKind::Ex2 { nu, .. } => {
            m.insert("nu".into(), nu);
        }
        ExampleKind::Ex4 { p, nu, .. } => {
            m.insert("p".into(), p);
            m.insert("nu".into(), nu);
        }
        _ => {}
    }
    m
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    match &cfg.problem {
        ProblemChoice::Builtin(kind) => {
            let family = kind
                .family()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            Ok(Prepared {
                name: kind.name(),
                spec: leitmann_to_problem(&family).with_quad_count(cfg.quad_count),
                exact: Some(ExactSolution::new(*kind)),
                target: leitmann_optimum(&family),
                parameters: kind_parameters(kind),
                expressions: BTreeMap::new(),
            })
        }
        ProblemChoice::Custom(c) => {
            let f = &c.family;
            let parameters = [
                ("alpha", 1.0 - f.beta_l),
                ("epsilon", f.epsilon),
                ("a", f.a),
                ("b", f.b),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
            Ok(Prepared {
                name: "custom",
                spec: leitmann_to_problem(f).with_quad_count(cfg.quad_count),
                exact: None,
                target: leitmann_optimum(f),
                parameters,
                expressions: c.sources.clone(),
            })
        }
    }
}

/// One solved degree with its evaluation on the output grid.
pub struct DegreeRun {
    pub n: usize,
    pub solution: Solution,
    pub rows: Vec<GridRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct GridRow {
    pub x: f64,
    pub y_n: f64,
    pub y_exact: Option<f64>,
}

impl GridRow {
    pub fn error(&self) -> Option<f64> {
        self.y_exact.map(|e| self.y_n - e)
    }
}

impl DegreeRun {
    pub fn max_interior_error(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.error().map(f64::abs))
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
    }
}

pub fn solve_degree(prep: &Prepared, cfg: &RunConfig, n: usize) -> Result<DegreeRun, CliError> {
    let solution = solve_problem(&prep.spec, n, cfg.solver)
        .map_err(|e| CliError::Solver(format!("n = {n}: {e}")))?;
    let (a, b) = (prep.spec.a, prep.spec.b);
    let grid = cfg.grid_points;
    let mut rows = Vec::with_capacity(grid);
    for j in 1..=grid {
        let x = if j == grid {
            b
        } else {
            a + j as f64 * (b - a) / grid as f64
        };
        let y_n = solution
            .eval(x)
            .map_err(|e| CliError::Solver(format!("n = {n}, x = {x}: {e}")))?;
        let y_exact = match &prep.exact {
            Some(ex) => Some(
                ex.eval(x)
                    .map_err(|e| CliError::Solver(format!("exact solution at x = {x}: {e}")))?,
            ),
            None => None,
        };
        rows.push(GridRow { x, y_n, y_exact });
    }
    Ok(DegreeRun { n, solution, rows })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn solution_csv(run: &DegreeRun) -> String {
    let mut out = String::with_capacity(80 * (run.rows.len() + 1));
    out.push_str(SOLUTION_HEADER);
    out.push('\n');
    for r in &run.rows {
        let exact = r.y_exact.map(num).unwrap_or_default();
        let err = r.error().map(num).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", num(r.x), num(r.y_n), exact, err);
    }
    out
}

fn wall_ms(run: &DegreeRun, cfg: &RunConfig) -> f64 {
    if cfg.timing {
        run.solution.elapsed.as_secs_f64() * 1e3
    } else {
        0.0
    }
}

#[derive(Serialize)]
struct DegreeReport {
    n: usize,
    path: &'static str,
    coefficients: Vec<f64>,
    objective_value: f64,
    target: f64,
    objective_gap: f64,
    constraint_residual: f64,
    iterations: usize,
    converged: bool,
    wall_time_ms: f64,
    max_interior_error: Option<f64>,
    csv: String,
}

#[derive(Serialize)]
struct RunReport {
    problem: &'static str,
    parameters: BTreeMap<String, f64>,
    expressions: BTreeMap<String, String>,
    quad_count: usize,
    grid_points: usize,
    grid_note: &'static str,
    generated_unix_seconds: u64,
    runs: Vec<DegreeReport>,
}

fn text_report(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fracvar solve report");
    let _ = writeln!(
        out,
        "generated (unix seconds): {}",
        r.generated_unix_seconds
    );
    let _ = writeln!(out, "note: {}", r.grid_note);
    let _ = writeln!(out, "problem: {}", r.problem);
    for (k, v) in &r.parameters {
        let _ = writeln!(out, "  {k} = {v}");
    }
    for (k, v) in &r.expressions {
        let _ = writeln!(out, "  {k}(x) = {v}");
    }
    let _ = writeln!(
        out,
        "quadrature nodes: {}, grid points: {}",
        r.quad_count, r.grid_points
    );
    for d in &r.runs {
        let _ = writeln!(out);
        let _ = writeln!(out, "n = {} ({})", d.n, d.path);
        let _ = writeln!(out, "  objective value      {:.16e}", d.objective_value);
        let _ = writeln!(out, "  target A^2(b-a)      {:.16e}", d.target);
        let _ = writeln!(out, "  objective gap        {:.6e}", d.objective_gap);
        let _ = writeln!(out, "  constraint residual  {:.3e}", d.constraint_residual);
        let _ = writeln!(
            out,
            "  iterations           {} (converged: {})",
            d.iterations, d.converged
        );
        let _ = writeln!(out, "  wall time            {:.3} ms", d.wall_time_ms);
        if let Some(e) = d.max_interior_error {
            let _ = writeln!(out, "  max interior error   {e:.6e}");
        }
        let _ = writeln!(out, "  solution csv         {}", d.csv);
        let _ = writeln!(out, "  coefficients");
        for (i, c) in d.coefficients.iter().enumerate() {
            let _ = writeln!(out, "    c[{i}] = {c:.16e}");
        }
    }
    out
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::io(path, e))
}

/// Solves every configured degree and writes `<problem>_n<n>.csv`,
/// `report.txt` and `report.json` into the output directory.
/// Returns the directory written to.
pub fn run_solve(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let prep = prepare(cfg)?;
    let dir = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut runs = Vec::new();
    for &n in &cfg.degrees {
        let run = solve_degree(&prep, cfg, n)?;
        let file = format!("{}_n{}.csv", prep.name, n);
        write(&dir.join(&file), &solution_csv(&run))?;
        let r = &run.solution.report;
        runs.push(DegreeReport {
            n,
            path: r.path.label(),
            coefficients: r.coefficients.0.clone(),
            objective_value: r.objective_value,
            target: prep.target,
            objective_gap: r.objective_value - prep.target,
            constraint_residual: r.constraint_residual,
            iterations: r.iterations,
            converged: r.converged,
            wall_time_ms: wall_ms(&run, cfg),
            max_interior_error: run.max_interior_error(),
            csv: file,
        });
    }
    let generated = if cfg.timing {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    } else {
        0
    };
    let report = RunReport {
        problem: prep.name,
        parameters: prep.parameters,
        expressions: prep.expressions,
        quad_count: cfg.quad_count,
        grid_points: cfg.grid_points,
        grid_note: GRID_NOTE,
        generated_unix_seconds: generated,
        runs,
    };
    write(&dir.join("report.txt"), &text_report(&report))?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write(&dir.join("report.json"), &(json + "\n"))?;
    Ok(dir)
}

/// The convergence table as CSV text.
pub fn convergence_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let prep = prepare(cfg)?;
    if prep.exact.is_none() {
        return Err(CliError::Validation(
            "convergence needs a problem with a known exact solution".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(CONVERGENCE_HEADER);
    out.push('\n');
    for &n in &cfg.degrees {
        let run = solve_degree(&prep, cfg, n)?;
        let j = run.solution.report.objective_value;
        let err = run.max_interior_error().expect("exact solution present");
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6}",
            n,
            num(err),
            num(j),
            num(j - prep.target),
            wall_ms(&run, cfg)
        );
    }
    Ok(out)
}

/// Writes the convergence CSV to the configured path, or returns it for
/// standard output when no path is set.
pub fn run_convergence(cfg: &RunConfig) -> Result<Option<String>, CliError> {
    let csv = convergence_csv(cfg)?;
    match &cfg.output_path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            write(path, &csv)?;
            Ok(None)
        }
        None => Ok(Some(csv)),
    }
}

pub fn verify_table(results: &[SuiteResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>10}  {:>10}  result",
        "suite", "cases", "worst", "tolerance"
    );
    for r in results {
        let _ = writeln!(
            out,
            "{:<width$}  {:>7}  {:>10.3e}  {:>10.1e}  {}",
            r.name,
            r.cases,
            r.worst,
            r.tol,
            if r.passed() { "pass" } else { "FAIL" }
        );
    }
    out
}

/// Runs every suite; returns the table and whether all passed.
pub fn run_verify(opts: SuiteOptions) -> Result<(String, bool), CliError> {
    let results = run_all(opts).map_err(|e| CliError::Verification(e.to_string()))?;
    let ok = results.iter().all(SuiteResult::passed);
    Ok((verify_table(&results), ok))
}
