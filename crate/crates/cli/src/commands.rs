use std::fmt::Write as _;
use std::path::Path;

use helmholtz6::analysis::analyze;
use helmholtz6::experiment::{assemble_any, ksweep, pollution, run, AnyAssembled, KSweepRow, PollutionRow, RunResult, Scheme};
use helmholtz6::metrics::{format_sci, ConvergenceReport};
use helmholtz6::problems::{build_problem, AnyProblem, ProblemId, ProblemParams};
use helmholtz6::solver::{Method, SolverConfig};
use serde_json::Value;

use crate::config::{Format, RunConfig, SchemeChoice};
use crate::CliError;

const PROBLEM: [&str; 5] = ["problem", "l", "m", "k", "zeta"];
const SOLVER: [&str; 3] = ["method", "tol", "max_iter"];
const OUTPUT: [&str; 4] = ["format", "output", "allow_large", "no_timing"];

const MAX_2D: usize = 1024;
const MAX_3D: usize = 128;

fn allowed(command: &str) -> Vec<&'static str> {
    let mut keys: Vec<&str> = PROBLEM.iter().chain(&OUTPUT).copied().collect();
    let extra: &[&str] = match command {
        "run" => &["scheme", "n"],
        "sweep" => &["scheme", "ns", "out_dir"],
        "ksweep" => &["ks", "n"],
        "analyze" => &["scheme", "n", "trials", "seed"],
        _ => &["ks", "base_n", "base_k"],
    };
    keys.extend(extra);
    if command != "analyze" {
        keys.extend(SOLVER);
    }
    keys
}

fn need<T: Clone>(value: &Option<T>, key: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
}

fn params(c: &RunConfig) -> ProblemParams {
    ProblemParams {
        l: c.l,
        m: c.m,
        k: c.k,
        zeta: c.zeta,
    }
}

fn single_scheme(c: &RunConfig) -> Result<Scheme, CliError> {
    match c.scheme.unwrap_or(SchemeChoice::One(Scheme::New)) {
        SchemeChoice::One(s) => Ok(s),
        SchemeChoice::Both => Err(CliError::Config("scheme 'both' is only accepted by sweep".into())),
    }
}

fn guard_size(c: &RunConfig, id: ProblemId, n: usize) -> Result<(), CliError> {
    let limit = if id.dimension() == 2 { MAX_2D } else { MAX_3D };
    if n > limit && c.allow_large != Some(true) {
        return Err(CliError::Config(format!(
            "{n} cells per side exceeds the desk-scale limit {limit} for {}D; pass --allow-large",
            id.dimension()
        )));
    }
    if n == 0 {
        return Err(CliError::Config("grid size must be positive".into()));
    }
    Ok(())
}

fn solver(c: &RunConfig, default_tol: f64) -> Result<SolverConfig<f64>, CliError> {
    let s = SolverConfig {
        method: c.method.unwrap_or(Method::BiCGstab2),
        tol: c.tol.unwrap_or(default_tol),
        max_iter: c.max_iter,
    };
    s.validate()?;
    Ok(s)
}

fn emit(c: &RunConfig, text: &str) -> Result<(), CliError> {
    match &c.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are plain data");
    s.push('\n');
    s
}

pub fn execute(command: &str, c: &RunConfig) -> Result<(), CliError> {
    c.restrict(command, &allowed(command))?;
    let id = need(&c.problem, "problem")?;
    match command {
        "run" => cmd_run(c, id),
        "sweep" => cmd_sweep(c, id),
        "ksweep" => cmd_ksweep(c, id),
        "analyze" => cmd_analyze(c, id),
        _ => cmd_pollution(c, id),
    }
}

fn cmd_run(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    let n = need(&c.n, "n")?;
    guard_size(c, id, n)?;
    let problem: AnyProblem<f64> = build_problem(id, &params(c))?;
    let cfg = solver(c, problem.tolerance())?;
    let mut r = run(&problem, single_scheme(c)?, n, &cfg)?;
    if c.no_timing == Some(true) {
        r.seconds = 0.0;
    }
    let text = match c.format.unwrap_or(Format::Table) {
        Format::Json => json_text(&serde_json::to_value(&r).expect("plain data")),
        Format::Csv => run_csv(id, &r),
        Format::Table => run_table(&r),
    };
    emit(c, &text)
}

fn run_csv(id: ProblemId, r: &RunResult) -> String {
    format!(
        "problem,scheme,n,K,unknowns,err_max,err_l2,iters,residual,converged,seconds\n{},{},{},{},{},{},{},{},{},{},{:.3}\n",
        id,
        r.scheme,
        r.n,
        r.wavenumber,
        r.unknowns,
        format_sci(r.err_max, 4),
        format_sci(r.err_l2, 4),
        r.iterations,
        format_sci(r.residual, 4),
        r.converged,
        r.seconds
    )
}

fn run_table(r: &RunResult) -> String {
    let rows = [
        ("problem", r.problem.clone()),
        ("scheme", r.scheme.to_string()),
        ("1/h", r.n.to_string()),
        ("K", r.wavenumber.to_string()),
        ("unknowns", r.unknowns.to_string()),
        ("err_max", format_sci(r.err_max, 4)),
        ("err_l2", format_sci(r.err_l2, 4)),
        ("iters", r.iterations.to_string()),
        ("residual", format_sci(r.residual, 4)),
        ("converged", r.converged.to_string()),
        ("seconds", format!("{:.3}", r.seconds)),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<10} {v}");
    }
    out
}

fn render_report(report: &ConvergenceReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Table => report.to_table(),
        Format::Json => json_text(&serde_json::to_value(report).expect("plain data")),
    }
}

fn cmd_sweep(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    let ns = need(&c.ns, "ns")?;
    for &n in &ns {
        guard_size(c, id, n)?;
    }
    let schemes = c.scheme.unwrap_or(SchemeChoice::One(Scheme::New)).schemes();
    if schemes.len() > 1 && c.output.is_some() {
        return Err(CliError::Config("two schemes need --out-dir, not --output".into()));
    }
    let problem: AnyProblem<f64> = build_problem(id, &params(c))?;
    let cfg = solver(c, problem.tolerance())?;
    let format = c.format.unwrap_or(Format::Csv);
    for scheme in schemes {
        let mut report = helmholtz6::experiment::sweep(&problem, scheme, &ns, &cfg)?;
        if c.no_timing == Some(true) {
            report.rows.iter_mut().for_each(|r| r.seconds = 0.0);
        }
        let text = render_report(&report, format);
        match &c.out_dir {
            Some(dir) => write_file(&dir.join(format!("{id}_{scheme}.{}", format.extension())), &text)?,
            None => emit(c, &text)?,
        }
    }
    Ok(())
}

fn wave_problem_check(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    if c.k.is_some() {
        return Err(CliError::Config("K is swept; give the list with --ks".into()));
    }
    if id == ProblemId::P1 && c.l.is_some() {
        return Err(CliError::Config("for p1 the value of l follows from each K".into()));
    }
    Ok(())
}

fn cmd_ksweep(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    wave_problem_check(c, id)?;
    let n = need(&c.n, "n")?;
    guard_size(c, id, n)?;
    let ks = need(&c.ks, "ks")?;
    let tol = build_problem::<f64>(id, &params(c))?.tolerance();
    let rows = ksweep(id, &params(c), &ks, n, &solver(c, tol)?)?;
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("K,err_max_new,err_max_baseline\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.k, format_sci(r.err_max_new, 4), format_sci(r.err_max_baseline, 4));
            }
            out
        }
        Format::Json => json_text(&serde_json::to_value(&rows).expect("plain data")),
        Format::Table => ksweep_table(&rows),
    };
    emit(c, &text)
}

fn ksweep_table(rows: &[KSweepRow]) -> String {
    let mut out = format!("{:>10}  {:>10}  {:>10}\n", "K", "new", "baseline");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>10}  {:>10}  {:>10}",
            r.k,
            format_sci(r.err_max_new, 3),
            format_sci(r.err_max_baseline, 3)
        );
    }
    out
}

fn cmd_pollution(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    wave_problem_check(c, id)?;
    let ks = need(&c.ks, "ks")?;
    let base = (c.base_n.unwrap_or(20), c.base_k.unwrap_or(10.0));
    for &k in &ks {
        let n = helmholtz6::metrics::pollution_grid(k, base.0, base.1, 6)?;
        guard_size(c, id, n)?;
    }
    let tol = build_problem::<f64>(id, &params(c))?.tolerance();
    let rows = pollution(id, &params(c), base, &ks, &solver(c, tol)?)?;
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("N,K,err_baseline,err_new\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", r.n, r.k, format_sci(r.err_baseline, 4), format_sci(r.err_new, 4));
            }
            out
        }
        Format::Json => json_text(&serde_json::to_value(&rows).expect("plain data")),
        Format::Table => pollution_table(&rows),
    };
    emit(c, &text)
}

fn pollution_table(rows: &[PollutionRow]) -> String {
    let mut out = format!("{:>6}  {:>8}  {:>10}  {:>10}\n", "N", "K", "baseline", "new");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6}  {:>8}  {:>10}  {:>10}",
            r.n,
            r.k,
            format_sci(r.err_baseline, 3),
            format_sci(r.err_new, 3)
        );
    }
    out
}

fn cmd_analyze(c: &RunConfig, id: ProblemId) -> Result<(), CliError> {
    let n = need(&c.n, "n")?;
    guard_size(c, id, n)?;
    let problem: AnyProblem<f64> = build_problem(id, &params(c))?;
    let k = problem.wavenumber();
    let trials = c.trials.unwrap_or(100);
    let seed = c.seed.unwrap_or(1);
    let report = match assemble_any(&problem, single_scheme(c)?, n)? {
        AnyAssembled::Two(a) => analyze(&a, k, trials, seed)?,
        AnyAssembled::Three(a) => analyze(&a, k, trials, seed)?,
    };
    let mut json = report.to_json();
    json.as_object_mut()
        .expect("report is an object")
        .insert("passed".into(), Value::Bool(report.passed()));
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json),
        Format::Table => {
            let mut out = String::new();
            for (key, v) in json.as_object().expect("object") {
                if key != "row_sums" {
                    let _ = writeln!(out, "{key:<24} {v}");
                }
            }
            out
        }
        Format::Csv => return Err(CliError::Config("analyze writes json or table".into())),
    };
    emit(c, &text)
}
