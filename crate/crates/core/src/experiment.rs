//! End-to-end runs: assemble, solve, compare with the exact solution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::{assemble_2d, assemble_3d, Assembled};
use crate::error::{Error, Result};
use crate::metrics::{error_norms, pollution_grid, ConvergenceReport};
use crate::problems::{build_problem, exact_field, AnyProblem, Problem, ProblemId, ProblemParams};
use crate::schemes2d::{coeffs_2d, SchemeKind2D};
use crate::schemes3d::{coeffs_3d, SchemeKind3D};
use crate::solver::{solve, SolverConfig};

/// Scheme family, independent of dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    New,
    Baseline,
}

impl Scheme {
    pub fn kind_2d(self) -> SchemeKind2D {
        match self {
            Scheme::New => SchemeKind2D::NewSixth2D,
            Scheme::Baseline => SchemeKind2D::BaselineSixth2D,
        }
    }

    pub fn kind_3d(self) -> SchemeKind3D {
        match self {
            Scheme::New => SchemeKind3D::NewSixth3D,
            Scheme::Baseline => SchemeKind3D::BaselineSixth3D,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::New => "new",
            Scheme::Baseline => "baseline",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "new" => Ok(Scheme::New),
            "baseline" => Ok(Scheme::Baseline),
            _ => Err(Error::Config(format!("unknown scheme '{s}' (expected new or baseline)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub problem: String,
    pub scheme: Scheme,
    pub n: usize,
    pub wavenumber: f64,
    pub unknowns: usize,
    pub err_max: f64,
    pub err_l2: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub seconds: f64,
}

/// Assembled system for a problem of either dimension.
pub enum AnyAssembled {
    Two(Assembled<f64, 2>),
    Three(Assembled<f64, 3>),
}

impl AnyAssembled {
    pub fn system(&self) -> &crate::sparse::SparseSystem<f64> {
        match self {
            AnyAssembled::Two(a) => &a.system,
            AnyAssembled::Three(a) => &a.system,
        }
    }
}

pub fn assemble_any(problem: &AnyProblem<f64>, scheme: Scheme, n: usize) -> Result<AnyAssembled> {
    Ok(match problem {
        AnyProblem::Two(p) => {
            let g = p.grid(n)?;
            let c = coeffs_2d(scheme.kind_2d(), p.wavenumber, g.h());
            AnyAssembled::Two(assemble_2d(&g, &c, p)?)
        }
        AnyProblem::Three(p) => {
            let g = p.grid(n)?;
            let c = coeffs_3d(scheme.kind_3d(), p.wavenumber, g.h());
            AnyAssembled::Three(assemble_3d(&g, &c, p)?)
        }
    })
}

fn errors<const D: usize>(p: &Problem<f64, D>, a: &Assembled<f64, D>, sol: &[f64], n: usize) -> Result<(f64, f64)> {
    let numeric = a.full_field(sol)?.node_values();
    let exact = exact_field(p, &a.grid).node_values();
    error_norms(&numeric, &exact, n)
}

/// One solve of `problem` with `n` cells along x.
pub fn run(problem: &AnyProblem<f64>, scheme: Scheme, n: usize, config: &SolverConfig<f64>) -> Result<RunResult> {
    let assembled = assemble_any(problem, scheme, n)?;
    let report = solve(assembled.system(), config)?;
    let (err_max, err_l2) = match (problem, &assembled) {
        (AnyProblem::Two(p), AnyAssembled::Two(a)) => errors(p, a, &report.solution, n)?,
        (AnyProblem::Three(p), AnyAssembled::Three(a)) => errors(p, a, &report.solution, n)?,
        _ => unreachable!("dimension of assembly follows the problem"),
    };
    Ok(RunResult {
        problem: problem.name().to_string(),
        scheme,
        n,
        wavenumber: problem.wavenumber(),
        unknowns: assembled.system().n(),
        err_max,
        err_l2,
        iterations: report.iterations,
        residual: report.residual,
        converged: report.converged,
        seconds: report.seconds,
    })
}

pub fn sweep(problem: &AnyProblem<f64>, scheme: Scheme, ns: &[usize], config: &SolverConfig<f64>) -> Result<ConvergenceReport> {
    if ns.len() < 2 {
        return Err(Error::Config("a sweep needs at least two grid sizes".into()));
    }
    let mut runs = Vec::with_capacity(ns.len());
    for &n in ns {
        let r = run(problem, scheme, n, config)?;
        runs.push((n, r.err_max, r.err_l2, r.iterations, r.seconds));
    }
    ConvergenceReport::from_runs(problem.name(), &scheme.to_string(), runs)
}

/// Problem `id` with the wave number set to `k`. Problems whose wave number
/// follows from `l` take the real `l` that produces `k`.
pub fn problem_at_wavenumber(id: ProblemId, params: &ProblemParams, k: f64) -> Result<AnyProblem<f64>> {
    match id {
        ProblemId::P1 => {
            let l = real_l(k, 1.0)?;
            Ok(AnyProblem::Two(crate::problems::p1_real_l(l)?))
        }
        ProblemId::P2 | ProblemId::P5 => Err(Error::Config(format!(
            "problem {id} fixes K through an odd l; sweep l instead"
        ))),
        _ => build_problem(id, &ProblemParams { k: Some(k), ..*params }),
    }
}

fn real_l(k: f64, shift: f64) -> Result<f64> {
    let s = (k / std::f64::consts::PI).powi(2) - shift;
    if !(s > 1.0) {
        return Err(Error::Parameter(format!("K = {k} is too small for this problem family")));
    }
    Ok(s.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSweepRow {
    pub k: f64,
    pub err_max_new: f64,
    pub err_max_baseline: f64,
}

/// Both schemes at fixed `n` for every `K` in `ks`.
pub fn ksweep(id: ProblemId, params: &ProblemParams, ks: &[f64], n: usize, config: &SolverConfig<f64>) -> Result<Vec<KSweepRow>> {
    if ks.is_empty() {
        return Err(Error::Config("the K list is empty".into()));
    }
    ks.iter()
        .map(|&k| {
            let p = problem_at_wavenumber(id, params, k)?;
            Ok(KSweepRow {
                k,
                err_max_new: run(&p, Scheme::New, n, config)?.err_max,
                err_max_baseline: run(&p, Scheme::Baseline, n, config)?.err_max,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PollutionRow {
    pub n: usize,
    pub k: f64,
    pub err_baseline: f64,
    pub err_new: f64,
}

/// Runs both schemes at `N = pollution_grid(K)` for every `K` in `ks`.
pub fn pollution(
    id: ProblemId,
    params: &ProblemParams,
    base: (usize, f64),
    ks: &[f64],
    config: &SolverConfig<f64>,
) -> Result<Vec<PollutionRow>> {
    if ks.is_empty() {
        return Err(Error::Config("the K list is empty".into()));
    }
    ks.iter()
        .map(|&k| {
            let n = pollution_grid(k, base.0, base.1, 6)?;
            let p = problem_at_wavenumber(id, params, k)?;
            Ok(PollutionRow {
                n,
                k,
                err_baseline: run(&p, Scheme::Baseline, n, config)?.err_max,
                err_new: run(&p, Scheme::New, n, config)?.err_max,
            })
        })
        .collect()
}
