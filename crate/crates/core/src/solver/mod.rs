//! Linear solvers for assembled systems.

mod bicgstab;
mod direct;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use bicgstab::bicgstab_l;
pub use direct::{solve_banded, solve_direct_dense, DenseLu, DENSE_LIMIT};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::{residual_norm, SparseSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    BiCGstab2,
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BiCGstab2 => "bicgstab2",
            Method::Direct => "direct",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bicgstab2" | "bicgstab" => Ok(Method::BiCGstab2),
            "direct" => Ok(Method::Direct),
            _ => Err(Error::Config(format!("unknown solver method '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub method: Method,
    /// Absolute bound on the Euclidean norm of `r - A U`.
    pub tol: T,
    /// Iteration cap; `None` means `10 n`.
    pub max_iter: Option<usize>,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(method: Method, tol: T) -> Self {
        SolverConfig {
            method,
            tol,
            max_iter: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == Some(0) {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<T> {
    pub solution: Vec<T>,
    pub iterations: usize,
    /// True residual norm of `solution`.
    pub residual: T,
    pub converged: bool,
    pub seconds: f64,
}

pub fn solve<T: Real>(system: &SparseSystem<T>, config: &SolverConfig<T>) -> Result<SolveReport<T>> {
    config.validate()?;
    let start = Instant::now();
    let (solution, iterations) = match config.method {
        Method::Direct => (solve_direct_dense(system)?, 0),
        Method::BiCGstab2 => {
            let max_iter = config.max_iter.unwrap_or(10 * system.n().max(1));
            let out = bicgstab_l(system, 2, config.tol, max_iter)?;
            (out.solution, out.iterations)
        }
    };
    let residual = residual_norm(system, &solution)?;
    let converged = match config.method {
        Method::Direct => residual.is_finite(),
        Method::BiCGstab2 => residual <= config.tol,
    };
    Ok(SolveReport {
        solution,
        iterations,
        residual,
        converged,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_2d;
    use crate::problems::{p1_dirichlet_2d, zero_problem};
    use crate::schemes2d::{coeffs_2d, SchemeKind2D};

    #[test]
    fn iterative_matches_direct_on_dirichlet_problem() {
        let p = p1_dirichlet_2d::<f64>(7).unwrap();
        let g = p.grid(16).unwrap();
        let c = coeffs_2d(SchemeKind2D::NewSixth2D, p.wavenumber, g.h());
        let a = assemble_2d(&g, &c, &p).unwrap();
        let it = solve(&a.system, &SolverConfig::new(Method::BiCGstab2, 1e-11)).unwrap();
        assert!(it.converged && it.residual <= 1e-11);
        let d = solve(&a.system, &SolverConfig::new(Method::Direct, 1e-11)).unwrap();
        let diff = it.solution.iter().zip(&d.solution).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff <= 1e-9, "{diff:e}");
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let p = zero_problem::<f64, 2>(3.0);
        let g = p.grid(8).unwrap();
        let c = coeffs_2d(SchemeKind2D::NewSixth2D, 3.0, g.h());
        let a = assemble_2d(&g, &c, &p).unwrap();
        let r = solve(&a.system, &SolverConfig::new(Method::BiCGstab2, 1e-12)).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.solution.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn iteration_cap_reports_best_iterate() {
        let p = p1_dirichlet_2d::<f64>(7).unwrap();
        let g = p.grid(32).unwrap();
        let c = coeffs_2d(SchemeKind2D::NewSixth2D, p.wavenumber, g.h());
        let a = assemble_2d(&g, &c, &p).unwrap();
        let cfg = SolverConfig {
            max_iter: Some(3),
            ..SolverConfig::new(Method::BiCGstab2, 1e-14)
        };
        match solve(&a.system, &cfg) {
            Err(Error::NotConverged { iterations, best, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(best.len(), a.system.n());
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let p = p1_dirichlet_2d::<f64>(7).unwrap();
        let g = p.grid(16).unwrap();
        let c = coeffs_2d(SchemeKind2D::NewSixth2D, p.wavenumber, g.h());
        let a = assemble_2d(&g, &c, &p).unwrap();
        let cfg = SolverConfig::new(Method::BiCGstab2, 1e-11);
        let r1 = solve(&a.system, &cfg).unwrap();
        let r2 = solve(&a.system, &cfg).unwrap();
        assert_eq!(r1.iterations, r2.iterations);
        assert_eq!(r1.solution, r2.solution);
    }

    #[test]
    fn invalid_config() {
        let p = zero_problem::<f64, 2>(1.0);
        let g = p.grid(4).unwrap();
        let c = coeffs_2d(SchemeKind2D::NewSixth2D, 1.0, g.h());
        let a = assemble_2d(&g, &c, &p).unwrap();
        assert!(matches!(solve(&a.system, &SolverConfig::new(Method::Direct, 0.0)), Err(Error::Config(_))));
        assert_eq!("direct".parse::<Method>().unwrap(), Method::Direct);
        assert!("gmres".parse::<Method>().is_err());
    }
}
