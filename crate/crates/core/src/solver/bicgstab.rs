//! BiCGstab(l) of Sleijpen and Fokkema, without preconditioning.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::{dot, norm2, residual, SparseSystem};

const TINY: f64 = 1e-300;

fn guard<T: Real>(scalar: &'static str, value: T) -> Result<T> {
    if value.abs().as_f64() < TINY {
        return Err(Error::Breakdown {
            scalar,
            value: value.as_f64(),
        });
    }
    Ok(value)
}

fn axpy<T: Real>(y: &mut [T], a: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub struct Outcome<T> {
    pub solution: Vec<T>,
    pub iterations: usize,
    pub residual: T,
}

/// Solves from `x = 0` with shadow residual `r~ = b`. `iterations` counts
/// BiCG steps (two matrix-vector products each). Convergence is tested on the
/// recursive residual after every step and confirmed with the true residual;
/// a failed confirmation restarts from the current iterate, unless the true
/// residual made no progress since the last confirmation (rounding floor).
pub fn bicgstab_l<T: Real>(system: &SparseSystem<T>, ell: usize, tol: T, max_iter: usize) -> Result<Outcome<T>> {
    assert!(ell >= 1);
    let a = &system.matrix;
    let n = system.n();
    let mut x = vec![T::zero(); n];
    let shadow = system.rhs.clone();
    let mut r: Vec<Vec<T>> = vec![vec![T::zero(); n]; ell + 1];
    let mut u: Vec<Vec<T>> = vec![vec![T::zero(); n]; ell + 1];
    r[0].copy_from_slice(&system.rhs);
    let mut iterations = 0;
    let mut best = (norm2(&r[0]), x.clone());
    if best.0 <= tol {
        return Ok(Outcome {
            solution: x,
            iterations,
            residual: best.0,
        });
    }

    let mut tau = vec![vec![T::zero(); ell + 1]; ell + 1];
    let mut sigma = vec![T::zero(); ell + 1];
    let mut g1 = vec![T::zero(); ell + 1];
    let mut g = vec![T::zero(); ell + 1];
    let mut g2 = vec![T::zero(); ell + 1];
    let mut confirmed: Option<T> = None;

    'restart: loop {
        let mut rho0 = T::one();
        let mut alpha = T::zero();
        let mut omega = T::one();
        for v in u[0].iter_mut() {
            *v = T::zero();
        }
        loop {
            rho0 = -omega * rho0;
            for j in 0..ell {
                let rho1 = dot(&r[j], &shadow);
                let beta = alpha * rho1 / guard("rho", rho0)?;
                rho0 = rho1;
                for i in 0..=j {
                    let (ui, ri) = (&mut u[i], &r[i]);
                    for (uk, &rk) in ui.iter_mut().zip(ri) {
                        *uk = rk - beta * *uk;
                    }
                }
                let (head, tail) = u.split_at_mut(j + 1);
                a.matvec_into(&head[j], &mut tail[0]);
                let gamma = dot(&u[j + 1], &shadow);
                alpha = rho0 / guard("gamma", gamma)?;
                for i in 0..=j {
                    let (ri, ui) = (&mut r[i], &u[i + 1]);
                    axpy(ri, -alpha, ui);
                }
                let (head, tail) = r.split_at_mut(j + 1);
                a.matvec_into(&head[j], &mut tail[0]);
                axpy(&mut x, alpha, &u[0]);
                iterations += 1;
                if let Some(done) = check(system, &x, &r[0], tol, iterations, &mut best)? {
                    if done {
                        return Ok(Outcome {
                            solution: x,
                            iterations,
                            residual: best.0,
                        });
                    }
                    if stalled(&mut confirmed, best.0) {
                        return Err(not_converged(iterations, best));
                    }
                    r[0] = residual(system, &x)?;
                    continue 'restart;
                }
                if iterations >= max_iter {
                    return Err(not_converged(iterations, best));
                }
            }

            for j in 1..=ell {
                for i in 1..j {
                    tau[i][j] = dot(&r[j], &r[i]) / sigma[i];
                    let t = tau[i][j];
                    let (lo, hi) = r.split_at_mut(j);
                    axpy(&mut hi[0], -t, &lo[i]);
                }
                sigma[j] = guard("sigma", dot(&r[j], &r[j]))?;
                g1[j] = dot(&r[0], &r[j]) / sigma[j];
            }
            g[ell] = g1[ell];
            omega = g[ell];
            for j in (1..ell).rev() {
                let mut s = T::zero();
                for i in j + 1..=ell {
                    s += tau[j][i] * g[i];
                }
                g[j] = g1[j] - s;
            }
            for j in 1..ell {
                let mut s = T::zero();
                for i in j + 1..ell {
                    s += tau[j][i] * g[i + 1];
                }
                g2[j] = g[j + 1] + s;
            }
            axpy(&mut x, g[1], &r[0]);
            {
                let (lo, hi) = r.split_at_mut(ell);
                axpy(&mut lo[0], -g1[ell], &hi[0]);
            }
            {
                let (lo, hi) = u.split_at_mut(ell);
                axpy(&mut lo[0], -g[ell], &hi[0]);
            }
            for j in 1..ell {
                let (lo, hi) = u.split_at_mut(j);
                axpy(&mut lo[0], -g[j], &hi[0]);
                axpy(&mut x, g2[j], &r[j]);
                let (lo, hi) = r.split_at_mut(j);
                axpy(&mut lo[0], -g1[j], &hi[0]);
            }
            guard("omega", omega)?;
            if let Some(done) = check(system, &x, &r[0], tol, iterations, &mut best)? {
                if done {
                    return Ok(Outcome {
                        solution: x,
                        iterations,
                        residual: best.0,
                    });
                }
                if stalled(&mut confirmed, best.0) {
                    return Err(not_converged(iterations, best));
                }
                r[0] = residual(system, &x)?;
                continue 'restart;
            }
        }
    }
}

/// `None` while the recursive residual is above `tol`; otherwise whether the
/// true residual confirms convergence.
fn check<T: Real>(
    system: &SparseSystem<T>,
    x: &[T],
    r0: &[T],
    tol: T,
    iterations: usize,
    best: &mut (T, Vec<T>),
) -> Result<Option<bool>> {
    let rec = norm2(r0);
    if !rec.is_finite() {
        // Krylov space exhausted past the rounding floor; fall back on the best iterate.
        best.0 = norm2(&residual(system, &best.1)?);
        return Err(Error::NotConverged {
            iterations,
            residual: best.0.as_f64(),
            best: best.1.iter().map(|v| v.as_f64()).collect(),
        });
    }
    if rec < best.0 {
        best.0 = rec;
        best.1.copy_from_slice(x);
    }
    if rec > tol {
        return Ok(None);
    }
    let true_norm = norm2(&residual(system, x)?);
    best.0 = true_norm;
    best.1.copy_from_slice(x);
    Ok(Some(true_norm <= tol))
}

/// Records a failed confirmation; true when the true residual did not improve.
fn stalled<T: Real>(confirmed: &mut Option<T>, true_norm: T) -> bool {
    let stuck = matches!(*confirmed, Some(prev) if true_norm >= prev);
    *confirmed = Some(match *confirmed {
        Some(prev) if prev < true_norm => prev,
        _ => true_norm,
    });
    stuck
}

fn not_converged<T: Real>(iterations: usize, best: (T, Vec<T>)) -> Error {
    Error::NotConverged {
        iterations,
        residual: best.0.as_f64(),
        best: best.1.iter().map(|v| v.as_f64()).collect(),
    }
}
