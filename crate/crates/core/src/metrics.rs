//! Error norms, observed orders and the pollution grid rule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(max |u - U|, (1/n) sqrt(sum |u - U|^2))`, `n` being the number of cells
/// along x. The same `1/n` prefactor is used in 3D.
pub fn error_norms<T: Real>(numeric: &[T], exact: &[T], n: usize) -> Result<(T, T)> {
    if numeric.len() != exact.len() {
        return Err(Error::DimensionMismatch {
            expected: exact.len(),
            actual: numeric.len(),
        });
    }
    let mut max = T::zero();
    let mut sum = T::zero();
    for (&a, &b) in numeric.iter().zip(exact) {
        let e = (a - b).abs();
        max = max.max(e);
        sum += e * e;
    }
    Ok((max, sum.sqrt() / T::from_usize(n)))
}

/// `log2(coarse / fine)`.
pub fn observed_order<T: Real>(err_coarse: T, err_fine: T) -> Result<T> {
    if !(err_coarse > T::zero() && err_fine > T::zero()) {
        return Err(Error::Parameter("observed order needs two positive errors".into()));
    }
    Ok((err_coarse / err_fine).log2())
}

pub fn error_ratio<T: Real>(new_err: T, baseline_err: T) -> Result<T> {
    if !(baseline_err > T::zero()) {
        return Err(Error::Parameter("baseline error must be positive".into()));
    }
    Ok(new_err / baseline_err)
}

/// `N = round(C K^((p+1)/p))` with `C` fixed by the base pair `(base_n, base_k)`.
pub fn pollution_grid(k: f64, base_n: usize, base_k: f64, p: u32) -> Result<usize> {
    if !(k > 0.0 && base_k > 0.0) || base_n == 0 || p == 0 {
        return Err(Error::Parameter("pollution rule needs positive K, base N, base K and order".into()));
    }
    let e = (p as f64 + 1.0) / p as f64;
    let c = base_n as f64 / base_k.powf(e);
    Ok((c * k.powf(e)).round() as usize)
}

/// C-style scientific notation with `digits` significant digits, e.g.
/// `1.320e-04`.
pub fn format_sci(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Two-decimal order, `-Inf` when undefined.
pub fn format_order(theta: Option<f64>) -> String {
    match theta {
        Some(t) => format!("{t:.2}"),
        None => "-Inf".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub inv_h: usize,
    pub err_max: f64,
    pub err_l2: f64,
    /// `None` on the first row.
    pub theta_inf: Option<f64>,
    pub iterations: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub scheme: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Builds rows from `(inv_h, err_max, err_l2, iterations, seconds)`
    /// sorted by `inv_h`, filling in the observed orders.
    pub fn from_runs(problem: &str, scheme: &str, mut runs: Vec<(usize, f64, f64, usize, f64)>) -> Result<Self> {
        runs.sort_by_key(|r| r.0);
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(runs.len());
        for (inv_h, err_max, err_l2, iterations, seconds) in runs {
            let theta_inf = match rows.last() {
                Some(prev) => Some(observed_order(prev.err_max, err_max)?),
                None => None,
            };
            rows.push(ConvergenceRow {
                inv_h,
                err_max,
                err_l2,
                theta_inf,
                iterations,
                seconds,
            });
        }
        Ok(ConvergenceReport {
            problem: problem.into(),
            scheme: scheme.into(),
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("inv_h,err_max,err_l2,theta_inf,iters,seconds\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.3}\n",
                r.inv_h,
                format_sci(r.err_max, 4),
                format_sci(r.err_l2, 4),
                format_order(r.theta_inf),
                r.iterations,
                r.seconds
            ));
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} / {}\n", self.problem, self.scheme);
        out.push_str(&format!(
            "{:>6}  {:>10}  {:>10}  {:>6}  {:>7}  {:>9}\n",
            "1/h", "err_max", "err_l2", "theta", "iters", "seconds"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6}  {:>10}  {:>10}  {:>6}  {:>7}  {:>9.3}\n",
                r.inv_h,
                format_sci(r.err_max, 3),
                format_sci(r.err_l2, 3),
                format_order(r.theta_inf),
                r.iterations,
                r.seconds
            ));
        }
        out
    }
}
