//! Structural checks on assembled matrices: strong connectivity, signs and
//! row sums, monotonicity, the discrete maximum principle and the `1/8`
//! regularity bound on the unit square.
//!
//! The maximum principle and regularity bound only hold for small `Kh`; they
//! are always computed when the system is small enough, but only count
//! towards [`MatrixPropertyReport::passed`] when `Kh <= 0.2`.

use std::collections::BTreeMap;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assembly::Assembled;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::DenseLu;
use crate::sparse::CsrMatrix;
use crate::stencil::unscale;

/// Largest system for which dense checks are run.
pub const DENSE_CHECK_LIMIT: usize = 4096;
/// `Kh` up to which the maximum principle and regularity bound are asserted.
pub const SMALL_KH: f64 = 0.2;

const ULPS: f64 = 4.0;

/// True iff the directed graph on the nonzero off-diagonal entries has a
/// single strongly connected component.
pub fn check_strong_connectivity<T: Real>(matrix: &CsrMatrix<T>) -> bool {
    let n = matrix.nrows();
    if n == 0 {
        return false;
    }
    let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for r in 0..n {
        for (c, v) in matrix.row(r) {
            if c != r && v != T::zero() {
                g.add_edge(nodes[r], nodes[c], ());
            }
        }
    }
    kosaraju_scc(&g).len() == 1
}

/// Geometric class of a row: how many axes have a Dirichlet neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowClass {
    Interior,
    /// One boundary-adjacent axis in 3D.
    Face,
    Edge,
    Corner,
}

impl RowClass {
    fn from_count(count: usize, dim: usize) -> Self {
        match (count, dim) {
            (0, _) => RowClass::Interior,
            (1, 2) | (2, 3) => RowClass::Edge,
            (1, 3) => RowClass::Face,
            _ => RowClass::Corner,
        }
    }

    /// Row sum of the 2D Dirichlet matrix at `Kh = 0`.
    pub fn limit_sum_2d(self) -> Option<f64> {
        match self {
            RowClass::Corner => Some(11.0 / 6.0),
            RowClass::Edge => Some(1.0),
            RowClass::Interior => Some(0.0),
            RowClass::Face => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowSum {
    pub row: usize,
    pub class: RowClass,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignRowSums {
    pub offdiag_nonpositive: bool,
    pub row_sums: Vec<RowSum>,
    pub class_counts: BTreeMap<RowClass, usize>,
    /// Rows whose sum misses the limit value; empty unless `asserted`.
    pub violations: Vec<usize>,
    /// Whether the sums were compared with the `Kh = 0` values.
    pub asserted: bool,
}

fn classes<T: Real, const D: usize>(assembled: &Assembled<T, D>) -> Vec<RowClass> {
    assembled
        .unknowns
        .nodes()
        .map(|p| {
            let count = (0..D)
                .filter(|&axis| {
                    [-1, 1].iter().any(|&s| {
                        let mut q = p;
                        q[axis] += s;
                        assembled.unknowns.row(q).is_none()
                    })
                })
                .count();
            RowClass::from_count(count, D)
        })
        .collect()
}

fn dirichlet_only<T: Real, const D: usize>(assembled: &Assembled<T, D>) -> bool {
    assembled.unknowns.len() == assembled.grid.interior_map().len()
}

/// Off-diagonal signs and classified row sums. With `limit` set on a 2D
/// Dirichlet assembly the sums are compared with `{11/6, 1, 0}` to 4 ulp of
/// the row's largest entry; otherwise they are only reported.
pub fn check_sign_and_rowsums<T: Real, const D: usize>(assembled: &Assembled<T, D>, limit: bool) -> SignRowSums {
    let a = &assembled.system.matrix;
    let asserted = limit && D == 2 && dirichlet_only(assembled);
    let mut offdiag_nonpositive = true;
    let mut row_sums = Vec::with_capacity(a.nrows());
    let mut class_counts = BTreeMap::new();
    let mut violations = Vec::new();
    for (r, class) in classes(assembled).into_iter().enumerate() {
        let mut sum = T::zero();
        let mut scale = T::zero();
        for (c, v) in a.row(r) {
            if c != r && v > T::zero() {
                offdiag_nonpositive = false;
            }
            sum += v;
            scale = scale.max(v.abs());
        }
        let sum = sum.as_f64();
        if asserted {
            let expected = class.limit_sum_2d().unwrap_or(f64::NAN);
            let tol = ULPS * f64::EPSILON * expected.abs().max(scale.as_f64());
            if !((sum - expected).abs() <= tol) {
                violations.push(r);
            }
        }
        *class_counts.entry(class).or_insert(0) += 1;
        row_sums.push(RowSum { row: r, class, sum });
    }
    SignRowSums {
        offdiag_nonpositive,
        row_sums,
        class_counts,
        violations,
        asserted,
    }
}

fn dense_lu<T: Real>(matrix: &CsrMatrix<T>) -> Result<DenseLu<T>> {
    let n = matrix.nrows();
    if n > DENSE_CHECK_LIMIT {
        return Err(Error::Config(format!(
            "dense checks need at most {DENSE_CHECK_LIMIT} unknowns, got {n}"
        )));
    }
    DenseLu::factor(&matrix.to_dense())
}

fn monotone_from<T: Real>(lu: &DenseLu<T>) -> Result<bool> {
    let inv = lu.inverse()?;
    let max = inv.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
    let floor = -T::from_f64(1e-12) * max;
    Ok(inv.iter().flatten().all(|&v| v >= floor))
}

/// `A^{-1} >= -1e-12 max|A^{-1}|` entrywise, by dense inversion.
pub fn check_monotone<T: Real>(matrix: &CsrMatrix<T>) -> Result<bool> {
    monotone_from(&dense_lu(matrix)?)
}

fn max_principle_from<T: Real>(lu: &DenseLu<T>, n: usize, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = T::from_f64(1e-12);
    for _ in 0..trials {
        // A U = -|noise| is a nonpositive load of the positive-diagonal form;
        // with zero boundary values the solution may not rise above zero.
        let load: Vec<T> = (0..n).map(|_| -T::from_f64(rng.gen::<f64>())).collect();
        let u = lu.solve(&load)?;
        if u.iter().any(|&v| v > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves `A U = -|noise|` for `trials` seeded loads and checks that no
/// value exceeds the zero boundary by more than `1e-12`.
pub fn check_max_principle<T: Real>(matrix: &CsrMatrix<T>, trials: usize, seed: u64) -> Result<bool> {
    max_principle_from(&dense_lu(matrix)?, matrix.nrows(), trials, seed)
}

/// `||U||_inf <= ||L U||_inf / 8 + 1e-10` for `U = A^{-1} F`.
pub fn regularity_holds<T: Real>(matrix: &CsrMatrix<T>, h: T, u: &[T]) -> Result<bool> {
    let lu_u = unscale(h, &matrix.matvec(u)?);
    let norm = |v: &[T]| v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    Ok(norm(u) <= norm(&lu_u) / T::from_f64(8.0) + T::from_f64(1e-10))
}

fn regularity_from<T: Real>(lu: &DenseLu<T>, matrix: &CsrMatrix<T>, h: T, trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let load: Vec<T> = (0..matrix.nrows())
            .map(|_| T::from_f64(rng.gen_range(-1.0..1.0)))
            .collect();
        if !regularity_holds(matrix, h, &lu.solve(&load)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Regularity bound for `trials` seeded loads uniform in `[-1, 1]`.
pub fn check_regularity_bound<T: Real, const D: usize>(
    assembled: &Assembled<T, D>,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let a = &assembled.system.matrix;
    regularity_from(&dense_lu(a)?, a, assembled.grid.h(), trials, seed)
}

/// Everything [`analyze`] found. Serializes with alphabetical keys.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixPropertyReport {
    pub unknowns: usize,
    pub kh: f64,
    pub strongly_connected: bool,
    pub offdiag_nonpositive: bool,
    pub row_sums: Vec<RowSum>,
    pub row_class_counts: BTreeMap<RowClass, usize>,
    pub row_sums_asserted: bool,
    pub max_row_sum_violations: Vec<usize>,
    /// `None` above [`DENSE_CHECK_LIMIT`] unknowns.
    pub monotone_verified: Option<bool>,
    pub max_principle: Option<bool>,
    pub max_principle_asserted: bool,
    pub regularity_bound: Option<bool>,
    pub regularity_asserted: bool,
    pub trials: usize,
}

impl MatrixPropertyReport {
    /// All checks that apply at this `Kh` and size hold.
    pub fn passed(&self) -> bool {
        let opt = |v: Option<bool>, asserted: bool| !asserted || v == Some(true);
        self.strongly_connected
            && (!self.row_sums_asserted || (self.offdiag_nonpositive && self.max_row_sum_violations.is_empty()))
            && opt(self.max_principle, self.max_principle_asserted)
            && opt(self.regularity_bound, self.regularity_asserted)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report fields are plain data")
    }
}

/// Runs every check on `assembled`. Row sums are asserted when the wave
/// number is zero; the maximum principle when `Kh <= 0.2`; the regularity
/// bound additionally needs a 2D Dirichlet unit-square assembly.
pub fn analyze<T: Real, const D: usize>(
    assembled: &Assembled<T, D>,
    wavenumber: T,
    trials: usize,
    seed: u64,
) -> Result<MatrixPropertyReport> {
    let a = &assembled.system.matrix;
    let g = &assembled.grid;
    let kh = (wavenumber * g.h()).as_f64();
    let signs = check_sign_and_rowsums(assembled, wavenumber == T::zero());
    let small = kh <= SMALL_KH;
    let unit_square = D == 2
        && dirichlet_only(assembled)
        && g.lo().iter().all(|&v| v == T::zero())
        && g.hi().iter().all(|&v| v == T::one());
    let (monotone, max_principle, regularity) = if a.nrows() <= DENSE_CHECK_LIMIT {
        let lu = dense_lu(a)?;
        (
            Some(monotone_from(&lu)?),
            Some(max_principle_from(&lu, a.nrows(), trials, seed)?),
            Some(regularity_from(&lu, a, g.h(), trials, seed.wrapping_add(1))?),
        )
    } else {
        (None, None, None)
    };
    Ok(MatrixPropertyReport {
        unknowns: a.nrows(),
        kh,
        strongly_connected: check_strong_connectivity(a),
        offdiag_nonpositive: signs.offdiag_nonpositive,
        row_sums: signs.row_sums,
        row_class_counts: signs.class_counts,
        row_sums_asserted: signs.asserted,
        max_row_sum_violations: signs.violations,
        monotone_verified: monotone,
        max_principle,
        max_principle_asserted: small && max_principle.is_some(),
        regularity_bound: regularity,
        regularity_asserted: small && unit_square && regularity.is_some(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_2d;
    use crate::problems::zero_problem;
    use crate::schemes2d::{coeffs_2d, SchemeKind2D};

    fn zero_2d(n: usize, k: f64) -> Assembled<f64, 2> {
        let p = zero_problem::<f64, 2>(k);
        let g = p.grid(n).unwrap();
        assemble_2d(&g, &coeffs_2d(SchemeKind2D::NewSixth2D, k, g.h()), &p).unwrap()
    }

    #[test]
    fn connectivity_of_trivial_matrices() {
        let diag = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!(!check_strong_connectivity(&diag));
        let blocks = CsrMatrix::from_dense(&[
            vec![2.0, -1.0, 0.0, 0.0],
            vec![-1.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, 2.0, -1.0],
            vec![0.0, 0.0, -1.0, 2.0],
        ]).unwrap();
        assert!(!check_strong_connectivity(&blocks));
        // one-way coupling is connected but not strongly
        let one_way = CsrMatrix::from_dense(&[vec![2.0, -1.0], vec![0.0, 2.0]]).unwrap();
        assert!(!check_strong_connectivity(&one_way));
        for n in [4, 8, 16] {
            assert!(check_strong_connectivity(&zero_2d(n, 0.0).system.matrix));
        }
    }

    #[test]
    fn row_class_partition() {
        for n in [4usize, 6, 8, 16] {
            let s = check_sign_and_rowsums(&zero_2d(n, 0.0), true);
            assert!(s.asserted && s.offdiag_nonpositive && s.violations.is_empty());
            assert_eq!(s.class_counts[&RowClass::Corner], 4);
            assert_eq!(s.class_counts.get(&RowClass::Edge).copied().unwrap_or(0), 4 * (n - 3));
            assert_eq!(s.class_counts[&RowClass::Interior], (n - 3) * (n - 3));
        }
    }

    #[test]
    fn positive_kh_rowsums_are_report_only() {
        let s = check_sign_and_rowsums(&zero_2d(8, 4.0), false);
        assert!(!s.asserted && s.violations.is_empty());
        assert_eq!(s.row_sums.len(), 49);
    }

    #[test]
    fn monotone_small_grids() {
        assert!(check_monotone(&zero_2d(4, 0.0).system.matrix).unwrap());
        assert!(check_monotone(&zero_2d(8, 1.0).system.matrix).unwrap());
        let mut dense = zero_2d(4, 0.0).system.matrix.to_dense();
        dense[0][8] = 3.0;
        dense[8][0] = 3.0;
        assert!(!check_monotone(&CsrMatrix::from_dense(&dense).unwrap()).unwrap());
    }

    #[test]
    fn max_principle_and_constant_load() {
        let a = zero_2d(8, 1.0);
        assert!(check_max_principle(&a.system.matrix, 100, 7).unwrap());
        let u = a.system.matrix.to_dense();
        let lu = DenseLu::factor(&u).unwrap();
        let sol = lu.solve(&vec![-1.0; a.system.n()]).unwrap();
        assert!(sol.iter().all(|&v| v <= 1e-12));
        assert!(check_max_principle(&a.system.matrix, 0, 0).unwrap());
    }

    #[test]
    fn regularity_bound_random_and_concentrated() {
        let a = zero_2d(16, 1.0);
        assert!(check_regularity_bound(&a, 100, 11).unwrap());
        let lu = DenseLu::factor(&a.system.matrix.to_dense()).unwrap();
        let mut load = vec![0.0; a.system.n()];
        load[a.unknowns.row([8, 8]).unwrap()] = 1.0;
        let u = lu.solve(&load).unwrap();
        assert!(regularity_holds(&a.system.matrix, a.grid.h(), &u).unwrap());
        assert!(regularity_holds(&a.system.matrix, a.grid.h(), &vec![0.0; a.system.n()]).unwrap());
    }

    #[test]
    fn report_json_keys_are_sorted() {
        let r = analyze(&zero_2d(4, 0.0), 0.0, 5, 1).unwrap();
        assert!(r.passed());
        let json = r.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.contains("\"strongly_connected\":true"));
    }

    #[test]
    fn large_kh_is_report_only() {
        let r = analyze(&zero_2d(8, 20.0), 20.0, 3, 1).unwrap();
        assert!(!r.max_principle_asserted && !r.regularity_asserted && !r.row_sums_asserted);
        assert!(r.monotone_verified.is_some());
    }
}
