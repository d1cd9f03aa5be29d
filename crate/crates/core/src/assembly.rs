//! Assembly of `A U = r` in the `h^2`-scaled, positive-diagonal orientation.
//!
//! Unknowns are ordered lexicographically with x fastest. Known Dirichlet
//! neighbours are moved to the right side; Neumann ghosts are eliminated.

use crate::boundary::{dirichlet_values, eliminate_ghosts, unknown_map, GhostLayer, GhostSystem};
use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::{Grid, Grid2D, Grid3D, GridIndexMap};
use crate::problems::{source_bundle, Problem, Problem2D, Problem3D};
use crate::scalar::Real;
use crate::schemes2d::{stencil_weights_2d, StencilCoeffs2D};
use crate::schemes3d::{stencil_weights_3d, StencilCoeffs3D};
use crate::sparse::SparseSystem;
use crate::stencil::{class_of, offsets, shifted, CompactStencil};

/// An assembled system together with what is needed to map its solution
/// back onto the grid.
#[derive(Clone, Debug)]
pub struct Assembled<T, const D: usize> {
    pub system: SparseSystem<T>,
    pub unknowns: GridIndexMap<D>,
    /// Dirichlet values at known nodes, zero at unknowns.
    pub known: NodeField<T, D>,
    pub grid: Grid<T, D>,
}

impl<T: Real, const D: usize> Assembled<T, D> {
    /// Grid function with the known boundary values and `solution` at the unknowns.
    pub fn full_field(&self, solution: &[T]) -> Result<NodeField<T, D>> {
        if solution.len() != self.unknowns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.unknowns.len(),
                actual: solution.len(),
            });
        }
        let mut field = self.known.clone();
        for (node, &v) in self.unknowns.nodes().zip(solution) {
            field.set(node, v);
        }
        Ok(field)
    }

    /// Values of `field` at the unknowns, in row order.
    pub fn gather(&self, field: &NodeField<T, D>) -> Vec<T> {
        self.unknowns.nodes().map(|n| field.get(n)).collect()
    }
}

/// Assembles any compact stencil. The wavenumber used in the Neumann ghost
/// relation is the problem's.
pub fn assemble<T: Real, const D: usize>(
    grid: &Grid<T, D>,
    stencil: &CompactStencil<T>,
    problem: &Problem<T, D>,
) -> Result<Assembled<T, D>> {
    let map = unknown_map(problem, grid)?;
    let known = dirichlet_values(problem, grid);
    let src = source_bundle(problem, grid);
    let mut ghosts = GhostLayer::new(problem, grid)?;
    let offs = offsets::<D>();
    let h2 = grid.h() * grid.h();
    let n = map.len();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for p in map.nodes() {
        let mut row = Vec::with_capacity(offs.len());
        let mut b = -h2 * stencil.rhs_at(&offs, &src, p);
        for &o in &offs {
            let w = stencil.lhs[class_of(o)];
            let q = shifted(p, o);
            if let Some(c) = map.row(q) {
                row.push((c, w));
            } else if grid.contains(q) {
                b -= w * known.get(q);
            } else {
                row.push((ghosts.column(q, grid, &map, &known)?, w));
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let rules = ghosts.into_rules();
    let raw = GhostSystem {
        n,
        ghosts: rules.len(),
        rows,
        rhs,
    };
    Ok(Assembled {
        system: eliminate_ghosts(raw, &rules)?,
        unknowns: map,
        known,
        grid: grid.clone(),
    })
}

fn check_h<T: Real>(coeff_h: T, grid_h: T) -> Result<()> {
    if (coeff_h - grid_h).abs() > T::from_f64(1e-12) * grid_h {
        return Err(Error::Config(format!(
            "coefficients built for h = {coeff_h} but grid has h = {grid_h}"
        )));
    }
    Ok(())
}

pub fn assemble_2d<T: Real>(
    grid: &Grid2D<T>,
    coeffs: &StencilCoeffs2D<T>,
    problem: &Problem2D<T>,
) -> Result<Assembled<T, 2>> {
    check_h(coeffs.h, grid.h())?;
    assemble(grid, &stencil_weights_2d(coeffs).compact(), problem)
}

pub fn assemble_3d<T: Real>(
    grid: &Grid3D<T>,
    coeffs: &StencilCoeffs3D<T>,
    problem: &Problem3D<T>,
) -> Result<Assembled<T, 3>> {
    check_h(coeffs.h, grid.h())?;
    assemble(grid, &stencil_weights_3d(coeffs).compact(), problem)
}
