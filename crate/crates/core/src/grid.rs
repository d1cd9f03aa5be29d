//! Uniform tensor-product grids, faces and the lexicographic unknown ordering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which end of an axis a face sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Low,
    High,
}

/// An axis-aligned face of a box domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    pub axis: usize,
    pub side: Side,
}

impl Face {
    pub const fn new(axis: usize, side: Side) -> Self {
        Face { axis, side }
    }

    /// Position in the `2 * D` face list: low face of axis `a` is `2a`, high face `2a + 1`.
    pub fn index(&self) -> usize {
        2 * self.axis
            + match self.side {
                Side::Low => 0,
                Side::High => 1,
            }
    }

    pub fn from_index(index: usize) -> Self {
        let side = if index % 2 == 0 { Side::Low } else { Side::High };
        Face::new(index / 2, side)
    }

    pub fn all(dim: usize) -> impl Iterator<Item = Face> {
        (0..2 * dim).map(Face::from_index)
    }

    pub fn label(&self) -> String {
        let axis = ["x", "y", "z"].get(self.axis).copied().unwrap_or("?");
        match self.side {
            Side::Low => format!("{axis}-low"),
            Side::High => format!("{axis}-high"),
        }
    }
}

/// Uniform grid on a box with one spacing `h` shared by every axis.
///
/// Node `i` along axis `a` sits at `lo[a] + i * h`, `i = 0..=cells[a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T, const D: usize> {
    lo: [T; D],
    hi: [T; D],
    cells: [usize; D],
    h: T,
}

pub type Grid2D<T> = Grid<T, 2>;
pub type Grid3D<T> = Grid<T, 3>;

impl<T: Real, const D: usize> Grid<T, D> {
    /// Builds a grid from explicit per-axis cell counts. The counts must induce
    /// the same spacing on every axis.
    pub fn new(lo: [T; D], hi: [T; D], cells: [usize; D]) -> Result<Self> {
        for a in 0..D {
            if !(hi[a] > lo[a]) {
                return Err(Error::Config(format!("axis {a}: bounds are not ordered")));
            }
            if cells[a] < 2 {
                return Err(Error::Config(format!(
                    "axis {a}: need at least 2 cells, got {}",
                    cells[a]
                )));
            }
        }
        let h = (hi[0] - lo[0]) / T::from_usize(cells[0]);
        let slack = T::from_f64(64.0) * T::epsilon() * h;
        for a in 1..D {
            let ha = (hi[a] - lo[a]) / T::from_usize(cells[a]);
            if (ha - h).abs() > slack {
                return Err(Error::Config(format!(
                    "axis {a}: spacing {ha} differs from axis 0 spacing {h}"
                )));
            }
        }
        Ok(Grid { lo, hi, cells, h })
    }

    /// Builds a grid with `nx` cells along x; the other counts follow from the
    /// shared spacing and must come out integral.
    pub fn with_cells_along_x(lo: [T; D], hi: [T; D], nx: usize) -> Result<Self> {
        if nx == 0 {
            return Err(Error::Config("cell count must be positive".into()));
        }
        let h = (hi[0] - lo[0]) / T::from_usize(nx);
        let mut cells = [nx; D];
        for a in 1..D {
            let exact = (hi[a] - lo[a]) / h;
            let rounded = exact.round();
            if (exact - rounded).abs() > T::from_f64(1e-6) || rounded < T::one() {
                return Err(Error::Config(format!(
                    "axis {a}: length is not a whole number of cells at {nx} cells along x"
                )));
            }
            cells[a] = rounded.as_f64() as usize;
        }
        Self::new(lo, hi, cells)
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn lo(&self) -> [T; D] {
        self.lo
    }

    pub fn hi(&self) -> [T; D] {
        self.hi
    }

    pub fn cells(&self) -> [usize; D] {
        self.cells
    }

    /// Coordinate of node `i` on `axis`; `i` may address the ghost layer (`-1` or `cells + 1`).
    pub fn coordinate(&self, axis: usize, i: isize) -> T {
        self.lo[axis] + T::from_f64(i as f64) * self.h
    }

    pub fn point(&self, index: [isize; D]) -> [T; D] {
        let mut p = self.lo;
        for (a, x) in p.iter_mut().enumerate() {
            *x = self.coordinate(a, index[a]);
        }
        p
    }

    pub fn node_count(&self) -> usize {
        self.cells.iter().map(|&n| n + 1).product()
    }

    pub fn contains(&self, index: [isize; D]) -> bool {
        (0..D).all(|a| index[a] >= 0 && index[a] <= self.cells[a] as isize)
    }

    pub fn is_boundary(&self, index: [isize; D]) -> bool {
        self.contains(index)
            && (0..D).any(|a| index[a] == 0 || index[a] == self.cells[a] as isize)
    }

    /// Unknown ordering for a pure Dirichlet problem: all interior nodes.
    pub fn interior_map(&self) -> GridIndexMap<D> {
        GridIndexMap {
            lo: [1; D],
            hi: self.cells.map(|n| n - 1),
        }
    }

    /// Every node of the grid in lexicographic order, x fastest.
    pub fn nodes(&self) -> impl Iterator<Item = [isize; D]> + '_ {
        let total = self.node_count();
        let cells = self.cells;
        (0..total).map(move |mut r| {
            let mut idx = [0isize; D];
            for a in 0..D {
                let n = cells[a] + 1;
                idx[a] = (r % n) as isize;
                r /= n;
            }
            idx
        })
    }
}

/// `[0,..]` rectangle grid: `nx` cells along x, the y count follows from the shared spacing.
pub fn make_grid_2d<T: Real>(x: (T, T), y: (T, T), nx: usize) -> Result<Grid2D<T>> {
    Grid::with_cells_along_x([x.0, y.0], [x.1, y.1], nx)
}

pub fn make_grid_3d<T: Real>(x: (T, T), y: (T, T), z: (T, T), nx: usize) -> Result<Grid3D<T>> {
    Grid::with_cells_along_x([x.0, y.0, z.0], [x.1, y.1, z.1], nx)
}

/// Bijection between the unknown nodes of a grid (a box of node indices) and
/// 0-based matrix rows. Ordering is lexicographic with x fastest, then y, then z,
/// so row `r` here is row `r + 1` in 1-based block notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridIndexMap<const D: usize> {
    lo: [usize; D],
    hi: [usize; D],
}

impl<const D: usize> GridIndexMap<D> {
    /// Inclusive node ranges `lo[a]..=hi[a]` along each axis.
    pub fn new(lo: [usize; D], hi: [usize; D]) -> Self {
        GridIndexMap { lo, hi }
    }

    pub fn lo(&self) -> [usize; D] {
        self.lo
    }

    pub fn hi(&self) -> [usize; D] {
        self.hi
    }

    fn extent(&self, axis: usize) -> usize {
        self.hi[axis] + 1 - self.lo[axis]
    }

    pub fn len(&self) -> usize {
        (0..D).map(|a| self.extent(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row of `index`, or `None` if it is not an unknown.
    pub fn row(&self, index: [isize; D]) -> Option<usize> {
        let mut row = 0;
        let mut stride = 1;
        for a in 0..D {
            let i = index[a];
            if i < self.lo[a] as isize || i > self.hi[a] as isize {
                return None;
            }
            row += (i as usize - self.lo[a]) * stride;
            stride *= self.extent(a);
        }
        Some(row)
    }

    pub fn flat_index(&self, index: [isize; D]) -> Result<usize> {
        self.row(index).ok_or_else(|| Error::OutOfRange {
            index: index.to_vec(),
        })
    }

    /// Node index of `row`.
    pub fn node(&self, row: usize) -> Result<[isize; D]> {
        if row >= self.len() {
            return Err(Error::OutOfRange {
                index: vec![row as isize],
            });
        }
        let mut r = row;
        let mut idx = [0isize; D];
        for a in 0..D {
            let n = self.extent(a);
            idx[a] = (self.lo[a] + r % n) as isize;
            r /= n;
        }
        Ok(idx)
    }

    pub fn nodes(&self) -> impl Iterator<Item = [isize; D]> + '_ {
        (0..self.len()).map(move |r| self.node(r).expect("row in range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_four_cells() {
        let g = make_grid_2d((0.0, 1.0), (0.0, 1.0), 4).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.interior_map().len(), 9);
    }

    #[test]
    fn half_height_rectangle_has_half_the_rows() {
        let g = make_grid_2d((0.0, 1.0), (0.0, 0.5), 16).unwrap();
        assert_eq!(g.cells(), [16, 8]);
        assert_eq!(g.coordinate(1, 8), 0.5);
    }

    #[test]
    fn pi_square() {
        let pi = std::f64::consts::PI;
        let g = make_grid_2d((0.0, pi), (0.0, pi), 8).unwrap();
        assert_eq!(g.h(), pi / 8.0);
        assert_eq!(g.cells(), [8, 8]);
    }

    #[test]
    fn mismatched_spacing_is_rejected() {
        let err = Grid::new([0.0, 0.0], [1.0, 1.0], [4, 5]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(make_grid_2d((0.0, 1.0), (0.0, 0.3), 4).is_err());
        assert!(Grid::new([0.0, 0.0], [1.0, 1.0], [1, 1]).is_err());
    }

    #[test]
    fn coordinates_are_not_accumulated() {
        let g = make_grid_2d((0.0, 1.0), (0.0, 1.0), 16).unwrap();
        for i in 1..=16 {
            assert_eq!(g.coordinate(0, i) - g.coordinate(0, i - 1), g.h());
        }
        assert_eq!(g.coordinate(0, -1), -g.h());
    }

    #[test]
    fn lexicographic_rows() {
        let g = make_grid_2d((0.0, 1.0), (0.0, 1.0), 4).unwrap();
        let m = g.interior_map();
        // 1-based rows 1, 9 and 8.
        assert_eq!(m.flat_index([1, 1]).unwrap() + 1, 1);
        assert_eq!(m.flat_index([3, 3]).unwrap() + 1, 9);
        assert_eq!(m.flat_index([2, 3]).unwrap() + 1, 8);
        assert!(matches!(m.flat_index([0, 2]), Err(Error::OutOfRange { .. })));
        assert!(m.flat_index([4, 1]).is_err());
        assert!(m.node(9).is_err());
    }

    #[test]
    fn index_map_round_trip_exhaustive() {
        for n in 2..=16 {
            let g = make_grid_2d((0.0, 1.0), (0.0, 1.0), n).unwrap();
            let m = g.interior_map();
            for r in 0..m.len() {
                assert_eq!(m.flat_index(m.node(r).unwrap()).unwrap(), r);
            }
            for j in 1..n as isize {
                for i in 1..n as isize {
                    assert_eq!(m.node(m.flat_index([i, j]).unwrap()).unwrap(), [i, j]);
                }
            }
        }
        let g = make_grid_3d((0.0, 1.0), (0.0, 1.0), (0.0, 0.5), 8).unwrap();
        let m = g.interior_map();
        assert_eq!(m.len(), 7 * 7 * 3);
        for r in 0..m.len() {
            assert_eq!(m.flat_index(m.node(r).unwrap()).unwrap(), r);
        }
    }

    #[test]
    fn faces_enumerate_in_order() {
        let faces: Vec<_> = Face::all(3).collect();
        assert_eq!(faces.len(), 6);
        for (k, f) in faces.iter().enumerate() {
            assert_eq!(f.index(), k);
        }
        assert_eq!(Face::new(1, Side::High).label(), "y-high");
    }
}
