//! Node-centred grid functions with a one-node ghost layer on every side.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Real;

/// Values at every grid node plus one ghost layer, indexed by signed node
/// indices `-1..=cells[a] + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeField<T, const D: usize> {
    cells: [usize; D],
    data: Vec<T>,
}

pub type NodeField2<T> = NodeField<T, 2>;
pub type NodeField3<T> = NodeField<T, 3>;

impl<T: Real, const D: usize> NodeField<T, D> {
    pub fn zeros(grid: &Grid<T, D>) -> Self {
        Self::filled(grid, T::zero())
    }

    pub fn filled(grid: &Grid<T, D>, value: T) -> Self {
        let cells = grid.cells();
        let len = cells.iter().map(|&n| n + 3).product();
        NodeField {
            cells,
            data: vec![value; len],
        }
    }

    /// Samples `f` at every node, ghost layer included.
    pub fn from_fn(grid: &Grid<T, D>, mut f: impl FnMut([T; D]) -> T) -> Self {
        let mut field = Self::zeros(grid);
        let cells = field.cells;
        for (k, slot) in field.data.iter_mut().enumerate() {
            let mut r = k;
            let mut idx = [0isize; D];
            for a in 0..D {
                let n = cells[a] + 3;
                idx[a] = (r % n) as isize - 1;
                r /= n;
            }
            *slot = f(grid.point(idx));
        }
        field
    }

    pub fn cells(&self) -> [usize; D] {
        self.cells
    }

    fn offset(&self, index: [isize; D]) -> usize {
        let mut off = 0;
        let mut stride = 1;
        for a in 0..D {
            let i = index[a] + 1;
            debug_assert!(i >= 0 && i <= self.cells[a] as isize + 2, "index {index:?} outside halo");
            off += i as usize * stride;
            stride *= self.cells[a] + 3;
        }
        off
    }

    pub fn get(&self, index: [isize; D]) -> T {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: [isize; D], value: T) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    pub fn check_shape(&self, grid: &Grid<T, D>) -> Result<()> {
        if self.cells != grid.cells() {
            let expected = grid.cells().iter().map(|&n| n + 3).product();
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.data.len(),
            });
        }
        Ok(())
    }

    /// Values at the grid nodes only (no ghost layer), x fastest.
    pub fn node_values(&self) -> Vec<T> {
        let cells = self.cells;
        let total: usize = cells.iter().map(|&n| n + 1).product();
        (0..total)
            .map(|mut r| {
                let mut idx = [0isize; D];
                for a in 0..D {
                    let n = cells[a] + 1;
                    idx[a] = (r % n) as isize;
                    r /= n;
                }
                self.get(idx)
            })
            .collect()
    }
}
