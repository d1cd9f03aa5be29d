//! Dimension-generic evaluation of compact 3^D-point stencils.
//!
//! Both the 9-point and the 27-point schemes are symmetric under axis
//! permutations and reflections, so every weight depends only on the number of
//! non-zero components of the offset (its *class*): 0 = centre, 1 = face
//! neighbour, 2 = edge neighbour (the 2D corner), 3 = 3D corner.

use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::Grid;
use crate::scalar::Real;

/// Class weights of a compact scheme.
///
/// `lhs` is the left operator multiplied through by `h^2` with a positive
/// diagonal (the orientation of the assembled matrix). `f`, `d2_center` and
/// `d2_axial` describe the right-hand-side operator before any scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactStencil<T> {
    pub lhs: [T; 4],
    pub f: [T; 4],
    pub d2_center: T,
    pub d2_axial: T,
}

/// The 3^D offsets in lexicographic order with x fastest. For an interior row
/// this is also ascending column order in the assembled matrix.
pub fn offsets<const D: usize>() -> Vec<[isize; D]> {
    let total = 3usize.pow(D as u32);
    (0..total)
        .map(|mut r| {
            let mut o = [0isize; D];
            for x in o.iter_mut() {
                *x = (r % 3) as isize - 1;
                r /= 3;
            }
            o
        })
        .collect()
}

pub fn class_of<const D: usize>(offset: [isize; D]) -> usize {
    offset.iter().filter(|&&o| o != 0).count()
}

pub fn shifted<const D: usize>(index: [isize; D], offset: [isize; D]) -> [isize; D] {
    let mut p = index;
    for a in 0..D {
        p[a] += offset[a];
    }
    p
}

/// Sampled source data: `f` and its analytic second derivative along each axis.
#[derive(Clone, Debug)]
pub struct SourceBundle<T, const D: usize> {
    pub f: NodeField<T, D>,
    pub d2: Vec<NodeField<T, D>>,
}

impl<T: Real, const D: usize> SourceBundle<T, D> {
    /// Fails unless a second-derivative field is supplied for every axis.
    pub fn new(f: NodeField<T, D>, d2: Vec<NodeField<T, D>>) -> Result<Self> {
        if d2.len() != D {
            return Err(Error::Config(format!(
                "source bundle needs {D} second-derivative fields, got {}",
                d2.len()
            )));
        }
        if d2.iter().any(|g| g.cells() != f.cells()) {
            return Err(Error::Config("source derivative fields differ in shape".into()));
        }
        Ok(SourceBundle { f, d2 })
    }

    pub fn check_shape(&self, grid: &Grid<T, D>) -> Result<()> {
        self.f.check_shape(grid)
    }
}

impl<T: Real> CompactStencil<T> {
    /// `h^2`-scaled left operator at `index` (the matrix-row orientation).
    pub fn apply_scaled_at<const D: usize>(
        &self,
        offsets: &[[isize; D]],
        u: &NodeField<T, D>,
        index: [isize; D],
    ) -> T {
        let mut acc = T::zero();
        for &o in offsets {
            acc += self.lhs[class_of(o)] * u.get(shifted(index, o));
        }
        acc
    }

    /// Right-hand-side operator at `index`, unscaled, in the orientation of the
    /// scheme as written (`... = beta_1 f + ...`).
    pub fn rhs_at<const D: usize>(
        &self,
        offsets: &[[isize; D]],
        src: &SourceBundle<T, D>,
        index: [isize; D],
    ) -> T {
        let mut acc = T::zero();
        for &o in offsets {
            acc += self.f[class_of(o)] * src.f.get(shifted(index, o));
        }
        for (a, d2) in src.d2.iter().enumerate() {
            let mut lo = index;
            let mut hi = index;
            lo[a] -= 1;
            hi[a] += 1;
            acc += self.d2_center * d2.get(index) + self.d2_axial * (d2.get(lo) + d2.get(hi));
        }
        acc
    }
}

/// Converts `h^2`-scaled matrix-orientation values to the unscaled operator
/// (`L U` with `L = -(scheme left side)`). All sign/scale bookkeeping between
/// the assembled matrix and the difference operator goes through here.
pub fn unscale<T: Real>(h: T, scaled: &[T]) -> Vec<T> {
    let h2 = h * h;
    scaled.iter().map(|&v| v / h2).collect()
}

/// Inverse of [`unscale`].
pub fn scale<T: Real>(h: T, values: &[T]) -> Vec<T> {
    let h2 = h * h;
    values.iter().map(|&v| v * h2).collect()
}

/// Applies the `h^2`-scaled operator at every interior node, in row order.
pub(crate) fn apply_interior<T: Real, const D: usize>(
    stencil: &CompactStencil<T>,
    grid: &Grid<T, D>,
    u: &NodeField<T, D>,
) -> Result<Vec<T>> {
    u.check_shape(grid)?;
    let offs = offsets::<D>();
    Ok(grid
        .interior_map()
        .nodes()
        .map(|p| stencil.apply_scaled_at(&offs, u, p))
        .collect())
}

pub(crate) fn rhs_interior<T: Real, const D: usize>(
    stencil: &CompactStencil<T>,
    grid: &Grid<T, D>,
    src: &SourceBundle<T, D>,
) -> Result<Vec<T>> {
    src.check_shape(grid)?;
    let offs = offsets::<D>();
    Ok(grid
        .interior_map()
        .nodes()
        .map(|p| stencil.rhs_at(&offs, src, p))
        .collect())
}
