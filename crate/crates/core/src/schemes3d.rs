//! Sixth-order compact 27-point schemes for `u_xx + u_yy + u_zz + K^2 u = f`.
//!
//! ```text
//! c1 S1 u + c2 S2 u + c3 dxx dyy dzz u + c4 u
//!     = d1 f + d2 S1 f + d3 S2 f + d4 lap f + d5 (dxx f_xx + dyy f_yy + dzz f_zz)
//! ```
//!
//! with `S1 = dxx + dyy + dzz` and `S2 = dxx dyy + dyy dzz + dxx dzz`. The
//! baseline scheme uses the same container with `c1 = 1`, `d2 = 0` and the
//! wavenumber-free `c3`, `d3`, `d5`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::Grid3D;
use crate::scalar::{Real, Scalar};
use crate::stencil::{self, CompactStencil, SourceBundle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind3D {
    NewSixth3D,
    BaselineSixth3D,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilCoeffs3D<T> {
    pub kind: SchemeKind3D,
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
    pub d4: T,
    pub d5: T,
    pub wavenumber: T,
    pub h: T,
}

/// Matrix-row weights (`h^2`-scaled, positive diagonal) by neighbour class.
/// They sum to `-h^2 c4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilWeights3D<T> {
    pub center: T,
    pub face: T,
    pub edge: T,
    pub corner: T,
    pub rhs: RhsWeights3D<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsWeights3D<T> {
    pub f_center: T,
    pub f_face: T,
    pub f_edge: T,
    pub d2_center: T,
    pub d2_axial: T,
}

pub fn coeffs_3d<T: Scalar>(kind: SchemeKind3D, wavenumber: T, h: T) -> StencilCoeffs3D<T> {
    let one = T::one();
    let n = |v: i64| T::from_int(v);
    let k2 = wavenumber * wavenumber;
    let h2 = h * h;
    let h4 = h2 * h2;
    let x = k2 * h2;
    let x2 = x * x;
    let zeroth = one - x / n(12) + x2 / n(360);
    let d4 = h2 * (one - x / n(30)) / n(12);
    match kind {
        SchemeKind3D::NewSixth3D => StencilCoeffs3D {
            kind,
            c1: one + x2 * x / n(20160),
            c2: h2 * (one + x / n(30) + x2 / n(840)) / n(6),
            c3: h4 * (one + n(17) * x / n(252)) / n(30),
            c4: k2 * zeroth,
            d1: zeroth,
            d2: k2 * k2 * h4 * h2 / n(20160),
            d3: h4 * (one + x / n(112)) / n(90),
            d4,
            d5: h4 * (one - x / n(56)) / n(360),
            wavenumber,
            h,
        },
        SchemeKind3D::BaselineSixth3D => StencilCoeffs3D {
            kind,
            c1: one,
            c2: h2 * (one + x / n(30)) / n(6),
            c3: h4 / n(30),
            c4: k2 * zeroth,
            d1: zeroth,
            d2: T::zero(),
            d3: h4 / n(90),
            d4,
            d5: h4 / n(360),
            wavenumber,
            h,
        },
    }
}

pub fn stencil_weights_3d<T: Scalar>(c: &StencilCoeffs3D<T>) -> StencilWeights3D<T> {
    let n = |v: i64| T::from_int(v);
    let h2 = c.h * c.h;
    let h4 = h2 * h2;
    let p = c.c2 / h2;
    let t = c.c3 / h4;
    let q2 = c.d2 / h2;
    let q3 = c.d3 / h4;
    StencilWeights3D {
        center: n(6) * c.c1 - n(12) * p + n(8) * t - c.c4 * h2,
        face: -(c.c1 - n(4) * p + n(4) * t),
        edge: -(p - n(2) * t),
        corner: -t,
        rhs: RhsWeights3D {
            f_center: c.d1 - n(6) * q2 + n(12) * q3,
            f_face: q2 - n(4) * q3,
            f_edge: q3,
            d2_center: c.d4 - n(2) * c.d5 / h2,
            d2_axial: c.d5 / h2,
        },
    }
}

impl<T: Scalar> StencilWeights3D<T> {
    pub fn compact(&self) -> CompactStencil<T> {
        let r = &self.rhs;
        CompactStencil {
            lhs: [self.center, self.face, self.edge, self.corner],
            f: [r.f_center, r.f_face, r.f_edge, T::zero()],
            d2_center: r.d2_center,
            d2_axial: r.d2_axial,
        }
    }
}

fn check_spacing<T: Real>(c: &StencilCoeffs3D<T>, grid: &Grid3D<T>) -> Result<()> {
    if (c.h - grid.h()).abs() > T::from_f64(1e-12) * grid.h() {
        return Err(Error::Config(format!(
            "coefficients built for h = {} but grid has h = {}",
            c.h,
            grid.h()
        )));
    }
    Ok(())
}

pub fn apply_operator_scaled_3d<T: Real>(
    c: &StencilCoeffs3D<T>,
    grid: &Grid3D<T>,
    u: &NodeField<T, 3>,
) -> Result<Vec<T>> {
    check_spacing(c, grid)?;
    stencil::apply_interior(&stencil_weights_3d(c).compact(), grid, u)
}

/// `L U = -(left side of the scheme)` at every interior node in row order.
pub fn apply_operator_3d<T: Real>(
    c: &StencilCoeffs3D<T>,
    grid: &Grid3D<T>,
    u: &NodeField<T, 3>,
) -> Result<Vec<T>> {
    let scaled = apply_operator_scaled_3d(c, grid, u)?;
    Ok(stencil::unscale(grid.h(), &scaled))
}

pub fn rhs_3d<T: Real>(
    c: &StencilCoeffs3D<T>,
    grid: &Grid3D<T>,
    src: &SourceBundle<T, 3>,
) -> Result<Vec<T>> {
    check_spacing(c, grid)?;
    stencil::rhs_interior(&stencil_weights_3d(c).compact(), grid, src)
}
