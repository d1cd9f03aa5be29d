//! Sixth-order compact 9-point schemes for `u_xx + u_yy + K^2 u = f`.
//!
//! Two schemes share one coefficient container:
//!
//! ```text
//! a1 (dxx + dyy) u + a2 dxx dyy u + K^2 a3 u
//!     = b1 f + b2 (dxx + dyy) f + b3 dxx dyy f + b4 (f_xx + f_yy) + b5 (dxx f_xx + dyy f_yy)
//! ```
//!
//! where `dxx`, `dyy` are the three-point second differences and `f_xx`, `f_yy`
//! are analytic derivatives of the source. The new scheme pushes the
//! wavenumber-dependent part of the sixth-order truncation error into the
//! coefficients; the baseline is the classical sixth-order compact scheme
//! (`b2 = 0`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::Grid2D;
use crate::scalar::{Real, Scalar};
use crate::stencil::{self, CompactStencil, SourceBundle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind2D {
    NewSixth2D,
    BaselineSixth2D,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilCoeffs2D<T> {
    pub kind: SchemeKind2D,
    pub alpha1: T,
    pub alpha2: T,
    pub alpha3: T,
    pub beta1: T,
    pub beta2: T,
    pub beta3: T,
    pub beta4: T,
    pub beta5: T,
    pub wavenumber: T,
    pub h: T,
}

/// Matrix-row weights (`h^2`-scaled, positive diagonal) of the 9-point
/// operator: `center U + edge (sum of 4 axis neighbours) + corner (sum of 4
/// diagonal neighbours) = -h^2 (right side)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilWeights2D<T> {
    pub center: T,
    pub edge: T,
    pub corner: T,
    pub rhs: RhsWeights2D<T>,
}

/// Right-side weights: `f` at the 9 points, and `f_xx`/`f_yy` at the centre and
/// the two neighbours along the matching axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsWeights2D<T> {
    pub f_center: T,
    pub f_edge: T,
    pub f_corner: T,
    pub d2_center: T,
    pub d2_axial: T,
}

fn frac<T: Scalar>(n: i64, d: i64) -> T {
    T::ratio(n, d)
}

pub fn coeffs_2d<T: Scalar>(kind: SchemeKind2D, wavenumber: T, h: T) -> StencilCoeffs2D<T> {
    let one = T::one();
    let h2 = h * h;
    let h4 = h2 * h2;
    let x = wavenumber * wavenumber * h2;
    let x2 = x * x;
    let zeroth = one - x / T::from_int(12) + x2 / T::from_int(360);
    match kind {
        SchemeKind2D::NewSixth2D => StencilCoeffs2D {
            kind,
            alpha1: one + x2 * x / T::from_int(20160),
            alpha2: h2 * (one + x / T::from_int(30) + x2 / T::from_int(840)) / T::from_int(6),
            alpha3: zeroth,
            beta1: zeroth,
            beta2: x2 * h2 / T::from_int(20160),
            beta3: h4 * (one + x / T::from_int(112)) / T::from_int(90),
            beta4: h2 * (one - x / T::from_int(30)) / T::from_int(12),
            beta5: h4 * (one - x / T::from_int(56)) / T::from_int(360),
            wavenumber,
            h,
        },
        SchemeKind2D::BaselineSixth2D => StencilCoeffs2D {
            kind,
            alpha1: one,
            alpha2: h2 * (one + x / T::from_int(30)) / T::from_int(6),
            alpha3: one - x / T::from_int(12) * (one - x / T::from_int(30)),
            beta1: one - x / T::from_int(12) * (one - x / T::from_int(30)),
            beta2: T::zero(),
            beta3: h4 / T::from_int(90),
            beta4: h2 * (one - x / T::from_int(30)) / T::from_int(12),
            beta5: h4 / T::from_int(360),
            wavenumber,
            h,
        },
    }
}

pub fn stencil_weights_2d<T: Scalar>(c: &StencilCoeffs2D<T>) -> StencilWeights2D<T> {
    let h2 = c.h * c.h;
    let x = c.wavenumber * c.wavenumber * h2;
    let two = frac::<T>(2, 1);
    let four = frac::<T>(4, 1);
    let q = c.alpha2 / h2;
    let r2 = c.beta2 / h2;
    let r3 = c.beta3 / (h2 * h2);
    StencilWeights2D {
        center: four * c.alpha1 - four * q - x * c.alpha3,
        edge: two * q - c.alpha1,
        corner: -q,
        rhs: RhsWeights2D {
            f_center: c.beta1 - four * r2 + four * r3,
            f_edge: r2 - two * r3,
            f_corner: r3,
            d2_center: c.beta4 - two * c.beta5 / h2,
            d2_axial: c.beta5 / h2,
        },
    }
}

impl<T: Scalar> StencilWeights2D<T> {
    pub fn compact(&self) -> CompactStencil<T> {
        let r = &self.rhs;
        CompactStencil {
            lhs: [self.center, self.edge, self.corner, T::zero()],
            f: [r.f_center, r.f_edge, r.f_corner, T::zero()],
            d2_center: r.d2_center,
            d2_axial: r.d2_axial,
        }
    }
}

fn check_spacing<T: Real>(c: &StencilCoeffs2D<T>, grid: &Grid2D<T>) -> Result<()> {
    if (c.h - grid.h()).abs() > T::from_f64(1e-12) * grid.h() {
        return Err(Error::Config(format!(
            "coefficients built for h = {} but grid has h = {}",
            c.h,
            grid.h()
        )));
    }
    Ok(())
}

/// `h^2 L U` at every interior node in row order; bit-for-bit the same sums
/// as the assembled matrix when the boundary values of `u` are zero.
pub fn apply_operator_scaled_2d<T: Real>(
    c: &StencilCoeffs2D<T>,
    grid: &Grid2D<T>,
    u: &NodeField<T, 2>,
) -> Result<Vec<T>> {
    check_spacing(c, grid)?;
    stencil::apply_interior(&stencil_weights_2d(c).compact(), grid, u)
}

/// `L U` at every interior node, `L = -(a1 (dxx + dyy) + a2 dxx dyy + K^2 a3)`.
pub fn apply_operator_2d<T: Real>(
    c: &StencilCoeffs2D<T>,
    grid: &Grid2D<T>,
    u: &NodeField<T, 2>,
) -> Result<Vec<T>> {
    let scaled = apply_operator_scaled_2d(c, grid, u)?;
    Ok(stencil::unscale(grid.h(), &scaled))
}

/// Right side of the scheme at every interior node in row order.
pub fn rhs_2d<T: Real>(
    c: &StencilCoeffs2D<T>,
    grid: &Grid2D<T>,
    src: &SourceBundle<T, 2>,
) -> Result<Vec<T>> {
    check_spacing(c, grid)?;
    stencil::rhs_interior(&stencil_weights_2d(c).compact(), grid, src)
}
