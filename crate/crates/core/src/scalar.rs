//! Scalar abstractions.
//!
//! Coefficient and stencil-weight formulas only need field arithmetic, so they
//! are written against [`Scalar`], which exact rationals also implement. Anything
//! touching transcendental functions, norms or iterative solvers uses [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, Num};

/// Field-like scalar usable by the coefficient formulas.
pub trait Scalar: Copy + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// The exact (or correctly rounded) value of `num / den`.
    fn ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Scalar for Ratio<i128> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

/// Floating-point scalar used for grids, sampled fields and solvers.
pub trait Real:
    Scalar + Float + FloatConst + Display + LowerExp + Sum + AddAssign + SubAssign + MulAssign
{
    fn from_f64(x: f64) -> Self;

    fn as_f64(self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::ratio(n as i64, 1)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }
}
