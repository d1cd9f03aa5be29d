//! Compact sixth-order finite-difference schemes for the Helmholtz equation
//! `Δu + K²u = f` in two and three dimensions.
//!
//! The pipeline is problem → grid → stencil coefficients → assembled sparse
//! system (Dirichlet values moved to the right side, Neumann ghosts
//! eliminated) → BiCGstab(2) or direct solve → error norms. Everything is
//! generic over the scalar through [`scalar::Real`]; the aliases below fix it
//! to `f64`.

pub mod error;
pub mod field;
pub mod grid;
pub mod problems;
pub mod scalar;
pub mod schemes2d;
pub mod schemes3d;
pub mod stencil;
pub mod assembly;
pub mod boundary;
pub mod sparse;
pub mod solver;
pub mod metrics;
pub mod experiment;
pub mod analysis;

pub use error::{Error, Result};

pub type Grid2 = grid::Grid2D<f64>;
pub type Grid3 = grid::Grid3D<f64>;
pub type Field2 = field::NodeField2<f64>;
pub type Field3 = field::NodeField3<f64>;
pub type Problem2 = problems::Problem2D<f64>;
pub type Problem3 = problems::Problem3D<f64>;
pub type Coeffs2 = schemes2d::StencilCoeffs2D<f64>;
pub type Coeffs3 = schemes3d::StencilCoeffs3D<f64>;
pub type Weights2 = schemes2d::StencilWeights2D<f64>;
pub type Weights3 = schemes3d::StencilWeights3D<f64>;
pub type Matrix = sparse::CsrMatrix<f64>;
pub type System = sparse::SparseSystem<f64>;
pub type Assembled2 = assembly::Assembled<f64, 2>;
pub type Assembled3 = assembly::Assembled<f64, 3>;
pub type Solver = solver::SolverConfig<f64>;
pub type Report = solver::SolveReport<f64>;
