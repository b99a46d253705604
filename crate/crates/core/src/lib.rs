//! B-spline basis functions, exact basis matrices and curve evaluation.
//!
//! The numeric core is generic over [`Scalar`], implemented for `f32`, `f64`
//! and the arbitrary-precision [`Rational`]. Basis matrices are normally built
//! over `Rational` and rounded once for floating-point evaluation.
//!
//! ```
//! use bspline_core::{uniform_basis_matrix, Rational, Curve};
//!
//! let m = uniform_basis_matrix::<Rational>(3).unwrap();
//! assert_eq!(m.entry(0, 1).to_string(), "2/3");
//!
//! let curve = Curve::from_float_knots(
//!     3,
//!     &[0., 1., 2., 3., 4., 5., 6., 7.],
//!     vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
//! )
//! .unwrap();
//! assert_eq!(curve.eval_matrix(&3.5).unwrap(), vec![1.5]);
//! ```

pub mod basismatrix;
pub mod cli;
pub mod coxdeboor;
pub mod curve;
pub mod error;
pub mod knots;
pub mod polytoeplitz;
pub mod scalar;

pub use basismatrix::{
    basis_row, cumulative_matrix, general_basis_matrix, general_basis_matrix_by_products,
    lambda_weights, uniform_basis_matrix, BasisMatrix, CumulativeBasisMatrix, MAX_DEGREE,
};
pub use curve::SplineCurve;
pub use error::{Error, Result};
pub use knots::{KnotVector, LocalCoefficients, SpanIndex};
pub use polytoeplitz::{poly_mul, toeplitz_from_poly, PowerPoly, ToeplitzLT};
pub use scalar::{parse_rational, Rational, Scalar};

pub type RationalKnots = KnotVector<Rational>;
pub type FloatKnots = KnotVector<f64>;
pub type RationalBasisMatrix = BasisMatrix<Rational>;
pub type FloatBasisMatrix = BasisMatrix<f64>;
pub type RationalCumulativeMatrix = CumulativeBasisMatrix<Rational>;
pub type RationalPoly = PowerPoly<Rational>;
pub type Curve = SplineCurve<f64>;
pub type Curve32 = SplineCurve<f32>;
