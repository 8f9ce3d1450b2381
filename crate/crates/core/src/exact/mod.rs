//! Exact scalars, matrices and polynomials over Q, Q(√2) and Q(√5).

pub mod det;
pub mod matrix;
pub mod poly;
pub mod qint;
pub mod quad;

pub use det::poly_det;
pub use matrix::Matrix;
pub use poly::{MultiPoly, TermJson, UniPoly};
pub use qint::{QInt, ZMat};
pub use quad::{QuadField, QuadScalar, ScalarJson};
