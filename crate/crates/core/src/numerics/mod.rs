//! Dense linear-algebra kernels the rest of the crate builds on: SPD
//! log-determinant and solves, symmetric eigendecomposition, singular
//! values, sphere projection, and the binary matrix format.
//!
//! All operations are pure functions on immutable inputs.

pub mod eigen;
pub mod factor;
pub mod io;
pub mod matrix;
pub mod svd;

pub use eigen::symmetric_eigen;
pub use factor::{logdet_spd, spd_solve, CholeskyFactor};
pub use matrix::{sphere_project_columns, vec_dot, vec_norm, DenseMatrix, SPHERE_FLOOR};
pub use svd::singular_values;
