//! Small dense complex linear algebra (qubit and two-qubit sizes) and a
//! fixed-step RK4 integrator for linear systems.

mod eigen;
mod matrix;
mod ode;

pub use eigen::{hermitian_eigendecompose, psd_sqrt, EigenSystem};
pub use matrix::{kron2, ComplexMatrix, Matrix2, Matrix4};
pub use ode::rk4_linear;

pub use num_complex::Complex64 as C64;

/// Default Hermiticity tolerance for eigendecomposition inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below `-PSD_REJECT` mean the input is not PSD.
pub const PSD_REJECT: f64 = 1e-6;
