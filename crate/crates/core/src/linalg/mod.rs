//! Dense complex matrices and Hermitian spectral calculus.

mod eigen;
mod matrix;

pub use eigen::{abs_matrix, herm_eig, null_space, op_norm, psd_sqrt, EigDecomp};
pub use matrix::{vec_dot, vec_norm, CMatrix};

pub use num_complex::Complex64;
