//! Numerical tolerances shared by the kernels and the checkers.
//!
//! Relative tolerances are scaled by the norm of the input and floored at
//! [`ABS_FLOOR`].

/// Absolute floor under every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;

/// Hermitian-ness of eigensolver inputs, relative to the Frobenius norm.
pub const HERMITIAN: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius mass is below this times the input norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues down to `-PSD_CLAMP * ||m||` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-9;

/// Block-level comparisons (centrality, unitarity, homomorphism identities).
pub const EXACT: f64 = 1e-10;

/// Finsler condition (2) and central homogeneity residuals.
pub const AXIOM: f64 = 1e-9;

/// Kernel certificate and round-trip comparisons.
pub const CERTIFICATE: f64 = 1e-8;

/// Parallelogram defect at or below which polarization is accepted.
pub const HILBERT_ACCEPT: f64 = 1e-8;

/// Parallelogram defect at or above which polarization is refused.
pub const HILBERT_REJECT: f64 = 1e-4;

#[inline]
pub(crate) fn scaled(rel: f64, scale: f64) -> f64 {
    let t = rel * scale;
    if t > ABS_FLOOR {
        t
    } else {
        ABS_FLOOR
    }
}
