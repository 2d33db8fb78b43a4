//! Hermitian spectral calculus built on cyclic complex Jacobi rotations.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::tolerance::{self, scaled};

/// Spectral decomposition `M = V diag(eigenvalues) V^*`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: CMatrix,
}

impl EigDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Lambda) V^*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if fl[k] != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Inputs whose Hermitian defect exceeds `1e-12 * ||m||_F` (floored at
/// `1e-12`) are rejected; smaller asymmetry is removed by taking the
/// Hermitian part before rotating.
pub fn herm_eig(m: &CMatrix) -> Result<EigDecomp> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let fro = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > scaled(tolerance::HERMITIAN, fro) {
        return Err(Error::NotHermitian { defect });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = tolerance::JACOBI_OFF_DIAGONAL * fro;

    let mut converged = false;
    for _ in 0..tolerance::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence {
            sweeps: tolerance::JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigDecomp {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    Float::sqrt(acc)
}

/// One two-sided rotation annihilating `a[p, q]`.
///
/// With `a[p, q] = r e^{i phi}` the rotation is `G = diag(1, e^{-i phi}) R`
/// where `R` is the real Jacobi rotation of `[[a_pp, r], [r, a_qq]]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + Float::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + Float::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / Float::sqrt(t * t + 1.0);
    let s = t * c;
    let pc = phase.conj();
    let n = a.rows();

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * pc * s;
        a[(k, q)] = akp * s + akq * pc * c;
    }
    // A <- G^* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * pc * s;
        v[(k, q)] = vkp * s + vkq * pc * c;
    }
}

/// Square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-9 ||m||, 0)` are clamped to zero; anything more
/// negative is reported as [`Error::NotPsd`].
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    let scale = eig.max_abs_eigenvalue();
    let min = eig.min_eigenvalue();
    if min < -scaled(tolerance::PSD_CLAMP, scale) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    // roundoff-level eigenvalues count as exact zeros
    let floor = 8.0 * f64::EPSILON * m.rows() as f64 * scale;
    Ok(eig.map(|l| if l > floor { Float::sqrt(l) } else { 0.0 }))
}

/// Orthonormal basis of the numerical null space of `m`, as columns.
///
/// Singular values below `rel * ||m||` count as zero.
pub fn null_space(m: &CMatrix, rel: f64) -> Result<CMatrix> {
    let n = m.cols();
    if m.rows() == 0 {
        return Ok(CMatrix::identity(n));
    }
    let eig = herm_eig(&(&m.adjoint() * m))?;
    let top = eig.max_abs_eigenvalue();
    let cut = (rel * rel * top).max(tolerance::ABS_FLOOR * tolerance::ABS_FLOOR);
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] <= cut).collect();
    Ok(CMatrix::from_fn(n, keep.len(), |i, j| {
        eig.eigenvectors[(i, keep[j])]
    }))
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    if m.is_square() && m.hermitian_defect() == 0.0 {
        return Ok(herm_eig(m)?.max_abs_eigenvalue());
    }
    // Gram matrix of the smaller side.
    let gram = if m.rows() <= m.cols() {
        m * &m.adjoint()
    } else {
        &m.adjoint() * m
    };
    let top = herm_eig(&gram)?.eigenvalues[0];
    Ok(Float::sqrt(top.max(0.0)))
}

/// `|m| = (m m^*)^{1/2}`.
pub fn abs_matrix(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    psd_sqrt(&(m * &m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(m: &CMatrix, eig: &EigDecomp) -> f64 {
        eig.reconstruct().distance(m) / (1.0 + m.frobenius_norm())
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = herm_eig(&CMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        let v = &eig.eigenvectors;
        assert!((&v.adjoint() * v).distance(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn diagonal_eigenvalues_sorted_descending() {
        let m = CMatrix::diag_real(&[-1.0, 3.0]);
        let eig = herm_eig(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, -1.0]);
        assert!((eig.eigenvector(0)[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swap_matrix_spectrum() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = herm_eig(&m).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
        let v0 = eig.eigenvector(0);
        // (1, 1)/sqrt 2 up to phase
        assert!((v0[0].norm() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((v0[0] - v0[1]).norm() < 1e-14);
        assert!(residual(&m, &eig) < 1e-14);
    }

    #[test]
    fn complex_hermitian_eigenpairs() {
        let m = CMatrix::from_rows(&[
            &[c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            &[c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            &[c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ]);
        let eig = herm_eig(&m).unwrap();
        for k in 0..3 {
            let v = eig.eigenvector(k);
            let mv = m.apply(&v);
            let r: Vec<Complex64> = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| a - b * eig.eigenvalues[k])
                .collect();
            assert!(vec_norm(&r) < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
        let mut bad = CMatrix::identity(2);
        bad[(0, 0)] = c(f64::INFINITY, 0.0);
        assert_eq!(herm_eig(&bad).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn sqrt_of_diagonal_and_zero() {
        let s = psd_sqrt(&CMatrix::diag_real(&[4.0, 9.0])).unwrap();
        assert!(s.distance(&CMatrix::diag_real(&[2.0, 3.0])) < 1e-15);
        let z = psd_sqrt(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(z, CMatrix::zeros(3, 3));
    }

    #[test]
    fn sqrt_of_two_one_matrix() {
        // eigenvalues 3 and 1 on (1, +-1)/sqrt 2
        let m = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = psd_sqrt(&m).unwrap();
        let r3 = 3f64.sqrt();
        let expected = CMatrix::from_real_rows(&[
            &[(r3 + 1.0) / 2.0, (r3 - 1.0) / 2.0],
            &[(r3 - 1.0) / 2.0, (r3 + 1.0) / 2.0],
        ]);
        assert!(s.distance(&expected) < 1e-14);
        assert!((&s * &s).distance(&m) < 1e-13);
    }

    #[test]
    fn sqrt_rejects_negative_spectrum() {
        let m = CMatrix::diag_real(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotPsd { .. })));
        // roundoff-sized negativity is clamped
        let m = CMatrix::diag_real(&[1.0, -1e-12]);
        assert!(psd_sqrt(&m).is_ok());
    }

    #[test]
    fn op_norm_examples() {
        assert_eq!(op_norm(&CMatrix::diag_real(&[1.0, -3.0])).unwrap(), 3.0);
        assert_eq!(op_norm(&CMatrix::zeros(2, 2)).unwrap(), 0.0);
        let s = 0.5f64.sqrt();
        let xi = [c(s, 0.0), c(0.0, s)];
        let zeta = [c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.8)];
        let rank_one = CMatrix::outer(&xi, &zeta);
        assert!((op_norm(&rank_one).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn abs_examples() {
        let p = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(abs_matrix(&p).unwrap().distance(&p) < 1e-13);
        let d = abs_matrix(&CMatrix::diag_real(&[-2.0, 5.0])).unwrap();
        assert!(d.distance(&CMatrix::diag_real(&[2.0, 5.0])) < 1e-14);
        // b = xi zeta^*, xi orthogonal to zeta: |b| = xi xi^*
        let xi = [c(1.0, 0.0), c(0.0, 0.0)];
        let zeta = [c(0.0, 0.0), c(0.0, 1.0)];
        let b = CMatrix::outer(&xi, &zeta);
        let abs = abs_matrix(&b).unwrap();
        assert!(abs.distance(&CMatrix::outer(&xi, &xi)) < 1e-15);
    }
}
