//! Gaussian sampling primitives shared by the generators and the checkers.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{AlgElement, FdAlgebra};
use crate::linalg::{herm_eig, CMatrix};

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn real_gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

pub fn index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = crate::linalg::vec_norm(&v);
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-ish unitary: eigenvectors of a random Hermitian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    herm_eig(&h)
        .expect("Hermitian part of a finite matrix")
        .eigenvectors
}

/// Element with standard complex Gaussian entries in every block.
pub fn gaussian_element<R: Rng + ?Sized>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    AlgElement::from_blocks_unchecked(
        algebra
            .block_dims()
            .iter()
            .map(|&n| gaussian_matrix(rng, n, n))
            .collect(),
    )
}

/// Positive element `g g^*` with Gaussian `g`.
pub fn positive_element<R: Rng + ?Sized>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    let g = gaussian_element(rng, algebra);
    &g * &g.adjoint()
}

/// Central element: a random complex scalar on each block.
pub fn central_element<R: Rng + ?Sized>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    AlgElement::from_blocks_unchecked(
        algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::scalar(n, complex_gaussian(rng)))
            .collect(),
    )
}
