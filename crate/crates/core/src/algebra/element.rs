use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{abs_matrix, herm_eig, op_norm, psd_sqrt, CMatrix};
use crate::tolerance;

/// A finite-dimensional C*-algebra `M_{n_1} + ... + M_{n_m}`, up to isomorphism.
///
/// The empty block list is the zero algebra, which appears as a quotient by
/// the whole algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    block_dims: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.contains(&0) {
            return Err(Error::ConfigInvalid(
                "block dimensions must be positive".into(),
            ));
        }
        Ok(Self { block_dims })
    }

    pub fn zero() -> Self {
        Self {
            block_dims: Vec::new(),
        }
    }

    /// `C^n`, the functions on an `n`-point space.
    pub fn commutative(n: usize) -> Self {
        Self {
            block_dims: alloc::vec![1; n],
        }
    }

    pub fn matrix(n: usize) -> Self {
        Self {
            block_dims: alloc::vec![n],
        }
    }

    #[inline]
    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    #[inline]
    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn is_zero(&self) -> bool {
        self.block_dims.is_empty()
    }

    /// Complex dimension `sum n_k^2`.
    pub fn dimension(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Size of the block-diagonal matrix realization, `sum n_k`.
    pub fn matrix_size(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&n| n == 1)
    }

    pub fn one_dim_blocks(&self) -> Vec<usize> {
        (0..self.num_blocks())
            .filter(|&k| self.block_dims[k] == 1)
            .collect()
    }

    /// The algebra formed by the listed blocks, in the given order.
    pub fn restrict(&self, blocks: &[usize]) -> Self {
        Self {
            block_dims: blocks.iter().map(|&k| self.block_dims[k]).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut block_dims = self.block_dims.clone();
        block_dims.extend_from_slice(&other.block_dims);
        Self { block_dims }
    }
}

/// An element of an [`FdAlgebra`]: one square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    blocks: Vec<CMatrix>,
}

impl AlgElement {
    pub fn from_blocks(algebra: &FdAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::AlgebraMismatch);
        }
        for (b, &n) in blocks.iter().zip(algebra.block_dims()) {
            if b.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: (n, n),
                    got: b.shape(),
                });
            }
            if !b.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { blocks })
    }

    /// Caller guarantees square blocks.
    pub(crate) fn from_blocks_unchecked(blocks: Vec<CMatrix>) -> Self {
        debug_assert!(blocks.iter().all(|b| b.is_square()));
        Self { blocks }
    }

    /// Inverse of [`AlgElement::flatten`].
    pub fn unflatten(algebra: &FdAlgebra, coords: &[Complex64]) -> Result<Self> {
        let expected = algebra.dimension();
        if coords.len() != expected {
            return Err(Error::RankMismatch {
                expected,
                got: coords.len(),
            });
        }
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(algebra.num_blocks());
        for &n in algebra.block_dims() {
            blocks.push(CMatrix::new(n, n, coords[offset..offset + n * n].to_vec())?);
            offset += n * n;
        }
        Ok(Self { blocks })
    }

    /// Blocks in order, each row-major.
    pub fn flatten(&self) -> Vec<Complex64> {
        self.blocks
            .iter()
            .flat_map(|b| b.as_slice().iter().copied())
            .collect()
    }

    pub fn zero(algebra: &FdAlgebra) -> Self {
        Self {
            blocks: algebra
                .block_dims()
                .iter()
                .map(|&n| CMatrix::zeros(n, n))
                .collect(),
        }
    }

    pub fn one(algebra: &FdAlgebra) -> Self {
        Self::scalar(algebra, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(algebra: &FdAlgebra, z: Complex64) -> Self {
        Self {
            blocks: algebra
                .block_dims()
                .iter()
                .map(|&n| CMatrix::scalar(n, z))
                .collect(),
        }
    }

    /// Element of `C^n` with the given entries.
    pub fn diagonal(values: &[Complex64]) -> Self {
        Self {
            blocks: values.iter().map(|&z| CMatrix::scalar(1, z)).collect(),
        }
    }

    /// Central element equal to `values[k] * 1` on block `k`.
    pub fn central(algebra: &FdAlgebra, values: &[Complex64]) -> Self {
        assert_eq!(values.len(), algebra.num_blocks());
        Self {
            blocks: algebra
                .block_dims()
                .iter()
                .zip(values)
                .map(|(&n, &z)| CMatrix::scalar(n, z))
                .collect(),
        }
    }

    pub fn algebra(&self) -> FdAlgebra {
        FdAlgebra {
            block_dims: self.blocks.iter().map(|b| b.rows()).collect(),
        }
    }

    pub fn belongs_to(&self, algebra: &FdAlgebra) -> bool {
        self.blocks.len() == algebra.num_blocks()
            && self
                .blocks
                .iter()
                .zip(algebra.block_dims())
                .all(|(b, &n)| b.rows() == n)
    }

    #[inline]
    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    #[inline]
    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut CMatrix {
        &mut self.blocks[k]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.shape() == b.shape())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.scale(z)).collect(),
        }
    }

    pub fn scale_real(&self, t: f64) -> Self {
        self.scale(Complex64::new(t, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| op_norm(b).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Norm of the restriction to the listed blocks.
    pub fn norm_on(&self, blocks: &[usize]) -> f64 {
        blocks
            .iter()
            .map(|&k| op_norm(&self.blocks[k]).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Largest block Frobenius distance; a cheap exact-comparison metric.
    pub fn distance(&self, other: &Self) -> f64 {
        assert!(
            self.same_shape(other),
            "distance between different algebras"
        );
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(CMatrix::is_finite)
    }

    /// `None` when positive, otherwise the first offending block and its
    /// smallest eigenvalue (`-inf` when the block is not even Hermitian).
    pub fn positivity_witness(&self) -> Option<(usize, f64)> {
        let slack = tolerance::PSD_CLAMP * (1.0 + self.norm());
        for (k, b) in self.blocks.iter().enumerate() {
            if b.hermitian_defect() > tolerance::EXACT * (1.0 + b.frobenius_norm()) {
                return Some((k, f64::NEG_INFINITY));
            }
            let min = match herm_eig(&b.hermitian_part()) {
                Ok(eig) => eig.min_eigenvalue(),
                Err(_) => f64::NEG_INFINITY,
            };
            if min < -slack {
                return Some((k, min));
            }
        }
        None
    }

    pub fn is_positive(&self) -> bool {
        self.positivity_witness().is_none()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.hermitian_defect() <= tolerance::EXACT * (1.0 + b.frobenius_norm()))
    }

    /// Blockwise square root of a positive element.
    pub fn sqrt_pos(&self) -> Result<Self> {
        if let Some((block, eigenvalue)) = self.positivity_witness() {
            return Err(Error::NotPositive { block, eigenvalue });
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| psd_sqrt(&b.hermitian_part()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { blocks })
    }

    /// `|x| = (x x^*)^{1/2}`, blockwise.
    pub fn abs(&self) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(abs_matrix)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { blocks })
    }

    /// Every block is a scalar multiple of the identity, to `1e-10`.
    pub fn is_central(&self) -> bool {
        self.blocks.iter().all(|b| {
            let n = b.rows();
            let mean = b.trace() / n as f64;
            b.distance(&CMatrix::scalar(n, mean)) <= tolerance::EXACT * (1.0 + b.frobenius_norm())
        })
    }

    /// `x y - y x`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;

    /// Panics on mismatched algebras; see [`AlgElement::checked_add`].
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.checked_add(rhs).expect("add: algebra mismatch")
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;

    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self.checked_sub(rhs).expect("sub: algebra mismatch")
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;

    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.checked_mul(rhs).expect("mul: algebra mismatch")
    }
}
